"""Backend selection for the integer kernels.

The compiled extension is used when it imports; setting the environment
variable ``ARTIFACT_KERNELS=python`` forces the numpy fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("ARTIFACT_KERNELS", "").lower() == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

dedekind_u = _impl.dedekind_u
dedekind_u_array = _impl.dedekind_u_array
multiplier_table = _impl.multiplier_table
exponent_histogram = _impl.exponent_histogram
kloosterman_block = _impl.kloosterman_block
iwasawa_table = _impl.iwasawa_table

__all__ = [
    "BACKEND",
    "dedekind_u",
    "dedekind_u_array",
    "multiplier_table",
    "exponent_histogram",
    "kloosterman_block",
    "iwasawa_table",
]
