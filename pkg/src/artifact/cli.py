"""Command-line front end: ``artifact <group> <command> ...``.

Exit codes: 0 success, 1 failed verification or certification, 2 usage error.

Settings are resolved in this order (first wins): explicit flags, the
``--config`` file, the ``ARTIFACT_PREC_BITS`` environment variable (default
precision only), built-in defaults.  The config file is flat ``key = value``
text; blank lines and ``#`` comments are ignored.  Recognised keys are
``precision_bits``, ``alpha``, ``output_path``, ``seed`` and ``suite``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath

from . import kloosterman as K
from . import partition_engine as P
from . import special_functions as S
from .balls import BallReal

ENV_PREC = "ARTIFACT_PREC_BITS"
MIN_PREC = 64
DEFAULT_PREC = 128

# read once at startup
_ENV_PREC_RAW = os.environ.get(ENV_PREC)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Invalid arguments, configuration or input domain."""


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int | None = None  # None: each command picks its own working precision
    alpha: float = 1.0
    output_path: str | None = None
    seed: int = 0
    suite: str = "all"

    def __post_init__(self) -> None:
        if self.precision_bits is not None and self.precision_bits < MIN_PREC:
            raise UsageError(f"precision_bits must be at least {MIN_PREC}, got {self.precision_bits}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise UsageError(f"alpha must be positive and finite, got {self.alpha}")

    def prec(self, fallback: int = DEFAULT_PREC) -> int:
        return self.precision_bits if self.precision_bits is not None else fallback


_CONFIG_KEYS: dict[str, Callable[[str], object]] = {
    "precision_bits": int,
    "alpha": float,
    "output_path": str,
    "seed": int,
    "suite": str,
}


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines into typed RunConfig fields."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"config line {lineno}: bad value for {key}: {value!r}") from exc
    return out


def _env_precision() -> int | None:
    if _ENV_PREC_RAW is None or not _ENV_PREC_RAW.strip():
        return None
    try:
        return int(_ENV_PREC_RAW)
    except ValueError as exc:
        raise UsageError(f"{ENV_PREC} must be an integer, got {_ENV_PREC_RAW!r}") from exc


def resolve_config(args: argparse.Namespace) -> RunConfig:
    fields: dict = {}
    env_prec = _env_precision()
    if env_prec is not None:
        fields["precision_bits"] = env_prec
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                fields.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    flag_map = {"prec": "precision_bits", "alpha": "alpha", "out": "output_path", "seed": "seed", "suite": "suite"}
    for flag, key in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            fields[key] = value
    return RunConfig(**fields)


# formatting ------------------------------------------------------------------------

def fmt_mpf(x: mpmath.mpf, prec: int) -> str:
    """Decimal string with as many significant digits as ``prec`` bits carry."""
    digits = max(17, int(prec * math.log10(2)) + 1)
    with mpmath.workprec(prec + 10):
        return mpmath.nstr(mpmath.mpf(x), digits, strip_zeros=False, min_fixed=-5, max_fixed=digits)


def fmt_rad(r: float) -> str:
    return f"{float(r):.6e}"


def fmt_float(x: float) -> str:
    return repr(float(x))


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, cfg: RunConfig, out: io.TextIOBase) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


# partition ------------------------------------------------------------------------

def cmd_partition_exact(args, cfg: RunConfig, out) -> int:
    if args.n < 0:
        raise UsageError("n must be non-negative")
    out.write(f"{P.partition_oracle(args.n)}\n")
    return EXIT_OK


def cmd_partition_hrr(args, cfg: RunConfig, out) -> int:
    n = args.n
    if n < 1:
        raise UsageError("n must be at least 1")
    if args.terms is None:
        try:
            res = P.hrr_exact(n, cfg.precision_bits)
        except P.PrecisionError as exc:
            _info(f"certification failed: {exc}")
            return EXIT_FAIL
        record = {
            "n": n,
            "N": res.N,
            "prec_bits": res.prec,
            "partial_mid": fmt_mpf(res.partial.mid_mpf, res.partial.prec),
            "partial_rad": fmt_rad(res.partial.rad_float()),
            "tail_bound": fmt_rad(res.tail),
            "certified": True,
            "value": str(res.value),
        }
    else:
        N = args.terms
        if N < 1:
            raise UsageError("--terms must be at least 1")
        partial = P.hrr_partial_sum(n, N, cfg.precision_bits)
        tail = P.tail_bound(n, N)
        enclosure = partial.rad_float() + tail
        nearest = partial.nearest_integer()
        certified = enclosure < 0.25
        record = {
            "n": n,
            "N": N,
            "prec_bits": partial.prec,
            "partial_mid": fmt_mpf(partial.mid_mpf, partial.prec),
            "partial_rad": fmt_rad(partial.rad_float()),
            "tail_bound": fmt_rad(tail),
            "certified": certified,
            "value": str(nearest) if certified else None,
        }
    _emit(json.dumps(record, indent=2, sort_keys=True) + "\n", cfg, out)
    return EXIT_OK


def cmd_partition_scan(args, cfg: RunConfig, out) -> int:
    lo, hi = args.min, args.max
    if lo < 16 or hi < lo:
        raise UsageError("need 16 <= --min <= --max")
    n_values = P.geometric_n_values(lo, hi) if args.geometric else list(range(lo, hi + 1))
    if not n_values:
        raise UsageError("no powers of two in [--min, --max]")
    result = P.error_exponent_scan(n_values, cfg.alpha)
    _emit(P.scan_to_csv(result), cfg, out)
    slope = "undefined" if result.slope is None else f"{result.slope:.6f}"
    _info(f"points={len(result.records)} slope={slope} {result.note}".rstrip())
    return EXIT_OK


# kloosterman ----------------------------------------------------------------------

A_COLUMNS = ["c", "n", "A_mid", "A_rad", "route"]
PARTIAL_COLUMNS = ["X", "re_mid", "im_mid", "rad"]


def a_rows(c: int, n: int, prec: int) -> list[list[str]]:
    """One row per route; the Dedekind-form radius also covers its imaginary part."""
    rows = []
    d = K.rademacher_A(c, n, prec)
    rows.append([str(c), str(n), fmt_mpf(d.mid_mpf, prec), fmt_rad(d.rad_float()), "definition"])
    z = K.dedekind_form_A(c, n, prec)
    rad = max(z.re.rad_float(), abs(z.im.mid_float()) + z.im.rad_float())
    rows.append([str(c), str(n), fmt_mpf(z.re.mid_mpf, prec), fmt_rad(rad), "dedekind"])
    s = K.selberg_whiteman_A(c, n, prec)
    rows.append([str(c), str(n), fmt_mpf(s.mid_mpf, prec), fmt_rad(s.rad_float()), "selberg"])
    return rows


def cmd_kloosterman_A(args, cfg: RunConfig, out) -> int:
    if args.c < 1:
        raise UsageError("c must be at least 1")
    _emit(_csv_text(A_COLUMNS, a_rows(args.c, args.n, cfg.prec(MIN_PREC))), cfg, out)
    return EXIT_OK


def cmd_kloosterman_sweep(args, cfg: RunConfig, out) -> int:
    if args.cmax < 1 or args.nmax < 0:
        raise UsageError("need --cmax >= 1 and --nmax >= 0")
    prec = cfg.prec(MIN_PREC)
    rows = []
    for c in range(1, args.cmax + 1):
        for n in range(-args.nmax, args.nmax + 1):
            rows += a_rows(c, n, prec)
    _emit(_csv_text(A_COLUMNS, rows), cfg, out)
    return EXIT_OK


def cmd_kloosterman_partial(args, cfg: RunConfig, out) -> int:
    if args.X < 1 or args.every < 1:
        raise UsageError("need X >= 1 and --every >= 1")
    rep = K.kloosterman_partial_sum(args.n, args.X)
    radii = rep.prefix_radii()
    rows = []
    for X in range(1, args.X + 1):
        if X % args.every and X != args.X:
            continue
        z = complex(rep.cumulative[X - 1])
        rows.append([str(X), fmt_float(z.real), fmt_float(z.imag), fmt_rad(radii[X - 1])])
    _emit(_csv_text(PARTIAL_COLUMNS, rows), cfg, out)
    if args.X >= 10:
        _info(f"growth constant C={K.growth_fit(rep):.6f} for |partial| <= C sqrt(X) log X, 10 <= X <= {args.X}")
    return EXIT_OK


# special functions ----------------------------------------------------------------

XI_COLUMNS = ["x", "s_im", "route", "re_mid", "im_mid", "rad"]


def xi_rows(x: float, s_im: float, route: str, prec: int) -> list[list[str]]:
    q = S.XiQuery(x, complex(0.0, s_im), prec)
    rows = []
    if route in ("closed", "both"):
        b = S.xi_closed_form(q)
        rows.append([fmt_float(x), fmt_float(s_im), "closed", fmt_mpf(b.re.mid_mpf, b.prec), fmt_mpf(b.im.mid_mpf, b.prec), fmt_rad(b.rad_float())])
    if route in ("quad", "both"):
        r = S.xi_quadrature(q)
        z = r.value.mid_complex()
        rows.append([fmt_float(x), fmt_float(s_im), "quad", fmt_float(z.real), fmt_float(z.imag), fmt_rad(r.error_estimate)])
    return rows


def cmd_special_xi(args, cfg: RunConfig, out) -> int:
    if args.x == 0 or not math.isfinite(args.x):
        raise UsageError("--x must be finite and nonzero")
    _emit(_csv_text(XI_COLUMNS, xi_rows(args.x, args.s_im, args.route, cfg.prec(MIN_PREC))), cfg, out)
    return EXIT_OK


def cmd_special_bessel(args, cfg: RunConfig, out) -> int:
    if not (args.x > 0 and math.isfinite(args.x)):
        raise UsageError("x must be positive and finite")
    prec = cfg.prec()
    rows = []
    for route, fn in (("auto", S.bessel_I_3_2), ("series", S.bessel_I_3_2_series), ("closed", S.bessel_I_3_2_closed)):
        b: BallReal = fn(args.x, prec)
        rows.append([fmt_float(args.x), route, fmt_mpf(b.mid_mpf, prec), fmt_rad(b.rad_float())])
    _emit(_csv_text(["x", "route", "mid", "rad"], rows), cfg, out)
    return EXIT_OK


# p-adic verification ----------------------------------------------------------------

def cmd_padic_verify(args, cfg: RunConfig, out) -> int:
    from .padic import verify as V

    if cfg.suite != "all" and cfg.suite not in V.SUITES:
        raise UsageError(f"unknown suite {cfg.suite!r}")
    try:
        V.get_model(args.p, args.m)
    except ValueError as exc:
        raise UsageError(f"unsupported model p={args.p} m={args.m}: {exc}") from exc
    reports = V.run_suite(args.p, args.m, cfg.suite, cfg.seed)
    _emit(V.reports_to_json(reports) + "\n", cfg, out)
    ok = True
    for r in reports:
        failed = [i["name"] for i in r.identities if not i["pass"]]
        ok = ok and not failed
        _info(f"{r.suite} p={r.p} m={r.m}: {len(r.identities)} identities, max residual {r.max_residual:.3e}, "
              f"{len(r.documented_discrepancies)} documented discrepancies, {'PASS' if not failed else 'FAIL'}")
        for name in failed:
            _info(f"  failed: {name}")
    return EXIT_OK if ok else EXIT_FAIL


# parser ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="flat key = value file merged under explicit flags")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized verification vectors")
    common.add_argument("--prec", type=int, default=None, metavar="BITS", help=f"working precision in bits (>= {MIN_PREC})")
    common.add_argument("--out", default=None, metavar="FILE", help="write the CSV/JSON output here instead of stdout")

    root = _Parser(prog="artifact", description="Partition series, Kloosterman sums, special functions and p-adic verification suites.")
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    part = groups.add_parser("partition", help="partition numbers and the HRR series").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = part.add_parser("exact", parents=[common], help="p(n) from the exact oracle")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_partition_exact)
    p = part.add_parser("hrr", parents=[common], help="certified HRR series")
    p.add_argument("n", type=int)
    p.add_argument("--terms", type=int, default=None, metavar="N", help="truncate after N terms (default: certifying N)")
    p.set_defaults(func=cmd_partition_hrr)
    p = part.add_parser("scan", parents=[common], help="truncation-error scan to CSV")
    p.add_argument("--min", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--geometric", action="store_true", help="powers of two in [min, max]")
    p.add_argument("--alpha", type=float, default=None, help="truncation N = ceil(alpha sqrt n)")
    p.set_defaults(func=cmd_partition_scan)

    kl = groups.add_parser("kloosterman", help="A_c(n) and Kloosterman partial sums").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = kl.add_parser("A", parents=[common], help="A_c(n) by three routes")
    p.add_argument("c", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_kloosterman_A)
    p = kl.add_parser("sweep", parents=[common], help="A_c(n) table for c <= cmax, |n| <= nmax")
    p.add_argument("--cmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.set_defaults(func=cmd_kloosterman_sweep)
    p = kl.add_parser("partial-sum", parents=[common], help="cumulative sum of S(1, n, c)/c")
    p.add_argument("n", type=int)
    p.add_argument("X", type=int)
    p.add_argument("--every", type=int, default=1, help="emit every k-th row (the last row is always emitted)")
    p.set_defaults(func=cmd_kloosterman_partial)

    sp = groups.add_parser("special", help="archimedean special functions").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sp.add_parser("xi", parents=[common], help="the Fourier profile xi(x) at s = i T")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--s-im", type=float, required=True, dest="s_im")
    p.add_argument("--route", choices=("closed", "quad", "both"), default="both")
    p.set_defaults(func=cmd_special_xi)
    p = sp.add_parser("bessel", parents=[common], help="I_{3/2}(x) by each route")
    p.add_argument("x", type=float)
    p.set_defaults(func=cmd_special_bessel)

    pa = groups.add_parser("padic", help="finite-model verification suites").add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = pa.add_parser("verify", parents=[common], help="run identity suites and write a JSON report")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--suite", choices=("hecke", "adjoint", "basis", "projection", "integrals", "all"), default=None)
    p.set_defaults(func=cmd_padic_verify)
    return root


def main(argv: Sequence[str] | None = None, out: io.TextIOBase | None = None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        cfg = resolve_config(args)
        return args.func(args, cfg, out)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ValueError, P.OracleCapacityError) as exc:
        print(f"artifact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
