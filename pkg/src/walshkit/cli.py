"""Command-line front end: experiment tables as CSV or newline-delimited JSON.

Exit status is 0 on success, 1 on invalid input (or a failed ``verify``
check) and 2 when a request exceeds a resource cap.  Caps refuse; they never
truncate a table.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import __version__
from .dyadic import CapExceeded, Grid1D, Grid2D, subtract, tensor
from .hardy import h1_norm_1d, h1_norm_2d, hp_norm
from .kernels import (
    dirichlet_closed_form,
    dirichlet_recursive,
    lebesgue_sweep,
    minimal_resolution,
)
from .strong import (
    ORACLE_CAP,
    WeightFunction,
    closed_form_partial_sum,
    counterexample,
    divergence_sweep,
    fine_ratios,
)
from .verify import SUITES, run_suite
from .walsh import Spectrum2D, analyze, analyze2d, partial_sum_2d, rademacher, walsh_function

THREADS_ENV = "WALSHKIT_THREADS"
DEFAULT_CAP_2D = 12
DEFAULT_CAP_1D = 24
DEFAULT_LEBESGUE_MAX = 1 << 16


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    output_format: Optional[str] = None
    output_path: Optional[str] = None
    thread_count: Optional[int] = None
    cap_2d: int = DEFAULT_CAP_2D
    cap_1d: int = DEFAULT_CAP_1D

    def __post_init__(self):
        if self.cap_2d < 1 or self.cap_1d < 1:
            raise ValueError("resolution caps must be positive")
        if self.thread_count is not None and self.thread_count < 1:
            raise ValueError("thread count must be a positive integer")

    @property
    def threads(self) -> int:
        if self.thread_count is not None:
            return self.thread_count
        env = os.environ.get(THREADS_ENV)
        if env:
            n = int(env)
            if n < 1:
                raise ValueError(f"{THREADS_ENV} must be a positive integer")
            return n
        return os.cpu_count() or 1


# -- formatting ---------------------------------------------------------------

def _cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_table(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        for row in rows:
            out.write(json.dumps(row) + "\n")
        return
    if not rows:
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for row in rows:
        writer.writerow([_cell(v) for v in row.values()])


def grid_rows(g, index_name: str = "cell_index") -> list[dict]:
    """One row per cell (row-major for 2D) with the exact value split out."""
    rows = []
    for flat, idx in enumerate(_indices(g)):
        v = g[idx]
        rows.append({index_name: flat, "value_numerator": v.numerator,
                     "value_exponent": v.exponent, "value_float": float(v)})
    return rows


def _indices(g) -> Iterable:
    side = g.shape[0]
    if g.ndim == 1:
        return range(side)
    return ((i, j) for i in range(side) for j in range(side))


# -- subcommands ----------------------------------------------------------------

def _need(cond: bool, message: str) -> None:
    if not cond:
        raise CapExceeded(message)


def cmd_lebesgue(cfg: RunConfig) -> list[dict]:
    n_max = cfg.params["max"]
    if n_max < 1:
        raise ValueError("--max must be at least 1")
    limit = min(DEFAULT_LEBESGUE_MAX, 1 << cfg.cap_1d)
    _need(n_max <= limit, f"--max {n_max} exceeds the sweep cap {limit}")
    records, _ = lebesgue_sweep(n_max, threads=cfg.threads)
    return [{"n": r.n, "V": r.variation, "norm_num": r.constant.numerator,
             "norm_exp": r.constant.exponent, "norm_float": r.constant_float,
             "lower_ok": r.lower_ok, "upper_ok": r.upper_ok} for r in records]


def cmd_fine(cfg: RunConfig) -> list[dict]:
    n_max = cfg.params["max_n"]
    variant = cfg.params["variant"]
    _need(n_max <= (1 << cfg.cap_1d), f"--max-n {n_max} exceeds 2^{cfg.cap_1d}")
    pts = cfg.params.get("checkpoints")
    return [{"n": n, "variant": variant, "ratio": r}
            for n, r in fine_ratios(n_max, variant, checkpoints=pts, cap=1 << cfg.cap_1d)]


def cmd_counterexample(cfg: RunConfig) -> list[dict]:
    n_min, n_max = cfg.params["n_min"], cfg.params["n_max"]
    if not 0 <= n_min <= n_max:
        raise ValueError(f"invalid range {n_min}..{n_max}")
    _need(n_max + 1 <= cfg.cap_2d, f"f_(n,n) at n={n_max} needs resolution {n_max + 1} > 2D cap {cfg.cap_2d}")
    rows = []
    for n in range(n_min, n_max + 1):
        f = counterexample(n, cap=cfg.cap_2d)
        spec = analyze2d(f)
        pattern = spec.values.copy()
        pattern[:] = 0
        pattern[1 << n:, 1 << n:] = 1
        rep = h1_norm_2d(f)
        if n <= ORACLE_CAP:
            closed = all(partial_sum_2d(f, k, k) == closed_form_partial_sum(n, k)
                         for k in range((1 << n) + 1, (1 << (n + 1)) + 1))
            closed_cell = closed
        else:
            closed_cell = "skipped"
        rows.append({"n": n, "resolution": n + 1,
                     "l1": str(rep.l1), "h1": str(rep.h1), "h1_float": float(rep.h1),
                     "coefficients_ok": spec == Spectrum2D(pattern),
                     "closed_form_ok": closed_cell})
    return rows


def cmd_divergence(cfg: RunConfig) -> list[dict]:
    p = cfg.params
    phi = WeightFunction(p["phi"], p["alpha"]) if p["phi"] == "power" else WeightFunction(p["phi"])
    _need(p["n_max"] <= min(14, cfg.cap_1d), f"--n-max {p['n_max']} exceeds cap {min(14, cfg.cap_1d)}")
    records = divergence_sweep(p["n_min"], p["n_max"], phi, log_base=p["log_base"],
                               oracle=p["oracle"], threads=cfg.threads,
                               cap=min(14, cfg.cap_1d))
    return [{"n": r.n, "block_sum": r.block_sum, "phi_at_block": r.phi_at_block,
             "ratio": r.ratio, "path": r.path} for r in records]


HARDY_FAMILIES = ("counterexample", "constant", "walsh", "walsh-tensor", "difference", "dirichlet")


def build_family(family: str, n: int, resolution: Optional[int], cap_1d: int, cap_2d: int):
    """Grid for a named function family (shared by ``hardy`` and ``kernel-dump``)."""
    if n < 0:
        raise ValueError("--n must be nonnegative")
    if family == "counterexample":
        _need(n + 1 <= cap_2d, f"f_(n,n) needs resolution {n + 1} > 2D cap {cap_2d}")
        return counterexample(n, cap=cap_2d)
    if family == "dirichlet":
        N = minimal_resolution(n) if resolution is None else resolution
    elif family == "difference":
        N = n + 1 if resolution is None else resolution
    elif family == "rademacher":
        N = n + 1 if resolution is None else resolution
    elif family in ("walsh", "walsh-tensor"):
        N = max(n, 1).bit_length() if resolution is None else resolution
    else:
        N = 0 if resolution is None else resolution
    two_d = family == "walsh-tensor"
    cap = cap_2d if two_d else cap_1d
    _need(N <= cap, f"resolution {N} exceeds {'2D' if two_d else '1D'} cap {cap}")
    if family == "constant":
        return Grid1D([1] * (1 << N))
    if family == "dirichlet":
        return dirichlet_recursive(n, N)
    if family == "difference":
        if n + 1 > N:
            raise ValueError(f"difference kernel needs resolution >= {n + 1}")
        return subtract(dirichlet_closed_form(n + 1, N), dirichlet_closed_form(n, N))
    if family == "rademacher":
        return rademacher(n, N)
    w = walsh_function(n, N)
    return tensor(w, w) if two_d else w


def cmd_hardy(cfg: RunConfig) -> list[dict]:
    p = cfg.params
    g = build_family(p["family"], p["n"], p["resolution"], cfg.cap_1d, cfg.cap_2d)
    rep = h1_norm_2d(g) if isinstance(g, Grid2D) else h1_norm_1d(g)
    row = rep.as_dict()
    if p.get("p") is not None:
        row["hp_float"] = hp_norm(g, p["p"])
    return [row]


def cmd_kernel_dump(cfg: RunConfig) -> list[dict]:
    p = cfg.params
    g = build_family(p["kind"], p["n"], p["resolution"], cfg.cap_1d, cfg.cap_2d)
    if p["spectrum"]:
        s = analyze2d(g) if isinstance(g, Grid2D) else analyze(g)
        return grid_rows(s, index_name="coeff_index")
    return grid_rows(g)


def cmd_verify(cfg: RunConfig) -> list[dict]:
    results = run_suite(cfg.params["suite"], threads=cfg.threads)
    return [{"suite": r.suite, "check": r.name, "passed": r.passed, "detail": r.detail}
            for r in results]


COMMANDS = {
    "lebesgue": cmd_lebesgue,
    "fine": cmd_fine,
    "counterexample": cmd_counterexample,
    "divergence": cmd_divergence,
    "hardy": cmd_hardy,
    "kernel-dump": cmd_kernel_dump,
    "verify": cmd_verify,
}


def _verify_report(rows: list[dict]) -> str:
    lines = [f"{'PASS' if r['passed'] else 'FAIL'} {r['suite']}.{r['check']}: {r['detail']}"
             for r in rows]
    passed = sum(r["passed"] for r in rows)
    lines.append(f"{passed}/{len(rows)} checks passed")
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute one configured command, write its table, return the exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    rows = COMMANDS[cfg.subcommand](cfg)
    buf = io.StringIO()
    if cfg.subcommand == "verify" and cfg.output_format in (None, "text"):
        buf.write(_verify_report(rows))
    else:
        default = "json" if cfg.subcommand == "hardy" else "csv"
        write_table(rows, cfg.output_format or default, buf)
    text = buf.getvalue()
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if cfg.subcommand == "verify" and not all(r["passed"] for r in rows):
        return 1
    return 0


# -- argument parsing ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", choices=("csv", "json", "text"), default=None,
                        help="output format (default csv; json for hardy; text for verify)")
    common.add_argument("--output", default=None, help="write to this file instead of stdout")
    common.add_argument("--threads", type=_positive_int, default=None,
                        help=f"worker threads (default ${THREADS_ENV} or CPU count)")
    common.add_argument("--cap-2d", type=_positive_int, default=DEFAULT_CAP_2D,
                        help="largest resolution for 2D grids")
    common.add_argument("--cap-1d", type=_positive_int, default=DEFAULT_CAP_1D,
                        help="largest resolution for 1D grids and sweeps")

    parser = _Parser(prog="walshkit", description="Exact Walsh-Fourier experiments on the dyadic group.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("lebesgue", parents=[common], help="Lebesgue constants with variation bounds")
    p.add_argument("--max", type=int, default=4096)

    p = sub.add_parser("fine", parents=[common], help="Fine-type averaged ratios at checkpoints")
    p.add_argument("--max-n", type=int, default=1 << 20)
    p.add_argument("--variant", choices=("variation", "lebesgue"), default="variation")
    p.add_argument("--checkpoints", type=int, nargs="+", default=None)

    p = sub.add_parser("counterexample", parents=[common], help="check f_(n,n) coefficients, norms and partial sums")
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, default=6)

    p = sub.add_parser("divergence", parents=[common], help="weighted block sums for f_(n,n)")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=13)
    p.add_argument("--phi", choices=WeightFunction.KINDS, default="log")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--log-base", choices=("e", "2"), default="e")
    p.add_argument("--oracle", action="store_true", help="use full 2D grids (n <= 6)")

    p = sub.add_parser("hardy", parents=[common], help="exact L1 and H1 norms of a function family")
    p.add_argument("--family", choices=HARDY_FAMILIES, default="counterexample")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--p", type=float, default=None, help="also report ||f*||_p as a float")

    p = sub.add_parser("kernel-dump", parents=[common], help="dump a grid or its spectrum cell by cell")
    p.add_argument("--kind", choices=(*HARDY_FAMILIES, "rademacher"), default="dirichlet")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--spectrum", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="run the exact invariant suites")
    p.add_argument("--suite", choices=("all", *SUITES), default="all")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    reserved = {"subcommand", "out", "output", "threads", "cap_2d", "cap_1d"}
    params = {k: v for k, v in vars(args).items() if k not in reserved}
    if args.out == "text" and args.subcommand != "verify":
        raise ValueError("--out text is only available for verify")
    return RunConfig(subcommand=args.subcommand, params=params, output_format=args.out,
                     output_path=args.output, thread_count=args.threads,
                     cap_2d=args.cap_2d, cap_1d=args.cap_1d)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(config_from_args(args))
    except CapExceeded as exc:
        print(f"walshkit: refused: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError) as exc:
        print(f"walshkit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
