"""Command-line harness: evaluation, convergence studies, zero statistics.

Every command prints one table, either CSV (header row, LF endings) or a JSON
object ``{"config": ..., "rows": [...]}`` (plus ``"summary"`` where noted).
Floats are written with 17 significant digits. Exit status is 0 on success,
1 on usage or validation errors, 2 on numerical failure.
"""

from __future__ import annotations

import argparse
import ast
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import __version__
from .asymptotics import (
    DELTA,
    EvalReport,
    error_inner,
    error_outer,
    error_uniform,
    evaluate,
    phase_maximum_near,
    sum_lemma,
)
from .errors import DomainError, NumericalError
from .recurrence import Params, hermite_window, phi_window
from .scaled import ScaledReal
from .zeros import histogram, zero_report

__all__ = [
    "ConvergenceRow",
    "RunConfig",
    "cmd_convergence",
    "cmd_eval",
    "cmd_hermite_check",
    "cmd_sum_lemma",
    "cmd_sweep",
    "cmd_zeros",
    "main",
]

EVAL_COLUMNS = (
    "n", "N", "t", "x",
    "exact_sign", "exact_log10",
    "uniform_sign", "uniform_log10",
    "outer_sign", "outer_log10",
    "inner_sign", "inner_log10",
    "rel_err_uniform", "rel_err_outer", "rel_err_inner",
)
CONVERGENCE_COLUMNS = (
    "n", "N", "t", "t_eval",
    "err_uniform", "err_outer", "err_inner",
    "ratio_uniform", "ratio_outer", "ratio_inner",
)
HISTOGRAM_COLUMNS = ("bin", "lo", "hi", "centre", "count", "model_count", "model_density")
ZEROS_COLUMNS = ("index", "zero", "rescaled")
ZERO_SUMMARY_COLUMNS = ("n", "m", "c", "ks", "min_rescaled", "max_rescaled")
SUM_LEMMA_COLUMNS = ("n", "x", "lhs", "rhs", "gap", "ratio_to_previous")
HERMITE_COLUMNS = ("x", "n_max", "max_rel_dev", "worst_n")


@dataclass
class RunConfig:
    command: str
    alpha: float = 0.5
    beta: float = 1.5
    n: list[int] = field(default_factory=list)
    t: list[float] = field(default_factory=list)
    scale: str = "N-scaled"
    c: float = 1.0
    bins: int = 64
    table: str = "histogram"
    x_expr: str = "2*sqrt(n)"
    n_max: int = 50
    x_grid: list[float] = field(default_factory=lambda: [0.3, 1.1, 2.7, 5.0])
    t_min: float = 0.1
    t_max: float = 2.0
    t_step: float = 0.01
    format: str = "csv"
    out: Optional[str] = None
    threads: int = 1

    @property
    def params(self) -> Params:
        return Params(self.alpha, self.beta)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    N: float
    t: float
    t_eval: float
    err_uniform: Optional[float]
    err_outer: Optional[float]
    err_inner: Optional[float]
    ratio_uniform: Optional[float]
    ratio_outer: Optional[float]
    ratio_inner: Optional[float]


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# --------------------------------------------------------------------------
# commands


def _t_from_position(cfg: RunConfig, n: int, pos: float) -> float:
    if cfg.scale == "raw":
        return pos / math.sqrt(n + float(cfg.beta) - 1.0)
    return pos


def cmd_eval(cfg: RunConfig) -> list[EvalReport]:
    p = cfg.params
    if not cfg.n or not cfg.t:
        raise DomainError("eval needs at least one n and one position")
    jobs = [(n, _t_from_position(cfg, n, pos)) for n in cfg.n for pos in cfg.t]
    return _pmap(lambda job: evaluate(p, *job), jobs, cfg.threads)


def cmd_sweep(cfg: RunConfig) -> list[EvalReport]:
    if not cfg.t_step > 0 or cfg.t_max < cfg.t_min:
        raise DomainError("sweep needs t_step > 0 and t_max >= t_min")
    count = int(math.floor((cfg.t_max - cfg.t_min) / cfg.t_step + 1e-9)) + 1
    grid = [round(cfg.t_min + i * cfg.t_step, 12) for i in range(count)]
    sub = RunConfig(**{**asdict(cfg), "t": grid, "scale": "N-scaled"})
    return cmd_eval(sub)


def _ratio(prev: Optional[float], cur: Optional[float]) -> Optional[float]:
    if prev is None or cur is None or cur == 0.0:
        return None
    return prev / cur


def _convergence_point(p: Params, n: int, t: float) -> tuple[float, Optional[float], Optional[float], Optional[float]]:
    if not t >= DELTA:
        raise DomainError(f"convergence needs t >= {DELTA}")
    if t >= 1.0 + DELTA:
        return t, error_uniform(p, n, t), error_outer(p, n, t), None
    if t <= 1.0 - DELTA:
        z = phase_maximum_near(p, n, t)
        return z, error_uniform(p, n, z), None, error_inner(p, n, z)
    return t, error_uniform(p, n, t), None, None


def cmd_convergence(cfg: RunConfig) -> list[ConvergenceRow]:
    """Error of each approximation along an n ladder.

    In the oscillatory region errors are taken at the phase maximum of the
    inner formula nearest t (column t_eval), where the envelope-relative error
    is not polluted by a nearby zero. Ratios are previous error / current.
    """
    p = cfg.params
    ns = list(cfg.n)
    if not ns or any(n < 50 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("n list must be strictly increasing with every n >= 50")
    if not cfg.t:
        raise DomainError("convergence needs at least one t")
    jobs = [(n, t) for t in cfg.t for n in ns]
    pts = _pmap(lambda job: _convergence_point(p, *job), jobs, cfg.threads)
    rows = []
    prev = None
    for (n, t), (t_eval, eu, eo, ei) in zip(jobs, pts):
        if prev is not None and prev.t != t:
            prev = None
        row = ConvergenceRow(
            n=n,
            N=n + float(p.beta) - 1.0,
            t=t,
            t_eval=t_eval,
            err_uniform=eu,
            err_outer=eo,
            err_inner=ei,
            ratio_uniform=_ratio(prev.err_uniform, eu) if prev else None,
            ratio_outer=_ratio(prev.err_outer, eo) if prev else None,
            ratio_inner=_ratio(prev.err_inner, ei) if prev else None,
        )
        rows.append(row)
        prev = row
    return rows


def cmd_zeros(cfg: RunConfig):
    """(ZeroReport, histogram tuple) for one n."""
    if len(cfg.n) != 1 or cfg.n[0] < 2:
        raise DomainError("zeros needs a single n >= 2")
    if not cfg.c > 0:
        raise DomainError("c must be positive")
    rep = zero_report(cfg.params, cfg.n[0], cfg.c, workers=cfg.threads)
    return rep, histogram(rep.rescaled, cfg.c, bins=cfg.bins)


_ALLOWED_BINOPS = {ast.Add: float.__add__, ast.Sub: float.__sub__, ast.Mult: float.__mul__,
                   ast.Div: float.__truediv__, ast.Pow: float.__pow__}


def eval_x_expression(expr: str, n: int) -> float:
    """Evaluate a small arithmetic expression in n, e.g. '2*sqrt(n)'."""

    def ev(node) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "n":
            return float(n)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BINOPS:
            return _ALLOWED_BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id == "sqrt" and len(node.args) == 1 and not node.keywords):
            return math.sqrt(ev(node.args[0]))
        raise DomainError(f"unsupported expression element in {expr!r}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise DomainError(f"bad x expression {expr!r}: {exc.msg}") from None
    return ev(tree)


def cmd_sum_lemma(cfg: RunConfig) -> list[tuple]:
    if not cfg.n:
        raise DomainError("sum-lemma needs at least one n")
    beta = float(cfg.beta)
    jobs = [(n, eval_x_expression(cfg.x_expr, n)) for n in cfg.n]
    sides = _pmap(lambda job: sum_lemma(beta, *job), jobs, cfg.threads)
    rows = []
    prev_gap = None
    for (n, x), (lhs, rhs) in zip(jobs, sides):
        gap = abs(lhs - rhs)
        rows.append((n, x, lhs, rhs, gap, _ratio(prev_gap, gap)))
        prev_gap = gap
    return rows


def _hermite_dev(p: Params, n: int, x: float) -> float:
    phi = phi_window(p, n, x)[0]
    h, h_prev = hermite_window(n, x)
    env = max(abs(h), abs(h_prev), key=lambda v: v.log())
    return (phi - h).ratio(env)


def cmd_hermite_check(cfg: RunConfig) -> list[tuple]:
    """Deviation of phi_n (alpha=1/2, beta=3/2) from the normalised Hermite values.

    Deviation is measured against max(|h_n|, |h_{n-1}|), the size of the
    recurrence window, so it stays meaningful at zeros of h_n.
    """
    if cfg.n_max < 0:
        raise DomainError("n_max must be >= 0")
    p = Params(0.5, 1.5)
    rows = []
    for x in cfg.x_grid:
        devs = _pmap(lambda n: _hermite_dev(p, n, x), list(range(cfg.n_max + 1)), cfg.threads)
        worst = max(range(len(devs)), key=devs.__getitem__)
        rows.append((x, cfg.n_max, devs[worst], worst))
    return rows


# --------------------------------------------------------------------------
# output


def _sr_cols(v: Optional[ScaledReal]) -> tuple:
    if v is None:
        return (None, None)
    return (v.sign, v.log10() if v.sign else None)


def eval_row(r: EvalReport, beta: float) -> tuple:
    return (
        r.n, r.n + float(beta) - 1.0, r.t, r.x,
        *_sr_cols(r.exact), *_sr_cols(r.airy_uniform), *_sr_cols(r.outer), *_sr_cols(r.inner),
        r.rel_err_uniform, r.rel_err_outer, r.rel_err_inner,
    )


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "item"):  # numpy scalar
        return _clean(v.item())
    return v


def _fmt_csv(v) -> str:
    v = _clean(v)
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_table(columns: Sequence[str], rows: Iterable[Sequence], fmt: str, config: dict,
                stream, summary: Optional[dict] = None) -> None:
    rows = [tuple(_clean(v) for v in row) for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt_csv(v) for v in row) + "\n")
        stream.write(buf.getvalue())
        return
    doc = {"config": config, "rows": [dict(zip(columns, row)) for row in rows]}
    if summary is not None:
        doc["summary"] = {k: _clean(v) for k, v in summary.items()}
    stream.write(json.dumps(doc, allow_nan=False) + "\n")


def _config_dict(cfg: RunConfig) -> dict:
    keys = {
        "eval": ("command", "alpha", "beta", "n", "t", "scale", "threads"),
        "sweep": ("command", "alpha", "beta", "n", "t_min", "t_max", "t_step", "threads"),
        "convergence": ("command", "alpha", "beta", "n", "t", "threads"),
        "zeros": ("command", "alpha", "beta", "n", "c", "bins", "table", "threads"),
        "sum-lemma": ("command", "beta", "n", "x_expr", "threads"),
        "hermite-check": ("command", "n_max", "x_grid", "threads"),
    }[cfg.command]
    d = asdict(cfg)
    return {k: d[k] for k in keys}


def run(cfg: RunConfig, stream) -> None:
    conf = _config_dict(cfg)
    if cfg.command in ("eval", "sweep"):
        reports = cmd_eval(cfg) if cfg.command == "eval" else cmd_sweep(cfg)
        write_table(EVAL_COLUMNS, [eval_row(r, cfg.beta) for r in reports], cfg.format, conf, stream)
    elif cfg.command == "convergence":
        rows = cmd_convergence(cfg)
        write_table(CONVERGENCE_COLUMNS, [tuple(asdict(r).values()) for r in rows], cfg.format, conf, stream)
    elif cfg.command == "zeros":
        rep, (edges, counts, dens, model) = cmd_zeros(cfg)
        summary = dict(zip(ZERO_SUMMARY_COLUMNS, (rep.n, rep.m, rep.c, rep.ks,
                                                  float(rep.rescaled[0]), float(rep.rescaled[-1]))))
        if cfg.table == "histogram":
            cols = HISTOGRAM_COLUMNS
            rows = [(i, edges[i], edges[i + 1], 0.5 * (edges[i] + edges[i + 1]), int(counts[i]), model[i], dens[i])
                    for i in range(len(counts))]
        elif cfg.table == "zeros":
            cols = ZEROS_COLUMNS
            rows = [(i, rep.zeros[i], rep.rescaled[i]) for i in range(rep.n)]
        else:
            cols = ZERO_SUMMARY_COLUMNS
            rows = [tuple(summary.values())]
        write_table(cols, rows, cfg.format, conf, stream, summary=summary)
    elif cfg.command == "sum-lemma":
        write_table(SUM_LEMMA_COLUMNS, cmd_sum_lemma(cfg), cfg.format, conf, stream)
    elif cfg.command == "hermite-check":
        rows = cmd_hermite_check(cfg)
        summary = {"max_rel_dev": max(r[2] for r in rows)}
        write_table(HERMITE_COLUMNS, rows, cfg.format, conf, stream, summary=summary)
    else:  # pragma: no cover - argparse restricts the choices
        raise DomainError(f"unknown command {cfg.command}")


# --------------------------------------------------------------------------
# argument parsing


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _int_list(s: str) -> list[int]:
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _float_list(s: str) -> list[float]:
    try:
        return [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--threads", type=int, default=1)

    params = _Parser(add_help=False)
    params.add_argument("--alpha", type=float, default=0.5)
    params.add_argument("--beta", type=float, default=1.5)

    parser = _Parser(prog="cspoly", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("eval", parents=[common, params], help="exact value and approximations")
    ev.add_argument("--n", type=_int_list, required=True)
    pos = ev.add_mutually_exclusive_group(required=True)
    pos.add_argument("--t", type=_float_list, help="N-scaled positions, x = sqrt(N) t")
    pos.add_argument("--x", type=_float_list, help="raw positions")
    ev.add_argument("--scale", choices=("N-scaled", "raw"), default=None)

    cv = sub.add_parser("convergence", parents=[common, params], help="errors along an n ladder")
    cv.add_argument("--n-list", type=_int_list, required=True)
    cv.add_argument("--t", type=_float_list, required=True)

    zs = sub.add_parser("zeros", parents=[common, params], help="zero distribution vs the limit law")
    zs.add_argument("--n", type=int, required=True)
    zs.add_argument("--c", type=float, default=1.0)
    zs.add_argument("--bins", type=int, default=64)
    zs.add_argument("--table", choices=("histogram", "zeros", "summary"), default="histogram")

    sl = sub.add_parser("sum-lemma", parents=[common], help="both sides of the logarithmic sum")
    sl.add_argument("--beta", type=float, default=1.5)
    sl.add_argument("--n", type=_int_list, required=True)
    sl.add_argument("--x", default="2*sqrt(n)", help="expression in n (default 2*sqrt(n))")

    hc = sub.add_parser("hermite-check", parents=[common], help="alpha=1/2, beta=3/2 against Hermite")
    hc.add_argument("--n-max", type=int, default=50)
    hc.add_argument("--x-grid", type=_float_list, default=[0.3, 1.1, 2.7, 5.0])

    sw = sub.add_parser("sweep", parents=[common, params], help="dense t grid of eval rows")
    sw.add_argument("--n", type=int, required=True)
    sw.add_argument("--t-min", type=float, default=0.1)
    sw.add_argument("--t-max", type=float, default=2.0)
    sw.add_argument("--t-step", type=float, default=0.01)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command, format=ns.format, out=ns.out, threads=ns.threads)
    if ns.threads < 1:
        raise DomainError("threads must be positive")
    if hasattr(ns, "alpha"):
        cfg.alpha = ns.alpha
    if hasattr(ns, "beta"):
        cfg.beta = ns.beta
    if ns.command == "eval":
        cfg.n = ns.n
        if ns.x is not None:
            cfg.t, cfg.scale = ns.x, "raw"
        else:
            cfg.t, cfg.scale = ns.t, ns.scale or "N-scaled"
    elif ns.command == "convergence":
        cfg.n, cfg.t = ns.n_list, ns.t
    elif ns.command == "zeros":
        cfg.n, cfg.c, cfg.bins, cfg.table = [ns.n], ns.c, ns.bins, ns.table
        if ns.bins < 1:
            raise DomainError("bins must be positive")
    elif ns.command == "sum-lemma":
        cfg.n, cfg.x_expr = ns.n, ns.x
        cfg.alpha = 0.0
    elif ns.command == "hermite-check":
        cfg.n_max, cfg.x_grid = ns.n_max, ns.x_grid
    elif ns.command == "sweep":
        cfg.n, cfg.t_min, cfg.t_max, cfg.t_step = [ns.n], ns.t_min, ns.t_max, ns.t_step
    if ns.command != "hermite-check":
        Params(cfg.alpha, cfg.beta)  # validate before dispatch
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"cspoly: error: {exc}", file=sys.stderr)
        return 1

    buf = io.StringIO()
    try:
        run(cfg, buf)
    except DomainError as exc:
        print(f"cspoly: error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, ArithmeticError) as exc:
        print(f"cspoly: numerical failure: {exc}", file=sys.stderr)
        return 2

    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
