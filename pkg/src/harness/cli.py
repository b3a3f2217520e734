"""
harness/cli.py

Command-line interface.

Subcommands
-----------
    simulate      run an experiment and emit the per-n convergence table
    normalizers   a(n), b(n), c(n), d(n) over an n grid
    reference     raw draws from a cell's limit law, or raw (y1, y2) pairs
    functionals   U(tx, t²y)/(t³F̄(t)) against its limit Ω(x, y)
    identities    ratio statistics and their algebraic identities on a CSV

Usage
-----
    python scripts/tailstats.py simulate --model "pareto{alpha=0.5}" --stat T \\
        --n 1000,10000 --reps 2000 --seed 7 --out results/t_pareto05.csv
    python scripts/tailstats.py normalizers --model "exp{rate=1}" --n 10,100,1000
    python scripts/tailstats.py simulate --config experiment.json

Exit codes: 0 ok, 2 bad config or model spec, 3 unsupported regime,
4 undefined cell, 5 normalizer failure, 6 I/O error. On failure one JSON
line ``{"error": <category>, "message": ...}`` goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Callable, Sequence, TextIO

import numpy as np
from pydantic import ValidationError
from tqdm import tqdm

from config import DEFAULT_REFERENCE_DRAWS, FLOAT_FORMAT
from errors import TailStatsError
from estimators.sample_stats import Stat, UndefinedCell, compute_stats
from harness.emit import emit
from harness.experiment import (
    ExperimentConfig,
    ExperimentRow,
    ks_critical_value,
    run_experiment,
)
from models.distributions import DistributionModel, ModelSpecError, parse_model_spec
from theory.bivariate import omega_convergence_ratio, omega_limit, sigma_matrix
from theory.limit_laws import LimitReference, gaussian2, joint_series
from theory.normalizers import (
    NormalizerError,
    NormalizerSet,
    Regime,
    UnsupportedRegime,
    classify,
)
from theory.regimes import build_cell, reference_sample

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSUPPORTED_REGIME = 3
EXIT_UNDEFINED_CELL = 4
EXIT_NORMALIZER = 5
EXIT_IO = 6


# ── Argument helpers ──────────────────────────────────────────────────────────

def _int_list(text: str) -> list[int]:
    out = []
    for token in filter(None, (t.strip() for t in text.split(","))):
        value = float(token)
        if not value.is_integer():
            raise argparse.ArgumentTypeError(f"not an integer: {token!r}")
        out.append(int(value))
    return out


def _float_list(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _csv_line(values: Sequence[object]) -> str:
    return ",".join(FLOAT_FORMAT(v) if isinstance(v, float) else str(v) for v in values)


# ── Subcommands ───────────────────────────────────────────────────────────────

def _simulate_config(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {
        "model": args.model,
        "stat": args.stat,
        "n_grid": args.n,
        "replications": args.reps,
        "reference_draws": args.ref_draws,
        "seed": args.seed,
        "out": args.out,
        "format": args.format,
        "workers": args.workers,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    base: dict = {}
    if args.config is not None:
        base = json.loads(Path(args.config).read_text(encoding="utf-8"))
    return ExperimentConfig.model_validate({**base, **overrides})


def cmd_simulate(args: argparse.Namespace, out: TextIO) -> int:
    config = _simulate_config(args)
    total = config.replications * len(config.n_grid)
    critical = ks_critical_value(config.replications, config.reference_draws)

    with tqdm(total=total, desc="replications", unit="rep", file=sys.stderr,
              disable=args.quiet) as bar:
        def on_row(row: ExperimentRow) -> None:
            if not args.quiet:
                tqdm.write(f"[simulate] n={row.n} ks={row.ks:.4f} crit={critical:.4f} "
                           f"regime={row.regime.value}", file=sys.stderr)

        result = run_experiment(config, on_replication=lambda _i: bar.update(1), on_row=on_row)

    payload = emit(result, config.format, config.out)
    if config.out is None:
        out.write(payload.decode("utf-8"))
    elif not args.quiet:
        tqdm.write(f"[simulate] wrote {config.out}", file=sys.stderr)
    return EXIT_OK


def cmd_normalizers(args: argparse.Namespace, out: TextIO) -> int:
    model = parse_model_spec(args.model)
    table = NormalizerSet.build(model, args.n)
    out.write("n,a,b,c,d,regime\n")
    for n in args.n:
        row = table.row(n)
        out.write(_csv_line([n, row.a, row.b, row.c, row.d, table.regime.value]) + "\n")
    return EXIT_OK


def _pair_law(name: str, model: DistributionModel) -> LimitReference:
    regime = classify(model)
    if name == "joint":
        if regime not in (Regime.I, Regime.II):
            raise UnsupportedRegime(model, f"joint series needs a tail index in (0, 2), "
                                           f"regime is {regime.value}")
        return joint_series(model.tail_index)
    if regime not in (Regime.IV, Regime.V):
        raise UnsupportedRegime(model, f"Gaussian pair needs a tail index above 2, "
                                       f"regime is {regime.value}")
    return gaussian2(sigma_matrix(model.moments()))


def cmd_reference(args: argparse.Namespace, out: TextIO) -> int:
    model = parse_model_spec(args.model)
    if args.law == "cell":
        if args.stat is None:
            raise ValueError("--stat is required with --law cell")
        values = reference_sample(build_cell(args.stat, model), args.count, args.seed)
        lines = ["value"] + [FLOAT_FORMAT(float(v)) for v in values]
    else:
        pairs = _pair_law(args.law, model).sample(args.count, args.seed)
        lines = ["y1,y2"] + [_csv_line([float(y1), float(y2)]) for y1, y2 in pairs]
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def cmd_functionals(args: argparse.Namespace, out: TextIO) -> int:
    model = parse_model_spec(args.model)
    if not 0.0 < model.tail_index < 2.0:
        raise UnsupportedRegime(model, f"Ω needs a tail index in (0, 2), got {model.tail_index!r}")
    omega = omega_limit(model.tail_index, args.x, args.y)
    out.write("t,ratio,omega,abs_error\n")
    for t in args.t:
        ratio = omega_convergence_ratio(model, t, args.x, args.y)
        out.write(_csv_line([float(t), ratio, omega, abs(ratio - omega)]) + "\n")
    return EXIT_OK


def cmd_identities(args: argparse.Namespace, out: TextIO) -> int:
    """One sample per CSV line; prints the statistics and identity residuals."""
    lines = Path(args.data).read_text(encoding="utf-8").splitlines()
    out.write("row,n,T,C,SV,SD,T2,sv_residual,sd_residual,t2_residual\n")
    for index, line in enumerate(l for l in lines if l.strip()):
        values = np.array(_float_list(line))
        s = compute_stats(values)
        n_t = s.n * s.t_ratio
        sv_res = abs(s.sv ** 2 + 1.0 - n_t) / n_t
        sd_res = abs(s.sd - (n_t - 1.0) * s.mean) / max(abs(s.sd), s.mean)
        t2_res = abs(s.t2 * s.n_t_minus_one - s.n) / s.n if not s.degenerate else math.nan
        out.write(_csv_line([index, s.n, s.t_ratio, s.c_ratio, s.sv, s.sd, s.t2,
                             sv_res, sd_res, t2_res]) + "\n")
    return EXIT_OK


# ── Parser ────────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailstats",
        description="Limit laws of ratio statistics for heavy-tailed positive data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    stats = [s.value for s in Stat]

    sim = sub.add_parser("simulate", help="Run a Monte Carlo convergence experiment")
    sim.add_argument("--config", type=Path, default=None,
                     help="JSON file mirroring ExperimentConfig; flags override it")
    sim.add_argument("--model", default=None, help='e.g. "pareto{alpha=1.5}"')
    sim.add_argument("--stat", choices=stats, default=None)
    sim.add_argument("--n", type=_int_list, default=None, help="comma list, e.g. 100,1000")
    sim.add_argument("--reps", type=int, default=None)
    sim.add_argument("--ref-draws", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--out", type=Path, default=None)
    sim.add_argument("--format", choices=["csv", "json"], default=None)
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument("--quiet", action="store_true", help="No progress output")
    sim.set_defaults(handler=cmd_simulate)

    norm = sub.add_parser("normalizers", help="Tabulate a(n), b(n), c(n), d(n)")
    norm.add_argument("--model", required=True)
    norm.add_argument("--n", type=_int_list, required=True)
    norm.set_defaults(handler=cmd_normalizers)

    ref = sub.add_parser("reference", help="Draw from a limit law")
    ref.add_argument("--model", required=True)
    ref.add_argument("--stat", choices=stats, default=None)
    ref.add_argument("--law", choices=["cell", "joint", "gaussian2"], default="cell",
                     help="cell: the statistic's limit; joint, gaussian2: raw (y1, y2) pairs")
    ref.add_argument("--count", type=int, default=DEFAULT_REFERENCE_DRAWS)
    ref.add_argument("--seed", type=int, default=0)
    ref.add_argument("--out", type=Path, default=None)
    ref.set_defaults(handler=cmd_reference)

    fun = sub.add_parser("functionals", help="U-ratio convergence towards Ω")
    fun.add_argument("--model", required=True)
    fun.add_argument("--x", type=float, default=1.0)
    fun.add_argument("--y", type=float, default=1.0)
    fun.add_argument("--t", type=_float_list, default=[1e1, 1e2, 1e3, 1e4])
    fun.set_defaults(handler=cmd_functionals)

    ide = sub.add_parser("identities", help="Statistics self-checks on a data CSV")
    ide.add_argument("--data", type=Path, required=True)
    ide.set_defaults(handler=cmd_identities)

    return parser


# ── Error mapping ─────────────────────────────────────────────────────────────

def _exit_code(exc: BaseException) -> tuple[int, str]:
    if isinstance(exc, UnsupportedRegime):
        return EXIT_UNSUPPORTED_REGIME, exc.category
    if isinstance(exc, UndefinedCell):
        return EXIT_UNDEFINED_CELL, exc.category
    if isinstance(exc, NormalizerError):
        return EXIT_NORMALIZER, exc.category
    if isinstance(exc, ModelSpecError):
        return EXIT_CONFIG, exc.category
    if isinstance(exc, (ValidationError, ValueError)):
        return EXIT_CONFIG, "config"
    if isinstance(exc, TailStatsError):
        return EXIT_CONFIG, exc.category
    if isinstance(exc, OSError):
        return EXIT_IO, "io"
    raise exc


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler: Callable[[argparse.Namespace, TextIO], int] = args.handler
    try:
        return handler(args, out if out is not None else sys.stdout)
    except Exception as exc:
        code, category = _exit_code(exc)
        if isinstance(exc, TailStatsError):
            payload = exc.to_dict()
        else:
            payload = {"error": category, "message": str(exc)}
        print(json.dumps(payload, ensure_ascii=False), file=sys.stderr)
        return code
