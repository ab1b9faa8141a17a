"""Benchmark harness: seeded instances, shared start points, tabulated means.

For every configured size it generates ``instances_per_size`` seeded
instances, runs every method from the same start point, and aggregates mean
iterations, mean value at termination, mean final gradient norm, mean
evaluation count and mean wall time per (method, size).  Output is
deterministic for a fixed config; wall time is the one machine-dependent
column, so table emission takes a ``timing`` switch.
"""
from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .baselines import bb_minimize, gd_exact_minimize
from .objectives import GenParams, generate_instance
from .solver import SolverConfig, SolverRun, Termination, Variant, minimize

DEFAULT_METHODS = ("me", "bb-long", "bb-short")


def run_method(method: str, problem, x0, epsilon: float = 0.01,
               max_iterations: int = 1000,
               variant: Variant = Variant.SEMILINE_MIN) -> SolverRun:
    """Run one named method on a problem from x0."""
    if method == "me":
        cfg = SolverConfig(epsilon=epsilon, max_iterations=max_iterations, variant=variant)
        return minimize(problem, x0, cfg)
    if method == "bb-long":
        return bb_minimize(problem, x0, "long", epsilon, max_iterations)
    if method == "bb-short":
        return bb_minimize(problem, x0, "short", epsilon, max_iterations)
    if method == "gd":
        return gd_exact_minimize(problem, x0, epsilon, max_iterations)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class BenchConfig:
    kind: str                       # "quadratic" or "logsumexp"
    sizes: tuple[int, ...]
    instances_per_size: int = 10
    epsilon: float = 0.01
    base_seed: int = 0
    methods: tuple[str, ...] = DEFAULT_METHODS
    params: GenParams = field(default_factory=GenParams)
    max_iterations: int = 1000
    variant: Variant = Variant.SEMILINE_MIN

    def __post_init__(self):
        if not self.sizes:
            raise ValueError("need at least one problem size")
        if self.instances_per_size < 1:
            raise ValueError("need at least one instance per size")
        if not self.methods:
            raise ValueError("need at least one method")


@dataclass
class RunDetail:
    """One (method, size, instance) run, with its full trace kept."""

    method: str
    n: int
    instance: int
    seed: int
    termination: str
    iterations: int
    final_value: float
    final_grad_norm: float
    evaluations: int
    wall_time_ms: float
    flagged: bool
    mu: float | None
    run: SolverRun


@dataclass(frozen=True)
class BenchRecord:
    """Aggregated means for one (method, size) cell."""

    method: str
    n: int
    mean_iterations: float
    mean_optimal_value: float
    mean_final_grad_norm: float
    mean_evaluations: float
    mean_wall_time_ms: float


def _run_instance(cfg: BenchConfig, n: int, instance: int) -> list[RunDetail]:
    seed = cfg.base_seed + instance
    problem, x0 = generate_instance(cfg.kind, n, seed, cfg.params)
    details = []
    for method in cfg.methods:
        start = time.perf_counter()
        run = run_method(method, problem, x0, cfg.epsilon, cfg.max_iterations, cfg.variant)
        wall_ms = (time.perf_counter() - start) * 1e3
        details.append(RunDetail(
            method=method, n=n, instance=instance, seed=seed,
            termination=run.termination.value, iterations=run.iterations,
            final_value=run.f_final, final_grad_norm=run.grad_norm_final,
            evaluations=run.evaluations, wall_time_ms=wall_ms,
            flagged=run.termination is Termination.NUMERIC_ERROR,
            mu=getattr(problem, "mu", None), run=run,
        ))
    return details


def run_benchmark(cfg: BenchConfig, workers: int = 1):
    """Run the full protocol.  Returns (records, details).

    Instances are generated from seed = base_seed + instance index and every
    method starts from the same x0.  Results are deterministic for a fixed
    config regardless of worker count (wall times aside); numeric failures
    are flagged on their detail rows, never dropped.
    """
    tasks = [(n, i) for n in cfg.sizes for i in range(cfg.instances_per_size)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda t: _run_instance(cfg, *t), tasks))
    else:
        chunks = [_run_instance(cfg, n, i) for n, i in tasks]
    details = [d for chunk in chunks for d in chunk]

    records = []
    for method in cfg.methods:
        for n in cfg.sizes:
            cell = [d for d in details if d.method == method and d.n == n]
            count = len(cell)
            records.append(BenchRecord(
                method=method, n=n,
                mean_iterations=sum(d.iterations for d in cell) / count,
                mean_optimal_value=sum(d.final_value for d in cell) / count,
                mean_final_grad_norm=sum(d.final_grad_norm for d in cell) / count,
                mean_evaluations=sum(d.evaluations for d in cell) / count,
                mean_wall_time_ms=sum(d.wall_time_ms for d in cell) / count,
            ))
    records.sort(key=lambda r: (r.method, r.n))
    return records, details


def _fmt(value: float) -> str:
    return "%.6g" % float(value)


def emit_table(records, fmt: str = "csv", timing: bool = True) -> str:
    """Render aggregated records as CSV (sorted by method, then size) or as a
    markdown table grouped by size.  Values carry 6 significant digits."""
    if not records:
        raise ValueError("no records to emit")
    columns = ["method", "n", "mean_iterations", "mean_optimal_value",
               "mean_final_grad_norm", "mean_evaluations"]
    if timing:
        columns.append("mean_wall_time_ms")
    if fmt == "csv":
        rows = sorted(records, key=lambda r: (r.method, r.n))
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([r.method, r.n] + [_fmt(getattr(r, c)) for c in columns[2:]])
        return out.getvalue()
    if fmt == "markdown":
        rows = sorted(records, key=lambda r: (r.n, r.method))
        header = "| " + " | ".join(columns) + " |"
        rule = "|" + "|".join(" --- " for _ in columns) + "|"
        lines = [header, rule]
        for r in rows:
            cells = [r.method, str(r.n)] + [_fmt(getattr(r, c)) for c in columns[2:]]
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")
