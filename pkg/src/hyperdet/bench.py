"""Timing/accuracy sweep over random hyperbolic instances, one row per degree."""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .detrep import RepresentOptions, represent
from .errors import HyperdetError
from .generate import generate_random_hyperbolic
from .rng import derive_seed
from .verify import representation_error

COLUMNS = (
    "degree",
    "mean_total_seconds",
    "mean_intersection_seconds",
    "mean_abs_error",
    "mean_rel_error",
    "instances",
    "failures",
)


@dataclass(frozen=True)
class BenchRow:
    degree: int
    mean_total_seconds: float
    mean_intersection_seconds: float
    mean_abs_error: float
    mean_rel_error: float
    instances: int
    failures: int


@dataclass(frozen=True)
class InstanceResult:
    degree: int
    index: int
    ok: bool
    total_seconds: float = float("nan")
    intersection_seconds: float = float("nan")
    abs_error: float = float("nan")
    rel_error: float = float("nan")
    error: str = ""


def instance_seed(seed: int, degree: int, index: int) -> int:
    return derive_seed(seed, degree, index)


def run_instance(degree: int, index: int, seed: int = 0) -> InstanceResult:
    s = instance_seed(seed, degree, index)
    f = generate_random_hyperbolic(degree, s)
    t0 = time.perf_counter()
    try:
        rep = represent(f, (1.0, 0.0, 0.0), RepresentOptions(seed=s % (2**31)))
    except (HyperdetError, np.linalg.LinAlgError) as exc:
        return InstanceResult(degree, index, False, error=f"{type(exc).__name__}: {exc}")
    total = time.perf_counter() - t0
    report = representation_error(f, rep, seed=s)
    return InstanceResult(
        degree,
        index,
        True,
        total_seconds=total,
        intersection_seconds=rep.timings.get("intersection", 0.0),
        abs_error=report.abs_error,
        rel_error=report.rel_error,
    )


def _run_instance_args(args):
    return run_instance(*args)


def worker_count() -> int:
    cap = os.environ.get("HYPERDET_THREADS")
    if not cap:
        return 1
    return max(1, min(int(cap), os.cpu_count() or 1))


def run_instances(degrees, instances: int, seed: int = 0, workers: int | None = None):
    jobs = [(d, i, seed) for d in degrees for i in range(instances)]
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_instance_args, jobs))
    else:
        results = [run_instance(*job) for job in jobs]
    return sorted(results, key=lambda r: (r.degree, r.index))


def summarize(results, degrees) -> list[BenchRow]:
    rows = []
    for d in sorted(set(degrees)):
        rs = [r for r in results if r.degree == d]
        if not rs:
            continue
        good = [r for r in rs if r.ok]

        def mean(attr):
            return float(np.mean([getattr(r, attr) for r in good])) if good else float("nan")

        rows.append(
            BenchRow(
                degree=d,
                mean_total_seconds=mean("total_seconds"),
                mean_intersection_seconds=mean("intersection_seconds"),
                mean_abs_error=mean("abs_error"),
                mean_rel_error=mean("rel_error"),
                instances=len(rs),
                failures=len(rs) - len(good),
            )
        )
    return rows


def run_bench(degrees, instances: int = 20, seed: int = 0, workers: int | None = None) -> list[BenchRow]:
    degrees = list(degrees)
    return summarize(run_instances(degrees, instances, seed, workers), degrees)


def format_table(rows) -> str:
    header = f"{'degree':>6} {'time (s)':>10} {'time V(f,g)':>12} {'error':>10} {'rel error':>10} {'n':>4} {'fail':>4}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r.degree:>6d} {r.mean_total_seconds:>10.4f} {r.mean_intersection_seconds:>12.4f} "
            f"{r.mean_abs_error:>10.2e} {r.mean_rel_error:>10.2e} {r.instances:>4d} {r.failures:>4d}"
        )
    return "\n".join(lines)


def format_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(asdict(r))
    return buf.getvalue()
