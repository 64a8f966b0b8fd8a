"""Per-instance latency of the budget computation.

Every configuration sees the same seeded matrices. After a few untimed
warmup calls each instance is timed individually; instances are cycled
until at least ``min_iterations`` timings exist, and the median is
reported alongside the mean.
"""

from __future__ import annotations

import contextlib
import dataclasses
import itertools
import time
from typing import Iterable, Optional, Sequence

import numpy as np

from .config import BudgetConfig, SketchConfig
from .reports import SCHEMA_VERSION, config_dict
from .spectral import as_feature_matrix, budget

__all__ = ["bench_grid", "time_config", "run_bench"]


def bench_grid(
    base: BudgetConfig,
    methods: Iterable[str] = ("exact", "rsvd"),
    ts: Iterable[int] = (300,),
    ps: Iterable[int] = (10,),
    qs: Iterable[int] = (2,),
    seed: int = 0,
) -> list[BudgetConfig]:
    """Configurations for every method and, for ``rsvd``, every (t, p, q)."""
    out = []
    for method in methods:
        if method == "exact":
            out.append(dataclasses.replace(base, randomized=None))
        elif method == "rsvd":
            for t, p, q in itertools.product(ts, ps, qs):
                out.append(dataclasses.replace(base, randomized=SketchConfig(t, p, q, seed)))
        else:
            raise ValueError(f"unknown method {method!r}")
    return out


def _blas_threads(threads):
    if threads is None:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=threads)


def time_config(matrices: Sequence[np.ndarray], cfg: BudgetConfig, warmup=3, min_iterations=20):
    """Return ``(latencies_s, k_stars, saturated_count)`` for one configuration."""
    n = len(matrices)
    for i in range(warmup):
        budget(matrices[i % n], cfg)
    latencies = []
    k_stars = [None] * n
    saturated = 0
    for it in range(max(n, min_iterations)):
        m = matrices[it % n]
        start = time.perf_counter()
        res = budget(m, cfg)
        latencies.append(time.perf_counter() - start)
        if it < n:
            k_stars[it] = res.k_star
            saturated += res.saturated
    return np.array(latencies), k_stars, saturated


def run_bench(
    matrices: Sequence,
    configs: Sequence[BudgetConfig],
    warmup: int = 3,
    min_iterations: int = 20,
    threads: Optional[int] = 1,
    omit_timing: bool = False,
) -> dict:
    """Benchmark report for ``configs`` over ``matrices``."""
    if len(matrices) == 0:
        raise ValueError("benchmark needs at least one instance")
    if not configs:
        raise ValueError("benchmark needs at least one configuration")
    if warmup < 0 or min_iterations < 1:
        raise ValueError("warmup must be >= 0 and min_iterations >= 1")
    mats = [as_feature_matrix(m) for m in matrices]
    shapes = {m.shape for m in mats}

    records = []
    with _blas_threads(threads):
        for cfg in configs:
            lat, ks, sat = time_config(mats, cfg, warmup, min_iterations)
            cd = config_dict(cfg)
            rec = {
                "method": cd["method"],
                "t": cd["t"],
                "p": cd["p"],
                "q": cd["q"],
                "seed": cd["seed"],
                "mean_k_star": float(np.mean(ks)),
                "k_star": ks,
                "saturated": int(sat),
                "iterations": int(lat.size),
            }
            if not omit_timing:
                rec["mean_latency_ms"] = float(lat.mean() * 1e3)
                rec["median_latency_ms"] = float(np.median(lat) * 1e3)
                rec["total_time_s"] = float(lat.sum())
            records.append(rec)

    base = configs[0]
    return {
        "report": "bench",
        "schema_version": SCHEMA_VERSION,
        "environment": {
            "shape": list(next(iter(shapes))) if len(shapes) == 1 else None,
            "instances": len(mats),
            "tau": base.tau,
            "k_min": base.k_min,
            "k_max": base.k_max,
            "warmup": warmup,
            "min_iterations": min_iterations,
            "blas_threads": threads,
        },
        "records": records,
    }
