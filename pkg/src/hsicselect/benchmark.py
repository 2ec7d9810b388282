"""Median-rank benchmark over the synthetic datasets.

For every (sample size, run) pair a fresh dataset is generated from a
seed derived deterministically from the base seed, every requested
method ranks its features, and the ranks assigned to the two relevant
features (columns 0 and 1, rank 1 = most relevant) are pooled per
(method, size) cell. The reported cell statistic is the median of those
``2 * runs`` pooled ranks. All methods see identical datasets within a
run, and cells are independent of execution order, so runs may be
distributed over worker processes freely.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import mutual_info_rank, pearson_rank
from .data import Dataset, synth_multiclass, synth_regression, synth_xor
from .errors import ParameterError
from .selection import SelectionConfig, rank_features

SCHEMA_VERSION = 1
DEFAULT_SIZES = tuple(range(40, 401, 40))
DEFAULT_METHODS = ("bahsic", "fohsic", "pearson", "mi")
RELEVANT_FEATURES = (0, 1)

GENERATORS = {
    "xor": synth_xor,
    "multiclass": synth_multiclass,
    "regression": synth_regression,
}


@dataclass
class BenchmarkCell:
    """Pooled relevant-feature ranks of one method at one sample size."""

    method: str
    size: int
    ranks: list[int] = field(default_factory=list)
    median_rank: float | None = None
    failed: bool = False
    error: str | None = None


@dataclass
class BenchmarkReport:
    dataset: str
    sizes: list[int]
    runs: int
    base_seed: int
    methods: list[str]
    run_seeds: dict[int, list[int]]
    cells: list[BenchmarkCell]

    def cell(self, method: str, size: int) -> BenchmarkCell:
        for c in self.cells:
            if c.method == method and c.size == size:
                return c
        raise KeyError((method, size))

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "benchmark",
            "dataset": self.dataset,
            "sizes": list(self.sizes),
            "runs": self.runs,
            "base_seed": self.base_seed,
            "methods": list(self.methods),
            "relevant_features": list(RELEVANT_FEATURES),
            "run_seeds": {str(s): list(v) for s, v in self.run_seeds.items()},
            "cells": [
                {
                    "method": c.method,
                    "size": c.size,
                    "median_rank": c.median_rank,
                    "ranks": list(c.ranks),
                    "failed": c.failed,
                    "error": c.error,
                }
                for c in self.cells
            ],
        }

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n", encoding="utf-8")

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["dataset", "method", "size", "median_rank", "failed"])
            for c in self.cells:
                writer.writerow(
                    [
                        self.dataset,
                        c.method,
                        c.size,
                        "" if c.median_rank is None else f"{c.median_rank:g}",
                        str(c.failed).lower(),
                    ]
                )


def run_seed(base_seed: int, size: int, run: int) -> int:
    """Deterministic per-(size, run) generator seed, derived via SeedSequence."""
    ss = np.random.SeedSequence([base_seed, size, run])
    return int(ss.generate_state(1)[0])


def _method_ranks(method: str, dataset: Dataset, seed: int) -> tuple[int, int]:
    if method in ("bahsic", "fohsic"):
        ranking = rank_features(dataset, SelectionConfig(method=method, seed=seed))
        return ranking.rank_of(0), ranking.rank_of(1)
    if method == "pearson":
        ranks = pearson_rank(dataset).ranks()
    elif method == "mi":
        ranks = mutual_info_rank(dataset).ranks()
    else:
        raise ParameterError(f"unknown method {method!r}")
    return int(ranks[0]), int(ranks[1])


def _bench_task(args: tuple[str, int, int, int, tuple[str, ...]]) -> tuple[int, int, dict]:
    dataset_kind, size, run, seed, methods = args
    data = GENERATORS[dataset_kind](size, seed)
    results: dict[str, tuple[int, int] | str] = {}
    for method in methods:
        try:
            results[method] = _method_ranks(method, data, seed)
        except Exception as exc:  # marker recorded per cell, run continues
            results[method] = f"{type(exc).__name__}: {exc}"
    return size, run, results


def run_benchmark(
    dataset: str,
    sizes: list[int] | tuple[int, ...] = DEFAULT_SIZES,
    runs: int = 10,
    methods: list[str] | tuple[str, ...] = DEFAULT_METHODS,
    base_seed: int = 0,
    jobs: int = 1,
) -> BenchmarkReport:
    """Execute the benchmark grid and pool median ranks per cell."""
    if dataset not in GENERATORS:
        raise ParameterError(f"unknown dataset {dataset!r} (choose from {sorted(GENERATORS)})")
    unknown = [m for m in methods if m not in DEFAULT_METHODS]
    if unknown:
        raise ParameterError(f"unknown methods {unknown} (choose from {list(DEFAULT_METHODS)})")
    if runs < 1:
        raise ParameterError("runs must be >= 1")
    sizes = [int(s) for s in sizes]
    methods = tuple(methods)

    seeds = {size: [run_seed(base_seed, size, r) for r in range(runs)] for size in sizes}
    tasks = [
        (dataset, size, r, seeds[size][r], methods) for size in sizes for r in range(runs)
    ]
    if jobs == 1 or len(tasks) == 1:
        outcomes = [_bench_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_bench_task, tasks))

    pooled: dict[tuple[str, int], BenchmarkCell] = {
        (m, size): BenchmarkCell(method=m, size=size) for size in sizes for m in methods
    }
    for size, _run, results in sorted(outcomes, key=lambda o: (o[0], o[1])):
        for method, res in results.items():
            cell = pooled[(method, size)]
            if isinstance(res, str):
                cell.failed = True
                cell.error = res
            else:
                cell.ranks.extend(res)
    for cell in pooled.values():
        if not cell.failed and cell.ranks:
            cell.median_rank = float(np.median(cell.ranks))
    cells = [pooled[(m, size)] for size in sizes for m in methods]
    return BenchmarkReport(
        dataset=dataset,
        sizes=sizes,
        runs=runs,
        base_seed=base_seed,
        methods=list(methods),
        run_seeds=seeds,
        cells=cells,
    )
