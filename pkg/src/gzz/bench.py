"""Benchmark harness: exact vs. restricted synthesis on sampled targets."""

from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .exact import encoding_signs, synth_exact
from .heuristic import synth_restricted
from .lp import DEFAULT_TOL
from .matrixcore import CouplingMatrix, num_pairs

MODES = ("average", "worstcase")
COLUMNS = ("mode", "n", "method", "level", "generator", "samples_done", "mean_time", "std_time",
           "mean_wall_ms", "seed")
DEFAULT_BUDGET = 120.0
DEFAULT_SAMPLES = 25


def sample_average(n: int, rng: np.random.Generator) -> CouplingMatrix:
    """Independent uniform entries in ``[-1, 1]``."""
    return CouplingMatrix(n, rng.uniform(-1.0, 1.0, num_pairs(n)))


def sample_worstcase(n: int, rng: np.random.Generator) -> CouplingMatrix:
    """``-m m^T`` for a uniformly drawn canonical encoding ``m``."""
    row = encoding_signs(n)[rng.integers(0, 1 << (n - 1))]
    return CouplingMatrix.outer(tuple(int(x) for x in row), -1.0)


def draw_samples(mode: str, n: int, samples: int, seed: int) -> list[CouplingMatrix]:
    """The same list for every method at a given ``(mode, n, seed)``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    draw = sample_average if mode == "average" else sample_worstcase
    return [draw(n, rng) for _ in range(samples)]


@dataclass(frozen=True)
class Method:
    name: str
    level: int | None = None
    generator: str | None = None

    def run(self, M: CouplingMatrix, tol: float, backend: str | None, cache_dir) -> float:
        if self.name == "exact":
            return synth_exact(M, tol, certify=False, backend=backend).total_time
        return synth_restricted(M, self.level, self.generator, tol, backend=backend,
                                cache_dir=cache_dir).total_time

    def applies(self, n: int) -> bool:
        return self.level is None or self.level <= n


@dataclass
class BenchRow:
    mode: str
    n: int
    method: str
    level: int | None
    generator: str | None
    samples_done: int
    mean_time: float | None
    std_time: float | None
    mean_wall_ms: float | None
    seed: int
    times: tuple[float, ...] = ()

    def csv_row(self) -> list:
        def fmt(x):
            return "" if x is None else repr(float(x)) if isinstance(x, float) else x
        return [self.mode, self.n, self.method, "" if self.level is None else self.level,
                self.generator or "", self.samples_done, fmt(self.mean_time), fmt(self.std_time),
                fmt(self.mean_wall_ms), self.seed]

    def as_dict(self) -> dict:
        d = asdict(self)
        d.pop("times")
        return d


def methods_for(levels: Sequence[int], generators: Sequence[str], exact: bool = True) -> list[Method]:
    out = [Method("exact")] if exact else []
    out += [Method("restricted", j, g) for j in levels for g in generators]
    return out


def bench(mode: str, n_range: Iterable[int], samples: int = DEFAULT_SAMPLES,
          levels: Sequence[int] = (2, 3, 4), generators: Sequence[str] = ("sylvester", "fourk"),
          time_budget: float = DEFAULT_BUDGET, seed: int = 0, *, tol: float = DEFAULT_TOL,
          threads: int = 1, backend: str | None = None, cache_dir=None, exact: bool = True,
          out: TextIO | None = None) -> list[BenchRow]:
    """Mean and spread of total time per ``(n, method)``.

    Each method owns ``time_budget`` seconds of wall clock across the whole
    ``n_range``; once spent, its remaining cells are written with
    ``samples_done = 0`` and empty statistics.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    methods = methods_for(levels, generators, exact)
    spent = {m: 0.0 for m in methods}
    writer = None
    if out is not None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(COLUMNS)
    rows: list[BenchRow] = []
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None

    def timed(method, M):
        t0 = time.perf_counter()
        value = method.run(M, tol, backend, cache_dir)
        return value, time.perf_counter() - t0

    try:
        for n in n_range:
            batch = draw_samples(mode, n, samples, seed)
            for method in methods:
                if not method.applies(n):
                    continue
                times, walls = [], []
                step = threads if pool else 1
                for a in range(0, samples, step):
                    if spent[method] >= time_budget:
                        break
                    chunk = batch[a:a + step]
                    t0 = time.perf_counter()
                    res = list(pool.map(lambda M: timed(method, M), chunk)) if pool \
                        else [timed(method, M) for M in chunk]
                    spent[method] += time.perf_counter() - t0
                    for value, wall in res:
                        times.append(value)
                        walls.append(wall)
                if times:
                    arr = np.array(times)
                    row = BenchRow(mode, n, method.name, method.level, method.generator, len(arr),
                                   float(arr.mean()), float(arr.std()),
                                   1e3 * float(np.mean(walls)), seed, tuple(times))
                else:
                    row = BenchRow(mode, n, method.name, method.level, method.generator, 0,
                                   None, None, None, seed)
                rows.append(row)
                if writer is not None:
                    writer.writerow(row.csv_row())
                    out.flush()
    finally:
        if pool:
            pool.shutdown(wait=True)
    return rows
