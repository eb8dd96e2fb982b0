"""Seeded oracle-agreement suites: closed forms against brute-force grids."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelMatrix, standardize
from .classic import _jsonable, mac_bound
from .gaussinfo import MisoPair, lemma_mi_at_rho, lemma_min_mi
from .oracle import (DEFAULT_GRID, GridSpec, constrained_boundary_min, grid_min_covariance,
                     grid_min_rho, th1_reference_objective)
from .theorem1 import CaseLabel, ORDERINGS, th1_ordering, th1_sum_rate
from .theorem2 import ASSIGNMENTS, f_jk, f_jk_terms, row_vectors

__all__ = [
    "SUITES",
    "TOLERANCES",
    "VerifyReport",
    "random_miso_pair",
    "random_channel",
    "random_real_channel",
    "sample_rngs",
    "check_lemma",
    "check_th1",
    "check_th2",
    "check_mac",
    "run_suite",
]

SUITES = ("lemma", "th1", "th2", "mac")
TOLERANCES = {"lemma": 1e-3, "th1": 1e-3, "th2": 1e-3, "mac": 1e-2}


def random_miso_pair(rng: np.random.Generator, length: int) -> MisoPair:
    """Entries with magnitudes uniform on [0, 10] and uniform phases."""
    def vec():
        return rng.uniform(0, 10, length) * np.exp(2j * np.pi * rng.uniform(size=length))
    return MisoPair(vec(), vec())


def random_channel(rng: np.random.Generator) -> ChannelMatrix:
    """Complex channel: direct magnitudes in [0.5, 5], cross magnitudes in [0, 3], uniform phases."""
    mag = rng.uniform(0, 3, (3, 3))
    np.fill_diagonal(mag, rng.uniform(0.5, 5, 3))
    return standardize(mag * np.exp(2j * np.pi * rng.uniform(size=(3, 3))))


def random_real_channel(rng: np.random.Generator) -> ChannelMatrix:
    """Real channel: direct gains in [0.5, 5], cross gains in [-3, 3]."""
    h = rng.uniform(-3, 3, (3, 3))
    np.fill_diagonal(h, rng.uniform(0.5, 5, 3))
    return standardize(h)


def sample_rngs(seed: int, samples: int) -> list[np.random.Generator]:
    """Independent per-sample generators derived from the master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(samples)]


@dataclass
class VerifyReport:
    suite: str
    samples: int
    seed: int
    tolerance: float
    max_deviation: float
    worst_instance: dict
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_deviation < self.tolerance and self.extra.get("ok", True))

    def to_json(self) -> dict:
        return _jsonable({"suite": self.suite, "samples": self.samples, "seed": self.seed,
                          "tolerance": self.tolerance, "max_deviation": self.max_deviation,
                          "pass": self.passed, "worst_instance": self.worst_instance,
                          **self.extra})


def check_lemma(rng, index: int = 0, spec: GridSpec = DEFAULT_GRID) -> dict:
    pair = random_miso_pair(rng, 2 + index % 2)
    closed = lemma_min_mi(pair)
    _, grid = grid_min_rho(lambda r: lemma_mi_at_rho(pair, r), spec)
    return {"deviation": abs(closed.value_bits - grid), "closed": closed.value_bits,
            "oracle": grid, "instance": {"c1": pair.c1, "c2": pair.c2}}


def check_th1(rng, index: int = 0, spec: GridSpec = DEFAULT_GRID) -> dict:
    """Per ordering: decision tree vs polar grid; case-3 orderings also vs the boundary grid."""
    ch = random_channel(rng)
    per, dev, cases, boundary_dev = {}, 0.0, [], 0.0
    for order in ORDERINGS:
        rep = th1_ordering(ch, order)
        _, grid = grid_min_rho(th1_reference_objective(ch, order), spec)
        dev = max(dev, abs(rep.value_bits - grid))
        cases.append(rep.case_label.value)
        per["".join(map(str, order))] = (rep.value_bits, grid)
        if rep.case_label is CaseLabel.Case3_boundary:
            bnd = constrained_boundary_min(ch, order, spec)
            if not bnd.empty:
                boundary_dev = max(boundary_dev, abs(rep.value_bits - bnd.value))
    closed = th1_sum_rate(ch).value_bits
    grid = min(v[1] for v in per.values())
    return {"deviation": max(abs(closed - grid), dev, boundary_dev), "closed": closed,
            "oracle": grid, "cases": cases, "boundary_deviation": boundary_dev,
            "instance": ch.to_json()}


def check_th2(rng, index: int = 0, spec: GridSpec = DEFAULT_GRID) -> dict:
    """Exhaustive assignments, each term minimized on the polar grid."""
    ch = random_channel(rng)
    grid_terms, closed_terms, qs = {}, {}, []
    for j, k in itertools.product((1, 2, 3), repeat=2):
        rj, _ = row_vectors(ch, j)
        _, rk = row_vectors(ch, k)
        pair = MisoPair.from_rows(rj, rk)
        grid_terms[j, k] = grid_min_rho(lambda r: lemma_mi_at_rho(pair, r), spec)[1]
        closed_terms[j, k] = f_jk(ch, j, k)
        q = f_jk_terms(ch, j, k)["q"]
        if q is not None:
            qs.append(q)
    grid = min(sum(grid_terms[k, pi[k - 1]] for k in (1, 2, 3)) for pi in ASSIGNMENTS)
    closed = min(sum(closed_terms[k, pi[k - 1]] for k in (1, 2, 3)) for pi in ASSIGNMENTS)
    term_dev = max(abs(closed_terms[t] - grid_terms[t]) for t in grid_terms)
    return {"deviation": max(abs(closed - grid), term_dev), "closed": closed, "oracle": grid,
            "min_q": min(qs) if qs else math.inf, "instance": ch.to_json()}


def check_mac(rng, index: int = 0, spec: GridSpec = DEFAULT_GRID) -> dict:
    ch = random_real_channel(rng)
    res = mac_bound(ch, seed=index)
    _, grid = grid_min_covariance(ch)
    return {"deviation": abs(res.value_bits - grid), "closed": res.value_bits, "oracle": grid,
            "identity_value": res.detail["identity_value"], "instance": ch.to_json()}


_CHECKS = {"lemma": check_lemma, "th1": check_th1, "th2": check_th2, "mac": check_mac}


def _task(args):
    suite, rng, index = args
    return _CHECKS[suite](rng, index)


def run_suite(suite: str, samples: int, seed: int = 0, workers: int = 1) -> VerifyReport:
    """Run one suite on ``samples`` seeded instances; report the worst deviation."""
    if suite not in _CHECKS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    tasks = [(suite, rng, i) for i, rng in enumerate(sample_rngs(seed, samples))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]
    worst = max(range(samples), key=lambda i: results[i]["deviation"])
    extra = {}
    if suite == "th2":
        min_q = min(r["min_q"] for r in results)
        extra = {"min_q": min_q, "ok": min_q >= 1.0}
    if suite == "mac":
        excess = max(r["closed"] - r["identity_value"] for r in results)
        extra = {"max_excess_over_identity": excess, "ok": excess <= 0.0}
    if suite == "th1":
        extra = {"max_boundary_deviation": max(r["boundary_deviation"] for r in results),
                 "case_counts": dict(Counter(c for r in results for c in r["cases"]))}
    return VerifyReport(suite, samples, seed, TOLERANCES[suite], results[worst]["deviation"],
                        {"index": worst, **results[worst]}, extra)
