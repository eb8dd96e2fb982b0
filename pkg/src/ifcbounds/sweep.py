"""Evaluate every bound on a channel and sweep the interference exponent alpha."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import (ChannelMatrix, Family, FamilySpec, alpha_to_cross_gain, as_channel,
                      build_family)
from .classic import BoundResult, composite_sum_rate, mac_bound, single_user_rate
from .errors import InvalidFamilyParams
from .theorem1 import th1_sum_rate
from .theorem2 import th2_sum_rate

__all__ = [
    "BOUND_NAMES",
    "TIE_TOL",
    "AlphaRange",
    "SweepRow",
    "SweepTable",
    "parse_bounds",
    "evaluate_bounds",
    "tightest_of",
    "channel_at_alpha",
    "make_row",
    "run_sweep",
    "crossovers",
]

# fixed column order; also the tie-break order for "tightest"
BOUND_NAMES = ("kra", "etw", "th1", "th2", "mac")
TIE_TOL = 1e-9

_LABELS = {"kra": "Kra", "etw": "ETW", "th1": "Th1", "th2": "Th2", "mac": "MAC"}


def parse_bounds(text: str | None) -> tuple[str, ...]:
    """Parse a comma-separated bound list (case-insensitive); None or "all" selects every bound."""
    if text is None or text.strip().lower() == "all":
        return BOUND_NAMES
    names = [t.strip().lower() for t in text.split(",") if t.strip()]
    bad = [n for n in names if n not in BOUND_NAMES]
    if bad or not names:
        raise ValueError(f"unknown bound(s) {bad or text!r}; choose from {', '.join(BOUND_NAMES)}")
    return tuple(n for n in BOUND_NAMES if n in names)


def evaluate_bounds(channel, bounds=BOUND_NAMES, seed: int = 0) -> dict[str, BoundResult]:
    ch = as_channel(channel)
    compute = {
        "kra": lambda: composite_sum_rate(ch, "Kra"),
        "etw": lambda: composite_sum_rate(ch, "ETW"),
        "th1": lambda: th1_sum_rate(ch),
        "th2": lambda: th2_sum_rate(ch),
        "mac": lambda: mac_bound(ch, seed=seed),
    }
    return {name: compute[name]() for name in BOUND_NAMES if name in bounds}


def tightest_of(values: dict[str, float]) -> str:
    """Bound attaining the minimum; ties within TIE_TOL go to the earlier column."""
    best = min(values.values())
    return next(n for n in BOUND_NAMES if n in values and values[n] <= best + TIE_TOL)


@dataclass(frozen=True)
class AlphaRange:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.start, self.stop, self.step)):
            raise ValueError("alpha range must be finite")
        if self.step <= 0:
            raise ValueError("alpha step must be positive")
        if self.start > self.stop:
            raise ValueError("alpha start must not exceed stop")

    @classmethod
    def parse(cls, text: str) -> "AlphaRange":
        parts = text.split(":")
        if len(parts) == 1:
            a = float(parts[0])
            return cls(a, a, 1.0)
        if len(parts) != 3:
            raise ValueError(f"expected start:stop:step, got {text!r}")
        return cls(*(float(p) for p in parts))

    def values(self) -> np.ndarray:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        # round to kill accumulated binary error so grid points print cleanly
        return np.round(self.start + self.step * np.arange(n), 12)


def channel_at_alpha(family: FamilySpec, alpha: float) -> ChannelMatrix:
    """Member of ``family`` whose cross links have interference exponent ``alpha``.

    FullySymmetric and CyclicSymmetric set ``|h| = P**((alpha-1)/2)``. Custom
    keeps the given ``h1, h2`` as a shape and scales both by that magnitude.
    """
    g = alpha_to_cross_gain(alpha, family.power_db)
    kind = family.kind
    if kind in (Family.FullySymmetric, Family.CyclicSymmetric):
        return build_family(FamilySpec(kind, family.power_db, g, g))
    if kind is Family.Custom:
        return build_family(FamilySpec(kind, family.power_db, g * family.h1, g * family.h2))
    raise InvalidFamilyParams(f"no alpha parameterization for family {kind.value}")


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    P_db: float
    r_sum: float
    values: dict = field(default_factory=dict)
    tightest: str = ""

    def dof(self, name: str) -> float:
        return min(self.values[name] / self.r_sum, 1.0)


def make_row(channel, alpha: float, power_db: float, bounds=BOUND_NAMES, seed: int = 0) -> SweepRow:
    ch = as_channel(channel)
    r_sum = sum(single_user_rate(ch, k).value_bits for k in (1, 2, 3))
    vals = {n: r.value_bits for n, r in evaluate_bounds(ch, bounds, seed).items()}
    return SweepRow(float(alpha), float(power_db), r_sum, vals, tightest_of(vals))


def _row_task(args):
    family, alpha, bounds, seed = args
    return make_row(channel_at_alpha(family, alpha), alpha, family.power_db, bounds, seed)


@dataclass
class SweepTable:
    rows: list

    @property
    def columns(self) -> list[str]:
        return (["alpha", "P_db", "r_sum"] + list(BOUND_NAMES)
                + [f"dof_{n}" for n in BOUND_NAMES] + ["tightest"])

    def column(self, name: str) -> np.ndarray:
        if name.startswith("dof_"):
            return np.array([r.dof(name[4:]) if name[4:] in r.values else math.nan for r in self.rows])
        if name in BOUND_NAMES:
            return np.array([r.values.get(name, math.nan) for r in self.rows])
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            line = [_fmt(r.alpha), _fmt(r.P_db), _fmt(r.r_sum)]
            line += [_fmt(r.values[n]) if n in r.values else "" for n in BOUND_NAMES]
            line += [_fmt(r.dof(n)) if n in r.values else "" for n in BOUND_NAMES]
            line.append(_LABELS[r.tightest])
            w.writerow(line)
        return buf.getvalue()

    def to_json(self) -> list[dict]:
        out = []
        for r in self.rows:
            d = {"alpha": r.alpha, "P_db": r.P_db, "r_sum": r.r_sum}
            d.update(r.values)
            d.update({f"dof_{n}": r.dof(n) for n in r.values})
            d["tightest"] = _LABELS[r.tightest]
            out.append(d)
        return out


def _fmt(x: float) -> str:
    # 12 significant digits, locale independent
    return format(float(x), ".12g")


def run_sweep(family: FamilySpec, alphas: AlphaRange, bounds=BOUND_NAMES, seed: int = 0,
              workers: int = 1) -> SweepTable:
    """One row per grid alpha, in grid order.

    Rows are independent; ``workers > 1`` evaluates them in a process pool.
    The MAC seed is the same for every row, so output does not depend on
    ``workers``.
    """
    if family.kind is Family.MixedStrongVeryStrong:
        raise InvalidFamilyParams("alpha sweeps need FullySymmetric, CyclicSymmetric or Custom")
    tasks = [(family, float(a), tuple(bounds), seed) for a in alphas.values()]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [_row_task(t) for t in tasks]
    return SweepTable(rows)


def crossovers(table: SweepTable) -> dict[str, list[list[float]]]:
    """Maximal runs of consecutive grid alphas on which each bound is tightest."""
    out: dict[str, list[list[float]]] = {}
    run_name, run_start, prev = None, None, None
    for r in table.rows:
        if r.tightest != run_name:
            if run_name is not None:
                out.setdefault(_LABELS[run_name], []).append([run_start, prev])
            run_name, run_start = r.tightest, r.alpha
        prev = r.alpha
    if run_name is not None:
        out.setdefault(_LABELS[run_name], []).append([run_start, prev])
    return out
