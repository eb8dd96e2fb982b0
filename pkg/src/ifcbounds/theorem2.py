"""Genie-aided sum-rate bound with side information ``Y_{\\k}`` and optimized noise correlation.

Receiver ``k`` is given the interference-only output of receiver ``pi_k``,
``Y_{\\pi_k} = r_{\\pi_k} X + Z`` with the ``pi_k``-th entry of the gain row
removed. Each term ``f_{k, pi_k}`` is the minimum over the correlation
between the two noises, and the bound is the smallest sum over the six
side-information assignments ``pi``.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .channel import as_channel
from .classic import BoundKind, BoundResult
from .gaussinfo import LN2

__all__ = ["ASSIGNMENTS", "row_vectors", "f_jk_terms", "f_jk", "f_jk_at_rho_zero",
           "th2_sum_rate", "th2_sum_rate_independent"]

ASSIGNMENTS = tuple(itertools.permutations((1, 2, 3)))


def row_vectors(channel, k: int) -> tuple[np.ndarray, np.ndarray]:
    """``(r_k, r_{\\k})``: gains seen at receiver ``k`` and the same row with entry ``k`` zeroed."""
    h = as_channel(channel).h
    r = h[k - 1].copy()
    r_not = r.copy()
    r_not[k - 1] = 0.0
    return r, r_not


def f_jk_terms(channel, j: int, k: int) -> dict:
    """Ingredients of ``f_{j,k}``: inner product magnitude, squared norms and ``q``.

    ``q`` is None when ``r_j`` and ``r_{\\k}`` are orthogonal.
    """
    rj, _ = row_vectors(channel, j)
    _, rk = row_vectors(channel, k)
    ip = abs(np.sum(rj * np.conj(rk)))
    nj = float(np.sum(np.abs(rj) ** 2))
    nk = float(np.sum(np.abs(rk) ** 2))
    q = None if ip == 0.0 else ((1 + nj) * (1 + nk) - ip ** 2 - 1) / (2 * ip)
    return {"inner": ip, "norm_j": nj, "norm_notk": nk, "q": q}


def f_jk(channel, j: int, k: int) -> float:
    """``min_rho I(Y_j; X | Y_{\\k})`` in bits."""
    t = f_jk_terms(channel, j, k)
    if t["q"] is None:
        return math.log1p(t["norm_j"]) / LN2
    q = t["q"]
    # q >= 1 analytically; clamp rounding below it before the square root
    gain = t["inner"] * (q + math.sqrt(max(q * q - 1.0, 0.0)))
    return math.log((1.0 + gain) / (1.0 + t["norm_notk"])) / LN2


def f_jk_at_rho_zero(channel, j: int, k: int) -> float:
    """``I(Y_j; X | Y_{\\k})`` with independent noises."""
    t = f_jk_terms(channel, j, k)
    return math.log(1.0 + t["norm_j"] - t["inner"] ** 2 / (1.0 + t["norm_notk"])) / LN2


def _best_assignment(channel, term):
    ch = as_channel(channel)
    table = {(j, k): term(ch, j, k) for j in (1, 2, 3) for k in (1, 2, 3)}
    sums = {pi: sum(table[k, pi[k - 1]] for k in (1, 2, 3)) for pi in ASSIGNMENTS}
    best = min(ASSIGNMENTS, key=lambda pi: sums[pi])
    return best, sums, table


def th2_sum_rate(channel) -> BoundResult:
    best, sums, table = _best_assignment(channel, f_jk)
    return BoundResult(sums[best], BoundKind.Th2, {
        "pi": best,
        "terms": {f"f{k}{best[k - 1]}": table[k, best[k - 1]] for k in (1, 2, 3)},
        "per_assignment": {"".join(map(str, pi)): v for pi, v in sums.items()},
    })


def th2_sum_rate_independent(channel) -> BoundResult:
    """Same construction with every noise correlation forced to zero."""
    best, sums, table = _best_assignment(channel, f_jk_at_rho_zero)
    return BoundResult(sums[best], BoundKind.Th2, {"pi": best, "rho": 0.0})
