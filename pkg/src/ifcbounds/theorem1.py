"""Chain-rule sum-rate bound with worst-case noise correlation between two receivers.

For a user ordering (roles 1, 2, 3) the bound is

    I(Y1; X1) + min_rho { I(Y1, Y2; X2 | X1)
                          + max{ I(Y1, Y2; X3 | X1, X2), I(Y3; X3 | X1, X2) } }

for iid unit Gaussian inputs, where ``rho = E[Z1 Z2*]``. The minimization is
resolved by a decision tree over three candidate correlations (two interior
closed forms and the boundary on which both arguments of the max agree),
with a numeric grid search as a fallback. The reported bound is the minimum
over all six orderings.
"""

from __future__ import annotations

import cmath
import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .channel import ChannelMatrix, as_channel
from .classic import BoundKind, BoundResult
from .errors import BoundaryCorrelation, EmptyBoundary, InapplicableCandidate
from .gaussinfo import LN2, MisoPair, conditional_mi, lemma_min_mi, pair_noise

__all__ = [
    "CaseLabel",
    "Th1CaseReport",
    "ORDERINGS",
    "RHO_MARGIN",
    "GATE_TOL",
    "th1_objective_at_rho",
    "case1_quadratic_form",
    "case1_condition",
    "snr_order_condition",
    "candidate_rho1",
    "candidate_rho2a",
    "candidate_rho2b",
    "case1_closed_form",
    "case2a_closed_form",
    "case2b_closed_form",
    "boundary_circle",
    "case3_boundary_min",
    "numeric_fallback",
    "th1_ordering",
    "th1_sum_rate",
]

ORDERINGS = tuple(itertools.permutations((1, 2, 3)))
RHO_MARGIN = 1e-9
GATE_TOL = 1e-12

_FALLBACK_GRID = (128, 256)
_CASE3_ANGLES = 4096


class CaseLabel(enum.Enum):
    Case1_rho1 = "Case1_rho1"
    Case2a = "Case2a"
    Case2b = "Case2b"
    Case3_boundary = "Case3_boundary"
    NumericFallback = "NumericFallback"


@dataclass(frozen=True)
class Th1CaseReport:
    case_label: CaseLabel
    rho_used: complex
    ordering: tuple
    value_bits: float

    def to_json(self) -> dict:
        return {"case": self.case_label.value, "ordering": list(self.ordering),
                "rho": [self.rho_used.real, self.rho_used.imag], "value_bits": self.value_bits}


def _log2(x):
    return math.log(x) / LN2


def _roles(channel, ordering):
    ch = as_channel(channel)
    return ch if tuple(ordering) == (1, 2, 3) else ch.permuted(ordering)


def _clip(rho: complex) -> complex:
    """Pull ``rho`` inside the disk ``|rho| <= 1 - RHO_MARGIN``."""
    r = abs(rho)
    lim = 1.0 - RHO_MARGIN
    return rho if r <= lim else rho * (lim / r)


def th1_objective_at_rho(channel, ordering=(1, 2, 3), rho=0j):
    """Three-term objective at noise correlation ``rho`` (scalar or array), in bits."""
    rho = np.asarray(rho, dtype=complex)
    if np.any(np.abs(rho) >= 1.0):
        raise BoundaryCorrelation("objective needs |rho| < 1")
    h = _roles(channel, ordering)
    noise = pair_noise(rho)
    first = conditional_mi(h, [1], [1])
    second = conditional_mi(h, [1, 2], [2], [1], noise)
    joint3 = conditional_mi(h, [1, 2], [3], [1, 2], noise)
    own3 = conditional_mi(h, [3], [3], [1, 2])
    out = first + second + np.maximum(joint3, own3)
    return float(out) if np.ndim(out) == 0 else out


def case1_quadratic_form(h: np.ndarray, rho):
    """``(h13*, h23*) Sigma12^-1 (h13, h23)^T`` for role-ordered gains ``h``.

    Written as ``|h13 - rho h23|^2 / (1 - |rho|^2) + |h23|^2`` so that it
    stays finite as ``|rho| -> 1`` along directions where the limit exists.
    """
    a, b = h[0, 2], h[1, 2]
    rho = np.asarray(rho, dtype=complex)
    return np.abs(a - rho * b) ** 2 / (1.0 - np.abs(rho) ** 2) + abs(b) ** 2


def case1_condition(channel, rho, ordering=(1, 2, 3)) -> bool:
    """True when Y3 given (X1, X2) is degraded w.r.t. the combined (Y1, Y2)."""
    h = _roles(channel, ordering).h
    q = case1_quadratic_form(h, _clip(complex(rho)))
    return bool(q >= abs(h[2, 2]) ** 2 - GATE_TOL)


def snr_order_condition(channel, ordering=(1, 2, 3)) -> bool:
    """``|h12|^2 / (1 + |h13|^2) <= |h22|^2 / (1 + |h23|^2)``."""
    h = _roles(channel, ordering).h
    lhs = abs(h[0, 1]) ** 2 / (1.0 + abs(h[0, 2]) ** 2)
    rhs = abs(h[1, 1]) ** 2 / (1.0 + abs(h[1, 2]) ** 2)
    return lhs <= rhs + GATE_TOL


def _case1_pair(h: np.ndarray) -> MisoPair:
    # Y1 and Y2 after removing X1: rows (h12, h13) and (h22, h23).
    return MisoPair.from_rows(h[0, 1:], h[1, 1:])


def candidate_rho1(channel, ordering=(1, 2, 3)) -> complex:
    """Unconstrained minimizer of ``I(Y1, Y2; X2, X3 | X1)`` over rho."""
    h = _roles(channel, ordering).h
    return lemma_min_mi(_case1_pair(h)).rho_opt


def candidate_rho2a(channel, ordering=(1, 2, 3)) -> complex:
    """Correlation making Y1 (X3 as noise) a degraded version of Y2."""
    h = _roles(channel, ordering).h
    if h[1, 1] == 0:
        raise InapplicableCandidate("rho(2a) needs h22 != 0")
    return complex(h[0, 1] / h[1, 1] * (1.0 + abs(h[1, 2]) ** 2) - h[0, 2] * np.conj(h[1, 2]))


def candidate_rho2b(channel, ordering=(1, 2, 3)) -> complex:
    """Correlation making Y2 (X3 as noise) a degraded version of Y1.

    The degradedness condition fixes ``E[Z1' Z2'*] = conj(g2 / g1)`` for the
    normalized gains ``g1, g2``; for real gains this reduces to
    ``h22 / h12 (1 + |h13|^2) - h13 h23*``.
    """
    h = _roles(channel, ordering).h
    if h[0, 1] == 0:
        raise InapplicableCandidate("rho(2b) needs h12 != 0")
    return complex(np.conj(h[1, 1] / h[0, 1]) * (1.0 + abs(h[0, 2]) ** 2)
                   - h[0, 2] * np.conj(h[1, 2]))


def case1_closed_form(channel, ordering=(1, 2, 3)) -> float:
    """Objective at rho(1) when case 1 holds there: ``I(Y1;X1) + min I(Y1,Y2;X2,X3|X1)``."""
    h = _roles(channel, ordering).h
    g = np.abs(h) ** 2
    return (_log2(1 + g[0, 0] / (1 + g[0, 1] + g[0, 2]))
            + _log2(1 + g[1, 1] + g[1, 2])
            + lemma_min_mi(_case1_pair(h)).value_bits)


def case2a_closed_form(channel, ordering=(1, 2, 3)) -> float:
    g = np.abs(_roles(channel, ordering).h) ** 2
    return (_log2(1 + g[0, 0] / (1 + g[0, 1] + g[0, 2]))
            + _log2(1 + g[1, 1] / (1 + g[1, 2]))
            + _log2(1 + g[2, 2]))


def case2b_closed_form(channel, ordering=(1, 2, 3)) -> float:
    g = np.abs(_roles(channel, ordering).h) ** 2
    return _log2(1 + (g[0, 0] + g[0, 1]) / (1 + g[0, 2])) + _log2(1 + g[2, 2])


def boundary_circle(channel, ordering=(1, 2, 3)) -> tuple[complex, float]:
    """Centre and radius of the set where the case-1 condition holds with equality.

    Completing the square in ``|h13|^2 + |h23|^2 - 2 Re(rho h13* h23)
    = g (1 - |rho|^2)`` with ``g = |h33|^2`` gives centre ``h13 h23* / g`` and
    radius ``sqrt((1 - |h13|^2 / g) (1 - |h23|^2 / g))``.
    Raises EmptyBoundary when no real circle exists.
    """
    h = _roles(channel, ordering).h
    g = abs(h[2, 2]) ** 2
    a, b = h[0, 2], h[1, 2]
    r2 = (1.0 - abs(a) ** 2 / g) * (1.0 - abs(b) ** 2 / g)
    if r2 < 0.0:
        raise EmptyBoundary("case-1 condition has a fixed sign over the disk")
    return complex(a * np.conj(b) / g), math.sqrt(r2)


def _arc(center: complex, radius: float, lim: float) -> tuple[float, float]:
    """Angular interval (start, width) of ``center + radius e^{i th}`` inside ``|z| <= lim``."""
    c = abs(center)
    if radius == 0.0:
        if c <= lim:
            return 0.0, 0.0
        raise EmptyBoundary("boundary circle is a point outside the unit disk")
    if c == 0.0:
        if radius <= lim:
            return 0.0, 2 * math.pi
        raise EmptyBoundary("boundary circle lies outside the unit disk")
    # |c e^{i phi} + R e^{i th}|^2 <= lim^2  <=>  cos(th - phi) <= k
    k = (lim * lim - c * c - radius * radius) / (2.0 * c * radius)
    if k < -1.0:
        raise EmptyBoundary("boundary circle does not meet the unit disk")
    if k >= 1.0:
        return 0.0, 2 * math.pi
    half = math.pi - math.acos(k)  # points with th - phi in [pi - half, pi + half]
    return cmath.phase(center) + math.pi - half, 2.0 * half


def case3_boundary_min(channel, ordering=(1, 2, 3)) -> tuple[complex, float]:
    """Minimize the objective along the boundary circle inside the unit disk."""
    h = _roles(channel, ordering)
    center, radius = boundary_circle(h)
    lim = 1.0 - RHO_MARGIN
    start, width = _arc(center, radius, lim)

    def point(theta):
        z = center + radius * np.exp(1j * np.asarray(theta))
        mag = np.abs(z)
        return np.where(mag > lim, z * (lim / np.maximum(mag, lim)), z)

    if width == 0.0:
        rho = complex(point(0.0))
        return rho, th1_objective_at_rho(h, (1, 2, 3), rho)

    full = width >= 2 * math.pi
    thetas = start + width * np.arange(_CASE3_ANGLES) / (_CASE3_ANGLES if full else _CASE3_ANGLES - 1)
    values = th1_objective_at_rho(h, (1, 2, 3), point(thetas))
    k = int(np.argmin(values))
    step = width / (_CASE3_ANGLES - 1)
    lo = thetas[k] - step if (full or k > 0) else thetas[k]
    hi = thetas[k] + step if (full or k < _CASE3_ANGLES - 1) else thetas[k]
    best_theta, best_val = thetas[k], float(values[k])
    if hi > lo:
        res = minimize_scalar(lambda th: th1_objective_at_rho(h, (1, 2, 3), complex(point(th))),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": RHO_MARGIN / max(radius, 1.0)})
        if res.fun < best_val:
            best_theta, best_val = res.x, float(res.fun)
    return complex(point(best_theta)), best_val


def numeric_fallback(channel, ordering=(1, 2, 3)) -> tuple[complex, float]:
    """Polar grid over the disk followed by simplex refinement in (Re rho, Im rho)."""
    h = _roles(channel, ordering)
    lim = 1.0 - RHO_MARGIN
    n_r, n_t = _FALLBACK_GRID
    radii = lim * np.sqrt(np.linspace(0.0, 1.0, n_r))
    thetas = np.linspace(0.0, 2 * np.pi, n_t, endpoint=False)
    grid = (radii[:, None] * np.exp(1j * thetas[None, :])).ravel()
    values = th1_objective_at_rho(h, (1, 2, 3), grid)
    k = int(np.argmin(values))
    best_rho, best_val = complex(grid[k]), float(values[k])

    def f(x):
        z = complex(x[0], x[1])
        if abs(z) > lim:
            return math.inf
        return th1_objective_at_rho(h, (1, 2, 3), z)

    res = minimize(f, [best_rho.real, best_rho.imag], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 2000})
    if res.fun < best_val:
        best_rho, best_val = complex(res.x[0], res.x[1]), float(res.fun)
    return best_rho, best_val


def th1_ordering(channel, ordering=(1, 2, 3)) -> Th1CaseReport:
    """Resolve the minimization over rho for one user ordering."""
    ordering = tuple(ordering)
    h = _roles(channel, ordering)
    g = abs(h.h[2, 2]) ** 2

    rho1 = candidate_rho1(h)
    if case1_condition(h, rho1):
        return Th1CaseReport(CaseLabel.Case1_rho1, rho1, ordering, case1_closed_form(h))

    if snr_order_condition(h):
        rho2 = candidate_rho2a(h)
        label, closed = CaseLabel.Case2a, case2a_closed_form
    else:
        try:
            rho2 = candidate_rho2b(h)
        except InapplicableCandidate:
            rho2 = None
        label, closed = CaseLabel.Case2b, case2b_closed_form
    if rho2 is not None and abs(rho2) <= 1.0 + GATE_TOL:
        q = case1_quadratic_form(h.h, _clip(rho2))
        if q <= g + GATE_TOL:
            return Th1CaseReport(label, rho2, ordering, closed(h))

    try:
        rho3, value = case3_boundary_min(h)
        return Th1CaseReport(CaseLabel.Case3_boundary, rho3, ordering, value)
    except EmptyBoundary:
        rho_n, value = numeric_fallback(h)
        return Th1CaseReport(CaseLabel.NumericFallback, rho_n, ordering, value)


def th1_sum_rate(channel) -> BoundResult:
    """Minimum over the six user orderings of the resolved bound."""
    ch = as_channel(channel)
    reports = [th1_ordering(ch, o) for o in ORDERINGS]
    best = min(reports, key=lambda r: r.value_bits)
    return BoundResult(best.value_bits, BoundKind.Th1, {
        "ordering": best.ordering, "case": best.case_label.value, "rho": best.rho_used,
        "per_ordering": [r.to_json() for r in reports],
    })
