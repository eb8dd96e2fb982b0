"""Known sum-rate bounds built from two-user results, plus the cooperative MAC bound."""

from __future__ import annotations

import enum
import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .channel import as_channel
from .gaussinfo import LN2

__all__ = [
    "BoundKind",
    "BoundResult",
    "single_user_rate",
    "kramer_2user",
    "etw_2user",
    "composite_sum_rate",
    "mac_objective",
    "mac_bound",
    "MAC_STARTS",
]


class BoundKind(enum.Enum):
    SingleUser = "SingleUser"
    Kramer2 = "Kramer2"
    ETW2 = "ETW2"
    CompositeKra = "CompositeKra"
    CompositeETW = "CompositeETW"
    MAC = "MAC"
    Th1 = "Th1"
    Th2 = "Th2"


@dataclass(frozen=True)
class BoundResult:
    value_bits: float
    kind: BoundKind
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "value_bits": self.value_bits,
                "detail": _jsonable(self.detail)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, enum.Enum):
        return x.value
    return x


def _log2(x: float) -> float:
    return math.log(x) / LN2


def _g2(h, i, j) -> float:
    return abs(h[i - 1, j - 1]) ** 2


def single_user_rate(channel, k: int) -> BoundResult:
    h = as_channel(channel).h
    if k not in (1, 2, 3):
        raise ValueError(f"user index must be 1, 2 or 3, got {k}")
    return BoundResult(_log2(1.0 + _g2(h, k, k)), BoundKind.SingleUser, {"user": k})


def _check_pair(i, j):
    if i == j or i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError(f"need two distinct users from 1..3, got ({i}, {j})")


def kramer_2user(channel, i: int, j: int) -> BoundResult:
    """Kramer-style two-user sum-rate bound with the third user silenced."""
    _check_pair(i, j)
    h = as_channel(channel).h
    hii, hij, hji, hjj = _g2(h, i, i), _g2(h, i, j), _g2(h, j, i), _g2(h, j, j)
    first = _log2(1 + hii + hij) + max(_log2((1 + hjj) / (1 + hij)), 0.0)
    second = _log2(1 + hji + hjj) + max(_log2((1 + hii) / (1 + hji)), 0.0)
    active = "first" if first <= second else "second"
    return BoundResult(min(first, second), BoundKind.Kramer2,
                       {"pair": (i, j), "terms": (first, second), "active": active})


def etw_2user(channel, i: int, j: int) -> BoundResult:
    """Etkin-Tse-Wang-style two-user sum-rate bound with the third user silenced."""
    _check_pair(i, j)
    h = as_channel(channel).h
    hii, hij, hji, hjj = _g2(h, i, i), _g2(h, i, j), _g2(h, j, i), _g2(h, j, j)
    value = _log2(1 + hij + hii / (1 + hji)) + _log2(1 + hji + hjj / (1 + hij))
    return BoundResult(value, BoundKind.ETW2, {"pair": (i, j)})


_COMPOSITE_TERMS = ("r1+r2+r3", "r1+r23", "r2+r13", "r3+r12", "(r12+r13+r23)/2")


def composite_sum_rate(channel, author: str = "Kra") -> BoundResult:
    """Three-user bound obtained by silencing one user at a time.

    ``author`` selects the two-user bound: ``"Kra"`` or ``"ETW"``.
    """
    ch = as_channel(channel)
    if author == "Kra":
        pair_bound, kind = kramer_2user, BoundKind.CompositeKra
    elif author == "ETW":
        pair_bound, kind = etw_2user, BoundKind.CompositeETW
    else:
        raise ValueError(f"author must be 'Kra' or 'ETW', got {author!r}")
    r = {k: single_user_rate(ch, k).value_bits for k in (1, 2, 3)}
    rp = {(i, j): pair_bound(ch, i, j).value_bits for i, j in itertools.combinations((1, 2, 3), 2)}
    terms = (
        r[1] + r[2] + r[3],
        r[1] + rp[2, 3],
        r[2] + rp[1, 3],
        r[3] + rp[1, 2],
        (rp[1, 2] + rp[1, 3] + rp[2, 3]) / 2.0,
    )
    best = int(np.argmin(terms))
    return BoundResult(terms[best], kind, {
        "active": _COMPOSITE_TERMS[best],
        "terms": dict(zip(_COMPOSITE_TERMS, terms)),
        "pair_bounds": {f"r{i}{j}": v for (i, j), v in rp.items()},
    })


MAC_STARTS = 20
_MAC_FATOL = 1e-9


def _herm3_det(a, e, i, b, c, f) -> float:
    # det of [[a, b, c], [b*, e, f], [c*, f*, i]] with real a, e, i
    return (a * e * i + 2.0 * (b * f * c.conjugate()).real
            - a * abs(f) ** 2 - e * abs(c) ** 2 - i * abs(b) ** 2)


def _columns(h: np.ndarray) -> tuple:
    return tuple(tuple(complex(z) for z in h[:, j]) for j in range(3))


def _mac_value(cols, x0, x1, x2, x3, x4, x5) -> float:
    rho, rho1, rho2 = complex(x0, x1), complex(x2, x3), complex(x4, x5)
    m2 = 1.0 - (x0 * x0 + x1 * x1)
    if not m2 > 0.0:
        return math.inf
    l21, l31 = rho.conjugate(), rho1.conjugate()
    l22 = math.sqrt(m2)
    l32 = (rho2.conjugate() - l31 * rho) / l22
    m3 = 1.0 - abs(l31) ** 2 - abs(l32) ** 2
    if not m3 > 0.0:
        return math.inf
    l33 = math.sqrt(m3)
    g = []
    for h1, h2, h3 in cols:
        g2 = (h2 - l21 * h1) / l22
        g.append((h1, g2, (h3 - l31 * h1 - l32 * g2) / l33))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = g
    aa = 1.0 + abs(a1) ** 2 + abs(a2) ** 2 + abs(a3) ** 2
    bb = 1.0 + abs(b1) ** 2 + abs(b2) ** 2 + abs(b3) ** 2
    cc = 1.0 + abs(c1) ** 2 + abs(c2) ** 2 + abs(c3) ** 2
    ab = a1.conjugate() * b1 + a2.conjugate() * b2 + a3.conjugate() * b3
    ac = a1.conjugate() * c1 + a2.conjugate() * c2 + a3.conjugate() * c3
    bc = b1.conjugate() * c1 + b2.conjugate() * c2 + b3.conjugate() * c3
    return math.log(_herm3_det(aa, bb, cc, ab, ac, bc)) / LN2


def mac_objective(h: np.ndarray, x) -> float:
    """``log2 det(I + H H^H Sigma^-1)`` with Sigma built from 6 reals.

    ``x = (re rho, im rho, re rho1, im rho1, re rho2, im rho2)``. Returns
    ``inf`` outside the positive-definite set. Evaluated as
    ``det(I + G^H G)`` with ``G = L^-1 H`` and ``Sigma = L L^H``, which stays
    accurate as Sigma approaches singularity.
    """
    return _mac_value(_columns(np.asarray(h)), *(float(v) for v in x))


def _random_feasible_start(rng: np.random.Generator) -> np.ndarray:
    while True:
        mags = 0.9 * np.sqrt(rng.uniform(size=3))
        phases = rng.uniform(0.0, 2 * np.pi, size=3)
        z = mags * np.exp(1j * phases)
        if _herm3_det(1.0, 1.0, 1.0, complex(z[0]), complex(z[1]), complex(z[2])) > 1e-3:
            return np.column_stack([z.real, z.imag]).ravel()


def mac_bound(channel, seed: int = 0, starts: int = MAC_STARTS) -> BoundResult:
    """Sum capacity of the cooperative 3-antenna MAC under worst-case noise correlation.

    Minimizes ``log2 det(I + H H^H Sigma^-1)`` over unit-diagonal Hermitian
    positive-definite ``Sigma`` with Nelder-Mead from ``starts`` points:
    ``Sigma = I`` followed by seeded random feasible points.
    """
    h = as_channel(channel).h
    rng = np.random.default_rng(seed)
    x0s = [np.zeros(6)] + [_random_feasible_start(rng) for _ in range(starts - 1)]

    cols = _columns(h)

    def objective(x):
        return _mac_value(cols, x[0], x[1], x[2], x[3], x[4], x[5])

    identity_value = objective(np.zeros(6))
    best_x, best_f, converged = np.zeros(6), identity_value, 0
    for x0 in x0s:
        simplex = np.vstack([x0, x0 + 0.1 * np.eye(6)])
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-7,
                                "fatol": _MAC_FATOL, "maxiter": 20000, "maxfev": 20000,
                                "adaptive": True})
        if res.success:
            converged += 1
        if res.fun < best_f:
            best_x, best_f = res.x, float(res.fun)

    flagged = converged == 0
    if flagged:
        warnings.warn("mac_bound: no start met the convergence tolerance; "
                      "reporting best point found", RuntimeWarning, stacklevel=2)
    rho, rho1, rho2 = (complex(best_x[k], best_x[k + 1]) for k in (0, 2, 4))
    sigma = np.array([[1, rho, rho1], [rho.conjugate(), 1, rho2],
                      [rho1.conjugate(), rho2.conjugate(), 1]])
    return BoundResult(best_f, BoundKind.MAC, {
        "rho": rho, "rho1": rho1, "rho2": rho2, "sigma": sigma,
        "identity_value": identity_value, "converged_starts": converged,
        "did_not_converge": flagged, "seed": seed,
    })
