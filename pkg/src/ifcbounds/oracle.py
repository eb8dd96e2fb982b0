"""Brute-force reference minimizers used to check the closed forms.

Everything here is grid search over the correlation parameters built only on
the Gaussian primitives (:func:`conditional_mi`, :func:`lemma_mi_at_rho`);
none of the closed-form shortcuts are reused.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import as_channel
from .gaussinfo import NoiseCorrelation, _noise_matrix, conditional_mi, pair_noise

__all__ = [
    "GridSpec",
    "DEFAULT_GRID",
    "grid_min_rho",
    "th1_reference_objective",
    "th1_oracle",
    "grid_min_covariance",
    "BoundaryOracle",
    "constrained_boundary_min",
]


@dataclass(frozen=True)
class GridSpec:
    radial_points: int = 512
    angular_points: int = 1024
    refine_iters: int = 3
    boundary_margin: float = 1e-9

    def __post_init__(self):
        if self.radial_points < 2 or self.angular_points < 4 or self.refine_iters < 0:
            raise ValueError(f"invalid grid {self}")
        if not 0.0 < self.boundary_margin <= 1e-3:
            raise ValueError("boundary_margin must lie in (0, 1e-3]")


DEFAULT_GRID = GridSpec()

_LOCAL_POINTS = 33
_SHRINK = 16.0


def _polar(r, th):
    return r * np.exp(1j * th)


def grid_min_rho(objective: Callable[[np.ndarray], np.ndarray],
                 spec: GridSpec = DEFAULT_GRID) -> tuple[complex, float]:
    """Minimize a vectorized function of complex ``rho`` over the closed disk.

    Coarse polar grid on ``|rho| <= 1 - margin`` with uniformly spaced radii
    and angles, then ``refine_iters`` rounds of a local polar grid around the
    incumbent, each round shrinking the window. The incumbent is never
    replaced by a worse point.
    """
    rmax = 1.0 - spec.boundary_margin
    radii = np.linspace(0.0, rmax, spec.radial_points)
    thetas = np.linspace(0.0, 2 * np.pi, spec.angular_points, endpoint=False)
    rr, tt = np.meshgrid(radii, thetas, indexing="ij")
    values = np.asarray(objective(_polar(rr, tt).ravel()), dtype=float)
    k = int(np.argmin(values))
    best_r, best_t, best_v = rr.ravel()[k], tt.ravel()[k], float(values[k])

    dr, dt = radii[1] - radii[0], thetas[1] - thetas[0]
    for _ in range(spec.refine_iters):
        lr = np.clip(best_r + np.linspace(-dr, dr, _LOCAL_POINTS), 0.0, rmax)
        lt = best_t + np.linspace(-dt, dt, _LOCAL_POINTS)
        rr, tt = np.meshgrid(lr, lt, indexing="ij")
        vals = np.asarray(objective(_polar(rr, tt).ravel()), dtype=float)
        k = int(np.argmin(vals))
        if vals[k] < best_v:
            best_r, best_t, best_v = rr.ravel()[k], tt.ravel()[k], float(vals[k])
        dr, dt = dr * 2 / _SHRINK, dt * 2 / _SHRINK
    return complex(_polar(best_r, best_t)), best_v


def th1_reference_objective(channel, ordering=(1, 2, 3)):
    """Vectorized chain-rule objective for one ordering, built from conditional_mi only."""
    ch = as_channel(channel)
    h = ch if tuple(ordering) == (1, 2, 3) else ch.permuted(ordering)
    first = conditional_mi(h, [1], [1])
    own3 = conditional_mi(h, [3], [3], [1, 2])

    def objective(rho):
        noise = pair_noise(rho)
        return (first + conditional_mi(h, [1, 2], [2], [1], noise)
                + np.maximum(conditional_mi(h, [1, 2], [3], [1, 2], noise), own3))

    return objective


def th1_oracle(channel, spec: GridSpec = DEFAULT_GRID) -> tuple[float, tuple, complex]:
    """Grid minimum over rho for every ordering, then the minimum over orderings.

    Returns ``(value, ordering, rho)``.
    """
    best = (math.inf, None, 0j)
    for order in itertools.permutations((1, 2, 3)):
        rho, v = grid_min_rho(th1_reference_objective(channel, order), spec)
        if v < best[0]:
            best = (v, order, rho)
    return best


def _mac_values(h, r, r1, r2):
    """log2 det(I + H H^H Sigma^-1) for batches; NaN where Sigma is not PD."""
    out = np.full(np.shape(r), np.nan)
    det = (1.0 + 2.0 * np.real(r * r2 * np.conj(r1))
           - np.abs(r) ** 2 - np.abs(r1) ** 2 - np.abs(r2) ** 2)
    ok = (np.abs(r) < 1.0) & (det > 1e-12)
    if np.any(ok):
        sigma = _noise_matrix(r[ok], r1[ok], r2[ok])
        out[ok] = conditional_mi(h, [1, 2, 3], [1, 2, 3], (), sigma)
    return out


def grid_min_covariance(channel, step: float = 0.02, refine_iters: int = 3,
                        complex_points: int = 9) -> tuple[NoiseCorrelation, float]:
    """Grid search for the worst-case unit-diagonal noise covariance.

    Real channels: a full grid over real ``(rho, rho1, rho2)`` with spacing
    ``step``. Complex channels: a coarser grid over all six real parameters
    with ``complex_points`` values each. Both are refined by local grids.
    """
    ch = as_channel(channel)
    h = ch.h
    real = bool(np.all(h.imag == 0.0))
    if real:
        axis = np.arange(-1.0 + step, 1.0 - step / 2, step)
        g = np.meshgrid(axis, axis, axis, indexing="ij")
        pts = [x.ravel().astype(complex) for x in g]
        width = [step] * 3
    else:
        axis = np.linspace(-0.8, 0.8, complex_points)
        g = np.meshgrid(*([axis] * 6), indexing="ij")
        flat = [x.ravel() for x in g]
        pts = [flat[0] + 1j * flat[1], flat[2] + 1j * flat[3], flat[4] + 1j * flat[5]]
        width = [axis[1] - axis[0]] * 6

    vals = _mac_values(h, *pts)
    k = int(np.nanargmin(vals))
    best = [p[k] for p in pts]
    best_v = float(vals[k])

    n_local = 11
    for _ in range(refine_iters):
        offsets = [np.linspace(-w, w, n_local) for w in width]
        if real:
            g = np.meshgrid(*offsets, indexing="ij")
            cand = [best[i].real + g[i].ravel() + 0j for i in range(3)]
        else:
            # coordinate-pair sweeps keep the 6-D refinement tractable
            cand = [np.array([b]) for b in best]
            for i in range(3):
                gr, gi = np.meshgrid(offsets[2 * i], offsets[2 * i + 1], indexing="ij")
                trial = [np.repeat(b, gr.size) for b in best]
                trial[i] = best[i] + gr.ravel() + 1j * gi.ravel()
                cand = [np.concatenate([c, t]) for c, t in zip(cand, trial)]
        vals = _mac_values(h, *cand)
        if np.all(np.isnan(vals)):
            break
        k = int(np.nanargmin(vals))
        if vals[k] <= best_v:
            best, best_v = [c[k] for c in cand], float(vals[k])
        width = [w / 5.0 for w in width]
    return NoiseCorrelation(*(complex(b) for b in best)), best_v


@dataclass(frozen=True)
class BoundaryOracle:
    rho: complex | None
    value: float
    crossings: int

    @property
    def empty(self) -> bool:
        return self.crossings == 0


def constrained_boundary_min(channel, ordering=(1, 2, 3), spec: GridSpec = DEFAULT_GRID,
                             bisections: int = 60) -> BoundaryOracle:
    """Minimum of the chain-rule objective on the case boundary, found ray by ray.

    The boundary is where the SNR of the combined (Y1, Y2) observation of X3
    equals the SNR ``|h33|^2`` of Y3; the combined SNR is recovered from
    ``I(Y1, Y2; X3 | X1, X2) = log2(1 + snr)``. On every angular ray, sign
    changes of ``snr - |h33|^2`` between adjacent grid radii are bracketed and
    bisected. Near the unit circle the boundary can be far thinner than any
    fixed band, so sampling points close to it misses parts of the arc.
    """
    ch = as_channel(channel)
    h = ch if tuple(ordering) == (1, 2, 3) else ch.permuted(ordering)
    g = abs(h.h[2, 2]) ** 2
    objective = th1_reference_objective(h)

    def excess(rho):
        return np.exp2(conditional_mi(h, [1, 2], [3], [1, 2], pair_noise(rho))) - 1.0 - g

    rmax = 1.0 - spec.boundary_margin
    radii = np.linspace(0.0, rmax, spec.radial_points)

    def roots_on(thetas):
        rr, tt = np.meshgrid(radii, thetas, indexing="ij")
        f = excess(_polar(rr, tt))
        i, j = np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))
        lo, hi, flo = radii[i], radii[i + 1], f[i, j]
        t = thetas[j]
        for _ in range(bisections):
            mid = 0.5 * (lo + hi)
            fm = excess(_polar(mid, t))
            left = np.sign(fm) == np.sign(flo)
            lo, flo = np.where(left, mid, lo), np.where(left, fm, flo)
            hi = np.where(left, hi, mid)
        return _polar(0.5 * (lo + hi), t), t

    thetas = np.linspace(0.0, 2 * np.pi, spec.angular_points, endpoint=False)
    rho, t = roots_on(thetas)
    count = int(rho.size)
    if count == 0:
        return BoundaryOracle(None, math.inf, 0)
    vals = objective(rho)
    k = int(np.argmin(vals))
    best, best_v, best_t = complex(rho[k]), float(vals[k]), float(t[k])

    dt = thetas[1] - thetas[0]
    for _ in range(spec.refine_iters):
        rho, t = roots_on(best_t + np.linspace(-dt, dt, 65))
        if rho.size:
            vals = objective(rho)
            k = int(np.argmin(vals))
            if vals[k] < best_v:
                best, best_v, best_t = complex(rho[k]), float(vals[k]), float(t[k])
        dt /= 16.0
    return BoundaryOracle(best, best_v, count)
