"""Mutual information of jointly Gaussian channels with correlated noise.

Inputs are iid circularly-symmetric complex Gaussian with unit variance, so
every mutual information is a difference of log-determinants (no factor
1/2). Computations run in nats and are converted to bits on return.

The second half of the module covers the two-receiver MISO problem

    Y_c = c_c^H X + Z_c,   c = 1, 2,   rho = E[Z_1 Z_2^*],

and the closed-form minimum of ``I(Y_1; X | Y_2)`` over the noise
correlation ``rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import ChannelMatrix
from .errors import BoundaryCorrelation, SingularCovariance

__all__ = [
    "LN2",
    "NoiseCorrelation",
    "MisoPair",
    "LemmaResult",
    "pair_noise",
    "logdet_hermitian",
    "conditional_mi",
    "lemma_mi_at_rho",
    "lemma_min_mi",
    "rho_zero_mi",
]

LN2 = math.log(2.0)


@dataclass(frozen=True)
class NoiseCorrelation:
    """Correlations of the unit-variance noises ``(Z_1, Z_2, Z_3)``.

    ``rho = E[Z1 Z2*]``, ``rho1 = E[Z1 Z3*]``, ``rho2 = E[Z2 Z3*]``. Fields may
    be scalars or broadcastable arrays (for grid evaluation).
    """

    rho: complex = 0j
    rho1: complex = 0j
    rho2: complex = 0j

    def __post_init__(self):
        r, r1, r2 = (np.asarray(x, dtype=complex) for x in (self.rho, self.rho1, self.rho2))
        tol = 1e-12
        if np.any(np.abs(r) > 1 + tol) or np.any(np.abs(r1) > 1 + tol) or np.any(np.abs(r2) > 1 + tol):
            raise ValueError("noise correlations must satisfy |rho| <= 1")
        if np.any(_det3(r, r1, r2) < -tol):
            raise ValueError("noise correlation matrix is not positive semidefinite")

    def matrix(self) -> np.ndarray:
        return _noise_matrix(self.rho, self.rho1, self.rho2)


def _noise_matrix(r, r1, r2) -> np.ndarray:
    r, r1, r2 = np.broadcast_arrays(*(np.asarray(x, dtype=complex) for x in (r, r1, r2)))
    out = np.zeros(r.shape + (3, 3), dtype=complex)
    out[..., 0, 0] = out[..., 1, 1] = out[..., 2, 2] = 1.0
    out[..., 0, 1], out[..., 1, 0] = r, np.conj(r)
    out[..., 0, 2], out[..., 2, 0] = r1, np.conj(r1)
    out[..., 1, 2], out[..., 2, 1] = r2, np.conj(r2)
    return out


def _det3(r, r1, r2):
    return (1.0 + 2.0 * np.real(r * r2 * np.conj(r1))
            - np.abs(r) ** 2 - np.abs(r1) ** 2 - np.abs(r2) ** 2)


def pair_noise(rho) -> np.ndarray:
    """Noise covariance with correlation ``rho`` between outputs 1 and 2 only.

    Skips the PSD validation of NoiseCorrelation, so grid code can build
    large batches cheaply; callers must keep ``|rho| < 1``.
    """
    return _noise_matrix(rho, 0j, 0j)


def logdet_hermitian(k: np.ndarray) -> np.ndarray:
    """Natural log-determinant of a (batch of) Hermitian positive-definite matrices.

    Matrices up to 3x3 use explicit expansions so large batches stay
    vectorized; positive definiteness is checked with leading principal
    minors. Raises SingularCovariance if any matrix is not positive definite.
    """
    k = np.asarray(k)
    n = k.shape[-1]
    if n == 1:
        minors = [k[..., 0, 0].real]
    elif n == 2:
        a, d = k[..., 0, 0].real, k[..., 1, 1].real
        minors = [a, a * d - np.abs(k[..., 0, 1]) ** 2]
    elif n == 3:
        a, e, i = k[..., 0, 0].real, k[..., 1, 1].real, k[..., 2, 2].real
        b, c, f = k[..., 0, 1], k[..., 0, 2], k[..., 1, 2]
        m2 = a * e - np.abs(b) ** 2
        det = (a * e * i + 2.0 * np.real(b * f * np.conj(c))
               - a * np.abs(f) ** 2 - e * np.abs(c) ** 2 - i * np.abs(b) ** 2)
        minors = [a, m2, det]
    else:
        try:
            chol = np.linalg.cholesky(k)
        except np.linalg.LinAlgError as exc:
            raise SingularCovariance(str(exc)) from exc
        return 2.0 * np.sum(np.log(np.abs(np.diagonal(chol, axis1=-2, axis2=-1))), axis=-1)
    for m in minors:
        if np.any(~(m > 0.0)):
            raise SingularCovariance("covariance matrix is not positive definite")
    return np.log(minors[-1])


def _indices(s: Iterable[int], name: str) -> list[int]:
    out = sorted({int(i) for i in s})
    if any(i < 1 or i > 3 for i in out):
        raise ValueError(f"{name} must be drawn from {{1, 2, 3}}, got {out}")
    return [i - 1 for i in out]


def conditional_mi(channel, outputs, inputs, given_inputs=(), noise=None):
    """``I(Y_A; X_B | X_C)`` in bits for iid unit-variance Gaussian inputs.

    Parameters
    ----------
    channel : ChannelMatrix or array_like, shape (3, 3)
    outputs, inputs, given_inputs : iterables of 1-based user indices
        ``inputs`` and ``given_inputs`` must be disjoint. Inputs in neither
        set are treated as Gaussian interference.
    noise : NoiseCorrelation, array of shape (..., 3, 3), or None
        Joint noise covariance; None means independent noises. A batched
        array gives a batched result.

    Returns
    -------
    float or ndarray
        ``log2 det K(Y_A | X_C) - log2 det K(Y_A | X_B, X_C)``.
    """
    h = channel.h if isinstance(channel, ChannelMatrix) else np.asarray(channel, dtype=complex)
    a = _indices(outputs, "outputs")
    b = _indices(inputs, "inputs")
    c = _indices(given_inputs, "given_inputs")
    if not a or not b:
        raise ValueError("outputs and inputs must be non-empty")
    if set(b) & set(c):
        raise ValueError("inputs and given_inputs must be disjoint")
    rest = [j for j in range(h.shape[1]) if j not in b and j not in c]

    if noise is None:
        sigma = np.eye(3, dtype=complex)
    elif isinstance(noise, NoiseCorrelation):
        sigma = noise.matrix()
    else:
        sigma = np.asarray(noise, dtype=complex)
    sigma_a = sigma[..., a, :][..., :, a]

    h_free = h[np.ix_(a, b + rest)]
    h_rest = h[np.ix_(a, rest)]
    k_signal = sigma_a + h_free @ h_free.conj().T
    k_noise = sigma_a + h_rest @ h_rest.conj().T
    nats = logdet_hermitian(k_signal) - logdet_hermitian(k_noise)
    out = nats / LN2
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class MisoPair:
    """Channel vectors of two MISO receivers ``Y_c = c_c^H X + Z_c``.

    Use :meth:`from_rows` when starting from gain rows ``y = r X + z``,
    which corresponds to ``c = conj(r)``.
    """

    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self):
        c1 = np.atleast_1d(np.asarray(self.c1, dtype=complex))
        c2 = np.atleast_1d(np.asarray(self.c2, dtype=complex))
        if c1.ndim != 1 or c1.shape != c2.shape or c1.size < 1:
            raise ValueError("c1 and c2 must be 1-D vectors of equal length >= 1")
        if not (np.all(np.isfinite(c1)) and np.all(np.isfinite(c2))):
            raise ValueError("channel vectors must be finite")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    @classmethod
    def from_rows(cls, r1, r2) -> "MisoPair":
        return cls(np.conj(np.asarray(r1, dtype=complex)), np.conj(np.asarray(r2, dtype=complex)))

    @property
    def inner(self) -> complex:
        """``c1^H c2``."""
        return complex(np.vdot(self.c1, self.c2))

    @property
    def norms2(self) -> tuple[float, float]:
        return float(np.vdot(self.c1, self.c1).real), float(np.vdot(self.c2, self.c2).real)


@dataclass(frozen=True)
class LemmaResult:
    value_bits: float
    rho_opt: complex
    t: float | None
    degenerate: bool = False


def lemma_mi_at_rho(pair: MisoPair, rho):
    """``I(Y_1; X | Y_2)`` in bits at noise correlation ``rho`` (|rho| < 1).

    Accepts scalar or array ``rho``.
    """
    rho = np.asarray(rho, dtype=complex)
    if np.any(np.abs(rho) >= 1.0):
        raise BoundaryCorrelation("lemma objective needs |rho| < 1")
    n1, n2 = pair.norms2
    num = 1.0 + n1 - np.abs(pair.inner + rho) ** 2 / (1.0 + n2)
    out = np.log(num / (1.0 - np.abs(rho) ** 2)) / LN2
    return float(out) if out.ndim == 0 else out


def lemma_min_mi(pair: MisoPair) -> LemmaResult:
    """Closed-form minimum over ``rho`` of ``I(Y_1; X | Y_2)``.

    With ``s = |c1^H c2|`` and ``t = ((1+|c1|^2)(1+|c2|^2) - s^2 - 1) / (2 s)``
    the minimum is ``log(1 + s (t + sqrt(t^2 - 1))) - log(1 + |c2|^2)``,
    attained at ``rho = (t - sqrt(t^2 - 1)) exp(1j * angle(c1^H c2))``.
    Orthogonal vectors (``s = 0``) give ``log(1 + |c1|^2)`` at ``rho = 0``.
    """
    n1, n2 = pair.norms2
    ip = pair.inner
    s = abs(ip)
    if s == 0.0:
        return LemmaResult(math.log1p(n1) / LN2, 0j, None, degenerate=True)
    # num = 2 s t; written without the division so tiny s stays accurate.
    num = (1.0 + n1) * (1.0 + n2) - s * s - 1.0
    root = math.sqrt(max(num * num - 4.0 * s * s, 0.0))
    # s (t + sqrt(t^2 - 1)) = (num + root) / 2
    value = (math.log1p((num + root) / 2.0) - math.log1p(n2)) / LN2
    t = max(num / (2.0 * s), 1.0)  # rounding can push t a few ulps below 1
    # t - sqrt(t^2 - 1) = 1 / (t + sqrt(t^2 - 1)), free of cancellation
    mag = min(2.0 * s / (num + root), 1.0)
    return LemmaResult(value, mag * ip / s, t)


def rho_zero_mi(pair: MisoPair) -> float:
    """``I(Y_1; X | Y_2)`` in bits for independent noises."""
    n1, n2 = pair.norms2
    s2 = abs(pair.inner) ** 2
    return math.log(1.0 + n1 - s2 / (1.0 + n2)) / LN2
