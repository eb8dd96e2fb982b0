"""Three-user Gaussian interference channels in standard form.

A channel is a 3x3 complex gain matrix ``H`` with ``H[i, j]`` the gain from
transmitter ``j`` to receiver ``i``. In standard form every input has unit
power, every noise has unit variance and the direct gains ``H[i, i]`` are
real and strictly positive. The transmit power ``P`` is folded into the
matrix, so downstream code never sees a separate power parameter.

User labels in the public API are 1-based (users 1, 2, 3).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegeneratePower, InvalidFamilyParams, ZeroDirectGain

__all__ = [
    "ChannelMatrix",
    "Family",
    "FamilySpec",
    "standardize",
    "as_channel",
    "build_family",
    "alpha_to_cross_gain",
    "db_to_linear",
    "channel_from_json",
    "family_from_json",
    "load_channel_or_family",
]


def db_to_linear(power_db: float) -> float:
    return 10.0 ** (power_db / 10.0)


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """Immutable 3x3 channel matrix in standard form."""

    h: np.ndarray

    def __post_init__(self):
        h = np.array(self.h, dtype=complex)
        if h.shape != (3, 3):
            raise ValueError(f"channel matrix must be 3x3, got shape {h.shape}")
        if not np.all(np.isfinite(h)):
            raise ValueError("channel gains must be finite")
        d = np.diag(h)
        if np.any(d.imag != 0.0) or np.any(d.real <= 0.0):
            raise ValueError(
                "direct gains must be real and strictly positive; "
                "use standardize() on raw matrices")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    def gain(self, i: int, j: int) -> complex:
        """Gain from transmitter ``j`` to receiver ``i`` (1-based)."""
        return complex(self.h[i - 1, j - 1])

    def row(self, k: int) -> np.ndarray:
        """Gains seen at receiver ``k`` (1-based) as a row vector."""
        return self.h[k - 1].copy()

    def permuted(self, order: Sequence[int]) -> "ChannelMatrix":
        """Relabel users so that role ``r`` is played by user ``order[r]``.

        ``order`` is a permutation of (1, 2, 3).
        """
        idx = [o - 1 for o in order]
        if sorted(idx) != [0, 1, 2]:
            raise ValueError(f"not a permutation of (1, 2, 3): {order}")
        return ChannelMatrix(self.h[np.ix_(idx, idx)])

    def __eq__(self, other):
        if not isinstance(other, ChannelMatrix):
            return NotImplemented
        return bool(np.array_equal(self.h, other.h))

    def __hash__(self):
        return hash(self.h.tobytes())

    def __repr__(self):
        return f"ChannelMatrix({np.array2string(self.h, precision=6)})"

    def to_json(self) -> dict:
        return {"H": [[[float(z.real), float(z.imag)] for z in row] for row in self.h]}


def standardize(raw) -> ChannelMatrix:
    """Rotate each row so that the direct gain becomes real and positive.

    Receiver ``i`` can undo the phase of ``h_ii``, so row ``i`` is multiplied
    by ``exp(-1j * angle(h_ii))``. Off-diagonal magnitudes are untouched.
    """
    if isinstance(raw, ChannelMatrix):
        return raw
    h = np.array(raw, dtype=complex)
    if h.shape != (3, 3):
        raise ValueError(f"channel matrix must be 3x3, got shape {h.shape}")
    d = np.diag(h)
    mags = np.abs(d)
    if np.any(mags == 0.0):
        k = int(np.flatnonzero(mags == 0.0)[0]) + 1
        raise ZeroDirectGain(f"direct gain h_{k}{k} is zero")
    # rows already in standard form are left bit-for-bit unchanged
    done = (d.imag == 0.0) & (d.real > 0.0)
    phasors = np.where(done, 1.0, np.conj(d) / np.where(done, 1.0, mags))
    out = h * phasors[:, None]
    out[np.diag_indices(3)] = mags
    return ChannelMatrix(out)


def as_channel(x) -> ChannelMatrix:
    """Accept a ChannelMatrix or anything array-like and return standard form."""
    return x if isinstance(x, ChannelMatrix) else standardize(x)


class Family(enum.Enum):
    FullySymmetric = "FullySymmetric"
    CyclicSymmetric = "CyclicSymmetric"
    MixedStrongVeryStrong = "MixedStrongVeryStrong"
    Custom = "Custom"

    @classmethod
    def parse(cls, name: "str | Family") -> "Family":
        if isinstance(name, Family):
            return name
        key = name.replace("_", "").replace("-", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        aliases = {"fully": cls.FullySymmetric, "symmetric": cls.FullySymmetric,
                   "cyclic": cls.CyclicSymmetric, "mixed": cls.MixedStrongVeryStrong}
        if key in aliases:
            return aliases[key]
        raise InvalidFamilyParams(f"unknown channel family {name!r}")


@dataclass(frozen=True)
class FamilySpec:
    """Parameters of the structured family ``sqrt(P) [[1,h1,h2],[h2,1,h1],[h1,h2,1]]``.

    For ``FullySymmetric`` only ``h1`` is read (``h2 = h1``); for
    ``CyclicSymmetric`` ``h2`` is forced to zero.
    """

    kind: Family
    power_db: float
    h1: complex = 0j
    h2: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "kind", Family.parse(self.kind))
        object.__setattr__(self, "h1", complex(self.h1))
        object.__setattr__(self, "h2", complex(self.h2))
        if not math.isfinite(self.power_db):
            raise InvalidFamilyParams("power_db must be finite")
        if not (np.isfinite(self.h1) and np.isfinite(self.h2)):
            raise InvalidFamilyParams("cross gains must be finite")
        if self.kind is Family.MixedStrongVeryStrong:
            p = db_to_linear(self.power_db)
            a1, a2 = abs(self.h1) ** 2, abs(self.h2) ** 2
            # relative slack so points on the boundary survive a sqrt/square round trip
            if a1 < 1.0 - 1e-12 or a2 < (1.0 + a1 + 1.0 / p) * (1.0 - 1e-12):
                raise InvalidFamilyParams(
                    f"mixed strong-very strong needs |h1|^2 >= 1 and "
                    f"|h2|^2 >= 1 + |h1|^2 + 1/P (got {a1:.6g}, {a2:.6g}, P={p:.6g})")

    @property
    def cross_gains(self) -> tuple[complex, complex]:
        if self.kind is Family.FullySymmetric:
            return self.h1, self.h1
        if self.kind is Family.CyclicSymmetric:
            return self.h1, 0j
        return self.h1, self.h2

    def to_json(self) -> dict:
        return {"family": self.kind.value, "power_db": self.power_db,
                "h1": [self.h1.real, self.h1.imag], "h2": [self.h2.real, self.h2.imag]}


def build_family(spec: FamilySpec) -> ChannelMatrix:
    h1, h2 = spec.cross_gains
    # FamilySpec validates on construction; re-check in case it was bypassed.
    if spec.kind is Family.MixedStrongVeryStrong:
        FamilySpec(spec.kind, spec.power_db, h1, h2)
    base = np.array([[1, h1, h2], [h2, 1, h1], [h1, h2, 1]], dtype=complex)
    return standardize(math.sqrt(db_to_linear(spec.power_db)) * base)


def alpha_to_cross_gain(alpha: float, power_db: float) -> float:
    """Cross-gain magnitude ``|h|`` giving interference exponent ``alpha``.

    With ``alpha = log(P |h|^2) / log(P)`` the cross-link INR is ``P**alpha``.
    """
    if power_db <= 0.0:
        raise DegeneratePower(f"alpha is undefined for P <= 0 dB (got {power_db} dB)")
    p = db_to_linear(power_db)
    return p ** ((alpha - 1.0) / 2.0)


def _parse_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"expected [re, im] pair or number, got {v!r}")


def channel_from_json(obj: dict) -> ChannelMatrix:
    rows = obj["H"]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("'H' must be a 3x3 array of [re, im] pairs")
    return standardize([[_parse_complex(z) for z in r] for r in rows])


def family_from_json(obj: dict) -> FamilySpec:
    return FamilySpec(Family.parse(obj["family"]), float(obj["power_db"]),
                      _parse_complex(obj.get("h1", 0.0)), _parse_complex(obj.get("h2", 0.0)))


def load_channel_or_family(text: str) -> ChannelMatrix | FamilySpec:
    """Parse either JSON representation; raises ValueError on bad input."""
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    if "H" in obj:
        return channel_from_json(obj)
    if "family" in obj:
        return family_from_json(obj)
    raise ValueError("JSON must contain either 'H' or 'family'")
