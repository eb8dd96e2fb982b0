import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifcbounds.channel import (ChannelMatrix, Family, FamilySpec, alpha_to_cross_gain,
                               build_family, load_channel_or_family, standardize)
from ifcbounds.errors import DegeneratePower, InvalidFamilyParams, ZeroDirectGain


def test_identity_is_already_standard():
    assert standardize(np.eye(3)) == ChannelMatrix(np.eye(3))


def test_phase_of_direct_gain_is_removed():
    a, b = 0.3 + 0.4j, -1.2 + 0.1j
    w = np.exp(1j * np.pi / 4)
    raw = np.eye(3, dtype=complex)
    raw[0] = [w, a, b]
    ch = standardize(raw)
    np.testing.assert_allclose(ch.h[0], [1.0, a / w, b / w], atol=1e-15)
    assert ch.h[0, 0].imag == 0.0


def test_zero_direct_gain_rejected():
    raw = np.eye(3)
    raw[1, 1] = 0.0
    with pytest.raises(ZeroDirectGain):
        standardize(raw)


def test_nonstandard_matrix_rejected_by_constructor():
    with pytest.raises(ValueError):
        ChannelMatrix(np.diag([1.0, -1.0, 1.0]))
    with pytest.raises(ValueError):
        ChannelMatrix(np.eye(2))


def test_channel_is_immutable():
    ch = standardize(np.eye(3))
    with pytest.raises(ValueError):
        ch.h[0, 1] = 2.0


finite = st.floats(-5, 5, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(finite, min_size=18, max_size=18))
def test_standardize_idempotent(vals):
    raw = np.array(vals[:9]).reshape(3, 3) + 1j * np.array(vals[9:]).reshape(3, 3)
    raw[np.diag_indices(3)] += 6.0  # keep direct gains away from zero
    once = standardize(raw)
    assert standardize(once.h) == once
    assert standardize(once) is once


def test_family_examples():
    assert build_family(FamilySpec(Family.FullySymmetric, 0.0, 0.0)) == ChannelMatrix(np.eye(3))
    cyc = build_family(FamilySpec(Family.CyclicSymmetric, 20.0, 0.1, 0.7))
    np.testing.assert_allclose(cyc.h, [[10, 1, 0], [0, 10, 1], [1, 0, 10]], atol=1e-12)
    with pytest.raises(InvalidFamilyParams):
        FamilySpec(Family.MixedStrongVeryStrong, 20.0, 1.0, 1.0)


def test_mixed_family_boundary_point_is_valid():
    p = 100.0
    h2 = math.sqrt(1 + 2.0 + 1 / p)
    spec = FamilySpec(Family.MixedStrongVeryStrong, 20.0, math.sqrt(2.0), h2)
    assert build_family(spec).h[0, 2] == pytest.approx(10 * h2)


def test_fully_symmetric_is_circulant_and_relabel_invariant():
    ch = build_family(FamilySpec(Family.FullySymmetric, 13.0, 0.4 - 0.2j))
    assert ch.permuted((2, 3, 1)) == ch
    offdiag = ch.h[~np.eye(3, dtype=bool)]
    np.testing.assert_allclose(offdiag, offdiag[0])


def test_alpha_to_cross_gain():
    assert alpha_to_cross_gain(1.0, 37.0) == pytest.approx(1.0)
    assert alpha_to_cross_gain(0.5, 20.0) == pytest.approx(100 ** -0.25)
    assert alpha_to_cross_gain(2.0, 20.0) == pytest.approx(10.0)
    with pytest.raises(DegeneratePower):
        alpha_to_cross_gain(0.5, 0.0)


def test_family_name_parsing():
    assert Family.parse("cyclic_symmetric") is Family.CyclicSymmetric
    assert Family.parse("FullySymmetric") is Family.FullySymmetric
    with pytest.raises(InvalidFamilyParams):
        Family.parse("triangular")


def test_json_round_trip(rng):
    raw = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) + 3 * np.eye(3)
    ch = standardize(raw)
    import json
    again = load_channel_or_family(json.dumps(ch.to_json()))
    np.testing.assert_array_equal(again.h, ch.h)
    fam = load_channel_or_family('{"family": "Cyclic", "power_db": 10, "h1": [0.5, 0]}')
    assert fam.kind is Family.CyclicSymmetric and fam.h1 == 0.5


@pytest.mark.parametrize("text", ["[1, 2]", '{"x": 1}', '{"H": [[1, 2]]}', "{bad"])
def test_bad_json_rejected(text):
    with pytest.raises(ValueError):
        load_channel_or_family(text)
