import math

import numpy as np
import pytest

from ifcbounds.channel import standardize
from ifcbounds.errors import EmptyBoundary
from ifcbounds.gaussinfo import MisoPair, lemma_mi_at_rho, lemma_min_mi
from ifcbounds.oracle import (GridSpec, constrained_boundary_min, grid_min_covariance,
                              grid_min_rho, th1_reference_objective)
from ifcbounds.theorem1 import (ORDERINGS, CaseLabel, boundary_circle, th1_objective_at_rho,
                                th1_ordering)
from ifcbounds.verify import random_channel, random_miso_pair


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(radial_points=1)
    with pytest.raises(ValueError):
        GridSpec(boundary_margin=0.0)
    with pytest.raises(ValueError):
        GridSpec(boundary_margin=1e-2)


def test_quadratic_minimum():
    rho, v = grid_min_rho(lambda r: np.abs(r - 0.3) ** 2)
    assert abs(rho - 0.3) < 1e-6 and v < 1e-12


def test_orthogonal_pair_argmin_is_zero():
    pair = MisoPair([1, 1], [1, -1])
    rho, v = grid_min_rho(lambda r: lemma_mi_at_rho(pair, r))
    assert abs(rho) < 1e-6
    assert v == pytest.approx(math.log2(3))


def test_random_pair_matches_lemma(rng):
    for _ in range(5):
        pair = random_miso_pair(rng, 3)
        _, v = grid_min_rho(lambda r: lemma_mi_at_rho(pair, r))
        assert v == pytest.approx(lemma_min_mi(pair).value_bits, abs=1e-3)


def test_reference_objective_matches_library(channels):
    rho = np.array([0, 0.4 - 0.3j, -0.95])
    for ch in channels[:3]:
        for order in ORDERINGS:
            np.testing.assert_allclose(th1_reference_objective(ch, order)(rho),
                                       th1_objective_at_rho(ch, order, rho), atol=1e-12)


def test_monotone_in_resolution(rng):
    # n -> 2n - 1 radii and doubled angles give nested grids
    specs = [GridSpec(33, 64, 0), GridSpec(65, 128, 0), GridSpec(129, 256, 0)]
    for _ in range(3):
        pair = random_miso_pair(rng, 2)
        vals = [grid_min_rho(lambda r: lemma_mi_at_rho(pair, r), s)[1] for s in specs]
        assert vals[1] <= vals[0] + 1e-12 and vals[2] <= vals[1] + 1e-12
        refined = grid_min_rho(lambda r: lemma_mi_at_rho(pair, r), GridSpec(33, 64, 3))[1]
        assert refined <= vals[0] + 1e-12


def test_covariance_oracle_identity_and_diagonal():
    corr, v = grid_min_covariance(np.eye(3))
    assert v == pytest.approx(3.0, abs=1e-9)
    assert max(abs(corr.rho), abs(corr.rho1), abs(corr.rho2)) < 1e-9
    corr, v = grid_min_covariance(standardize(np.diag([2.0, 0.5, 3.0])))
    assert max(abs(corr.rho), abs(corr.rho1), abs(corr.rho2)) < 1e-9
    assert v == pytest.approx(math.log2(5 * 1.25 * 10), abs=1e-9)


def test_complex_covariance_oracle_is_feasible(rng):
    ch = random_channel(rng)
    corr, v = grid_min_covariance(ch, complex_points=5)
    assert np.all(np.linalg.eigvalsh(corr.matrix()) > 0)
    assert v <= math.log2(np.linalg.det(np.eye(3) + ch.h @ ch.h.conj().T).real) + 1e-9


def test_boundary_oracle_degenerate():
    ch = standardize([[1, 0.5, 0], [0.3, 1, 0], [0.2, 0.1, 1]])
    assert constrained_boundary_min(ch).empty


def test_boundary_oracle_empty_matches_theorem():
    ch = standardize([[1, 0.4, 0.5], [0.3, 1, 2.0], [0.2, 0.1, 1]])
    with pytest.raises(EmptyBoundary):
        boundary_circle(ch)
    assert constrained_boundary_min(ch).empty


def test_boundary_oracle_matches_case3():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 3:
        ch = random_channel(rng)
        for order in ORDERINGS:
            rep = th1_ordering(ch, order)
            if rep.case_label is CaseLabel.Case3_boundary:
                bnd = constrained_boundary_min(ch, order)
                assert not bnd.empty
                assert bnd.value == pytest.approx(rep.value_bits, abs=1e-3)
                checked += 1
                break
