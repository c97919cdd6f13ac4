"""Propagation, spectral witnesses, commutant seminorm, quasi-locality."""

import numpy as np
import pytest

from coarseqm import linalg
from coarseqm.algebra import ClassicalLipschitz, Spread
from coarseqm.coarse import (
    RepresentationOverMetric,
    annihilator_reconstruction,
    commutant_seminorm_interval,
    filtration_check,
    prop_interval,
    prop_relative,
    quasi_local_score,
    spectral_witness,
    support_prop,
)
from coarseqm.exceptions import BudgetZero, DimensionMismatch
from coarseqm.metric import MetricSpace
from coarseqm.rng import stream
from conftest import line013, random_hermitian


def matrix_unit(n, i, j):
    T = np.zeros((n, n), dtype=complex)
    T[i, j] = 1.0
    return T


def random_euclidean_space(rng, n):
    pts = rng.uniform(0, 10, (n, 2))
    d = np.sqrt(((pts[:, None] - pts[None, :]) ** 2).sum(-1))
    np.fill_diagonal(d, 0.0)
    return MetricSpace(d)


# ------------------------------------------------------------ support prop


def test_support_prop_examples():
    rep = RepresentationOverMetric(line013())
    assert support_prop(np.diag([1.0, 2.0, 3.0]), rep) == 0.0
    assert support_prop(matrix_unit(3, 0, 1), rep) == 1.0
    assert support_prop(np.ones((3, 3)), rep) == 3.0


def test_support_prop_with_multiplicity():
    rep = RepresentationOverMetric(line013(), (2, 1, 1))
    T = np.zeros((4, 4), dtype=complex)
    T[0, 3] = 1.0  # fiber 0 of point 0 -> point 2 (label "3")
    assert support_prop(T, rep) == 3.0
    T2 = np.zeros((4, 4), dtype=complex)
    T2[0, 1] = 1.0  # inside the fiber of point 0
    assert support_prop(T2, rep) == 0.0


def test_support_prop_dimension_check():
    rep = RepresentationOverMetric(line013())
    with pytest.raises(DimensionMismatch):
        support_prop(np.eye(4), rep)


# -------------------------------------------------------- spectral witness


def test_witness_zero_for_diagonal(rng):
    rep = RepresentationOverMetric(line013())
    a = rep.mult_op(rng.standard_normal(3))
    T = np.diag(rng.standard_normal(3)).astype(complex)
    assert spectral_witness(T, a, 0.5) == pytest.approx(0.0, abs=1e-12)


def test_witness_coordinate_function():
    rep = RepresentationOverMetric(line013())
    a = rep.mult_op(np.array([0.0, 1.0, 3.0]))
    T = matrix_unit(3, 0, 1)
    assert spectral_witness(T, a, 0.5) == pytest.approx(1.0, abs=1e-12)
    assert spectral_witness(T, a, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_witness_spread_ball_never_fires_beyond_two(rng):
    # L0(a) <= 1 forces the spectrum into a width-2 window
    L = Spread(4)
    for _ in range(20):
        a = L.sample_unit(rng)
        a = a + float(rng.uniform(-1, 1)) * np.eye(4)
        T = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert spectral_witness(T, a, 2.0) <= 1e-10


def test_witness_vanishes_at_support_radius(rng):
    # classical invariant: no violation at or beyond the support propagation
    space = random_euclidean_space(rng, 7)
    rep = RepresentationOverMetric(space)
    T = np.zeros((7, 7), dtype=complex)
    for _ in range(5):
        i, j = rng.integers(0, 7, 2)
        T[i, j] = rng.standard_normal()
    L = ClassicalLipschitz(space)
    p = support_prop(T, rep)
    for _ in range(10):
        f = L.sample_unit(rng)
        if f is None:
            continue
        a = rep.mult_op(np.asarray(f))
        assert spectral_witness(T, a, p) <= 1e-10
        assert spectral_witness(T, a, p + 0.5) <= 1e-10


# ----------------------------------------------------------- prop interval


def test_prop_interval_collapses_to_support():
    rep = RepresentationOverMetric(line013())
    report = prop_interval(matrix_unit(3, 0, 1), rep=rep)
    assert report.interval.lower == 1.0
    assert report.interval.upper == 1.0
    assert (0, 1) in report.support


def test_prop_interval_identity():
    rep = RepresentationOverMetric(line013())
    report = prop_interval(np.eye(3, dtype=complex), rep=rep)
    assert report.interval.lower == 0.0
    assert report.interval.upper == 0.0


def test_prop_interval_random_sparse_exact(rng):
    for _ in range(25):
        space = random_euclidean_space(rng, int(rng.integers(2, 13)))
        rep = RepresentationOverMetric(space)
        T = np.zeros((space.n, space.n), dtype=complex)
        for _ in range(int(rng.integers(1, space.n + 2))):
            i, j = rng.integers(0, space.n, 2)
            T[i, j] = rng.standard_normal() + 1j * rng.standard_normal()
        if linalg.op_norm(T) == 0.0:
            continue
        report = prop_interval(T, rep=rep)
        exact = support_prop(T, rep)
        assert report.interval.lower == exact
        assert report.interval.upper == exact


def test_prop_interval_without_rep_uses_diameter(rng):
    L = Spread(3)
    T = random_hermitian(rng, 3)
    report = prop_interval(T, seminorm=L, rng=rng, diameter=2.0)
    assert report.interval.upper == 2.0
    assert report.interval.lower <= report.interval.upper


def test_prop_relative():
    space = line013()
    rep = RepresentationOverMetric(space)
    T = matrix_unit(3, 0, 1)
    full = prop_relative(T, rep)
    assert full.interval.lower == full.interval.upper == 1.0
    scalars = prop_relative(T, RepresentationOverMetric(MetricSpace(np.zeros((1, 1))), (3,)))
    assert scalars.degenerate
    assert scalars.interval.upper == np.inf


def test_prop_relative_quotient_fibers(rng):
    # two fibers per point: the quotient sees only the point-block structure
    space = line013()
    rep = RepresentationOverMetric(space, (2, 2, 2))
    T = np.zeros((6, 6), dtype=complex)
    T[0, 3] = 1.0  # point 0 fiber 0 -> point 1 fiber 1
    report = prop_relative(T, rep)
    assert report.interval.lower == 1.0
    assert report.interval.upper == support_prop(T, rep) == 1.0


# ---------------------------------------------------- commutant seminorm


def test_commutant_interval_identity():
    space = line013()
    ci = commutant_seminorm_interval(np.eye(3, dtype=complex), ClassicalLipschitz(space),
                                     rng=stream(0, "id"))
    assert ci.lower == pytest.approx(0.0, abs=1e-12)
    assert ci.upper == pytest.approx(0.0, abs=1e-12)


def test_commutant_interval_matrix_unit_closed_form():
    space = line013()
    for x in range(3):
        for y in range(3):
            if x == y:
                continue
            ci = commutant_seminorm_interval(matrix_unit(3, x, y), ClassicalLipschitz(space),
                                             rng=stream(1, f"{x}{y}"))
            assert ci.lower == pytest.approx(space.dist[x, y], abs=1e-9)
            assert ci.upper == pytest.approx(3.0 * space.dist[x, y], abs=1e-9)


def test_commutant_interval_contract(rng):
    space = random_euclidean_space(rng, 6)
    for _ in range(5):
        T = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        ci = commutant_seminorm_interval(T, ClassicalLipschitz(space), rng=rng)
        assert ci.lower <= ci.upper + 1e-12


def test_commutant_interval_budget_zero():
    with pytest.raises(BudgetZero):
        commutant_seminorm_interval(np.eye(2, dtype=complex), Spread(2), budget=0)


def test_commutant_lower_reaches_sampled_commutators(rng):
    # the classical 8 prop ||T|| L(f) bound holds for every sampled witness
    space = random_euclidean_space(rng, 5)
    rep = RepresentationOverMetric(space)
    L = ClassicalLipschitz(space)
    T = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    p = support_prop(T, rep)
    nT = linalg.op_norm(T)
    for _ in range(10):
        f = L.sample_unit(rng)
        if f is None:
            continue
        val = linalg.op_norm(linalg.commutator(T, rep.mult_op(np.asarray(f))))
        assert val <= 8.0 * p * nT + 1e-9
        assert val <= 3.0 * p * nT + 1e-9  # the sharper constant


# ------------------------------------------------------------- quasi-local


def test_quasi_local_examples():
    rep = RepresentationOverMetric(line013())
    T = matrix_unit(3, 0, 1)
    assert quasi_local_score(T, 0.5, rep) == pytest.approx(1.0, abs=1e-12)
    assert quasi_local_score(T, 1.0, rep) == pytest.approx(0.0, abs=1e-12)
    assert quasi_local_score(np.diag([1.0, 2.0, 3.0]), 0.5, rep) == pytest.approx(0.0, abs=1e-12)


def test_quasi_local_zero_within_support_radius(rng):
    space = random_euclidean_space(rng, 6)
    rep = RepresentationOverMetric(space)
    T = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    assert quasi_local_score(T, support_prop(T, rep), rep) == pytest.approx(0.0, abs=1e-12)


# -------------------------------------------------------------- filtration


def test_filtration_identity_pair():
    rep = RepresentationOverMetric(line013())
    report = filtration_check([np.eye(3, dtype=complex)] * 2, rep)
    assert report.all_ok


def test_filtration_random_pairs_support_arithmetic(rng):
    space = random_euclidean_space(rng, 8)
    rep = RepresentationOverMetric(space)
    for _ in range(10):
        T = np.zeros((8, 8), dtype=complex)
        S = np.zeros((8, 8), dtype=complex)
        for _ in range(6):
            T[tuple(rng.integers(0, 8, 2))] = rng.standard_normal()
            S[tuple(rng.integers(0, 8, 2))] = rng.standard_normal()
        report = filtration_check([T, S], rep, radius=float(rng.uniform(0, space.scale)))
        assert report.all_ok, report.details


def test_reflexivity_detects_nonmember():
    rep = RepresentationOverMetric(line013())
    T = matrix_unit(3, 0, 2)  # support propagation 3
    annihilated, member = annihilator_reconstruction(T, rep, 1.0)
    assert not annihilated and not member  # equivalence holds, membership fails
    annihilated, member = annihilator_reconstruction(T, rep, 3.0)
    assert annihilated and member


def test_prop_interval_close_support_distances():
    # two support distances inside one bisection bracket still snap exactly
    d01, d02 = 1.0, 1.0 + 3e-7
    D = np.array([[0.0, d01, d02], [d01, 0.0, d01], [d02, d01, 0.0]])
    rep = RepresentationOverMetric(MetricSpace(D))
    for occupied in ([(0, 1)], [(0, 2)], [(0, 1), (0, 2)]):
        T = np.zeros((3, 3), dtype=complex)
        for i, j in occupied:
            T[i, j] = 1.0
        report = prop_interval(T, rep=rep)
        assert report.interval.lower == support_prop(T, rep)
