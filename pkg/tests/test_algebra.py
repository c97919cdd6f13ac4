"""States, seminorm variants, Monge-Kantorovich distances."""

import itertools

import numpy as np
import pytest

from coarseqm import linalg
from coarseqm.algebra import (
    ClassicalLipschitz,
    CommutatorWithD,
    MatrixState,
    ProbState,
    RepresentedAlgebra,
    Spread,
    jordan,
    mk_classical,
    mk_classical_report,
    mk_commutator_interval,
    mk_spread,
    mk_spread_witness,
    seminorm_eval,
)
from coarseqm.exceptions import DimensionMismatch, GapExceeded, NotAState
from coarseqm.metric import MetricSpace, validate_metric
from coarseqm.rng import density_sample, stream
from conftest import line013, random_hermitian

# ------------------------------------------------------------------ states


def test_prob_state_validation():
    ProbState(np.array([0.5, 0.5]))
    with pytest.raises(NotAState):
        ProbState(np.array([0.7, 0.7]))
    with pytest.raises(NotAState):
        ProbState(np.array([1.5, -0.5]))


def test_matrix_state_validation(rng):
    MatrixState(density_sample(rng, 3))
    with pytest.raises(NotAState):
        MatrixState(np.diag([0.6, 0.6]))
    with pytest.raises(NotAState):
        MatrixState(np.diag([1.5, -0.5]))


# ---------------------------------------------------------------- seminorms


def test_spread_examples():
    L = Spread(2)
    assert seminorm_eval(L, np.diag([1.0, -1.0])) == pytest.approx(1.0)
    assert seminorm_eval(L, np.eye(2)) == 0.0
    L3 = Spread(3)
    assert seminorm_eval(L3, np.diag([0.0, 1.0, 4.0])) == pytest.approx(2.0)


def test_seminorms_kill_unit_exactly(rng):
    space = line013()
    variants = [ClassicalLipschitz(space), Spread(3), CommutatorWithD(random_hermitian(rng, 3))]
    for L in variants:
        assert L.eval(L.unit_element()) == 0.0
        assert L.eval(2.5 * np.asarray(L.unit_element())) == 0.0


def test_seminorm_translation_invariance(rng):
    space = line013()
    variants = [ClassicalLipschitz(space), Spread(3), CommutatorWithD(random_hermitian(rng, 3))]
    for L in variants:
        for _ in range(5):
            if isinstance(L, ClassicalLipschitz):
                a = rng.standard_normal(3)
            else:
                a = random_hermitian(rng, 3)
            c = float(rng.uniform(-3, 3))
            shifted = a + c * np.asarray(L.unit_element())
            assert L.eval(shifted) == pytest.approx(L.eval(a), abs=1e-10)


def test_leibniz_property_spread_and_commutator(rng):
    D = random_hermitian(rng, 4)
    for L in (Spread(4), CommutatorWithD(D)):
        for _ in range(10):
            a = random_hermitian(rng, 4)
            b = random_hermitian(rng, 4)
            lhs = L.eval(jordan(a, b))
            rhs = linalg.op_norm(a) * L.eval(b) + L.eval(a) * linalg.op_norm(b)
            assert lhs <= rhs + 1e-9


def test_sample_unit_is_normalized(rng):
    space = line013()
    for L in (ClassicalLipschitz(space), Spread(4), CommutatorWithD(random_hermitian(rng, 4))):
        a = L.sample_unit(rng)
        assert a is not None
        assert L.eval(a) == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------- classical mk


def test_mk_two_points():
    space = validate_metric([[0.0, 1.0], [1.0, 0.0]])
    d = mk_classical(ProbState(np.array([1.0, 0.0])), ProbState(np.array([0.0, 1.0])), space)
    assert d == pytest.approx(1.0, abs=1e-9)


def test_mk_identical_states():
    space = line013()
    mu = ProbState(np.array([0.2, 0.3, 0.5]))
    assert mk_classical(mu, mu, space) == pytest.approx(0.0, abs=1e-9)


def test_mk_line_enumeration_oracle():
    space = line013()
    mu = ProbState(np.array([1.0, 0.0, 0.0]))
    nu = ProbState(np.ones(3) / 3.0)
    report = mk_classical_report(mu, nu, space)
    # transport oracle: with mu = delta_0 the marginal constraints force the
    # unique plan gamma[0, :] = nu, so the optimum is sum_y d(0, y) nu(y)
    oracle_plan = float(np.dot(space.dist[0], nu.p))
    # second oracle: CDF formula for measures on a line
    cdf_mu = np.cumsum(mu.p)
    cdf_nu = np.cumsum(nu.p)
    oracle_cdf = float(np.sum(np.abs(cdf_mu[:-1] - cdf_nu[:-1]) * np.diff([0.0, 1.0, 3.0])))
    assert oracle_plan == pytest.approx(4.0 / 3.0, abs=1e-15)
    assert oracle_cdf == pytest.approx(4.0 / 3.0, abs=1e-15)
    assert report.dual == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert report.primal == pytest.approx(4.0 / 3.0, abs=1e-9)
    assert report.gap <= 1e-7 * space.scale


def test_mk_is_metric_on_random_states(rng):
    space = MetricSpace(np.abs(np.subtract.outer([0.0, 1.0, 2.5, 4.0], [0.0, 1.0, 2.5, 4.0])))
    states = []
    for _ in range(4):
        p = rng.uniform(0, 1, 4)
        states.append(ProbState(p / p.sum()))
    d = {}
    for i, j in itertools.product(range(4), repeat=2):
        d[i, j] = mk_classical(states[i], states[j], space)
    for i, j, k in itertools.product(range(4), repeat=3):
        assert d[i, j] == pytest.approx(d[j, i], abs=1e-9)
        assert d[i, k] <= d[i, j] + d[j, k] + 1e-8


def test_mk_dual_potential_is_feasible(rng):
    space = line013()
    p = rng.uniform(0, 1, 3)
    q = rng.uniform(0, 1, 3)
    report = mk_classical_report(ProbState(p / p.sum()), ProbState(q / q.sum()), space)
    a = report.potential
    for i in range(3):
        for j in range(3):
            if i != j:
                assert abs(a[i] - a[j]) <= space.dist[i, j] + 1e-9


def test_mk_rejects_mismatched_state():
    space = line013()
    with pytest.raises(DimensionMismatch):
        mk_classical(ProbState(np.array([1.0, 0.0])), ProbState(np.ones(3) / 3), space)


# ---------------------------------------------------------------- spread mk


def test_mk_spread_examples(rng):
    rho = MatrixState(density_sample(rng, 3))
    assert mk_spread(rho, rho) == pytest.approx(0.0, abs=1e-12)
    q0, q1 = MatrixState(np.diag([1.0, 0.0])), MatrixState(np.diag([0.0, 1.0]))
    assert mk_spread(q0, q1) == pytest.approx(2.0, abs=1e-12)
    a = MatrixState(np.diag([0.75, 0.25]))
    b = MatrixState(np.diag([0.25, 0.75]))
    assert mk_spread(a, b) == pytest.approx(1.0, abs=1e-12)


def test_mk_spread_witness_achieves_value(rng):
    for _ in range(10):
        d = int(rng.integers(2, 6))
        phi, psi = MatrixState(density_sample(rng, d)), MatrixState(density_sample(rng, d))
        value, witness = mk_spread_witness(phi, psi)
        assert Spread(d).eval(witness) <= 1.0 + 1e-9
        pairing = float(np.trace((phi.rho - psi.rho) @ witness).real)
        assert pairing == pytest.approx(value, abs=1e-10)
        oracle = float(np.sum(np.abs(np.linalg.eigvalsh(phi.rho - psi.rho))))
        assert value == pytest.approx(oracle, abs=1e-9)


def test_mk_spread_diameter_two(rng):
    worst = 0.0
    for _ in range(30):
        d = int(rng.integers(2, 6))
        v = mk_spread(MatrixState(density_sample(rng, d)), MatrixState(density_sample(rng, d)))
        assert v <= 2.0 + 1e-9
        worst = max(worst, v)
    # orthogonal pure states achieve the diameter
    q0, q1 = MatrixState(np.diag([1.0, 0.0])), MatrixState(np.diag([0.0, 1.0]))
    assert mk_spread(q0, q1) == pytest.approx(2.0, abs=1e-12)


# ------------------------------------------------------- commutator-seminorm mk


def test_mk_commutator_unbounded_on_commutant_directions():
    Z = np.diag([1.0, -1.0]).astype(complex)
    ci = mk_commutator_interval(MatrixState(np.diag([0.75, 0.25])),
                                MatrixState(np.diag([0.25, 0.75])), Z)
    assert ci.lower == np.inf and ci.upper == np.inf


def test_mk_commutator_qubit_closed_form():
    Z = np.diag([1.0, -1.0]).astype(complex)
    X = np.array([[0.0, 1.0], [1.0, 0.0]])
    phi = MatrixState((np.eye(2) + 0.8 * X) / 2.0)
    psi = MatrixState((np.eye(2) - 0.8 * X) / 2.0)
    ci = mk_commutator_interval(phi, psi, Z, rng=stream(3, "mkc"), diameter=5.0)
    # sup tr(0.8 X a) over ||[Z, a]|| <= 1 is attained at a = X/2
    assert ci.lower == pytest.approx(0.8, abs=1e-9)
    assert ci.upper == 5.0


# ------------------------------------------------------- represented algebra


def test_represented_algebra_checks(rng):
    alg = RepresentedAlgebra((2, 3), (1, 2))
    assert alg.rep_dim == 2 + 6
    alg.check_representation(rng)
    a = [np.eye(2, dtype=complex), np.zeros((3, 3), dtype=complex)]
    emb = alg.embed(a)
    assert emb.shape == (8, 8)
    assert np.allclose(emb[:2, :2], np.eye(2))
    assert np.allclose(emb[2:, 2:], 0.0)
