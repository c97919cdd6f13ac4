"""Union spaces, almost-commutative spaces, oscillation scores, corona maps."""

from fractions import Fraction

import numpy as np
import pytest

from coarseqm import linalg
from coarseqm.algebra import MatrixState, ProbState
from coarseqm.constructions import (
    ACSpace,
    ClassicalComponent,
    MatrixComponent,
    UnionElement,
    UnionSpace,
    ac_block,
    ac_embed,
    ac_prop_sandwich,
    ac_reassemble,
    ac_sample_unit,
    ac_seminorm,
    approx_unit,
    corona_maps_check,
    covering_number_probe,
    mk_union,
    slow_osc_operator_score,
    slow_osc_score,
    union_seminorm,
)
from coarseqm.coarse import RepresentationOverMetric, support_prop
from coarseqm.exceptions import CutoffOutOfRange, DimensionMismatch
from coarseqm.metric import MetricSpace
from coarseqm.rng import density_sample, hermitian_sample, stream
from conftest import line013


def classical_comp(anchor=None):
    space = line013()
    p = np.array([1.0, 0.0, 0.0]) if anchor is None else anchor
    return ClassicalComponent(space, ProbState(p))


def two_point_comp():
    return ClassicalComponent(MetricSpace(np.array([[0.0, 2.0], [2.0, 0.0]])),
                              ProbState(np.array([0.5, 0.5])))


def qubit_comp():
    return MatrixComponent(2, MatrixState(np.diag([1.0, 0.0])))


def demo_union(gaps=(2.0, 5.0, 11.0)):
    return UnionSpace((classical_comp(), qubit_comp(), two_point_comp()), gaps)


# ---------------------------------------------------------------- seminorm


def test_union_seminorm_global_scalar_is_zero():
    u = demo_union()
    el = UnionElement((3.0 * np.ones(3), 3.0 * np.eye(2, dtype=complex), 3.0 * np.ones(2)),
                      tail=3.0)
    assert union_seminorm(el, u) == 0.0


def test_union_seminorm_jump_term():
    u = UnionSpace((classical_comp(), two_point_comp()), (5.0, 7.0))
    el = UnionElement((np.ones(3), np.zeros(2)), tail=0.0)
    assert union_seminorm(el, u) == pytest.approx(1.0 / 5.0, abs=1e-15)


def test_union_seminorm_component_term_dominates():
    u = UnionSpace((classical_comp(), two_point_comp()), (100.0, 200.0))
    el = UnionElement((np.array([0.0, 0.9, 0.9]), np.zeros(2)), tail=0.0)
    # Lipschitz constant of (0, .9, .9) on {0,1,3} is 0.9
    assert union_seminorm(el, u) == pytest.approx(0.9, abs=1e-12)


def test_union_seminorm_is_seminorm(rng):
    u = demo_union()

    def sample():
        return UnionElement((rng.standard_normal(3), hermitian_sample(rng, 2),
                             rng.standard_normal(2)), tail=float(rng.standard_normal()))

    for _ in range(10):
        a, b = sample(), sample()
        la = union_seminorm(a, u)
        lb = union_seminorm(b, u)
        lam = float(rng.uniform(-3, 3))
        scaled = UnionElement(tuple(lam * np.asarray(p) for p in a.parts), tail=lam * a.tail)
        assert union_seminorm(scaled, u) == pytest.approx(abs(lam) * la, abs=1e-10)
        summed = UnionElement(tuple(np.asarray(x) + np.asarray(y)
                                    for x, y in zip(a.parts, b.parts)), tail=a.tail + b.tail)
        assert union_seminorm(summed, u) <= la + lb + 1e-10


def test_approx_units_exact_rational():
    line = line013()
    u = UnionSpace(
        (ClassicalComponent(line, ProbState(np.array([Fraction(1), Fraction(0), Fraction(0)],
                                                     dtype=object))),
         ClassicalComponent(MetricSpace(np.array([[0.0, 1.0], [1.0, 0.0]])),
                            ProbState(np.array([Fraction(1, 2), Fraction(1, 2)], dtype=object)))),
        (Fraction(3), Fraction(9, 2)))
    el0, v0 = approx_unit(u, 0)
    assert isinstance(v0, Fraction) and v0 == Fraction(1, 3)
    el1, v1 = approx_unit(u, 1)
    assert isinstance(v1, Fraction) and v1 == Fraction(2, 9)
    assert union_seminorm(el0, u) == Fraction(1, 3)


def test_approx_units_float():
    u = demo_union((2.0, 5.0, 11.0))
    for n, want in ((0, 0.5), (1, 0.2), (2, 1.0 / 11.0)):
        _, val = approx_unit(u, n)
        assert abs(float(val) - want) <= 1e-12


def test_approx_unit_index_error():
    with pytest.raises(IndexError):
        approx_unit(demo_union(), 3)


def test_union_gap_validation():
    with pytest.raises(DimensionMismatch):
        UnionSpace((classical_comp(), qubit_comp()), (1.0,))
    with pytest.raises(ValueError):
        UnionSpace((classical_comp(),), (0.0,))


# ---------------------------------------------------------------- mk_union


def test_mk_union_same_component_matches_classical():
    u = demo_union()
    mu = ProbState(np.array([1.0, 0.0, 0.0]))
    nu = ProbState(np.ones(3) / 3.0)
    got = mk_union(u, 0, mu, 0, nu)
    assert got == pytest.approx(4.0 / 3.0, abs=1e-9)


def test_mk_union_same_state_zero():
    u = demo_union()
    mu = ProbState(np.array([0.2, 0.3, 0.5]))
    assert mk_union(u, 0, mu, 0, mu) == pytest.approx(0.0, abs=1e-9)


def test_mk_union_adjacent_anchors():
    u = demo_union((2.0, 5.0, 11.0))
    for i in range(2):
        d = mk_union(u, i, u.components[i].anchor, i + 1, u.components[i + 1].anchor)
        assert d == pytest.approx(float(u.gaps[i]), abs=1e-7)


def test_mk_union_skip_component_chain_sum():
    u = demo_union((2.0, 5.0, 11.0))
    d = mk_union(u, 0, u.components[0].anchor, 2, u.components[2].anchor)
    assert d == pytest.approx(7.0, abs=1e-7)


def test_mk_union_symmetry():
    u = demo_union()
    mu = ProbState(np.array([0.0, 1.0, 0.0]))
    nu = MatrixState(np.diag([0.3, 0.7]))
    assert mk_union(u, 0, mu, 1, nu) == pytest.approx(mk_union(u, 1, nu, 0, mu), abs=1e-9)


def test_mk_union_nonanchor_states():
    # mu at distance from the anchor adds the inner-program slack
    u = UnionSpace((classical_comp(), qubit_comp()), (4.0, 9.0))
    nu = MatrixState(np.diag([0.0, 1.0]))  # orthogonal to the qubit anchor
    d = mk_union(u, 0, u.components[0].anchor, 1, nu)
    # chain gap 4 plus the fiber trace-norm gap 2
    assert d == pytest.approx(6.0, abs=1e-7)


# ---------------------------------------------------------- covering probe


def test_covering_probe_monotone():
    u = demo_union()
    curve = covering_number_probe(u, 2, [0.25, 0.5, 1.0, 2.0, 4.0],
                                  stream(11, "probe"), samples=60)
    sizes = [s for _, s in curve]
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))


def test_covering_probe_large_eps_single_ball():
    u = demo_union()
    curve = covering_number_probe(u, 1, [1000.0], stream(12, "probe"), samples=40)
    assert curve[0][1] == 1


def test_covering_probe_qubit_vs_grid_oracle():
    # single qubit component, eps = 0.5: the probe's net cannot beat the
    # packing bound from a brute-force grid of the same set
    u = UnionSpace((qubit_comp(),), (3.0,))
    (eps, size), = covering_number_probe(u, 1, [0.5], stream(13, "probe"), samples=150)
    # oracle: greedy net over a dense grid of {a : spread <= 1, tr(rho0 a) = 0}
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    pts = []
    for x in np.linspace(-1, 1, 9):
        for y in np.linspace(-1, 1, 9):
            for z in np.linspace(-1, 1, 9):
                if x * x + y * y + z * z <= 1.0:
                    a = x * sx + y * sy + z * sz
                    a = a - np.trace(np.diag([1.0, 0.0]) @ a) * np.eye(2)
                    pts.append(a)
    net = []
    for a in pts:
        if all(linalg.op_norm(a - b) > eps for b in net):
            net.append(a)
    assert size <= len(net) + 5  # sampled net is no larger than the dense-grid scale


# ------------------------------------------------------- almost-commutative


def make_ac(k=2):
    return ACSpace(line013(), k)


def test_ac_seminorm_examples():
    ac = make_ac()
    const_scalar = np.stack([2.0 * np.eye(2, dtype=complex)] * 3)
    assert ac_seminorm(const_scalar, ac) == 0.0
    f = np.array([0.0, 1.0, 3.0])
    scalar_field = np.stack([f[x] * np.eye(2, dtype=complex) for x in range(3)])
    assert ac_seminorm(scalar_field, ac) == pytest.approx(1.0, abs=1e-12)
    const_fiber = np.stack([np.diag([1.0, -1.0]).astype(complex)] * 3)
    assert ac_seminorm(const_fiber, ac) == pytest.approx(1.0, abs=1e-12)


def test_ac_block_examples(rng):
    ac = make_ac()
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    T = np.kron(A, np.eye(2))
    np.testing.assert_allclose(ac_block(T, 0, 0, ac), A)
    np.testing.assert_allclose(ac_block(T, 0, 1, ac), 0.0)
    E01 = np.zeros((2, 2), dtype=complex)
    E01[0, 1] = 1.0
    T2 = np.kron(np.eye(3), E01)
    np.testing.assert_allclose(ac_block(T2, 0, 1, ac), np.eye(3))


def test_ac_roundtrip_bit_exact(rng):
    ac = make_ac(3)
    T = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    blocks = [[ac_block(T, i, j, ac) for j in range(3)] for i in range(3)]
    assert np.array_equal(ac_reassemble(blocks, ac), T)


def test_ac_sandwich_tensor_case():
    ac = make_ac()
    A = np.zeros((3, 3), dtype=complex)
    A[0, 2] = 1.0  # support propagation 3
    T = np.kron(A, np.eye(2))
    report = ac_prop_sandwich(T, ac, rng=stream(1, "sw"))
    assert report.block_prop == 3.0
    assert report.upper_ok  # no violation beyond P + 2
    assert report.lower_ok


def test_ac_sandwich_diagonal():
    ac = make_ac()
    T = np.diag(stream(2, "sw").standard_normal(6)).astype(complex)
    report = ac_prop_sandwich(T, ac, rng=stream(3, "sw"))
    assert report.block_prop == 0.0
    assert report.witness_lower <= 2.0 + 1e-4  # fiber-only propagation


def test_ac_sandwich_fiber_unitary():
    ac = make_ac()
    E01 = np.zeros((2, 2), dtype=complex)
    E01[0, 1] = 1.0
    T = np.kron(np.eye(3), E01 + E01.T)
    report = ac_prop_sandwich(T, ac, rng=stream(4, "sw"))
    assert report.block_prop == 0.0
    assert report.upper_ok


def test_ac_sample_unit_normalized(rng):
    ac = make_ac()
    F = ac_sample_unit(ac, rng)
    assert ac_seminorm(F, ac) == pytest.approx(1.0, abs=1e-10)
    assert linalg.op_norm(ac_embed(F, ac)) > 0


# ------------------------------------------------------------- oscillation


def test_slow_osc_constant_zero():
    assert slow_osc_score(np.ones(1000), 5.0, 100) == 0.0


def test_slow_osc_sinlog_mean_value_bound():
    N = 10 ** 5
    f = np.sin(np.log1p(np.arange(N + 1, dtype=float)))
    score = slow_osc_score(f, 10.0, 10 ** 4)
    assert score < 1e-3


def test_slow_osc_sin_persists():
    f = np.sin(np.arange(20001, dtype=float))
    for K in (100, 2000, 15000):
        assert slow_osc_score(f, 3.0, K) >= 1.0


def test_slow_osc_cutoff_range():
    with pytest.raises(CutoffOutOfRange):
        slow_osc_score(np.ones(10), 2.0, 20)


def test_slow_osc_operator_variant_matches_banded_form(rng):
    # the shift-witness score coincides with a dense computation on a
    # small truncation
    N = 60
    f = rng.standard_normal(N + 1)
    R, K = 3.0, 25
    got = slow_osc_operator_score(f, R, K)
    dense_best = 0.0
    S = np.diag(f).astype(complex)
    chi_tail = np.diag((np.arange(N + 1) > K).astype(complex))
    for d in range(1, int(R) + 1):
        V = np.zeros((N + 1, N + 1), dtype=complex)
        for x in range(0, N + 1 - d):
            V[x + d, x] = 1.0
        C = V @ S - S @ V
        dense_best = max(dense_best,
                         linalg.op_norm(chi_tail @ C), linalg.op_norm(C @ chi_tail))
    assert got == pytest.approx(dense_best, abs=1e-10)


# ------------------------------------------------------------------ corona


def test_corona_all_checks_pass(rng):
    ac = make_ac()
    tau = MatrixState(np.eye(2, dtype=complex) / 2.0)
    report = corona_maps_check(ac, tau, stream(5, "cor"), cutoffs=(0, 1, 2))
    assert report.all_ok
    for _, d_tail, t_tail in report.difference_curve:
        assert d_tail == pytest.approx(t_tail, abs=1e-12)


def test_corona_traceless_product_field():
    # F = f (x) a with tau(a) = 0: the retraction kills it entirely
    ac = make_ac()
    tau = MatrixState(np.eye(2, dtype=complex) / 2.0)
    f = np.array([2.0, -1.0, 0.5])
    a = np.diag([1.0, -1.0]).astype(complex)  # trace 0 under tau
    F = np.stack([f[x] * a for x in range(3)])
    sigma = tau.rho
    phibar_F = np.array([np.trace(sigma @ F[x]).real for x in range(3)])
    np.testing.assert_allclose(phibar_F, 0.0, atol=1e-12)
    # difference norm is max |f| * ||a||
    diff = max(linalg.op_norm(F[x]) for x in range(3))
    assert diff == pytest.approx(np.max(np.abs(f)) * linalg.op_norm(a), abs=1e-12)


def test_corona_decay_for_c0_tail(rng):
    # fiberwise-traceless part decaying along the base: the tail curve decays
    n = 8
    base = MetricSpace(np.abs(np.subtract.outer(np.arange(n, dtype=float),
                                                np.arange(n, dtype=float))))
    ac = ACSpace(base, 2)
    tau = MatrixState(np.eye(2, dtype=complex) / 2.0)
    decay = np.exp(-np.arange(n, dtype=float))
    a = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)

    sigma = tau.rho
    F = np.stack([decay[x] * a + 1.0 * np.eye(2) for x in range(n)])
    diff = np.stack([F[x] - np.trace(sigma @ F[x]).real * np.eye(2) for x in range(n)])
    tails = [max(linalg.op_norm(diff[x]) for x in range(K, n)) for K in range(n - 1)]
    assert all(b <= a_ for a_, b in zip(tails, tails[1:]))
    assert tails[-1] < 1e-2


def test_approx_unit_degenerate_single_component():
    u = UnionSpace((classical_comp(),), (2.0,))
    el, val = approx_unit(u, 0)
    assert val == 0.0  # nothing beyond the piece: the unit itself, no jump
    assert el.tail == 1


def test_union_seminorm_shift_invariance(rng):
    u = demo_union()
    el = UnionElement((rng.standard_normal(3), hermitian_sample(rng, 2),
                       rng.standard_normal(2)), tail=float(rng.standard_normal()))
    base = union_seminorm(el, u)
    for c in (-2.0, 0.7):
        shifted = UnionElement(
            (el.parts[0] + c, el.parts[1] + c * np.eye(2), el.parts[2] + c),
            tail=el.tail + c)
        assert union_seminorm(shifted, u) == pytest.approx(base, abs=1e-10)


def test_ac_seminorm_shift_invariance(rng):
    ac = make_ac()
    F = np.stack([hermitian_sample(rng, 2) for _ in range(3)])
    base = ac_seminorm(F, ac)
    for c in (-1.5, 3.0):
        shifted = F + c * np.eye(2)
        assert ac_seminorm(shifted, ac) == pytest.approx(base, abs=1e-10)
