"""The acceptance suite: every quantitative guarantee, checked at its tolerance.

Each criterion is a function returning a `CriterionResult`; `run_all`
executes the lot with one seed.  The pytest module asserts each result,
the CLI `verify` subcommand prints one pass/fail line per criterion and
exits nonzero on any failure.  Tolerances are pinned here, not deferred.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import (
    ClassicalLipschitz,
    MatrixState,
    ProbState,
    Spread,
    mk_classical_report,
    mk_spread,
)
from .coarse import (
    RepresentationOverMetric,
    commutant_seminorm_interval,
    filtration_check,
    prop_interval,
    spectral_witness,
    support_prop,
)
from .config import DEFAULT_TOL, Tolerances
from .constructions import (
    ACSpace,
    ClassicalComponent,
    MatrixComponent,
    UnionElement,
    UnionSpace,
    ac_block,
    ac_prop_sandwich,
    ac_reassemble,
    approx_unit,
    mk_union,
    slow_osc_score,
    union_seminorm,
)
from .cutting import cut, disjoint_block_compress
from .exceptions import GapExceeded
from .metric import MetricSpace, grid_cover, grid_space
from .rng import density_sample, hermitian_sample, stream
from .spectral import FourierProfile, evo_commutator_check, fourier_func_calc, lstar_fourier_check

__all__ = ["CriterionResult", "CRITERIA", "run_all"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str


def _random_space(rng, n_max=12, n_min=2) -> MetricSpace:
    """Random planar point set with the Euclidean metric (axioms hold)."""
    n = int(rng.integers(n_min, n_max + 1))
    pts = rng.uniform(0.0, 10.0, (n, 2))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    np.fill_diagonal(d, 0.0)
    return MetricSpace(d)


def _sparse_operator(rng, n: int, fill: int) -> np.ndarray:
    T = np.zeros((n, n), dtype=complex)
    for _ in range(fill):
        i, j = rng.integers(0, n, 2)
        T[i, j] = rng.standard_normal() + 1j * rng.standard_normal()
    return T


def _line_space() -> MetricSpace:
    return MetricSpace(np.array([[0.0, 1, 3], [1, 0, 2], [3, 2, 0]]))


def criterion_1_classical_prop(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    """Distance-function witnesses collapse the propagation interval."""
    rng = stream(seed, "acc1")
    worst_width = 0.0
    mismatches = 0
    trials = 200
    for _ in range(trials):
        space = _random_space(rng, 12)
        rep = RepresentationOverMetric(space)
        T = _sparse_operator(rng, space.n, int(rng.integers(1, space.n + 2)))
        if linalg.op_norm(T) == 0.0:
            continue
        report = prop_interval(T, rep=rep, tol=tol)
        width = report.interval.width
        worst_width = max(worst_width, width / max(space.scale, 1e-30))
        if report.interval.lower != support_prop(T, rep, tol):
            mismatches += 1
    passed = worst_width <= 1e-6 and mismatches == 0
    return CriterionResult(1, "classical propagation equality", passed,
                           f"{trials} instances, worst width/scale {worst_width:.2e}, "
                           f"{mismatches} lower-bound mismatches")


def criterion_2_duality(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc2")
    worst_gap = 0.0
    failures = 0
    trials = 100
    for _ in range(trials):
        space = _random_space(rng, 30)
        p = rng.uniform(0.0, 1.0, space.n)
        q = rng.uniform(0.0, 1.0, space.n)
        mu, nu = ProbState(p / p.sum()), ProbState(q / q.sum())
        try:
            rep = mk_classical_report(mu, nu, space, tol)
            worst_gap = max(worst_gap, rep.gap / max(space.scale, 1e-30))
        except GapExceeded:
            failures += 1
    line = _line_space()
    rep013 = mk_classical_report(ProbState(np.array([1.0, 0, 0])),
                                 ProbState(np.ones(3) / 3.0), line, tol)
    # independent oracle: CDF formula for a line metric
    xs = np.array([0.0, 1.0, 3.0])
    cdf_mu = np.cumsum([1.0, 0.0, 0.0])
    cdf_nu = np.cumsum([1 / 3.0, 1 / 3.0, 1 / 3.0])
    oracle = float(np.sum(np.abs(cdf_mu[:-1] - cdf_nu[:-1]) * np.diff(xs)))
    line_err = abs(rep013.dual - oracle)
    passed = failures == 0 and worst_gap <= 1e-7 and line_err <= 1e-9
    return CriterionResult(2, "Kantorovich duality", passed,
                           f"{trials} instances, worst gap/scale {worst_gap:.2e}; "
                           f"{{0,1,3}} case |mk - 4/3| = {line_err:.2e}")


def criterion_3_lstar_vs_prop(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc3")
    trials = 200
    bound_violations = 0
    for _ in range(trials):
        space = _random_space(rng, 10, n_min=6)
        rep = RepresentationOverMetric(space)
        T = _sparse_operator(rng, space.n, int(rng.integers(1, space.n)))
        if linalg.op_norm(T) == 0.0:
            continue
        ci = commutant_seminorm_interval(T, ClassicalLipschitz(space), budget=4,
                                         rng=rng, rep=rep, iters=25, tol=tol)
        if ci.lower > 3.0 * support_prop(T, rep, tol) * linalg.op_norm(T) + 1e-9:
            bound_violations += 1
    line = _line_space()
    worst_closed = 0.0
    for x in range(3):
        for y in range(3):
            if x == y:
                continue
            T = np.zeros((3, 3), dtype=complex)
            T[x, y] = 1.0
            ci = commutant_seminorm_interval(T, ClassicalLipschitz(line), budget=4,
                                             rng=stream(seed, f"acc3xy{x}{y}"), tol=tol)
            worst_closed = max(worst_closed, abs(ci.lower - line.dist[x, y]))
    passed = bound_violations == 0 and worst_closed <= 1e-9
    return CriterionResult(3, "commutant seminorm vs propagation", passed,
                           f"{trials} instances, {bound_violations} bound violations; "
                           f"matrix-unit closed form worst error {worst_closed:.2e}")


def criterion_4_disjoint_compression(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc4")
    trials = 100
    violations = 0
    worst_margin = -np.inf
    for _ in range(trials):
        length = int(rng.integers(30, 51))
        space = grid_space([(0, length - 1)])
        rep = RepresentationOverMetric(space)
        radius = float(rng.integers(4, 9))
        # centers far enough apart that support R/4-neighborhoods stay R-disjoint
        step = int(np.ceil(1.5 * radius)) + 1
        centers = list(range(int(rng.integers(0, 3)), length, step))
        if len(centers) < 2:
            continue
        bumps = np.stack([
            np.clip(1.0 - (4.0 / radius) * np.abs(np.arange(length) - c), 0.0, 1.0)
            for c in centers])
        supports = [tuple(np.flatnonzero(b > 0).tolist()) for b in bumps]
        T = rng.standard_normal((length, length)) + 1j * rng.standard_normal((length, length))
        T /= linalg.op_norm(T)
        lstar_ub = 3.0 * support_prop(T, rep, tol) * linalg.op_norm(T)
        dev, bound, ok = disjoint_block_compress(T, bumps, supports, space,
                                                 lstar_ub, separation=radius, rep=rep, tol=tol)
        worst_margin = max(worst_margin, dev - bound)
        if not ok:
            violations += 1
    passed = violations == 0
    return CriterionResult(4, "disjoint-bump compression bound", passed,
                           f"{trials} trials, {violations} violations, "
                           f"worst deviation-bound margin {worst_margin:.2e}")


def criterion_5_cutting(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc5")
    runs = 5
    prop_fail = 0
    bound_fail = 0
    ratios = []
    for _ in range(runs):
        bounds = [(0, 99)]
        space = grid_space(bounds)
        rep = RepresentationOverMetric(space)
        radius = 10.0
        cover = grid_cover(bounds, radius)
        T = rng.standard_normal((space.n, space.n)) + 1j * rng.standard_normal((space.n, space.n))
        T /= linalg.op_norm(T)
        lstar_ub = 3.0 * support_prop(T, rep, tol) * linalg.op_norm(T)
        report = cut(T, space, cover, radius, lstar_ub, rep=rep, tol=tol)
        ratios.append(report.measured_ratio)
        if not report.prop_ok:
            prop_fail += 1
        if not report.within_bound:
            bound_fail += 1
    # zero-seminorm rigidity
    bounds = [(0, 49)]
    space = grid_space(bounds)
    diag = np.diag(rng.standard_normal(space.n)).astype(complex)
    rigid = cut(diag, space, grid_cover(bounds, 8.0), 8.0, 0.0, tol=tol)
    rigidity_ok = rigid.deviation <= 1e-10
    passed = prop_fail == 0 and bound_fail == 0 and rigidity_ok
    return CriterionResult(5, "cutting bounds", passed,
                           f"{runs} runs, prop failures {prop_fail}, bound failures "
                           f"{bound_fail}, measured ratios max {max(ratios):.2e}; "
                           f"L*=0 deviation {rigid.deviation:.2e}")


def _union_fixture(gaps) -> UnionSpace:
    line = _line_space()
    c0 = ClassicalComponent(line, ProbState(np.array([0.5, 0.25, 0.25])))
    c1 = MatrixComponent(2, MatrixState(np.diag([1.0, 0.0])))
    c2 = ClassicalComponent(MetricSpace(np.array([[0.0, 2], [2, 0]])),
                            ProbState(np.array([1.0, 0.0])))
    return UnionSpace((c0, c1, c2), tuple(gaps))


def criterion_6_approx_unit(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    line = _line_space()
    exact = UnionSpace(
        (ClassicalComponent(line, ProbState(np.array([Fraction(1), Fraction(0), Fraction(0)],
                                                     dtype=object))),
         ClassicalComponent(MetricSpace(np.array([[0.0, 2], [2, 0]])),
                            ProbState(np.array([Fraction(1, 3), Fraction(2, 3)], dtype=object)))),
        (Fraction(2), Fraction(7, 2)))
    ok_exact = True
    for n, want in ((0, Fraction(1, 2)), (1, Fraction(2, 7))):
        _, val = approx_unit(exact, n)
        if not (isinstance(val, Fraction) and val == want):
            ok_exact = False
    floats = _union_fixture((2.0, 5.0, 11.0))
    worst = 0.0
    for n, want in ((0, 1 / 2.0), (1, 1 / 5.0), (2, 1 / 11.0)):
        _, val = approx_unit(floats, n)
        worst = max(worst, abs(float(val) - want))
    passed = ok_exact and worst <= 1e-12
    return CriterionResult(6, "union approximate unit", passed,
                           f"rational inputs exact: {ok_exact}; float worst error {worst:.2e}")


def _union_grid_oracle_2comp(union: UnionSpace, mu, nu) -> float:
    """Brute-force sup of mu(a_0) - nu(a_1) over gridded elements with L <= 1.

    Component 0: classical; component 1: classical or qubit.  The tail
    scalar is unconstrained, so only the 0-1 jump binds.  Offsets run on
    a gap/4 grid so constant optimizers are represented exactly.
    """
    c0, c1 = union.components[0], union.components[1]
    gap = float(union.gaps[0])
    shifts = np.arange(-2.0 * gap, 2.0 * gap + gap / 8.0, gap / 4.0)

    def classical_table(comp, state):
        shapes = [np.linspace(-s, s, 7) for s in comp.space.dist[0, 1:]]
        vals, anchors = [], []
        for combo in np.stack(np.meshgrid(*shapes, indexing="ij"),
                              axis=-1).reshape(-1, comp.space.n - 1):
            a = np.concatenate([[0.0], combo])
            if comp.seminorm.eval(a) > 1.0 + 1e-12:
                continue
            for shift in shifts:
                av = a + shift
                vals.append(state.expect(av))
                anchors.append(comp.anchor_expect(av))
        return np.asarray(vals), np.asarray(anchors)

    def qubit_table(comp, state):
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]])
        sz = np.diag([1.0, -1.0]).astype(complex)
        small = np.linspace(-1.0, 1.0, 5)
        vals, anchors = [], []
        for w in shifts:
            for x in small:
                for y in small:
                    for z in small:
                        if x * x + y * y + z * z <= 1.0 + 1e-12:
                            a = w * np.eye(2) + x * sx + y * sy + z * sz
                            vals.append(state.expect(a))
                            anchors.append(comp.anchor_expect(a))
        return np.asarray(vals), np.asarray(anchors)

    v0, s0 = classical_table(c0, mu)
    if isinstance(c1, MatrixComponent):
        v1, s1 = qubit_table(c1, nu)
    else:
        v1, s1 = classical_table(c1, nu)
    feasible = np.abs(s1[None, :] - s0[:, None]) <= gap + 1e-12
    diffs = np.where(feasible, v0[:, None] - v1[None, :], -np.inf)
    return float(diffs.max())


def criterion_7_union_anchors(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    union3 = _union_fixture((2.0, 5.0, 11.0))
    worst = 0.0
    for i in range(2):
        mu = union3.components[i].anchor
        nu = union3.components[i + 1].anchor
        got = mk_union(union3, i, mu, i + 1, nu, tol)
        worst = max(worst, abs(got - float(union3.gaps[i])))
    got02 = mk_union(union3, 0, union3.components[0].anchor, 2, union3.components[2].anchor, tol)
    worst = max(worst, abs(got02 - 7.0))
    # 2-component unions vs brute-force grid oracle
    line = _line_space()
    u_cc = UnionSpace((ClassicalComponent(line, ProbState(np.array([1.0, 0, 0]))),
                       ClassicalComponent(MetricSpace(np.array([[0.0, 2], [2, 0]])),
                                          ProbState(np.array([0.5, 0.5])))), (2.0, 6.0))
    got_cc = mk_union(u_cc, 0, u_cc.components[0].anchor, 1, u_cc.components[1].anchor, tol)
    oracle_cc = _union_grid_oracle_2comp(u_cc, u_cc.components[0].anchor,
                                         u_cc.components[1].anchor)
    u_cq = UnionSpace((ClassicalComponent(line, ProbState(np.array([1.0, 0, 0]))),
                       MatrixComponent(2, MatrixState(np.diag([1.0, 0.0])))), (2.0, 6.0))
    got_cq = mk_union(u_cq, 0, u_cq.components[0].anchor, 1, u_cq.components[1].anchor, tol)
    oracle_cq = _union_grid_oracle_2comp(u_cq, u_cq.components[0].anchor,
                                         u_cq.components[1].anchor)
    anchor_err = max(abs(got_cc - 2.0), abs(got_cq - 2.0))
    oracle_err = max(abs(got_cc - oracle_cc), abs(got_cq - oracle_cq))
    passed = worst <= 1e-7 and anchor_err <= 1e-7 and oracle_err <= 1e-6
    return CriterionResult(7, "union anchor distances", passed,
                           f"3-component worst |mk - R| {worst:.2e}; 2-component anchor error "
                           f"{anchor_err:.2e}, grid-oracle disagreement {oracle_err:.2e}")


def criterion_8_spread_identity(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc8")
    worst = 0.0
    trials = 100
    for _ in range(trials):
        d = int(rng.integers(2, 7))
        a, b = MatrixState(density_sample(rng, d)), MatrixState(density_sample(rng, d))
        got = mk_spread(a, b, tol)
        oracle = float(np.sum(np.abs(np.linalg.eigvalsh(a.rho - b.rho))))
        worst = max(worst, abs(got - oracle))
    passed = worst <= 1e-9
    return CriterionResult(8, "spread MK identity", passed,
                           f"{trials} pairs, worst |mk - trace norm| {worst:.2e}")


def criterion_9_compact_no_escape(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc9")
    worst = 0.0
    trials = 100
    for _ in range(trials):
        k = int(rng.integers(2, 7))
        spread = Spread(k)
        a = spread.sample_unit(rng)
        if a is None:
            continue
        a = a + rng.uniform(-2.0, 2.0) * np.eye(k)
        T = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        worst = max(worst, spectral_witness(T, a, 2.0, tol))
    passed = worst <= 1e-10
    return CriterionResult(9, "compact no-escape at the diameter", passed,
                           f"{trials} trials, worst witness value {worst:.2e}")


def criterion_10_ac_sandwich(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc10")
    trials = 100
    upper_fail = 0
    roundtrip_fail = 0
    for _ in range(trials):
        base = _random_space(rng, 6, n_min=2)
        k = int(rng.integers(2, 4))
        space = ACSpace(base, k)
        T = _sparse_operator(rng, base.n * k, int(rng.integers(2, 2 * base.n)))
        if linalg.op_norm(T) == 0.0:
            continue
        report = ac_prop_sandwich(T, space, budget=6, rng=rng, tol=tol)
        if not report.upper_ok:
            upper_fail += 1
        blocks = [[ac_block(T, i, j, space) for j in range(k)] for i in range(k)]
        if not np.array_equal(ac_reassemble(blocks, space), T):
            roundtrip_fail += 1
    passed = upper_fail == 0 and roundtrip_fail == 0
    return CriterionResult(10, "almost-commutative sandwich", passed,
                           f"{trials} instances, {upper_fail} violations beyond "
                           f"max block propagation + 2, {roundtrip_fail} round-trip failures")


def criterion_11_evolution(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc11")
    trials = 200
    violations = 0
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        D = hermitian_sample(rng, n)
        a = hermitian_sample(rng, n)
        t = float(rng.uniform(-5.0, 5.0))
        lhs, rhs = evo_commutator_check(D, a, t, tol)
        scale = max(1.0, rhs)
        if lhs > rhs + 1e-9 * scale:
            violations += 1
    Z = np.diag([1.0, -1.0]).astype(complex)
    X = np.array([[0, 1.0], [1, 0]], dtype=complex)
    worst_closed = 0.0
    for t in np.linspace(-3.0, 3.0, 61):
        lhs, _ = evo_commutator_check(Z, X, float(t), tol)
        worst_closed = max(worst_closed, abs(lhs - 2.0 * abs(np.sin(t))))
    passed = violations == 0 and worst_closed <= 1e-9
    return CriterionResult(11, "evolution commutator bound", passed,
                           f"{trials} instances, {violations} violations; qubit closed-form "
                           f"worst error {worst_closed:.2e}")


def criterion_12_fourier(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc12")
    prof = FourierProfile.sinc(2001)
    D = hermitian_sample(rng, 6)
    phi_D, bound = fourier_func_calc(D, prof, tol)
    w, V = np.linalg.eigh(D)
    ref = (V * np.sinc(w / np.pi)) @ V.conj().T
    recon_err = float(np.linalg.norm(phi_D - ref, 2))
    bound_err = abs(bound - 0.5)
    report = lstar_fourier_check(D, prof, 30, stream(seed, "acc12s"), tol)
    passed = recon_err <= 1e-6 and bound_err <= 1e-6 and report.max_ratio <= 1.0 + 1e-4
    return CriterionResult(12, "Fourier functional calculus", passed,
                           f"sinc reconstruction error {recon_err:.2e}, bound error "
                           f"{bound_err:.2e}, max commutator ratio {report.max_ratio:.6f}")


def criterion_13_higson_decay(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    N = 10 ** 5
    x = np.arange(N + 1)
    slow = np.sin(np.log1p(x.astype(float)))
    s_slow = slow_osc_score(slow, 10.0, 10 ** 4)
    fast = np.sin(x.astype(float))
    s_fast = min(slow_osc_score(fast[:20001], 3.0, K) for K in (100, 5000, 15000))
    passed = s_slow < 1e-3 and s_fast >= 1.0
    return CriterionResult(13, "slow-oscillation decay", passed,
                           f"sin(log) score {s_slow:.3e} < 1e-3; sin score {s_fast:.3f} >= 1")


def criterion_14_filtration(seed: int, tol: Tolerances = DEFAULT_TOL) -> CriterionResult:
    rng = stream(seed, "acc14")
    trials = 100
    failures = 0
    for _ in range(trials):
        space = _random_space(rng, 10)
        rep = RepresentationOverMetric(space)
        T = _sparse_operator(rng, space.n, int(rng.integers(1, space.n + 1)))
        S = _sparse_operator(rng, space.n, int(rng.integers(1, space.n + 1)))
        radius = float(rng.uniform(0.0, space.scale))
        report = filtration_check([T, S], rep, radius=radius, tol=tol)
        if not report.all_ok:
            failures += 1
    passed = failures == 0
    return CriterionResult(14, "filtration axioms and reflexivity", passed,
                           f"{trials} random pairs, {failures} failures")


CRITERIA = [
    criterion_1_classical_prop,
    criterion_2_duality,
    criterion_3_lstar_vs_prop,
    criterion_4_disjoint_compression,
    criterion_5_cutting,
    criterion_6_approx_unit,
    criterion_7_union_anchors,
    criterion_8_spread_identity,
    criterion_9_compact_no_escape,
    criterion_10_ac_sandwich,
    criterion_11_evolution,
    criterion_12_fourier,
    criterion_13_higson_decay,
    criterion_14_filtration,
]


def run_all(seed: int = 42, tol: Tolerances = DEFAULT_TOL,
            printer=None) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        res = fn(seed, tol)
        results.append(res)
        if printer is not None:
            mark = "PASS" if res.passed else "FAIL"
            printer(f"{mark}  {res.number:2d}. {res.name}: {res.detail}")
    return results
