"""Coarse disjoint unions, almost-commutative spaces, and tail diagnostics.

A union space strings compact components along diverging gaps, coupling
only consecutive anchor-state values; elements carry a tail scalar so
the adjoined unit (constant on every component) has seminorm exactly 0
while truncated approximate units pay the boundary jump.

Almost-commutative spaces are matrix-valued functions on a finite base;
the canonical seminorm takes the max of the fiber spread term and the
base Lipschitz term, which satisfies the defining two-sided comparison
with constant C = 1.  C stays a field and is threaded through every
sandwich check rather than hard-coded.

Slow-oscillation membership is asymptotic; only finite-truncation decay
scores are computed here, never a boolean verdict.  In finite dimension
the commutator-compactness variant is degenerate (every operator is
compact), so the same decay diagnostics are all that is exposed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import (
    CertifiedInterval,
    ClassicalLipschitz,
    MatrixState,
    ProbState,
    Seminorm,
    Spread,
    mk_classical,
    mk_spread,
)
from .coarse import RepresentationOverMetric, support_prop, _witness_violation
from .config import DEFAULT_TOL, Tolerances
from .exceptions import (
    CutoffOutOfRange,
    DimensionMismatch,
    DomainMismatch,
    UnsupportedComponentSeminorm,
)
from .metric import MetricSpace
from .rng import hermitian_sample
from .simplex import solve_lp

__all__ = [
    "ClassicalComponent",
    "MatrixComponent",
    "UnionSpace",
    "UnionElement",
    "union_seminorm",
    "approx_unit",
    "mk_union",
    "covering_number_probe",
    "ACSpace",
    "ac_seminorm",
    "ac_embed",
    "ac_block",
    "ac_reassemble",
    "ac_sample_unit",
    "ACSandwichReport",
    "ac_prop_sandwich",
    "slow_osc_score",
    "slow_osc_operator_score",
    "CoronaReport",
    "corona_maps_check",
]


# ---------------------------------------------------------------------------
# Coarse disjoint unions


@dataclass(frozen=True)
class ClassicalComponent:
    """Compact classical piece: finite metric space with an anchor state."""

    space: MetricSpace
    anchor: ProbState

    def __post_init__(self):
        if self.anchor.n != self.space.n:
            raise DimensionMismatch("anchor state does not match component size")

    @property
    def seminorm(self) -> Seminorm:
        return ClassicalLipschitz(self.space)

    def unit(self):
        # integer units keep Fraction-anchored components exact
        if self.anchor.p.dtype == object:
            return np.array([1] * self.space.n, dtype=object)
        return np.ones(self.space.n)

    def zero(self):
        if self.anchor.p.dtype == object:
            return np.array([0] * self.space.n, dtype=object)
        return np.zeros(self.space.n)

    def anchor_expect(self, a):
        if getattr(np.asarray(a), "dtype", None) == object or self.anchor.p.dtype == object:
            return self.anchor.expect_exact(a)
        return self.anchor.expect(a)

    def expect(self, state: ProbState, a) -> float:
        return state.expect(a)

    def mk(self, mu: ProbState, nu: ProbState, tol: Tolerances) -> float:
        return mk_classical(mu, nu, self.space, tol)

    def chain_extreme(self, state: ProbState, s: float, maximize: bool,
                      tol: Tolerances) -> float:
        """max (or min) of state(a) over L(a) <= 1 with anchor(a) = s (an LP)."""
        n = self.space.n
        if n == 1:
            return float(s)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        A_ub = np.zeros((2 * len(pairs), n))
        b_ub = np.zeros(2 * len(pairs))
        for r, (i, j) in enumerate(pairs):
            A_ub[2 * r, i], A_ub[2 * r, j] = 1.0, -1.0
            A_ub[2 * r + 1, i], A_ub[2 * r + 1, j] = -1.0, 1.0
            b_ub[2 * r] = b_ub[2 * r + 1] = self.space.dist[i, j]
        res = solve_lp(state.p.astype(float), A_ub=A_ub, b_ub=b_ub,
                       A_eq=self.anchor.p.astype(float)[None, :], b_eq=[s],
                       nonneg=False, maximize=maximize, tol=tol)
        return res.value

    def sample_centered(self, rng):
        """Random element with seminorm <= 1 and anchor expectation 0."""
        a = rng.standard_normal(self.space.n)
        la = self.seminorm.eval(a)
        if la > 0:
            a = a / la * rng.uniform(0.0, 1.0)
        return a - self.anchor_expect(a)

    def norm(self, a) -> float:
        return float(np.max(np.abs(np.asarray(a, dtype=float))))


@dataclass(frozen=True)
class MatrixComponent:
    """Compact matrix piece: full matrix block with the spread seminorm."""

    dim: int
    anchor: MatrixState

    def __post_init__(self):
        if self.anchor.dim != self.dim:
            raise DimensionMismatch("anchor state does not match block dimension")

    @property
    def seminorm(self) -> Seminorm:
        return Spread(self.dim)

    def unit(self):
        return np.eye(self.dim, dtype=complex)

    def zero(self):
        return np.zeros((self.dim, self.dim), dtype=complex)

    def anchor_expect(self, a):
        return self.anchor.expect(a)

    def expect(self, state: MatrixState, a) -> float:
        return state.expect(a)

    def mk(self, mu: MatrixState, nu: MatrixState, tol: Tolerances) -> float:
        return mk_spread(mu, nu, tol)

    def chain_extreme(self, state: MatrixState, s: float, maximize: bool,
                      tol: Tolerances) -> float:
        """Closed-form spread-constrained eigen-program:
        max_{spread(a)<=1, anchor(a)=s} state(a) = s + ||rho - rho_anchor||_1."""
        gap = linalg.trace_norm(state.rho - self.anchor.rho, tol)
        return float(s + gap) if maximize else float(s - gap)

    def sample_centered(self, rng):
        a = hermitian_sample(rng, self.dim)
        la = self.seminorm.eval(a)
        if la > 0:
            a = a / la * rng.uniform(0.0, 1.0)
        return a - self.anchor_expect(a) * np.eye(self.dim)

    def norm(self, a) -> float:
        return linalg.op_norm(a)


Component = ClassicalComponent | MatrixComponent


@dataclass(frozen=True)
class UnionSpace:
    """Coarse disjoint union of compact components at diverging gaps.

    ``gaps[n]`` is the seminorm coupling between anchors n and n+1; the
    final entry couples the truncation boundary to the (unmodeled,
    constant) remainder, so ``len(gaps) == len(components)``.  Gaps must
    be positive; the tests drive them strictly increasing.
    """

    components: tuple[Component, ...]
    gaps: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "gaps", tuple(self.gaps))
        if len(self.gaps) != len(self.components):
            raise DimensionMismatch(
                f"{len(self.components)} components need {len(self.components)} gaps "
                f"(boundary gap included), got {len(self.gaps)}")
        if any(float(g) <= 0 for g in self.gaps):
            raise ValueError("gaps must be positive")

    @property
    def n(self) -> int:
        return len(self.components)

    def chain_distance(self, i: int, j: int):
        """Sum of gaps between components i <= j (exact for exact gaps)."""
        lo, hi = min(i, j), max(i, j)
        return sum(self.gaps[lo:hi], start=0)


@dataclass(frozen=True)
class UnionElement:
    """Finitely-supported element plus the adjoined-unit tail scalar.

    parts[n] lives on component n; beyond the truncation the element is
    ``tail * 1``.  The global unit is parts of ones with tail 1.
    """

    parts: tuple
    tail: object = 0

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


def union_seminorm(element: UnionElement, union: UnionSpace) -> float:
    """max of component seminorms and consecutive anchor jumps / gaps.

    Runs in the input arithmetic where possible: exact-scalar parts
    contribute exact zeros and Fraction-valued anchors/gaps keep jump
    terms exact.
    """
    if len(element.parts) != union.n:
        raise DimensionMismatch("one part per component required")
    values = []
    anchors = []
    for comp, part in zip(union.components, element.parts):
        values.append(comp.seminorm.eval(part))
        anchors.append(comp.anchor_expect(part))
    anchors.append(element.tail)
    jumps = [abs(anchors[k + 1] - anchors[k]) / union.gaps[k] for k in range(union.n)]
    return max(values + jumps)


def approx_unit(union: UnionSpace, n: int) -> tuple[UnionElement, float]:
    """e_n = units through component n, zero beyond; seminorm 1/R_n exactly.

    A single-component union is degenerate (compact, nothing beyond the
    piece): its approximate unit is the global unit, with seminorm 0.
    """
    if not (0 <= n < union.n):
        raise IndexError(f"component index {n} out of range (0..{union.n - 1})")
    if union.n == 1:
        el = UnionElement((union.components[0].unit(),), tail=1)
        return el, union_seminorm(el, union)
    parts = [comp.unit() if k <= n else comp.zero() for k, comp in enumerate(union.components)]
    el = UnionElement(tuple(parts), tail=0)
    return el, union_seminorm(el, union)


def _ternary_max(fn, lo: float, hi: float, resolution: float) -> tuple[float, float]:
    """Maximize a concave function on [lo, hi] by ternary search."""
    best_x, best_v = lo, fn(lo)
    v_hi = fn(hi)
    if v_hi > best_v:
        best_x, best_v = hi, v_hi
    a, b = lo, hi
    while b - a > resolution:
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        f1, f2 = fn(m1), fn(m2)
        if f1 > best_v:
            best_x, best_v = m1, f1
        if f2 > best_v:
            best_x, best_v = m2, f2
        if f1 < f2:
            a = m1
        else:
            b = m2
    return best_x, best_v


def mk_union(union: UnionSpace, i: int, mu, j: int, nu,
             tol: Tolerances = DEFAULT_TOL) -> float:
    """Monge-Kantorovich distance between local states on single components.

    Same component: the component distance.  Different components: the
    chain decomposition — maximize g_i(s_i) - h_j(s_j) over anchor values
    with |s_i - s_j| bounded by the summed gaps, where the inner extremes
    are LPs (classical) or spread-constrained eigen-programs (matrix
    blocks); the outer gap variable is a 1-d concave maximization run by
    ternary search.
    """
    if not (0 <= i < union.n and 0 <= j < union.n):
        raise IndexError("component index out of range")
    ci, cj = union.components[i], union.components[j]
    for comp in (ci, cj):
        if not isinstance(comp, (ClassicalComponent, MatrixComponent)):
            raise UnsupportedComponentSeminorm(f"no inner solver for {type(comp).__name__}")
    if i == j:
        return ci.mk(mu, nu, tol)
    if i > j:
        return mk_union(union, j, nu, i, mu, tol)
    D = float(union.chain_distance(i, j))
    h0 = cj.chain_extreme(nu, 0.0, maximize=False, tol=tol)

    def objective(delta: float) -> float:
        return ci.chain_extreme(mu, delta, maximize=True, tol=tol) - h0

    _, best = _ternary_max(objective, -D, D, tol.ternary)
    return best


def covering_number_probe(union: UnionSpace, trunc: int, eps,
                          seed_rng: np.random.Generator,
                          samples: int = 200) -> list[tuple[float, int]]:
    """Greedy eps-net sizes over sampled unit-ball elements centered at the
    first anchor, compressed to the first `trunc` components.

    Uses farthest-first traversal, so the reported sizes are monotone
    non-increasing in eps by construction.  Returns (eps, size) pairs.
    """
    if not (0 < trunc <= union.n):
        raise IndexError("truncation out of range")
    eps_list = [float(e) for e in np.atleast_1d(eps)]
    comps = union.components[:trunc]
    gaps = [float(g) for g in union.gaps]

    drawn = []
    for _ in range(samples):
        parts = []
        t = 0.0
        for k, comp in enumerate(comps):
            centered = comp.sample_centered(seed_rng)
            if k > 0:
                t = t + seed_rng.uniform(-1.0, 1.0) * gaps[k - 1]
            parts.append(centered + t * np.asarray(comp.unit()))
        drawn.append(parts)

    def dist(a, b) -> float:
        return max(comp.norm(np.asarray(x) - np.asarray(y))
                   for comp, x, y in zip(comps, a, b))

    # farthest-first traversal: insertion radii are non-increasing
    radii = []
    chosen = [0]
    mind = np.array([dist(drawn[0], s) for s in drawn])
    for _ in range(1, len(drawn)):
        nxt = int(np.argmax(mind))
        if mind[nxt] <= 0:
            break
        radii.append(float(mind[nxt]))
        chosen.append(nxt)
        mind = np.minimum(mind, [dist(drawn[nxt], s) for s in drawn])
    out = []
    for e in eps_list:
        size = 1 + sum(1 for r in radii if r > e)
        out.append((e, size))
    return out


# ---------------------------------------------------------------------------
# Almost-commutative spaces


@dataclass(frozen=True)
class ACSpace:
    """Matrix-valued functions on a finite base: fibers of size fiber_dim.

    ``comparison`` is the two-sided constant C relating the canonical
    seminorm to the admissible class; the canonical max-form achieves
    C = 1.  The fiber radius is 2 for fiber_dim >= 2 (the spread-metric
    diameter of the state space) and 0 for scalar fibers.
    """

    base: MetricSpace
    fiber_dim: int
    comparison: float = 1.0

    def __post_init__(self):
        if self.fiber_dim < 1:
            raise DimensionMismatch("fiber dimension must be >= 1")

    @property
    def fiber_radius(self) -> float:
        return 2.0 if self.fiber_dim >= 2 else 0.0

    @property
    def dim(self) -> int:
        return self.base.n * self.fiber_dim

    def base_rep(self) -> RepresentationOverMetric:
        return RepresentationOverMetric(self.base)


def _as_field(F, space: ACSpace) -> np.ndarray:
    arr = np.asarray(F, dtype=complex)
    k = space.fiber_dim
    if arr.shape != (space.base.n, k, k):
        raise DomainMismatch(f"field must have shape ({space.base.n}, {k}, {k}), got {arr.shape}")
    return arr


def ac_seminorm(F, space: ACSpace) -> float:
    """max of the fiber spread term and the base Lipschitz term."""
    arr = _as_field(F, space)
    spread = Spread(space.fiber_dim)
    fiber_term = max(spread.eval(arr[x]) for x in range(space.base.n))
    base_term = 0.0
    for x in range(space.base.n):
        for y in range(x + 1, space.base.n):
            base_term = max(base_term,
                            linalg.op_norm(arr[x] - arr[y]) / space.base.dist[x, y])
    return max(fiber_term, base_term)


def ac_embed(F, space: ACSpace) -> np.ndarray:
    """Block-diagonal action of a field on C^{|X| k} (x slow, fiber fast)."""
    arr = _as_field(F, space)
    n, k = space.base.n, space.fiber_dim
    out = np.zeros((n * k, n * k), dtype=complex)
    for x in range(n):
        out[x * k:(x + 1) * k, x * k:(x + 1) * k] = arr[x]
    return out


def ac_block(T, i: int, j: int, space: ACSpace) -> np.ndarray:
    """Fiber block T_{ij}[x, y] = <x (x) e_i | T | y (x) e_j>."""
    k = space.fiber_dim
    if not (0 <= i < k and 0 <= j < k):
        raise IndexError(f"fiber indices ({i}, {j}) out of range for k={k}")
    m = linalg.as_matrix(T)
    n = space.base.n
    if m.shape != (n * k, n * k):
        raise DimensionMismatch(f"operator shape {m.shape}, expected {(n * k, n * k)}")
    return np.ascontiguousarray(m.reshape(n, k, n, k)[:, i, :, j])


def ac_reassemble(blocks, space: ACSpace) -> np.ndarray:
    """Inverse of ac_block: blocks[i][j] back to the full operator, bit-exact."""
    n, k = space.base.n, space.fiber_dim
    out = np.zeros((n, k, n, k), dtype=complex)
    for i in range(k):
        for j in range(k):
            out[:, i, :, j] = blocks[i][j]
    return out.reshape(n * k, n * k)


def ac_sample_unit(space: ACSpace, rng: np.random.Generator):
    """Random Hermitian field rescaled to canonical seminorm 1 (None if flat)."""
    arr = np.stack([hermitian_sample(rng, space.fiber_dim) for _ in range(space.base.n)])
    la = ac_seminorm(arr, space)
    if la == 0.0:
        return None
    return arr / la


@dataclass(frozen=True)
class ACSandwichReport:
    block_prop: float          # P = max_{ij} support_prop(T_ij)
    fiber_radius: float
    comparison: float
    witness_lower: float       # largest violated radius over all witnesses
    upper_ok: bool             # no violation beyond C (P + R0)
    lower_ok: bool             # P <= C * (witness_lower + slack)
    n_witnesses: int


def ac_prop_sandwich(T, space: ACSpace, budget: int = 12,
                     rng: np.random.Generator | None = None,
                     slack: float | None = None,
                     tol: Tolerances = DEFAULT_TOL) -> ACSandwichReport:
    """Two-sided propagation check through the fiber blocks.

    Computes P = max block propagation exactly, then hunts for spectral
    violations with deterministic base-distance witnesses (these certify
    radius P) and random fields from the seminorm unit ball, and checks
    both sandwich inequalities with the space's comparison constant.
    """
    m = linalg.as_matrix(T)
    n, k = space.base.n, space.fiber_dim
    rep = space.base_rep()
    P = 0.0
    for i in range(k):
        for j in range(k):
            P = max(P, support_prop(ac_block(m, i, j, space), rep, tol))

    rng = np.random.default_rng(0) if rng is None else rng
    witnesses = []
    eye_k = np.eye(k)
    for x in range(n):
        fvals = space.base.dist[:, x]
        witnesses.append(ac_embed(np.stack([v * eye_k for v in fvals]), space))
    for _ in range(budget):
        F = ac_sample_unit(space, rng)
        if F is not None:
            witnesses.append(ac_embed(F, space))

    viol_tol = tol.support * linalg.op_norm(m, tol)
    scale = max(space.base.scale + space.fiber_radius, 1.0)
    resolution = tol.bisect_resolution * scale
    witness_lower = 0.0
    for a in witnesses:
        eig = linalg.herm_eig(a, tol)
        snap = tol.eig_snap * (1.0 + float(np.max(np.abs(eig.eigenvalues))))

        def violated(radius: float) -> bool:
            return _witness_violation(m, eig, radius, snap, tol) > viol_tol

        if not violated(witness_lower):
            continue
        lo, hi = witness_lower, float(eig.eigenvalues[-1]) + 1.0
        for _ in range(tol.bisect_cap):
            if hi - lo <= resolution:
                break
            mid = (lo + hi) / 2.0
            if violated(mid):
                lo = mid
            else:
                hi = mid
        witness_lower = max(witness_lower, lo)

    C = space.comparison
    slack_val = resolution * 4.0 if slack is None else slack
    upper_ok = witness_lower <= C * (P + space.fiber_radius) + slack_val
    lower_ok = P <= C * (witness_lower + slack_val)
    return ACSandwichReport(P, space.fiber_radius, C, witness_lower,
                            upper_ok, lower_ok, len(witnesses))


# ---------------------------------------------------------------------------
# Slow-oscillation diagnostics


def slow_osc_score(values, radius: float, cutoff: int) -> float:
    """sup over x > cutoff of the radius-window oscillation of f on a
    truncated integer ray.

    values[x] samples f at x = 0..N; the window is |x - y| <= radius with
    y anywhere on the ray.
    """
    f = np.asarray(values, dtype=float)
    N = f.size - 1
    if not (0 <= cutoff < N):
        raise CutoffOutOfRange(f"cutoff {cutoff} outside 0..{N - 1}")
    r = int(np.floor(radius))
    xs = np.arange(cutoff + 1, N + 1)
    best = 0.0
    for delta in range(1, r + 1):
        left = xs[xs - delta >= 0]
        if left.size:
            best = max(best, float(np.max(np.abs(f[left] - f[left - delta]))))
        right = xs[xs + delta <= N]
        if right.size:
            best = max(best, float(np.max(np.abs(f[right] - f[right + delta]))))
    return best


def slow_osc_operator_score(values, radius: float, cutoff: int) -> float:
    """Operator form of the oscillation score for a multiplication operator.

    The deterministic witness family is the shift partial isometries
    V_d moving points by |d| <= radius; the commutator [V_d, diag f] has
    a single off-diagonal band with entries f(x) - f(x + d), so the tail
    compression norms reduce to banded maxima (no dense matrices needed).
    """
    f = np.asarray(values, dtype=float)
    N = f.size - 1
    if not (0 <= cutoff < N):
        raise CutoffOutOfRange(f"cutoff {cutoff} outside 0..{N - 1}")
    r = int(np.floor(radius))
    best = 0.0
    for d in range(1, r + 1):
        x = np.arange(0, N - d + 1)
        diffs = np.abs(f[x] - f[x + d])
        # (1 - chi_[0,K]) [V_d, S]: rows x+d > cutoff;  [V_d, S](1 - chi): cols x > cutoff
        rows = diffs[x + d > cutoff]
        cols = diffs[x > cutoff]
        if rows.size:
            best = max(best, float(rows.max()))
        if cols.size:
            best = max(best, float(cols.max()))
    return best


# ---------------------------------------------------------------------------
# Corona coarse-equivalence maps


@dataclass(frozen=True)
class CoronaReport:
    unital_ok: bool
    positive_ok: bool          # levels 1 and 2
    retraction_ok: bool        # phi-bar o psi-bar = id
    section_fixed_ok: bool     # psi-bar o phi-bar fixes f (x) 1
    difference_curve: tuple[tuple[int, float, float], ...]  # cutoff, diff tail, traceless tail

    @property
    def all_ok(self) -> bool:
        return self.unital_ok and self.positive_ok and self.retraction_ok and self.section_fixed_ok


def corona_maps_check(space: ACSpace, tau: MatrixState,
                      rng: np.random.Generator,
                      samples: int = 6,
                      cutoffs=(0,),
                      tol: Tolerances = DEFAULT_TOL) -> CoronaReport:
    """Verify the corona pair: phi-bar applies the fiber state pointwise,
    psi-bar tensors with the fiber unit.

    Checks unitality and positivity at matrix levels 1 and 2, the exact
    retraction phi-bar o psi-bar = id, invariance of fiber-scalar fields
    under psi-bar o phi-bar, and the tail curve of |psi-bar o phi-bar(F)
    - F| against the tail of the fiberwise-traceless part (they agree
    identically; both decay for fields with traceless C0 tails).
    """
    if tau.dim != space.fiber_dim:
        raise DimensionMismatch("fiber state dimension mismatch")
    n, k = space.base.n, space.fiber_dim
    sigma = tau.rho

    def phibar(F) -> np.ndarray:
        arr = _as_field(F, space)
        return np.array([np.trace(sigma @ arr[x]).real for x in range(n)])

    def psibar(f) -> np.ndarray:
        vals = np.asarray(f, dtype=complex)
        return np.stack([vals[x] * np.eye(k, dtype=complex) for x in range(n)])

    unital_ok = bool(np.allclose(phibar(psibar(np.ones(n))), 1.0, atol=1e-12))

    positive_ok = True
    for _ in range(samples):
        g = rng.standard_normal((n, k, k)) + 1j * rng.standard_normal((n, k, k))
        F = np.einsum("xab,xcb->xac", g, g.conj())
        if np.min(phibar(F)) < -1e-10:
            positive_ok = False
        # level 2: 2x2 blocks of fields, entrywise phi-bar must stay PSD
        g2 = rng.standard_normal((n, 2 * k, 2 * k)) + 1j * rng.standard_normal((n, 2 * k, 2 * k))
        M = np.einsum("xab,xcb->xac", g2, g2.conj())
        for x in range(n):
            scalar2 = np.array([
                [np.trace(sigma @ M[x][:k, :k]).real, np.trace(sigma @ M[x][:k, k:]).real],
                [np.trace(sigma @ M[x][k:, :k]).real, np.trace(sigma @ M[x][k:, k:]).real],
            ])
            if linalg.herm_eig((scalar2 + scalar2.T) / 2.0).eigenvalues[0] < -1e-10:
                positive_ok = False

    retraction_ok = True
    section_fixed_ok = True
    for _ in range(samples):
        f = rng.standard_normal(n)
        if np.max(np.abs(phibar(psibar(f)) - f)) > 1e-12 * (1.0 + np.max(np.abs(f))):
            retraction_ok = False
        back = psibar(phibar(psibar(f)))
        if np.max(np.abs(back - psibar(f))) > 1e-12 * (1.0 + np.max(np.abs(f))):
            section_fixed_ok = False

    F = np.stack([hermitian_sample(rng, k) for _ in range(n)])
    diff = psibar(phibar(F)) - F
    traceless = F - psibar(phibar(F))
    curve = []
    for K in cutoffs:
        tail = range(min(int(K), n - 1), n)
        d_tail = max(linalg.op_norm(diff[x]) for x in tail)
        t_tail = max(linalg.op_norm(traceless[x]) for x in tail)
        curve.append((int(K), float(d_tail), float(t_tail)))
    return CoronaReport(unital_ok, positive_ok, retraction_ok, section_fixed_ok, tuple(curve))
