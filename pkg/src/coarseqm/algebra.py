"""States, Lipschitz seminorm variants, and Monge-Kantorovich distances.

States are probability vectors (classical) or density matrices (matrix
blocks).  Seminorm variants share a tiny interface: ``eval`` on a
self-adjoint element and ``sample_unit`` drawing from the unit ball.
Every variant vanishes exactly on scalar multiples of the unit — the
defining axiom — and evaluators shortcut exact scalars so that this
holds bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .config import DEFAULT_TOL, Tolerances
from .exceptions import (
    BudgetZero,
    DimensionMismatch,
    DomainMismatch,
    GapExceeded,
    NotAState,
)
from .metric import MetricSpace, lipschitz_const
from .rng import hermitian_sample
from .simplex import solve_lp

__all__ = [
    "ProbState",
    "MatrixState",
    "CertifiedInterval",
    "Seminorm",
    "ClassicalLipschitz",
    "Spread",
    "CommutatorWithD",
    "seminorm_eval",
    "jordan",
    "TransportReport",
    "mk_classical",
    "mk_classical_report",
    "mk_spread",
    "mk_spread_witness",
    "mk_commutator_interval",
    "RepresentedAlgebra",
]


def _is_exact_scalar_vector(v) -> bool:
    return v.size > 0 and bool(np.all(v == v.flat[0]))


def _is_exact_scalar_matrix(m) -> bool:
    n = m.shape[0]
    if n == 0 or m.shape[0] != m.shape[1]:
        return False
    c = m[0, 0]
    return bool(np.all(m == c * np.eye(n, dtype=m.dtype if m.dtype != object else object)))


@dataclass(frozen=True)
class ProbState:
    """Probability vector over the points of a classical space."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p)
        object.__setattr__(self, "p", p)
        pf = p.astype(float)
        if pf.ndim != 1:
            raise NotAState("probability vector must be 1-d")
        if pf.min(initial=0.0) < -1e-12:
            raise NotAState(f"negative mass {pf.min():.3e}")
        if abs(pf.sum() - 1.0) > 1e-12:
            raise NotAState(f"total mass {float(pf.sum()):.17g} != 1")

    @property
    def n(self) -> int:
        return self.p.shape[0]

    def expect(self, a):
        return float(np.dot(self.p.astype(float), np.asarray(a, dtype=float)))

    def expect_exact(self, a):
        """Expectation in the input arithmetic (exact for Fraction entries)."""
        return sum(pi * ai for pi, ai in zip(self.p.tolist(), list(a)))

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.p.astype(float) > 0.0)


@dataclass(frozen=True)
class MatrixState:
    """Density matrix: PSD, trace 1 (within 1e-12 each)."""

    rho: np.ndarray

    def __post_init__(self):
        rho = linalg.as_matrix(self.rho)
        if rho.shape[0] != rho.shape[1]:
            raise NotAState("density matrix must be square")
        object.__setattr__(self, "rho", rho)
        if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
            tr = complex(np.trace(rho))
            raise NotAState(f"trace {tr.real:.17g}{tr.imag:+.3g}j != 1")
        w = linalg.herm_eig(rho).eigenvalues
        if w.min() < -1e-12:
            raise NotAState(f"negative eigenvalue {w.min():.3e}")

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def expect(self, a) -> float:
        return float(np.trace(self.rho @ linalg.as_matrix(a)).real)


@dataclass(frozen=True)
class CertifiedInterval:
    """[lower, upper] with provenance for each bound.

    The return type of every sup-over-infinite-set quantity: the lower
    bound is witnessed, the upper bound is proved.
    """

    lower: float
    upper: float
    lower_witness: str = ""
    upper_provenance: str = ""

    def __post_init__(self):
        if not (self.lower <= self.upper + 1e-12):
            raise ValueError(f"certified interval inverted: [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return self.upper - self.lower


class Seminorm:
    """Interface shared by all Lipschitz-seminorm variants."""

    name = "seminorm"

    def eval(self, a) -> float:
        raise NotImplementedError

    def sample_unit(self, rng: np.random.Generator):
        """One element with seminorm exactly 1, or None if the draw degenerates."""
        raise NotImplementedError

    def unit_element(self):
        """The unit of the (unitized) algebra, as a domain element."""
        raise NotImplementedError


class ClassicalLipschitz(Seminorm):
    """Lipschitz constant of real functions on a finite metric space."""

    name = "classical-lipschitz"

    def __init__(self, space: MetricSpace):
        self.space = space

    def eval(self, a) -> float:
        v = np.asarray(a)
        if v.shape != (self.space.n,):
            raise DomainMismatch(f"expected vector over {self.space.n} points, got {v.shape}")
        if _is_exact_scalar_vector(v):
            return 0.0
        return lipschitz_const(v.astype(float), self.space)

    def sample_unit(self, rng):
        v = rng.standard_normal(self.space.n)
        lv = self.eval(v)
        if lv == 0.0:
            return None
        return v / lv

    def unit_element(self):
        return np.ones(self.space.n)


class Spread(Seminorm):
    """Distance to scalars in operator norm: half the spectral spread."""

    name = "spread"

    def __init__(self, dim: int):
        self.dim = dim

    def eval(self, a) -> float:
        m = np.asarray(a)
        if m.shape != (self.dim, self.dim):
            raise DomainMismatch(f"expected {self.dim}x{self.dim} matrix, got {m.shape}")
        if _is_exact_scalar_matrix(m):
            return 0.0
        w = linalg.herm_eig(linalg.as_matrix(m)).eigenvalues
        return float(w[-1] - w[0]) / 2.0

    def sample_unit(self, rng):
        a = hermitian_sample(rng, self.dim)
        la = self.eval(a)
        if la == 0.0:
            return None
        return a / la

    def unit_element(self):
        return np.eye(self.dim, dtype=complex)


class CommutatorWithD(Seminorm):
    """a -> ||[D, a]|| for a fixed Hermitian D."""

    name = "commutator-with-D"

    def __init__(self, D, tol: Tolerances = DEFAULT_TOL):
        self.D = linalg.as_matrix(D)
        self.tol = tol
        linalg.herm_eig(self.D, tol)  # validates hermiticity once

    def eval(self, a) -> float:
        m = np.asarray(a)
        if m.shape != self.D.shape:
            raise DomainMismatch(f"expected {self.D.shape} matrix, got {m.shape}")
        if _is_exact_scalar_matrix(m):
            return 0.0
        return linalg.op_norm(linalg.commutator(self.D, linalg.as_matrix(m)), self.tol)

    def sample_unit(self, rng):
        a = hermitian_sample(rng, self.D.shape[0])
        la = self.eval(a)
        if la == 0.0:
            return None
        return a / la

    def unit_element(self):
        return np.eye(self.D.shape[0], dtype=complex)


def seminorm_eval(L: Seminorm, a) -> float:
    return L.eval(a)


def jordan(a, b) -> np.ndarray:
    """Jordan product (ab + ba) / 2."""
    a, b = linalg.as_matrix(a), linalg.as_matrix(b)
    return (a @ b + b @ a) / 2.0


# ---------------------------------------------------------------------------
# Monge-Kantorovich distances


@dataclass(frozen=True)
class TransportReport:
    primal: float
    dual: float
    gap: float
    potential: np.ndarray  # optimal dual function a with |a(x)-a(y)| <= d(x,y)
    plan: np.ndarray       # optimal transport plan


def mk_classical_report(mu: ProbState, nu: ProbState, space: MetricSpace,
                        tol: Tolerances = DEFAULT_TOL) -> TransportReport:
    """Wasserstein-1 distance computed twice: dual Lipschitz-ball LP and
    primal transport LP.  GapExceeded if they disagree beyond tolerance."""
    n = space.n
    if mu.n != n or nu.n != n:
        raise DimensionMismatch("states must live on the space's points")
    mu_p = mu.p.astype(float)
    nu_p = nu.p.astype(float)

    if n == 1:
        return TransportReport(0.0, 0.0, 0.0, np.zeros(1), np.ones((1, 1)))

    # dual: max (mu - nu) . a  over  |a(x) - a(y)| <= d(x, y)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    A_ub = np.zeros((2 * len(pairs), n))
    b_ub = np.zeros(2 * len(pairs))
    for r, (i, j) in enumerate(pairs):
        A_ub[2 * r, i] = 1.0
        A_ub[2 * r, j] = -1.0
        b_ub[2 * r] = space.dist[i, j]
        A_ub[2 * r + 1, i] = -1.0
        A_ub[2 * r + 1, j] = 1.0
        b_ub[2 * r + 1] = space.dist[i, j]
    dual_res = solve_lp(mu_p - nu_p, A_ub=A_ub, b_ub=b_ub, nonneg=False, maximize=True, tol=tol)

    # primal: min sum d(x, y) gamma(x, y) with fixed marginals
    cost = space.dist.ravel()
    A_eq = np.zeros((2 * n, n * n))
    for i in range(n):
        A_eq[i, i * n:(i + 1) * n] = 1.0       # row sums -> mu
        A_eq[n + i, i::n] = 1.0                # column sums -> nu
    primal_res = solve_lp(cost, A_eq=A_eq, b_eq=np.concatenate([mu_p, nu_p]), tol=tol)

    gap = abs(primal_res.value - dual_res.value)
    scale = space.scale
    if gap > tol.duality_gap * max(scale, 1.0):
        raise GapExceeded(
            f"duality gap {gap:.3e} exceeds {tol.duality_gap:.1e} * scale {scale:g}"
        )
    return TransportReport(primal_res.value, dual_res.value, gap,
                           dual_res.x, primal_res.x.reshape(n, n))


def mk_classical(mu: ProbState, nu: ProbState, space: MetricSpace,
                 tol: Tolerances = DEFAULT_TOL) -> float:
    """Monge-Kantorovich distance of two classical states (dual LP value)."""
    return mk_classical_report(mu, nu, space, tol).dual


def mk_spread_witness(phi: MatrixState, psi: MatrixState,
                      tol: Tolerances = DEFAULT_TOL) -> tuple[float, np.ndarray]:
    """Distance under the spread seminorm together with the maximizing element.

    sup over spread(a) <= 1 of |tr((rho - sigma) a)| equals the trace norm
    of the difference; attained at a = sign(rho - sigma).
    """
    if phi.dim != psi.dim:
        raise DimensionMismatch(f"block dimensions differ: {phi.dim} vs {psi.dim}")
    delta = phi.rho - psi.rho
    eig = linalg.herm_eig(delta, tol)
    sign = np.sign(eig.eigenvalues)
    witness = (eig.vectors * sign) @ eig.vectors.conj().T
    value = float(np.trace(delta @ witness).real)
    return value, witness


def mk_spread(phi: MatrixState, psi: MatrixState, tol: Tolerances = DEFAULT_TOL) -> float:
    return mk_spread_witness(phi, psi, tol)[0]


def mk_commutator_interval(phi: MatrixState, psi: MatrixState, D,
                           budget: int = 8, rng: np.random.Generator | None = None,
                           diameter: float | None = None,
                           iters: int = 60,
                           tol: Tolerances = DEFAULT_TOL) -> CertifiedInterval:
    """State distance under a commutator seminorm, as a certified interval.

    The exact value is a spectral-norm-constrained program we do not
    solve; the lower bound comes from projected supergradient ascent on
    tr(delta a) over {||[D, a]|| <= 1}.  When delta pairs with a
    non-scalar commutant direction of D the supremum is infinite and the
    interval records that ray.  The upper bound is a supplied diameter
    bound, else +inf.
    """
    if budget <= 0:
        raise BudgetZero("ascent budget must be positive")
    if phi.dim != psi.dim:
        raise DimensionMismatch("states live on different blocks")
    L = CommutatorWithD(D, tol)
    delta = phi.rho - psi.rho
    upper = float("inf") if diameter is None else float(diameter)

    # commutant of D = block-diagonal w.r.t. eigenvalue clusters; a nonzero
    # pairing there gives an unbounded feasible ray
    eig = linalg.herm_eig(L.D, tol)
    snap = tol.eig_snap * (1.0 + float(np.max(np.abs(eig.eigenvalues))))
    d_rot = eig.vectors.conj().T @ delta @ eig.vectors
    comm_part = np.zeros_like(d_rot)
    start = 0
    w = eig.eigenvalues
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[start] > snap:
            comm_part[start:k, start:k] = d_rot[start:k, start:k]
            start = k
    if float(np.max(np.abs(comm_part))) > 1e-10:
        return CertifiedInterval(
            float("inf"), float("inf"),
            lower_witness="states separate along a commutant direction of D",
            upper_provenance="unbounded ray",
        )

    rng = np.random.default_rng(0) if rng is None else rng
    best = 0.0
    n = phi.dim
    for trial in range(budget):
        a = delta.copy() if trial == 0 else hermitian_sample(rng, n)
        for _ in range(iters):
            la = L.eval(a)
            if la > 0:
                a = a / la
            val = float(np.trace(delta @ a).real)
            if val < 0:
                a = -a
                val = -val
            best = max(best, val)
            a = a + 0.5 * delta
    best = min(best, upper)
    return CertifiedInterval(best, upper,
                             lower_witness=f"supergradient ascent, budget {budget}",
                             upper_provenance="diameter bound" if diameter is not None else "none")


@dataclass(frozen=True)
class RepresentedAlgebra:
    """Direct sum of full matrix blocks embedded block-diagonally.

    ``block_dims[i]`` is the matrix size of block i; ``multiplicities[i]``
    how many times it repeats in the representation.  The embedding is
    *-linear, multiplicative, faithful, and unital by construction; the
    check method verifies this numerically on random pairs.
    """

    block_dims: tuple[int, ...]
    multiplicities: tuple[int, ...] = ()

    def __post_init__(self):
        dims = tuple(int(d) for d in self.block_dims)
        mult = tuple(int(m) for m in self.multiplicities) or tuple(1 for _ in dims)
        if len(mult) != len(dims) or any(d <= 0 for d in dims) or any(m <= 0 for m in mult):
            raise DimensionMismatch("block dims and multiplicities must be positive, same length")
        object.__setattr__(self, "block_dims", dims)
        object.__setattr__(self, "multiplicities", mult)

    @property
    def rep_dim(self) -> int:
        return int(sum(d * m for d, m in zip(self.block_dims, self.multiplicities)))

    def embed(self, blocks) -> np.ndarray:
        if len(blocks) != len(self.block_dims):
            raise DimensionMismatch("one matrix per block required")
        out = np.zeros((self.rep_dim, self.rep_dim), dtype=complex)
        ofs = 0
        for blk, d, m in zip(blocks, self.block_dims, self.multiplicities):
            b = linalg.as_matrix(blk)
            if b.shape != (d, d):
                raise DimensionMismatch(f"block of shape {b.shape}, expected {(d, d)}")
            for _ in range(m):
                out[ofs:ofs + d, ofs:ofs + d] = b
                ofs += d
        return out

    def random_element(self, rng) -> list[np.ndarray]:
        return [hermitian_sample(rng, d) + 1j * 0 for d in self.block_dims]

    def check_representation(self, rng, trials: int = 5, tol: float = 1e-10) -> None:
        """Verify *-linearity and multiplicativity of the embedding on
        random pairs, and faithfulness via the block structure."""
        for _ in range(trials):
            a = [hermitian_sample(rng, d) for d in self.block_dims]
            b = [hermitian_sample(rng, d) for d in self.block_dims]
            lam = complex(rng.standard_normal(), rng.standard_normal())
            ra, rb = self.embed(a), self.embed(b)
            prod = self.embed([x @ y for x, y in zip(a, b)])
            lin = self.embed([lam * x + y for x, y in zip(a, b)])
            star = self.embed([x.conj().T for x in a])
            if linalg.op_norm(prod - ra @ rb) > tol:
                raise AssertionError("embedding is not multiplicative")
            if linalg.op_norm(lin - (lam * ra + rb)) > tol:
                raise AssertionError("embedding is not linear")
            if linalg.op_norm(star - ra.conj().T) > tol:
                raise AssertionError("embedding is not *-preserving")
            if linalg.op_norm(ra) > 0 and all(linalg.op_norm(x) == 0 for x in a):
                raise AssertionError("embedding is not faithful")
