"""Unitary evolution bounds, Fourier functional calculus, normalizing functions.

The functional calculus integrates e^{itD} against a compactly-supported
Fourier profile with uniform trapezoid weights, so no tail truncation
error enters; the commutator-growth bound is computed by the same
quadrature on |t| |profile(t)|.

At finite dimension every operator is compact, so local compactness of
the calculus output holds trivially and is recorded here rather than
tested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import CommutatorWithD
from .config import DEFAULT_TOL, Tolerances
from .exceptions import DimensionMismatch, NonpositiveWidth, ProfileInvalid

__all__ = [
    "evo_commutator_check",
    "FourierProfile",
    "fourier_func_calc",
    "sine_integral",
    "NormalizingFunction",
    "normalizing_fn",
    "lstar_fourier_check",
]


def evo_commutator_check(D, a, t: float, tol: Tolerances = DEFAULT_TOL) -> tuple[float, float]:
    """(||[e^{itD}, a]||, |t| ||[D, a]||): the left never exceeds the right."""
    Dm, am = linalg.as_matrix(D), linalg.as_matrix(a)
    if Dm.shape != am.shape:
        raise DimensionMismatch(f"shapes {Dm.shape} vs {am.shape}")
    U = linalg.expi(Dm, t, tol)
    lhs = linalg.op_norm(linalg.commutator(U, am), tol)
    rhs = abs(t) * linalg.op_norm(linalg.commutator(Dm, am), tol)
    return lhs, rhs


@dataclass(frozen=True)
class FourierProfile:
    """Sampled Fourier transform on a uniform grid over [-tmax, tmax].

    ``closed_support=False`` (the default) demands the sampled values
    vanish at the endpoints; profiles with a jump exactly at the support
    boundary (indicators) set ``closed_support=True``, in which case the
    endpoint samples carry the boundary value and the trapezoid rule's
    half-weights represent the jump without truncation error.
    """

    tmax: float
    values: np.ndarray
    closed_support: bool = False

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", v)
        if self.tmax <= 0:
            raise ProfileInvalid("tmax must be positive")
        if v.ndim != 1 or v.size < 3:
            raise ProfileInvalid("profile needs at least 3 grid values")
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise ProfileInvalid("profile values must be finite")
        if not self.closed_support:
            edge = max(abs(v[0]), abs(v[-1]))
            if edge > DEFAULT_TOL.profile_endpoint:
                raise ProfileInvalid(
                    f"endpoint value {edge:.3e} does not vanish; use closed_support=True "
                    "for profiles with a jump at the boundary")

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.tmax, self.tmax, self.values.size)

    @property
    def weights(self) -> np.ndarray:
        h = 2.0 * self.tmax / (self.values.size - 1)
        w = np.full(self.values.size, h)
        w[0] = w[-1] = h / 2.0
        return w

    @classmethod
    def from_function(cls, fhat, tmax: float, nodes: int = 2001,
                      closed_support: bool = False) -> "FourierProfile":
        t = np.linspace(-tmax, tmax, nodes)
        return cls(tmax, np.asarray([fhat(x) for x in t], dtype=complex), closed_support)

    @classmethod
    def sinc(cls, nodes: int = 2001) -> "FourierProfile":
        """Indicator profile (1/2 on [-1, 1]): the function is sin(x)/x."""
        return cls(1.0, np.full(nodes, 0.5, dtype=complex), closed_support=True)

    def scaled(self, factor: complex) -> "FourierProfile":
        return FourierProfile(self.tmax, self.values * factor, self.closed_support)

    def growth_bound(self) -> float:
        """Quadrature value of the commutator-growth integral |t| |values|."""
        return float(np.sum(self.weights * np.abs(self.nodes) * np.abs(self.values)))


def fourier_func_calc(D, profile: FourierProfile,
                      tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """(quadrature of profile(t) e^{itD} dt, growth bound).

    One eigendecomposition of D; the t-sum acts on eigenvalues, which is
    exactly the sum of the e^{itD} terms in the same order.
    """
    eig = linalg.herm_eig(D, tol)
    t = profile.nodes
    w = profile.weights
    # phi(lambda_k) = sum_m w_m fhat(t_m) e^{i t_m lambda_k}
    phase = np.exp(1j * np.outer(eig.eigenvalues, t))
    fw = phase @ (w * profile.values)
    out = (eig.vectors * fw) @ eig.vectors.conj().T
    return out, profile.growth_bound()


def _si_series_exact(x: float) -> float:
    """Power series: converges fast for |x| <= 4."""
    total = 0.0
    power = x  # x^(2k+1) / (2k+1)!
    k = 0
    while True:
        contrib = power / (2 * k + 1)
        total += contrib
        if abs(contrib) < 1e-18 * (1.0 + abs(total)) or k > 80:
            break
        k += 1
        power = -power * x * x / ((2 * k) * (2 * k + 1))
    return total


def _e1_imag_axis(x: float) -> complex:
    """E1(i x) for x > 0 by the modified Lentz continued fraction."""
    z = 1j * x
    tiny = 1e-300
    b = z + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for k in range(1, 400):
        a = -float(k * k)
        b = b + 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h = h * delta
        if abs(delta - 1.0) < 1e-17:
            break
    return h * np.exp(-z)


def sine_integral(x: float) -> float:
    """Si(x) to ~1e-13 absolute: power series for |x| <= 4, continued
    fraction for the exponential integral on the imaginary axis beyond."""
    ax = abs(x)
    if ax <= 4.0:
        s = _si_series_exact(ax)
    else:
        # Si(x) = pi/2 + Im E1(i x) for x > 0
        s = math.pi / 2.0 + float(np.imag(_e1_imag_axis(ax)))
    return s if x >= 0 else -s


@dataclass(frozen=True)
class NormalizingFunction:
    """Odd sigmoid built from the sine integral: psi(x) = (2/pi) Si(x / width).

    Its Fourier transform is supported in [-1/width, 1/width]; psi tends
    to +-1 at +-infinity.
    """

    width: float

    def __post_init__(self):
        if self.width <= 0:
            raise NonpositiveWidth(f"width {self.width} must be positive")

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.array([2.0 / math.pi * sine_integral(v / self.width) for v in arr.ravel()])
        return out.reshape(arr.shape) if arr.shape else float(out[0])

    @property
    def odd(self) -> bool:
        return True

    @property
    def fourier_support_radius(self) -> float:
        return 1.0 / self.width

    def asymptote_defect(self, x: float) -> float:
        """max deviation of psi(+-x) from +-1 (tends to 0 as x grows)."""
        return max(abs(self(abs(x)) - 1.0), abs(self(-abs(x)) + 1.0))


def normalizing_fn(width: float) -> NormalizingFunction:
    return NormalizingFunction(width)


@dataclass(frozen=True)
class FourierCommutatorReport:
    bound: float
    max_commutator: float
    max_ratio: float
    samples: int

    @property
    def within(self) -> bool:
        return self.max_ratio <= 1.0 + 1e-4


def lstar_fourier_check(D, profile: FourierProfile, samples: int,
                        rng: np.random.Generator,
                        tol: Tolerances = DEFAULT_TOL) -> FourierCommutatorReport:
    """Sample a with ||[D, a]|| = 1 and compare ||[phi(D), a]|| to the
    growth bound; reports the worst ratio."""
    phi_D, bound = fourier_func_calc(D, profile, tol)
    L = CommutatorWithD(D, tol)
    worst = 0.0
    drawn = 0
    attempts = 0
    while drawn < samples and attempts < 8 * samples:
        attempts += 1
        a = L.sample_unit(rng)
        if a is None:
            continue
        drawn += 1
        worst = max(worst, linalg.op_norm(linalg.commutator(phi_D, a), tol))
    ratio = worst / bound if bound > 0 else (0.0 if worst == 0 else float("inf"))
    return FourierCommutatorReport(bound, worst, ratio, drawn)
