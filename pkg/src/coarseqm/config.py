"""Single tolerance record shared by every comparison in the library.

Every numeric guard in the package routes through one `Tolerances`
instance so that a run is characterized by (inputs, seed, tolerances)
and nothing else.  Relative tolerances are documented next to the field
they scale; "scale" always means the natural magnitude of the quantity
being compared (Frobenius norm, metric diameter, operator norm, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # Hermitian flag check: max |A - A*| <= hermitian_flag * (1 + max|entry|).
    hermitian_flag: float = 1e-12
    # Jacobi eigensolver: stop once off-diagonal Frobenius mass drops below
    # jacobi_off * ||A||_F; give up after jacobi_sweep_cap full sweeps.
    jacobi_off: float = 1e-14
    jacobi_sweep_cap: int = 100
    # Eigendecomposition acceptance: ||A - U diag(w) U*||_F <= eig_residual * (1 + ||A||_F).
    eig_residual: float = 1e-10
    # Spectral intervals: eigenvalues within eig_snap * (1 + ||A||) of an
    # endpoint are moved onto the endpoint before open/closed semantics apply.
    eig_snap: float = 1e-12
    # Support detection: a block (x, y) counts as occupied when its operator
    # norm exceeds support * ||T||.
    support: float = 1e-12
    # Metric axioms: triangle slack is triangle * scale with scale = max distance.
    triangle: float = 1e-12
    # Kantorovich duality: |primal - dual| <= duality_gap * scale or GapExceeded.
    duality_gap: float = 1e-7
    # Simplex pivoting thresholds (absolute, on normalized tableaus).
    lp_pivot: float = 1e-9
    lp_iteration_cap: int = 50_000
    # Radius searches: bisection resolution bisect_resolution * scale,
    # capped at bisect_cap iterations.
    bisect_resolution: float = 1e-6
    bisect_cap: int = 60
    # 1-d concave maximization (chain distances): absolute resolution.
    ternary: float = 1e-9
    # Partition-of-unity exactness: |sum_j e_j(x) - 1| <= partition_sum.
    partition_sum: float = 1e-12
    # Cutting bounds: measured deviation may exceed the nominal bound by
    # cut_slack (partition normalization can inflate Lipschitz constants).
    cut_slack: float = 4.0
    # Quadrature: profile endpoints must vanish within profile_endpoint.
    profile_endpoint: float = 1e-12

    def scaled(self, factor: float) -> "Tolerances":
        """Return a copy with every relative tolerance multiplied by `factor`."""
        if factor <= 0:
            raise ValueError("tolerance scale factor must be positive")
        return replace(
            self,
            hermitian_flag=self.hermitian_flag * factor,
            jacobi_off=self.jacobi_off * factor,
            eig_residual=self.eig_residual * factor,
            eig_snap=self.eig_snap * factor,
            support=self.support * factor,
            triangle=self.triangle * factor,
            duality_gap=self.duality_gap * factor,
            bisect_resolution=self.bisect_resolution * factor,
            ternary=self.ternary * factor,
            partition_sum=self.partition_sum * factor,
        )


#: Library-wide defaults; functions take `tol: Tolerances = DEFAULT_TOL`.
DEFAULT_TOL = Tolerances()
