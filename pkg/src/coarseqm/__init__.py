"""coarseqm: desk-scale numerics for coarse structure on represented algebras.

Computes Lipschitz seminorms and the state-space transport distances
they induce, operator propagation (support-based and spectral-witness
based, always as certified intervals), the dual commutator seminorm,
cover-based cutting to finite propagation with explicit error constants,
coarse disjoint unions, almost-commutative spaces, unitary-evolution and
Fourier-calculus commutator bounds, and slow-oscillation decay
diagnostics — with every quantitative inequality checked at a stated
tolerance by the acceptance suite (`coarseqm verify`).
"""

from ._kernels import BACKEND
from .config import DEFAULT_TOL, Tolerances

__version__ = "0.1.0"

__all__ = ["BACKEND", "DEFAULT_TOL", "Tolerances", "__version__"]
