"""Hot numeric kernels: cyclic Jacobi sweeps for Hermitian matrices.

Two interchangeable backends:

* ``numba``  - @njit compiled rotation loop (default when numba imports),
* ``numpy``  - the same rotation sequence with vectorized row updates.

Selection is by the environment variable ``COARSEQM_BACKEND`` (values
``numba`` or ``numpy``); anything else, or an absent variable, means
"numba if available".  Both paths apply the same rotation sequence;
results agree to floating-point roundoff (numpy's SIMD complex multiply
may contract multiply-adds, so the last ulp can differ) and every
comparison downstream runs at tolerances far above that.  For a fixed
backend the output is a pure function of the input.
``benchmarks/bench_kernels.py`` times one backend against the other.
"""

from __future__ import annotations

import math
import os

import numpy as np

_ENV_VAR = "COARSEQM_BACKEND"


def _requested_backend() -> str:
    return os.environ.get(_ENV_VAR, "").strip().lower()


def _sweep_numpy(A: np.ndarray, U: np.ndarray, skip: float) -> int:
    """One cyclic Jacobi sweep in place; returns rotations applied."""
    n = A.shape[0]
    nrot = 0
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = complex(A[p, q])
            # explicit modulus: identical rounding on both backends
            r = math.sqrt(apq.real * apq.real + apq.imag * apq.imag)
            if r <= skip:
                continue
            app = A[p, p].real
            aqq = A[q, q].real
            ephi = apq / r
            theta = (aqq - app) / (2.0 * r)
            if theta >= 0.0:
                t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
            else:
                t = -1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            se = s * ephi
            sec = s * ephi.conjugate()
            colp = A[:, p].copy()
            colq = A[:, q].copy()
            A[:, p] = c * colp - sec * colq
            A[:, q] = se * colp + c * colq
            rowp = A[p, :].copy()
            rowq = A[q, :].copy()
            A[p, :] = c * rowp - se * rowq
            A[q, :] = sec * rowp + c * rowq
            A[p, p] = app - t * r
            A[q, q] = aqq + t * r
            A[p, q] = 0.0
            A[q, p] = 0.0
            up = U[:, p].copy()
            uq = U[:, q].copy()
            U[:, p] = c * up - sec * uq
            U[:, q] = se * up + c * uq
            nrot += 1
    return nrot


def _build_numba_sweep():
    from numba import njit

    @njit(cache=True)
    def _sweep(A: np.ndarray, U: np.ndarray, skip: float) -> int:  # pragma: no cover
        n = A.shape[0]
        nrot = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = math.sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if r <= skip:
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                ephi = apq / r
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                se = s * ephi
                sec = s * np.conj(ephi)
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - sec * akq
                    A[k, q] = se * akp + c * akq
                for k in range(n):
                    apk = A[p, k]
                    aqk = A[q, k]
                    A[p, k] = c * apk - se * aqk
                    A[q, k] = sec * apk + c * aqk
                A[p, p] = app - t * r
                A[q, q] = aqq + t * r
                A[p, q] = 0.0
                A[q, p] = 0.0
                for k in range(n):
                    ukp = U[k, p]
                    ukq = U[k, q]
                    U[k, p] = c * ukp - sec * ukq
                    U[k, q] = se * ukp + c * ukq
                nrot += 1
        return nrot

    return _sweep


_SWEEPS = {"numpy": _sweep_numpy}
if _requested_backend() != "numpy":
    try:
        _SWEEPS["numba"] = _build_numba_sweep()
    except ImportError:
        pass

#: Active backend name, decided once at import.
BACKEND = "numba" if "numba" in _SWEEPS else "numpy"

jacobi_sweep = _SWEEPS[BACKEND]


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_SWEEPS))


def sweep_for(backend: str):
    """Explicit backend lookup (used by the benchmark and equivalence tests)."""
    if backend == "numpy":
        return _sweep_numpy
    if backend == "numba":
        if "numba" not in _SWEEPS:
            _SWEEPS["numba"] = _build_numba_sweep()
        return _SWEEPS["numba"]
    raise ValueError(f"unknown backend {backend!r}")
