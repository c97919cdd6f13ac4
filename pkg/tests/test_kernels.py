"""Backend selection and numba/numpy sweep equivalence."""

import subprocess
import sys

import numpy as np
import pytest

from coarseqm import linalg
from coarseqm._kernels import available_backends, sweep_for
from conftest import random_hermitian


def test_both_backends_available():
    assert "numpy" in available_backends()


@pytest.mark.parametrize("n", [2, 5, 17, 48])
def test_backend_results_agree_to_roundoff(rng, n):
    if "numba" not in available_backends():
        pytest.skip("numba not importable")
    A = random_hermitian(rng, n)
    e1 = linalg.herm_eig(A, backend="numba")
    e2 = linalg.herm_eig(A, backend="numpy")
    np.testing.assert_allclose(e1.eigenvalues, e2.eigenvalues, rtol=0, atol=1e-12)
    np.testing.assert_allclose(e1.vectors, e2.vectors, rtol=0, atol=1e-12)


def test_single_rotation_identical(rng):
    # one 2x2 rotation goes through identical scalar arithmetic on both paths
    if "numba" not in available_backends():
        pytest.skip("numba not importable")
    A = random_hermitian(rng, 2)
    out = []
    for name in ("numba", "numpy"):
        W = np.ascontiguousarray(A.copy())
        U = np.eye(2, dtype=complex)
        sweep_for(name)(W, U, 0.0)
        out.append((W.copy(), U.copy()))
    assert np.array_equal(out[0][0], out[1][0])
    assert np.array_equal(out[0][1], out[1][1])


def test_env_flag_forces_numpy():
    code = (
        "import coarseqm; print(coarseqm.BACKEND)"
    )
    res = subprocess.run([sys.executable, "-c", code],
                         env={"COARSEQM_BACKEND": "numpy", "PATH": "/usr/bin:/bin"},
                         capture_output=True, text=True)
    assert res.stdout.strip() == "numpy"
