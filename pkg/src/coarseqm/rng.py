"""Deterministic random streams.

All randomized searches in the package draw from Philox4x64-10, a
counter-based generator specified by algorithm (Salmon et al., SC'11),
so alternate implementations can reproduce the streams from (seed,
label) alone.  A stream is keyed by the user seed in the first key word
and a label digest in the second; distinct labels give statistically
independent streams under the same seed.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _label_key(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def stream(seed: int, label: str = "") -> np.random.Generator:
    """Philox4x64-10 generator keyed by (seed, sha256(label)[:8])."""
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(_label_key(label))])
    return np.random.Generator(np.random.Philox(key=key))


def hermitian_sample(rng: np.random.Generator, n: int) -> np.ndarray:
    """Standard-Gaussian Hermitian matrix (GUE-style, unnormalized)."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2.0


def density_sample(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random density matrix: normalized G G* with Gaussian G."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
