"""Seeded random ensembles: Haar unitaries, isometries, channels, states.

Reproducibility contract: every random quantity is drawn from a
counter-based stream keyed by (master_seed, stream_index).  A trial that
re-runs with the same key reproduces its output bit for bit, regardless
of how many other trials run or on which threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channels import MixedUnitaryChannel, StinespringChannel, validate_weights
from .errors import DimensionMismatchError
from .linalg import DensityMatrix


def stream(master_seed: int, stream_index: int = 0) -> np.random.Generator:
    """Independent generator keyed by (master_seed, stream_index)."""
    key = np.array(
        [np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF), np.uint64(stream_index)],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class SeededRng:
    """Named (master_seed, stream_index) pair; `generator()` builds the stream."""

    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        return stream(self.master_seed, self.stream_index)


def _ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    if dim <= 0:
        raise DimensionMismatchError("dimension must be positive")
    z = _ginibre(dim, dim, rng)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return q


def haar_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """First `cols` columns of a Haar unitary on C^rows, in distribution."""
    if cols > rows:
        raise DimensionMismatchError(f"isometry needs cols <= rows, got {cols} > {rows}")
    if cols <= 0 or rows <= 0:
        raise DimensionMismatchError("dimensions must be positive")
    z = _ginibre(rows, cols, rng)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return q


def sample_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform unit vector on the complex sphere in C^dim."""
    if dim <= 0:
        raise DimensionMismatchError("dimension must be positive")
    v = _ginibre(dim, 1, rng).reshape(-1)
    return v / np.linalg.norm(v)


def sample_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Random full-rank state G G* / Tr[G G*] from a square Ginibre G."""
    g = _ginibre(dim, dim, rng)
    m = g @ g.conj().T
    return DensityMatrix.normalized(m / np.trace(m).real)


def sample_mixed_unitary_channel(
    k: int, n: int, weights, rng: np.random.Generator
) -> MixedUnitaryChannel:
    """k independent Haar unitaries on C^n with the given weights."""
    w = validate_weights(weights)
    if w.size != k:
        raise DimensionMismatchError(f"need {k} weights, got {w.size}")
    us = [haar_unitary(n, rng) for _ in range(k)]
    return MixedUnitaryChannel(w, us)


def sample_stinespring_channel(
    k: int, env_dim: int, input_dim: int, rng: np.random.Generator
) -> StinespringChannel:
    """Channel from a Haar isometry C^input -> C^k (x) C^env."""
    v = haar_isometry(k * env_dim, input_dim, rng)
    return StinespringChannel(v, k, env_dim)


@dataclass(frozen=True)
class StinespringRegime:
    """Growth regime for random isometries: input dimension N(n) = max(1, round(t n k))."""

    k: int
    t: float
    n_grid: tuple[int, ...] = field(default_factory=tuple)

    def input_dim(self, n: int) -> int:
        return max(1, int(round(self.t * n * self.k)))

    def sample(self, n: int, rng: np.random.Generator) -> StinespringChannel:
        return sample_stinespring_channel(self.k, n, self.input_dim(n), rng)


def sample_projective_povm(
    block_dims, rng: np.random.Generator
) -> list[np.ndarray]:
    """Orthogonal projectors with prescribed ranks, conjugated by a Haar unitary.

    Every element has operator norm exactly 1 and a 1-eigenspace of the
    requested dimension.
    """
    dims = [int(d) for d in block_dims]
    if any(d <= 0 for d in dims):
        raise DimensionMismatchError("block dimensions must be positive")
    n = sum(dims)
    u = haar_unitary(n, rng)
    povm = []
    start = 0
    for d in dims:
        cols = u[:, start : start + d]
        povm.append(cols @ cols.conj().T)
        start += d
    return povm


def sample_unit_norm_povm(
    block_dims, slack_dim: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Non-projective POVM whose elements still have norm 1.

    Projectors of the given ranks share a Haar-rotated basis; a slack
    block of dimension `slack_dim` is split among the elements with
    random convex coefficients, so each element gains eigenvalues
    strictly inside (0, 1) while keeping its 1-eigenspace.
    """
    dims = [int(d) for d in block_dims]
    if any(d <= 0 for d in dims) or slack_dim < 0:
        raise DimensionMismatchError("block dimensions must be positive")
    n = sum(dims) + slack_dim
    u = haar_unitary(n, rng)
    povm = []
    start = 0
    for d in dims:
        cols = u[:, start : start + d]
        povm.append(cols @ cols.conj().T)
        start += d
    if slack_dim > 0:
        cols = u[:, start:]
        slack = cols @ cols.conj().T
        shares = rng.dirichlet(np.ones(len(dims)))
        # keep shares strictly below 1 so the 1-eigenspace dimensions survive
        shares = 0.5 * shares + 0.5 / len(dims)
        shares /= shares.sum()
        for i, s in enumerate(shares):
            povm[i] = povm[i] + s * slack
    return povm
