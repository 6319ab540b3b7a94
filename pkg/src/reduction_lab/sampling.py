"""Seeded random constructions with known ground truth.

Used by the self-test command and the verification suite: conjugated block
algebras with a known Wedderburn profile, digraph algebras with a known
radical, commuting idempotent families, and well-conditioned random
similarities.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraBasis
from .gallery import Digraph
from .linalg import Subspace

__all__ = [
    "random_invertible",
    "random_unitary",
    "random_subspace",
    "random_complementary_pair",
    "block_algebra_basis",
    "random_semisimple_algebra",
    "random_digraph",
    "random_commuting_idempotents",
]


def random_invertible(
    n: int, rng: np.random.Generator, max_cond: float = 1e4
) -> np.ndarray:
    """A complex Gaussian matrix, redrawn until its condition number is modest."""
    while True:
        R = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if np.linalg.cond(R) <= max_cond:
            return R


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return Q


def random_subspace(n: int, k: int, rng: np.random.Generator) -> Subspace:
    X = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    return Subspace.from_spanning(X, ambient=n)


def random_complementary_pair(
    n: int,
    rng: np.random.Generator,
    min_angle_sin: float = 0.0,
) -> tuple[Subspace, Subspace]:
    """A random pair of subspaces in direct sum.

    ``min_angle_sin`` rejects pairs whose smallest principal angle is too
    shallow, keeping the associated projection well conditioned.
    """
    from .linalg import principal_angle

    while True:
        k = int(rng.integers(1, n))
        V = random_subspace(n, k, rng)
        W = random_subspace(n, n - k, rng)
        C = np.hstack([V.frame, W.frame])
        sig = np.linalg.svd(C, compute_uv=False)
        if sig[-1] <= 1e-6:
            continue
        if min_angle_sin > 0.0 and np.sin(principal_angle(V, W)) < min_angle_sin:
            continue
        return V, W


def block_algebra_basis(blocks, degenerate_dim: int = 0) -> AlgebraBasis:
    """Literal block algebra: matrix units of each (k, mult) block, then zeros.

    The block for (k, mult) is spanned by unit (x) identity-of-multiplicity;
    an annihilated summand of the requested dimension is appended.
    """
    n = sum(k * m for k, m in blocks) + degenerate_dim
    basis = []
    at = 0
    for k, mult in blocks:
        for s in range(k):
            for t in range(k):
                E = np.zeros((k, k), dtype=complex)
                E[s, t] = 1.0
                g = np.zeros((n, n), dtype=complex)
                g[at : at + k * mult, at : at + k * mult] = np.kron(E, np.eye(mult))
                basis.append(g)
        at += k * mult
    return AlgebraBasis(ambient=n, basis=basis, unital=(degenerate_dim == 0))


def random_semisimple_algebra(
    rng: np.random.Generator,
    max_dim: int = 6,
    allow_degenerate: bool = False,
    max_cond: float = 50.0,
) -> tuple[AlgebraBasis, tuple, int]:
    """A conjugated block algebra with known profile.

    Returns (algebra, blocks sorted descending, degenerate dimension).
    """
    n = int(rng.integers(2, max_dim + 1))
    budget = n
    blocks = []
    degenerate = 0
    if allow_degenerate and rng.random() < 0.3:
        degenerate = int(rng.integers(1, max(2, n // 2)))
        budget -= degenerate
    while budget > 0:
        k = int(rng.integers(1, budget + 1))
        mult = int(rng.integers(1, budget // k + 1))
        blocks.append((k, mult))
        budget -= k * mult
    literal = block_algebra_basis(blocks, degenerate)
    R = random_invertible(n, rng, max_cond=max_cond)
    R_inv = np.linalg.inv(R)
    basis = [R @ b @ R_inv for b in literal.basis]
    A = AlgebraBasis(ambient=n, basis=basis, unital=literal.unital)
    return A, tuple(sorted(blocks, reverse=True)), degenerate


def random_digraph(n: int, rng: np.random.Generator, density: float = 0.3) -> Digraph:
    """Transitive closure of a random edge set, plus all loops."""
    edges = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < density:
                edges.append((i, j))
    return Digraph.from_edges(n, edges)


def random_commuting_idempotents(
    rng: np.random.Generator,
    n: int,
    count: int,
    max_cond: float = 50.0,
) -> list[np.ndarray]:
    """Commuting idempotents: conjugated random diagonal 0/1 patterns."""
    R = random_invertible(n, rng, max_cond=max_cond)
    R_inv = np.linalg.inv(R)
    out = []
    for _ in range(count):
        mask = rng.integers(0, 2, size=n).astype(complex)
        out.append(R @ np.diag(mask) @ R_inv)
    return out
