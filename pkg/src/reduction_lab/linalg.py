"""Numerical primitives: complex matrices, subspaces, norms, polar decomposition.

Matrices are plain complex ``numpy`` arrays.  Subspaces are always stored
through orthonormal column frames so that equality and containment tests are
stable; frames are re-orthonormalised on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSubspaceError,
    MalformedInputError,
    NotComplementaryError,
    NotPositiveError,
    SingularMatrixError,
)
from .tolerance import DEFAULT_TOL, Tolerance

__all__ = [
    "Subspace",
    "as_matrix",
    "check_finite",
    "operator_norm",
    "polar_decompose",
    "matrix_sqrt_positive",
    "principal_angle",
    "projection_onto_along",
    "rank_and_range",
    "null_space",
    "is_hermitian",
    "is_idempotent",
    "identity",
]


def as_matrix(data) -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting non-finite entries."""
    M = np.asarray(data, dtype=complex)
    if M.ndim != 2:
        raise MalformedInputError(f"expected a matrix, got array of ndim {M.ndim}")
    check_finite(M)
    return M


def check_finite(M: np.ndarray) -> None:
    if not np.all(np.isfinite(M.real)) or not np.all(np.isfinite(M.imag)):
        raise MalformedInputError("matrix has non-finite entries")


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def operator_norm(M) -> float:
    """Largest singular value of ``M``."""
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def is_hermitian(M: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    scale = max(1.0, operator_norm(M))
    return operator_norm(M - M.conj().T) <= tol.eq_eps * scale


def is_idempotent(M: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    scale = max(1.0, operator_norm(M)) ** 2
    return operator_norm(M @ M - M) <= tol.eq_eps * scale


def polar_decompose(
    M, require_invertible: bool = False, tol: Tolerance = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Factor a square matrix as ``M = U S`` with ``U`` unitary and ``S`` positive.

    ``S`` is the positive-semidefinite Hermitian square root of ``M* M``.
    With ``require_invertible`` a singular ``M`` (at the rank tolerance) is
    rejected instead of silently producing a defective unitary factor.
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise MalformedInputError("polar decomposition requires a square matrix")
    W, sig, Vh = np.linalg.svd(M)
    if require_invertible and (sig.size == 0 or sig[-1] <= tol.rank_eps * sig[0]):
        raise SingularMatrixError("matrix is singular at the rank tolerance")
    U = W @ Vh
    S = Vh.conj().T @ np.diag(sig.astype(complex)) @ Vh
    return U, S


def matrix_sqrt_positive(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Hermitian positive-semidefinite square root of a Hermitian PSD matrix."""
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise MalformedInputError("matrix square root requires a square matrix")
    scale = max(1.0, operator_norm(M))
    if operator_norm(M - M.conj().T) > tol.eq_eps * scale:
        raise MalformedInputError("matrix is not Hermitian at the comparison tolerance")
    # symmetrise before eigh to suppress drift
    H = (M + M.conj().T) / 2
    evals, Q = np.linalg.eigh(H)
    top = max(evals[-1], 0.0) if evals.size else 0.0
    if evals.size and evals[0] < -tol.rank_eps * max(top, 1.0):
        raise NotPositiveError(f"matrix has negative eigenvalue {evals[0]:.3e}")
    evals = np.clip(evals, 0.0, None)
    R = (Q * np.sqrt(evals)) @ Q.conj().T
    return (R + R.conj().T) / 2


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of C^n held as an orthonormal column frame."""

    frame: np.ndarray = field(repr=False)
    ambient: int

    def __post_init__(self) -> None:
        if self.frame.shape[0] != self.ambient:
            raise MalformedInputError("frame rows must equal the ambient dimension")

    @staticmethod
    def from_frame(frame: np.ndarray) -> "Subspace":
        """Wrap an already-orthonormal frame (trusted, no re-orthonormalisation)."""
        F = np.asarray(frame, dtype=complex)
        return Subspace(frame=F, ambient=F.shape[0])

    @staticmethod
    def from_spanning(
        vectors, ambient: int | None = None, tol: Tolerance = DEFAULT_TOL
    ) -> "Subspace":
        """Orthonormal subspace spanned by the columns of ``vectors``."""
        V = np.asarray(vectors, dtype=complex)
        if V.ndim == 1:
            V = V[:, None]
        check_finite(V)
        n = V.shape[0] if ambient is None else ambient
        if V.shape[0] != n:
            raise MalformedInputError("vector length does not match the ambient dimension")
        if V.shape[1] == 0:
            return Subspace(frame=np.zeros((n, 0), dtype=complex), ambient=n)
        W, sig, _ = np.linalg.svd(V, full_matrices=False)
        if sig.size == 0 or sig[0] <= tol.rank_eps:
            r = 0
        else:
            r = int(np.sum(sig > tol.rank_eps * sig[0]))
        return Subspace(frame=W[:, :r], ambient=n)

    @staticmethod
    def zero(n: int) -> "Subspace":
        return Subspace(frame=np.zeros((n, 0), dtype=complex), ambient=n)

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(frame=np.eye(n, dtype=complex), ambient=n)

    @staticmethod
    def span_of_basis_vector(n: int, i: int) -> "Subspace":
        e = np.zeros((n, 1), dtype=complex)
        e[i, 0] = 1.0
        return Subspace(frame=e, ambient=n)

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def projector(self) -> np.ndarray:
        """Orthogonal projection onto the subspace."""
        return self.frame @ self.frame.conj().T

    def contains(self, other: "Subspace", tol: Tolerance = DEFAULT_TOL) -> bool:
        if other.dim == 0:
            return True
        resid = other.frame - self.projector() @ other.frame
        return operator_norm(resid) <= tol.eq_eps

    def equals(self, other: "Subspace", tol: Tolerance = DEFAULT_TOL) -> bool:
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        return operator_norm(self.projector() - other.projector()) <= tol.eq_eps

    def join(self, other: "Subspace", tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        return Subspace.from_spanning(
            np.hstack([self.frame, other.frame]), ambient=self.ambient, tol=tol
        )

    def meet(self, other: "Subspace", tol: Tolerance = DEFAULT_TOL) -> "Subspace":
        """Intersection, via the null space of the stacked frame [F, -G]."""
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        stacked = np.hstack([self.frame, -other.frame])
        N = null_space(stacked, tol=tol)
        if N.shape[1] == 0:
            return Subspace.zero(self.ambient)
        return Subspace.from_spanning(
            self.frame @ N[: self.dim, :], ambient=self.ambient, tol=tol
        )

    def perp(self) -> "Subspace":
        """Orthogonal complement."""
        P = np.eye(self.ambient, dtype=complex) - self.projector()
        return Subspace.from_spanning(P, ambient=self.ambient)

    def canonical_key(self, digits: int = 6) -> tuple:
        """Deterministic sort key: dimension, then rounded frame entries.

        The frame is phase-normalised column by column (largest entry made
        real positive) so SVD sign ambiguity does not leak into orderings.
        """
        F = self.frame.copy()
        for j in range(F.shape[1]):
            k = int(np.argmax(np.abs(F[:, j])))
            piv = F[k, j]
            if abs(piv) > 0:
                F[:, j] *= np.conj(piv) / abs(piv)
        flat = [(round(z.real, digits), round(z.imag, digits)) for z in F.T.reshape(-1)]
        return (self.dim, tuple(flat))


def null_space(M: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the right null space at the rank tolerance.

    A constraint matrix at roundoff level (largest singular value below the
    rank tolerance at unit scale) imposes no constraints at all.
    """
    M = as_matrix(M)
    if M.shape[0] == 0 or M.size == 0:
        return np.eye(M.shape[1], dtype=complex)
    _, sig, Vh = np.linalg.svd(M)
    if sig.size == 0 or sig[0] <= tol.rank_eps:
        rank = 0
    else:
        rank = int(np.sum(sig > tol.rank_eps * sig[0]))
    return Vh[rank:, :].conj().T


def rank_and_range(M, tol: Tolerance = DEFAULT_TOL) -> tuple[int, Subspace]:
    """Rank at the tolerance plus an orthonormal frame for the column space.

    A matrix whose largest singular value sits at the rank tolerance itself is
    treated as zero; the toolkit works with unit-scale operators, and without
    the floor a roundoff-level matrix would count as full rank.
    """
    M = as_matrix(M)
    W, sig, _ = np.linalg.svd(M)
    if sig.size == 0 or sig[0] <= tol.rank_eps:
        rank = 0
    else:
        rank = int(np.sum(sig > tol.rank_eps * sig[0]))
    return rank, Subspace(frame=W[:, :rank], ambient=M.shape[0])


def principal_angle(V: Subspace, W: Subspace) -> float:
    """Smallest principal angle between two nonzero subspaces, in [0, pi/2]."""
    if V.ambient != W.ambient:
        raise MalformedInputError("subspaces live in different ambient spaces")
    if V.dim == 0 or W.dim == 0:
        raise DegenerateSubspaceError("principal angle needs nonzero subspaces")
    sig = np.linalg.svd(V.frame.conj().T @ W.frame, compute_uv=False)
    c = min(1.0, max(0.0, float(sig[0])))
    return math.acos(c)


def projection_onto_along(
    V: Subspace, W: Subspace, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """The idempotent with range ``V`` and kernel ``W``, given ``V + W = C^n``."""
    if V.ambient != W.ambient:
        raise MalformedInputError("subspaces live in different ambient spaces")
    n = V.ambient
    if V.dim + W.dim != n:
        raise NotComplementaryError(
            f"dimensions {V.dim} + {W.dim} do not sum to the ambient dimension {n}"
        )
    C = np.hstack([V.frame, W.frame])
    sig = np.linalg.svd(C, compute_uv=False)
    if sig.size and sig[-1] <= tol.rank_eps * sig[0]:
        raise NotComplementaryError("combined frame is rank deficient; subspaces overlap")
    D = np.zeros((n, n), dtype=complex)
    D[: V.dim, : V.dim] = np.eye(V.dim)
    return C @ D @ np.linalg.inv(C)
