"""Structure of a concrete subalgebra A of M_n.

Span closure from generators, commutants, the Jacobson radical via the trace
bilinear form, centres and minimal central idempotents, and the alg/lat pair
of maps between subspace lattices and algebras.

Bases are re-orthonormalised in vectorised form (C^(n^2)), so span-equality
tests reduce to frame comparison.  Row-major vectorisation is used
throughout: vec(AXB) = (A kron B^T) vec(X).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    MalformedInputError,
    NumericalDegeneracyError,
    StructurePreconditionError,
)
from .linalg import (
    Subspace,
    as_matrix,
    identity,
    null_space,
    operator_norm,
    rank_and_range,
)
from .tolerance import DEFAULT_TOL, Tolerance

__all__ = [
    "AlgebraBasis",
    "SubspaceLattice",
    "generate_algebra",
    "commutant",
    "bicommutant",
    "radical",
    "center_and_minimal_central_idempotents",
    "alg_of_lattice",
    "is_reflexive",
    "span_equal",
]


def _vec(M: np.ndarray) -> np.ndarray:
    return M.reshape(-1)


def _unvec(v: np.ndarray, n: int) -> np.ndarray:
    return v.reshape(n, n)


def _orthonormal_frame(vectors: list[np.ndarray], tol: Tolerance) -> np.ndarray:
    """Orthonormal basis for the span of the given vectors, as columns."""
    if not vectors:
        return np.zeros((0, 0), dtype=complex)
    stacked = np.column_stack(vectors).astype(complex)
    W, sig, _ = np.linalg.svd(stacked, full_matrices=False)
    if sig.size == 0 or sig[0] <= tol.rank_eps:
        return stacked[:, :0]
    r = int(np.sum(sig > tol.rank_eps * sig[0]))
    return W[:, :r]


@dataclass(frozen=True)
class AlgebraBasis:
    """A linearly independent spanning set for a multiplicatively closed span."""

    ambient: int
    basis: tuple = field(repr=False)
    unital: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(self.basis))
        for b in self.basis:
            if b.shape != (self.ambient, self.ambient):
                raise MalformedInputError("basis elements must be square of the ambient size")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def frame(self, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
        """Orthonormal frame of the vectorised span, shape (n^2, dim)."""
        if not self.basis:
            return np.zeros((self.ambient**2, 0), dtype=complex)
        return _orthonormal_frame([_vec(b) for b in self.basis], tol)

    def in_span(self, M: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
        F = self.frame(tol)
        v = _vec(np.asarray(M, dtype=complex))
        resid = v - F @ (F.conj().T @ v)
        return float(np.linalg.norm(resid)) <= tol.eq_eps * max(1.0, float(np.linalg.norm(v)))

    def coordinates(self, M: np.ndarray) -> np.ndarray:
        """Coefficients of ``M`` in this basis (least squares; exact on the span)."""
        if not self.basis:
            raise MalformedInputError("cannot take coordinates in an empty basis")
        B = np.column_stack([_vec(b) for b in self.basis])
        coeff, *_ = np.linalg.lstsq(B, _vec(np.asarray(M, dtype=complex)), rcond=None)
        return coeff

    def combine(self, coeff: np.ndarray) -> np.ndarray:
        out = np.zeros((self.ambient, self.ambient), dtype=complex)
        for c, b in zip(coeff, self.basis):
            out += c * b
        return out

    def contains_identity(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.in_span(identity(self.ambient), tol)

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        """Check linear independence and multiplicative closure of the span."""
        if not self.basis:
            return
        stacked = np.column_stack([_vec(b) for b in self.basis])
        sig = np.linalg.svd(stacked, compute_uv=False)
        if sig[-1] <= tol.rank_eps * sig[0]:
            raise MalformedInputError("basis is linearly dependent at the rank tolerance")
        for bi in self.basis:
            for bj in self.basis:
                if not self.in_span(bi @ bj, tol):
                    raise MalformedInputError("span is not closed under multiplication")
        if self.unital and not self.contains_identity(tol):
            raise MalformedInputError("unital flag set but identity is not in the span")


def span_equal(A: AlgebraBasis, B: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> bool:
    if A.ambient != B.ambient or A.dim != B.dim:
        return False
    FA, FB = A.frame(tol), B.frame(tol)
    return operator_norm(FA @ FA.conj().T - FB @ FB.conj().T) <= tol.eq_eps


def _basis_from_frame(F: np.ndarray, n: int, unital: bool) -> AlgebraBasis:
    mats = [_unvec(F[:, j], n) for j in range(F.shape[1])]
    return AlgebraBasis(ambient=n, basis=mats, unital=unital)


def generate_algebra(
    generators,
    unital: bool = False,
    ambient: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> AlgebraBasis:
    """Basis of the smallest subalgebra containing the generators.

    Iterates degree-doubling products until the span dimension stabilises;
    the span dimension is capped by n^2 so the loop always terminates.  An
    empty generator list is allowed only for unital algebras, in which case
    ``ambient`` supplies the dimension.
    """
    mats = [as_matrix(g) for g in generators]
    if not mats and not unital:
        raise MalformedInputError("a non-unital algebra needs at least one generator")
    sizes = {m.shape for m in mats}
    if len(sizes) > 1:
        raise MalformedInputError("generators have mismatched shapes")
    for m in mats:
        if m.shape[0] != m.shape[1]:
            raise MalformedInputError("generators must be square")
    n = mats[0].shape[0] if mats else ambient
    if n is None:
        raise MalformedInputError("cannot infer the ambient dimension from an empty list")
    if ambient is not None and n != ambient:
        raise MalformedInputError("generators do not match the requested ambient dimension")
    if unital:
        mats = [identity(n)] + mats

    F = _orthonormal_frame([_vec(m) for m in mats], tol)
    while True:
        current = [_unvec(F[:, j], n) for j in range(F.shape[1])]
        new_vecs = []
        for a in current:
            for b in current:
                v = _vec(a @ b)
                resid = v - F @ (F.conj().T @ v)
                if np.linalg.norm(resid) > tol.rank_eps * max(1.0, np.linalg.norm(v)):
                    new_vecs.append(v)
        if not new_vecs:
            break
        F = _orthonormal_frame([F[:, j] for j in range(F.shape[1])] + new_vecs, tol)
        if F.shape[1] >= n * n:
            break

    alg = _basis_from_frame(F, n, unital=False)
    is_unital = unital or alg.contains_identity(tol)
    return AlgebraBasis(ambient=n, basis=alg.basis, unital=is_unital)


def commutant(A: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """Basis of {T : Tb = bT for all b in A}, via a stacked Sylvester system."""
    n = A.ambient
    if A.dim == 0:
        return _basis_from_frame(np.eye(n * n, dtype=complex), n, unital=True)
    I = identity(n)
    rows = [np.kron(I, b.T) - np.kron(b, I) for b in A.basis]
    N = null_space(np.vstack(rows), tol=tol)
    return _basis_from_frame(N, n, unital=True)


def bicommutant(A: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    return commutant(commutant(A, tol), tol)


def radical(A: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """Basis of the Jacobson radical of a concrete matrix algebra.

    Over a characteristic-zero field the radical of a matrix algebra is the
    kernel of the trace bilinear form x, y -> tr(xy) restricted to the span.
    """
    if A.dim == 0:
        return AlgebraBasis(ambient=A.ambient, basis=[], unital=False)
    d = A.dim
    G = np.zeros((d, d), dtype=complex)
    for i, bi in enumerate(A.basis):
        for j, bj in enumerate(A.basis):
            G[i, j] = np.trace(bi @ bj)
    K = null_space(G, tol=tol)
    if K.shape[1] == 0:
        return AlgebraBasis(ambient=A.ambient, basis=[], unital=False)
    rad_vecs = [_vec(A.combine(K[:, j])) for j in range(K.shape[1])]
    F = _orthonormal_frame(rad_vecs, tol)
    return _basis_from_frame(F, A.ambient, unital=False)


def center_and_minimal_central_idempotents(
    A: AlgebraBasis,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    max_retries: int = 40,
) -> tuple[AlgebraBasis, list[np.ndarray]]:
    """Centre of a unital semisimple algebra and its minimal central idempotents.

    The commutative semisimple centre is split by simultaneous diagonalisation
    of a random centre element; a fresh random element is drawn whenever
    eigenvalue clusters collide (relative gap below 1e-6).
    """
    n = A.ambient
    if not A.contains_identity(tol):
        raise StructurePreconditionError("central idempotents need a unital algebra")
    if radical(A, tol).dim != 0:
        raise StructurePreconditionError("central idempotents need a semisimple algebra")

    # centre = null space of the commutator map restricted to the span of A
    cols = []
    for bi in A.basis:
        cols.append(np.concatenate([_vec(bi @ bj - bj @ bi) for bj in A.basis]))
    C = np.column_stack(cols)
    K = null_space(C, tol=tol)
    ctr_vecs = [_vec(A.combine(K[:, j])) for j in range(K.shape[1])]
    F = _orthonormal_frame(ctr_vecs, tol)
    center = _basis_from_frame(F, n, unital=True)
    m = center.dim

    rng = np.random.default_rng(seed)
    gap = 1e-6
    for _ in range(max_retries):
        coeff = rng.standard_normal(m)
        z = center.combine(coeff)
        evals, vecs = np.linalg.eig(z)
        order = np.lexsort((evals.imag, evals.real))
        evals, vecs = evals[order], vecs[:, order]
        scale = max(1.0, float(np.max(np.abs(evals))))
        clusters: list[list[int]] = [[0]]
        for i in range(1, n):
            if abs(evals[i] - evals[clusters[-1][-1]]) <= gap * scale:
                clusters[-1].append(i)
            else:
                clusters.append([i])
        if len(clusters) != m:
            continue
        try:
            vinv = np.linalg.inv(vecs)
        except np.linalg.LinAlgError:
            continue
        idems = []
        for cl in clusters:
            d = np.zeros(n)
            d[cl] = 1.0
            idems.append(vecs @ np.diag(d.astype(complex)) @ vinv)
        if _verify_central_idempotents(idems, center, tol):
            idems.sort(key=lambda p: rank_and_range(p, tol)[1].canonical_key())
            return center, idems
    raise NumericalDegeneracyError(
        "could not split the centre into minimal idempotents after max retries"
    )


def _verify_central_idempotents(
    idems: list[np.ndarray], center: AlgebraBasis, tol: Tolerance
) -> bool:
    n = center.ambient
    total = np.zeros((n, n), dtype=complex)
    # loosened by the conditioning of the eigenbasis; final pipeline checks re-verify
    eps = 1e-6
    for i, p in enumerate(idems):
        if operator_norm(p @ p - p) > eps * max(1.0, operator_norm(p)) ** 2:
            return False
        if not center.in_span(p, Tolerance(tol.rank_eps, eps)):
            return False
        for q in idems[i + 1 :]:
            if operator_norm(p @ q) > eps * max(1.0, operator_norm(p) * operator_norm(q)):
                return False
        total += p
    return operator_norm(total - identity(n)) <= eps


@dataclass(frozen=True)
class SubspaceLattice:
    """A finite family of subspaces closed under meet and join, with 0 and C^n."""

    ambient: int
    members: tuple = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", tuple(self.members))

    @staticmethod
    def generate(
        ambient: int,
        subspaces,
        tol: Tolerance = DEFAULT_TOL,
        max_size: int = 4096,
    ) -> "SubspaceLattice":
        """Close the given subspaces under meet and join, adding 0 and C^n."""
        members: list[Subspace] = [Subspace.zero(ambient), Subspace.full(ambient)]

        def seen(s: Subspace) -> bool:
            return any(s.equals(t, tol) for t in members)

        queue = list(subspaces)
        for s in queue:
            if not seen(s):
                members.append(s)
        changed = True
        while changed:
            changed = False
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    for cand in (
                        members[i].meet(members[j], tol),
                        members[i].join(members[j], tol),
                    ):
                        if not seen(cand):
                            members.append(cand)
                            changed = True
                            if len(members) > max_size:
                                raise MalformedInputError("lattice closure exceeded the cap")
        members.sort(key=lambda s: s.canonical_key())
        return SubspaceLattice(ambient=ambient, members=members)

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        if not any(s.dim == 0 for s in self.members):
            raise MalformedInputError("lattice must contain the zero subspace")
        if not any(s.dim == self.ambient for s in self.members):
            raise MalformedInputError("lattice must contain the full space")
        for s in self.members:
            for t in self.members:
                for cand in (s.meet(t, tol), s.join(t, tol)):
                    if not any(cand.equals(u, tol) for u in self.members):
                        raise MalformedInputError("lattice is not closed under meet/join")


def alg_of_lattice(L: SubspaceLattice, tol: Tolerance = DEFAULT_TOL) -> AlgebraBasis:
    """Basis of {a : aV subseteq V for all V in L}; always a unital algebra."""
    n = L.ambient
    I = identity(n)
    rows = []
    for V in L.members:
        if V.dim in (0, n):
            continue
        P = V.projector()
        rows.append(np.kron(I - P, P.T))
    if not rows:
        return _basis_from_frame(np.eye(n * n, dtype=complex), n, unital=True)
    N = null_space(np.vstack(rows), tol=tol)
    return _basis_from_frame(N, n, unital=True)


def is_reflexive(
    A: AlgebraBasis, witnesses: SubspaceLattice, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Whether A equals the algebra of its (finite) witness lattice.

    Certifies reflexivity only relative to the supplied invariant family; the
    caller is responsible for sampling a representative lattice.
    """
    from .errors import InvalidWitnessError

    for V in witnesses.members:
        if V.dim == 0:
            continue
        for b in A.basis:
            resid = (identity(A.ambient) - V.projector()) @ b @ V.frame
            if operator_norm(resid) > tol.eq_eps * max(1.0, operator_norm(b)):
                raise InvalidWitnessError("witness subspace is not invariant under the algebra")
    return span_equal(A, alg_of_lattice(witnesses, tol), tol)
