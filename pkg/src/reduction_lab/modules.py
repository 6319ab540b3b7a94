"""Module structure of C^n over a concrete matrix algebra.

Irreducible decomposition, intertwiners, module complements, the
reduction-property decision with certificates, minimum-norm module
projections, projection-constant lower bounds, and inner-derivation solving.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraBasis,
    _orthonormal_frame,
    _unvec,
    _vec,
    commutant,
    radical,
)
from .errors import (
    InvalidWitnessError,
    MalformedDerivationError,
    MalformedInputError,
    NotComplementableError,
    NumericalDegeneracyError,
    StructurePreconditionError,
)
from .linalg import (
    Subspace,
    identity,
    null_space,
    operator_norm,
    rank_and_range,
)
from .tolerance import DEFAULT_TOL, Tolerance

__all__ = [
    "Representation",
    "IntertwinerSpace",
    "ReductionCertificate",
    "invariant",
    "restriction_to_invariant",
    "irreducible_decomposition",
    "intertwiners",
    "module_complement",
    "has_reduction_property",
    "min_norm_module_projection",
    "projection_constant_estimate",
    "sample_invariant_subspaces",
    "intertwiner_symmetry_check",
    "solve_inner_derivation",
    "build_hat_representation",
    "algebra_identity_element",
]


@dataclass(frozen=True)
class Representation:
    """A multiplicative linear map from an algebra into M_m, stored basiswise."""

    source: AlgebraBasis
    target_dim: int
    images: tuple = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source.dim:
            raise MalformedInputError("need exactly one image per basis element")
        for im in self.images:
            if im.shape != (self.target_dim, self.target_dim):
                raise MalformedInputError("image has wrong shape")

    @staticmethod
    def from_images(
        source: AlgebraBasis, images, tol: Tolerance = DEFAULT_TOL
    ) -> "Representation":
        rep = Representation(
            source=source,
            target_dim=np.asarray(images[0]).shape[0] if images else 0,
            images=[np.asarray(im, dtype=complex) for im in images],
        )
        rep.validate(tol)
        return rep

    @staticmethod
    def identity_rep(A: AlgebraBasis) -> "Representation":
        return Representation(source=A, target_dim=A.ambient, images=list(A.basis))

    def apply(self, M: np.ndarray) -> np.ndarray:
        """Image of an element of the source span."""
        coeff = self.source.coordinates(M)
        out = np.zeros((self.target_dim, self.target_dim), dtype=complex)
        for c, im in zip(coeff, self.images):
            out += c * im
        return out

    def validate(self, tol: Tolerance = DEFAULT_TOL) -> None:
        """Check multiplicativity on all basis pairs."""
        for i, bi in enumerate(self.source.basis):
            for j, bj in enumerate(self.source.basis):
                lhs = self.apply(bi @ bj)
                rhs = self.images[i] @ self.images[j]
                scale = max(1.0, operator_norm(rhs))
                if operator_norm(lhs - rhs) > tol.eq_eps * scale:
                    raise MalformedInputError("images are not multiplicative on the basis")

    def operator_norm_of_map(self) -> float:
        """max ||theta(b)|| over a Hilbert-Schmidt-normalised basis (crude scale)."""
        out = 0.0
        for b, im in zip(self.source.basis, self.images):
            nb = float(np.linalg.norm(b))
            if nb > 0:
                out = max(out, operator_norm(im) / nb)
        return out


@dataclass(frozen=True)
class IntertwinerSpace:
    """Hom_A(V, W) with a basis of dim(W) x dim(V) coefficient matrices."""

    source: Subspace
    target: Subspace
    basis: tuple = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "basis", tuple(self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)


def invariant(V: Subspace, A: AlgebraBasis, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether AV is contained in V at the comparison tolerance."""
    if V.ambient != A.ambient:
        raise MalformedInputError("subspace and algebra live in different spaces")
    if V.dim == 0:
        return True
    Q = identity(A.ambient) - V.projector()
    for b in A.basis:
        if operator_norm(Q @ b @ V.frame) > tol.eq_eps * max(1.0, operator_norm(b)):
            return False
    return True


def restriction_to_invariant(
    A: AlgebraBasis, V: Subspace, tol: Tolerance = DEFAULT_TOL
) -> AlgebraBasis:
    """The algebra of restricted actions on an invariant subspace, in frame coordinates."""
    F = V.frame
    restricted = [F.conj().T @ b @ F for b in A.basis]
    frame = _orthonormal_frame([_vec(r) for r in restricted], tol)
    mats = [_unvec(frame[:, j], V.dim) for j in range(frame.shape[1])]
    unital = AlgebraBasis(V.dim, mats, unital=False).contains_identity(tol) if mats else False
    return AlgebraBasis(ambient=V.dim, basis=mats, unital=unital)


def algebra_identity_element(
    A: AlgebraBasis, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray | None:
    """The internal identity of the algebra (two-sided unit of the span), if any."""
    if A.dim == 0:
        return None
    cols, rhs = [], []
    for i, bi in enumerate(A.basis):
        cols.append(
            np.concatenate(
                [np.concatenate([_vec(bi @ bj), _vec(bj @ bi)]) for bj in A.basis]
            )
        )
    for bj in A.basis:
        rhs.append(np.concatenate([_vec(bj), _vec(bj)]))
    M = np.column_stack(cols)
    b = np.concatenate(rhs)
    coeff, *_ = np.linalg.lstsq(M, b, rcond=None)
    resid = float(np.linalg.norm(M @ coeff - b))
    if resid > tol.eq_eps * max(1.0, float(np.linalg.norm(b))):
        return None
    return A.combine(coeff)


def _eig_clusters(evals: np.ndarray, rel_gap: float = 1e-6) -> list[list[int]]:
    order = np.lexsort((evals.imag, evals.real))
    scale = max(1.0, float(np.max(np.abs(evals)))) if evals.size else 1.0
    clusters: list[list[int]] = []
    for idx in order:
        if clusters and abs(evals[idx] - evals[clusters[-1][-1]]) <= rel_gap * scale:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])
    return clusters


def irreducible_decomposition(
    A: AlgebraBasis,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    max_retries: int = 40,
) -> list[tuple[Subspace, int]]:
    """Direct-sum decomposition of C^n into irreducible submodules with class labels.

    Splits along eigenspaces of random commutant elements and recurses;
    distinct irreducibles receive the same label exactly when a nonzero
    intertwiner exists between them.  The output order is deterministic.
    """
    n = A.ambient
    if radical(A, tol).dim != 0:
        raise StructurePreconditionError("decomposition needs a semisimple algebra")
    if A.dim == 0:
        raise StructurePreconditionError("the zero algebra acts degenerately")
    r, _ = rank_and_range(np.hstack(A.basis), tol)
    if r != n:
        raise StructurePreconditionError(
            "algebra acts degenerately; strip the annihilated complement first"
        )
    rng = np.random.default_rng(seed)

    def split(V: Subspace) -> list[Subspace]:
        R = restriction_to_invariant(A, V, tol)
        C = commutant(R, tol)
        if C.dim == 1:
            return [V]
        for _ in range(max_retries):
            z = C.combine(rng.standard_normal(C.dim))
            evals, vecs = np.linalg.eig(z)
            clusters = _eig_clusters(evals)
            if len(clusters) < 2:
                continue
            pieces = []
            ok = True
            for cl in clusters:
                local = Subspace.from_spanning(vecs[:, cl], ambient=V.dim, tol=tol)
                lifted = Subspace.from_spanning(
                    V.frame @ local.frame, ambient=n, tol=tol
                )
                if local.dim != len(cl) or not invariant(lifted, A, tol):
                    ok = False
                    break
                pieces.append(lifted)
            if ok and sum(p.dim for p in pieces) == V.dim:
                out = []
                for p in pieces:
                    out.extend(split(p))
                return out
        raise NumericalDegeneracyError("random commutant splitter failed repeatedly")

    pieces = split(Subspace.full(n))
    pieces.sort(key=lambda s: s.canonical_key())

    labels = [-1] * len(pieces)
    next_label = 0
    for i, p in enumerate(pieces):
        if labels[i] >= 0:
            continue
        labels[i] = next_label
        for j in range(i + 1, len(pieces)):
            if labels[j] < 0 and pieces[j].dim == p.dim:
                if intertwiners(p, pieces[j], A, tol).dim > 0:
                    labels[j] = next_label
        next_label += 1
    return list(zip(pieces, labels))


def intertwiners(
    V: Subspace, W: Subspace, A: AlgebraBasis, tol: Tolerance = DEFAULT_TOL
) -> IntertwinerSpace:
    """Basis of all maps T with T(a|_V) = (a|_W)T, in frame coordinates."""
    for S in (V, W):
        if not invariant(S, A, tol):
            raise InvalidWitnessError("intertwiners need invariant subspaces")
    if V.dim == 0 or W.dim == 0:
        return IntertwinerSpace(source=V, target=W, basis=[])
    rows = []
    for b in A.basis:
        bV = V.frame.conj().T @ b @ V.frame
        bW = W.frame.conj().T @ b @ W.frame
        rows.append(np.kron(np.eye(W.dim), bV.T) - np.kron(bW, np.eye(V.dim)))
    N = null_space(np.vstack(rows), tol=tol)
    basis = [N[:, j].reshape(W.dim, V.dim) for j in range(N.shape[1])]
    return IntertwinerSpace(source=V, target=W, basis=basis)


def _module_projection_system(V: Subspace, A: AlgebraBasis):
    """Constraint blocks for projections in the commutant with range V.

    Returns (H, E, rhs): H x = 0 are the homogeneous constraints (commutation
    and range containment), E x = rhs pins the projection to fix V pointwise.
    """
    n = A.ambient
    I = identity(n)
    blocks = [np.kron(I, b.T) - np.kron(b, I) for b in A.basis]
    Q = I - V.projector()
    blocks.append(np.kron(Q, I))
    H = np.vstack(blocks) if blocks else np.zeros((0, n * n), dtype=complex)
    E = np.kron(I, V.frame.T)
    rhs = _vec(V.frame)
    return H, E, rhs


def _feasible_module_projection(
    V: Subspace, A: AlgebraBasis, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray | None:
    """A module projection onto V, or None when the affine system is infeasible."""
    n = A.ambient
    if V.dim == 0:
        return np.zeros((n, n), dtype=complex)
    if V.dim == n:
        return identity(n)
    H, E, rhs = _module_projection_system(V, A)
    M = np.vstack([H, E])
    b = np.concatenate([np.zeros(H.shape[0], dtype=complex), rhs])
    x, *_ = np.linalg.lstsq(M, b, rcond=None)
    resid = float(np.linalg.norm(M @ x - b))
    if resid > tol.eq_eps * max(1.0, float(np.linalg.norm(b))):
        return None
    return _unvec(x, n)


def module_complement(
    V: Subspace, A: AlgebraBasis, tol: Tolerance = DEFAULT_TOL
) -> Subspace | None:
    """An invariant complement of V, or None when no module projection exists."""
    if not invariant(V, A, tol):
        raise InvalidWitnessError("module complements need an invariant subspace")
    p = _feasible_module_projection(V, A, tol)
    if p is None:
        return None
    _, ker = rank_and_range(identity(A.ambient) - p, tol)
    return ker


@dataclass(frozen=True)
class ReductionCertificate:
    """Outcome of the reduction-property decision.

    For a yes the certificate is a Wedderburn block profile; for a no it is a
    nonzero radical element together with an invariant subspace that admits no
    module complement.
    """

    verdict: bool
    blocks: tuple | None = None
    degenerate_dim: int | None = None
    radical_element: np.ndarray | None = field(default=None, repr=False)
    witness: Subspace | None = None


def _block_profile(
    A: AlgebraBasis, seed: int, tol: Tolerance
) -> tuple[tuple, int]:
    """Wedderburn block profile (k_i, n_i) of a semisimple algebra, plus the
    dimension of the summand annihilated by the algebra."""
    n = A.ambient
    if A.dim == 0:
        return tuple(), n
    e = algebra_identity_element(A, tol)
    if e is None:
        raise NumericalDegeneracyError("semisimple algebra has no computable unit")
    rank_e, range_e = rank_and_range(e, tol)
    degenerate = n - rank_e
    if rank_e == 0:
        return tuple(), n
    B = restriction_to_invariant(A, range_e, tol)
    pieces = irreducible_decomposition(B, seed=seed, tol=tol)
    counts: dict[int, list[int]] = {}
    for piece, label in pieces:
        counts.setdefault(label, []).append(piece.dim)
    blocks = sorted(((dims[0], len(dims)) for dims in counts.values()), reverse=True)
    return tuple(blocks), degenerate


def has_reduction_property(
    A: AlgebraBasis, seed: int = 0, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, ReductionCertificate]:
    """Decide the reduction property algebraically: it holds iff the radical is zero.

    The invariant-subspace family of a matrix algebra is generally a
    continuum, so the decision is made through semisimplicity; sampled
    complement searches cross-check it in the test suite.
    """
    rad = radical(A, tol)
    if rad.dim == 0:
        blocks, degenerate = _block_profile(A, seed, tol)
        return True, ReductionCertificate(
            verdict=True, blocks=blocks, degenerate_dim=degenerate
        )
    r = rad.basis[0]
    _, witness = rank_and_range(np.hstack(rad.basis), tol)
    return False, ReductionCertificate(verdict=False, radical_element=r, witness=witness)


def _spectral_norm_minimiser(
    P0: np.ndarray,
    directions: list[np.ndarray],
    rng: np.random.Generator,
    restarts: int = 20,
    iters: int = 500,
    rel_stop: float = 1e-8,
) -> np.ndarray:
    """Minimise ||P0 + sum_j c_j D_j|| over complex coefficients.

    Projected-subgradient descent on the spectral norm with Polyak step
    sizing; the problem is convex, so random restarts only hedge step-size
    stalls.  The global lower bound 1 for nonzero idempotents feeds the
    Polyak target.
    """
    k = len(directions)
    if k == 0:
        return P0

    def value_and_grad(y: np.ndarray) -> tuple[float, np.ndarray]:
        M = P0.copy()
        for j, D in enumerate(directions):
            M = M + (y[2 * j] + 1j * y[2 * j + 1]) * D
        U, s, Vh = np.linalg.svd(M)
        u, v = U[:, 0], Vh[0].conj()
        g = np.empty(2 * k)
        for j, D in enumerate(directions):
            w = u.conj() @ (D @ v)
            g[2 * j] = w.real
            g[2 * j + 1] = -w.imag
        return float(s[0]), g

    f_best, y_best = value_and_grad(np.zeros(2 * k))[0], np.zeros(2 * k)
    for trial in range(restarts + 1):
        y = (
            np.zeros(2 * k)
            if trial == 0
            else rng.standard_normal(2 * k) * max(1.0, f_best)
        )
        gamma = 0.25
        stall = 0
        f_trial_best = np.inf
        for _ in range(iters):
            f, g = value_and_grad(y)
            if f < f_best * (1 - rel_stop):
                f_best, y_best = f, y.copy()
            if f < f_trial_best * (1 - 1e-10):
                f_trial_best, stall = f, 0
            else:
                stall += 1
                if stall >= 25:
                    gamma *= 0.5
                    stall = 0
                    if gamma < 1e-12:
                        break
            target = max(1.0 - 1e-12, f_best * (1 - gamma))
            gnorm2 = float(g @ g)
            if gnorm2 < 1e-24 or f <= target:
                gamma *= 0.5
                if gamma < 1e-12:
                    break
                continue
            y = y - ((f - target) / gnorm2) * g
    M = P0.copy()
    for j, D in enumerate(directions):
        M = M + (y_best[2 * j] + 1j * y_best[2 * j + 1]) * D
    return M


def min_norm_module_projection(
    V: Subspace,
    A: AlgebraBasis,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """Module projection onto V of (approximately) minimal operator norm.

    Minimises over the affine family p0 + d with d in the commutant, range(d)
    inside V and d vanishing on V; the result is re-verified to be an
    idempotent commuting with the algebra, with range V.
    """
    if not invariant(V, A, tol):
        raise InvalidWitnessError("need an invariant subspace")
    p0 = _feasible_module_projection(V, A, tol)
    if p0 is None:
        raise NotComplementableError("subspace admits no module projection")
    if V.dim in (0, A.ambient):
        return p0
    H, E, _ = _module_projection_system(V, A)
    N = null_space(np.vstack([H, E]), tol=tol)
    directions = [_unvec(N[:, j], A.ambient) for j in range(N.shape[1])]
    rng = np.random.default_rng(seed)
    p = _spectral_norm_minimiser(p0, directions, rng)

    scale = max(1.0, operator_norm(p))
    if operator_norm(p @ p - p) > 1e-6 * scale**2:
        raise NumericalDegeneracyError("minimiser drifted off the idempotent manifold")
    for b in A.basis:
        if operator_norm(p @ b - b @ p) > 1e-6 * scale * max(1.0, operator_norm(b)):
            raise NumericalDegeneracyError("minimiser drifted out of the commutant")
    return p


def _graph_subspace(
    Vi: Subspace, Vj: Subspace, T: np.ndarray, lam: complex, tol: Tolerance
) -> Subspace:
    cols = Vi.frame + lam * (Vj.frame @ T)
    return Subspace.from_spanning(cols, ambient=Vi.ambient, tol=tol)


def projection_constant_estimate(
    A: AlgebraBasis,
    samples: int = 24,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    amplification: int = 1,
) -> tuple[float, list]:
    """Certified lower bound for the projection constant, by sampling submodules.

    Samples irreducible pieces, isotypic sums, and graph subspaces built from
    intertwiners between isomorphic irreducible blocks, and maximises the
    minimum projection norm.  The zero submodule is excluded; the reported
    number is a lower bound, never claimed as the supremum.

    With ``amplification=2`` the doubled module is sampled as well, covering
    graph submodules between the two copies; levels beyond 2 are out of scope.
    """
    if amplification not in (1, 2):
        raise MalformedInputError("only amplification levels 1 and 2 are supported")
    if amplification == 2:
        doubled = AlgebraBasis(
            ambient=2 * A.ambient,
            basis=[np.kron(b, np.eye(2)) for b in A.basis],
            unital=A.unital,
        )
        base, wit1 = projection_constant_estimate(A, samples, seed, tol, amplification=1)
        high, wit2 = projection_constant_estimate(doubled, samples, seed, tol)
        witnesses = sorted(wit1 + wit2, key=lambda t: -t[1])
        return max(base, high), witnesses
    ok, cert = has_reduction_property(A, seed=seed, tol=tol)
    if not ok:
        raise StructurePreconditionError("projection constants need the reduction property")
    n = A.ambient
    rng = np.random.default_rng(seed)

    candidates: list[Subspace] = []

    def add(s: Subspace) -> None:
        if s.dim == 0:
            return
        if not invariant(s, A, tol):
            return
        if any(s.equals(t, tol) for t in candidates):
            return
        candidates.append(s)

    if A.dim == 0 or cert.degenerate_dim == n:
        add(Subspace.full(n))
    else:
        e = algebra_identity_element(A, tol)
        _, range_e = rank_and_range(e, tol)
        B = restriction_to_invariant(A, range_e, tol)
        pieces = [
            (Subspace.from_spanning(range_e.frame @ p.frame, ambient=n, tol=tol), lab)
            for p, lab in irreducible_decomposition(B, seed=seed, tol=tol)
        ]
        for p, _ in pieces:
            add(p)
        by_label: dict[int, list[Subspace]] = {}
        for p, lab in pieces:
            by_label.setdefault(lab, []).append(p)
        for group in by_label.values():
            if len(group) > 1:
                iso = group[0]
                for q in group[1:]:
                    iso = iso.join(q, tol)
                add(iso)
        # graph subspaces between isomorphic pieces
        for group in by_label.values():
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    tw = intertwiners(group[i], group[j], A, tol)
                    if tw.dim == 0:
                        continue
                    T = tw.basis[0]
                    T = T / max(operator_norm(T), 1e-30)
                    for lam in (1.0, *(rng.uniform(0.3, 3.0, size=3))):
                        add(_graph_subspace(group[i], group[j], T, lam, tol))
        if cert.degenerate_dim:
            # the annihilated summand is the kernel of the internal unit,
            # which is skew against its range in general
            _, ker_e = rank_and_range(identity(n) - e, tol)
            add(ker_e)
        # random unions of pieces (bounded number of draws; duplicates are dropped)
        if len(pieces) > 1:
            for _ in range(2 * samples):
                if len(candidates) >= samples:
                    break
                mask = rng.integers(0, 2, size=len(pieces))
                if not mask.any():
                    continue
                s = Subspace.zero(n)
                for flag, (p, _) in zip(mask, pieces):
                    if flag:
                        s = s.join(p, tol)
                add(s)
        add(Subspace.full(n))

    candidates = candidates[: max(samples, 1)]
    witnesses = []
    best = 0.0
    for s in candidates:
        p = min_norm_module_projection(s, A, seed=seed, tol=tol)
        nrm = operator_norm(p)
        witnesses.append((s, nrm))
        best = max(best, nrm)
    witnesses.sort(key=lambda t: -t[1])
    return best, witnesses


def sample_invariant_subspaces(
    A: AlgebraBasis,
    count: int = 24,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    include_full: bool = True,
) -> list[Subspace]:
    """Sample invariant subspaces of an arbitrary matrix algebra.

    Combines cyclic submodules, spectral subspaces of random commutant
    elements, the annihilator, radical ranges, and meets/joins of those.
    Deterministic given (A, seed).  Works for non-semisimple algebras.
    """
    n = A.ambient
    rng = np.random.default_rng(seed)
    out: list[Subspace] = []

    def add(s: Subspace) -> None:
        if s.dim == 0 or (not include_full and s.dim == n):
            return
        if not invariant(s, A, tol):
            return
        if any(s.equals(t, tol) for t in out):
            return
        out.append(s)

    def cyclic(xi: np.ndarray) -> Subspace:
        S = Subspace.from_spanning(xi[:, None], ambient=n, tol=tol)
        while True:
            cols = [S.frame]
            for b in A.basis:
                cols.append(b @ S.frame)
            S2 = Subspace.from_spanning(np.hstack(cols), ambient=n, tol=tol)
            if S2.dim == S.dim:
                return S2
            S = S2

    for i in range(n):
        xi = np.zeros(n, dtype=complex)
        xi[i] = 1.0
        add(cyclic(xi))
    for _ in range(max(count // 2, 4)):
        xi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        add(cyclic(xi))

    if A.dim:
        add(rank_and_range(np.hstack(A.basis), tol)[1])
        ann = null_space(np.vstack(A.basis), tol=tol)
        add(Subspace.from_spanning(ann, ambient=n, tol=tol))
        rad = radical(A, tol)
        if rad.dim:
            add(rank_and_range(np.hstack(rad.basis), tol)[1])
        C = commutant(A, tol)
        for _ in range(4):
            z = C.combine(rng.standard_normal(C.dim))
            evals, vecs = np.linalg.eig(z)
            for cl in _eig_clusters(evals):
                add(Subspace.from_spanning(vecs[:, cl], ambient=n, tol=tol))

    snapshot = list(out)
    for i in range(len(snapshot)):
        for j in range(i + 1, len(snapshot)):
            add(snapshot[i].meet(snapshot[j], tol))
            add(snapshot[i].join(snapshot[j], tol))
            if len(out) >= 4 * count:
                break

    out.sort(key=lambda s: s.canonical_key())
    return out[:count]


def intertwiner_symmetry_check(
    A: AlgebraBasis, samples: int = 16, seed: int = 0, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Whether nonzero-intertwiner existence is symmetric on sampled invariant pairs."""
    subs = sample_invariant_subspaces(A, count=samples, seed=seed, tol=tol)
    for V in subs:
        for W in subs:
            if V is W:
                continue
            fwd = intertwiners(V, W, A, tol).dim
            bwd = intertwiners(W, V, A, tol).dim
            if (fwd > 0) != (bwd > 0):
                return False
    return True


def _check_derivation_identity(
    theta: Representation, delta: list, tol: Tolerance
) -> None:
    A = theta.source
    for i, bi in enumerate(A.basis):
        for j, bj in enumerate(A.basis):
            coeff = A.coordinates(bi @ bj)
            lhs = np.zeros((theta.target_dim, theta.target_dim), dtype=complex)
            for c, dk in zip(coeff, delta):
                lhs += c * dk
            rhs = theta.images[i] @ delta[j] + delta[i] @ theta.images[j]
            scale = max(1.0, operator_norm(lhs), operator_norm(rhs))
            if operator_norm(lhs - rhs) > tol.eq_eps * scale:
                raise MalformedDerivationError("derivation identity fails on a basis pair")


def solve_inner_derivation(
    theta: Representation, delta, tol: Tolerance = DEFAULT_TOL
) -> np.ndarray | None:
    """Solve delta(a) = T theta(a) - theta(a) T, or report the derivation outer.

    ``delta`` is given by its images on the basis of the source algebra.  The
    linear system is solved by least squares and accepted only when the
    residual is below the comparison tolerance; a genuinely inconsistent
    system returns None.
    """
    delta = [np.asarray(d, dtype=complex) for d in delta]
    if len(delta) != theta.source.dim:
        raise MalformedInputError("need one derivation image per basis element")
    _check_derivation_identity(theta, delta, tol)
    m = theta.target_dim
    I = np.eye(m, dtype=complex)
    rows, rhs = [], []
    for im, d in zip(theta.images, delta):
        rows.append(np.kron(I, im.T) - np.kron(im, I))
        rhs.append(_vec(d))
    M = np.vstack(rows)
    b = np.concatenate(rhs)
    x, *_ = np.linalg.lstsq(M, b, rcond=None)
    resid = float(np.linalg.norm(M @ x - b))
    if resid > tol.eq_eps * max(1.0, float(np.linalg.norm(b))):
        return None
    return _unvec(x, m)


def build_hat_representation(
    theta: Representation, delta, tol: Tolerance = DEFAULT_TOL
) -> Representation:
    """The doubled representation a -> [[theta(a), delta(a)], [0, theta(a)]].

    The copy of the target space embedded as the top summand has a module
    complement exactly when the derivation is inner.
    """
    delta = [np.asarray(d, dtype=complex) for d in delta]
    if len(delta) != theta.source.dim:
        raise MalformedInputError("need one derivation image per basis element")
    _check_derivation_identity(theta, delta, tol)
    m = theta.target_dim
    images = []
    for im, d in zip(theta.images, delta):
        top = np.hstack([im, d])
        bottom = np.hstack([np.zeros((m, m), dtype=complex), im])
        images.append(np.vstack([top, bottom]))
    rep = Representation(source=theta.source, target_dim=2 * m, images=images)
    rep.validate(tol)
    return rep
