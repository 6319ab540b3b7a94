import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reduction_lab.algebra import (
    AlgebraBasis,
    SubspaceLattice,
    alg_of_lattice,
    bicommutant,
    center_and_minimal_central_idempotents,
    commutant,
    generate_algebra,
    is_reflexive,
    radical,
    span_equal,
)
from reduction_lab.errors import (
    InvalidWitnessError,
    MalformedInputError,
    StructurePreconditionError,
)
from reduction_lab.linalg import Subspace, operator_norm
from reduction_lab.sampling import random_semisimple_algebra

from conftest import unit


def word_closure_dimension(generators, unital, max_len=4):
    """Oracle: dimension of the span of all words of length <= max_len."""
    n = generators[0].shape[0]
    words = [np.eye(n, dtype=complex)] if unital else []
    current = [np.eye(n, dtype=complex)]
    for _ in range(max_len):
        nxt = []
        for w in current:
            for g in generators:
                nxt.append(w @ g)
        words.extend(nxt)
        current = nxt
    stacked = np.column_stack([w.reshape(-1) for w in words])
    return int(np.linalg.matrix_rank(stacked, tol=1e-9))


class TestGenerateAlgebra:
    def test_identity_generator(self):
        A = generate_algebra([np.eye(2)], unital=True)
        assert A.dim == 1 and A.unital

    def test_nilpotent_generator(self):
        A = generate_algebra([unit(2, 0, 1)])
        assert A.dim == 1 and not A.unital

    def test_full_matrix_algebra_against_word_oracle(self):
        gens = [unit(2, 0, 1), unit(2, 1, 0)]
        A = generate_algebra(gens)
        assert A.dim == 4
        assert A.dim == word_closure_dimension(gens, unital=False)

    def test_dimension_mismatch(self):
        with pytest.raises(MalformedInputError):
            generate_algebra([np.eye(2), np.eye(3)])

    def test_empty_needs_unital(self):
        with pytest.raises(MalformedInputError):
            generate_algebra([])

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_idempotent_regeneration(self, seed):
        gen = np.random.default_rng(seed)
        n = int(gen.integers(2, 5))
        gens = [gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
                for _ in range(int(gen.integers(1, 3)))]
        A = generate_algebra(gens)
        B = generate_algebra(A.basis)
        assert span_equal(A, B)
        A.validate()


class TestCommutant:
    def test_full_matrix_algebra_gives_scalars(self):
        A = generate_algebra([unit(2, 0, 1), unit(2, 1, 0)])
        C = commutant(A)
        assert C.dim == 1
        assert C.in_span(np.eye(2))

    def test_scalars_give_everything(self):
        A = generate_algebra([np.eye(3)], unital=True)
        assert commutant(A).dim == 9

    def test_diagonal_is_self_commuting(self):
        # hand solve: T commuting with e11 and e22 is diagonal
        A = generate_algebra([np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex)])
        C = commutant(A)
        assert C.dim == 2
        assert span_equal(A, C)

    def test_tower_properties(self, rng):
        for _ in range(10):
            A, _, _ = random_semisimple_algebra(rng, max_dim=5, allow_degenerate=True)
            Ac = commutant(A)
            Acc = bicommutant(A)
            # A is contained in its bicommutant
            for b in A.basis:
                assert Acc.in_span(b)
            # triple commutant equals the commutant
            assert span_equal(commutant(Acc), Ac)

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_commutant_of_doubled_module_quadruples(self, seed):
        # the commutant of a (x) 1_2 consists of 2x2 blocks over the commutant
        gen = np.random.default_rng(seed)
        n = int(gen.integers(2, 4))
        gens = [gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
                for _ in range(int(gen.integers(1, 3)))]
        A = generate_algebra(gens)
        doubled = generate_algebra([np.kron(b, np.eye(2)) for b in A.basis])
        assert commutant(doubled).dim == 4 * commutant(A).dim


class TestBicommutant:
    def test_full(self):
        A = generate_algebra([unit(2, 0, 1), unit(2, 1, 0)])
        assert span_equal(bicommutant(A), A)

    def test_diagonal(self):
        A = generate_algebra([np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex)])
        assert span_equal(bicommutant(A), A)

    def test_unital_nilpotent_span(self):
        # A = span{I, e12}: the commutant is A itself, so A'' = A even though
        # A is not a reduction algebra
        A = AlgebraBasis(ambient=2, basis=[np.eye(2, dtype=complex), unit(2, 0, 1)],
                         unital=True)
        assert span_equal(bicommutant(A), A)


class TestRadical:
    def test_simple_algebra(self):
        A = generate_algebra([unit(3, 0, 1), unit(3, 1, 0), unit(3, 1, 2), unit(3, 2, 1)])
        assert radical(A).dim == 0

    def test_unital_nilpotent_span(self):
        A = AlgebraBasis(ambient=2, basis=[np.eye(2, dtype=complex), unit(2, 0, 1)],
                         unital=True)
        rad = radical(A)
        assert rad.dim == 1
        r = rad.basis[0]
        assert operator_norm(r @ r) < 1e-12
        # the radical element spans the same line as e12
        assert abs(abs(r[0, 1]) - 1.0) < 1e-9

    def test_upper_triangular(self):
        A = generate_algebra([np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex), unit(2, 0, 1)])
        rad = radical(A)
        assert A.dim == 3 and rad.dim == 1

    def test_trace_form_kernel_by_hand(self):
        # For span{I, e12} the Gram matrix of the trace form is [[2,0],[0,0]],
        # so the kernel is exactly the line through e12.
        A = AlgebraBasis(ambient=2, basis=[np.eye(2, dtype=complex), unit(2, 0, 1)],
                         unital=True)
        G = np.array([[np.trace(a @ b) for b in A.basis] for a in A.basis])
        assert np.allclose(G, np.array([[2.0, 0.0], [0.0, 0.0]]))

    def test_quotient_by_radical_is_semisimple(self, rng):
        # realize A/rad through its left regular action on coset coordinates
        # and check that the quotient's own radical vanishes
        from reduction_lab.gallery import digraph_algebra
        from reduction_lab.sampling import random_digraph

        for trial in range(6):
            G = random_digraph(int(rng.integers(2, 5)), rng, density=0.4)
            A = digraph_algebra(G)
            rad = radical(A)
            if rad.dim == 0:
                continue
            stacked = np.column_stack([b.reshape(-1) for b in A.basis])
            # the returned radical basis is orthonormal in vectorised form
            rad_frame = np.column_stack([r.reshape(-1) for r in rad.basis])
            proj_out = np.eye(A.ambient**2) - rad_frame @ rad_frame.conj().T
            u, s, _ = np.linalg.svd(proj_out @ stacked, full_matrices=False)
            quot_frame = u[:, : A.dim - rad.dim]
            assert s[A.dim - rad.dim - 1] > 1e-10
            actions = []
            for b in A.basis:
                cols = []
                for j in range(quot_frame.shape[1]):
                    x = quot_frame[:, j].reshape(A.ambient, A.ambient)
                    bx = (b @ x).reshape(-1)
                    cols.append(quot_frame.conj().T @ (proj_out @ bx))
                actions.append(np.column_stack(cols))
            Q = generate_algebra(actions)
            assert radical(Q).dim == 0

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_radical_elements_are_nilpotent(self, seed):
        gen = np.random.default_rng(seed)
        n = int(gen.integers(2, 5))
        gens = [gen.standard_normal((n, n)) for _ in range(2)]
        # force a nontrivial invariant flag structure by zeroing a column block
        for g in gens:
            g[:, 0] = 0.0
        A = generate_algebra([g.astype(complex) for g in gens])
        rad = radical(A)
        for r in rad.basis:
            power = np.eye(n, dtype=complex)
            for _ in range(n):
                power = power @ r
            assert operator_norm(power) < 1e-8


class TestCenterAndIdempotents:
    def test_full_matrix_algebra(self):
        A = generate_algebra([unit(2, 0, 1), unit(2, 1, 0)])
        Z, idems = center_and_minimal_central_idempotents(A)
        assert Z.dim == 1 and len(idems) == 1
        assert np.allclose(idems[0], np.eye(2))

    def test_diagonal(self):
        A = generate_algebra([np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex)])
        Z, idems = center_and_minimal_central_idempotents(A)
        assert Z.dim == 2 and len(idems) == 2
        got = sorted(tuple(np.round(np.diag(p).real).astype(int)) for p in idems)
        assert got == [(0, 1), (1, 0)]

    def test_two_blocks_in_m4(self):
        blocks = []
        for off in (0, 2):
            for s, t in itertools.product(range(2), repeat=2):
                blocks.append(unit(4, off + s, off + t))
        A = generate_algebra(blocks)
        Z, idems = center_and_minimal_central_idempotents(A)
        assert Z.dim == 2 and len(idems) == 2
        traces = sorted(round(np.trace(p).real) for p in idems)
        assert traces == [2, 2]
        for p in idems:
            assert operator_norm(p @ p - p) < 1e-8

    def test_idempotent_family_properties(self, rng):
        for _ in range(8):
            A, _, degenerate = random_semisimple_algebra(rng, max_dim=6)
            if not A.contains_identity():
                continue
            _, idems = center_and_minimal_central_idempotents(A, seed=int(rng.integers(2**31)))
            total = np.zeros((A.ambient, A.ambient), dtype=complex)
            for i, p in enumerate(idems):
                assert operator_norm(p @ p - p) < 1e-7 * max(1.0, operator_norm(p)) ** 2
                for q in idems[i + 1:]:
                    assert operator_norm(p @ q) < 1e-7 * max(1.0, operator_norm(p) * operator_norm(q))
                for b in A.basis:
                    assert operator_norm(p @ b - b @ p) < 1e-7 * max(1.0, operator_norm(b) * operator_norm(p))
                total += p
            assert operator_norm(total - np.eye(A.ambient)) < 1e-7

    def test_non_semisimple_rejected(self):
        A = AlgebraBasis(ambient=2, basis=[np.eye(2, dtype=complex), unit(2, 0, 1)],
                         unital=True)
        with pytest.raises(StructurePreconditionError):
            center_and_minimal_central_idempotents(A)

    def test_non_unital_rejected(self):
        A = generate_algebra([np.diag([1.0, 0.0]).astype(complex)])
        with pytest.raises(StructurePreconditionError):
            center_and_minimal_central_idempotents(A)


class TestAlgOfLattice:
    def test_trivial_lattice(self):
        L = SubspaceLattice.generate(2, [])
        assert alg_of_lattice(L).dim == 4

    def test_single_line_gives_upper_triangular(self):
        L = SubspaceLattice.generate(2, [Subspace.span_of_basis_vector(2, 0)])
        A = alg_of_lattice(L)
        assert A.dim == 3
        assert A.in_span(unit(2, 0, 1)) and not A.in_span(unit(2, 1, 0))

    def test_boolean_lattice_gives_diagonal(self):
        L = SubspaceLattice.generate(
            2, [Subspace.span_of_basis_vector(2, 0), Subspace.span_of_basis_vector(2, 1)]
        )
        A = alg_of_lattice(L)
        assert A.dim == 2
        assert A.in_span(np.diag([1.0, 0.0])) and A.in_span(np.diag([0.0, 1.0]))

    def test_alg_lat_alg_stability(self, rng):
        for _ in range(5):
            n = int(rng.integers(2, 5))
            subs = [Subspace.from_spanning(
                rng.standard_normal((n, int(rng.integers(1, n)))), ambient=n)
                for _ in range(2)]
            L = SubspaceLattice.generate(n, subs)
            A = alg_of_lattice(L)
            # the invariant lattice of alg L contains L, and alg of any larger
            # family inside lat(alg L) reproduces alg L
            assert span_equal(alg_of_lattice(L), A)
            for V in L.members:
                for b in A.basis:
                    resid = (np.eye(n) - V.projector()) @ b @ V.frame
                    assert operator_norm(resid) < 1e-8 * max(1.0, operator_norm(b))


class TestIsReflexive:
    def test_non_reflexive_example(self):
        A = AlgebraBasis(ambient=2, basis=[np.eye(2, dtype=complex), unit(2, 0, 1)],
                         unital=True)
        L = SubspaceLattice.generate(2, [Subspace.span_of_basis_vector(2, 0)])
        assert is_reflexive(A, L) is False

    def test_full_algebra_reflexive(self):
        A = generate_algebra([unit(2, 0, 1), unit(2, 1, 0)])
        L = SubspaceLattice.generate(2, [])
        assert is_reflexive(A, L) is True

    def test_diagonal_reflexive(self):
        A = generate_algebra([np.diag([1.0, 0.0]).astype(complex),
                              np.diag([0.0, 1.0]).astype(complex)])
        L = SubspaceLattice.generate(
            2, [Subspace.span_of_basis_vector(2, 0), Subspace.span_of_basis_vector(2, 1)]
        )
        assert is_reflexive(A, L) is True

    def test_invalid_witness_rejected(self):
        A = generate_algebra([np.diag([1.0, 0.0]).astype(complex), unit(2, 0, 1)])
        bad = SubspaceLattice.generate(
            2, [Subspace.from_spanning(np.array([[1.0], [1.0]]))]
        )
        with pytest.raises(InvalidWitnessError):
            is_reflexive(A, bad)


class TestLattice:
    def test_generate_closes(self):
        L = SubspaceLattice.generate(3, [
            Subspace.span_of_basis_vector(3, 0),
            Subspace.from_spanning(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])),
        ])
        L.validate()
        assert any(s.dim == 0 for s in L.members)
        assert any(s.dim == 3 for s in L.members)
