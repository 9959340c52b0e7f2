import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from nilcert.arith import RationalMatrix, rank
from nilcert.catalog import BUILTINS, load_document
from nilcert.lie import (
    LieLattice,
    central_hom_embedding,
    graded_bracket_map,
    hom_action,
    hom_inverse_action,
    section_matrix,
)
from nilcert.modules import ModuleShape, contains, map_surjective
from nilcert.pattern import Pattern, PatternError, commutator, log, random_member

from corpus import LATTICES, corpus

HEIS = LieLattice(Pattern.heisenberg((), (2,), (2,)))
UT4 = LieLattice(Pattern.full(4))


def kron_power(M, i):
    out = M
    for _ in range(i - 1):
        out = out.kron(M)
    return out


class TestBasis:
    def test_order(self):
        assert UT4.labels() == ["E12", "E23", "E34", "E13", "E24", "E14"]
        assert HEIS.shape == ModuleShape.of([], [2], [2])

    def test_brackets(self):
        assert HEIS.bracket_basis(0, 1) == (1, 2)
        assert HEIS.bracket_basis(1, 0) == (-1, 2)
        assert HEIS.bracket_basis(0, 2) is None
        # [E23, E12] = -E13 in UT4
        assert UT4.bracket(UT4.unit(1), UT4.unit(0)) == tuple(-UT4.unit(3)[k] for k in range(6))

    def test_matrix_round_trip(self):
        v = (F(1), F(2, 3), F(-5))
        assert HEIS.from_matrix(HEIS.to_matrix(v)) == v
        with pytest.raises(ValueError):
            HEIS.from_matrix(RationalMatrix([[0, 0, 0], [0, 0, 0], [1, 0, 0]]))

    def test_unclosed_pattern_rejected(self):
        with pytest.raises(PatternError):
            LieLattice(Pattern.heisenberg((2,), (), ()))

    @pytest.mark.parametrize("name", sorted(LATTICES))
    def test_bracket_is_matrix_commutator(self, name):
        L = LATTICES[name]
        rng = random.Random(7)
        for _ in range(5):
            x = [F(rng.randint(-4, 4)) for _ in range(L.rank)]
            y = [F(rng.randint(-4, 4)) for _ in range(L.rank)]
            X, Y = L.to_matrix(x), L.to_matrix(y)
            assert L.to_matrix(L.bracket(x, y)) == X @ Y - Y @ X


class TestSeries:
    def test_heisenberg(self):
        lcs = HEIS.lower_central_series
        assert lcs.terms == ((0, 1, 2), (2,), ())
        assert [s.indices for s in lcs.sections] == [(0, 1), (2,)]
        ucs = HEIS.upper_central_series
        assert ucs.terms == ((), (2,), (0, 1, 2))
        assert HEIS.centre.shape == ModuleShape.of([2])
        assert HEIS.nilpotency_class == 2

    def test_abelian(self):
        L = LieLattice(Pattern(3, {(0, 1): (), (0, 2): (3,)}))
        assert L.nilpotency_class == 1
        assert L.abelianisation.indices == (0, 1)
        assert L.centre.indices == (0, 1)

    def test_ut4(self):
        lcs = UT4.lower_central_series
        assert lcs.terms[1] == (3, 4, 5)
        assert lcs.terms[2] == (5,)
        assert UT4.nilpotency_class == 3
        assert UT4.centre.indices == (5,)
        assert UT4.upper_central_series.sections[1].indices == (3, 4)
        assert [UT4.depth(k) for k in range(6)] == [1, 1, 1, 2, 2, 3]

    @pytest.mark.parametrize("name", sorted(LATTICES))
    def test_series_are_central(self, name):
        """[V, zeta_(k+1)] lies inside zeta_k, and gamma_k inside zeta_(c-k+1)."""
        L = LATTICES[name]
        lcs, ucs = L.lower_central_series, L.upper_central_series
        assert lcs.length == ucs.length
        for k in range(ucs.length):
            for w in ucs.terms[k + 1]:
                for a in range(L.rank):
                    v = L.bracket(L.unit(a), L.unit(w))
                    assert all(v[c] == 0 for c in range(L.rank) if c not in ucs.terms[k])
        # gamma_k sits inside zeta_(c-k+1)
        c = lcs.length
        for k in range(c + 1):
            assert set(lcs.terms[k]) <= set(ucs.terms[c - k])


class TestGradedBrackets:
    def test_heisenberg_degree_two(self):
        a = graded_bracket_map(HEIS, 2)
        assert a.tensors == ((0, 0), (0, 1), (1, 0), (1, 1))
        assert a.matrix == RationalMatrix([[0, 1, -1, 0]])
        assert a.image == ModuleShape.of([2])

    def test_degree_one_is_identity(self):
        a = graded_bracket_map(UT4, 1)
        assert a.matrix == RationalMatrix.identity(3)

    def test_ut4_degree_three(self):
        a = graded_bracket_map(UT4, 3)
        col = a.tensors.index((0, 1, 2))
        assert a.matrix.column(col) == (1,)
        assert rank(a.matrix) == 1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            graded_bracket_map(HEIS, 3)
        with pytest.raises(ValueError):
            graded_bracket_map(HEIS, 0)

    @pytest.mark.parametrize("name", sorted(LATTICES))
    def test_image_inside_section(self, name):
        L = LATTICES[name]
        for i in range(1, L.nilpotency_class + 1):
            a = graded_bracket_map(L, i)
            sec = L.lower_central_series.sections[i - 1]
            # image rings sit inside the section rings, and every section coordinate is reached
            for img, ring in zip(a.image.rings, sec.shape.rings):
                assert img is not None and img <= ring
            assert rank(a.matrix) == sec.dim

    @settings(max_examples=60)
    @given(st.sampled_from(sorted(LATTICES)), st.integers(0, 2 ** 32))
    def test_group_commutators_land_in_image(self, name, seed):
        """log[g, h] agrees with [log g, log h] modulo gamma_3, inside the image lattice."""
        L = LATTICES[name]
        if L.nilpotency_class < 2:
            return
        rng = random.Random(seed)
        g, h = random_member(L.pattern, rng), random_member(L.pattern, rng)
        sec = L.lower_central_series.sections[1]
        x, y = L.from_matrix(log(g)), L.from_matrix(log(h))
        lhs = L.from_matrix(log(commutator(g, h)))
        rhs = L.bracket(x, y)
        assert [lhs[k] for k in sec.indices] == [rhs[k] for k in sec.indices]
        # log g = x is a lattice element, so the bracket is too
        a = graded_bracket_map(L, 2)
        assert contains(a.image, [rhs[k] for k in sec.indices])


def _builtin(name):
    return load_document(BUILTINS[name]).endomorphism


class TestCentralHoms:
    def test_heisenberg(self):
        # w = E12 gives x -> [E12, x]: E23 -> E13
        assert central_hom_embedding(HEIS) == RationalMatrix([[0, -1], [1, 0]])

    def test_needs_two_steps(self):
        with pytest.raises(ValueError, match="no second centre section"):
            central_hom_embedding(LieLattice(Pattern(3, {(0, 1): (), (0, 2): ()})))

    @pytest.mark.parametrize("name", sorted(LATTICES))
    def test_injective(self, name):
        L = LATTICES[name]
        B = central_hom_embedding(L)
        assert rank(B) == B.cols

    def test_actions_are_inverse(self):
        A = RationalMatrix([[2, 1], [1, 1]])
        Z = RationalMatrix([[3]])
        assert hom_action(A, Z) @ hom_inverse_action(A, Z) == RationalMatrix.identity(2)

    def test_action_convention(self):
        """Row-major coordinates: theta -> Z theta A^-1."""
        A = RationalMatrix([[2, 1], [1, 1]])
        Z = RationalMatrix([[1, 1], [0, 2]])
        theta = RationalMatrix([[1, 2], [3, 4]])
        flat = [theta[u, i] for u in range(2) for i in range(2)]
        expected = Z @ theta @ RationalMatrix([[1, -1], [-1, 2]])
        assert hom_action(A, Z).apply(flat) == tuple(expected[u, i] for u in range(2) for i in range(2))


def _equivariance_holds(e):
    L = e.lattice
    if L.upper_central_series.length < 2:
        return True
    B = central_hom_embedding(L)
    phi_z2 = e.upper_sections[1]
    if B @ phi_z2 != hom_action(e.abelianisation_matrix, e.centre_matrix) @ B:
        return False
    # the inverse action is only asserted once sigma is known to stabilise the centre
    if map_surjective(e.centre_matrix, L.centre.shape):
        inv = hom_inverse_action(e.abelianisation_matrix, e.centre_matrix)
        return inv @ B @ phi_z2 == B
    return True


class TestEquivariance:
    @pytest.mark.parametrize("name", sorted(BUILTINS))
    def test_builtins(self, name):
        assert _equivariance_holds(_builtin(name))

    def test_corpus(self):
        for inst in corpus(150, seed=11):
            e = inst.endo
            assert _equivariance_holds(e)
            L = e.lattice
            for i in range(1, L.nilpotency_class + 1):
                a = graded_bracket_map(L, i)
                assert e.lower_sections[i - 1] @ a.matrix == a.matrix @ kron_power(e.abelianisation_matrix, i)

    def test_section_matrix(self):
        e = _builtin("ut4-integer")
        assert section_matrix(e.phi, UT4.centre) == RationalMatrix([[-1]])
