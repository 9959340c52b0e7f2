import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from nilcert.arith import RationalMatrix
from nilcert.pattern import (
    GroupElement,
    Pattern,
    PatternError,
    commutator,
    elementary,
    exp_matrix,
    factor_into_elementaries,
    is_pi_divisible,
    log,
    log_matrix,
    position_label,
    product_of_elementaries,
    random_member,
    rational_power,
    validate_pattern,
)

from corpus import PATTERNS

E12, E23, E13 = (0, 1), (1, 2), (0, 2)


def heis(a, b, c, pattern=None):
    pattern = pattern or Pattern.heisenberg((2, 3), (2, 3), (2, 3), (2, 3))
    return GroupElement(pattern, RationalMatrix([[1, a, c], [0, 1, b], [0, 0, 1]]))


class TestValidate:
    def test_closed(self):
        assert validate_pattern(Pattern.heisenberg((), (2,), (2,))) == []
        assert validate_pattern(Pattern.full(4, (3,))) == []

    def test_violation(self):
        bad = Pattern.heisenberg((2,), (2,), ())
        v = validate_pattern(bad)
        assert [t for t, _ in v] == [(1, 2, 3)]

    def test_zero_target(self):
        bad = Pattern(3, {E12: (), E23: ()})
        assert [t for t, _ in validate_pattern(bad)] == [(1, 2, 3)]
        assert "ZERO" in validate_pattern(bad)[0][1]

    @pytest.mark.parametrize("name", sorted(PATTERNS))
    def test_corpus_patterns_are_closed(self, name):
        assert validate_pattern(PATTERNS[name]) == []

    def test_constructor_errors(self):
        with pytest.raises(PatternError):
            Pattern(1, {})
        with pytest.raises(PatternError):
            Pattern(3, {(1, 0): ()})
        with pytest.raises(PatternError):
            Pattern(3, {})

    def test_labels(self):
        assert position_label((0, 2)) == "E13"
        assert position_label((0, 10)) == "E1,11"


class TestMembership:
    def test_examples(self):
        p = Pattern.heisenberg((), (2,), (2,))
        assert p.is_member(RationalMatrix([[1, 3, F(1, 4)], [0, 1, F(5, 2)], [0, 0, 1]]))
        assert not p.is_member(RationalMatrix([[1, F(1, 2), 0], [0, 1, 0], [0, 0, 1]]))
        assert not p.is_member(RationalMatrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))
        assert not p.is_member(RationalMatrix([[1, 0, 0], [1, 1, 0], [0, 0, 1]]))
        with pytest.raises(PatternError):
            elementary(p, E12, F(1, 2))

    def test_zero_position(self):
        p = PATTERNS["heis-in-ut4"]
        assert p.rank == 3
        with pytest.raises(PatternError):
            elementary(p, (1, 2), 1)


class TestGroup:
    def test_commutator(self):
        p = Pattern.heisenberg()
        assert commutator(elementary(p, E12, 1), elementary(p, E23, 1)) == elementary(p, E13, 1)

    def test_product_entry(self):
        p = Pattern.heisenberg()
        g = elementary(p, E12, 3) * elementary(p, E23, -2)
        assert g[0, 2] == -6

    @settings(max_examples=60)
    @given(st.sampled_from(sorted(PATTERNS)), st.integers(0, 2 ** 32))
    def test_axioms(self, name, seed):
        rng = random.Random(seed)
        p = PATTERNS[name]
        g, h, k = (random_member(p, rng) for _ in range(3))
        one = GroupElement.identity(p)
        assert (g * h) * k == g * (h * k)
        assert g * g.inverse() == one and g.inverse() * g == one
        assert g * one == g
        assert g ** 3 == g * g * g and g ** -2 == (g * g).inverse()


class TestLogExp:
    def test_heisenberg(self):
        X = log(heis(2, 3, 5))
        assert (X[0, 1], X[1, 2], X[0, 2]) == (2, 3, 5 - F(6, 2))

    @settings(max_examples=60)
    @given(st.sampled_from(sorted(PATTERNS)), st.integers(0, 2 ** 32))
    def test_inverse_pair(self, name, seed):
        g = random_member(PATTERNS[name], random.Random(seed))
        X = log(g)
        assert exp_matrix(X) == g.matrix
        assert log_matrix(exp_matrix(X)) == X

    @settings(max_examples=40)
    @given(st.integers(0, 2 ** 32))
    def test_commuting_elements(self, seed):
        """exp(2X) = exp(X)^2, since X commutes with itself."""
        g = random_member(Pattern.full(4), random.Random(seed))
        X = log(g)
        assert exp_matrix(X.scale(2)) == (g * g).matrix


class TestRationalPower:
    def test_heisenberg_root(self):
        a, b, c = F(3), F(5), F(7)
        r = rational_power(heis(a, b, c), F(1, 2))
        assert (r[0, 1], r[1, 2], r[0, 2]) == (a / 2, b / 2, c / 2 - a * b / 8)

    def test_elementary(self):
        p = Pattern.heisenberg((2,), (2,), (2,), (2,))
        assert rational_power(elementary(p, E12, 1), F(1, 2)) == elementary(p, E12, F(1, 2))

    def test_refuses(self):
        # 2 not in pi
        with pytest.raises(PatternError, match="root not guaranteed in N"):
            rational_power(heis(1, 1, 1, Pattern.heisenberg((2,), (2,), (2,), (3,))), F(1, 2))
        # pi not inside every ring
        with pytest.raises(PatternError, match="root not guaranteed in N"):
            rational_power(heis(1, 1, 1, Pattern.heisenberg((), (2,), (2,), (2,))), F(1, 2))

    @settings(max_examples=80)
    @given(st.integers(0, 2 ** 32), st.sampled_from([2, 3, 4, 6, -2]))
    def test_power_property(self, seed, k):
        p = Pattern.full(4, (2, 3), (2, 3))
        g = random_member(p, random.Random(seed))
        root = rational_power(g, F(1, k))
        assert root ** k == g
        assert rational_power(g, k) == g ** k

    def test_pi_divisible(self):
        assert is_pi_divisible(Pattern.heisenberg((2,), (2, 3), (2,), (2,)))
        assert not is_pi_divisible(Pattern.heisenberg((), (2,), (2,), (2,)))
        assert is_pi_divisible(Pattern.heisenberg())

    @settings(max_examples=60)
    @given(st.integers(0, 2 ** 32))
    def test_divisibility_matches_roots(self, seed):
        """Square roots of members stay in the group when 2 is inverted everywhere."""
        rng = random.Random(seed)
        p = Pattern.heisenberg((2,), (2,), (2,), (2,))
        g = random_member(p, rng)
        assert p.is_member(rational_power(g, F(1, 2)).matrix)
        # without inverting 2, a square root of e12(1) leaves the integral group
        Z = Pattern.heisenberg()
        half = exp_matrix(log(elementary(Z, E12, 1)).scale(F(1, 2)))
        assert not Z.is_member(half)


class TestFactorisation:
    def test_heisenberg(self):
        g = heis(2, 3, 11)
        assert factor_into_elementaries(g) == [(E12, 2), (E23, 3), (E13, 11 - 6)]

    def test_skips_zeros(self):
        assert factor_into_elementaries(heis(0, 4, 0)) == [(E23, 4)]
        assert factor_into_elementaries(GroupElement.identity(Pattern.heisenberg())) == []

    @settings(max_examples=80)
    @given(st.sampled_from(sorted(PATTERNS)), st.integers(0, 2 ** 32))
    def test_round_trip(self, name, seed):
        p = PATTERNS[name]
        g = random_member(p, random.Random(seed))
        factors = factor_into_elementaries(g)
        assert product_of_elementaries(p, factors) == g
        # each factor is itself a member, so the coordinates lie in their rings
        for pos, t in factors:
            elementary(p, pos, t)
