"""Unitriangular pattern groups over localisations of Z.

Positions are 0-based ``(i, j)`` with ``i < j``; labels such as ``E13`` are
1-based.  A position absent from ``Pattern.rings`` is a ZERO position.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .arith import (
    EMPTY,
    PrimeSet,
    RationalMatrix,
    as_rational,
    denominator_primes,
    in_localization,
)

Position = tuple[int, int]


class PatternError(ValueError):
    pass


def position_label(pos: Position) -> str:
    i, j = pos
    sep = "," if max(i, j) >= 9 else ""
    return f"E{i + 1}{sep}{j + 1}"


def position_order(pos: Position) -> tuple[int, int, int]:
    """Superdiagonal first, then lexicographic."""
    return (pos[1] - pos[0], pos[0], pos[1])


class Pattern:
    """Which localisation ``Z[1/pi_ij]`` each entry above the diagonal ranges over."""

    def __init__(self, degree: int, rings: Mapping[Position, Iterable[int] | PrimeSet],
                 pi: Iterable[int] | PrimeSet = ()):
        if degree < 2:
            raise PatternError("degree must be at least 2")
        self.degree = degree
        clean: dict[Position, PrimeSet] = {}
        for (i, j), ring in rings.items():
            if not (0 <= i < j < degree):
                raise PatternError(f"position {(i, j)} is not strictly upper triangular")
            clean[(i, j)] = ring if isinstance(ring, PrimeSet) else PrimeSet(ring)
        if not clean:
            raise PatternError("pattern has no nonzero position")
        self.rings = clean
        self.pi = pi if isinstance(pi, PrimeSet) else PrimeSet(pi)
        self.positions: list[Position] = sorted(clean, key=position_order)

    @classmethod
    def full(cls, degree: int, primes: Iterable[int] = (), pi: Iterable[int] = ()) -> Pattern:
        ring = PrimeSet(primes)
        return cls(degree, {(i, j): ring for i in range(degree) for j in range(i + 1, degree)}, pi)

    @classmethod
    def heisenberg(cls, r12=(), r23=(), r13=(), pi=()) -> Pattern:
        return cls(3, {(0, 1): r12, (1, 2): r23, (0, 2): r13}, pi)

    def with_pi(self, pi: Iterable[int] | PrimeSet) -> Pattern:
        return Pattern(self.degree, self.rings, pi)

    def ring(self, i: int, j: int) -> Optional[PrimeSet]:
        return self.rings.get((i, j))

    @property
    def rank(self) -> int:
        return len(self.rings)

    def __eq__(self, other):
        return (isinstance(other, Pattern) and self.degree == other.degree
                and self.rings == other.rings and self.pi == other.pi)

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.rings.items())), self.pi))

    def __repr__(self):
        body = ", ".join(f"{position_label(p)}:{self.rings[p].ring_name()}" for p in self.positions)
        return f"Pattern(n={self.degree}, {body}, pi={self.pi.to_list()})"

    def closure_violations(self) -> list[tuple[tuple[int, int, int], str]]:
        out = []
        n = self.degree
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    a, b = self.ring(i, j), self.ring(j, k)
                    if a is None or b is None:
                        continue
                    c = self.ring(i, k)
                    triple = (i + 1, j + 1, k + 1)
                    if c is None:
                        out.append((triple, f"{position_label((i, k))} is ZERO but "
                                            f"{position_label((i, j))}*{position_label((j, k))} is not"))
                    elif not (a | b) <= c:
                        out.append((triple, f"{a.ring_name()}*{b.ring_name()} not inside "
                                            f"{c.ring_name()} at {position_label((i, k))}"))
        return out

    def member_violation(self, M: RationalMatrix) -> Optional[str]:
        n = self.degree
        if M.shape != (n, n):
            return "wrong size"
        for i in range(n):
            for j in range(n):
                x = M[i, j]
                if i == j:
                    if x != 1:
                        return f"diagonal entry ({i + 1},{j + 1}) is {x}"
                elif i > j:
                    if x != 0:
                        return f"entry ({i + 1},{j + 1}) below the diagonal"
                else:
                    ring = self.ring(i, j)
                    if ring is None:
                        if x != 0:
                            return f"entry at ZERO position {position_label((i, j))}"
                    elif not in_localization(x, ring):
                        return f"entry {x} at {position_label((i, j))} not in {ring.ring_name()}"
        return None

    def is_member(self, M: RationalMatrix) -> bool:
        return self.member_violation(M) is None


def validate_pattern(p: Pattern) -> list[tuple[tuple[int, int, int], str]]:
    """Closure violations; an empty list means the pattern defines a group."""
    return p.closure_violations()


def is_pi_divisible(p: Pattern) -> bool:
    return all(p.pi <= ring for ring in p.rings.values())


class GroupElement:
    __slots__ = ("pattern", "matrix")

    def __init__(self, pattern: Pattern, matrix: RationalMatrix):
        why = pattern.member_violation(matrix)
        if why is not None:
            raise PatternError(f"not a member of the pattern group: {why}")
        self.pattern = pattern
        self.matrix = matrix

    @classmethod
    def identity(cls, pattern: Pattern) -> GroupElement:
        return cls(pattern, RationalMatrix.identity(pattern.degree))

    def _same(self, other: GroupElement):
        if self.pattern != other.pattern:
            raise PatternError("elements of different pattern groups")

    def __mul__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return GroupElement(self.pattern, self.matrix @ other.matrix)

    def inverse(self) -> GroupElement:
        u = self.matrix - RationalMatrix.identity(self.pattern.degree)
        return GroupElement(self.pattern, _neumann_inverse(u))

    def __pow__(self, k: int) -> GroupElement:
        base = self if k >= 0 else self.inverse()
        out = GroupElement.identity(self.pattern)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.pattern == other.pattern \
            and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __getitem__(self, ij):
        return self.matrix[ij]

    def __repr__(self):
        return f"GroupElement({self.matrix!r})"

    def is_identity(self) -> bool:
        return self.matrix == RationalMatrix.identity(self.pattern.degree)


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    """``[g, h] = g^-1 h^-1 g h``."""
    return g.inverse() * h.inverse() * g * h


def elementary(pattern: Pattern, pos: Position, t) -> GroupElement:
    n = pattern.degree
    t = as_rational(t)
    return GroupElement(pattern, RationalMatrix([[1 if a == b else (t if (a, b) == pos else 0)
                                                  for b in range(n)] for a in range(n)]))


def _neumann_inverse(u: RationalMatrix) -> RationalMatrix:
    n = u.rows
    out = RationalMatrix.identity(n)
    term = RationalMatrix.identity(n)
    for _ in range(1, n):
        term = -(term @ u)
        out = out + term
    return out


def log_matrix(M: RationalMatrix) -> RationalMatrix:
    """``log(1 + u) = sum (-1)^(k+1) u^k / k`` for unipotent upper triangular M."""
    n = M.rows
    u = M - RationalMatrix.identity(n)
    out = RationalMatrix.zeros(n, n)
    term = RationalMatrix.identity(n)
    for k in range(1, n):
        term = term @ u
        out = out + term.scale(Fraction((-1) ** (k + 1), k))
    return out


def exp_matrix(X: RationalMatrix) -> RationalMatrix:
    """``exp(X)`` for strictly upper triangular X (the series stops at n-1)."""
    n = X.rows
    out = RationalMatrix.identity(n)
    term = RationalMatrix.identity(n)
    for k in range(1, n):
        term = (term @ X).scale(Fraction(1, k))
        out = out + term
    return out


def log(g: GroupElement) -> RationalMatrix:
    return log_matrix(g.matrix)


def exp(X: RationalMatrix) -> RationalMatrix:
    for i in range(X.rows):
        for j in range(i + 1):
            if X[i, j] != 0:
                raise ValueError("exp expects a strictly upper triangular matrix")
    return exp_matrix(X)


def rational_power(g: GroupElement, m) -> GroupElement:
    """The unique ``m``-th power of ``g`` in the Mal'cev completion."""
    m = as_rational(m)
    p = g.pattern
    if not (denominator_primes(m) <= p.pi and is_pi_divisible(p)):
        raise PatternError("root not guaranteed in N")
    return GroupElement(p, exp_matrix(log(g).scale(m)))


def factor_into_elementaries(g: GroupElement) -> list[tuple[Position, Fraction]]:
    """Factors ``e_pos(t)`` whose ordered product is ``g``.

    Positions are peeled off by superdiagonal, then lexicographically; left
    multiplication by ``e_ij(-t)`` only disturbs row ``i`` beyond column ``j``,
    which is processed later.
    """
    p = g.pattern
    n = p.degree
    cur = g.matrix.tolist()
    out = []
    for pos in p.positions:
        i, j = pos
        t = cur[i][j]
        if t == 0:
            continue
        out.append((pos, t))
        cur[i] = [a - t * b for a, b in zip(cur[i], cur[j])]
    if RationalMatrix(cur) != RationalMatrix.identity(n):
        raise PatternError("elementary factorisation did not terminate at the identity")
    return out


def product_of_elementaries(pattern: Pattern, factors: Sequence[tuple[Position, Fraction]]) -> GroupElement:
    out = GroupElement.identity(pattern)
    for pos, t in factors:
        out = out * elementary(pattern, pos, t)
    return out


def random_ring_element(ring: PrimeSet, rng: random.Random, bound: int = 8) -> Fraction:
    """A random element of ``Z[1/ring]`` with small numerator and denominator."""
    num = rng.randint(-bound, bound)
    den = 1
    for p in ring:
        den *= p ** rng.randint(0, max(1, int(math.log(bound, p))))
    return Fraction(num, den)


def random_member(pattern: Pattern, rng: random.Random, bound: int = 8) -> GroupElement:
    n = pattern.degree
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for (i, j), ring in pattern.rings.items():
        rows[i][j] = random_ring_element(ring, rng, bound)
    return GroupElement(pattern, RationalMatrix(rows))


__all__ = [
    "EMPTY", "GroupElement", "Pattern", "PatternError", "Position", "commutator",
    "elementary", "exp", "exp_matrix", "factor_into_elementaries", "is_pi_divisible",
    "log", "log_matrix", "position_label", "position_order", "product_of_elementaries",
    "random_member", "random_ring_element", "rational_power", "validate_pattern",
]
