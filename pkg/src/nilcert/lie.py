"""The rational Lie algebra of a pattern group and its coordinate lattice.

Vectors are tuples of Fractions in the lattice basis (the pattern's nonzero
positions, superdiagonal first).  Every series computed here turns out to be
spanned by basis vectors; that is checked rather than assumed, because the
section lattices are read off coordinatewise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .arith import RationalMatrix, inverse, nullspace, rref
from .modules import ModuleShape
from .pattern import Pattern, PatternError, Position, position_label, validate_pattern

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Section:
    """One step ``term_k / term_(k+1)`` of a filtration, as basis indices."""
    indices: tuple[int, ...]
    shape: ModuleShape

    @property
    def dim(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class Filtration:
    """Chain of coordinate subspaces, each given by its basis indices.

    ``terms`` runs in the order the series is built: descending for the
    lower central series (the whole lattice first), ascending for the upper
    one (``0`` first).  ``sections[k]`` sits between ``terms[k]`` and
    ``terms[k+1]``, so the lower series starts with the abelianisation and
    the upper series with the centre.
    """
    terms: tuple[tuple[int, ...], ...]
    sections: tuple[Section, ...]

    @property
    def length(self) -> int:
        return len(self.sections)


class LieLattice:
    def __init__(self, pattern: Pattern):
        violations = validate_pattern(pattern)
        if violations:
            raise PatternError("pattern is not closed: " + "; ".join(
                f"{t}: {why}" for t, why in violations))
        self.pattern = pattern
        self.basis: list[Position] = list(pattern.positions)
        self.index = {pos: k for k, pos in enumerate(self.basis)}
        self.shape = ModuleShape([pattern.rings[p] for p in self.basis])
        # [E_ij, E_kl] = d_jk E_il - d_li E_kj ; at most one term survives for i<j, k<l
        table: dict[tuple[int, int], tuple[int, int]] = {}
        for a, (i, j) in enumerate(self.basis):
            for b, (k, l) in enumerate(self.basis):
                if j == k:
                    table[(a, b)] = (1, self.index[(i, l)])
                elif l == i:
                    table[(a, b)] = (-1, self.index[(k, j)])
        self.table = table
        self._check_axioms()

    @property
    def rank(self) -> int:
        return len(self.basis)

    def labels(self, indices: Optional[Sequence[int]] = None) -> list[str]:
        idx = range(self.rank) if indices is None else indices
        return [position_label(self.basis[k]) for k in idx]

    def unit(self, k: int) -> Vector:
        return tuple(Fraction(int(i == k)) for i in range(self.rank))

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        out = [Fraction(0)] * self.rank
        for (a, b), (sign, c) in self.table.items():
            if x[a] and y[b]:
                out[c] += sign * x[a] * y[b]
        return tuple(out)

    def bracket_basis(self, a: int, b: int) -> Optional[tuple[int, int]]:
        """``[e_a, e_b]`` as ``(sign, index)``, or None when it vanishes."""
        return self.table.get((a, b))

    def _check_axioms(self):
        n = self.rank
        for a in range(n):
            for b in range(n):
                ab = self.table.get((a, b))
                ba = self.table.get((b, a))
                if (ab is None) != (ba is None) or (ab and (ab[0] != -ba[0] or ab[1] != ba[1])):
                    raise PatternError("bracket table is not antisymmetric")
        for a, b, c in itertools.product(range(n), repeat=3):
            x, y, z = self.unit(a), self.unit(b), self.unit(c)
            total = [sum(t) for t in zip(self.bracket(x, self.bracket(y, z)),
                                         self.bracket(y, self.bracket(z, x)),
                                         self.bracket(z, self.bracket(x, y)))]
            if any(total):
                raise PatternError("bracket table violates the Jacobi identity")

    def to_matrix(self, v: Sequence) -> RationalMatrix:
        n = self.pattern.degree
        rows = [[Fraction(0)] * n for _ in range(n)]
        for k, (i, j) in enumerate(self.basis):
            rows[i][j] = Fraction(v[k])
        return RationalMatrix(rows)

    def from_matrix(self, X: RationalMatrix) -> Vector:
        n = self.pattern.degree
        for i in range(n):
            for j in range(n):
                if X[i, j] != 0 and (i, j) not in self.index:
                    raise ValueError(f"matrix has support outside the pattern at ({i + 1},{j + 1})")
        return tuple(X[i, j] for (i, j) in self.basis)

    def ad(self, x: Sequence) -> RationalMatrix:
        """Matrix of ``y -> [x, y]``."""
        return RationalMatrix.from_columns([self.bracket(x, self.unit(b)) for b in range(self.rank)])

    # -- series ---------------------------------------------------------------

    def _coordinate_indices(self, spanning: Sequence[Sequence]) -> tuple[int, ...]:
        red, pivots = rref(spanning) if spanning else ([], [])
        for row, p in zip(red, pivots):
            if any(x != 0 for k, x in enumerate(row) if k != p):
                raise PatternError("series term is not a coordinate subspace")
        return tuple(sorted(pivots))

    def _section(self, upper: Sequence[int], lower: Sequence[int]) -> Section:
        idx = tuple(k for k in upper if k not in set(lower))
        return Section(idx, ModuleShape([self.shape.rings[k] for k in idx]))

    @cached_property
    def lower_central_series(self) -> Filtration:
        terms = [tuple(range(self.rank))]
        while terms[-1]:
            spanning = [self.bracket(self.unit(a), self.unit(b))
                        for a in range(self.rank) for b in terms[-1]]
            spanning = [v for v in spanning if any(v)]
            nxt = self._coordinate_indices(spanning)
            if nxt == terms[-1]:
                raise PatternError("lower central series does not terminate")
            terms.append(nxt)
        sections = tuple(self._section(terms[k], terms[k + 1]) for k in range(len(terms) - 1))
        return Filtration(tuple(terms), sections)

    @cached_property
    def upper_central_series(self) -> Filtration:
        terms: list[tuple[int, ...]] = [()]
        while len(terms[-1]) < self.rank:
            cur = terms[-1]
            # x is in the next term iff every [x, e_b] vanishes outside cur
            outside = [k for k in range(self.rank) if k not in cur]
            rows = []
            for b in range(self.rank):
                adb = self.ad(self.unit(b))
                rows.extend(adb.row(k) for k in outside)
            kernel = nullspace(RationalMatrix(rows)) if rows else [self.unit(k) for k in range(self.rank)]
            nxt = self._coordinate_indices(kernel)
            if nxt == cur:
                raise PatternError("upper central series stalls")
            terms.append(nxt)
        sections = tuple(self._section(terms[k + 1], terms[k]) for k in range(len(terms) - 1))
        return Filtration(tuple(terms), sections)

    @property
    def nilpotency_class(self) -> int:
        return self.lower_central_series.length

    @property
    def abelianisation(self) -> Section:
        return self.lower_central_series.sections[0]

    @property
    def centre(self) -> Section:
        return self.upper_central_series.sections[0]

    def depth(self, k: int) -> int:
        """Index of the lower-central section that basis vector ``k`` sits in."""
        for d, sec in enumerate(self.lower_central_series.sections):
            if k in sec.indices:
                return d + 1
        raise IndexError(k)

    def left_normed(self, indices: Sequence[int]) -> Vector:
        v = self.unit(indices[0])
        for k in indices[1:]:
            v = self.bracket(v, self.unit(k))
        return v


def section_matrix(phi: RationalMatrix, section: Section) -> RationalMatrix:
    """Induced map on a section; valid because the filtration terms are phi-stable."""
    return phi.submatrix(section.indices, section.indices)


@dataclass(frozen=True)
class BracketMap:
    matrix: RationalMatrix
    tensors: tuple[tuple[int, ...], ...]
    image: ModuleShape


def graded_bracket_map(L: LieLattice, i: int) -> BracketMap:
    """``x1 (x) ... (x) xi -> [x1, ..., xi]`` from the abelianisation section to section ``i``.

    Columns follow ``itertools.product`` order over abelianisation basis
    indices; ``image`` is the lattice the tensor power of the abelianisation
    lattice maps onto (ZERO where nothing lands).
    """
    lcs = L.lower_central_series
    if not 1 <= i <= lcs.length:
        raise ValueError(f"bracket degree {i} outside 1..{lcs.length}")
    ab = lcs.sections[0]
    target = lcs.sections[i - 1]
    tensors = tuple(itertools.product(ab.indices, repeat=i))
    cols = []
    rings: list = [None] * target.dim
    for t in tensors:
        v = L.left_normed(t)
        col = tuple(v[k] for k in target.indices)
        cols.append(col)
        nz = [r for r, x in enumerate(col) if x != 0]
        if not nz:
            continue
        if len(nz) != 1 or abs(col[nz[0]]) != 1:
            raise PatternError("bracket of basis vectors is not a signed basis vector")
        r = nz[0]
        # product of the factor rings; sums of such rings are rings again
        ring = L.shape.rings[t[0]]
        for k in t[1:]:
            ring = ring | L.shape.rings[k]
        rings[r] = ring if rings[r] is None else rings[r] | ring
    return BracketMap(RationalMatrix.from_columns(cols), tensors, ModuleShape(rings))


def central_hom_embedding(L: LieLattice) -> RationalMatrix:
    """``w -> (x -> [w, x])`` from the second centre section into Hom(ab, centre).

    Rows are hom coordinates ``(u, i)`` at ``u * dim(ab) + i`` (``u`` over the
    centre basis, ``i`` over the abelianisation basis), as in ``hom_shape``.
    """
    ucs = L.upper_central_series
    if ucs.length < 2:
        raise ValueError("no second centre section")
    z2 = ucs.sections[1]
    z1 = ucs.sections[0]
    ab = L.abelianisation
    cols = []
    for w in z2.indices:
        col = []
        for u in z1.indices:
            for x in ab.indices:
                col.append(L.bracket(L.unit(w), L.unit(x))[u])
        cols.append(col)
    return RationalMatrix.from_columns(cols)


def hom_action(phi_src: RationalMatrix, phi_dst: RationalMatrix) -> RationalMatrix:
    """Matrix of ``theta -> phi_dst . theta . phi_src^-1`` in row-major hom coordinates."""
    return phi_dst.kron(inverse(phi_src).transpose())


def hom_inverse_action(phi_src: RationalMatrix, phi_dst: RationalMatrix) -> RationalMatrix:
    """Matrix of ``theta -> phi_dst^-1 . theta . phi_src``."""
    return inverse(phi_dst).kron(phi_src.transpose())
