"""Split lattices ``Z[1/pi_1] + ... + Z[1/pi_r]`` inside ``Q^r``.

A coordinate ring of ``None`` is the zero ring: the coordinate is carried
along (so ranks stay aligned) but every member has a zero there.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .arith import (
    PrimeSet,
    RationalMatrix,
    as_rational,
    denominator_primes,
    determinant,
    factorize,
    in_span,
    valuation,
    solve_linear,
)

Ring = Optional[PrimeSet]


class ModuleShape:
    __slots__ = ("rings",)

    def __init__(self, rings: Sequence[Ring]):
        for r in rings:
            if r is not None and not isinstance(r, PrimeSet):
                raise TypeError("coordinate rings are PrimeSet or None")
        object.__setattr__(self, "rings", tuple(rings))

    def __setattr__(self, name, value):
        raise AttributeError("ModuleShape is immutable")

    @classmethod
    def of(cls, *prime_lists) -> ModuleShape:
        return cls([None if ps is None else PrimeSet(ps) for ps in prime_lists])

    @property
    def rank(self) -> int:
        return len(self.rings)

    def nonzero_coordinates(self) -> list[int]:
        return [i for i, r in enumerate(self.rings) if r is not None]

    def __eq__(self, other):
        return isinstance(other, ModuleShape) and self.rings == other.rings

    def __hash__(self):
        return hash(self.rings)

    def __repr__(self):
        return "ModuleShape(" + ", ".join("0" if r is None else r.ring_name() for r in self.rings) + ")"

    def to_json(self) -> list:
        return [None if r is None else r.to_list() for r in self.rings]

    @classmethod
    def from_json(cls, data: list) -> ModuleShape:
        return cls([None if r is None else PrimeSet(r) for r in data])


def contains(shape: ModuleShape, v: Sequence) -> bool:
    if len(v) != shape.rank:
        raise ValueError("length mismatch")
    for ring, x in zip(shape.rings, v):
        x = as_rational(x)
        if x == 0:
            continue
        if ring is None or not denominator_primes(x) <= ring:
            return False
    return True


def _entry_ok(q: Fraction, src: Ring, dst: Ring) -> bool:
    # q * src-ring must land in dst-ring
    if q == 0 or src is None:
        return True
    if dst is None:
        return False
    return denominator_primes(q) <= dst and src <= dst


def map_preserves(A: RationalMatrix, shape: ModuleShape) -> bool:
    if A.shape != (shape.rank, shape.rank):
        raise ValueError("size mismatch")
    return all(_entry_ok(A[u, i], shape.rings[i], shape.rings[u])
               for u in range(shape.rank) for i in range(shape.rank))


def hom_shape(src: ModuleShape, dst: ModuleShape) -> ModuleShape:
    """Shape of ``{f : f(src) <= dst}`` in matrix-entry coordinates.

    Entry ``(u, i)`` sits at index ``u * src.rank + i``; it ranges over the
    conductor of ``Z[1/pi_i]`` into ``Z[1/pi_u]``.
    """
    rings: list[Ring] = []
    for d in dst.rings:
        for s in src.rings:
            if d is None:
                rings.append(None)
            elif s is None:
                # no constraint from a zero source; the entry never acts
                rings.append(d)
            else:
                rings.append(d if s <= d else None)
    return ModuleShape(rings)


def relevant_primes(A: RationalMatrix, shape: ModuleShape) -> list[int]:
    """Primes at which ``A`` can fail to be a local isomorphism of ``shape``.

    Away from the union of the coordinate rings' primes the localised module is
    ``Z_(p)^r`` and surjectivity there is ``v_p(det A) = 0``; so the primes of
    ``det A`` and of the rings exhaust all candidates.  Entry primes are added
    as a harmless superset.
    """
    nz = shape.nonzero_coordinates()
    if not nz:
        return []
    sub = A.submatrix(nz, nz)
    primes: set[int] = set()
    for ring in shape.rings:
        if ring is not None:
            primes.update(ring)
    for x in (sub[u, i] for u in range(len(nz)) for i in range(len(nz))):
        if x != 0:
            primes.update(factorize(x.numerator))
            primes.update(factorize(x.denominator))
    det = determinant(sub)
    if det != 0:
        primes.update(factorize(det.numerator))
    # a prime inverted in every coordinate sees only Q-vector spaces
    return sorted(p for p in primes if any(shape.rings[i] is not None and p not in shape.rings[i]
                                           for i in nz))


def local_elementary_valuations(M: RationalMatrix, p: int) -> list[Optional[int]]:
    """p-adic valuations of the elementary divisors of ``M`` over ``Z_(p)``.

    Entries must be p-integral.  Pivots are entries of minimal valuation,
    ties broken by lowest (row, column).  ``None`` marks a zero divisor.
    """
    a = M.tolist()
    rows, cols = M.rows, M.cols
    out: list[Optional[int]] = []
    for k in range(min(rows, cols)):
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if a[i][j] != 0:
                    v = valuation(a[i][j], p)
                    if v < 0:
                        raise ValueError(f"entry {a[i][j]} is not {p}-integral")
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            out.extend([None] * (min(rows, cols) - k))
            break
        v, i, j = best
        a[k], a[i] = a[i], a[k]
        for r in a:
            r[k], r[j] = r[j], r[k]
        piv = a[k][k]
        for i2 in range(k + 1, rows):
            f = a[i2][k] / piv
            if f:
                a[i2] = [x - f * y for x, y in zip(a[i2], a[k])]
        for j2 in range(k + 1, cols):
            f = a[k][j2] / piv
            if f:
                for r in a:
                    r[j2] -= f * r[k]
        out.append(v)
    return out


def _check_endomorphism(A: RationalMatrix, shape: ModuleShape) -> list[int]:
    if A.shape != (shape.rank, shape.rank):
        raise ValueError("size mismatch")
    nz = shape.nonzero_coordinates()
    if not map_preserves(A, shape) or (nz and determinant(A.submatrix(nz, nz)) == 0):
        raise ValueError("not an endomorphism of the module")
    return nz


def map_surjective(A: RationalMatrix, shape: ModuleShape) -> bool:
    """Decide ``A(shape) == shape`` prime by prime.

    The quotient ``shape / A(shape)`` is torsion, so it vanishes iff every
    localisation does.  At ``p``, the coordinates with ``p`` inverted span a
    Q-space ``D``; the rest form a ``Z_(p)``-lattice ``F``.
    """
    nz = _check_endomorphism(A, shape)
    if not nz:
        return True
    for p in relevant_primes(A, shape):
        d_src = [i for i in nz if p in shape.rings[i]]
        f_src = [i for i in nz if p not in shape.rings[i]]
        images = [tuple(A[u, i] for u in nz) for i in d_src]
        for j in d_src:
            e_j = tuple(Fraction(int(u == j)) for u in nz)
            if not in_span(images, e_j):
                return False
        if not f_src:
            continue
        # V/W is coordinatised by the F coordinates once W = span(D)
        block = A.submatrix(f_src, f_src)
        vals = local_elementary_valuations(block, p)
        if any(v != 0 for v in vals):
            return False
    return True


def unreached_generator(A: RationalMatrix, shape: ModuleShape) -> Optional[int]:
    """First coordinate ``j`` whose unit vector has no preimage in ``shape``.

    Independent of :func:`map_surjective`: solves ``A x = e_j`` and tests
    membership.  Unit vectors suffice because ``A`` preserving the shape makes
    ``A^{-1}`` block triangular at every prime, so ``A^{-1} e_j`` in the shape
    already forces ``A^{-1}(e_j / m)`` in it for ``m`` a ring denominator.
    """
    nz = _check_endomorphism(A, shape)
    sub = A.submatrix(nz, nz)
    sub_shape = ModuleShape([shape.rings[i] for i in nz])
    for k, j in enumerate(nz):
        e = [Fraction(int(i == k)) for i in range(len(nz))]
        if not contains(sub_shape, solve_linear(sub, e)):
            return j
    return None
