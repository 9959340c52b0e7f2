"""Exact rational arithmetic, prime supports and small dense linear algebra.

Scalars are :class:`fractions.Fraction`.  Matrices are immutable and
row-major; nothing in this module ever touches floating point.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?)(\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` (optional leading minus, ``b > 0``)."""
    m = _RATIONAL_RE.match(text.strip()) if isinstance(text, str) else None
    if m is None:
        raise ValueError(f"not a rational literal: {text!r}")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    q = Fraction(int(num), int(den) if den else 1)
    return -q if sign else q


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_rational(x) -> Fraction:
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


# -- primes ------------------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of ``|n|`` by trial division (``n != 0``)."""
    n = abs(n)
    if n == 0:
        raise ValueError("zero has no factorisation")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class PrimeSet:
    """A finite, sorted set of rational primes (the ``pi`` of ``Z[1/pi]``)."""

    __slots__ = ("primes",)

    def __init__(self, primes: Iterable[int] = ()):
        ps = tuple(sorted(set(int(p) for p in primes)))
        for p in ps:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        object.__setattr__(self, "primes", ps)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeSet is immutable")

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __contains__(self, p):
        return p in self.primes

    def __eq__(self, other):
        return isinstance(other, PrimeSet) and self.primes == other.primes

    def __hash__(self):
        return hash(self.primes)

    def __le__(self, other: PrimeSet) -> bool:
        return set(self.primes) <= set(other.primes)

    def __or__(self, other: PrimeSet) -> PrimeSet:
        return PrimeSet(self.primes + other.primes)

    def __and__(self, other: PrimeSet) -> PrimeSet:
        return PrimeSet(set(self.primes) & set(other.primes))

    def __repr__(self):
        return "PrimeSet({" + ",".join(map(str, self.primes)) + "})"

    def ring_name(self) -> str:
        if not self.primes:
            return "Z"
        return "Z[1/" + ",".join(map(str, self.primes)) + "]"

    def to_list(self) -> list[int]:
        return list(self.primes)


EMPTY = PrimeSet()


def prime_support(q) -> tuple[PrimeSet, PrimeSet]:
    """Primes dividing the numerator and the denominator of ``q``."""
    q = as_rational(q)
    if q == 0:
        raise ValueError("zero has no support")
    return PrimeSet(factorize(q.numerator)), PrimeSet(factorize(q.denominator))


def denominator_primes(q) -> PrimeSet:
    q = as_rational(q)
    if q.denominator == 1:
        return EMPTY
    return PrimeSet(factorize(q.denominator))


def is_pi_number(n: int, pi: PrimeSet) -> bool:
    # zero is excluded: Z[1/pi] only inverts non-zero pi-numbers
    if n == 0:
        return False
    return all(p in pi for p in factorize(n))


def is_pi_unit(q, pi: PrimeSet) -> bool:
    q = as_rational(q)
    if q == 0:
        return False
    return is_pi_number(q.numerator, pi) and is_pi_number(q.denominator, pi)


def in_localization(q, pi: PrimeSet) -> bool:
    """Membership of ``q`` in ``Z[1/pi]``."""
    return denominator_primes(q) <= pi


def valuation(q, p: int) -> int:
    """p-adic valuation of a non-zero rational."""
    q = as_rational(q)
    if q == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


# -- matrices ----------------------------------------------------------------

class RationalMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Sequence[Sequence]):
        rows = tuple(tuple(as_rational(x) for x in row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must have positive dimensions")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "_e", rows)

    def __setattr__(self, name, value):
        raise AttributeError("RationalMatrix is immutable")

    @classmethod
    def _trusted(cls, rows: list[list[Fraction]]) -> RationalMatrix:
        # rows already hold Fractions of consistent length
        m = object.__new__(cls)
        object.__setattr__(m, "rows", len(rows))
        object.__setattr__(m, "cols", len(rows[0]))
        object.__setattr__(m, "_e", tuple(tuple(r) for r in rows))
        return m

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def diagonal(cls, values: Sequence) -> RationalMatrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> RationalMatrix:
        return cls([list(r) for r in zip(*columns)])

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._e[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._e)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._e)
        return f"RationalMatrix([{body}])"

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix._trusted([[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RationalMatrix._trusted([[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __neg__(self) -> RationalMatrix:
        return self.scale(-1)

    def scale(self, q) -> RationalMatrix:
        q = as_rational(q)
        return RationalMatrix._trusted([[q * a for a in r] for r in self._e])

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        zero = Fraction(0)
        out = []
        for r in self._e:
            row = [zero] * other.cols
            for k, a in enumerate(r):
                if a:
                    for j, b in enumerate(other._e[k]):
                        if b:
                            row[j] += a * b
            out.append(row)
        return RationalMatrix._trusted(out)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError("length mismatch")
        v = [as_rational(x) for x in v]
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._e)

    def transpose(self) -> RationalMatrix:
        return RationalMatrix([list(c) for c in zip(*self._e)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RationalMatrix:
        return RationalMatrix([[self._e[i][j] for j in cols] for i in rows])

    def kron(self, other: RationalMatrix) -> RationalMatrix:
        return RationalMatrix([[a * b for a in ra for b in rb]
                               for ra in self._e for rb in other._e])

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._e for x in r)

    def power(self, k: int) -> RationalMatrix:
        out = RationalMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out


def _lcm_denominators(values) -> int:
    out = 1
    for x in values:
        out = out * x.denominator // math.gcd(out, x.denominator)
    return out


def determinant(M: RationalMatrix) -> Fraction:
    """Exact determinant via row scaling to integers and Bareiss elimination."""
    if not M.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    scale = 1
    a = []
    for r in M.tolist():
        L = _lcm_denominators(r)
        scale *= L
        a.append([int(x * L) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact: Sylvester's identity guarantees divisibility
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], scale)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (non-zero rows, pivot columns)."""
    a = [[as_rational(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(M: RationalMatrix) -> int:
    return len(rref(M.tolist())[1])


def nullspace(M: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : M x = 0}``, one vector per free column."""
    red, pivots = rref(M.tolist())
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def in_span(vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return all(as_rational(x) == 0 for x in v)
    return len(rref(list(vectors) + [v])[1]) == len(rref(vectors)[1])


def solve_linear(M: RationalMatrix, v: Sequence) -> tuple[Fraction, ...]:
    """Unique solution of ``M x = v`` for square non-singular ``M``."""
    if not M.is_square:
        raise ValueError("solve_linear needs a square matrix")
    if len(v) != M.rows:
        raise ValueError("length mismatch")
    aug = [list(r) + [as_rational(x)] for r, x in zip(M.tolist(), v)]
    red, pivots = rref(aug)
    if pivots[: M.cols] != list(range(M.cols)) or len(pivots) != M.cols:
        raise ValueError("singular")
    return tuple(r[-1] for r in red)


def inverse(M: RationalMatrix) -> RationalMatrix:
    if not M.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = M.rows
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.tolist())]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("singular")
    return RationalMatrix([r[n:] for r in red])


# -- polynomials -------------------------------------------------------------

class Polynomial:
    """Dense univariate polynomial over Q, coefficients constant term first."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable = ()):
        c = [as_rational(x) for x in coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def x(cls) -> Polynomial:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coefficients) - 1

    def is_monic(self) -> bool:
        return bool(self.coefficients) and self.coefficients[-1] == 1

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __add__(self, other: Polynomial) -> Polynomial:
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return Polynomial([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                           for i in range(n)])

    def __neg__(self) -> Polynomial:
        return Polynomial([-c for c in self.coefficients])

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            q = as_rational(other)
            return Polynomial([q * c for c in self.coefficients])
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return Polynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc

    def evaluate_matrix(self, M: RationalMatrix) -> RationalMatrix:
        """Horner evaluation at a square matrix."""
        n = M.rows
        acc = RationalMatrix.zeros(n, n)
        eye = RationalMatrix.identity(n)
        for c in reversed(self.coefficients):
            acc = acc @ M + eye.scale(c)
        return acc

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.coefficients:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = format_rational(mag)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _hessenberg(M: RationalMatrix) -> list[list[Fraction]]:
    n = M.rows
    h = M.tolist()
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j] != 0), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for r in h:
                r[piv], r[j + 1] = r[j + 1], r[piv]
        for k in range(j + 2, n):
            u = h[k][j] / h[j + 1][j]
            if u == 0:
                continue
            h[k] = [a - u * b for a, b in zip(h[k], h[j + 1])]
            for r in h:
                r[j + 1] += u * r[k]
    return h


def characteristic_polynomial(M: RationalMatrix) -> Polynomial:
    """``det(xI - M)`` via similarity reduction to Hessenberg form."""
    if not M.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = M.rows
    h = _hessenberg(M)
    x = Polynomial.x()
    p = [Polynomial([1])]
    for m in range(1, n + 1):
        pm = (x - Polynomial([h[m - 1][m - 1]])) * p[m - 1]
        prod = Fraction(1)
        for i in range(1, m):
            prod *= h[m - i][m - i - 1]
            if prod == 0:
                break
            pm = pm - p[m - i - 1] * (h[m - i - 1][m - 1] * prod)
        p.append(pm)
    return p[n]
