"""Endomorphisms of pattern groups and the automorphism criteria.

An endomorphism is given by a Lie algebra map ``phi`` on the lattice basis
(column ``k`` holds the coordinates of ``phi(e_k)``); the group map is
``sigma = exp . phi . log``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .arith import (
    PrimeSet,
    Polynomial,
    RationalMatrix,
    characteristic_polynomial,
    determinant,
    format_rational,
    in_localization,
    is_pi_unit,
    solve_linear,
)
from .lie import LieLattice, section_matrix
from .modules import map_preserves, map_surjective, unreached_generator
from .pattern import (
    GroupElement,
    Pattern,
    Position,
    exp_matrix,
    is_pi_divisible,
    log,
    position_label,
)

AUTOMORPHISM = "automorphism"
NOT_APPLICABLE = "not-applicable"
PROPER_INJECTION = "proper-injection"
SKIPPED = "skipped"


class EndomorphismError(ValueError):
    """A proposed map fails one of the endomorphism invariants."""

    def __init__(self, kind: str, detail: str):
        super().__init__(f"{kind}: {detail}")
        self.kind = kind
        self.detail = detail


class InconsistencyError(RuntimeError):
    """Two computations that must agree did not; indicates a bug."""


def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def binomial_coefficients(poly: Sequence[Fraction]) -> list[Fraction]:
    """Coordinates of ``sum c_k t^k`` in the basis ``C(t, m)``."""
    deg = len(poly) - 1
    return [sum((poly[k] * _stirling2(k, m) * math.factorial(m) for k in range(m, deg + 1)),
                Fraction(0)) for m in range(deg + 1)]


def maps_localization_into(poly: Sequence[Fraction], src: PrimeSet, dst: Optional[PrimeSet]) -> bool:
    """Does ``t -> poly(t)`` (no constant term) send ``Z[1/src]`` into ``Z[1/dst]``?

    At a prime in ``src`` but not ``dst`` the argument's denominator is
    unbounded, so only the zero polynomial survives.  At any other prime
    outside ``dst`` the argument is p-integral and ``Z`` is p-adically dense,
    so the test is integrality of the binomial-basis coordinates.
    """
    if all(c == 0 for c in poly):
        return True
    if dst is None or not src <= dst:
        return False
    return all(in_localization(b, dst) for b in binomial_coefficients(poly))


class Endomorphism:
    """A validated injective Lie endomorphism that preserves the pattern lattice."""

    def __init__(self, lattice: LieLattice, phi: RationalMatrix):
        self.lattice = lattice
        self.phi = phi

    @property
    def pattern(self) -> Pattern:
        return self.lattice.pattern

    def image(self, k: int) -> tuple[Fraction, ...]:
        return self.phi.column(k)

    def apply_lie(self, v: Sequence) -> tuple[Fraction, ...]:
        return self.phi.apply(v)

    def apply(self, g: GroupElement) -> GroupElement:
        L = self.lattice
        x = L.from_matrix(log(g))
        return GroupElement(self.pattern, exp_matrix(L.to_matrix(self.phi.apply(x))))

    def compose(self, other: Endomorphism) -> Endomorphism:
        """``self . other``."""
        return validate_endomorphism(self.lattice, self.phi @ other.phi)

    @cached_property
    def lower_sections(self) -> list[RationalMatrix]:
        return [section_matrix(self.phi, s) for s in self.lattice.lower_central_series.sections]

    @cached_property
    def upper_sections(self) -> list[RationalMatrix]:
        return [section_matrix(self.phi, s) for s in self.lattice.upper_central_series.sections]

    @property
    def abelianisation_matrix(self) -> RationalMatrix:
        return self.lower_sections[0]

    @property
    def centre_matrix(self) -> RationalMatrix:
        return self.upper_sections[0]

    @cached_property
    def charpoly(self) -> Polynomial:
        return characteristic_polynomial(self.phi)

    @cached_property
    def abelianisation_charpoly(self) -> Polynomial:
        return characteristic_polynomial(self.abelianisation_matrix)

    def __repr__(self):
        return f"Endomorphism({self.pattern!r}, {self.phi!r})"


def lie_hom_violations(L: LieLattice, phi: RationalMatrix) -> list[tuple[int, int]]:
    out = []
    for a in range(L.rank):
        for b in range(a + 1, L.rank):
            lhs = phi.apply(L.bracket(L.unit(a), L.unit(b)))
            rhs = L.bracket(phi.column(a), phi.column(b))
            if lhs != rhs:
                out.append((a, b))
    return out


def pattern_violation(L: LieLattice, phi: RationalMatrix) -> Optional[str]:
    """Why ``exp . phi . log`` fails to map N into N, or None.

    ``N`` is generated by the ``e_ij(t)``, so it suffices that each entry of
    ``exp(t * phi(E_ij))`` is a polynomial in ``t`` mapping ``ring(i,j)`` into
    the ring at its position.
    """
    n = L.pattern.degree
    for k, src in enumerate(L.basis):
        X = L.to_matrix(phi.column(k))
        powers = []
        term = RationalMatrix.identity(n)
        for d in range(1, n):
            term = (term @ X).scale(Fraction(1, d))
            powers.append(term)
        for u in range(n):
            for v in range(u + 1, n):
                poly = [Fraction(0)] + [P[u, v] for P in powers]
                if not maps_localization_into(poly, L.shape.rings[k], L.pattern.ring(u, v)):
                    coeffs = ", ".join(format_rational(c) for c in poly[1:])
                    return (f"image of {position_label(src)}(t) has entry ({u + 1},{v + 1}) "
                            f"with t-coefficients [{coeffs}] leaving "
                            f"{'ZERO' if L.pattern.ring(u, v) is None else L.pattern.ring(u, v).ring_name()}")
    return None


def validate_endomorphism(lattice: LieLattice, phi: RationalMatrix) -> Endomorphism:
    if phi.shape != (lattice.rank, lattice.rank):
        raise EndomorphismError("shape", f"expected a {lattice.rank}x{lattice.rank} matrix, got "
                                         f"{phi.rows}x{phi.cols}")
    bad = lie_hom_violations(lattice, phi)
    if bad:
        a, b = bad[0]
        raise EndomorphismError("lie-hom", f"phi[{lattice.labels([a])[0]},{lattice.labels([b])[0]}] "
                                           f"!= [phi {lattice.labels([a])[0]}, phi {lattice.labels([b])[0]}]")
    if determinant(phi) == 0:
        raise EndomorphismError("singular", "det(phi) = 0, so sigma is not injective")
    why = pattern_violation(lattice, phi)
    if why is not None:
        raise EndomorphismError("pattern", why)
    e = Endomorphism(lattice, phi)
    # phi is an automorphism of V, so both central series are phi-stable
    for filt in (lattice.lower_central_series, lattice.upper_central_series):
        for term in filt.terms:
            outside = [r for r in range(lattice.rank) if r not in term]
            if any(phi[r, c] != 0 for r in outside for c in term):
                raise InconsistencyError("a central series term is not phi-stable")
    return e


def endomorphism_from_generators(lattice: LieLattice, images: dict[int, Sequence]) -> Endomorphism:
    """Extend images of the abelianisation basis through brackets, then validate."""
    ab = lattice.abelianisation.indices
    if set(images) != set(ab):
        raise ValueError("images must be given for exactly the abelianisation basis")
    cols: dict[int, tuple[Fraction, ...]] = {k: tuple(Fraction(x) for x in images[k]) for k in ab}
    for c in range(lattice.rank):
        if c in cols:
            continue
        for (a, b), (sign, target) in lattice.table.items():
            if target == c and a in cols and b in cols:
                cols[c] = tuple(sign * x for x in lattice.bracket(cols[a], cols[b]))
                break
        else:
            raise ValueError(f"cannot reach {lattice.labels([c])[0]} by brackets")
    phi = RationalMatrix.from_columns([cols[k] for k in range(lattice.rank)])
    return validate_endomorphism(lattice, phi)


# -- criteria -----------------------------------------------------------------

def polynomial_in_localization(f: Polynomial, pi: PrimeSet) -> bool:
    return all(in_localization(c, pi) for c in f.coefficients)


def is_pi_like(e: Endomorphism, pi: PrimeSet, route: str = "both") -> bool:
    if route == "charpoly":
        return polynomial_in_localization(e.charpoly, pi)
    if route == "abelianisation":
        return polynomial_in_localization(e.abelianisation_charpoly, pi)
    if route != "both":
        raise ValueError(f"unknown route {route!r}")
    a = is_pi_like(e, pi, "charpoly")
    b = is_pi_like(e, pi, "abelianisation")
    if a != b:
        raise InconsistencyError(f"pi-like routes disagree for pi={pi.to_list()}: charpoly {e.charpoly} "
                                 f"vs abelianisation {e.abelianisation_charpoly}")
    return a


def centre_determinant(e: Endomorphism) -> Fraction:
    return determinant(e.centre_matrix)


@dataclass(frozen=True)
class Hypothesis:
    name: str
    passed: bool
    witness: str


@dataclass(frozen=True)
class OracleResult:
    kind: str
    witness: Optional[tuple[Position, Fraction]] = None
    section: Optional[int] = None

    def describe(self) -> str:
        if self.kind != PROPER_INJECTION:
            return self.kind
        pos, t = self.witness
        return (f"{self.kind}: {position_label(pos).lower()}({format_rational(t)}) not in the image "
                f"(lower central section {self.section})")


@dataclass(frozen=True)
class Verdict:
    criterion: str
    hypotheses: tuple[Hypothesis, ...]
    conclusion: str
    oracle_result: str = SKIPPED

    def __post_init__(self):
        if self.conclusion == AUTOMORPHISM and not all(h.passed for h in self.hypotheses):
            raise InconsistencyError("automorphism concluded with a failed hypothesis")


def _verdict(criterion: str, hyps: list[Hypothesis]) -> Verdict:
    ok = all(h.passed for h in hyps)
    return Verdict(criterion, tuple(hyps), AUTOMORPHISM if ok else NOT_APPLICABLE)


def check_central_criterion(e: Endomorphism, pi: PrimeSet) -> Verdict:
    """pi-divisible group, pi-like map, centre determinant a pi-unit."""
    pattern = e.pattern.with_pi(pi)
    h1 = is_pi_divisible(pattern)
    inverted = ", ".join(f"{position_label(p)}:{pattern.rings[p].ring_name()}" for p in pattern.positions
                         if not pi <= pattern.rings[p])
    h2 = is_pi_like(e, pi, "both")
    det = centre_determinant(e)
    h3 = is_pi_unit(det, pi)
    return _verdict("central", [
        Hypothesis("pi-divisible", h1, "all rings contain Z[1/pi]" if h1 else f"not divisible at {inverted}"),
        Hypothesis("pi-like", h2, f"charpoly {e.charpoly}; abelianisation charpoly {e.abelianisation_charpoly}"),
        Hypothesis("centre-det-pi-unit", h3, f"det on centre = {format_rational(det)}"),
    ])


def check_tfab_criterion(e: Endomorphism) -> Verdict:
    """Surjectivity on the torsion-free abelianisation."""
    ab = e.lattice.abelianisation
    ok = map_surjective(e.abelianisation_matrix, ab.shape)
    return _verdict("tfab", [Hypothesis(
        "abelianisation-surjective", ok,
        f"section map {e.abelianisation_matrix!r} on {ab.shape!r}")])


def section_surjectivity(e: Endomorphism) -> list[bool]:
    """Surjectivity of the induced map on each lower central section."""
    out = []
    for sec, M in zip(e.lattice.lower_central_series.sections, e.lower_sections):
        if not map_preserves(M, sec.shape):
            raise InconsistencyError("section map does not preserve the section lattice")
        out.append(map_surjective(M, sec.shape))
    return out


def surjectivity_oracle(e: Endomorphism) -> OracleResult:
    """Decide surjectivity section by section, with an explicit missed generator.

    ``sigma(N) = N`` iff every section ``Gamma_i / Gamma_(i+1)`` is hit, since
    the injective ``sigma`` stabilises each isolator.  A unit vector with no
    preimage in a failing section gives an elementary ``e_ij(1)`` outside the
    image of ``sigma``.
    """
    L = e.lattice
    for d, (sec, M, surj) in enumerate(zip(L.lower_central_series.sections, e.lower_sections,
                                           section_surjectivity(e)), start=1):
        miss = unreached_generator(M, sec.shape)
        if surj != (miss is None):
            raise InconsistencyError(f"section {d}: prime-local surjectivity and generator "
                                     f"preimages disagree")
        if miss is not None:
            return OracleResult(PROPER_INJECTION, (L.basis[miss], Fraction(1)), d)
    return OracleResult(AUTOMORPHISM)


def preimage(e: Endomorphism, g: GroupElement) -> Optional[GroupElement]:
    """``sigma^-1(g)`` when it lies in N, else None."""
    L = e.lattice
    x = solve_linear(e.phi, L.from_matrix(log(g)))
    M = exp_matrix(L.to_matrix(x))
    return GroupElement(e.pattern, M) if e.pattern.is_member(M) else None
