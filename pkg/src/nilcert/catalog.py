"""Input documents and the built-in examples.

Document schema (JSON)::

    {"name": str, "degree": int,
     "pattern": [{"row": int, "col": int, "inverted_primes": [int]}],
     "pi": [int],
     "endomorphism": {"basis_order": [[int, int]], "matrix": [[str]]}}

Rows and columns are 1-based; positions not listed are ZERO.  ``matrix[u][k]``
is the coefficient of ``basis_order[u]`` in the image of ``basis_order[k]``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arith import PrimeSet, RationalMatrix, parse_rational
from .certifier import Endomorphism, validate_endomorphism
from .lie import LieLattice
from .pattern import Pattern, PatternError, validate_pattern


class InputError(ValueError):
    """Malformed input document."""


@dataclass
class Document:
    name: str
    pattern: Pattern
    pi: PrimeSet
    lattice: LieLattice
    endomorphism: Endomorphism


def _require(cond, msg):
    if not cond:
        raise InputError(msg)


def _int(x, what) -> int:
    _require(isinstance(x, int) and not isinstance(x, bool), f"{what} must be an integer")
    return x


def _primes(xs, what) -> PrimeSet:
    _require(isinstance(xs, list), f"{what} must be a list of primes")
    try:
        return PrimeSet(_int(p, what) for p in xs)
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from None


def load_document(data: dict) -> Document:
    """Parse and validate a document; every failure is an :class:`InputError`."""
    _require(isinstance(data, dict), "document must be a JSON object")
    for key in ("name", "degree", "pattern", "pi", "endomorphism"):
        _require(key in data, f"missing key {key!r}")
    name = data["name"]
    _require(isinstance(name, str), "name must be a string")
    n = _int(data["degree"], "degree")
    _require(n >= 2, "degree must be at least 2")
    rings = {}
    _require(isinstance(data["pattern"], list), "pattern must be a list")
    for entry in data["pattern"]:
        _require(isinstance(entry, dict), "pattern entries must be objects")
        i, j = _int(entry.get("row"), "row"), _int(entry.get("col"), "col")
        _require(1 <= i < j <= n, f"position ({i},{j}) is not above the diagonal of a {n}x{n} matrix")
        _require((i - 1, j - 1) not in rings, f"position ({i},{j}) listed twice")
        rings[(i - 1, j - 1)] = _primes(entry.get("inverted_primes"), f"inverted_primes at ({i},{j})")
    pi = _primes(data["pi"], "pi")
    try:
        pattern = Pattern(n, rings, pi)
    except PatternError as exc:
        raise InputError(str(exc)) from None
    violations = validate_pattern(pattern)
    if violations:
        raise InputError("pattern closure violated: " + "; ".join(
            f"triple {t}: {why}" for t, why in violations))
    lattice = LieLattice(pattern)

    endo = data["endomorphism"]
    _require(isinstance(endo, dict) and "basis_order" in endo and "matrix" in endo,
             "endomorphism needs basis_order and matrix")
    order = endo["basis_order"]
    _require(isinstance(order, list) and all(isinstance(p, list) and len(p) == 2 for p in order),
             "basis_order must be a list of [row, col] pairs")
    order = [(_int(a, "basis_order row") - 1, _int(b, "basis_order col") - 1) for a, b in order]
    _require(sorted(order) == sorted(lattice.basis) and len(set(order)) == len(order),
             "basis_order must list exactly the nonzero positions")
    rows = endo["matrix"]
    r = len(order)
    _require(isinstance(rows, list) and len(rows) == r and all(isinstance(x, list) and len(x) == r for x in rows),
             f"matrix must be {r}x{r}")
    try:
        given = [[parse_rational(x) if isinstance(x, str) else _bad_entry(x) for x in row] for row in rows]
    except ValueError as exc:
        raise InputError(str(exc)) from None
    # re-express in the lattice's own basis order
    perm = [order.index(pos) for pos in lattice.basis]
    phi = RationalMatrix([[given[perm[u]][perm[k]] for k in range(r)] for u in range(r)])
    try:
        e = validate_endomorphism(lattice, phi)
    except ValueError as exc:
        raise InputError(f"endomorphism invalid: {exc}") from None
    return Document(name, pattern, pi, lattice, e)


def _bad_entry(x):
    raise InputError(f"matrix entries must be rational strings, got {x!r}")


def _heisenberg(name, r12, r23, r13, pi, matrix):
    return {
        "name": name,
        "degree": 3,
        "pattern": [{"row": 1, "col": 2, "inverted_primes": r12},
                    {"row": 2, "col": 3, "inverted_primes": r23},
                    {"row": 1, "col": 3, "inverted_primes": r13}],
        "pi": pi,
        "endomorphism": {"basis_order": [[1, 2], [2, 3], [1, 3]], "matrix": matrix},
    }


BUILTINS: dict[str, dict] = {
    # a -> 2a, b -> b/2 on the group with rings Z, Z[1/2], Z[1/2]
    "heisenberg-phi1": _heisenberg("heisenberg-phi1", [], [2], [2], [],
                                   [["2", "0", "0"], ["0", "1/2", "0"], ["0", "0", "1"]]),
    # a -> 2a, c -> 2c on the same group
    "heisenberg-phi2": _heisenberg("heisenberg-phi2", [], [2], [2], [],
                                   [["2", "0", "0"], ["0", "1", "0"], ["0", "0", "2"]]),
    # abelianisation [[2,1],[1,1]]; the E13 part of phi(E23) makes t(t+1)/2 appear,
    # which is what keeps sigma(e23(t)) integral
    "heisenberg-z": _heisenberg("heisenberg-z", [], [], [], [],
                                [["2", "1", "0"], ["1", "1", "0"], ["0", "1/2", "1"]]),
    # hyperbolic abelianisation map of determinant -2, invertible over Z[1/2]
    "heisenberg-z-half-anosov": _heisenberg("heisenberg-z-half-anosov", [2], [2], [2], [2],
                                            [["1", "1", "0"], ["1", "-1", "0"], ["0", "0", "-2"]]),
    # E12 <-> E34, E23 -> -E23 + E14 on UT4(Z)
    "ut4-integer": {
        "name": "ut4-integer",
        "degree": 4,
        "pattern": [{"row": i, "col": j, "inverted_primes": []}
                    for i in range(1, 5) for j in range(i + 1, 5)],
        "pi": [],
        "endomorphism": {
            "basis_order": [[1, 2], [2, 3], [3, 4], [1, 3], [2, 4], [1, 4]],
            "matrix": [["0", "0", "1", "0", "0", "0"],
                       ["0", "-1", "0", "0", "0", "0"],
                       ["1", "0", "0", "0", "0", "0"],
                       ["0", "0", "0", "0", "1", "0"],
                       ["0", "0", "0", "1", "0", "0"],
                       ["0", "1", "0", "0", "0", "-1"]],
        },
    },
}
