"""Run every check on one endomorphism and serialise the outcome."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .arith import PrimeSet, format_rational, parse_rational
from .certifier import (
    AUTOMORPHISM,
    PROPER_INJECTION,
    SKIPPED,
    Endomorphism,
    Hypothesis,
    InconsistencyError,
    OracleResult,
    Verdict,
    centre_determinant,
    check_central_criterion,
    check_tfab_criterion,
    preimage,
    surjectivity_oracle,
)
from .pattern import GroupElement, PatternError, elementary, is_pi_divisible, position_label, random_member, rational_power

CONSISTENT = "consistent"
SOUNDNESS_BUG = "SOUNDNESS-BUG"


@dataclass(frozen=True)
class CrossChecks:
    seed: int
    samples: int
    homomorphism: bool
    membership: bool
    preimages: Optional[bool]
    roots: Optional[bool]

    @property
    def ok(self) -> bool:
        return all(x is not False for x in (self.homomorphism, self.membership, self.preimages, self.roots))


@dataclass(frozen=True)
class Report:
    name: str
    pi: tuple[int, ...]
    degree: int
    pattern: tuple[tuple[str, tuple[int, ...]], ...]
    basis: tuple[str, ...]
    phi: tuple[tuple[str, ...], ...]
    charpoly: str
    abelianisation_charpoly: str
    centre_determinant: str
    central: Verdict
    tfab: Verdict
    oracle: Optional[OracleResult]
    cross_checks: Optional[CrossChecks]
    consistency: str
    pattern_validation: str = "ok"
    endomorphism_validation: str = "ok"

    @property
    def soundness_bug(self) -> bool:
        return self.consistency == SOUNDNESS_BUG

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pi": list(self.pi),
            "pattern": {
                "degree": self.degree,
                "positions": [{"position": label, "inverted_primes": list(ps)} for label, ps in self.pattern],
                "validation": self.pattern_validation,
            },
            "endomorphism": {
                "basis_order": list(self.basis),
                "matrix": [list(r) for r in self.phi],
                "validation": self.endomorphism_validation,
                "charpoly": self.charpoly,
                "abelianisation_charpoly": self.abelianisation_charpoly,
                "centre_determinant": self.centre_determinant,
            },
            "criteria": {"central": _verdict_to_dict(self.central), "tfab": _verdict_to_dict(self.tfab)},
            "oracle": _oracle_to_dict(self.oracle),
            "cross_checks": None if self.cross_checks is None else {
                "seed": self.cross_checks.seed,
                "samples": self.cross_checks.samples,
                "homomorphism": self.cross_checks.homomorphism,
                "membership": self.cross_checks.membership,
                "preimages": self.cross_checks.preimages,
                "roots": self.cross_checks.roots,
            },
            "consistency": self.consistency,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Report:
        cc = d["cross_checks"]
        return cls(
            name=d["name"],
            pi=tuple(d["pi"]),
            degree=d["pattern"]["degree"],
            pattern=tuple((p["position"], tuple(p["inverted_primes"])) for p in d["pattern"]["positions"]),
            basis=tuple(d["endomorphism"]["basis_order"]),
            phi=tuple(tuple(r) for r in d["endomorphism"]["matrix"]),
            charpoly=d["endomorphism"]["charpoly"],
            abelianisation_charpoly=d["endomorphism"]["abelianisation_charpoly"],
            centre_determinant=d["endomorphism"]["centre_determinant"],
            central=_verdict_from_dict(d["criteria"]["central"]),
            tfab=_verdict_from_dict(d["criteria"]["tfab"]),
            oracle=_oracle_from_dict(d["oracle"]),
            cross_checks=None if cc is None else CrossChecks(**cc),
            consistency=d["consistency"],
            pattern_validation=d["pattern"]["validation"],
            endomorphism_validation=d["endomorphism"]["validation"],
        )


def _verdict_to_dict(v: Verdict) -> dict:
    return {
        "criterion": v.criterion,
        "conclusion": v.conclusion,
        "oracle_result": v.oracle_result,
        "hypotheses": [{"name": h.name, "passed": h.passed, "witness": h.witness} for h in v.hypotheses],
    }


def _verdict_from_dict(d: dict) -> Verdict:
    return Verdict(d["criterion"], tuple(Hypothesis(h["name"], h["passed"], h["witness"])
                                         for h in d["hypotheses"]), d["conclusion"], d["oracle_result"])


def _oracle_to_dict(o: Optional[OracleResult]) -> dict:
    if o is None:
        return {"result": SKIPPED, "witness": None, "section": None}
    w = None
    if o.witness is not None:
        (i, j), t = o.witness
        w = {"row": i + 1, "col": j + 1, "value": format_rational(t)}
    return {"result": o.kind, "witness": w, "section": o.section}


def _oracle_from_dict(d: dict) -> Optional[OracleResult]:
    if d["result"] == SKIPPED:
        return None
    w = d["witness"]
    witness = None if w is None else ((w["row"] - 1, w["col"] - 1), parse_rational(w["value"]))
    return OracleResult(d["result"], witness, d["section"])


def cross_check(e: Endomorphism, pi: PrimeSet, oracle: Optional[OracleResult],
                seed: int = 0, samples: int = 8) -> CrossChecks:
    """Randomised group-level checks of what the Lie-level computations claim."""
    rng = random.Random(seed)
    pattern = e.pattern
    hom = member = True
    pre: Optional[bool] = None if oracle is None else True
    roots: Optional[bool] = None
    divisible = bool(pi) and is_pi_divisible(pattern.with_pi(pi))
    if divisible:
        roots = True
        rooted = pattern.with_pi(pi)
    for _ in range(samples):
        g = random_member(pattern, rng)
        h = random_member(pattern, rng)
        try:
            sg, sh = e.apply(g), e.apply(h)
        except PatternError:
            member = False
            continue
        if e.apply(g * h) != sg * sh:
            hom = False
        if oracle is not None and oracle.kind == AUTOMORPHISM and preimage(e, g) is None:
            pre = False
        if divisible:
            p = rng.choice(pi.primes)
            try:
                r = rational_power(GroupElement(rooted, g.matrix), f"1/{p}")
                if (r ** p).matrix != g.matrix:
                    roots = False
            except PatternError:
                roots = False
    if oracle is not None and oracle.kind == PROPER_INJECTION:
        pos, t = oracle.witness
        if preimage(e, elementary(pattern, pos, t)) is not None:
            pre = False
    return CrossChecks(seed, samples, hom, member, pre, roots)


def full_report(e: Endomorphism, pi: PrimeSet, name: str = "", run_oracle: bool = True,
                seed: int = 0, samples: int = 8) -> Report:
    central = check_central_criterion(e, pi)
    tfab = check_tfab_criterion(e)
    oracle = surjectivity_oracle(e) if run_oracle else None
    okind = SKIPPED if oracle is None else oracle.kind
    central = Verdict(central.criterion, central.hypotheses, central.conclusion, okind)
    tfab = Verdict(tfab.criterion, tfab.hypotheses, tfab.conclusion, okind)
    checks = cross_check(e, pi, oracle, seed, samples)
    if not checks.ok:
        raise InconsistencyError(f"randomised cross-checks failed: {checks}")
    # the criteria are sufficient conditions, so only this direction is a bug
    bug = okind == PROPER_INJECTION and AUTOMORPHISM in (central.conclusion, tfab.conclusion)
    L = e.lattice
    return Report(
        name=name,
        pi=tuple(pi.primes),
        degree=e.pattern.degree,
        pattern=tuple((position_label(p), tuple(e.pattern.rings[p].primes)) for p in e.pattern.positions),
        basis=tuple(L.labels()),
        phi=tuple(tuple(format_rational(x) for x in e.phi.row(r)) for r in range(L.rank)),
        charpoly=str(e.charpoly),
        abelianisation_charpoly=str(e.abelianisation_charpoly),
        centre_determinant=format_rational(centre_determinant(e)),
        central=central,
        tfab=tfab,
        oracle=oracle,
        cross_checks=checks,
        consistency=SOUNDNESS_BUG if bug else CONSISTENT,
    )


def render_text(r: Report) -> str:
    ring = lambda ps: "Z" if not ps else "Z[1/" + ",".join(map(str, ps)) + "]"
    lines = [f"report: {r.name}" if r.name else "report",
             f"pattern: degree {r.degree}; " + ", ".join(f"{lab} {ring(ps)}" for lab, ps in r.pattern),
             f"  pi = {{{','.join(map(str, r.pi))}}}",
             f"  closure: {r.pattern_validation}",
             f"endomorphism: {r.endomorphism_validation} (injective, Lie homomorphism, pattern-preserving)",
             f"  basis: {' '.join(r.basis)}",
             "  phi (columns are images of basis vectors):"]
    width = max(len(x) for row in r.phi for x in row)
    lines += ["    " + " ".join(x.rjust(width) for x in row) for row in r.phi]
    lines += [f"  charpoly: {r.charpoly}",
              f"  abelianisation charpoly: {r.abelianisation_charpoly}",
              f"  centre determinant: {r.centre_determinant}"]
    for v in (r.central, r.tfab):
        lines.append(f"criterion {v.criterion}: {v.conclusion}")
        for h in v.hypotheses:
            lines.append(f"  [{'pass' if h.passed else 'FAIL'}] {h.name}: {h.witness}")
    lines.append(f"oracle: {'skipped' if r.oracle is None else r.oracle.describe()}")
    if r.cross_checks is not None:
        c = r.cross_checks
        lines.append(f"cross-checks (seed {c.seed}, {c.samples} samples): "
                     f"homomorphism {_flag(c.homomorphism)}, membership {_flag(c.membership)}, "
                     f"preimages {_flag(c.preimages)}, roots {_flag(c.roots)}")
    lines.append(f"consistency: {r.consistency}")
    return "\n".join(lines) + "\n"


def _flag(x: Optional[bool]) -> str:
    return "n/a" if x is None else ("ok" if x else "FAILED")
