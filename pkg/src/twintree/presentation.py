"""Endomorphic presentations: substitutions, relator families and their checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .expr import parse
from .tree_core import GRIGORCHUK, TWIN, SelfSimilarGroup, reduce


@dataclass(frozen=True)
class EndoSubstitution:
    name: str
    images: Tuple[Tuple[str, str], ...]  # (generator, image expression)

    def table(self) -> Dict[str, str]:
        return {s: parse(e) for s, e in self.images}


TWIN_ENDO = EndoSubstitution("twin", (("a", "c^a"), ("b", "d"), ("c", "b^a"), ("d", "c")))
GRIGORCHUK_ENDO = EndoSubstitution("grigorchuk", (("a", "c^a"), ("b", "d"), ("c", "b"), ("d", "c")))


def phi_apply(s: EndoSubstitution, word: str, iterations: int = 1) -> str:
    """Apply the substitution ``iterations`` times, reducing after each pass."""
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    table = s.table()
    w = reduce(word)
    for _ in range(iterations):
        w = reduce("".join(table[ch] for ch in w))
    return w


@dataclass(frozen=True)
class RelatorFamily:
    name: str
    relators: Tuple[str, ...]  # expression strings
    substitution: EndoSubstitution

    def words(self) -> List[Tuple[str, str]]:
        return [(r, parse(r)) for r in self.relators]

    def to_json(self) -> str:
        return json.dumps({"name": self.name, "substitution": dict(self.substitution.images),
                           "relators": list(self.relators)})


SQUARES = ("a^2", "b^2", "c^2", "d^2")
BASE_RELATORS = ("[d^a,d]", "[d,c^a b]", "[d,(c^a b)^c]", "[c^a b,c b^a]")
DIHEDRAL_WORDS = ("1", "c", "c^a", "c c^a", "c^a c", "c c^a c", "c^a c c^a", "c c^a c c^a")

FAMILY_I = RelatorFamily("family (i)", SQUARES + BASE_RELATORS, TWIN_ENDO)


def _family_ii(name: str, third: str) -> RelatorFamily:
    rels = tuple(
        r
        for w in DIHEDRAL_WORDS
        for r in (f"[d^a,d^({w})]", f"[d^a,(c b^a)^({w})]", third.format(w=w))
    )
    return RelatorFamily(name, SQUARES + rels, TWIN_ENDO)


FAMILY_II = _family_ii("family (ii)", "[(c b^a)^a,(c b^a)^({w})]")
# Same family with the first entry of the third commutator unconjugated.
# It is not a set of relations: it fails for w = c^a and five other w.
FAMILY_II_UNCONJUGATED = _family_ii("family (ii), unconjugated", "[c b^a,(c b^a)^({w})]")
GRIGORCHUK_FAMILY = RelatorFamily(
    "grigorchuk", SQUARES + ("bcd", "[d^a,d]", "[d^a,d^(c^a c)]"), GRIGORCHUK_ENDO)

K_GENERATORS = ("[a,b]", "[b,c]", "[b,d]", "[c,d]", "bcd")

# conjugacy identities in the free product of four copies of C2
FREE_PRODUCT_IDENTITIES = (
    ("[d,d^a]", "[d^a,d]^a"),
    ("[c^a b,d]", "[d,c^a b]^d"),
    ("[(c^a b)^c,d]", "[d,(c^a b)^c]^d"),
    ("[c b^a,c^a b]", "[c^a b,c b^a]^a"),
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


def verify_relators(family: RelatorFamily, max_iter: int, group: SelfSimilarGroup = TWIN) -> Report:
    if max_iter < 0:
        raise ValueError("max_iter must be >= 0")
    report = Report()
    for expr, word in family.words():
        w = word
        for n in range(max_iter + 1):
            ok = group.is_trivial(w)
            report.checks.append(CheckResult(f"{expr} n={n}", ok, f"length {len(w)}"))
            w = phi_apply(family.substitution, w)
    return report


def verify_phi_endomorphism(group: SelfSimilarGroup = TWIN, endo: EndoSubstitution = TWIN_ENDO,
                            family: RelatorFamily = FAMILY_I) -> Report:
    """Images of relators are trivial, and ``phi(k) = 1*k`` on K's generators."""
    report = Report()
    for expr, word in family.words():
        img = phi_apply(endo, word)
        report.checks.append(CheckResult(f"phi({expr}) trivial", group.is_trivial(img)))
    for expr in K_GENERATORS:
        k = parse(expr)
        left, right, act = group.decompose(phi_apply(endo, k))
        ok = act == 0 and group.is_trivial(left) and group.equals(right, k)
        report.checks.append(CheckResult(f"phi({expr}) = 1*{expr}", ok, f"psi = ({left or '1'}, {right or '1'})"))
    return report


def right_component_shift(endo: EndoSubstitution, word: str, iterations: int,
                          group: SelfSimilarGroup = TWIN) -> bool:
    """Each iterate decomposes with right component equal to the previous one."""
    prev = reduce(word)
    for _ in range(iterations):
        nxt = phi_apply(endo, prev)
        _, right, _ = group.decompose(nxt)
        if not group.equals(right, prev):
            return False
        prev = nxt
    return True


def free_product_identity(lhs: str, rhs: str) -> bool:
    """Equality in the free product of four C2's: pure free reduction."""
    return reduce(parse(lhs) + parse(rhs)[::-1]) == ""


def endo_for(group: SelfSimilarGroup) -> EndoSubstitution:
    return GRIGORCHUK_ENDO if group is GRIGORCHUK else TWIN_ENDO
