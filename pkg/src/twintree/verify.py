"""Named subgroups and verification suites.

Finite quotients used here:

* level quotients ``G/stab(n)``, acting on the ``2^n`` leaves;
* germ quotients ``G/(X^n * C)``, acting on ``Gamma x X^n`` (degree ``64 * 2^n``).

A subgroup index is only read off a quotient whose kernel the subgroup
contains; each suite checks that containment (or labels the value as
stabilisation evidence) before reporting.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import permgroup as pg
from .expr import parse
from .germs import (
    COCYCLE_TABLES,
    GAMMA_ELEMENTS,
    GAMMA_ID,
    GermEvaluator,
    XI_LETTERS,
    _MUL,
    check_table_entry,
    gamma_relations_hold,
    germ_perm_rep,
    table_entries,
)
from .presentation import (
    BASE_RELATORS,
    FAMILY_I,
    FAMILY_II,
    FREE_PRODUCT_IDENTITIES,
    K_GENERATORS,
    TWIN_ENDO,
    free_product_identity,
    phi_apply,
    right_component_shift,
    verify_phi_endomorphism,
    verify_relators,
)
from .tree_core import TWIN, ResourceCapExceeded, SelfSimilarGroup, reduce

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


# -- named subgroups ------------------------------------------------------


@dataclass(frozen=True)
class NamedSubgroup:
    name: str
    generators: Tuple[str, ...]  # expressions
    normal: bool = True  # normal closure in G, else plain subgroup

    def words(self) -> List[str]:
        return [parse(g) for g in self.generators]


WEIGHT3 = tuple(f"[[{x},{y}],{z}]" for x, y, z in itertools.product("abcd", repeat=3))

K = NamedSubgroup("K", K_GENERATORS)
B = NamedSubgroup("B", ("b", "cd"))
A = NamedSubgroup("A", ("a",))
GAMMA3 = NamedSubgroup("gamma3", WEIGHT3)
KG = NamedSubgroup("[K,G]", WEIGHT3 + ("[a,bcd]",))
C = NamedSubgroup("C", KG.generators + ("[a,b][b,c]",))
SUBGROUPS = {s.name: s for s in (K, B, A, GAMMA3, KG, C)}

# minimal generating sets of gamma_k / gamma_{k+1}
LCS_GENERATORS = {
    1: ("a", "b", "c", "d"),
    2: ("[a,b]", "[a,c]", "[a,d]", "[b,c]"),
    3: ("[[a,b],a]", "[[a,b],c]", "[[a,b],d]", "[[a,c],a]"),
    4: ("[[[a,b],c],a]", "[[[a,b],d],a]"),
}
LCS_RANKS = (4, 4, 4, 2, 4, 4, 2, 2, 4, 4, 4, 4, 2, 2, 2, 2)

# g_s fixes 11111 and has section s there
BRANCH_WITNESSES = (
    ("a", "([a,b]^4)^(c b^a)"),
    ("b", "[c,d]^4"),
    ("c", "([b,d]^4)^(b^a)"),
    ("d", "([a,b]^4)^c"),
)

BRANCHING_IDENTITIES = (
    ("[b,d]", "[a,b]"),
    ("[d,b] [d,[a,b]]^b", "[b,c]"),
    ("[d,c]", "[b,d]"),
    ("[[a,b],c]^b [b,c]", "[c,d]"),
    ("([a,b] bcd)^d", "bcd"),
)


# -- finite quotients -----------------------------------------------------


class Quotient:
    """Image of the twin in a level quotient or a germ quotient."""

    def __init__(self, kind: str, n: int, group: SelfSimilarGroup = TWIN,
                 evaluator: Optional[GermEvaluator] = None):
        if kind not in ("level", "germ"):
            raise ValueError(f"unknown quotient kind {kind!r}")
        if n < 0 or (kind == "level" and n < 1):
            raise ValueError("level must be >= 1 (>= 0 for germ quotients)")
        self.kind, self.n, self.group = kind, n, group
        if kind == "germ":
            self.ev = evaluator or GermEvaluator(group)
            self.degree = 64 << n
        else:
            self.degree = 1 << n
        self.G = pg.chain_from([self.image(s) for s in group.letters], self.degree)
        self._chains: Dict[str, pg.StabChain] = {}

    def __repr__(self) -> str:
        return f"Quotient({self.kind}, {self.n})"

    def image(self, word: str) -> pg.Perm:
        if self.kind == "germ":
            return germ_perm_rep(self.ev.pi_n(word, self.n))
        return self.group.level_permutation(word, self.n)

    def chain(self, s: NamedSubgroup) -> pg.StabChain:
        hit = self._chains.get(s.name)
        if hit is None:
            gens = [self.image(w) for w in s.words()]
            hit = pg.normal_closure(self.G.gens, gens, self.degree) if s.normal else pg.chain_from(gens, self.degree)
            self._chains[s.name] = hit
        return hit

    def index(self, s: NamedSubgroup) -> int:
        return self.G.order() // self.chain(s).order()

    def contains(self, s: NamedSubgroup, word: str) -> bool:
        return self.chain(s).contains(self.image(word))


def subgroup_level_chain(s: NamedSubgroup, n: int, group: SelfSimilarGroup = TWIN) -> pg.StabChain:
    return Quotient("level", n, group).chain(s)


def subgroup_germ_chain(s: NamedSubgroup, n: int) -> pg.StabChain:
    return Quotient("germ", n).chain(s)


def stabilized(values: Sequence) -> bool:
    """True when the last three values agree."""
    return len(values) >= 3 and values[-1] == values[-2] == values[-3]


# -- reports --------------------------------------------------------------


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""


@dataclass
class SuiteReport:
    suite: str
    seed: Optional[int] = None
    checks: List[Check] = field(default_factory=list)
    elapsed_ms: int = 0

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, PASS if ok else FAIL, detail))
        return ok

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in self.checks],
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'} ({self.elapsed_ms} ms)"]
        lines += [f"  [{c.status}] {c.name}" + (f": {c.detail}" if c.detail else "") for c in self.checks]
        return "\n".join(lines)


def _timed(name: str, seed: Optional[int] = None):
    def wrap(fn: Callable[..., None]):
        def run(*args, **kwargs) -> SuiteReport:
            rep = SuiteReport(name, seed=kwargs.get("seed", seed))
            t0 = time.perf_counter()
            fn(rep, *args, **kwargs)
            rep.elapsed_ms = int((time.perf_counter() - t0) * 1000)
            return rep
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def random_words(rng: random.Random, count: int, max_len: int, min_len: int = 0,
                 letters: str = "abcd") -> List[str]:
    return ["".join(rng.choice(letters) for _ in range(rng.randint(min_len, max_len))) for _ in range(count)]


# -- suites ---------------------------------------------------------------


def combined_stab3_in_k(n: int = 3) -> Tuple[bool, int]:
    """``stab_G(3) <= K`` inside the germ quotient at level ``n >= 3``.

    ``G`` acts on 8 level-3 leaves plus ``Gamma x X^n``; the pointwise
    stabiliser of the first 8 points is the image of ``stab_G(3)``.  The
    kernel ``X^n * C`` lies in both ``stab_G(3)`` and ``K``, so the
    inclusion in this quotient is the inclusion in ``G``.
    Returns the verdict and ``[G : stab_G(3)]``.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    ev = GermEvaluator()
    deg = 8 + (64 << n)

    def img(w: str) -> pg.Perm:
        return tuple(TWIN.level_permutation(w, 3)) + tuple(8 + x for x in germ_perm_rep(ev.pi_n(w, n)))

    G = pg.StabChain(deg, [img(s) for s in "abcd"], base_prefix=range(8))
    stab = G.stabilizer_generators(8)
    k = pg.normal_closure(G.gens, [img(w) for w in K.words()], deg)
    index = G.order() // pg.StabChain(deg, stab).order()
    return all(k.contains(p) for p in stab), index


@_timed("branching")
def suite_branching(rep: SuiteReport) -> None:
    """Branching identities ``lhs = 1*k``, ``stab(3) <= K`` and the ``1^5`` witnesses."""
    g = TWIN
    for lhs, k in BRANCHING_IDENTITIES:
        left, right, act = g.decompose(parse(lhs))
        ok = act == 0 and g.is_trivial(left) and g.equals(right, parse(k))
        rep.add(f"{lhs} = 1*{k}", ok, f"psi = ({left or '1'}, {right or '1'}), active={act}")
    ok, index = combined_stab3_in_k(3)
    rep.add("stab(3) <= K", ok, f"germ quotient n=3 with level-3 marking; [G:stab(3)] = {index}")
    for s, expr in BRANCH_WITNESSES:
        w = parse(expr)
        fixed = g.act_on_vertex(w, "11111") == "11111"
        q = Quotient("level", 5)
        in_k = q.contains(K, w)
        ok = fixed and g.equals(g.state(w, "11111"), s) and in_k
        rep.add(f"g_{s} = {expr}", ok, "fixes 11111, section there equals " + s)


@_timed("indices")
def suite_indices(rep: SuiteReport) -> None:
    """Indices of K, B, A, C, [K,G] and the quotients K/[K,G], K/C, K/(X*K)."""
    ok, _ = combined_stab3_in_k(3)
    rep.add("precondition stab(3) <= K", ok, "level quotients n >= 3 are exact for K and B")
    levels = (3, 4, 5)
    qs = {n: Quotient("level", n) for n in levels}
    rep.add("precondition K <= B", all(pg.is_subgroup(qs[n].chain(K), qs[n].chain(B)) for n in levels))
    for s, want in ((K, 16), (B, 8)):
        vals = [qs[n].index(s) for n in levels]
        rep.add(f"[G:{s.name}] = {want}", stabilized(vals) and vals[-1] == want,
                f"level quotients {levels}: {vals}")

    germs = {n: Quotient("germ", n) for n in (1, 2, 3)}
    for s, want in ((K, 16), (B, 8)):
        vals = [germs[n].index(s) for n in germs]
        rep.add(f"[G:{s.name}] germ/level agreement", vals[-1] == want, f"germ quotients n=1..3: {vals}")
    vals = [germs[n].index(A) for n in germs]
    rep.add("[G:A] = 16", stabilized(vals) and vals[-1] == 16,
            f"germ quotients n=1..3: {vals} (stabilisation evidence)")
    lvl_a = [qs[n].index(A) for n in levels]
    rep.add("A does not contain stab(n)", all(v < 16 for v in lvl_a),
            f"level-quotient values {lvl_a} undercount [G:A]")

    q1, q2 = germs[1], germs[2]
    ok = all(q2.contains(KG, phi_apply(TWIN_ENDO, w)) for w in C.words())
    rep.add("precondition 1*C <= [K,G]", ok, "germ quotient n=2")
    rep.add("[G:C] = 64", q1.index(C) == 64, f"degree {q1.degree}: {q1.index(C)}")
    rep.add("[G:[K,G]] = 128", q1.index(KG) == 128, f"degree {q1.degree}: {q1.index(KG)}")
    inv = pg.abelian_invariants_2group(q1.chain(K), modulo=q1.chain(KG))
    rep.add("K/[K,G] = C4 x C2", inv == [2, 4], f"invariants {inv}")
    k, c = q1.chain(K), q1.chain(C)
    bcd = q1.image(parse("bcd"))
    cyc = k.order() == 4 * c.order() and not c.contains(pg.mul(bcd, bcd)) and k.contains(bcd)
    rep.add("K/C cyclic of order 4 generated by bcd", cyc, f"|K/C| = {k.order() // c.order()}")

    inv = k_abelianization((2, 3), extra=germs)
    inv.append(pg.abelian_invariants_2group(Quotient("germ", 4).chain(K)))
    rep.add("K^ab = [2, 4, 4, 4, 8]", stabilized(inv) and inv[-1] == K_AB,
            f"germ quotients n=2..4: {inv} (stabilisation evidence)")

    k3 = Quotient("level", 3).chain(K)
    q4 = qs[4]
    xk = pg.chain_from([pg.embed_block(p, side) for p in k3.gens for side in (0, 1)], q4.degree)
    k4 = q4.chain(K)
    inv = pg.abelian_invariants_2group(k4, modulo=xk) if pg.is_subgroup(xk, k4) else None
    rep.add("K/(X*K) cyclic of order 4", inv == [4], f"level 4 invariants {inv}")

    q = qs[5]
    rep.add("gamma3 <= K", all(q.contains(K, w) for w in GAMMA3.words()), "level 5")
    rep.add("gamma3 <= A", all(q2.contains(A, w) for w in GAMMA3.words()), "germ quotient n=2")


K_AB = [2, 4, 4, 4, 8]


def k_abelianization(levels: Iterable[int], kind: str = "germ",
                     extra: Optional[Dict[int, Quotient]] = None) -> List[List[int]]:
    """Abelian invariants of the image of ``K`` in each quotient."""
    out = []
    for n in levels:
        q = (extra or {}).get(n) if kind == "germ" else None
        q = q or Quotient(kind, n)
        out.append(pg.abelian_invariants_2group(q.chain(K)))
    return out


def lcs_ranks(q: Quotient, max_class: int) -> Tuple[List[int], List[pg.StabChain]]:
    series = pg.lower_central_series(q.G, max_class=max_class)
    ranks = [pg.elementary_rank(series[i], series[i + 1]) for i in range(len(series) - 1)]
    return ranks, series


@_timed("lcs")
def suite_lcs(rep: SuiteReport, levels: Sequence[int] = (3, 4, 5), kind: str = "germ",
              prefix: int = 6) -> None:
    """Ranks of gamma_k/gamma_{k+1} in finite quotients and gamma5 = X*gamma3."""
    want = list(LCS_RANKS[:prefix])
    quotients = {n: Quotient(kind, n) for n in levels}
    history = []
    series = {}
    for n in levels:
        ranks, series[n] = lcs_ranks(quotients[n], max(prefix + 1, 5))
        history.append(ranks[:prefix])
        rep.add(f"{kind} {n}: ranks k<={prefix}", ranks[:prefix] == want, f"ranks {ranks}")
    rep.add(f"ranks k<={prefix} stabilized", stabilized(history), f"levels {list(levels)}")

    q, top = quotients[levels[-1]], series[levels[-1]]
    for k, exprs in LCS_GENERATORS.items():
        gens = [q.image(parse(e)) for e in exprs]
        span = top[k].copy()
        for g in gens:
            span.extend(g)
        ok = pg.same_group(span, top[k - 1]) and len(exprs) == pg.elementary_rank(top[k - 1], top[k])
        rep.add(f"gamma{k}/gamma{k + 1} generated by {', '.join(exprs)}", ok, f"{kind} {q.n}")

    for n in levels:
        if n < 2:
            continue
        below = quotients.get(n - 1) or Quotient(kind, n - 1)
        down = below.chain(GAMMA3)
        x = pg.chain_from([pg.embed_block(p, s) for p in down.gens for s in (0, 1)], quotients[n].degree)
        g5 = series[n][4]
        rep.add(f"gamma5 = X*gamma3 ({kind} {n})", pg.same_group(g5, x), f"order 2^{g5.order().bit_length() - 1}")


@_timed("germs", seed=42)
def suite_germs(rep: SuiteReport, seed: int = 42, pairs: int = 500, samples: int = 200) -> None:
    """Gamma, the functionals, pi and pi_n."""
    rng = random.Random(seed)
    ev = GermEvaluator()
    g = TWIN

    rep.add("Gamma relations", gamma_relations_hold() and len(set(GAMMA_ELEMENTS)) == 64, "64 elements")
    assoc = all(_MUL[_MUL[x][y]][z] == _MUL[x][_MUL[y][z]] for x in range(64) for y in range(64) for z in range(64))
    rep.add("Gamma associative", assoc, "64^3 triples")

    words = random_words(rng, pairs * 2, 12)
    us, vs = words[::2], words[1::2]
    bad = [(u, v) for u, v in zip(us, vs) for l in XI_LETTERS if ev.xi(u + v, l) != ev.xi(u, l) ^ ev.xi(v, l)]
    rep.add("[xi] homomorphisms", not bad, f"{pairs} pairs" + (f"; witness {bad[0]}" if bad else ""))
    bad = [(u, v) for u, v in zip(us, vs) if ev.pi(u + v) != ev.pi(u) * ev.pi(v)]
    rep.add("pi multiplicative", not bad, f"{pairs} pairs" + (f"; witness {bad[0]}" if bad else ""))

    sample = random_words(rng, samples, 12)
    tau = {"b": "c", "c": "d", "d": "b"}
    bad = []
    for w in sample:
        for n in (1, 2, 3):
            for l in XI_LETTERS:
                target = l
                for _ in range(n):
                    target = tau[target]
                total = sum(ev.xi(g.state(w, [(v >> (n - 1 - i)) & 1 for i in range(n)]), target)
                            for v in range(1 << n)) & 1
                if total != ev.xi(w, l):
                    bad.append((w, n, l))
    rep.add("[xi] = sum of level-n sections", not bad, f"n=1..3, {samples} words")
    bad = [w for w in sample for x in (0, 1) for l in XI_LETTERS if ev.x_xi("a" + w, x, l) != ev.x_xi(w, 1 - x, l)]
    rep.add("[x xi](ag) = [x' xi](g)", not bad, f"{samples} words")

    for table in COCYCLE_TABLES:
        for row, s, expected in table_entries(table):
            bad = [w for w in sample if not check_table_entry(ev, row, s, expected, w)]
            rep.add(f"table {row}({s}g) - {row}(g) = {expected or '0'}", not bad,
                    f"{samples} words" + (f"; witness {bad[0]!r}" if bad else ""))

    rep.add("f_i vanish on the nucleus", all(ev.f(s, i) == 0 for s in ("", "a", "b", "c", "d") for i in (1, 2, 3)))
    rep.add("pi kills family (i) relators", all(ev.pi(w) == GAMMA_ID for _, w in FAMILY_I.words()))

    img = pg.chain_from([germ_perm_rep(ev.pi_n(s, 0)) for s in "abcd"], 64)
    rep.add("|pi(G)| = 64", img.order() == 64, f"order {img.order()}")
    rep.add("pi kills C", all(ev.pi(w) == GAMMA_ID for w in C.words()), f"{len(C.generators)} generators")
    rep.add("pi(bcd) has order 4", ev.pi(parse("bcd")).order() == 4)

    for n in (1, 2):
        bad = []
        for v in range(1 << n):
            vert = [(v >> (n - 1 - i)) & 1 for i in range(n)]
            mover = _vertex_mover(g, vert)
            for k in C.words():
                lifted = phi_apply(TWIN_ENDO, k, n)  # 1^n * k
                w = reduce(mover[::-1] + lifted + mover)
                if not ev.pi_n(w, n).is_identity():
                    bad.append((vert, k))
        rep.add(f"pi_{n} kills X^{n}*C", not bad, f"{(1 << n) * len(C.generators)} elements")

    for n in (0, 1, 2):
        wit = [phi_apply(TWIN_ENDO, parse("bcd"), n)]
        wit += [w for w in sample if any(i != p for i, p in enumerate(g.level_permutation(w, n + 1)))][:40]
        bad = [w for w in wit if ev.pi_n(w, n).is_identity()]
        rep.add(f"pi_{n} non-trivial off the kernel", not bad, f"{len(wit)} witnesses")


def _vertex_mover(g: SelfSimilarGroup, vertex: List[int]) -> str:
    """A word sending ``1^n`` to ``vertex`` (breadth-first over short words)."""
    start = "".join("1" for _ in vertex)
    target = "".join(map(str, vertex))
    for length in range(0, 4 * len(vertex) + 4):
        for w in itertools.product("abcd", repeat=length):
            w = "".join(w)
            if g.act_on_vertex(w, start) == target:
                return w
    raise ResourceCapExceeded("no short word moves the vertex")


@_timed("presentation")
def suite_presentation(rep: SuiteReport, max_iter: int = 3) -> None:
    """Relators of both families, the endomorphism and the free-product identities."""
    for fam in (FAMILY_I, FAMILY_II):
        r = verify_relators(fam, max_iter)
        bad = [c.name for c in r.failures()]
        rep.add(f"{fam.name} relators, n <= {max_iter}", r.passed,
                f"{len(r.checks)} checks" + (f"; failing {bad[:3]}" if bad else ""))
    for c in verify_phi_endomorphism().checks:
        rep.add(c.name, c.passed, c.detail)
    ok = all(right_component_shift(TWIN_ENDO, parse(r), 4) for r in BASE_RELATORS)
    rep.add("psi(phi(r)) = (r', r) for 4 iterations", ok)
    for lhs, rhs in FREE_PRODUCT_IDENTITIES:
        rep.add(f"{lhs} = {rhs}", free_product_identity(lhs, rhs), "free product of four C2")


@_timed("torsion", seed=42)
def suite_torsion(rep: SuiteReport, sample: int = 200, max_len: int = 12, seed: int = 42,
                  cap: int = 10, group: SelfSimilarGroup = TWIN) -> None:
    """Orders of random words: finite powers of two, Unknown only at the cap."""
    rng = random.Random(seed)
    hist: Counter = Counter()
    for w in random_words(rng, sample, max_len, min_len=1, letters=group.letters):
        try:
            o = group.element_order(w, cap=cap)
        except ResourceCapExceeded as exc:
            rep.checks.append(Check(f"order({w})", INCONCLUSIVE, str(exc)))
            continue
        if o is None:
            rep.checks.append(Check(f"order({w})", INCONCLUSIVE, f"exceeds 2^{cap}"))
            continue
        hist[o] += 1
        if o & (o - 1):
            rep.add(f"order({w})", False, f"{o} is not a power of two")
    for w, want in (("", 1), ("ad", 4)):
        rep.add(f"order({w or '1'}) = {want}", group.element_order(w, cap=cap) == want)
    rep.add("all sampled orders are powers of two", all(o & (o - 1) == 0 for o in hist),
            "histogram " + ", ".join(f"{o}:{hist[o]}" for o in sorted(hist)))


SUITES: Dict[str, Callable[..., SuiteReport]] = {
    "branching": suite_branching,
    "indices": suite_indices,
    "lcs": suite_lcs,
    "germs": suite_germs,
    "presentation": suite_presentation,
    "torsion": suite_torsion,
}
TWIN_ONLY = {"branching", "indices", "lcs", "germs", "presentation"}
