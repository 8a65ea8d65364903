"""Acceptance criteria 1-11.

Each test prints one ``criterion N: PASS|FAIL`` line with its wall time and
limit.  Indented ``note:`` lines give supporting numbers.
"""

import time

from twintree import parse
from twintree.tree_core import TWIN_SPEC, SelfSimilarGroup
from twintree.presentation import (
    FAMILY_I,
    FAMILY_II,
    FREE_PRODUCT_IDENTITIES,
    free_product_identity,
    verify_phi_endomorphism,
    verify_relators,
)
from twintree.verify import (
    K_AB,
    Quotient,
    k_abelianization,
    lcs_ranks,
    stabilized,
    suite_branching,
    suite_germs,
    suite_indices,
    suite_lcs,
    suite_torsion,
)


def report(capsys, number, ok, elapsed, limit, detail, notes=()):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    with capsys.disabled():
        print(f"\ncriterion {number}: {status} ({elapsed:.2f} s, limit {limit} s) {detail}")
        for n in notes:
            print(f"    note: {n}")
    assert ok, detail
    assert within, f"took {elapsed:.1f} s, limit {limit} s"


def statuses(rep, names):
    found = {c.name: c.status for c in rep.checks}
    return all(found.get(n) == "pass" for n in names), [n for n in names if found.get(n) != "pass"]


def test_criterion_01_nucleus(capsys):
    t0 = time.perf_counter()
    g = SelfSimilarGroup(TWIN_SPEC)
    nuc = g.nucleus()
    ok = len(nuc) == 5 and all(sum(g.equals(s, x) for x in nuc) == 1 for s in ("", "a", "b", "c", "d"))
    report(capsys, 1, ok, time.perf_counter() - t0, 1, f"nucleus {[x or '1' for x in nuc]}")


def test_criterion_02_dihedral(capsys):
    t0 = time.perf_counter()
    g = SelfSimilarGroup(TWIN_SPEC)
    ok = g.is_trivial(parse("(ad)^4")) and not g.is_trivial(parse("(ad)^2")) and g.element_order("ad") == 4
    report(capsys, 2, ok, time.perf_counter() - t0, 1, "(ad)^4 = 1, (ad)^2 != 1, ord(ad) = 4")


def test_criterion_03_branching(capsys):
    rep = suite_branching()
    ok, bad = statuses(rep, [c.name for c in rep.checks[:6]])
    report(capsys, 3, ok and rep.passed, rep.elapsed_ms / 1000, 5,
           "five identities lhs = 1*k and stab(3) <= K" + (f"; failing {bad}" if bad else ""),
           [rep.checks[5].detail])


def test_criterion_04_indices(capsys):
    rep = suite_indices()
    names = [
        "[G:K] = 16", "[G:B] = 8", "[G:A] = 16", "[G:C] = 64", "[G:[K,G]] = 128",
        "K/[K,G] = C4 x C2", "K/C cyclic of order 4 generated by bcd", "K/(X*K) cyclic of order 4",
    ]
    ok, bad = statuses(rep, names)
    detail = {c.name: c.detail for c in rep.checks}
    report(capsys, 4, ok and rep.passed, rep.elapsed_ms / 1000, 60,
           "indices 16, 8, 16, 64, 128; K/[K,G] = C4 x C2; K/C = C4 = <bcd>; K/(X*K) = C4"
           + (f"; failing {bad}" if bad else ""),
           [f"[G:K] {detail['[G:K] = 16']}", f"[G:A] {detail['[G:A] = 16']}",
            f"[G:A] {detail['A does not contain stab(n)']}"])


def test_criterion_05_k_abelianization(capsys):
    t0 = time.perf_counter()
    germ = k_abelianization((3, 4, 5))
    elapsed = time.perf_counter() - t0
    level = k_abelianization((5, 6, 7), kind="level")
    ok = stabilized(germ) and germ[-1] == K_AB
    report(capsys, 5, ok, elapsed, 300,
           f"K^ab {germ[-1]} at germ quotients G/(X^n*C), n = 3, 4, 5: {germ}",
           [f"level quotients G/stab(n), n = 5, 6, 7 give {level}: they cannot see K^ab"])


def test_criterion_06_presentation(capsys):
    t0 = time.perf_counter()
    r1, r2 = verify_relators(FAMILY_I, 3), verify_relators(FAMILY_II, 3)
    endo = verify_phi_endomorphism()
    ok = r1.passed and r2.passed and endo.passed
    report(capsys, 6, ok, time.perf_counter() - t0, 30,
           f"{len(r1.checks) + len(r2.checks)} iterated relators trivial; phi(k) = 1*k for 5 generators of K",
           ["third family (ii) relator used in the form [(c b^a)^a,(c b^a)^w]"])


def test_criterion_07_germ_homomorphism(capsys):
    rep = suite_germs(seed=42, pairs=500, samples=200)
    names = ["Gamma relations", "Gamma associative", "pi multiplicative", "|pi(G)| = 64", "pi kills C",
             "pi_1 kills X^1*C", "pi_2 kills X^2*C", "pi_0 non-trivial off the kernel",
             "pi_1 non-trivial off the kernel", "pi_2 non-trivial off the kernel"]
    ok, bad = statuses(rep, names)
    report(capsys, 7, ok, rep.elapsed_ms / 1000, 60,
           "|Gamma| = 64, pi multiplicative on 500 pairs, |pi(G)| = 64, ker pi_n contains X^n*C"
           + (f"; failing {bad}" if bad else ""))


def test_criterion_08_tables(capsys):
    rep = suite_germs(seed=42, pairs=10, samples=200)
    table = [c for c in rep.checks if c.name.startswith("table ")]
    ok = len(table) == 44 and all(c.status == "pass" for c in table)
    report(capsys, 8, ok, rep.elapsed_ms / 1000, 60,
           f"{len(table)} table entries hold on 200 seeded words (24 functional, 12 f_i, 8 e/f)")


def test_criterion_09_lower_central_series(capsys):
    rep = suite_lcs(levels=(3, 4, 5))
    literal, _ = lcs_ranks(Quotient("level", 7), 6)
    ranks = [c.detail for c in rep.checks if c.name == "germ 5: ranks k<=6"]
    report(capsys, 9, rep.passed, rep.elapsed_ms / 1000, 300,
           "ranks 4,4,4,2,4,4 for k <= 6 stable over germ quotients n = 3, 4, 5; generating sets for k <= 4; "
           "gamma5 = X*gamma3 at n = 3, 4, 5",
           [f"germ quotient n = 5 {ranks[0] if ranks else '?'}",
            f"level quotient G/stab(7) ranks {literal}: too coarse"])


def test_criterion_10_torsion(capsys):
    rep = suite_torsion(sample=200, max_len=12, seed=42)
    unknown = [c.name for c in rep.checks if c.status == "inconclusive"]
    report(capsys, 10, rep.passed and not rep.failures(), rep.elapsed_ms / 1000, 120,
           f"200 words of length <= 12: no failures, {len(unknown)} unknown",
           [rep.checks[-1].detail] + [f"unknown: {u}" for u in unknown])


def test_criterion_11_identities(capsys):
    t0 = time.perf_counter()
    ok = all(free_product_identity(l, r) for l, r in FREE_PRODUCT_IDENTITIES)
    report(capsys, 11, ok, time.perf_counter() - t0, 1, "four conjugacy identities hold in C2*C2*C2*C2")
