import json

import pytest

from twintree import GRIGORCHUK, parse
from twintree.verify import (
    A,
    B,
    K,
    KG,
    SUITES,
    Quotient,
    SuiteReport,
    combined_stab3_in_k,
    k_abelianization,
    lcs_ranks,
    stabilized,
    subgroup_germ_chain,
    subgroup_level_chain,
    suite_branching,
    suite_germs,
    suite_indices,
    suite_lcs,
    suite_presentation,
    suite_torsion,
)


def test_named_subgroup_level_chains():
    q3 = Quotient("level", 3)
    assert q3.G.order() // subgroup_level_chain(K, 3).order() == 16
    assert subgroup_level_chain(A, 1).order() == 2
    assert q3.index(B) == 8


def test_quotient_validation():
    with pytest.raises(ValueError):
        Quotient("level", 0)
    with pytest.raises(ValueError):
        Quotient("other", 2)
    assert Quotient("germ", 0).G.order() == 64


def test_stab3_in_k():
    ok, index = combined_stab3_in_k(3)
    assert ok and index == 128
    with pytest.raises(ValueError):
        combined_stab3_in_k(2)


def test_stabilized():
    assert stabilized([1, 2, 2, 2])
    assert not stabilized([2, 2])
    assert not stabilized([1, 2, 2])


def test_branching_suite():
    rep = suite_branching()
    assert rep.passed, rep.to_text()
    assert len(rep.checks) == 10


def test_perturbed_identity_fails():
    from twintree import TWIN
    l, r, s = TWIN.decompose(parse("[b,c]"))
    assert not (s == 0 and TWIN.is_trivial(l) and TWIN.equals(r, parse("[a,b]")))


def test_indices_suite():
    rep = suite_indices()
    assert rep.passed, rep.to_text()


def test_presentation_suite():
    assert suite_presentation().passed


def test_germs_suite():
    rep = suite_germs(seed=7, pairs=100, samples=40)
    assert rep.passed, rep.to_text()
    assert rep.seed == 7


def test_torsion_suite():
    rep = suite_torsion(sample=60)
    assert rep.passed
    assert not any(c.status == "inconclusive" for c in rep.checks)


def test_torsion_cap_reports_inconclusive():
    rep = suite_torsion(sample=30, cap=2)
    assert rep.passed
    assert any(c.status == "inconclusive" for c in rep.checks)


def test_torsion_grigorchuk():
    assert suite_torsion(sample=40, group=GRIGORCHUK).passed


def test_lcs_small_germ_levels():
    rep = suite_lcs(levels=(1, 2, 3), prefix=2)
    assert rep.passed, rep.to_text()
    assert not suite_lcs(levels=(1, 2, 3), prefix=4).passed


def test_germ_quotient_lcs_prefix():
    ranks, _ = lcs_ranks(Quotient("germ", 3), 9)
    assert ranks == [4, 4, 4, 2, 4, 4, 2, 2, 2]


def test_level_quotients_undercount():
    # G/stab(n) has abelianization rank 3: C is not a congruence subgroup
    ranks, _ = lcs_ranks(Quotient("level", 6), 6)
    assert ranks[:4] == [3, 2, 2, 1]
    assert k_abelianization((5, 6), kind="level") == [[2, 4, 8], [2, 4, 8]]
    assert Quotient("level", 5).index(A) == 4


def test_k_abelianization_germ():
    assert k_abelianization((2, 3)) == [[2, 4, 4, 4, 8]] * 2


def test_germ_chain_helper():
    assert Quotient("germ", 1).G.order() // subgroup_germ_chain(KG, 1).order() == 128


def test_report_json_schema():
    rep = suite_presentation()
    data = json.loads(rep.to_json())
    assert set(data) == {"suite", "seed", "checks", "elapsed_ms"}
    assert data["suite"] == "presentation" and data["seed"] is None
    assert all(set(c) == {"name", "status", "detail"} for c in data["checks"])
    assert all(c["status"] in ("pass", "fail", "inconclusive") for c in data["checks"])
    assert isinstance(data["elapsed_ms"], int)


def test_report_deterministic_apart_from_timing():
    r1, r2 = suite_torsion(sample=50), suite_torsion(sample=50)
    r1.elapsed_ms = r2.elapsed_ms = 0
    assert r1.to_json() == r2.to_json()


def test_failing_report():
    rep = SuiteReport("x")
    rep.add("ok", True)
    rep.add("bad", False, "why")
    assert not rep.passed and [c.name for c in rep.failures()] == ["bad"]
    assert "[fail] bad: why" in rep.to_text()


def test_suite_registry():
    assert set(SUITES) == {"branching", "indices", "lcs", "germs", "presentation", "torsion"}
