import json
from fractions import Fraction

import pytest
from sympy import primerange

from trunc_hgm.arith.fields import QuadExtField
from trunc_hgm.errors import ConfigError, HypothesisError
from trunc_hgm.reports import SUPERCONGRUENCE_CHECK, CongruenceReport, encode_value
from trunc_hgm.verify.supercongruence import (
    CM_J_INVARIANTS,
    supercongruence_check,
    supercongruence_range,
)
from trunc_hgm.verify.sweep import TRUNCATED, JPolicy, scan_range
from trunc_hgm.verify.theorem import (
    check_branch_proposition,
    theorem_instance,
    verify_chain,
    verify_theorem,
)


def test_anchor_instance():
    """p = 5, j0 = 2: a_5(E0) = -3, both sides 4 mod 5."""
    report = verify_theorem(2, 5)
    assert report.verdict == "pass"
    assert (report.lhs, report.rhs) == ("4", "4")
    assert report.branch == "inert"
    assert report.detail["a_p(E0)"] == -3
    assert report.ms is None


@pytest.mark.parametrize("j0, p", [(3, 5), (0, 7), (1728, 11), (Fraction(7, 5), 5)])
def test_skips_are_sound(j0, p):
    """Instances violating a hypothesis are skipped with a reason, never decided."""
    report = verify_theorem(j0, p)
    assert report.verdict == "skip"
    assert report.skip_reason
    assert report.lhs is None and report.rhs is None


def test_theorem_instance():
    """The branch follows the symbol of z0."""
    inst = theorem_instance(2, 5)
    assert inst.z0 == 1 - Fraction(1728, 2)
    assert inst.branch == "inert" and inst.sign == -1
    with pytest.raises(HypothesisError):
        theorem_instance(3, 5)


@pytest.mark.parametrize("p", list(primerange(5, 38)))
def test_theorem_small_primes(p):
    """Every admissible residue passes; the others are skipped."""
    for j0 in range(p):
        report = verify_theorem(j0, p)
        admissible = j0 % p != 0 and (j0 - 1728) % p != 0
        assert report.verdict == ("pass" if admissible else "skip"), f"p={p}, j0={j0}"


@pytest.mark.slow
def test_theorem_sweep_to_199():
    """Every admissible instance with p <= 199 passes; none fails."""
    reports = scan_range(5, 199)
    assert not [r for r in reports if r.failed]
    assert sum(r.passed for r in reports) > 0


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_chain_consistency(p):
    """Whenever the theorem passes, the checks its proof runs through pass too."""
    for j0 in range(1, p):
        chain = verify_chain(j0, p)
        if chain[0].passed:
            assert [r.check_id for r in chain[:2]] == ["theorem", "3.2"]
            assert chain[-1].check_id in ("final.4", "final.5")
            assert all(r.passed for r in chain), f"p={p}, j0={j0}: {[r.verdict for r in chain]}"
        else:
            assert chain[0].verdict == "skip"


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19, 23])
def test_branch_propositions(p):
    """final.4 / final.5 pass on their own branch and skip on the other."""
    for j0 in range(1, p):
        if (j0 - 1728) % p == 0:
            continue
        inst = theorem_instance(j0, p)
        other = "inert" if inst.branch == "split" else "split"
        assert check_branch_proposition(j0, p).passed
        assert check_branch_proposition(j0, p, inst.branch).passed
        assert check_branch_proposition(j0, p, other).verdict == "skip"
    with pytest.raises(ValueError):
        check_branch_proposition(2, 5, "ramified")


def test_scan_p5():
    """At p = 5, j0 in {1, 2, 4} pass and j0 in {0, 3} are skipped."""
    reports = scan_range(5, 5)
    assert [r.j0 for r in reports] == ["0", "1", "2", "3", "4"]
    assert [r.verdict for r in reports] == ["skip", "pass", "pass", "skip", "pass"]


def test_scan_explicit_and_empty():
    """An explicit j0 gives one report per prime; a range without primes gives none."""
    reports = scan_range(5, 13, JPolicy.explicit([2]))
    assert [r.p for r in reports] == [5, 7, 11, 13]
    assert scan_range(24, 28) == []
    with pytest.raises(ConfigError):
        scan_range(5, 3)
    with pytest.raises(ConfigError):
        scan_range(3, 7)


def test_scan_determinism():
    """Identical inputs, including the seed, give identical report vectors."""
    policy = JPolicy.random(4, seed=1)
    first = scan_range(5, 31, policy)
    second = scan_range(5, 31, policy, workers=2, executor="thread")
    assert first == second
    dump = lambda rs: json.dumps([r.to_record() for r in rs])  # noqa: E731
    assert dump(first) == dump(second)


def test_random_policy():
    """Seeded samples are sorted, distinct and depend only on (seed, p)."""
    policy = JPolicy.random(5, seed=7)
    js = policy.j_values(31)
    assert js == sorted(set(js)) and len(js) == 5
    assert all(1 <= j < 31 for j in js)
    assert JPolicy.random(5, seed=7).j_values(31) == js
    assert len(JPolicy.random(100).j_values(7)) == 6
    with pytest.raises(ConfigError):
        JPolicy("sometimes")
    with pytest.raises(ConfigError):
        JPolicy.random(0)


def test_scan_truncation():
    """An instance cap or a point-count bound ends the scan with a marker."""
    reports = scan_range(5, 13, max_instances=3)
    assert len(reports) == 4 and reports[-1].check_id == TRUNCATED
    assert reports[-1].verdict == "skip"

    bounded = scan_range(5, 11, bound=6)
    assert bounded[-1].check_id == TRUNCATED
    assert all(r.p == 5 for r in bounded[:5])
    assert sum(r.check_id == TRUNCATED for r in bounded) == 1


def test_scan_timing():
    """Timings are recorded only on request."""
    reports = scan_range(5, 7, JPolicy.explicit([2]), timing=True)
    assert all(r.ms is not None and r.ms >= 0 for r in reports)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17])
def test_supercongruence_mod_p_consistency(p):
    """The supercongruence check reduced mod p agrees with the theorem."""
    for j0 in range(1, p):
        report = supercongruence_check(j0, p)
        theorem = verify_theorem(j0, p)
        if theorem.verdict == "skip":
            assert report.verdict == "skip"
            continue
        assert report.detail["mod_p_agrees"]
        assert int(report.lhs) % p == int(theorem.lhs)
        assert report.detail["assumption"]


def test_supercongruence_cm_list():
    """The CM list runs without error; verdicts are informational."""
    assert len(CM_J_INVARIANTS) == 11
    reports = supercongruence_range(5, 29)
    assert len(reports) == len(CM_J_INVARIANTS) * 8
    assert all(r.check_id == SUPERCONGRUENCE_CHECK and not r.gating for r in reports)
    assert all(r.detail["mod_p_agrees"] for r in reports if r.verdict != "skip")


def test_report_record_round_trip():
    """Records survive JSON and rebuild equal reports."""
    reports = scan_range(5, 7) + [verify_theorem(3, 5)]
    records = json.loads(json.dumps([r.to_record() for r in reports]))
    assert [CongruenceReport.from_record(rec) for rec in records] == reports


def test_report_validation():
    """Skips need a reason and decided reports need both sides."""
    with pytest.raises(ValueError):
        CongruenceReport("theorem", 5, verdict="skip")
    with pytest.raises(ValueError):
        CongruenceReport("theorem", 5, verdict="pass")
    with pytest.raises(ValueError):
        CongruenceReport("theorem", 5, lhs="1", rhs="1", verdict="maybe")


def test_encode_value():
    """Field elements, vectors and long vectors encode canonically."""
    K = QuadExtField(7)
    assert encode_value(K(3, 2)) == "3+2*w"
    assert encode_value([K(1), K(0, 1)]) == "[1+0*w,0+1*w]"
    assert encode_value(Fraction(-3, 2)) == "-3/2"
    assert encode_value(True) == "true"
    assert encode_value(list(range(40))).startswith("vec(n=40,sha256=")


def test_sign_assumption_is_serialized():
    """The sign assumption of the mod p^2 comparison survives in JSON, where detail is dropped."""
    report = supercongruence_check(2, 7)
    record = json.loads(json.dumps(report.to_record()))
    assert record["check_id"] == "supercongruence.mod-p-sign"
    assert "detail" not in record
    skipped = json.loads(json.dumps(supercongruence_check(3, 5).to_record()))
    assert skipped["check_id"] == "supercongruence.mod-p-sign" and skipped["skip_reason"]
