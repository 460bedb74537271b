import copy

import pytest

from torsionfree import algebra as alg
from torsionfree import certs
from torsionfree.cases import named_ring
from torsionfree.homcore import is_k_torsionfree
from torsionfree.verify import (
    REGISTRY,
    Settings,
    check_ext_closed,
    check_lemma_3_3,
    check_theorem36_n1,
    ext_closed_verdict,
    quasi_k_gorenstein,
    run_check,
)
from torsionfree.zpid import ZmModule

SPEC_CHECKS = {"lemma_3_3", "theorem_3_6", "tf_transfer", "lemma_4_3", "lemma_5_1", "lemma_5_2",
               "ext_closed", "theorem_5_9", "quasi_k_gorenstein", "k_gorenstein", "arh", "prop_6_6",
               "rep_evidence", "cm_evidence", "theorem36_n1", "cor48_2"}


def test_registry_contents():
    assert SPEC_CHECKS <= set(REGISTRY)
    assert "lemma_3_5" in REGISTRY


def test_shipped_cases_meet_expectations(shipped_reports):
    assert set(shipped_reports) >= {"dual_numbers", "skew_triangular", "example_ring", "rad_square_zero",
                                    "local_algebras", "integers"}
    for name, rep in shipped_reports.items():
        assert rep["totals"]["unexpected"] == 0, (name, [c for c in rep["checks"] if c["outcome"] != "ok"])


def test_shipped_reports_replay(shipped_reports):
    for rep in shipped_reports.values():
        assert certs.replay_report(rep) == {"ok": True, "failures": []}


def test_every_registered_check_is_exercised(shipped_reports):
    seen = {c["check"] for rep in shipped_reports.values() for c in rep["checks"]}
    assert SPEC_CHECKS | {"lemma_3_5"} <= seen


def test_tampered_verdict_detected(shipped_reports):
    rep = copy.deepcopy(shipped_reports["dual_numbers"])
    rep["checks"][0]["verdict"] = "fail"
    out = certs.replay_report(rep)
    assert not out["ok"] and out["failures"][0]["reason"] == "digest mismatch"


def test_tampered_certificate_detected(shipped_reports):
    rep = copy.deepcopy(shipped_reports["integers"])
    target = next(c for chk in rep["checks"] for c in chk["certificates"] if c["kind"] == "z_ses")
    target["right"] = [7]
    rep["digest"] = certs.report_digest(rep)
    out = certs.replay_report(rep)
    assert not out["ok"] and all(f.get("reason") != "digest mismatch" for f in out["failures"])


def test_lemma_3_3_dual_numbers_passes():
    R, pi, _ = alg.dual_numbers(alg.ground_field(2))
    rep = run_check("lemma_3_3", {"phi": pi}, Settings(cap=3))
    assert rep.verdict == "pass" and rep.certificates
    assert all(certs.replay(c) for c in rep.certificates)


def test_ext_closed_counterexample_is_genuine():
    A = named_ring("f2_rad_square_zero")
    closed, ce, _ = ext_closed_verdict(A, 1, 4)
    assert not closed
    X, Z, Y = (alg.module_from_json(ce[k]) for k in ("X", "Z", "Y"))
    assert is_k_torsionfree(X, 1).verdict and is_k_torsionfree(Z, 1).verdict
    assert not is_k_torsionfree(Y, 1).verdict
    assert Y.dim == X.dim + Z.dim
    rep = check_ext_closed(A, 1, 4)
    assert rep.verdict == "fail" and all(certs.replay(c) for c in rep.certificates)
    assert check_ext_closed(A, 2, 4).verdict == "pass"


def test_quasi_gorenstein_reports_holds():
    rep = quasi_k_gorenstein(named_ring("f2_dual_numbers"), 2)
    assert rep.verdict == "pass" and rep.summary["holds"] is True
    rep = quasi_k_gorenstein(named_ring("f2_rad_square_zero"), 2)
    assert rep.summary["holds"] is False


def test_theorem36_n1_check_report():
    rep = check_theorem36_n1(4, ZmModule(4, (2,)))
    assert rep.verdict == "pass"
    assert all(certs.replay(c) for c in rep.certificates)


def test_run_check_converts_unmet_hypotheses():
    # no module over the rad-square-zero ring meets the n = 1 hypothesis at cap 3
    rep = run_check("lemma_3_5", {"ring": named_ring("f2_rad_square_zero"), "n": 1}, Settings(cap=3))
    assert rep.verdict == "skipped" and rep.reason
    # R = Λ[x]/(x^2) -> Λ meets the degree-0 hypotheses for a non-local Λ
    phi = alg.dual_numbers(named_ring("f3_triangular"))[1]
    rep = run_check("theorem_3_6", {"phi": phi}, Settings(cap=2))
    assert rep.verdict == "pass" and rep.summary["modules"] == 6


def test_unknown_check_name():
    with pytest.raises(KeyError):
        run_check("no_such_check", {})
