from fractions import Fraction

import pytest
from mpmath import mpf

from ellint import verifier as V
from ellint.errors import HarnessSelfTestError, InvalidParameter, NoSuchClaim
from ellint.report import GridSpec, VerificationReport

BITS = 128
SMALL = GridSpec(200)


def test_monotone_pass_and_reverse_fail():
    assert V.verify_monotone("f", SMALL, BITS).status == "pass"
    rep = V.verify_monotone("g2", SMALL, BITS)
    assert rep.status == "pass" and "decreasing" in rep.claim_id
    bad = V.verify_monotone("f", SMALL, BITS, direction="decreasing")
    assert bad.status == "fail" and bad.witness is not None


def test_range_with_endpoint_extrapolation():
    rep = V.verify_range("h4", SMALL, BITS)
    assert rep.passed, rep.note


def test_convexity_examples():
    grid = V.convexity_grid(200)
    assert V.verify_convexity("h1", grid, 192).passed
    assert V.verify_convexity("g:1/4", grid, BITS).passed
    assert V.verify_convexity("g:1/320", grid, BITS).passed


def test_convexity_needs_uniform_grid():
    with pytest.raises(InvalidParameter):
        V.verify_convexity("h1", SMALL, BITS)


def test_missing_claims():
    with pytest.raises(NoSuchClaim):
        V.verify_convexity("f2", V.convexity_grid(50), BITS)
    with pytest.raises(NoSuchClaim):
        V.verify_monotone("g:1/100", SMALL, BITS)


def test_sequences():
    assert V.verify_sequence("d", "inc", 500).passed
    assert V.verify_sequence("a_tilde", "pos", 200).passed
    bad = V.verify_sequence("c", "inc", 10)
    assert bad.status == "fail" and bad.witness[0] == 0


def test_series_coefficient_mutation():
    printed = list(V.REFERENCE_COEFFS["f"])
    printed[1] = Fraction(518, 201600)
    rep = V.verify_series_coeffs("f", printed)
    assert rep.status == "fail" and rep.witness[0] == 1
    assert V.verify_series_coeffs("h12").passed


def test_negative_controls_all_fail():
    reps = V.negative_controls(BITS)
    assert len(reps) == 3 and all(r.status == "fail" for r in reps)
    V.check_controls(reps)


def test_harness_aborts_on_passing_control():
    fake = VerificationReport("control-x", "pass", BITS)
    with pytest.raises(HarnessSelfTestError):
        V.check_controls([fake])


def test_fail_report_requires_witness():
    with pytest.raises(InvalidParameter):
        VerificationReport("x", "fail", BITS)


def test_report_determinism_and_json():
    a = V.verify_monotone("f1", SMALL, BITS).to_json()
    b = V.verify_monotone("f1", SMALL, BITS).to_json()
    a.pop("elapsed_ms"), b.pop("elapsed_ms")
    assert a == b
    assert isinstance(a["min_margin"], str)


def test_claim_filter_and_ordering():
    reps = V.run_all("acceptance", BITS, SMALL, claim="coeffs-")
    ids = [r.claim_id for r in reps if not r.claim_id.startswith("control-")]
    assert ids == sorted(ids) and len(ids) == 4
    assert V.aggregate_ok(reps)


def test_grid_spec_validation():
    with pytest.raises(InvalidParameter):
        GridSpec(8)
    with pytest.raises(InvalidParameter):
        GridSpec(100, 0.5, 0.4)
    pts = GridSpec(10_000).points()
    assert len(pts) == 10_000 and all(0 < p < 1 for p in pts)
    assert pts == sorted(pts)
