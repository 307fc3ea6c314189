import json

import pytest

from cablejones.verify import SUITES, Check, Report, run_suite


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("everything")


def test_report_failure_listing():
    r = Report("x", [Check("a", True), Check("b", False)])
    assert not r.passed and r.failed == ["b"]
    json.dumps(r.to_json(timings=True))


@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes_and_is_deterministic(suite):
    a = run_suite(suite).to_json()
    assert a["passed"], [c for c in a["checks"] if not c["passed"]]
    if suite in ("skein", "lemmas"):
        assert json.dumps(a) == json.dumps(run_suite(suite).to_json())


def test_lemma_half_line_value():
    rep = run_suite("lemmas")
    c = next(c for c in rep.checks if c.name == "half_line_above")
    assert c.abs_err < 1e-10
