import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cablejones.asymptotics import (
    CALIBRATION_SIGNALS,
    CSV_HEADER,
    ApplicabilityWarning,
    PlantedSignal,
    ScanTable,
    calibration_suite,
    choose_method,
    d_n_factor,
    envelope_max,
    log_slope,
    period_candidates,
    residue_class_fit,
    scan,
    sidecar_path,
    synthetic_table,
    vc_limit_check,
)
from cablejones.errors import InsufficientData, InvalidParams
from cablejones.jones import IteratedCableParams, Method

KNOT = IteratedCableParams(2, 13, 2, 3)
finite = dict(allow_nan=False, allow_infinity=False)


def test_method_policy():
    assert choose_method(KNOT, 5) is Method.EXACT
    assert choose_method(KNOT, 100) is Method.ANALYTIC
    assert choose_method(IteratedCableParams(1, 6, 2, 3), 100) is Method.EXACT
    with pytest.raises(InvalidParams):
        choose_method(KNOT, 5, "fast")


def test_d_n_factor_value():
    d = complex(d_n_factor(KNOT, 1))
    # alpha = 11 odd: sign flips at odd N
    assert abs(d + np.exp(2j * math.pi / 4)) < 1e-15


def test_scan_roundtrip(tmp_path):
    out = tmp_path / "s.csv"
    table = scan(KNOT, 0, 12, out=out)
    assert out.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    assert sidecar_path(out).exists()
    back = ScanTable.read(out)
    assert back.params == KNOT
    assert list(back.Ns()) == list(range(13))
    assert np.array_equal(back.kappas(), table.kappas())


def test_scan_resume_keeps_rows(tmp_path):
    out = tmp_path / "s.csv"
    scan(KNOT, 0, 20, out=out, crossover=5)
    full = out.read_bytes()
    lines = full.decode().splitlines()
    out.write_text("\n".join(lines[:8]) + "\n")
    scan(KNOT, 0, 20, out=out, resume=True, crossover=5)
    assert out.read_bytes() == full


def test_scan_rejects_other_params_on_resume(tmp_path):
    out = tmp_path / "s.csv"
    scan(KNOT, 0, 3, out=out)
    with pytest.raises(InvalidParams):
        scan(IteratedCableParams(3, 31, 2, 5), 0, 3, out=out, resume=True)


def test_scan_parallel_matches_serial():
    a = scan(KNOT, 30, 60, stride=3, jobs=2)
    b = scan(KNOT, 30, 60, stride=3)
    assert np.array_equal(a.kappas(), b.kappas())


def test_scan_warns_outside_hypothesis():
    with pytest.warns(ApplicabilityWarning, match="beta\\*gamma>0"):
        scan(IteratedCableParams(2, 11, 2, 3), 1, 3)


def test_scan_validation():
    with pytest.raises(InvalidParams):
        scan(KNOT, 5, 2)


def test_read_malformed(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text(",".join(CSV_HEADER) + "\n1,abc,0,0,0,exact,128,0\n")
    with pytest.raises(ValueError):
        ScanTable.read(p)
    p.write_text("x,y\n")
    with pytest.raises(ValueError):
        ScanTable.read(p)


def test_unsorted_table_rejected():
    t = synthetic_table(lambda N: 1.0, 1, 3)
    with pytest.raises(ValueError):
        ScanTable(None, t.samples[::-1])


def test_growth_helpers():
    t = synthetic_table(lambda N: math.exp(0.5 * N), 10, 60)
    assert abs(log_slope(t, 10, 60) - 0.5) < 1e-12
    assert abs(envelope_max(t, 10, 60) - 0.5) < 1e-12
    with pytest.raises(InsufficientData):
        log_slope(t, 100, 200)
    slope, decreasing = vc_limit_check(synthetic_table(lambda N: N**2.0, 10, 200))
    assert abs(slope) < 0.02 and decreasing


def test_period_candidates_include_phase_period():
    c = period_candidates(KNOT)
    assert 1 in c and 312 in c and all(t <= 400 for t in c)


def test_calibration_suite():
    for row in calibration_suite():
        assert row["ok"], row


def test_fit_insufficient():
    with pytest.raises(InsufficientData):
        residue_class_fit(synthetic_table(lambda N: 1.0, 1, 5))
    with pytest.raises(InsufficientData):
        residue_class_fit(ScanTable(None, []))


def test_robust_fit_tolerates_outlier():
    sig = PlantedSignal(1.0, (1.0, 3.0))
    t = synthetic_table(lambda N: sig(N) * (50 if N == 150 else 1), 100, 400)
    rep = residue_class_fit(t, [1, 2], robust=True)
    assert rep.period_candidate == 2
    assert all(abs(c.alpha_hat - 1.0) < 1e-6 for c in rep.per_class)


@given(
    st.floats(-2, 3, **finite),
    st.lists(st.floats(0.2, 5, **finite), min_size=1, max_size=6),
    st.floats(0.1, 10, **finite),
)
def test_fit_stable_under_rescaling(alpha, mods, scale):
    sig = PlantedSignal(alpha, tuple(mods))
    a = residue_class_fit(synthetic_table(sig, 100, 500), range(1, 8))
    b = residue_class_fit(synthetic_table(lambda N: scale * sig(N), 100, 500), range(1, 8))
    assert a.period_candidate == b.period_candidate
    for x, y in zip(a.per_class, b.per_class):
        assert abs(x.alpha_hat - y.alpha_hat) < 1e-8
        assert abs(x.alpha_hat - alpha) < 1e-8


def test_fit_report_json():
    rep = residue_class_fit(synthetic_table(CALIBRATION_SIGNALS[0], 100, 300), [1, 2, 3])
    js = rep.to_json()
    assert js["period_candidate"] == 2 and len(js["per_class"]) == 2
    assert "T=2" in rep.summary()


def test_pure_phase_has_zero_exponent():
    rep = residue_class_fit(synthetic_table(lambda N: 1j**N, 100, 400), [1, 2, 4])
    assert all(abs(c.alpha_hat) < 1e-10 for c in rep.per_class)
