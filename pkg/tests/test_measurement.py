"""CSV ingestion contract and the line-width stability gate."""

import numpy as np
import pytest

from dqwitness.errors import (
    InsufficientRows,
    MalformedHeader,
    NegativeValue,
    NonMonotonicTime,
)
from dqwitness.measurement import (
    MeasurementSeries,
    ingest,
    ingest_text,
    stability_gate,
)


def make_series(t2_values, f_dq=None, mt=None):
    n = len(t2_values)
    return MeasurementSeries(
        times=np.arange(n, dtype=float),
        f_dq=np.array(f_dq if f_dq is not None else [0.02] * n),
        t2_star=np.array(t2_values, dtype=float),
        mt_ratio=None if mt is None else np.array(mt, dtype=float),
    )


class TestIngest:
    def test_happy_path(self):
        series = ingest_text(
            "time_s,f_dq,t2_star_s\n0.0,0.01,0.045\n0.1,0.02,0.046\n0.2,0.15,0.044\n"
        )
        assert len(series) == 3
        np.testing.assert_allclose(series.times, [0.0, 0.1, 0.2])
        np.testing.assert_allclose(series.f_dq, [0.01, 0.02, 0.15])
        assert series.mt_ratio is None
        assert series.skipped == ()

    def test_optional_mt_column(self):
        series = ingest_text(
            "time_s,f_dq,t2_star_s,mt_ratio\n0,0.01,0.045,0.30\n1,0.02,0.046,0.31\n"
        )
        np.testing.assert_allclose(series.mt_ratio, [0.30, 0.31])

    def test_missing_column_is_malformed(self):
        with pytest.raises(MalformedHeader):
            ingest_text("time_s,f_dq\n0,0.01\n")

    def test_wrong_fourth_column_is_malformed(self):
        with pytest.raises(MalformedHeader):
            ingest_text("time_s,f_dq,t2_star_s,bogus\n0,0.01,0.045,1\n")

    def test_empty_input_is_malformed(self):
        with pytest.raises(MalformedHeader):
            ingest_text("")

    def test_zero_t2_names_the_line(self):
        with pytest.raises(NegativeValue) as err:
            ingest_text("time_s,f_dq,t2_star_s\n0,0.01,0.045\n1,0.01,0.0\n")
        assert "line 3" in str(err.value)

    def test_negative_f_dq_rejected(self):
        with pytest.raises(NegativeValue) as err:
            ingest_text("time_s,f_dq,t2_star_s\n0,-0.01,0.045\n")
        assert "line 2" in str(err.value)

    def test_mt_out_of_range_rejected(self):
        with pytest.raises(NegativeValue):
            ingest_text("time_s,f_dq,t2_star_s,mt_ratio\n0,0.01,0.045,1.2\n")

    def test_shuffled_rows_rejected_not_reordered(self):
        with pytest.raises(NonMonotonicTime) as err:
            ingest_text(
                "time_s,f_dq,t2_star_s\n0,0.01,0.045\n2,0.01,0.045\n1,0.01,0.045\n"
            )
        assert "line 4" in str(err.value)

    def test_blank_and_mangled_rows_are_skipped_with_diagnostics(self):
        series = ingest_text(
            "time_s,f_dq,t2_star_s\n0,0.01,0.045\n\nnot,a,number\n1,0.02,0.046\n"
        )
        assert len(series) == 2
        assert len(series.skipped) == 2
        assert any("line 3" in msg for msg in series.skipped)
        assert any("line 4" in msg for msg in series.skipped)

    def test_path_input(self, tmp_path):
        path = tmp_path / "series.csv"
        path.write_text("time_s,f_dq,t2_star_s\n0,0.01,0.045\n1,0.01,0.045\n")
        assert len(ingest(path)) == 2


class TestStabilityGate:
    def test_constant_series_is_stable_with_zero_cv(self):
        gate = stability_gate(make_series([0.045] * 10))
        assert gate.status == "stable"
        assert gate.t2_cv == 0.0
        assert gate.max_rel_deviation == 0.0
        assert gate.mt_cv is None

    def test_single_drop_flips_unstable(self):
        t2 = [0.045] * 10
        t2[6] = 0.0225  # 50 percent drop
        gate = stability_gate(make_series(t2))
        assert gate.status == "unstable"
        assert gate.max_rel_deviation == pytest.approx(0.5, abs=1e-12)

    def test_two_rows_insufficient(self):
        with pytest.raises(InsufficientRows):
            stability_gate(make_series([0.045, 0.045]))

    def test_mild_jitter_stays_stable(self):
        rng = np.random.default_rng(5)
        t2 = 0.045 * (1.0 + 0.01 * rng.standard_normal(20))
        gate = stability_gate(make_series(t2))
        assert gate.status == "stable"
        assert gate.t2_cv <= 0.05

    def test_mt_column_participates_in_gate(self):
        stable = stability_gate(make_series([0.045] * 6, mt=[0.3] * 6))
        assert stable.status == "stable"
        assert stable.mt_cv == 0.0
        jumpy = stability_gate(
            make_series([0.045] * 6, mt=[0.3, 0.3, 0.8, 0.3, 0.3, 0.3])
        )
        assert jumpy.status == "unstable"
        assert jumpy.mt_cv > 0.05

    def test_thresholds_are_echoed_and_adjustable(self):
        t2 = [0.045] * 10
        t2[6] = 0.040
        tight = stability_gate(make_series(t2), cv_threshold=0.001)
        assert tight.status == "unstable"
        assert tight.cv_threshold == 0.001
        loose = stability_gate(make_series(t2), cv_threshold=0.5, dev_threshold=0.5)
        assert loose.status == "stable"
