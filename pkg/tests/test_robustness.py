import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avrobust.metrics import Ordering3, WerResult
from avrobust.robustness import (
    FixtureError,
    ResultMatrix,
    RobustnessVerdict,
    check_robust,
    check_test_time,
    check_train_time,
    claim_checks,
    corollary_check,
    load_expected_verdicts,
    load_fixture,
    render_report,
    verdicts_csv,
)
from avrobust.suites import standard_suite

RATE = standard_suite("rate")
BER_UTT = standard_suite("berUtt")


def matrix(suite, av_wers, baseline, ci=0.0, av_cis=None, **meta):
    labels = [d.label for d in suite.distributions]
    if av_cis is None:
        av_cis = [ci] * len(av_wers)
    av = {lab: WerResult(w, c) for lab, w, c in zip(labels, av_wers, av_cis)}
    return ResultMatrix(suite, av, baseline, **meta)


class TestTrainTime:
    def test_cascade_row_clean_of_violations(self):
        m = matrix(RATE, [26.12, 26.13, 26.25, 26.72, 28.73, 31.08],
                   WerResult(33.54, 0.43),
                   av_cis=[0.36, 0.36, 0.36, 0.37, 0.39, 0.40])
        assert check_train_time(m) == []

    def test_vanilla_violates_at_full_drop(self):
        m = matrix(RATE, [24.96, 24.94, 24.95, 25.08, 25.90, 35.51],
                   WerResult(33.54, 0.43),
                   av_cis=[0.35, 0.35, 0.35, 0.35, 0.35, 0.43])
        violations = check_train_time(m)
        assert len(violations) == 1
        assert violations[0].kind == "train-time"
        assert violations[0].labels[0] == "empty"

    def test_equal_to_baseline_everywhere_is_fine(self):
        base = WerResult(20.0, 0.0)
        m = matrix(RATE, [20.0] * 6, base)
        assert check_train_time(m) == []

    def test_missing_result_names_label(self):
        m = matrix(RATE, [20.0] * 6, WerResult(20.0))
        del m.av_results["rate@drop0.5"]
        with pytest.raises(ValueError, match="rate@drop0.5"):
            check_train_time(m)


class TestTestTime:
    def test_dropout_frame_dip_detected(self):
        m = matrix(RATE, [27.58, 27.47, 27.11, 26.51, 27.56, 32.54],
                   WerResult(33.54, 0.43),
                   av_cis=[0.37, 0.37, 0.36, 0.36, 0.38, 0.41])
        violations = check_test_time(m)
        pairs = {v.labels for v in violations}
        # The printed counterexamples: full video strictly above two
        # more-degraded points beyond their intervals.
        assert ("full", "rate@drop0.03125") in pairs
        assert ("full", "rate@drop0.125") in pairs

    def test_monotone_chain_has_no_violations(self):
        m = matrix(RATE, [26.12, 26.13, 26.25, 26.72, 28.73, 31.08],
                   WerResult(33.54, 0.43),
                   av_cis=[0.36, 0.36, 0.36, 0.37, 0.39, 0.40])
        assert check_test_time(m) == []

    def test_constant_wer_has_no_violations(self):
        m = matrix(RATE, [25.0] * 6, WerResult(30.0, 0.0))
        assert check_test_time(m) == []


class TestCheckRobust:
    def test_two_pass_row_robust(self):
        m = matrix(RATE, [30.06, 30.05, 30.11, 30.47, 31.91, 33.54],
                   WerResult(33.54, 0.43),
                   av_cis=[0.42, 0.42, 0.42, 0.43, 0.43, 0.43])
        verdict = check_robust(m)
        assert verdict.robust
        assert verdict.violations == []

    def test_dropout_frame_row_not_robust(self):
        m = matrix(RATE, [27.58, 27.47, 27.11, 26.51, 27.56, 32.54],
                   WerResult(33.54, 0.43),
                   av_cis=[0.37, 0.37, 0.36, 0.36, 0.38, 0.41])
        verdict = check_robust(m)
        assert not verdict.robust
        assert not verdict.test_time_ok
        assert verdict.train_time_ok

    def test_flags_must_match_violations(self):
        with pytest.raises(ValueError, match="disagree"):
            RobustnessVerdict(train_time_ok=False, test_time_ok=True, violations=[])


class TestCorollary:
    def test_robust_rows_pass(self):
        m = matrix(RATE, [30.06, 30.05, 30.11, 30.47, 31.91, 33.54],
                   WerResult(33.54, 0.43), av_cis=[0.43] * 6)
        assert corollary_check(m, check_robust(m))

    def test_non_robust_rows_vacuous(self):
        m = matrix(RATE, [40.0] * 6, WerResult(30.0, 0.0))
        verdict = check_robust(m)
        assert not verdict.robust
        assert corollary_check(m, verdict)

    def test_randomized_search_finds_no_counterexample(self):
        rng = np.random.default_rng(123)
        labels = [d.label for d in BER_UTT.distributions]
        for _ in range(300):
            base = WerResult(float(rng.uniform(10, 40)), float(rng.uniform(0, 1)))
            av = {lab: WerResult(float(rng.uniform(10, 40)), float(rng.uniform(0, 1)))
                  for lab in labels}
            m = ResultMatrix(BER_UTT, av, base)
            assert corollary_check(m, check_robust(m))


class TestClaimChecks:
    def test_consistent_row(self):
        r = lambda w: WerResult(w, 0.0)
        assert claim_checks(r(26.12), r(31.08), r(33.54)) == (True, True, True)

    def test_row_failing_third_claim(self):
        r = lambda w: WerResult(w, 0.0)
        assert claim_checks(r(20.5), r(24.0), r(21.5)) == (True, True, False)

    def test_all_equal(self):
        r = WerResult(10.0, 0.0)
        assert claim_checks(r, r, r) == (True, True, True)


class TestShrinkingIntervals:
    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.floats(min_value=5, max_value=50), min_size=5, max_size=5),
           st.lists(st.floats(min_value=0, max_value=2), min_size=5, max_size=5),
           st.floats(min_value=5, max_value=50),
           st.floats(min_value=0, max_value=2))
    def test_zeroing_halfwidths_only_adds_violations(self, wers, cis, base_wer, base_ci):
        m = matrix(BER_UTT, wers, WerResult(base_wer, base_ci), av_cis=cis)
        zeroed = matrix(BER_UTT, wers, WerResult(base_wer, 0.0),
                        av_cis=[0.0] * 5)
        before = {(v.kind, v.labels) for v in check_robust(m).violations}
        after = {(v.kind, v.labels) for v in check_robust(zeroed).violations}
        assert before <= after


class TestFixtureIo:
    def write(self, tmp_path, text, name="f.csv"):
        path = tmp_path / name
        path.write_text(text)
        return path

    HEADER = "architecture,method,noise,suite,drop_param,wer,ci_halfwidth\n"

    def test_small_round_trip(self, tmp_path):
        rows = [self.HEADER.strip(),
                "A,AudioBaseline,0db,utt,0,30.0,0.4",
                "A,Vanilla,0db,utt,0,25.0,0.3",
                "A,Vanilla,0db,utt,1,35.0,0.4"]
        path = self.write(tmp_path, "\n".join(rows) + "\n")
        matrices = load_fixture(path)
        assert len(matrices) == 1
        m = matrices[0]
        assert m.method == "Vanilla"
        assert m.ao_result == WerResult(30.0, 0.4)
        assert not check_robust(m).robust

    def test_empty_file_rejected(self, tmp_path):
        with pytest.raises(FixtureError, match="empty"):
            load_fixture(self.write(tmp_path, ""))

    def test_missing_column_is_malformed(self, tmp_path):
        text = self.HEADER + "A,Vanilla,0db,utt,0,25.0\n"
        with pytest.raises(FixtureError, match="malformed row"):
            load_fixture(self.write(tmp_path, text))

    def test_missing_baseline_rejected(self, tmp_path):
        text = self.HEADER + "A,Vanilla,0db,utt,0,25.0,0.3\nA,Vanilla,0db,utt,1,26.0,0.3\n"
        with pytest.raises(FixtureError, match="AudioBaseline"):
            load_fixture(self.write(tmp_path, text))

    def test_duplicate_cell_rejected(self, tmp_path):
        text = (self.HEADER
                + "A,AudioBaseline,0db,utt,0,30.0,0.4\n"
                + "A,Vanilla,0db,utt,0,25.0,0.3\n"
                + "A,Vanilla,0db,utt,0,26.0,0.3\n")
        with pytest.raises(FixtureError, match="duplicate"):
            load_fixture(self.write(tmp_path, text))

    def test_incomplete_grid_rejected(self, tmp_path):
        text = (self.HEADER
                + "A,AudioBaseline,0db,rate,0,30.0,0.4\n"
                + "A,Vanilla,0db,rate,0,25.0,0.3\n")
        with pytest.raises(FixtureError, match="no row for drop"):
            load_fixture(self.write(tmp_path, text))

    def test_bad_verdict_file(self, tmp_path):
        path = self.write(tmp_path, "architecture,method,noise,suite,robust\nA,V,0db,utt,maybe\n")
        with pytest.raises(FixtureError, match="yes or no"):
            load_expected_verdicts(path)


class TestPackagedFixtures:
    def test_every_printed_verdict_reproduced(self):
        from importlib.resources import files
        fixtures = files("avrobust") / "fixtures"
        matrices = load_fixture(str(fixtures / "paper_results.csv"))
        expected = load_expected_verdicts(str(fixtures / "paper_verdicts.csv"))
        by_key = {(m.architecture, m.method, m.noise, m.suite.name): m
                  for m in matrices}
        assert len(expected) == 120
        for key, flag in expected.items():
            assert check_robust(by_key[key]).robust == flag, key

    def test_report_renders(self):
        from importlib.resources import files
        fixtures = files("avrobust") / "fixtures"
        matrices = load_fixture(str(fixtures / "paper_results.csv"))
        subset = [m for m in matrices
                  if m.noise == "0db" and m.suite.name == "rate"
                  and m.architecture == "Conformer-CAT"]
        verdicts = [check_robust(m) for m in subset]
        report = render_report(subset, verdicts)
        assert "✗" in report and "✓" in report
        assert "35.51±0.43" in report
        csv_text = verdicts_csv(subset, verdicts)
        assert "Conformer-CAT,Vanilla,0db,rate,no" in csv_text
        assert "Conformer-CAT,CascadeUtt,0db,rate,yes" in csv_text


def test_identical_av_and_baseline_is_robust():
    base = WerResult(17.0, 0.2)
    m = matrix(BER_UTT, [17.0] * 5, base, av_cis=[0.2] * 5)
    assert check_robust(m).robust
