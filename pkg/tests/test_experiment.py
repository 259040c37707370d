import csv
import io
import json

import numpy as np
import pytest

from eigloc.experiment import (
    CSV_FIELDS,
    run_batch,
    run_trial,
    summaries_json,
    summarize,
    sweep,
    trials_csv,
)
from eigloc.sbm import DegenerateModelError, SbmParams, gamma, xi_bar


def _recompute(s):
    done = [r for r in s.results if r.skipped is None]
    g = gamma(s.params["p_in"], s.params["p_out"])
    cos = np.mean([r.cos2_MZ >= g * g - s.epsilon for r in done])
    lam = np.mean([r.lambda1 >= (1 - s.lambda_slack) * s.mu_pred for r in done])
    gap = np.mean([r.rel_gap <= np.sqrt(1 - g * g) + s.epsilon for r in done])
    return cos, lam, gap


class TestTrial:
    def test_perfect_blocks(self):
        r = run_trial(SbmParams(20, 1.0, 0.0), 0)
        assert r.cos2_MZ == pytest.approx(1.0) and r.accuracy == 1.0
        assert r.skipped is None

    def test_deterministic(self):
        p = SbmParams(60, 0.8, 0.2)
        assert run_trial(p, 3) == run_trial(p, 3)

    def test_skipped_on_degenerate_sample(self):
        r = run_trial(SbmParams(8, 1.0, 1.0), 0)
        assert r.skipped and "zero" in r.skipped

    def test_ranges(self):
        r = run_trial(SbmParams(80, 0.6, 0.3), 1)
        assert 0 <= r.accuracy <= 1 and 0 <= r.cos2_MZ <= 1


class TestBatch:
    def test_single_trial_fractions(self):
        s = run_batch(SbmParams(40, 0.9, 0.1), 1)
        for f in (s.frac_cos_ok, s.frac_lambda_ok, s.frac_rel_gap_ok):
            assert f in (0.0, 1.0)

    def test_seeds_offset(self):
        s = run_batch(SbmParams(40, 0.9, 0.1, seed=10), 3)
        assert [r.seed for r in s.results] == [10, 11, 12]

    def test_threads_do_not_change_results(self):
        p = SbmParams(60, 0.8, 0.2, seed=4)
        a = run_batch(p, 6, threads=1)
        b = run_batch(p, 6, threads=4)
        assert a == b and a.results == b.results

    def test_summary_consistency(self):
        s = run_batch(SbmParams(80, 0.9, 0.05), 12)
        cos, lam, gap = _recompute(s)
        assert s.frac_cos_ok == cos and s.frac_lambda_ok == lam and s.frac_rel_gap_ok == gap
        assert s.gamma == gamma(0.9, 0.05) and s.xi_bar == xi_bar(s.gamma)
        assert s.completed + s.skipped == s.trials == 12

    def test_accuracy_predicate_excludes_gap_flag(self):
        p = SbmParams(40, 0.9, 0.1)
        results = [run_trial(p, 0)]
        flagged = results[0].__class__(**{**results[0].__dict__, "seed": 1,
                                          "accuracy": 0.0, "gap_flag": True})
        s = summarize(p, results + [flagged])
        assert s.frac_accuracy_ok == float(results[0].accuracy >= s.xi_bar - 0.02)
        assert s.gap_flag_count == 1

    def test_null_model(self):
        s = run_batch(SbmParams(60, 0.5, 0.5), 8)
        assert s.gamma == 0.0 and s.xi_bar is None and s.frac_accuracy_ok is None
        assert 0.3 < s.mean_accuracy < 0.9

    def test_degenerate_model(self):
        with pytest.raises(DegenerateModelError):
            run_batch(SbmParams(8, 0.0, 0.0), 2)

    @pytest.mark.parametrize("kw", [dict(trials=0), dict(trials=2, epsilon=1.5)])
    def test_bad_arguments(self, kw):
        with pytest.raises(ValueError):
            run_batch(SbmParams(8, 0.5, 0.1), **kw)


class TestSweep:
    def test_singleton_matches_batch(self):
        p = SbmParams(40, 0.9, 0.1)
        assert sweep([p], 3) == [run_batch(p, 3)]

    def test_empty(self):
        with pytest.raises(ValueError):
            sweep([], 3)

    def test_gamma_decreasing_in_p_out(self):
        grid = [SbmParams(40, 0.9, q) for q in (0.05, 0.2, 0.4)]
        g = [s.gamma for s in sweep(grid, 2)]
        assert g[0] > g[1] > g[2]

    def test_order_and_error_entries(self):
        grid = [SbmParams(20, 0.9, 0.1), SbmParams(8, 0.0, 0.0), SbmParams(20, 0.8, 0.1)]
        out = sweep(grid, 2)
        assert [s.params["p_in"] for s in out] == [0.9, 0.0, 0.8]
        assert out[1].error and "degenerate model" in out[1].error
        assert out[0].error is None and out[2].error is None


class TestExport:
    def test_csv(self):
        s = run_batch(SbmParams(20, 0.9, 0.1), 3)
        rows = list(csv.reader(io.StringIO(trials_csv(s.results))))
        assert tuple(rows[0]) == CSV_FIELDS and len(rows) == 4
        assert rows[1][0] == "0" and rows[1][-1] in ("true", "false")

    def test_json_fields(self):
        s = run_batch(SbmParams(20, 0.9, 0.1), 2)
        d = json.loads(s.to_json())
        for key in ("params", "trials", "frac_cos_ok", "frac_lambda_ok", "frac_rel_gap_ok",
                    "mean_accuracy", "frac_accuracy_ok", "gamma", "xi_bar", "epsilon",
                    "epsilon_acc"):
            assert key in d
        assert json.loads(summaries_json([s]))[0] == d
