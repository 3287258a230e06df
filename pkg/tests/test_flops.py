import pytest
from hypothesis import given
from hypothesis import strategies as st

from lze.errors import InvalidParams, InvalidRatio, InvalidTokenCount
from lze.flops import (
    OPTIMIZE,
    REPLAY,
    ROLLOUT,
    CostModel,
    FlopsLedger,
    baseline_flops,
    budget_report,
    ledger_record,
    lze_coefficient,
    lze_flops,
    savings_ratio,
)


def test_default_coefficients():
    m = CostModel()
    assert (m.c_infer, m.c_optim, m.c_total) == (4.0, 6.0, 10.0)


class TestBaseline:
    def test_unit(self):
        assert baseline_flops(CostModel(), 1, 1, 1) == 10.0

    def test_realistic_scale(self):
        m = CostModel(params=1.5e9, tokens_per_sample=1000)
        got = baseline_flops(m, 7, 7473, 8)
        assert got == pytest.approx(10 * 7 * 7473 * 8 * 1.5e9 * 1000, rel=1e-15)
        assert 1e18 < got < 1e20

    def test_linear_in_n(self):
        m = CostModel(params=3.0, tokens_per_sample=5)
        assert baseline_flops(m, 2, 10, 16) == 2 * baseline_flops(m, 2, 10, 8)

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (1, 1, -2)])
    def test_invalid(self, args):
        with pytest.raises(InvalidParams):
            baseline_flops(CostModel(), *args)

    def test_invalid_model(self):
        with pytest.raises(InvalidParams):
            CostModel(params=0)


class TestLZE:
    def test_full_kappa(self):
        m = CostModel(params=2.0, tokens_per_sample=3.0)
        assert lze_flops(m, 1.0, 3, 11, 8) == baseline_flops(m, 3, 11, 8)

    def test_coefficient_point_four(self):
        assert lze_coefficient(CostModel(), 0.4) == 6.4

    def test_coefficient_half(self):
        assert lze_coefficient(CostModel(), 0.5) == 7.0

    @pytest.mark.parametrize("kappa", [0.0, 1.2])
    def test_invalid(self, kappa):
        with pytest.raises(InvalidRatio):
            lze_flops(CostModel(), kappa, 1, 1, 1)

    @given(a=st.floats(0.01, 1.0), b=st.floats(0.01, 1.0))
    def test_monotone(self, a, b):
        if a < b:
            assert lze_flops(CostModel(), a, 1, 10, 8) < lze_flops(CostModel(), b, 1, 10, 8)


class TestSavings:
    def test_identity(self):
        assert savings_ratio(CostModel(), 0.4) == 0.36

    def test_none_at_full(self):
        assert savings_ratio(CostModel(), 1.0) == 0.0

    def test_optimization_free_limit(self):
        # kappa=0 is rejected, but the formula's limit is 6/10
        m = CostModel()
        assert 1.0 - m.c_infer / m.c_total == 0.6
        with pytest.raises(InvalidRatio):
            savings_ratio(m, 0.0)


class TestLedger:
    def test_empty(self):
        led = FlopsLedger()
        assert led.inference_flops == 0 and led.optimization_flops == 0 and led.total == 0

    def test_one_rollout(self):
        led = ledger_record(FlopsLedger(), CostModel(), ROLLOUT, tokens=250)
        assert led.inference_flops == 1000 and led.rollouts_generated == 1

    def test_invalid_tokens(self):
        with pytest.raises(InvalidTokenCount):
            ledger_record(FlopsLedger(), CostModel(), ROLLOUT, tokens=0)

    def test_replay_is_broken_out(self):
        led = FlopsLedger()
        ledger_record(led, CostModel(), REPLAY, tokens=10, count=3)
        assert led.inference_flops == 120 and led.replay_flops == 120

    def _run(self, kappa, prompts=10, n=8, steps=7, tokens=13.0):
        model = CostModel(params=2.0)
        led = FlopsLedger()
        k = int(kappa * prompts)
        for _ in range(steps):
            for _ in range(prompts * n):
                ledger_record(led, model, ROLLOUT, tokens)
            for _ in range(k * n):
                ledger_record(led, model, OPTIMIZE, tokens)
        return led, model

    def test_full_vs_selected_ratio(self):
        full, _ = self._run(1.0)
        ours, _ = self._run(0.4)
        assert full.total / ours.total == pytest.approx(10 / 6.4, rel=1e-14)

    def test_matches_formula(self):
        led, model = self._run(0.4)
        model = CostModel(params=2.0, tokens_per_sample=13.0)
        assert led.total == pytest.approx(lze_flops(model, 0.4, 7, 10, 8), rel=1e-14)

    def test_monotone_accumulators(self):
        led = FlopsLedger()
        last = (0.0, 0.0)
        for ev in [ROLLOUT, OPTIMIZE, REPLAY, ROLLOUT, OPTIMIZE]:
            ledger_record(led, CostModel(), ev, 2.0)
            now = (led.inference_flops, led.optimization_flops)
            assert now[0] >= last[0] and now[1] >= last[1]
            last = now

    def test_report(self):
        led = FlopsLedger(inference_flops=40.0, optimization_flops=24.0)
        rep = budget_report(led, baseline=100.0)
        assert list(rep)[:4] == ["inference_flops", "optimization_flops", "total", "savings_vs_baseline"]
        assert rep["total"] == 64.0 and rep["savings_vs_baseline"] == pytest.approx(0.36)
