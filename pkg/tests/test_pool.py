import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lze.errors import EmptyPool, InvalidProbability, NotActive, ParseError, UnknownPrompt
from lze.pool import (
    Pool,
    apply_rollout_result,
    dump_pool,
    initialize_pool,
    load_pool,
    snapshot_active,
)

probs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
lams = st.floats(min_value=0.01, max_value=0.99)


class TestInitialize:
    def test_boundary_zero(self):
        rec = initialize_pool({0: 0.0}).records[0]
        assert rec.d0 == 1.0 and rec.ema == 0.0

    def test_boundary_one(self):
        rec = initialize_pool({0: 1.0}).records[0]
        assert rec.d0 == 0.0 and rec.ema == 1.0

    def test_two_prompts(self):
        state = initialize_pool({0: 0.25, 1: 0.75})
        assert state.records[0].d0 == 0.75
        assert state.records[1].d0 == 0.25
        assert state.active == (0, 1)
        assert state.pruned == ()
        assert state.step == 0 and state.epoch == 0
        for rec in state.records.values():
            assert rec.momentum == 0.0 and rec.solved_streak == 0 and rec.last_pass_rate is None

    def test_empty(self):
        with pytest.raises(EmptyPool):
            initialize_pool({})

    @pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan")])
    def test_invalid_probability(self, bad):
        with pytest.raises(InvalidProbability):
            initialize_pool({0: 0.5, 1: bad})


class TestSnapshot:
    def test_empty_active(self):
        state = initialize_pool({0: 1.0})
        state.replace(0, pool=Pool.PRUNED)
        assert snapshot_active(state) == []

    def test_only_active(self):
        state = initialize_pool({i: 0.5 for i in range(5)})
        state.replace(1, pool=Pool.PRUNED)
        state.replace(3, pool=Pool.PRUNED)
        snap = snapshot_active(state)
        assert [i for i, _ in snap] == [0, 2, 4]

    def test_copy_semantics(self):
        state = initialize_pool({0: 0.5, 1: 0.25})
        snap = snapshot_active(state)
        apply_rollout_result(state, 0, 1.0, 0.9)
        assert snap[0][1].ema == 0.5
        assert snap[0][1].last_pass_rate is None


class TestApplyRollout:
    def test_fixed_point(self):
        state = initialize_pool({0: 0.5})
        rec = apply_rollout_result(state, 0, 0.5, 0.37)
        assert rec.momentum == 0.0 and rec.ema == 0.5

    def test_recurrence(self):
        state = initialize_pool({0: 0.5})
        rec = apply_rollout_result(state, 0, 0.7, 0.9)
        assert rec.momentum == pytest.approx(0.2, abs=1e-15)
        assert rec.ema == pytest.approx(0.52, abs=1e-15)
        assert rec.last_pass_rate == 0.7

    def test_momentum_lower_bound(self):
        state = initialize_pool({0: 1.0})
        rec = apply_rollout_result(state, 0, 0.0, 0.9)
        assert rec.momentum == -1.0
        assert rec.ema == pytest.approx(0.9, abs=1e-15)

    def test_momentum_uses_previous_ema(self):
        state = initialize_pool({0: 0.0})
        apply_rollout_result(state, 0, 1.0, 0.5)  # ema 0.5
        rec = apply_rollout_result(state, 0, 1.0, 0.5)
        assert rec.momentum == 0.5  # 1 - 0.5, not 1 - 0.75

    def test_errors(self):
        state = initialize_pool({0: 0.5})
        with pytest.raises(UnknownPrompt):
            apply_rollout_result(state, 7, 0.5, 0.9)
        with pytest.raises(InvalidProbability):
            apply_rollout_result(state, 0, 1.2, 0.9)
        state.replace(0, pool=Pool.PRUNED)
        with pytest.raises(NotActive):
            apply_rollout_result(state, 0, 0.5, 0.9)


@settings(max_examples=200, deadline=None)
@given(p0=probs, seq=st.lists(probs, max_size=50), lam=lams)
def test_ema_bounded_and_d0_immutable(p0, seq, lam):
    state = initialize_pool({0: p0, 1: 0.5})
    d0 = state.records[0].d0
    for p in seq:
        rec = apply_rollout_result(state, 0, p, lam)
        assert 0.0 <= rec.ema <= 1.0
        assert -1.0 <= rec.momentum <= 1.0
    assert state.records[0].d0 == d0
    assert set(state.active) | set(state.pruned) == {0, 1}
    assert not set(state.active) & set(state.pruned)


@settings(max_examples=50, deadline=None)
@given(seq=st.lists(st.tuples(st.integers(0, 3), probs), max_size=30), lam=lams)
def test_determinism(seq, lam):
    def run():
        state = initialize_pool({i: 0.25 * i for i in range(4)})
        for pid, p in seq:
            apply_rollout_result(state, pid, p, lam)
        return dump_pool(state)

    assert run() == run()


class TestCheckpoint:
    def test_round_trip(self):
        state = initialize_pool({0: 0.125, 1: 0.875, 2: 1 / 3})
        apply_rollout_result(state, 2, 0.7, 0.9)
        state.replace(1, pool=Pool.PRUNED, solved_streak=2)
        state.step, state.epoch = 5, 2
        text = dump_pool(state)
        back = load_pool(text)
        assert back.records == state.records
        assert (back.step, back.epoch) == (5, 2)
        assert dump_pool(back) == text

    def test_field_order(self):
        state = initialize_pool({3: 0.25})
        line = dump_pool(state).splitlines()[1]
        assert line == "3\t0.75\t0.25\t0\t-\t0\tactive"

    def test_bad_header(self):
        with pytest.raises(ParseError):
            load_pool("3\t0.75\t0.25\t0\t-\t0\tactive\n")

    def test_bad_line(self):
        with pytest.raises(ParseError):
            load_pool("#pool\tstep=0\tepoch=0\n3\t0.75\tx\t0\t-\t0\tactive\n")
