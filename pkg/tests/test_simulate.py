import math

import numpy as np
import pytest

from capscale import (
    MemoryChannel,
    QubitChannel,
    Strategy,
    ValidationError,
    empirical_staircase,
    run_trials,
    staircase_csv,
    subset_scale_value,
    success_oracle,
)
from capscale.simulate import staircase_rows_to_dicts

GAMMAS4 = (0.0, 0.2, 0.4, 0.6)


def periodic4():
    return MemoryChannel.periodic([QubitChannel.amplitude_damping(g) for g in GAMMAS4])


def random3():
    return MemoryChannel.random(
        [QubitChannel.amplitude_damping(g) for g in (0.1, 0.4, 0.7)], [0.5, 0.3, 0.2]
    )


def test_strategy_validation():
    with pytest.raises(ValidationError):
        Strategy((), 0.5)
    with pytest.raises(ValidationError):
        Strategy((0, 0), 0.5)
    with pytest.raises(ValidationError):
        Strategy((0,), -0.1)
    assert Strategy((2, 0), 0.5).subset == (0, 2)


def test_success_oracle_periodic():
    mc = periodic4()
    ok = success_oracle(mc, Strategy((0, 1), 0.5))
    assert ok.tolist() == [True, True, False, False]
    # rate above the subset value: nobody succeeds
    ok = success_oracle(mc, Strategy((0, 1), 0.7))
    assert not ok.any()


def test_success_oracle_random():
    mc = random3()
    ok = success_oracle(mc, Strategy((0,), 0.6))
    assert ok.tolist() == [True, False, False]
    ok = success_oracle(mc, Strategy((0, 1), 0.6))  # min rate of {0,1} is 0.553
    assert not ok.any()


def test_success_oracle_rejects_indeterminate_rate():
    mc = periodic4()
    value = subset_scale_value(GAMMAS4, (0, 1))
    with pytest.raises(ValidationError):
        success_oracle(mc, Strategy((0, 1), value))


def test_success_oracle_rejects_markov_memory():
    branches = [QubitChannel.amplitude_damping(g) for g in (0.1, 0.4)]
    mc = MemoryChannel.markov(branches, np.eye(2), np.array([0.5, 0.5]))
    with pytest.raises(ValidationError):
        success_oracle(mc, Strategy((0,), 0.1))


def test_run_trials_deterministic():
    mc = periodic4()
    strat = Strategy((0, 1), 0.5)
    a = run_trials(mc, strat, 5000, seed=123)
    b = run_trials(mc, strat, 5000, seed=123)
    assert np.array_equal(a.branches, b.branches)
    assert a.empirical_error == b.empirical_error
    c = run_trials(mc, strat, 5000, seed=124)
    assert not np.array_equal(a.branches, c.branches)


def test_run_trials_statistics():
    mc = periodic4()
    n = 100_000
    res = run_trials(mc, Strategy((0, 1), 0.5), n, seed=42)
    assert res.theoretical_error == pytest.approx(0.5, abs=1e-12)
    sigma = math.sqrt(0.25 / n)
    assert abs(res.empirical_error - 0.5) <= 4.0 * sigma
    assert res.max_branch_error == 1.0  # branches 2 and 3 always fail
    assert res.subset_rate == pytest.approx(0.667153683345, abs=1e-9)
    recs = [r for _, r in zip(range(3), res.records())]
    assert [r.trial for r in recs] == [0, 1, 2]
    assert all(r.success == (r.branch in (0, 1)) for r in recs)


def test_run_trials_validation():
    with pytest.raises(ValidationError):
        run_trials(periodic4(), Strategy((0,), 0.1), 0, seed=1)


def test_empirical_staircase_periodic_subset_selection():
    mc = periodic4()
    rows = empirical_staircase(mc, [0.3, 0.6665, 0.668, 0.7], 2000, seed=9)
    assert [r.subset for r in rows] == [(0, 1, 2, 3), (0, 1), (0,), ()]
    assert [r.q_subset for r in rows] == [1.0, 0.5, 0.25, 0.0]
    assert [r.theoretical_error for r in rows] == [0.0, 0.5, 0.75, 1.0]
    assert [r.seed for r in rows] == [9, 10, 11, 12]
    assert rows[0].empirical_error == 0.0
    assert rows[-1].empirical_error == 1.0


def test_empirical_staircase_random_subset_selection():
    mc = random3()
    rows = empirical_staircase(mc, [0.3, 0.4, 0.6, 0.9], 2000, seed=5)
    assert [r.subset for r in rows] == [(0, 1, 2), (0, 1), (0,), ()]
    assert [r.q_subset for r in rows] == [1.0, 0.8, 0.5, 0.0]
    expect_err = [0.0, pytest.approx(0.2), pytest.approx(0.5), 1.0]
    assert [r.theoretical_error for r in rows] == expect_err


def test_empirical_staircase_validation():
    mc = periodic4()
    with pytest.raises(ValidationError):
        empirical_staircase(mc, [], 100, seed=1)
    with pytest.raises(ValidationError):
        empirical_staircase(mc, [0.5, 0.4], 100, seed=1)
    with pytest.raises(ValidationError):
        empirical_staircase(mc, [-0.1], 100, seed=1)


def test_staircase_csv_format():
    mc = periodic4()
    rows = empirical_staircase(mc, [0.3, 0.7], 500, seed=3)
    text = staircase_csv(rows)
    lines = text.splitlines()
    assert lines[0] == (
        "rate_bits,subset,q_subset,theoretical_error,empirical_error,n_trials,seed"
    )
    assert lines[1] == "0.3,0;1;2;3,1,0,0,500,3"
    assert lines[2] == "0.7,,0,1,1,500,4"
    assert text.endswith("\n") and "\r" not in text
    dicts = staircase_rows_to_dicts(rows)
    assert dicts[0]["subset"] == [0, 1, 2, 3]
    assert dicts[1]["q_subset"] == 0.0
