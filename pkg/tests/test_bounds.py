import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bandit_attack_lab import (
    BoundConfig,
    ConfigurationError,
    ThresholdError,
    UndefinedBoundError,
    bound_report,
    cost_order_report,
    delta0_threshold,
    f_of_t,
    lemma1_cap,
    sample_complexity_round,
    stop_ratio,
    thm1_cost_ub,
    thm1_target_pulls_lb,
)

from oracles import linear_scan_t_star

DESK_GAPS = (0.4, 0.3, 0.2, 0.1, 0.0)


def cfg(**kw):
    base = dict(num_arms=5, sigma=0.1, delta0=0.2, delta=0.05, bai_beta=2.0, gaps=DESK_GAPS)
    if kw.get("num_arms", 5) != 5 and "gaps" not in kw:
        base["gaps"] = None
    base.update(kw)
    return BoundConfig(**base)


def test_lemma1_cap_values():
    c = cfg(num_arms=2, sigma=0.1, delta0=0.3, gaps=None)
    assert lemma1_cap(22026, c) == pytest.approx(11.999978852724889, rel=1e-13)
    assert lemma1_cap(10000, cfg()) == pytest.approx(22.723265836946411, rel=1e-13)


def test_lemma1_cap_delta0_scaling():
    a = lemma1_cap(5000, cfg(delta0=0.2)) - 2
    b = lemma1_cap(5000, cfg(delta0=0.4)) - 2
    assert a / b == pytest.approx(4.0, rel=1e-13)


def test_lemma1_cap_errors():
    with pytest.raises(UndefinedBoundError):
        lemma1_cap(100, cfg(delta0=0.0))
    with pytest.raises(ConfigurationError):
        lemma1_cap(9, cfg())


def test_thm1_pulls():
    assert thm1_target_pulls_lb(10000, cfg()) == pytest.approx(9909.1069366522144, rel=1e-14)
    c2 = cfg(num_arms=2, gaps=None)
    assert thm1_target_pulls_lb(300, c2) == 300 - lemma1_cap(300, c2)
    assert thm1_target_pulls_lb(300, cfg(delta0=0.3)) > thm1_target_pulls_lb(300, cfg(delta0=0.2))
    with pytest.raises(ConfigurationError):
        thm1_target_pulls_lb(9, cfg())


@given(st.integers(10, 10**8), st.floats(0.01, 3), st.floats(0.01, 2), st.integers(2, 12))
def test_pull_identity(T, delta0, sigma, k):
    c = BoundConfig(num_arms=k, sigma=sigma, delta0=delta0)
    T = max(T, 2 * k)
    lhs = thm1_target_pulls_lb(T, c) + (k - 1) * lemma1_cap(T, c)
    assert lhs == pytest.approx(T, rel=1e-12)


def test_thm1_cost_desk_value():
    # 50-digit evaluation of the cost formula at the desk configuration
    assert thm1_cost_ub(10000, cfg()) == pytest.approx(78.333102246328710, rel=1e-13)


def test_thm1_cost_zero_gaps():
    c = cfg(num_arms=2, gaps=(0.0, 0.0), delta=0.1)
    cap = lemma1_cap(1000, c)
    expected = cap * 0.2 + 0.1 * math.sqrt(32 * cap * math.log(math.pi**2 * 2 * cap**2 / 0.3))
    assert thm1_cost_ub(1000, c) == pytest.approx(expected, rel=1e-14)


def test_thm1_cost_increasing_in_T():
    vals = [thm1_cost_ub(T, cfg()) for T in (10, 100, 1000, 10**4, 10**6)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_thm1_cost_needs_gaps():
    with pytest.raises(ConfigurationError):
        thm1_cost_ub(100, cfg(gaps=None))


def test_stop_ratio():
    assert stop_ratio(2) == 4
    assert stop_ratio(1) == 9
    assert 1 < stop_ratio(1e6) < 1 + 1e-5
    for bad in (0, -1):
        with pytest.raises(ConfigurationError):
            stop_ratio(bad)


def test_delta0_threshold():
    assert delta0_threshold(cfg(num_arms=2, sigma=1.0)) == pytest.approx(6.7082039324993691, rel=1e-14)
    assert delta0_threshold(cfg(num_arms=2, sigma=0.1)) == pytest.approx(0.67082039324993691, rel=1e-14)
    r = delta0_threshold(cfg(num_arms=10)) / delta0_threshold(cfg(num_arms=2))
    assert r == pytest.approx(3.0, rel=1e-14)


def test_f_of_t():
    c = cfg(num_arms=2, delta0=0.7)
    assert f_of_t(1, c) == 1.0
    assert f_of_t(13, c) == pytest.approx(10.644434263555732, rel=1e-14)
    assert f_of_t(12, c) == pytest.approx(9.7179428726436732, rel=1e-14)
    with pytest.raises(UndefinedBoundError):
        f_of_t(3, cfg(delta0=0.0))


def test_t_star_example():
    c = cfg(num_arms=2, delta0=0.7)
    assert sample_complexity_round(c) == 13 == linear_scan_t_star(4.0, 2, 0.1, 0.7)


def test_t_star_refuses_below_threshold():
    with pytest.raises(ThresholdError):
        sample_complexity_round(cfg(num_arms=2, delta0=0.5))
    c = cfg(num_arms=2)
    with pytest.raises(ThresholdError):
        sample_complexity_round(cfg(num_arms=2, delta0=delta0_threshold(c)))


def random_valid_configs(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        k = int(rng.integers(2, 11))
        sigma = float(rng.uniform(0.05, 1.0))
        beta = float(rng.uniform(0.5, 5.0))
        base = BoundConfig(num_arms=k, sigma=sigma, delta0=1.0, bai_beta=beta)
        d0 = delta0_threshold(base) * float(rng.uniform(1.01, 2.0))
        out.append(BoundConfig(num_arms=k, sigma=sigma, delta0=d0, bai_beta=beta))
    return out


@pytest.mark.parametrize("c", random_valid_configs(20, 99))
def test_t_star_matches_scan(c):
    t = sample_complexity_round(c)
    assert t == linear_scan_t_star(c.alpha, c.num_arms, c.sigma, c.delta0)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 10), st.floats(0.05, 1.0), st.floats(0.5, 5.0), st.floats(1.001, 3.0))
def test_f_increasing_above_threshold(k, sigma, beta, factor):
    base = BoundConfig(num_arms=k, sigma=sigma, delta0=1.0, bai_beta=beta)
    c = BoundConfig(num_arms=k, sigma=sigma, delta0=delta0_threshold(base) * factor, bai_beta=beta)
    ts = np.unique(np.concatenate([np.arange(1, 2000), np.geomspace(2000, 10**6, 400).astype(int)]))
    vals = [f_of_t(int(t), c) for t in ts]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_cost_order():
    c = cfg(gaps=(0, 0, 0, 0, 0))
    assert cost_order_report(1000, c) == pytest.approx(0.1 * 5 * math.log(1000))
    assert cost_order_report(math.e, cfg()) == pytest.approx(1.0 + 0.5)
    assert cost_order_report(math.e**4, cfg()) == pytest.approx(4 * cost_order_report(math.e, cfg()))


def test_bound_report():
    r = bound_report(10000, cfg())
    assert r.sample_complexity_round is None and r.notes
    assert r.thm1_target_pulls_lb == thm1_target_pulls_lb(10000, cfg())
    r = bound_report(100, cfg(num_arms=2, delta0=0.7, gaps=(0.4, 0.0)), f_points=[1, 13])
    assert r.sample_complexity_round == 13
    assert r.stop_ratio == 4.0
    assert r.f_values[0] == (1, 1.0)
