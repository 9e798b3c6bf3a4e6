"""Exit criteria, one test each, at their stated tolerances.

Desk instance (an artifact choice): K=5 gaussian arms, means
(0.9, 0.8, 0.7, 0.6, 0.5), sigma=0.1, target = last arm.
"""

import json
import math
import time

import numpy as np
import pytest

from bandit_attack_lab import (
    BanditInstance,
    BoundConfig,
    EpisodeConfig,
    beta_width,
    delta0_threshold,
    run_campaign,
    run_episode,
    sample_complexity_round,
)
from bandit_attack_lab.cli import main

from conftest import ACCEPTANCE_LINES, DESK_MEANS
from oracles import linear_scan_t_star, smallest_feasible_alpha

DESK = BanditInstance(DESK_MEANS, 0.1)
TRIALS = 200
RATE = 0.95


def report(number, name, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}")


@pytest.fixture(scope="module")
def attack_campaign():
    cfg = EpisodeConfig(DESK, victim="ucb_regret", attack_enabled=True,
                        delta0=0.2, delta=0.05, horizon=10_000)
    return run_campaign(cfg, TRIALS, campaign_seed=20_181_203)


def test_1_target_pull_guarantee(attack_campaign):
    rate = attack_campaign.rates["pull_bound"]
    bound = attack_campaign.bounds["thm1_target_pulls_lb"]
    ok = rate >= RATE
    report(1, "target-pull guarantee", ok,
           f"rate {rate:.3f} >= {RATE} (N_K(T) >= {bound:.2f}, min observed "
           f"{min(t.target_pulls for t in attack_campaign.trials)})")
    assert ok


def test_2_attack_cost_guarantee(attack_campaign):
    rate = attack_campaign.rates["cost_bound"]
    bound = attack_campaign.bounds["thm1_cost_ub"]
    ok = rate >= RATE
    report(2, "cumulative cost guarantee", ok,
           f"rate {rate:.3f} >= {RATE} (cost <= {bound:.3f}, max observed "
           f"{max(t.total_cost for t in attack_campaign.trials):.3f})")
    assert ok


def test_3_event_E_and_pull_cap(attack_campaign):
    rate = attack_campaign.rates["event_E"]
    dirty = [t.seed for t in attack_campaign.trials if t.event_E_held and t.lemma1_violations]
    ok = rate >= RATE and not dirty
    report(3, "concentration event E and pull cap under E", ok,
           f"E rate {rate:.3f} >= {RATE}; E-trials with pull-cap violations: {len(dirty)}")
    assert ok


def test_4_attacked_bai_end_to_end():
    inst = BanditInstance((0.9, 0.5), 0.1)
    bc = BoundConfig(num_arms=2, sigma=0.1, delta0=0.7, delta=0.05, bai_beta=2.0)
    t_star = sample_complexity_round(bc)
    assert bc.alpha == 4.0
    assert t_star == 13 == linear_scan_t_star(4.0, 2, 0.1, 0.7)
    assert 0.7 > delta0_threshold(bc) == pytest.approx(0.3 * math.sqrt(5), rel=1e-15)
    cfg = EpisodeConfig(inst, victim="ucb_bai", attack_enabled=True, delta0=0.7,
                        delta=0.05, bai_beta=2.0, max_rounds=4 * t_star)
    res = run_campaign(cfg, TRIALS, campaign_seed=4_13)
    rate_a = res.rates["winner_is_target"]
    rate_b = res.rates["target_stop_by_t_star"]
    ok = rate_a >= RATE
    caveat = "" if rate_b >= RATE else " (below 0.95: pull-cap transfer to the BAI learner not borne out)"
    report(4, "attacked BAI stops on the target", ok,
           f"(a) winner=target rate {rate_a:.3f} >= {RATE}; (b) target stop by t*={t_star}: "
           f"{rate_b:.3f} [reported]{caveat}")
    assert ok


def test_5_unattacked_ratio_bound():
    cfg = EpisodeConfig(DESK, victim="ucb_bai", attack_enabled=False, bai_beta=2.0,
                        use_stopping_rule=False, horizon=5000)
    res = run_campaign(cfg, TRIALS, campaign_seed=5_000)
    assert all(t.rounds == 5000 for t in res.trials)
    rate = res.rates["ratio_bound"]
    ok = rate >= RATE
    report(5, "unattacked ratio bound T_i <= 4 T_best at t=5000", ok, f"rate {rate:.3f} >= {RATE}")
    assert ok


def _attacked_round_checks(log, delta0, delta):
    """(oracle error, equality error) for every attacked round, rebuilt from the records."""
    inst = log.config.instance
    k, target = inst.num_arms, inst.target_arm
    n = np.zeros(k, dtype=np.int64)
    post = np.zeros(k)
    out = []
    for arm, r0, a, r in zip(log.arms, log.pre_rewards, log.alphas, log.post_rewards):
        if a > 0:
            level = post[target] / n[target] - 2 * beta_width(int(n[target]), k, inst.sigma, delta) - delta0
            oracle = smallest_feasible_alpha(post[arm], int(n[arm]), r0, level)
            new_mean = (post[arm] + r) / (n[arm] + 1)
            out.append((abs(a - oracle), abs(new_mean - level) / max(1.0, abs(new_mean))))
        n[arm] += 1
        post[arm] += r
    return out


def test_6_attack_minimality():
    worst_oracle = worst_eq = 0.0
    attacked = 0
    for seed in range(10):
        cfg = EpisodeConfig(DESK, delta0=0.2, delta=0.05, horizon=2000, seed=seed)
        checks = _attacked_round_checks(run_episode(cfg), 0.2, 0.05)
        attacked += len(checks)
        for e_oracle, e_eq in checks:
            worst_oracle = max(worst_oracle, e_oracle)
            worst_eq = max(worst_eq, e_eq)
    ok = attacked > 0 and worst_oracle <= 1e-9 and worst_eq <= 1e-9
    report(6, "attack minimality and equality", ok,
           f"{attacked} attacked rounds; max |alpha - grid oracle| {worst_oracle:.1e}, "
           f"max equality error {worst_eq:.1e} (tol 1e-9)")
    assert ok


def test_7_solver_equivalence():
    rng = np.random.default_rng(7)
    mismatches = 0
    for _ in range(50):
        k = int(rng.integers(2, 11))
        sigma = float(rng.uniform(0.05, 1.0))
        beta = float(rng.uniform(0.5, 5.0))
        thr = delta0_threshold(BoundConfig(num_arms=k, sigma=sigma, delta0=1.0, bai_beta=beta))
        bc = BoundConfig(num_arms=k, sigma=sigma, delta0=thr * float(rng.uniform(1.01, 2.0)), bai_beta=beta)
        if sample_complexity_round(bc) != linear_scan_t_star(bc.alpha, k, sigma, bc.delta0):
            mismatches += 1
    ok = mismatches == 0
    report(7, "t* solver vs linear scan", ok, f"{50 - mismatches}/50 configurations agree")
    assert ok


def test_8_determinism(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"instance": {"means": list(DESK_MEANS), "sigma": 0.1},
                               "horizon": 2000, "delta0": 0.2, "delta": 0.05}))
    for d in ("a", "b"):
        assert main(["simulate", "--config", str(cfg), "--seed", "123", "--out-dir", str(tmp_path / d)]) == 0
        assert main(["montecarlo", "--config", str(cfg), "--trials", "25", "--campaign-seed", "99",
                     "--out-dir", str(tmp_path / d)]) == 0
    same_csv = (tmp_path / "a" / "episode.csv").read_bytes() == (tmp_path / "b" / "episode.csv").read_bytes()
    same_json = (tmp_path / "a" / "campaign.json").read_bytes() == (tmp_path / "b" / "campaign.json").read_bytes()
    ok = same_csv and same_json
    report(8, "byte-identical reruns", ok, f"CSV identical: {same_csv}; campaign JSON identical: {same_json}")
    assert ok


def test_9_performance():
    inst = BanditInstance(tuple(np.linspace(0.9, 0.5, 10)), 0.1)
    cfg = EpisodeConfig(inst, delta0=0.2, delta=0.05, horizon=10**6, seed=1)
    run_episode(EpisodeConfig(inst, delta0=0.2, delta=0.05, horizon=100, seed=1))  # compile
    start = time.perf_counter()
    log = run_episode(cfg)
    elapsed = time.perf_counter() - start
    ok = elapsed < 5.0 and log.rounds == 10**6
    report(9, "attacked episode T=1e6, K=10", ok, f"{elapsed:.2f} s < 5 s")
    assert ok
