"""Seeded episodes, post-hoc bound checks and Monte Carlo campaigns.

Per-round order: learner selects, environment samples ``r0``, attacker
computes ``alpha``, learner observes ``r0 - alpha``.

Trial seeds for a campaign are
``SeedSequence([campaign_seed, trial_index]).generate_state(1, uint64)[0]``,
so any single trial can be rerun on its own with :func:`run_episode`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import _kernel
from .attacker import AttackerState, beta_width, compute_attack, record_round
from .bounds import (
    BoundConfig,
    bound_report,
    lemma1_cap,
    sample_complexity_round,
    thm1_cost_ub,
    thm1_target_pulls_lb,
)
from .errors import ConfigurationError
from .learners import LearnerState, Variant, bai_stop_check, observe, select
from .model import BanditInstance, RewardFamily, gaps, make_rng, sample_reward

DEFAULT_MAX_ROUNDS = 10**6
CHUNK = 1 << 16


@dataclass(frozen=True)
class EpisodeConfig:
    instance: BanditInstance
    victim: Variant = Variant.UCB_REGRET
    attack_enabled: bool = True
    delta0: float = 0.2
    delta: float = 0.05
    bai_beta: float = 2.0
    stop_ratio_override: Optional[float] = None
    horizon: Optional[int] = None
    max_rounds: Optional[int] = None
    use_stopping_rule: bool = True
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "victim", Variant(self.victim))
        k = self.instance.num_arms
        # validates delta0, delta, beta, override
        self.bound_config()
        if self.victim is Variant.UCB_REGRET or not self.use_stopping_rule:
            if self.horizon is None:
                raise ConfigurationError("horizon is required unless the stopping rule ends the episode")
            if self.horizon < 1:
                raise ConfigurationError("horizon must be positive")
            if self.victim is Variant.UCB_REGRET and self.attack_enabled and self.horizon < 2 * k:
                raise ConfigurationError(f"horizon must be >= 2K = {2 * k} for the attack guarantees")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ConfigurationError("max_rounds must be positive")
        make_rng(self.seed)

    def bound_config(self) -> BoundConfig:
        return BoundConfig(
            num_arms=self.instance.num_arms,
            sigma=self.instance.sigma,
            delta0=self.delta0,
            delta=self.delta,
            bai_beta=self.bai_beta,
            gaps=tuple(gaps(self.instance)),
            stop_ratio_override=self.stop_ratio_override,
        )

    @property
    def stop_ratio(self) -> float:
        return self.bound_config().alpha

    def t_star(self) -> Optional[int]:
        try:
            return sample_complexity_round(self.bound_config())
        except ConfigurationError:
            return None

    @property
    def rounds_cap(self) -> int:
        """Number of rounds the episode may run."""
        if self.victim is Variant.UCB_REGRET or not self.use_stopping_rule:
            return int(self.horizon)
        if self.max_rounds is not None:
            return int(self.max_rounds)
        t_star = self.t_star()
        return 4 * t_star if t_star is not None else DEFAULT_MAX_ROUNDS

    def to_dict(self) -> dict:
        d = asdict(self)
        d["instance"] = self.instance.to_dict()
        d["victim"] = self.victim.value
        d["seed"] = int(self.seed)
        return d


@dataclass
class EpisodeLog:
    """Per-round records plus the terminal snapshot.

    Round ``t`` (1-based) lives at position ``t - 1`` of the arrays. The
    arrays are None when the episode ran with ``record=False``.
    """

    config: EpisodeConfig
    rounds: int
    counts: np.ndarray
    pre_sums: np.ndarray
    post_sums: np.ndarray
    cum_attack: np.ndarray
    arms: Optional[np.ndarray] = None
    pre_rewards: Optional[np.ndarray] = None
    alphas: Optional[np.ndarray] = None
    post_rewards: Optional[np.ndarray] = None
    stop_round: Optional[int] = None
    winner: Optional[int] = None

    @property
    def total_cost(self) -> float:
        return float(self.cum_attack.sum())

    def pre_means(self) -> np.ndarray:
        return self.pre_sums / self.counts

    def post_means(self) -> np.ndarray:
        return self.post_sums / self.counts

    def tau(self, arm: int) -> np.ndarray:
        """Rounds (1-based) in which ``arm`` was pulled."""
        return np.flatnonzero(self.arms == arm) + 1


ChunkSink = Callable[[int, np.ndarray, np.ndarray, np.ndarray, np.ndarray], None]


def run_episode(
    cfg: EpisodeConfig,
    *,
    record: bool = True,
    on_chunk: Optional[ChunkSink] = None,
    chunk_size: int = CHUNK,
) -> EpisodeLog:
    """Play one seeded episode with the compiled loop.

    ``on_chunk(first_round, arms, pre, alpha, post)`` is called after every
    block of rounds, which lets callers stream very long logs to disk with
    ``record=False``.
    """
    inst = cfg.instance
    k = inst.num_arms
    cap = cfg.rounds_cap
    rng = make_rng(cfg.seed)
    means = np.asarray(inst.means, dtype=np.float64)
    family = _kernel.GAUSSIAN if inst.reward_family is RewardFamily.GAUSSIAN else _kernel.BERNOULLI
    variant = _kernel.REGRET if cfg.victim is Variant.UCB_REGRET else _kernel.BAI

    counts = np.zeros(k, dtype=np.int64)
    post_sums = np.zeros(k)
    pre_sums = np.zeros(k)
    cum_attack = np.zeros(k)
    parts: list[tuple[np.ndarray, ...]] = []
    t = 0
    winner = -1
    while t < cap:
        n = min(chunk_size, cap - t)
        noise = rng.standard_normal(n) if family == _kernel.GAUSSIAN else rng.random(n)
        out_arm = np.empty(n, dtype=np.int64)
        out_pre = np.empty(n)
        out_alpha = np.empty(n)
        out_post = np.empty(n)
        played, winner = _kernel.run_chunk(
            means, inst.sigma, family, noise,
            variant, float(cfg.bai_beta), float(cfg.stop_ratio), bool(cfg.use_stopping_rule),
            bool(cfg.attack_enabled), float(cfg.delta0), float(cfg.delta),
            counts, post_sums, pre_sums, cum_attack,
            t, out_arm, out_pre, out_alpha, out_post,
        )
        chunk = (out_arm[:played], out_pre[:played], out_alpha[:played], out_post[:played])
        if on_chunk is not None:
            on_chunk(t + 1, *chunk)
        if record:
            parts.append(chunk)
        t += played
        if winner >= 0:
            break

    log = EpisodeLog(
        config=cfg, rounds=t, counts=counts, pre_sums=pre_sums,
        post_sums=post_sums, cum_attack=cum_attack,
    )
    if winner >= 0:
        log.stop_round, log.winner = t, int(winner)
    if record:
        cols = list(zip(*parts)) if parts else [[np.empty(0, np.int64)], [np.empty(0)], [np.empty(0)], [np.empty(0)]]
        log.arms, log.pre_rewards, log.alphas, log.post_rewards = (np.concatenate(c) for c in cols)
    return log


def run_episode_reference(cfg: EpisodeConfig) -> EpisodeLog:
    """Same episode as :func:`run_episode`, one Python call per operation.

    Slow; exists so the compiled loop can be checked against the readable
    operations.
    """
    inst = cfg.instance
    rng = make_rng(cfg.seed)
    learner = LearnerState(
        num_arms=inst.num_arms, sigma=inst.sigma, variant=cfg.victim,
        bai_beta=cfg.bai_beta, stop_ratio=cfg.stop_ratio,
    )
    attacker = AttackerState(inst.num_arms, inst.sigma, cfg.delta0, cfg.delta)
    cap = cfg.rounds_cap
    arms, pres, alphas, posts = [], [], [], []
    stop_round = winner = None
    for t in range(1, cap + 1):
        arm = select(learner)
        r0 = sample_reward(inst, arm, rng)
        if cfg.attack_enabled:
            alpha_t = compute_attack(attacker, arm, r0, t).alpha_t
        else:
            alpha_t = 0.0
        r = record_round(attacker, arm, r0, alpha_t)
        observe(learner, arm, r)
        arms.append(arm)
        pres.append(r0)
        alphas.append(alpha_t)
        posts.append(r)
        if cfg.victim is Variant.UCB_BAI and cfg.use_stopping_rule and t >= inst.num_arms:
            decision = bai_stop_check(learner)
            if decision.stopped:
                stop_round, winner = t, decision.winner
                break
    return EpisodeLog(
        config=cfg, rounds=len(arms), counts=learner.counts.copy(),
        pre_sums=attacker.pre_sums.copy(), post_sums=learner.post_sums.copy(),
        cum_attack=attacker.cum_attack.copy(), arms=np.array(arms, dtype=np.int64),
        pre_rewards=np.array(pres), alphas=np.array(alphas), post_rewards=np.array(posts),
        stop_round=stop_round, winner=winner,
    )


def _beta_vec(n: np.ndarray, num_arms: int, sigma: float, delta: float) -> np.ndarray:
    n = n.astype(np.float64)
    return np.sqrt(2.0 * sigma**2 / n * np.log(math.pi**2 * num_arms * n**2 / (3.0 * delta)))


def check_event_E(log: EpisodeLog, instance: BanditInstance, delta: float) -> bool:
    """True iff every arm's pre-attack mean stayed within beta(N) of its true mean for all t > K.

    Each arm's running mean is a step function of t; every step that is
    in force at some round t > K is checked.
    """
    k = instance.num_arms
    T = log.rounds
    if T <= k:
        return True
    for i in range(k):
        pulls = np.flatnonzero(log.arms == i) + 1
        if pulls.size == 0:
            continue
        n = np.arange(1, pulls.size + 1)
        running = np.cumsum(log.pre_rewards[pulls - 1]) / n
        last_round = np.append(pulls[1:] - 1, T)
        live = last_round >= k + 1
        dev = np.abs(running[live] - instance.means[i])
        if np.any(dev >= _beta_vec(n[live], k, instance.sigma, delta)):
            return False
    return True


def lemma1_horizon(log: EpisodeLog) -> int:
    """Horizon plugged into the pull cap: T for the regret victim, the realized last round otherwise."""
    cfg = log.config
    if cfg.victim is Variant.UCB_REGRET:
        return int(cfg.horizon)
    return log.rounds


def check_lemma1(log: EpisodeLog, cfg: EpisodeConfig, horizon: Optional[int] = None) -> int:
    """Count (arm, round) pairs with ``N_i(t) > min(N_K(t), cap)`` for non-target arms and t >= 2K."""
    k = cfg.instance.num_arms
    horizon = lemma1_horizon(log) if horizon is None else horizon
    if horizon < 2 * k or log.rounds < 2 * k:
        return 0
    cap = lemma1_cap(horizon, cfg.bound_config())
    running = np.zeros(k, dtype=np.int64)
    violations = 0
    for start in range(0, log.rounds, CHUNK):
        arms = log.arms[start : start + CHUNK]
        onehot = np.zeros((arms.size, k), dtype=np.int64)
        onehot[np.arange(arms.size), arms] = 1
        n_t = np.cumsum(onehot, axis=0) + running
        running = n_t[-1]
        rounds = np.arange(start + 1, start + arms.size + 1)
        n_t = n_t[rounds >= 2 * k]
        if n_t.size == 0:
            continue
        limit = np.minimum(n_t[:, k - 1 : k], cap)
        violations += int(np.count_nonzero(n_t[:, : k - 1] > limit))
    return violations


def check_ratio_bound(counts: np.ndarray, instance: BanditInstance, ratio: float) -> bool:
    """Every suboptimal arm has ``T_i <= ratio * T_best`` (best = largest true mean)."""
    best = instance.best_arm
    others = np.delete(np.asarray(counts), best)
    return bool(np.all(others <= ratio * counts[best]))


@dataclass
class TrialSummary:
    seed: int
    rounds: int
    counts: list[int]
    target_pulls: int
    total_cost: float
    event_E_held: Optional[bool]
    lemma1_violations: Optional[int]
    meets_pull_bound: Optional[bool] = None
    meets_cost_bound: Optional[bool] = None
    ratio_bound_held: Optional[bool] = None
    stop_round: Optional[int] = None
    winner: Optional[int] = None
    winner_is_target: Optional[bool] = None
    winner_is_best: Optional[bool] = None

    def to_dict(self) -> dict:
        return asdict(self)


def summarize(log: EpisodeLog) -> TrialSummary:
    """Per-trial statistics; the replay-based checks are None for unrecorded logs."""
    cfg = log.config
    inst = cfg.instance
    s = TrialSummary(
        seed=int(cfg.seed),
        rounds=log.rounds,
        counts=[int(c) for c in log.counts],
        target_pulls=int(log.counts[inst.target_arm]),
        total_cost=log.total_cost,
        event_E_held=None,
        lemma1_violations=None,
    )
    if log.arms is not None:
        s.event_E_held = check_event_E(log, inst, cfg.delta)
        s.lemma1_violations = check_lemma1(log, cfg) if cfg.delta0 > 0 else 0
    if (
        cfg.victim is Variant.UCB_REGRET
        and cfg.attack_enabled
        and cfg.delta0 > 0
        and cfg.horizon >= 2 * inst.num_arms
    ):
        bc = cfg.bound_config()
        s.meets_pull_bound = s.target_pulls >= thm1_target_pulls_lb(cfg.horizon, bc)
        s.meets_cost_bound = s.total_cost <= thm1_cost_ub(cfg.horizon, bc)
    if cfg.victim is Variant.UCB_BAI:
        s.ratio_bound_held = check_ratio_bound(log.counts, inst, cfg.stop_ratio)
        if log.winner is not None:
            s.stop_round = log.stop_round
            s.winner = log.winner
            s.winner_is_target = log.winner == inst.target_arm
            s.winner_is_best = log.winner == inst.best_arm
    return s


def trial_seed(campaign_seed: int, index: int) -> int:
    ss = np.random.SeedSequence([int(campaign_seed), int(index)])
    return int(ss.generate_state(1, np.uint64)[0])


def default_workers() -> int:
    env = os.environ.get("BANDIT_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigurationError(f"BANDIT_LAB_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ConfigurationError("BANDIT_LAB_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


@dataclass
class CampaignResult:
    config: EpisodeConfig
    campaign_seed: int
    num_trials: int
    trials: list[TrialSummary]
    rates: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    comparison: list[dict] = field(default_factory=list)

    @property
    def seeds(self) -> list[int]:
        return [t.seed for t in self.trials]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "campaign_seed": int(self.campaign_seed),
            "num_trials": self.num_trials,
            "seeds": self.seeds,
            "rates": self.rates,
            "bounds": self.bounds,
            "comparison": self.comparison,
            "trials": [t.to_dict() for t in self.trials],
        }


def _rate(flags) -> Optional[float]:
    flags = [f for f in flags if f is not None]
    if not flags:
        return None
    return sum(bool(f) for f in flags) / len(flags)


def _run_trial(cfg: EpisodeConfig) -> TrialSummary:
    return summarize(run_episode(cfg))


def run_campaign(
    cfg: EpisodeConfig,
    num_trials: int,
    campaign_seed: int,
    workers: Optional[int] = None,
) -> CampaignResult:
    """Run ``num_trials`` independent episodes and aggregate bound checks.

    ``cfg.seed`` is ignored; each trial gets :func:`trial_seed`. Results are
    ordered by trial index regardless of completion order.
    """
    if num_trials < 1:
        raise ConfigurationError("num_trials must be >= 1")
    configs = [replace(cfg, seed=trial_seed(campaign_seed, i)) for i in range(num_trials)]
    workers = default_workers() if workers is None else workers
    if workers > 1 and num_trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trials = list(pool.map(_run_trial, configs))
    else:
        trials = [_run_trial(c) for c in configs]

    inst = cfg.instance
    t_star = cfg.t_star()
    rates = {
        "event_E": _rate(t.event_E_held for t in trials),
        "pull_bound": _rate(t.meets_pull_bound for t in trials),
        "cost_bound": _rate(t.meets_cost_bound for t in trials),
        "lemma1_clean_given_E": None,
        "lemma1_clean": None,
    }
    if cfg.attack_enabled:
        rates["lemma1_clean_given_E"] = _rate(t.lemma1_violations == 0 for t in trials if t.event_E_held)
        rates["lemma1_clean"] = _rate(t.lemma1_violations == 0 for t in trials)
    if cfg.victim is Variant.UCB_BAI:
        rates["stopped"] = _rate(t.winner is not None for t in trials)
        rates["winner_is_target"] = _rate(bool(t.winner_is_target) for t in trials)
        rates["winner_is_best"] = _rate(bool(t.winner_is_best) for t in trials)
        rates["ratio_bound"] = _rate(t.ratio_bound_held for t in trials)
        if t_star is not None:
            rates["target_stop_by_t_star"] = _rate(
                bool(t.winner_is_target) and t.stop_round <= t_star for t in trials
            )

    horizon = cfg.horizon if cfg.horizon is not None else cfg.rounds_cap
    report = bound_report(horizon, cfg.bound_config()) if cfg.delta0 > 0 else None
    bounds = report.to_dict() if report is not None else {}
    thm1_applies = cfg.victim is Variant.UCB_REGRET and cfg.attack_enabled
    pulls = np.array([t.target_pulls for t in trials], dtype=float)
    costs = np.array([t.total_cost for t in trials])
    comparison = [
        {
            "quantity": "target_pulls",
            "bound": bounds.get("thm1_target_pulls_lb") if thm1_applies else None,
            "direction": ">=",
            "empirical_min": float(pulls.min()),
            "empirical_mean": float(math.fsum(pulls) / num_trials),
            "empirical_max": float(pulls.max()),
            "rate": rates["pull_bound"],
        },
        {
            "quantity": "total_cost",
            "bound": bounds.get("thm1_cost_ub") if thm1_applies else None,
            "direction": "<=",
            "empirical_min": float(costs.min()),
            "empirical_mean": float(math.fsum(costs) / num_trials),
            "empirical_max": float(costs.max()),
            "rate": rates["cost_bound"],
        },
    ]
    stops = [t.stop_round for t in trials if t.stop_round is not None]
    if cfg.victim is Variant.UCB_BAI and stops:
        comparison.append({
            "quantity": "stop_round",
            "bound": t_star,
            "direction": "<=",
            "empirical_min": float(min(stops)),
            "empirical_mean": float(math.fsum(stops) / len(stops)),
            "empirical_max": float(max(stops)),
            "rate": rates.get("target_stop_by_t_star"),
        })
    return CampaignResult(
        config=cfg, campaign_seed=int(campaign_seed), num_trials=num_trials,
        trials=trials, rates=rates, bounds=bounds, comparison=comparison,
    )
