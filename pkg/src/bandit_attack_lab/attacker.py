"""Oracle reward-poisoning attacker.

The attacker sees each round's pre-attack reward and its own bookkeeping,
never the true means. Whenever a non-target arm is pulled after the
initialization rounds it subtracts the smallest ``alpha_t >= 0`` that pushes
that arm's post-attack empirical mean down to

    mu_hat_target(t-1) - 2 * beta(N_target(t-1)) - delta0.

Round protocol: :func:`compute_attack` reads the state as it was *before*
round ``t`` (counts and sums up to ``t - 1``) plus the fresh reward, then
:func:`record_round` folds the round in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ContractViolation


def beta_width(count: int, num_arms: int, sigma: float, delta: float) -> float:
    """Confidence width ``sqrt(2 sigma^2 / N * ln(pi^2 K N^2 / (3 delta)))``."""
    if not 0 < delta <= 0.5:
        raise ConfigurationError(f"delta must lie in (0, 1/2], got {delta}")
    if count < 1:
        raise ContractViolation(f"beta_width needs N >= 1, got {count}")
    return math.sqrt(
        2.0 * sigma**2 / count * math.log(math.pi**2 * num_arms * count**2 / (3.0 * delta))
    )


@dataclass
class AttackOutcome:
    alpha_t: float
    attacked: bool


@dataclass
class AttackerState:
    num_arms: int
    sigma: float
    delta0: float
    delta: float
    pre_sums: np.ndarray = field(default=None)
    cum_attack: np.ndarray = field(default=None)
    counts: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.delta0 < 0:
            raise ConfigurationError(f"delta0 must be >= 0, got {self.delta0}")
        if not 0 < self.delta <= 0.5:
            raise ConfigurationError(f"delta must lie in (0, 1/2], got {self.delta}")
        k = self.num_arms
        if self.pre_sums is None:
            self.pre_sums = np.zeros(k)
        if self.cum_attack is None:
            self.cum_attack = np.zeros(k)
        if self.counts is None:
            self.counts = np.zeros(k, dtype=np.int64)

    @property
    def target(self) -> int:
        return self.num_arms - 1

    def pre_means(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.pre_sums / self.counts

    def post_sums(self) -> np.ndarray:
        return self.pre_sums - self.cum_attack

    def push_level(self) -> float:
        """Level the next attacked arm's post-attack mean is pushed to."""
        k = self.target
        n_k = int(self.counts[k])
        if n_k < 1:
            raise ContractViolation("target arm has no pulls; its empirical mean is undefined")
        mean_k = (self.pre_sums[k] - self.cum_attack[k]) / n_k
        return mean_k - 2.0 * beta_width(n_k, self.num_arms, self.sigma, self.delta) - self.delta0


def compute_attack(state: AttackerState, arm: int, pre_reward: float, t: int) -> AttackOutcome:
    """Closed-form minimal perturbation for round ``t`` (1-based).

    ``state`` must not yet contain round ``t``.
    """
    if arm == state.target or t <= state.num_arms:
        return AttackOutcome(0.0, False)
    n_new = int(state.counts[arm]) + 1
    level = state.push_level()
    raw = (state.pre_sums[arm] + pre_reward) - state.cum_attack[arm] - n_new * level
    alpha_t = raw if raw > 0 else 0.0
    return AttackOutcome(alpha_t, alpha_t > 0)


def record_round(state: AttackerState, arm: int, pre_reward: float, alpha_t: float) -> float:
    """Fold round into ``state`` and return the post-attack reward the learner sees."""
    state.pre_sums[arm] += pre_reward
    state.cum_attack[arm] += alpha_t
    state.counts[arm] += 1
    return pre_reward - alpha_t
