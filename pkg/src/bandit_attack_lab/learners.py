"""UCB learners that see only post-attack rewards.

Two variants share one state type:

* ``ucb_regret``: index ``mu_hat_i + 3 sigma sqrt(ln t / N_i)``.
* ``ucb_bai``: index ``mu_hat_i + (1 + beta) * sigma sqrt(2 alpha ln t / N_i)``
  with ``alpha = ((2 + beta) / beta)**2``, plus the count-ratio stopping rule.

``t`` inside an index is the round being decided (``state.t + 1``). Both
variants pull each arm once, in order, before using the index. Ties go to
the lowest arm index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .bounds import stop_ratio as _stop_ratio
from .errors import ConfigurationError, ContractViolation


class Variant(str, Enum):
    UCB_REGRET = "ucb_regret"
    UCB_BAI = "ucb_bai"


@dataclass
class LearnerState:
    num_arms: int
    sigma: float
    variant: Variant = Variant.UCB_REGRET
    bai_beta: float = 2.0
    stop_ratio: Optional[float] = None
    t: int = 0
    counts: np.ndarray = field(default=None)
    post_sums: np.ndarray = field(default=None)

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if self.num_arms < 2:
            raise ConfigurationError("num_arms must be >= 2")
        if not self.sigma > 0:
            raise ConfigurationError("sigma must be positive")
        if self.stop_ratio is None:
            self.stop_ratio = _stop_ratio(self.bai_beta)
        elif not self.stop_ratio > 0:
            raise ConfigurationError("stop_ratio must be positive")
        if self.counts is None:
            self.counts = np.zeros(self.num_arms, dtype=np.int64)
        if self.post_sums is None:
            self.post_sums = np.zeros(self.num_arms)

    def means(self) -> np.ndarray:
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.post_sums / self.counts


def confidence_radius(count: int, t: float, alpha: float, sigma: float) -> float:
    """``sigma * sqrt(2 alpha ln t / count)``, the sub-Gaussian deviation at confidence ``t**-alpha``."""
    if t < 2:
        raise ContractViolation(f"t must be >= 2 for a positive log, got {t}")
    if count < 1:
        raise ContractViolation(f"count must be >= 1, got {count}")
    return sigma * math.sqrt(2.0 * alpha * math.log(t) / count)


def _argmax_lowest(values) -> int:
    best, best_i = -math.inf, 0
    for i, v in enumerate(values):
        if v > best:
            best, best_i = v, i
    return best_i


def ucb_select(state: LearnerState) -> int:
    if state.variant is not Variant.UCB_REGRET:
        raise ContractViolation("ucb_select needs a ucb_regret learner")
    if state.t < state.num_arms:
        return state.t
    log_t = math.log(state.t + 1)
    return _argmax_lowest(
        state.post_sums[i] / state.counts[i]
        + 3.0 * state.sigma * math.sqrt(log_t / state.counts[i])
        for i in range(state.num_arms)
    )


def bai_select(state: LearnerState) -> int:
    if state.variant is not Variant.UCB_BAI:
        raise ContractViolation("bai_select needs a ucb_bai learner")
    if state.t < state.num_arms:
        return state.t
    scale = 1.0 + state.bai_beta
    t_next = state.t + 1
    return _argmax_lowest(
        state.post_sums[i] / state.counts[i]
        + scale * confidence_radius(int(state.counts[i]), t_next, state.stop_ratio, state.sigma)
        for i in range(state.num_arms)
    )


def select(state: LearnerState) -> int:
    if state.variant is Variant.UCB_REGRET:
        return ucb_select(state)
    return bai_select(state)


@dataclass(frozen=True)
class StopDecision:
    stopped: bool
    winner: Optional[int] = None


def bai_stop_check(state: LearnerState) -> StopDecision:
    """Stop once some arm's count is at least ``stop_ratio`` times all others combined."""
    counts = state.counts
    total = int(counts.sum())
    ratio = state.stop_ratio
    hits = [i for i in range(state.num_arms) if counts[i] >= ratio * (total - counts[i])]
    if not hits:
        return StopDecision(False)
    if ratio > 1:
        assert len(hits) == 1, f"stopping rule satisfied by several arms: {hits}"
    winner = int(np.argmax(counts))
    return StopDecision(True, winner)


def observe(state: LearnerState, arm: int, reward: float) -> LearnerState:
    if not 0 <= arm < state.num_arms:
        raise ContractViolation(f"arm {arm} out of range")
    state.counts[arm] += 1
    state.post_sums[arm] += reward
    state.t += 1
    return state
