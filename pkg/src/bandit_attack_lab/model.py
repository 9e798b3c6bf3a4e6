"""Bandit instances, reward sampling and gaps.

Arms are 0-based. The target arm is always the last one (index ``K - 1``);
reorder ``means`` to target a different arm.

Randomness comes from :class:`numpy.random.Generator` over the PCG64 bit
generator, which numpy documents as stable across platforms and releases.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigurationError, ContractViolation

BERNOULLI_SIGMA = 0.5


class RewardFamily(str, Enum):
    GAUSSIAN = "gaussian"
    BERNOULLI = "bernoulli"


@dataclass(frozen=True)
class BanditInstance:
    """Ground truth of a stochastic bandit with sigma^2-sub-Gaussian rewards."""

    means: tuple[float, ...]
    sigma: float
    reward_family: RewardFamily = RewardFamily.GAUSSIAN

    def __post_init__(self):
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "reward_family", RewardFamily(self.reward_family))
        if len(self.means) < 2:
            raise ConfigurationError(f"need at least 2 arms, got {len(self.means)}")
        if not np.all(np.isfinite(self.means)):
            raise ConfigurationError("means must be finite")
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise ConfigurationError(f"sigma must be positive, got {self.sigma}")
        if self.reward_family is RewardFamily.BERNOULLI:
            if any(m < 0 or m > 1 for m in self.means):
                raise ConfigurationError("bernoulli means must lie in [0, 1]")
            if self.sigma != BERNOULLI_SIGMA:
                raise ConfigurationError("bernoulli rewards require sigma = 1/2")

    @property
    def num_arms(self) -> int:
        return len(self.means)

    @property
    def target_arm(self) -> int:
        return self.num_arms - 1

    @property
    def best_arm(self) -> int:
        """Index of the largest true mean (lowest index on ties)."""
        return int(np.argmax(self.means))

    def to_dict(self) -> dict:
        return {
            "means": list(self.means),
            "sigma": self.sigma,
            "reward_family": self.reward_family.value,
        }


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit unsigned seed."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def sample_reward(instance: BanditInstance, arm: int, rng: np.random.Generator) -> float:
    """Draw one pre-attack reward from ``arm``.

    Consumes exactly one standard normal (gaussian) or one uniform (bernoulli)
    from ``rng``, which is what the episode kernel does per round too.
    """
    if not 0 <= arm < instance.num_arms:
        raise ContractViolation(f"arm {arm} out of range for K={instance.num_arms}")
    mu = instance.means[arm]
    if instance.reward_family is RewardFamily.GAUSSIAN:
        return mu + instance.sigma * rng.standard_normal()
    return 1.0 if rng.random() < mu else 0.0


def gaps(instance: BanditInstance) -> np.ndarray:
    """Per-arm gaps ``max(mu_i - mu_target, 0)``; zero at the target."""
    means = np.asarray(instance.means)
    return np.maximum(means - means[instance.target_arm], 0.0)
