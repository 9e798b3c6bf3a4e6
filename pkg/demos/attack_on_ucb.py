"""
Poisoning a UCB learner
=======================

One seeded episode: five gaussian arms, the worst arm (the last one) is the
attacker's target. The attacker only ever subtracts reward, and only when a
non-target arm is pulled.
"""

import numpy as np

from bandit_attack_lab import BanditInstance, EpisodeConfig, run_episode, summarize

instance = BanditInstance(means=(0.9, 0.8, 0.7, 0.6, 0.5), sigma=0.1)
cfg = EpisodeConfig(instance, victim="ucb_regret", attack_enabled=True,
                    delta0=0.2, delta=0.05, horizon=10_000, seed=0)
log = run_episode(cfg)

print("pulls per arm:      ", log.counts)
print("pre-attack means:   ", np.round(log.pre_means(), 3))
print("post-attack means:  ", np.round(log.post_means(), 3))
print("total attack cost:  ", round(log.total_cost, 3))

# %%
# The attack is front-loaded: almost all of the cost is paid in the first
# few hundred rounds, after which the learner has stopped exploring.
cum = np.cumsum(log.alphas)
for t in (10, 100, 1000, 10_000):
    print(f"cost after {t:>6} rounds: {cum[t - 1]:.3f}")

# %%
# Unattacked, the same seed sends nearly every pull to the best arm.
clean = run_episode(EpisodeConfig(instance, attack_enabled=False, horizon=10_000, seed=0))
print("pulls without attack:", clean.counts)

print(summarize(log))
