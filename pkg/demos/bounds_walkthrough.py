"""
Bounds and the sample-complexity round
======================================

Evaluate the pull cap, the target-pull and cost guarantees, the margin
threshold that makes the round condition monotone, and the first round at
which the attacked best-arm identifier must stop on the target.
"""

from bandit_attack_lab import (
    BoundConfig,
    ThresholdError,
    delta0_threshold,
    f_of_t,
    lemma1_cap,
    sample_complexity_round,
    stop_ratio,
    thm1_cost_ub,
    thm1_target_pulls_lb,
)

cfg = BoundConfig(num_arms=5, sigma=0.1, delta0=0.2, delta=0.05, bai_beta=2.0,
                  gaps=(0.4, 0.3, 0.2, 0.1, 0.0))
T = 10_000
print(f"pull cap per non-target arm at T={T}: {lemma1_cap(T, cfg):.3f}")
print(f"guaranteed target pulls:            {thm1_target_pulls_lb(T, cfg):.1f}")
print(f"cost upper bound:                   {thm1_cost_ub(T, cfg):.3f}")

# %%
# The stopping ratio grows quickly as beta shrinks.
for beta in (0.5, 1, 2, 5, 50):
    print(f"beta={beta:<5} stop ratio={stop_ratio(beta):.3f}")

# %%
# With K=5 the required margin is large compared with sigma, so t* is refused.
print("margin threshold, K=5:", round(delta0_threshold(cfg), 4))
try:
    sample_complexity_round(cfg)
except ThresholdError as exc:
    print("refused:", exc)

# %%
# Two arms, margin 0.7 just above the 0.6708 threshold.
two = BoundConfig(num_arms=2, sigma=0.1, delta0=0.7, delta=0.05, bai_beta=2.0)
t_star = sample_complexity_round(two)
print("t* =", t_star)
for t in (1, 5, 10, 12, 13, 20):
    print(f"f({t}) = {f_of_t(t, two):.3f}")
