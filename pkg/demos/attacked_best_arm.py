"""
Fooling best-arm identification
===============================

The UCB best-arm identifier stops once one arm's pulls dominate all others
combined by the stopping ratio. Under attack, the target (the worse arm)
wins, and does so before the predicted round t*.
"""

from bandit_attack_lab import BanditInstance, EpisodeConfig, run_campaign, run_episode

instance = BanditInstance(means=(0.9, 0.5), sigma=0.1)
attacked = EpisodeConfig(instance, victim="ucb_bai", attack_enabled=True,
                         delta0=0.7, delta=0.05, bai_beta=2.0, seed=3)
log = run_episode(attacked)
print(f"t* = {attacked.t_star()}, stopped at round {log.stop_round}, winner arm {log.winner}")
print("arm sequence:", log.arms.tolist())
print("perturbations:", [round(a, 3) for a in log.alphas.tolist()])

# %%
# Without the attacker the learner names arm 0, as it should.
clean = EpisodeConfig(instance, victim="ucb_bai", attack_enabled=False, bai_beta=2.0, seed=3)
log = run_episode(clean)
print(f"clean run stopped at round {log.stop_round}, winner arm {log.winner}")

# %%
# Over 200 seeded trials.
for name, cfg in (("attacked", attacked), ("clean", clean)):
    res = run_campaign(cfg, 200, campaign_seed=1)
    print(name, {k: v for k, v in res.rates.items() if v is not None})
