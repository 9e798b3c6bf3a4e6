"""Compiled episode loop.

Mirrors, expression for expression, ``learners.select``/``observe``,
``attacker.compute_attack``/``record_round`` and ``model.sample_reward`` so
that a compiled episode and a step-by-step reference replay agree bit for bit
(checked in the test suite). Keep the two in sync.
"""

import math

import numpy as np
from numba import njit

REGRET = 0
BAI = 1
GAUSSIAN = 0
BERNOULLI = 1


@njit(cache=True, nogil=True)
def run_chunk(
    means, sigma, family, noise,
    variant, bai_beta, stop_ratio, use_stop,
    attack, delta0, delta,
    counts, post_sums, pre_sums, cum_attack,
    t0, out_arm, out_pre, out_alpha, out_post,
):
    """Play ``len(noise)`` rounds starting after round ``t0``.

    Returns ``(rounds_played, winner)``; ``winner`` is -1 unless the stopping
    rule fired, in which case the chunk ends at that round.
    """
    k = means.shape[0]
    target = k - 1
    n = noise.shape[0]
    pi2 = math.pi ** 2
    for j in range(n):
        t = t0 + j  # rounds completed so far
        # select
        if t < k:
            arm = t
        else:
            t_next = t + 1
            best = -np.inf
            arm = 0
            if variant == REGRET:
                log_t = math.log(t_next)
                c = 3.0 * sigma
                for i in range(k):
                    v = post_sums[i] / counts[i] + c * math.sqrt(log_t / counts[i])
                    if v > best:
                        best = v
                        arm = i
            else:
                scale = 1.0 + bai_beta
                two_alpha = 2.0 * stop_ratio
                log_t = math.log(t_next)
                for i in range(k):
                    rad = sigma * math.sqrt(two_alpha * log_t / counts[i])
                    v = post_sums[i] / counts[i] + scale * rad
                    if v > best:
                        best = v
                        arm = i
        # sample
        if family == GAUSSIAN:
            r0 = means[arm] + sigma * noise[j]
        else:
            r0 = 1.0 if noise[j] < means[arm] else 0.0
        # attack
        a = 0.0
        if attack and arm != target and t + 1 > k:
            n_k = counts[target]
            mean_k = (pre_sums[target] - cum_attack[target]) / n_k
            beta = math.sqrt(
                2.0 * sigma * sigma / n_k * math.log(pi2 * k * (n_k * n_k) / (3.0 * delta))
            )
            level = mean_k - 2.0 * beta - delta0
            raw = (pre_sums[arm] + r0) - cum_attack[arm] - (counts[arm] + 1) * level
            if raw > 0:
                a = raw
        r = r0 - a
        pre_sums[arm] += r0
        cum_attack[arm] += a
        counts[arm] += 1
        post_sums[arm] += r
        out_arm[j] = arm
        out_pre[j] = r0
        out_alpha[j] = a
        out_post[j] = r
        # stop
        if variant == BAI and use_stop and t + 1 >= k:
            total = t + 1
            hit = False
            for i in range(k):
                if counts[i] >= stop_ratio * (total - counts[i]):
                    hit = True
            if hit:
                winner = 0
                for i in range(1, k):
                    if counts[i] > counts[winner]:
                        winner = i
                return j + 1, winner
    return n, -1
