"""Reward-poisoning attacks on UCB learners and UCB best-arm identification."""

from .attacker import AttackerState, AttackOutcome, beta_width, compute_attack, record_round
from .bounds import (
    BoundConfig,
    BoundReport,
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
from .errors import ConfigurationError, ContractViolation, ThresholdError, UndefinedBoundError
from .harness import (
    CampaignResult,
    EpisodeConfig,
    EpisodeLog,
    TrialSummary,
    check_event_E,
    check_lemma1,
    check_ratio_bound,
    run_campaign,
    run_episode,
    run_episode_reference,
    summarize,
    trial_seed,
)
from .learners import (
    LearnerState,
    StopDecision,
    Variant,
    bai_select,
    bai_stop_check,
    confidence_radius,
    observe,
    ucb_select,
)
from .model import BanditInstance, RewardFamily, gaps, make_rng, sample_reward

__version__ = "0.1.0"
