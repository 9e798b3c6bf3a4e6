"""Closed-form bounds for the attacked UCB learner and the attacked best-arm identifier.

Every ``log`` is natural. Bounds are returned as floats; compare them to
integer counts directly instead of rounding first.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, ThresholdError, UndefinedBoundError


def stop_ratio(bai_beta: float) -> float:
    """Count-domination ratio ``((2 + beta) / beta)**2`` of the stopping rule."""
    if not bai_beta > 0:
        raise ConfigurationError(f"bai_beta must be positive, got {bai_beta}")
    return ((2.0 + bai_beta) / bai_beta) ** 2


@dataclass(frozen=True)
class BoundConfig:
    num_arms: int
    sigma: float
    delta0: float
    delta: float = 0.05
    bai_beta: float = 2.0
    gaps: Optional[tuple[float, ...]] = None
    stop_ratio_override: Optional[float] = None

    def __post_init__(self):
        if self.num_arms < 2:
            raise ConfigurationError(f"num_arms must be >= 2, got {self.num_arms}")
        if not self.sigma > 0:
            raise ConfigurationError(f"sigma must be positive, got {self.sigma}")
        if self.delta0 < 0:
            raise ConfigurationError(f"delta0 must be >= 0, got {self.delta0}")
        if not 0 < self.delta <= 0.5:
            raise ConfigurationError(f"delta must lie in (0, 1/2], got {self.delta}")
        if self.stop_ratio_override is not None and not self.stop_ratio_override > 0:
            raise ConfigurationError("stop_ratio_override must be positive")
        stop_ratio(self.bai_beta)
        if self.gaps is not None:
            g = tuple(float(x) for x in self.gaps)
            if len(g) != self.num_arms or any(x < 0 for x in g):
                raise ConfigurationError("gaps must be K nonnegative values")
            object.__setattr__(self, "gaps", g)

    @property
    def alpha(self) -> float:
        if self.stop_ratio_override is not None:
            return float(self.stop_ratio_override)
        return stop_ratio(self.bai_beta)


def _log_coef(cfg: BoundConfig) -> float:
    if cfg.delta0 == 0:
        raise UndefinedBoundError("delta0 = 0 makes 9 sigma^2 / delta0^2 undefined")
    return 9.0 * cfg.sigma**2 / cfg.delta0**2


def _check_horizon(horizon, cfg: BoundConfig):
    if horizon < 2 * cfg.num_arms:
        raise ConfigurationError(f"horizon {horizon} must be >= 2K = {2 * cfg.num_arms}")


def lemma1_cap(horizon: float, cfg: BoundConfig) -> float:
    """Cap ``2 + (9 sigma^2 / delta0^2) ln T`` on every non-target arm's pulls.

    The ``min`` with the target's own count is applied by the caller, which
    knows that count.
    """
    _check_horizon(horizon, cfg)
    return 2.0 + _log_coef(cfg) * math.log(horizon)


def thm1_target_pulls_lb(horizon: float, cfg: BoundConfig) -> float:
    return horizon - (cfg.num_arms - 1) * lemma1_cap(horizon, cfg)


def thm1_cost_ub(horizon: float, cfg: BoundConfig) -> float:
    """Upper bound on the cumulative attack cost up to ``horizon``."""
    if cfg.gaps is None:
        raise ConfigurationError("the cost bound needs the instance gaps")
    c = lemma1_cap(horizon, cfg)
    k = cfg.num_arms
    gap_term = sum(g + cfg.delta0 for g in cfg.gaps[: k - 1])
    log_arg = math.pi**2 * k * c**2 / (3.0 * cfg.delta)
    return c * gap_term + cfg.sigma * (k - 1) * math.sqrt(32.0 * c * math.log(log_arg))


def delta0_threshold(cfg: BoundConfig) -> float:
    """Smallest margin (exclusive) that makes ``f`` increasing from t = 1."""
    return 3.0 * cfg.sigma * math.sqrt((cfg.num_arms - 1) * (1.0 + cfg.alpha))


def f_of_t(t: float, cfg: BoundConfig) -> float:
    if t < 1:
        raise ConfigurationError(f"t must be >= 1, got {t}")
    return t - (cfg.alpha + 1.0) * (cfg.num_arms - 1) * _log_coef(cfg) * math.log(t)


def round_condition_rhs(cfg: BoundConfig) -> float:
    return 2.0 * (cfg.alpha + 1.0) * (cfg.num_arms - 1)


def round_condition_holds(t: int, cfg: BoundConfig) -> bool:
    return f_of_t(t, cfg) >= round_condition_rhs(cfg)


def sample_complexity_round(cfg: BoundConfig) -> int:
    """Smallest integer round at which the attacked identifier must have stopped on the target.

    Refuses (``ThresholdError``) unless ``delta0`` exceeds
    :func:`delta0_threshold`, since only then is ``f`` increasing and the
    first crossing the answer.
    """
    threshold = delta0_threshold(cfg)
    if not cfg.delta0 > threshold:
        raise ThresholdError(
            f"delta0={cfg.delta0} must exceed the monotonicity threshold "
            f"3*sigma*sqrt((K-1)(1+alpha)) = {threshold:.6g}"
        )
    rhs = round_condition_rhs(cfg)
    lo, hi = 1, 2
    while f_of_t(hi, cfg) < rhs:
        lo, hi = hi, hi * 2
    # invariant: f(lo) < rhs <= f(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f_of_t(mid, cfg) >= rhs:
            hi = mid
        else:
            lo = mid
    assert f_of_t(hi, cfg) >= rhs and f_of_t(hi - 1, cfg) < rhs
    return hi


def cost_order_report(horizon: float, cfg: BoundConfig) -> float:
    """Dominant-order cost estimate, log log factors dropped. Display only."""
    if cfg.gaps is None:
        raise ConfigurationError("the cost estimate needs the instance gaps")
    k = cfg.num_arms
    log_t = math.log(horizon)
    return sum(cfg.gaps[: k - 1]) * log_t + cfg.sigma * k * log_t


@dataclass
class BoundReport:
    horizon: int
    stop_ratio: float
    delta0_threshold: float
    lemma1_cap: Optional[float] = None
    thm1_target_pulls_lb: Optional[float] = None
    thm1_cost_ub: Optional[float] = None
    cost_order: Optional[float] = None
    sample_complexity_round: Optional[int] = None
    round_condition_rhs: Optional[float] = None
    notes: list[str] = field(default_factory=list)
    f_values: Optional[list[tuple[int, float]]] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.f_values is not None:
            d["f_values"] = [[int(t), float(v)] for t, v in self.f_values]
        return d


def bound_report(horizon: int, cfg: BoundConfig, f_points: Sequence[int] = ()) -> BoundReport:
    """Evaluate every bound that is defined for ``cfg``; undefined ones stay None with a note."""
    report = BoundReport(
        horizon=int(horizon),
        stop_ratio=cfg.alpha,
        delta0_threshold=delta0_threshold(cfg),
        round_condition_rhs=round_condition_rhs(cfg),
    )
    try:
        report.lemma1_cap = lemma1_cap(horizon, cfg)
        report.thm1_target_pulls_lb = thm1_target_pulls_lb(horizon, cfg)
        if cfg.gaps is not None:
            report.thm1_cost_ub = thm1_cost_ub(horizon, cfg)
            report.cost_order = cost_order_report(horizon, cfg)
    except ConfigurationError as exc:
        report.notes.append(str(exc))
    try:
        report.sample_complexity_round = sample_complexity_round(cfg)
    except ConfigurationError as exc:
        report.notes.append(str(exc))
    if f_points and cfg.delta0 > 0:
        report.f_values = [(int(t), f_of_t(t, cfg)) for t in f_points]
    return report


def f_grid(t_max: int, num: int = 32) -> list[int]:
    """Log-spaced integer rounds in [1, t_max] for an f(t) table."""
    pts = np.unique(np.round(np.geomspace(1, max(t_max, 1), num)).astype(int))
    return [int(p) for p in pts]
