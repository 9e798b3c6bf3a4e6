"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A parameter lies outside the range where a formula or rule is defined."""


class UndefinedBoundError(ConfigurationError):
    """A bound divides by the attack margin and the margin is zero."""


class ThresholdError(ConfigurationError):
    """The attack margin does not exceed the monotonicity threshold, so no round is guaranteed."""


class ContractViolation(ValueError):
    """A caller broke an operation's precondition (bad arm index, unpulled arm, ...)."""
