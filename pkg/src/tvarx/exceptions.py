"""Exception types shared across the library."""


class SingularInformationError(RuntimeError):
    """An information or covariance matrix became numerically singular."""


class MapDegeneracyError(RuntimeError):
    """A forgetting map destroyed positive definiteness of the information matrix."""


class RankDeficiencyError(ValueError):
    """A batch regression problem has rank-deficient weighted normal equations."""


class UnstableTrajectoryError(RuntimeError):
    """A blended coefficient trajectory produced an unstable polynomial."""


class AllGridPointsFailedError(RuntimeError):
    """Every forgetting-factor candidate of a grid search tripped the estimator guard."""


class ConfigError(ValueError):
    """A run configuration file or value is invalid."""
