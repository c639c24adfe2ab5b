"""Exception types shared across the package."""


class SimulationError(Exception):
    """Base class for every error this package raises on purpose."""


class DomainError(SimulationError, ValueError):
    """An argument lies outside its documented domain."""


class InvariantError(SimulationError, ValueError):
    """A state or record violates one of its structural invariants."""


class UsageError(SimulationError, RuntimeError):
    """An operation was invoked in a way the protocol forbids."""


class ConfigError(SimulationError, ValueError):
    """A scenario configuration was rejected.

    Collects every offending field so a bad config is reported once,
    in full, instead of one field at a time.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid scenario config: " + "; ".join(self.problems))
