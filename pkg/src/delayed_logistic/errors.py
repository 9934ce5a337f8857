"""Exception types raised by the package."""


class ParameterError(ValueError):
    """A parameter failed validation.

    The offending field name is kept in ``field`` so callers (the CLI in
    particular) can report it without parsing the message.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class CapacityError(ValueError):
    """A brute-force routine was asked for more work than it allows."""


class ResourceError(RuntimeError):
    """A simulation would exceed the configured window or jump limits."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class DivergenceError(ArithmeticError):
    """The DDE integrator produced a non-finite or non-positive value."""

    def __init__(self, time, message):
        super().__init__(f"t={time!r}: {message}")
        self.time = time


class PreconditionError(ValueError):
    """An input object lacks data that the operation requires."""


class ReplicaError(RuntimeError):
    """One replica of an ensemble failed; carries its index and seed."""

    def __init__(self, index, seed, cause):
        super().__init__(f"replica {index} (seed {seed}) failed: {cause!r}")
        self.index = index
        self.seed = seed
