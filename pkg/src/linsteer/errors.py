"""Exception hierarchy shared by the library and the command line."""


class SteeringError(Exception):
    """Base class for all errors raised by linsteer."""


class StateError(SteeringError, ValueError):
    """A state vector or density matrix failed validation."""


class SymmetryError(SteeringError, ValueError):
    """A matrix expected to be Hermitian is not."""


class SettingsError(SteeringError, ValueError):
    """Measurement settings are malformed or violate an operation's precondition."""


class ConstraintError(SettingsError):
    """Settings are well formed but cannot satisfy a requested geometric constraint."""


class CrossCheckError(SteeringError, RuntimeError):
    """Two independent computation paths disagreed beyond tolerance."""


class InputError(SteeringError, ValueError):
    """An input or output file could not be read, parsed or written."""
