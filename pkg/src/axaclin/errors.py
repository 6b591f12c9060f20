"""Exception taxonomy; the CLI maps each class to a distinct exit code."""


class AxaclinError(Exception):
    exit_code = 1


class ContractError(AxaclinError):
    """A caller violated an operation's precondition."""

    exit_code = 2


class ConfigError(AxaclinError):
    """Bad or inconsistent configuration (missing columns, bad rules)."""

    exit_code = 2


class DataError(AxaclinError):
    """Dataset-level failure: empty data, degenerate labels, invalid rules."""

    exit_code = 3


class TrainingError(AxaclinError):
    """Training could not produce a usable model."""

    exit_code = 4


class CapacityError(AxaclinError):
    """An exact computation exceeds the configured exhaustive budget."""

    exit_code = 5


class VerificationError(AxaclinError):
    """An explanation failed its soundness or minimality re-check."""

    exit_code = 6
