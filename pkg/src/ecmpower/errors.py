"""Exception hierarchy shared by all modules and mapped to CLI exit codes."""


class EcmPowerError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class InputError(EcmPowerError, ValueError):
    """Malformed or missing input file; carries the file and line when known."""

    exit_code = 2

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class DomainError(EcmPowerError, ValueError):
    """Inputs are well-formed but outside the domain of the model."""

    exit_code = 3


class FitError(DomainError):
    """Least-squares design is rank deficient or has too few points."""
