"""Exception hierarchy shared by the algebra engine, the comb simulator and the CLI.

The CLI maps these onto exit codes (see `app.py`):
- 1 for usage, parse and config problems
- 2 for degenerate results (`NonIsolatedError`)
- 3 for resource limits (`LimitExceeded`)
"""
from typing import Optional


class CombkitError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


# --- algebra ----------------------------------------------------------------

class PolynomialSyntaxError(CombkitError):
    def __init__(self, message: str, position: int, text: str = ''):
        self.position = position
        self.text = text
        super().__init__(f'{message} at position {position}')


class UnknownVariableError(PolynomialSyntaxError):
    def __init__(self, name: str, position: int, text: str = ''):
        self.name = name
        super().__init__(f'unknown variable {name!r}', position, text)


class NegativeExponentError(PolynomialSyntaxError):
    def __init__(self, position: int, text: str = ''):
        super().__init__('negative exponent', position, text)


class VariableMismatchError(CombkitError):
    pass


class EmptyBasisError(CombkitError):
    pass


class LimitExceeded(CombkitError):
    """A Groebner computation ran past its configured degree or pair budget."""

    exit_code = 3

    def __init__(self, what: str, value: int, limit: int):
        self.what = what
        self.value = value
        self.limit = limit
        super().__init__(f'{what} {value} exceeds limit {limit}')


class NonIsolatedError(CombkitError):
    exit_code = 2


class InvalidParameterError(CombkitError):
    pass


class InvalidGermError(CombkitError):
    pass


# --- simulation ---------------------------------------------------------------

class BlowupError(CombkitError):
    """Raised by `evolve` when a field norm leaves the configured bound.

    `trajectory` holds the snapshots recorded so far, flagged with the step.
    """

    def __init__(self, step: int, trajectory=None):
        self.step = step
        self.trajectory = trajectory
        super().__init__(f'field norm blew up at step {step}')


class NoSpectralLineError(CombkitError):
    pass


class NoTeethError(CombkitError):
    pass


class FidelityError(CombkitError):
    pass


# --- configuration -------------------------------------------------------------

class ConfigError(CombkitError):
    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f'{path}: {message}' if path else message)
