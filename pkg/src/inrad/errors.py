"""Exception hierarchy.

Two families matter for exit codes: anything wrong with what the user
handed us (files, shapes, config) derives from InputError, anything
that went wrong while computing derives from NumericError.
"""


class InradError(Exception):
    """Base class for all errors raised by this package."""


class InputError(InradError):
    """Bad input data or configuration. CLI exit code 2."""


class ShapeError(InputError):
    """Array dimensions do not line up."""


class FormatError(InputError):
    """A file or value could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ParseError(FormatError):
    """Malformed timestamp text."""


class SchemaError(InputError):
    """Files parsed fine but do not fit together (lengths, ordering, widths)."""


class EmptyInputError(InputError):
    """A required input held no rows."""


class RangeError(InputError):
    """A value fell outside its documented domain."""


class ConfigError(InputError):
    """Invalid option value or option combination."""


class SynthSpecError(InputError):
    """Unsatisfiable synthetic dataset description."""


class NumericError(InradError):
    """Numeric failure during computation. CLI exit code 3."""


class TrainingError(NumericError):
    """Training diverged (non-finite loss or gradients).

    Carries the last epoch that still had a finite loss so callers can
    report how far the run got.
    """

    def __init__(self, message: str, last_epoch: int = 0, last_loss: float | None = None):
        super().__init__(message)
        self.last_epoch = last_epoch
        self.last_loss = last_loss
