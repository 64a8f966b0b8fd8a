"""Exception hierarchy.

Numerical failures derive from :class:`NumericalError`; malformed inputs and
files derive from :class:`InputError`. The CLI maps these families onto
distinct exit codes.
"""


class SpecBudgetError(Exception):
    """Base class for all package errors."""


class NumericalError(SpecBudgetError, ArithmeticError):
    pass


class InputError(SpecBudgetError, ValueError):
    pass


class NonFiniteError(NumericalError, ValueError):
    """Matrix contains NaN or Inf entries."""


class ConvergenceFailure(NumericalError):
    """An iterative decomposition did not converge."""


class ZeroEnergyError(NumericalError, ValueError):
    """Total spectral energy is zero, so energy ratios are undefined."""


class RankCollapseError(NumericalError):
    """The random sketch of a matrix has numerically zero columns."""


class OutOfRangeError(InputError):
    pass


class BadProfileError(InputError):
    pass


class BadDimsError(InputError):
    pass


class MisalignedInputError(InputError):
    pass


class EmptyInputError(InputError):
    pass


class MatrixFormatError(InputError):
    """Base class for matrix file decoding problems."""


class BadMagicError(MatrixFormatError):
    pass


class BadVersionError(MatrixFormatError):
    pass


class TruncatedPayloadError(MatrixFormatError):
    pass


class ParseError(MatrixFormatError):
    """Text input could not be parsed.

    ``line`` and ``field`` locate the problem when known.
    """

    def __init__(self, message, *, source=None, line=None, field=None):
        self.source = source
        self.line = line
        self.field = field
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
