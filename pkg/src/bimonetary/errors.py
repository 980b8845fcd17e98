"""Exception hierarchy shared by all modules.

Input/validation problems and numerical failures are kept in separate
branches so the CLI can map them to distinct exit codes.
"""

from __future__ import annotations


class BimonetaryError(Exception):
    """Base class for every error raised by this package."""


class InputError(BimonetaryError):
    """Malformed user input: files, schemas, names, shapes."""


class NumericalError(BimonetaryError):
    """Estimation or optimization failure on structurally valid input."""


# -- panel ------------------------------------------------------------------

class MissingColumn(InputError):
    def __init__(self, name: str):
        super().__init__(f"required column {name!r} is missing")
        self.name = name


class UnparseableValue(InputError):
    def __init__(self, row: int, column: str, text: str):
        super().__init__(f"row {row}, column {column!r}: cannot parse {text!r}")
        self.row = row
        self.column = column
        self.text = text


class DuplicateDate(InputError):
    def __init__(self, date):
        super().__init__(f"duplicate date {date.isoformat()}")
        self.date = date


class LeadingOrTrailingGap(InputError):
    """Interpolation requires present values at both ends of the series."""


class SeriesTooShort(InputError):
    pass


class DegenerateRange(NumericalError):
    """Min-max rescaling of a constant series is undefined."""


# -- category ---------------------------------------------------------------

class IncompatibleEndpoints(InputError):
    pass


class UnknownVariable(InputError):
    def __init__(self, name: str):
        super().__init__(f"unknown variable {name!r}")
        self.name = name


class DivisionByZero(NumericalError):
    def __init__(self, date, context: str = ""):
        where = f" while evaluating {context}" if context else ""
        super().__init__(f"division by zero at {date}{where}")
        self.date = date


class UnmappedObject(InputError):
    pass


class UnmappedMorphism(InputError):
    pass


# -- regression / econometrics ----------------------------------------------

class RankDeficient(NumericalError):
    """Collinear regressors: relative pivot below threshold in QR."""


class InsufficientRows(InputError):
    pass


class InsufficientObservations(InputError):
    pass


class SingularMomentMatrix(NumericalError):
    pass


class NonPositiveDefiniteSigma(NumericalError):
    pass


class ShapeMismatch(InputError):
    pass


class ConstantColumn(NumericalError):
    def __init__(self, name: str = ""):
        super().__init__(f"column {name!r} is constant" if name else "constant column")
        self.name = name


class AllZeroWeights(NumericalError):
    """Every mean rolling correlation is zero or undefined."""


# -- optimization -----------------------------------------------------------

class NonFiniteObjective(NumericalError):
    pass


class EmptyResult(InputError):
    pass
