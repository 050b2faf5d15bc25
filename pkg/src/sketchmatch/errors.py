"""Exception types raised across the package."""


class SketchMatchError(ValueError):
    """Base class for all package errors."""


class DimensionMismatch(SketchMatchError):
    pass


class NonFiniteInput(SketchMatchError):
    pass


class EmptyDimension(SketchMatchError):
    pass


class BadParameter(SketchMatchError):
    pass


class BadValue(SketchMatchError):
    pass


class RoleAlreadyFixed(SketchMatchError):
    pass


class OracleTooLarge(SketchMatchError):
    pass


class EmptyInput(SketchMatchError):
    pass


class EmptyFile(SketchMatchError):
    pass


class RaggedRows(SketchMatchError):
    pass


class ParseError(SketchMatchError):
    """A CSV cell that is not a real number; positions are 1-based."""

    def __init__(self, line, column, text=""):
        self.line = line
        self.column = column
        self.text = text
        super().__init__(f"ParseError(line {line}, column {column}): {text!r}")
