"""Exception hierarchy shared across the toolkit."""


class GbtkError(Exception):
    """Base class for all toolkit errors."""


class InvalidBall(GbtkError):
    """A ball was constructed from an empty or inconsistent member list."""


class MissingLabels(GbtkError):
    """An operation requiring labels was called on an unlabeled dataset."""


class DimensionError(GbtkError):
    """Operands have mismatched feature dimensions."""


class InvalidInput(GbtkError):
    """An argument violates a documented precondition."""


class SplitStalled(GbtkError):
    """A split produced no usable partition; the caller keeps the parent ball."""


class EmptyModel(GbtkError):
    """No balls survived generation and filtering."""


class SingleClass(GbtkError):
    """SVM training requires at least one ball of each class."""


class NonFinite(GbtkError):
    """A numeric quantity became NaN or infinite."""


class DegenerateDual(GbtkError):
    """Dual recovery failed because the weighted center sum vanishes."""


class BudgetTooSmall(GbtkError):
    """The evaluation budget cannot cover even one ball."""


class NonFiniteObjective(GbtkError):
    """The black-box objective returned NaN or infinity."""


class ParseError(GbtkError):
    """A CSV cell failed to parse; carries a 1-based location."""

    def __init__(self, line: int, column: int, message: str = ""):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message or 'cannot parse value'}")


class RaggedRows(GbtkError):
    """CSV rows have inconsistent field counts."""


class EmptyFile(GbtkError):
    """The input file contains no data rows."""


class ConfigError(GbtkError):
    """A command-line or config value is invalid."""
