"""Exception hierarchy shared across the toolkit."""


class PcdmError(Exception):
    """Base class for all toolkit errors."""


class UnsupportedFormat(PcdmError):
    """File extension or pixel layout is not one we read or write."""


class CorruptData(PcdmError):
    """A file exists but cannot be decoded."""


class ValueOutOfRange(PcdmError):
    """A numeric input violates its documented range."""


class DimensionMismatch(PcdmError):
    """Two images that must share dimensions do not."""


class TooSmall(PcdmError):
    """Image is smaller than the analysis window."""


class ParseError(PcdmError):
    """A structured text file does not match its documented format."""


class WrongRowCount(ParseError):
    """Naming table row count does not equal bins cubed."""


class SimplexViolation(ParseError):
    """A probability row does not sum close enough to one."""


class UnknownClass(ParseError):
    """Manifest row names a distortion class outside the known set."""


class MissingFile(PcdmError):
    """A manifest references a file that does not exist."""


class DegenerateTerm(PcdmError):
    """A color term has zero total mass in the naming table."""


class InfeasibleMarginals(PcdmError):
    """Transport marginals do not carry equal mass."""


class DegenerateInput(PcdmError):
    """Statistical input has no variance or too few points."""


class NonConvergence(PcdmError):
    """Iterative fit hit its cap without meeting the tolerance."""
