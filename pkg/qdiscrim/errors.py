"""
Exception types raised by the qdiscrim library and reported by the command line front end.
"""


class QDiscrimError(ValueError):
    """Base class for every domain error raised by qdiscrim"""


class DegenerateAngleError(QDiscrimError):
    """The adaptive measurement angle carries no information (identical states, equal priors)"""


class NonCommutingLimitError(QDiscrimError):
    """The many-copy limit was requested at theta=0 and F=1, where the two limits disagree"""


class IllDefinedProtocolError(QDiscrimError):
    """Quantum data gathering cannot be built for identical signal states"""


class UnsupportedConfigurationError(QDiscrimError):
    """A scheme or formula was asked for a configuration it does not cover (e.g. unequal priors)"""


class EnumerationCapError(QDiscrimError):
    """Full record enumeration would exceed the configured number of copies"""


class UnknownSchemeError(QDiscrimError):
    """Scheme id is not one of the supported tokens"""


class CurveParseError(QDiscrimError):
    """A curve CSV file could not be parsed"""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)
