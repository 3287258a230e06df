"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front-end can map
failures to distinct process exit statuses without a lookup table.
"""


class LZEError(Exception):
    exit_code = 10


class InvalidProbability(LZEError, ValueError):
    exit_code = 3


class InvalidRatio(LZEError, ValueError):
    exit_code = 3


class InvalidInputs(LZEError, ValueError):
    exit_code = 3


class InvalidParams(LZEError, ValueError):
    exit_code = 3


class InvalidDecay(LZEError, ValueError):
    exit_code = 3


class InvalidTokenCount(LZEError, ValueError):
    exit_code = 3


class ValidationError(LZEError, ValueError):
    """A config field is outside its allowed range."""

    exit_code = 3

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class ParseError(LZEError, ValueError):
    exit_code = 4


class EmptyPool(LZEError, ValueError):
    exit_code = 3


class EmptyGroup(LZEError, ValueError):
    exit_code = 3


class EmptyHistory(LZEError, ValueError):
    exit_code = 3


class InsufficientHistory(LZEError, ValueError):
    exit_code = 3


class UnknownPrompt(LZEError, KeyError):
    exit_code = 6

    def __str__(self):
        return Exception.__str__(self)


class NotActive(LZEError):
    exit_code = 7


class NotPruned(LZEError):
    exit_code = 7


class MismatchedGroup(LZEError, ValueError):
    exit_code = 3


class MalformedLine(LZEError, ValueError):
    """A rollout-log line failed to parse; ``lineno`` is 1-based."""

    exit_code = 4

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class OutOfOrderStep(LZEError):
    exit_code = 5


class UnknownPromptBeforeInit(LZEError):
    exit_code = 6
