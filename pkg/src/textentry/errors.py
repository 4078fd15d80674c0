"""Exception types shared across the package.

Everything derives from :class:`TextEntryError` so the CLI can map any
library failure to a data-error exit code with one ``except`` clause.
"""


class TextEntryError(Exception):
    """Base class for all errors raised by this package."""


class UndefinedMetricError(TextEntryError, ValueError):
    """A metric's denominator is zero for the given inputs."""


class NoCorrectionsError(UndefinedMetricError):
    """CPC requested for a stream that contains no correction runs."""


class InvalidChoiceCountError(TextEntryError, ValueError):
    pass


class InconsistentInputError(TextEntryError, ValueError):
    pass


class ReplayError(TextEntryError, ValueError):
    """A keystroke stream cannot be replayed.

    ``seq`` is the sequence number of the offending event.
    """

    def __init__(self, message: str, seq: int):
        super().__init__(f"seq {seq}: {message}")
        self.seq = seq


class KeylogFormatError(TextEntryError, ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class LexiconError(TextEntryError, ValueError):
    """Malformed lexicon, bigram or script file. ``line`` is 1-based, 0 if unknown."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class DuplicateRadicalError(LexiconError):
    pass


class CoverageError(TextEntryError, KeyError):
    """A character is not covered by the lexicon."""

    def __init__(self, char: str, offset: int, context: str = ""):
        msg = f"character {char!r} at offset {offset} not covered by lexicon"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)
        self.char = char
        self.offset = offset

    def __str__(self) -> str:
        # KeyError would repr() the message otherwise
        return self.args[0]


class UnknownCodeError(TextEntryError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


class UnknownSyllableError(TextEntryError, ValueError):
    pass


class UnparseableKeysError(TextEntryError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset


class BufferOverflowError(TextEntryError, ValueError):
    pass


class SweepError(TextEntryError):
    """A sweep condition failed; ``k`` identifies the context length."""

    def __init__(self, k: int, cause: Exception):
        super().__init__(f"context length {k}: {cause}")
        self.k = k
        self.cause = cause
