"""Exception types shared across the package."""


class BimlabError(Exception):
    """Base class for every error raised by this package."""


class UnknownSymbolError(BimlabError):
    """A word or arc refers to a token outside the relevant alphabet."""


class PreconditionError(BimlabError):
    """An operation was called on a machine that violates its requirements."""


class DivergingRelationError(BimlabError):
    """The machine has an epsilon-input cycle with nonempty output, so some
    input would map to infinitely many outputs."""


class NonFunctionalError(BimlabError):
    """A single input word produced two distinct outputs."""

    def __init__(self, word, first, second):
        self.word = tuple(word)
        self.first = tuple(first)
        self.second = tuple(second)
        super().__init__(
            f"input {'.'.join(self.word) or '-'} has distinct outputs "
            f"{'.'.join(self.first) or '-'} and {'.'.join(self.second) or '-'}"
        )


class FormatError(BimlabError):
    """A machine file failed to parse."""

    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class ResourceLimitError(BimlabError):
    """An enumeration or construction exceeded its configured cap."""


class ConsistencyError(BimlabError):
    """An internal cross-check failed; indicates a bug, not bad input."""


class ExperimentError(BimlabError):
    """An experiment cell violated one of its asserted properties."""
