"""Exception types raised by the engine and mapped to CLI exit codes."""

from __future__ import annotations


class TropdualError(Exception):
    """Base class for every error raised by this package."""


class NotSkewSymmetrizable(TropdualError, ValueError):
    """The matrix admits no positive diagonal skew-symmetrizer."""


class InvalidWord(TropdualError, ValueError):
    """A mutation word has an out-of-range direction or an adjacent repeat."""


class NotUnimodular(TropdualError, ArithmeticError):
    """An integer matrix expected to have determinant +1 or -1 does not."""

    def __init__(self, message: str, matrix=None, det: int | None = None):
        super().__init__(message)
        self.matrix = matrix
        self.det = det


class NotDivisible(TropdualError, ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


class MixedSigns(TropdualError):
    """A column that should be sign-coherent has entries of both signs.

    ``word`` is filled in by the walk that hit the violation, so the failure can
    be replayed from the root.
    """

    def __init__(self, matrix, column: int, word: tuple[int, ...] | None = None):
        self.matrix = matrix
        self.column = column
        self.word = word
        super().__init__(self._message())

    def _message(self) -> str:
        where = "" if self.word is None else f" at word {list(self.word)}"
        return f"column {self.column} is not sign-coherent{where}"

    def with_word(self, word) -> "MixedSigns":
        return MixedSigns(self.matrix, self.column, tuple(word))

    def witness(self) -> dict:
        return {
            "matrix": self.matrix.to_json(),
            "column": self.column,
            "word": None if self.word is None else list(self.word),
        }
