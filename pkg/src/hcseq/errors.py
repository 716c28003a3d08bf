"""Exception hierarchy shared by the library and the command line.

Every error carries an ``exit_code`` used by the CLI and an optional
``witness`` payload that is serialised verbatim into the JSON error object.
"""

from __future__ import annotations

from typing import Any

EXIT_NOT_ADMISSIBLE = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NOT_MODULAR = 4
EXIT_STRONGLY_SPLITS = 5
EXIT_BUDGET = 6
EXIT_DOMAIN = 7


class HcseqError(Exception):
    exit_code = EXIT_DOMAIN

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness

    def to_json(self) -> dict:
        out = {"error": type(self).__name__, "message": str(self)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


class InputError(HcseqError):
    """Malformed input: bad JSON, unknown element ids, wrong shapes."""

    exit_code = EXIT_INPUT


class FormatError(InputError):
    pass


class NotAPoset(InputError):
    pass


class NotALattice(InputError):
    pass


class UnknownName(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class InconsistentTable(InputError):
    pass


class InvalidPresentation(InputError):
    pass


class TrivialLattice(HcseqError):
    pass


class NotComparable(HcseqError):
    pass


class NotModular(HcseqError):
    exit_code = EXIT_NOT_MODULAR


class StronglySplits(HcseqError):
    exit_code = EXIT_STRONGLY_SPLITS


class HasSplittingPair(HcseqError):
    pass


class NotStrong(HcseqError):
    pass


class NotAProduct(HcseqError):
    pass


class LatticeMismatch(HcseqError):
    pass


class EmptyArgs(HcseqError):
    pass


class SearchBudgetExceeded(HcseqError):
    exit_code = EXIT_BUDGET
