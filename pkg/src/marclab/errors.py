"""Exception hierarchy shared by all marclab modules."""

from __future__ import annotations


class MarclabError(Exception):
    """Base class for every error raised by marclab."""


class DomainError(MarclabError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonAdmissibleError(MarclabError):
    """The least quasiconcave majorant of a fundamental function is infinite."""


class OverlapError(MarclabError, ValueError):
    """Two positioned supports that were required to be disjoint overlap."""

    def __init__(self, first: int, second: int, detail: str = ""):
        self.pair = (first, second)
        msg = f"supports of items {first} and {second} overlap"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PreconditionError(MarclabError, ValueError):
    """A structural hypothesis required by a construction does not hold."""


class SchemaError(MarclabError, ValueError):
    """A JSON document does not match the expected schema."""
