from __future__ import annotations


class PolystabError(Exception):
    """Base class for all library errors."""


class ModelMismatch(PolystabError):
    pass


class ValidationError(PolystabError):
    """A structured rejection: ``clause`` names the violated condition, ``index`` its position."""

    def __init__(self, clause: str, index: int | None = None, detail: str = ""):
        self.clause = clause
        self.index = index
        self.detail = detail
        label = clause if index is None else f"{clause}({index})"
        super().__init__(f"{label}: {detail}" if detail else label)

    @property
    def label(self) -> str:
        return self.clause if self.index is None else f"{self.clause}({self.index})"


class CapExceeded(PolystabError):
    pass


class UndecidedAtPrecision(PolystabError):
    """A comparison involving an irrational quantity could not be separated at the precision floor."""
