from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class Violation:
    """First failed check of a validator.

    ``index`` is a curve or move index, ``cell`` a (row, column) grid cell and
    ``subject`` the vertices, edge or face the check was about.
    """

    reason: str
    index: Optional[int] = None
    condition: str = ""
    cell: Optional[tuple[int, int]] = None
    subject: tuple[int, ...] = ()

    @property
    def located(self) -> bool:
        return bool(self.condition) and (self.index is not None or self.cell is not None or bool(self.subject))

    def to_dict(self) -> dict:
        return {
            "reason": self.reason,
            "condition": self.condition,
            "index": self.index,
            "cell": list(self.cell) if self.cell is not None else None,
            "subject": list(self.subject),
        }

    def __str__(self) -> str:
        where = f" at {self.index}" if self.index is not None else ""
        tag = f"[{self.condition}] " if self.condition else ""
        return f"{tag}{self.reason}{where}"
