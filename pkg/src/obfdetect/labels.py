"""Shared label vocabulary: obfuscation tools and techniques."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class ToolLabel(str, enum.Enum):
    PROGUARD = "ProGuard"
    ALLATORI = "Allatori"
    DASHO = "DashO"
    OTHER = "Other"


# Fixed order used for argmax tie-breaking and report columns.
TOOL_ORDER: tuple[str, ...] = (
    ToolLabel.PROGUARD.value,
    ToolLabel.ALLATORI.value,
    ToolLabel.DASHO.value,
)

TOOL_COLUMNS: tuple[str, ...] = TOOL_ORDER + (ToolLabel.OTHER.value,)

TECHNIQUE_ORDER: tuple[str, ...] = ("IR", "CF", "SE")


@dataclass(frozen=True)
class TechniqueSet:
    """Which obfuscation techniques are present; any combination is valid."""

    ir: bool = False
    cf: bool = False
    se: bool = False

    def as_dict(self) -> dict[str, bool]:
        return {"ir": self.ir, "cf": self.cf, "se": self.se}

    @classmethod
    def from_dict(cls, d: dict) -> "TechniqueSet":
        return cls(ir=bool(d.get("ir")), cf=bool(d.get("cf")), se=bool(d.get("se")))

    @classmethod
    def from_names(cls, names) -> "TechniqueSet":
        upper = {str(n).upper() for n in names}
        unknown = upper - set(TECHNIQUE_ORDER)
        if unknown:
            raise ValueError(f"unknown technique name(s): {sorted(unknown)}")
        return cls(ir="IR" in upper, cf="CF" in upper, se="SE" in upper)

    def names(self) -> tuple[str, ...]:
        return tuple(
            name for name, on in zip(TECHNIQUE_ORDER, (self.ir, self.cf, self.se)) if on
        )

    def count(self) -> int:
        return int(self.ir) + int(self.cf) + int(self.se)

    def __bool__(self) -> bool:
        return self.ir or self.cf or self.se
