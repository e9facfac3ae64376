"""
Attack Tree Checker - Check Reports
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from models.errors import ConfigurationError
from models.system import Path
from models.tree import NodePath, ROOT


class PropertyKind(str, Enum):
    ADMISSIBLE = "admissible"
    MEET = "meet"
    UNDER = "under"
    OVER = "over"
    MATCH = "match"

    @classmethod
    def parse(cls, text: str) -> "PropertyKind":
        key = text.strip().lower().replace("_", "-")
        aliases = {"under-match": "under", "undermatch": "under", "over-match": "over", "overmatch": "over"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ConfigurationError(f"Unknown property {text!r}; expected one of {choices}") from None


@dataclass
class CheckStats:
    """Search effort of one decision"""

    states_explored: int = 0
    weak_orders: int = 0
    paths_enumerated: int = 0
    budget: Optional[int] = None
    wall_time_ms: float = 0.0

    def absorb(self, other: "CheckStats") -> None:
        self.states_explored += other.states_explored
        self.weak_orders += other.weak_orders
        self.paths_enumerated += other.paths_enumerated
        if other.budget is not None:
            self.budget = max(self.budget or 0, other.budget)

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "states_explored": self.states_explored,
            "weak_orders": self.weak_orders,
            "paths_enumerated": self.paths_enumerated,
        }
        if self.budget is not None:
            data["budget"] = self.budget
        if timings:
            data["wall_time_ms"] = round(self.wall_time_ms, 3)
        return data


@dataclass
class CheckReport:
    """Verdict of one (node, property) query with its evidence path"""

    property: PropertyKind
    holds: bool
    engine: str
    evidence: Optional[Path] = None
    node: NodePath = ROOT
    detail: Optional[str] = None
    stats: CheckStats = field(default_factory=CheckStats)

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "fails"

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "node": str(self.node),
            "property": self.property.value,
            "verdict": self.verdict,
            "evidence": self.evidence.to_dict() if self.evidence is not None else None,
            "engine": self.engine,
            "stats": self.stats.to_dict(timings),
        }
        if self.detail:
            data["detail"] = self.detail
        return data

    def __repr__(self):
        return f"<CheckReport {self.node} {self.property.value} {self.verdict}>"
