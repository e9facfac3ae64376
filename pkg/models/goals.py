"""
Attack Tree Checker - Goals and Goal Expressions
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from models.errors import TreeStructureError
from models.system import StateSet, TransitionSystem


class Operator(str, Enum):
    """Refinement operators"""

    OR = "OR"
    AND = "AND"
    SAND = "SAND"

    @classmethod
    def parse(cls, text: str) -> "Operator":
        try:
            return cls(text.upper())
        except ValueError:
            raise TreeStructureError(f"Unknown operator: {text!r}") from None


@dataclass(frozen=True)
class Goal:
    """Goal pre ≫ post, both proposition names of the system labeling"""

    pre: str
    post: str

    def __str__(self):
        return f"{self.pre} >> {self.post}"

    def to_dict(self):
        return {"pre": self.pre, "post": self.post}


@dataclass(frozen=True)
class GoalExpression:
    """Either an atomic goal (op is None, one goal) or OP(g1, …, gn) with n >= 2"""

    op: Optional[Operator]
    goals: Tuple[Goal, ...]

    def __post_init__(self):
        if self.op is None and len(self.goals) != 1:
            raise TreeStructureError("An atomic expression holds exactly one goal")
        if self.op is not None and len(self.goals) < 2:
            raise TreeStructureError(
                f"{self.op.value} refinement has arity {len(self.goals)}; at least 2 required"
            )

    @classmethod
    def atomic(cls, goal: Goal) -> "GoalExpression":
        return cls(None, (goal,))

    @classmethod
    def composed(cls, op: Operator, goals) -> "GoalExpression":
        return cls(Operator(op), tuple(goals))

    @property
    def arity(self) -> int:
        return len(self.goals)

    def propositions(self):
        names = []
        for g in self.goals:
            names.extend((g.pre, g.post))
        return names

    def __str__(self):
        if self.op is None:
            return str(self.goals[0])
        return f"{self.op.value}({', '.join(str(g) for g in self.goals)})"


@dataclass(frozen=True)
class EndpointConstraint:
    """Optional restrictions on the first and last state of a searched path"""

    start_in: Optional[StateSet] = None
    start_not_in: Optional[StateSet] = None
    end_in: Optional[StateSet] = None
    end_not_in: Optional[StateSet] = None

    def starts(self, system: TransitionSystem) -> StateSet:
        allowed = system.all_states
        if self.start_in is not None:
            allowed &= self.start_in
        if self.start_not_in is not None:
            allowed &= ~self.start_not_in
        return allowed

    def ends(self, system: TransitionSystem) -> StateSet:
        allowed = system.all_states
        if self.end_in is not None:
            allowed &= self.end_in
        if self.end_not_in is not None:
            allowed &= ~self.end_not_in
        return allowed


NO_CONSTRAINT = EndpointConstraint()
