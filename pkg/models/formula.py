"""
Attack Tree Checker - EF Fragment Formulas
φ ::= p | ¬p | φ ∧ φ | φ ∨ φ | EF φ   (negation on literals only)
"""

from dataclasses import dataclass
from typing import Sequence


class EfFormula:
    """Base class of EF-fragment formulas"""

    def __and__(self, other: "EfFormula") -> "EfFormula":
        return And(self, other)

    def __or__(self, other: "EfFormula") -> "EfFormula":
        return Or(self, other)


@dataclass(frozen=True)
class Literal(EfFormula):
    prop: str
    negated: bool = False

    def __str__(self):
        return f"!{self.prop}" if self.negated else self.prop


@dataclass(frozen=True)
class And(EfFormula):
    left: EfFormula
    right: EfFormula

    def __str__(self):
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or(EfFormula):
    left: EfFormula
    right: EfFormula

    def __str__(self):
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Ef(EfFormula):
    inner: EfFormula

    def __str__(self):
        return f"EF {self.inner}"


def atom(prop: str) -> Literal:
    return Literal(prop)


def neg(prop: str) -> Literal:
    return Literal(prop, negated=True)


def conj(formulas: Sequence[EfFormula]) -> EfFormula:
    """Right-nested conjunction of a non-empty sequence"""
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = And(f, result)
    return result


def disj(formulas: Sequence[EfFormula]) -> EfFormula:
    """Right-nested disjunction of a non-empty sequence"""
    result = formulas[-1]
    for f in reversed(formulas[:-1]):
        result = Or(f, result)
    return result
