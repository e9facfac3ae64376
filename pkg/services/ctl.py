"""
Attack Tree Checker - EF Fragment Evaluator
"""

from typing import Optional

from models.formula import And, Ef, EfFormula, Literal, Or
from models.report import CheckStats
from models.system import StateSet, TransitionSystem, coreach


def eval_ef(system: TransitionSystem, formula: EfFormula, stats: Optional[CheckStats] = None) -> StateSet:
    """States satisfying the formula, by structural induction"""
    if isinstance(formula, Literal):
        labelled = system.label(formula.prop)
        return system.all_states & ~labelled if formula.negated else labelled
    if isinstance(formula, And):
        return eval_ef(system, formula.left, stats) & eval_ef(system, formula.right, stats)
    if isinstance(formula, Or):
        return eval_ef(system, formula.left, stats) | eval_ef(system, formula.right, stats)
    if isinstance(formula, Ef):
        return coreach(system, eval_ef(system, formula.inner, stats), stats)
    raise TypeError(f"Not an EF formula: {formula!r}")
