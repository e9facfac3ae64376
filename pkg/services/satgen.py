"""
Attack Tree Checker - SAT Reduction
CNF formulas compiled into a layered transition system plus an AND goal
expression whose semantics is non-empty exactly when the formula is satisfiable
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from models.errors import DimacsError
from models.goals import Goal, GoalExpression, Operator
from models.system import TransitionSystem, build_system
from services.config import CheckerConfig
from services.spec_lang import StateEntry, SystemDocument, TreeDocument

logger = logging.getLogger(__name__)

START = "start"
GOAL_DUMMY = "goal"
START_STATE = "s"


@dataclass(frozen=True)
class CnfInstance:
    """Clauses of signed DIMACS literals over variables 1..num_vars"""

    num_vars: int
    clauses: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise DimacsError(f"variable count must be >= 0, got {self.num_vars}")
        for j, clause in enumerate(self.clauses, 1):
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise DimacsError(f"clause {j}: literal {lit} out of range 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


# ============================================================
# DIMACS
# ============================================================

def parse_dimacs(text: str) -> CnfInstance:
    """Read `p cnf r m` followed by 0-terminated clauses; `c` lines are comments"""
    header = None
    clauses: List[Tuple[int, ...]] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed problem line {line!r}; expected 'p cnf <vars> <clauses>'", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"malformed problem line {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError("negative counts in the problem line", lineno)
            continue
        if header is None:
            raise DimacsError("clause before the 'p cnf' problem line", lineno)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(f"not a literal: {token!r}", lineno) from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                raise DimacsError(f"literal {lit} out of range 1..{header[0]}", lineno)
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' problem line")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != header[1]:
        logger.warning(f"⚠️ DIMACS header announces {header[1]} clauses, found {len(clauses)}")
    return CnfInstance(header[0], tuple(clauses))


def write_dimacs(cnf: CnfInstance) -> str:
    lines = [f"p cnf {cnf.num_vars} {cnf.num_clauses}"]
    for clause in cnf.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


# ============================================================
# DECISION AND REDUCTION
# ============================================================

def truth_table_sat(cnf: CnfInstance) -> bool:
    """Exhaustive evaluation over all 2^r assignments"""
    if cnf.num_vars > CheckerConfig.MAX_TRUTH_TABLE_VARIABLES:
        raise DimacsError(
            f"{cnf.num_vars} variables is too many for a truth table "
            f"(limit {CheckerConfig.MAX_TRUTH_TABLE_VARIABLES})"
        )
    for values in itertools.product((False, True), repeat=cnf.num_vars):
        if all(any(values[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in cnf.clauses):
            return True
    return False


def literal_state(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"-x{-lit}"


def clause_name(index: int) -> str:
    return f"C{index}"


def _padded_clauses(cnf: CnfInstance) -> Tuple[Tuple[int, ...], ...]:
    if cnf.num_vars < 1:
        raise DimacsError("the reduction needs at least one variable")
    if not cnf.clauses:
        raise DimacsError("the reduction needs at least one clause")
    if len(cnf.clauses) == 1:
        # AND needs two operands; a duplicate clause keeps satisfiability
        return cnf.clauses * 2
    return cnf.clauses


def _layout(cnf: CnfInstance):
    clauses = _padded_clauses(cnf)
    states = [START_STATE]
    for v in range(1, cnf.num_vars + 1):
        states.extend((literal_state(v), literal_state(-v)))
    transitions = [(START_STATE, literal_state(1)), (START_STATE, literal_state(-1))]
    for v in range(1, cnf.num_vars):
        for a in (v, -v):
            for b in (v + 1, -(v + 1)):
                transitions.append((literal_state(a), literal_state(b)))
    labeling: Dict[str, List[str]] = {START: [START_STATE]}
    for j, clause in enumerate(clauses, 1):
        labeling[clause_name(j)] = sorted({literal_state(lit) for lit in clause}, key=states.index)
    return clauses, states, transitions, labeling


def reduce(cnf: CnfInstance) -> Tuple[TransitionSystem, GoalExpression]:
    """System with states s, x_i, -x_i and the expression AND(start≫C1, …, start≫Cm)"""
    clauses, states, transitions, labeling = _layout(cnf)
    system = build_system(states, transitions, labeling)
    expr = GoalExpression.composed(
        Operator.AND, [Goal(START, clause_name(j)) for j in range(1, len(clauses) + 1)]
    )
    logger.debug(f"Reduced CNF with {cnf.num_vars} variables and {len(clauses)} clauses")
    return system, expr


def reduction_documents(cnf: CnfInstance) -> Tuple[SystemDocument, TreeDocument]:
    """System and tree documents; the tree's admissibility equals satisfiability"""
    clauses, states, transitions, labeling = _layout(cnf)
    props: Dict[str, List[str]] = {sid: [] for sid in states}
    for name, members in labeling.items():
        for sid in members:
            props[sid].append(name)
    system_doc = SystemDocument(
        states=tuple(StateEntry(sid, None, tuple(props[sid])) for sid in states),
        transitions=tuple(transitions),
        propositions={GOAL_DUMMY: "true"},
    )
    tree_doc = TreeDocument(
        pre=START,
        post=GOAL_DUMMY,
        op=Operator.AND.value,
        children=tuple(TreeDocument(pre=START, post=clause_name(j)) for j in range(1, len(clauses) + 1)),
    )
    return system_doc, tree_doc
