"""
Attack Tree Checker - Brute-Force Oracle
Exhaustive path enumeration with membership decided straight from the definitions
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Set, Tuple

from models.errors import ConfigurationError
from models.goals import Goal, GoalExpression, Operator
from models.report import CheckReport, CheckStats, PropertyKind
from models.system import Path, StateSet, TransitionSystem, iter_bits
from models.tree import ROOT, AttackTree, NodePath, expression_at

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PathBudget:
    """Largest path size (in transitions) the oracle enumerates"""

    max_transitions: int

    def __post_init__(self):
        if self.max_transitions < 0:
            raise ConfigurationError(f"Path budget must be >= 0, got {self.max_transitions}")


@dataclass
class OracleVerdict:
    holds: bool
    evidence: Optional[Path]
    budget: int
    paths_enumerated: int = 0


def _budget_value(budget) -> Optional[int]:
    if budget is None:
        return None
    if isinstance(budget, PathBudget):
        return budget.max_transitions
    return PathBudget(int(budget)).max_transitions


def default_budget(system: TransitionSystem, expr: Optional[GoalExpression], prop: PropertyKind) -> int:
    """Completeness bound for one query: (2n − 1)·|states| for searches in ⟦expr⟧,
    |states| for elementary Over-Match counterexamples"""
    states = system.num_states
    if expr is None or prop is PropertyKind.OVER:
        return states
    return (2 * expr.arity - 1) * states


# ============================================================
# ENUMERATION
# ============================================================

def enumerate_paths(
    system: TransitionSystem,
    budget,
    sources: Optional[StateSet] = None,
) -> Iterator[Path]:
    """Every path of size <= budget, each once, by size then lexicographically"""
    limit = _budget_value(budget)
    starts = list(iter_bits(system.all_states if sources is None else sources & system.all_states))
    for size in range(limit + 1):
        produced = False
        for states in _paths_of_size(system, starts, size):
            produced = True
            yield Path(system, states, validate=False)
        if not produced:
            # no path of this size means none longer either
            return


def _paths_of_size(system: TransitionSystem, starts: List[int], size: int) -> Iterator[Tuple[int, ...]]:
    trail: List[int] = []

    def extend(state: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        trail.append(state)
        if remaining == 0:
            yield tuple(trail)
        else:
            for nxt in iter_bits(system.successors(state)):
                yield from extend(nxt, remaining - 1)
        trail.pop()

    for s in starts:
        yield from extend(s, size)


# ============================================================
# DEFINITIONAL MEMBERSHIP
# ============================================================

def _has(mask: StateSet, state: int) -> bool:
    return bool((mask >> state) & 1)


def _atomic_member(states, pre, post) -> bool:
    return _has(pre, states[0]) and _has(post, states[-1])


def _sand_member(states: Tuple[int, ...], pres, posts) -> bool:
    """π = π₁.π₂…πₙ with πᵢ from ιᵢ to γᵢ, trying every split position"""
    n = len(pres)
    last = len(states) - 1

    @lru_cache(maxsize=None)
    def from_goal(i: int, start: int) -> bool:
        if not _has(pres[i], states[start]):
            return False
        if i == n - 1:
            return _has(posts[i], states[last])
        return any(
            _has(posts[i], states[cut]) and from_goal(i + 1, cut)
            for cut in range(start, last + 1)
        )

    return from_goal(0, 0)


def _and_member(states: Tuple[int, ...], pres, posts) -> bool:
    """Some choice of one anchoring per goal covers every step.

    Candidates are every [k, l] with π(k) ∈ λ(ιᵢ) and π(l) ∈ λ(γᵢ). Covering
    is searched left to right: the leftmost uncovered step must lie in an
    anchoring of a goal not used yet, which extends the covered prefix.
    """
    size = len(states) - 1
    candidates = []
    for pre, post in zip(pres, posts):
        spans = [
            (k, l)
            for k in range(size + 1) if _has(pre, states[k])
            for l in range(k, size + 1) if _has(post, states[l])
        ]
        if not spans:
            return False
        candidates.append(spans)

    @lru_cache(maxsize=None)
    def cover(covered: int, used: int) -> bool:
        if covered == size:
            return True
        for i, spans in enumerate(candidates):
            if (used >> i) & 1:
                continue
            for k, l in spans:
                if k <= covered < l and cover(l, used | (1 << i)):
                    return True
        return False

    return cover(0, 0)


def _member_fn(system: TransitionSystem, expr: GoalExpression):
    pres = [system.label(g.pre) for g in expr.goals]
    posts = [system.label(g.post) for g in expr.goals]
    if expr.op is Operator.SAND:
        return lambda states: _sand_member(states, pres, posts)
    if expr.op is Operator.AND:
        return lambda states: _and_member(states, pres, posts)
    return lambda states: any(_atomic_member(states, p, q) for p, q in zip(pres, posts))


def oracle_member(system: TransitionSystem, path: Path, expr: GoalExpression) -> bool:
    """Definition-level membership of one path"""
    return _member_fn(system, expr)(path.states)


def oracle_semantics(system: TransitionSystem, expr: GoalExpression, budget) -> Set[Path]:
    """{π : |π| <= budget, π ∈ ⟦expr⟧}"""
    member = _member_fn(system, expr)
    return {path for path in enumerate_paths(system, budget) if member(path.states)}


# ============================================================
# PROPERTY VERDICTS
# ============================================================

def _first_path(system, budget, sources, accept) -> Tuple[Optional[Path], int]:
    count = 0
    for path in enumerate_paths(system, budget, sources):
        count += 1
        if accept(path.states):
            return path, count
    return None, count


def oracle_check(
    system: TransitionSystem,
    goal: Goal,
    expr: GoalExpression,
    prop: PropertyKind,
    budget=None,
) -> OracleVerdict:
    """Verdict of one property over the budget-bounded semantic sets"""
    limit = _budget_value(budget)
    pre, post = system.label(goal.pre), system.label(goal.post)
    member = _member_fn(system, expr)
    in_goal = lambda states: _atomic_member(states, pre, post)  # noqa: E731
    expr_starts = 0
    for g in expr.goals:
        expr_starts |= system.label(g.pre)

    if prop is PropertyKind.MEET:
        limit = default_budget(system, expr, prop) if limit is None else limit
        found, count = _first_path(system, limit, pre, lambda s: in_goal(s) and member(s))
        return OracleVerdict(found is not None, found, limit, count)

    if prop is PropertyKind.UNDER:
        limit = default_budget(system, expr, prop) if limit is None else limit
        found, count = _first_path(system, limit, expr_starts, lambda s: not in_goal(s) and member(s))
        return OracleVerdict(found is None, found, limit, count)

    if prop is PropertyKind.OVER:
        limit = default_budget(system, expr, prop) if limit is None else limit
        found, count = _first_path(system, limit, pre, lambda s: in_goal(s) and not member(s))
        return OracleVerdict(found is None, found, limit, count)

    if prop is PropertyKind.MATCH:
        under = oracle_check(system, goal, expr, PropertyKind.UNDER, budget)
        over = oracle_check(system, goal, expr, PropertyKind.OVER, budget)
        evidence = under.evidence if not under.holds else over.evidence
        return OracleVerdict(
            under.holds and over.holds,
            evidence,
            max(under.budget, over.budget),
            under.paths_enumerated + over.paths_enumerated,
        )

    if prop is PropertyKind.ADMISSIBLE:
        goal_limit = default_budget(system, None, prop) if limit is None else limit
        found, count = _first_path(system, goal_limit, pre, in_goal)
        if found is None:
            return OracleVerdict(False, None, goal_limit, count)
        expr_limit = default_budget(system, expr, prop) if limit is None else limit
        witness, more = _first_path(system, expr_limit, expr_starts, member)
        return OracleVerdict(witness is not None, witness, max(goal_limit, expr_limit), count + more)

    raise ConfigurationError(f"Unsupported property: {prop}")


def oracle_nonempty(system: TransitionSystem, expr: GoalExpression, budget=None) -> Tuple[bool, Optional[Path]]:
    limit = _budget_value(budget)
    if limit is None:
        limit = default_budget(system, expr, PropertyKind.ADMISSIBLE)
    found, _ = _first_path(system, limit, None, _member_fn(system, expr))
    return found is not None, found


# ============================================================
# REPORTS (alternative CLI engine)
# ============================================================

def oracle_report(
    system: TransitionSystem,
    goal: Goal,
    expr: GoalExpression,
    prop: PropertyKind,
    budget=None,
    node: NodePath = ROOT,
) -> CheckReport:
    verdict = oracle_check(system, goal, expr, prop, budget)
    evidence = verdict.evidence
    # universal properties only carry counterexamples
    if prop in (PropertyKind.UNDER, PropertyKind.OVER, PropertyKind.MATCH) and verdict.holds:
        evidence = None
    detail = None
    if prop is PropertyKind.MATCH and not verdict.holds:
        under = oracle_check(system, goal, expr, PropertyKind.UNDER, budget)
        detail = "under-match fails" if not under.holds else "over-match fails"
    stats = CheckStats(paths_enumerated=verdict.paths_enumerated, budget=verdict.budget)
    return CheckReport(prop, verdict.holds, "oracle", evidence, node, detail, stats)


def oracle_admissible(system: TransitionSystem, tree: AttackTree, budget=None) -> List[CheckReport]:
    """Admissibility of every node, preorder, decided by enumeration"""
    reports = {}

    def visit(path: NodePath, node: AttackTree) -> bool:
        child_ok = [visit(path.child(i), child) for i, child in enumerate(node.children)]
        atomic = GoalExpression.atomic(node.goal)
        goal_ok, witness = oracle_nonempty(system, atomic, budget)
        limit = _budget_value(budget)
        stats = CheckStats(budget=default_budget(system, None, PropertyKind.ADMISSIBLE) if limit is None else limit)
        detail = None
        if not goal_ok:
            detail = f"(a) node goal {node.goal} has empty semantics"
        elif not node.is_leaf:
            _, expr = expression_at(node, ROOT)
            stats.budget = default_budget(system, expr, PropertyKind.ADMISSIBLE) if limit is None else limit
            expr_ok, witness = oracle_nonempty(system, expr, budget)
            if not expr_ok:
                detail = f"(b) refinement {expr} has empty semantics"
            elif not all(child_ok):
                bad = next(i for i, ok in enumerate(child_ok) if not ok)
                detail = f"(c) subtree {path.child(bad)} is not admissible"
        holds = detail is None
        reports[path] = CheckReport(
            PropertyKind.ADMISSIBLE, holds, "oracle", witness if holds else None, path, detail, stats
        )
        return holds

    visit(ROOT, tree)
    return [reports[path] for path, _ in tree.walk()]

