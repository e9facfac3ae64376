"""
Attack Tree Checker - Correctness Checkers
Admissibility, Meet, Under-Match, Over-Match and Match, per refinement operator
"""

import logging
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

from models.errors import ArityCapExceeded, ConfigurationError, SearchBudgetExceeded, TreeStructureError
from models.formula import EfFormula, atom, conj, disj, neg
from models.formula import Ef as EF
from models.goals import EndpointConstraint, Goal, GoalExpression, Operator
from models.report import CheckReport, CheckStats, PropertyKind
from models.system import (
    Path,
    TransitionSystem,
    coreach,
    iter_bits,
    lowest_bit,
    reach,
    restrict,
    shortest_path,
)
from models.tree import ROOT, AttackTree, NodePath, composed_nodes, expression_at
from services.config import DEFAULT_SETTINGS, CheckerSettings
from services.ctl import eval_ef
from services.semantics import find_witness, goal_sets, path_satisfies_expression

logger = logging.getLogger(__name__)

NONEMPTY_ENGINES = {None: "reach", Operator.OR: "reach", Operator.SAND: "sand-forward", Operator.AND: "and-markers"}


def require_arity_cap(expr: GoalExpression, settings: CheckerSettings) -> None:
    if expr.op is Operator.AND and expr.arity > settings.max_and_arity:
        raise ArityCapExceeded(expr.arity, settings.max_and_arity)


def _finish(report: CheckReport, started: float) -> CheckReport:
    report.stats.wall_time_ms = (time.perf_counter() - started) * 1000.0
    marker = "✅" if report.holds else "❌"
    logger.debug(f"{marker} {report.property.value} at {report.node}: {report.verdict} via {report.engine}")
    return report


# ============================================================
# FORMULAS
# ============================================================

def meet_formula(goal: Goal, expr: GoalExpression) -> EfFormula:
    """φ_OR = ⋁ ι∧ι_i∧EF(γ∧γ_i); φ_SAND = ι∧ι₁∧EF(γ₁∧ι₂∧EF(…EF(γₙ∧γ)))"""
    if expr.op is Operator.SAND:
        return conj([atom(goal.pre), _sand_chain(expr.goals, atom(goal.post))])
    return disj([
        conj([atom(goal.pre), atom(g.pre), EF(conj([atom(goal.post), atom(g.post)]))])
        for g in expr.goals
    ])


def _sand_chain(goals, last: Optional[EfFormula] = None) -> EfFormula:
    """ι₁∧EF(γ₁∧ι₂∧EF(…EF(γₙ [∧ last])))"""
    tail: EfFormula = atom(goals[-1].post) if last is None else conj([atom(goals[-1].post), last])
    for i in range(len(goals) - 1, 0, -1):
        tail = conj([atom(goals[i - 1].post), atom(goals[i].pre), EF(tail)])
    return conj([atom(goals[0].pre), EF(tail)])


def sand_under_violation_formula(goal: Goal, expr: GoalExpression) -> EfFormula:
    """States starting a SAND path that leaves ⟦ι≫γ⟧: bad start, or bad end"""
    return disj([
        conj([neg(goal.pre), _sand_chain(expr.goals)]),
        _sand_chain(expr.goals, neg(goal.post)),
    ])


# ============================================================
# NONEMPTINESS AND ADMISSIBILITY
# ============================================================

def check_nonempty(
    system: TransitionSystem,
    expr: GoalExpression,
    settings: CheckerSettings = DEFAULT_SETTINGS,
    stats: Optional[CheckStats] = None,
) -> Tuple[bool, Optional[Path]]:
    """⟦expr⟧ ≠ ∅ and a witness when it is"""
    require_arity_cap(expr, settings)
    witness = find_witness(system, expr, settings=settings, stats=stats)
    return witness is not None, witness


def check_admissible(
    system: TransitionSystem,
    tree: AttackTree,
    settings: CheckerSettings = DEFAULT_SETTINGS,
) -> List[CheckReport]:
    """One report per node in preorder; a node fails at the first of (a) goal, (b) refinement, (c) subtrees"""
    reports: Dict[NodePath, CheckReport] = {}

    def visit(path: NodePath, node: AttackTree) -> bool:
        started = time.perf_counter()
        child_ok = [visit(path.child(i), child) for i, child in enumerate(node.children)]
        stats = CheckStats()
        goal_ok, witness = check_nonempty(system, GoalExpression.atomic(node.goal), settings, stats)
        engine = NONEMPTY_ENGINES[None]
        detail = None
        if not goal_ok:
            detail = f"(a) node goal {node.goal} has empty semantics"
        elif not node.is_leaf:
            _, expr = expression_at(node, ROOT)
            engine = NONEMPTY_ENGINES[expr.op]
            expr_ok, witness = check_nonempty(system, expr, settings, stats)
            if not expr_ok:
                detail = f"(b) refinement {expr} has empty semantics"
            elif not all(child_ok):
                bad = next(i for i, ok in enumerate(child_ok) if not ok)
                detail = f"(c) subtree {path.child(bad)} is not admissible"
        holds = detail is None
        reports[path] = _finish(
            CheckReport(
                property=PropertyKind.ADMISSIBLE,
                holds=holds,
                engine=engine,
                evidence=witness if holds else None,
                node=path,
                detail=detail,
                stats=stats,
            ),
            started,
        )
        return holds

    visit(ROOT, tree)
    return [reports[path] for path, _ in tree.walk()]


# ============================================================
# MEET
# ============================================================

def check_meet(
    system: TransitionSystem,
    goal: Goal,
    expr: GoalExpression,
    settings: CheckerSettings = DEFAULT_SETTINGS,
    node: NodePath = ROOT,
) -> CheckReport:
    """⟦expr⟧ ∩ ⟦ι≫γ⟧ ≠ ∅"""
    started = time.perf_counter()
    require_arity_cap(expr, settings)
    stats = CheckStats()
    pre, post = system.label(goal.pre), system.label(goal.post)
    goal_sets(system, expr.goals)
    both_ends = EndpointConstraint(start_in=pre, end_in=post)

    if expr.op is Operator.AND:
        witness = find_witness(system, expr, both_ends, settings, stats)
        holds, engine = witness is not None, "and-markers"
    else:
        holds = bool(eval_ef(system, meet_formula(goal, expr), stats))
        engine = "ef-sand" if expr.op is Operator.SAND else "ef-or"
        witness = find_witness(system, expr, both_ends, settings, stats) if holds else None

    return _finish(CheckReport(PropertyKind.MEET, holds, engine, witness, node, stats=stats), started)


# ============================================================
# UNDER-MATCH
# ============================================================

def _under_counterexample(system, goal, expr, settings, stats) -> Optional[Path]:
    """A path of ⟦expr⟧ that starts outside λ(ι), else one that ends outside λ(γ)"""
    pre, post = system.label(goal.pre), system.label(goal.post)
    witness = find_witness(system, expr, EndpointConstraint(start_not_in=pre), settings, stats)
    if witness is None:
        witness = find_witness(system, expr, EndpointConstraint(end_not_in=post), settings, stats)
    return witness


def check_under(
    system: TransitionSystem,
    goal: Goal,
    expr: GoalExpression,
    settings: CheckerSettings = DEFAULT_SETTINGS,
    node: NodePath = ROOT,
) -> CheckReport:
    """⟦expr⟧ ⊆ ⟦ι≫γ⟧"""
    started = time.perf_counter()
    require_arity_cap(expr, settings)
    stats = CheckStats()
    pre, post = system.label(goal.pre), system.label(goal.post)
    pres, posts = goal_sets(system, expr.goals)

    if expr.op is Operator.AND:
        counter = _under_counterexample(system, goal, expr, settings, stats)
        return _finish(
            CheckReport(PropertyKind.UNDER, counter is None, "and-complement", counter, node, stats=stats),
            started,
        )

    if expr.op is Operator.SAND:
        holds = not eval_ef(system, sand_under_violation_formula(goal, expr), stats)
        engine = "ef-sand"
    else:
        holds = all(
            not (p & coreach(system, q, stats) & ~pre) and not (q & reach(system, p, stats) & ~post)
            for p, q in zip(pres, posts)
        )
        engine = "inclusion-or"
    counter = None if holds else _under_counterexample(system, goal, expr, settings, stats)
    return _finish(CheckReport(PropertyKind.UNDER, holds, engine, counter, node, stats=stats), started)


# ============================================================
# OVER-MATCH
# ============================================================

def _over_or(system, pre, post, pres, posts, stats) -> Optional[Path]:
    """First (s, s′) pair with s′ reachable from s that no disjunct connects"""
    for s in iter_bits(pre):
        covered = 0
        for p, q in zip(pres, posts):
            if (p >> s) & 1:
                covered |= q
        uncovered = reach(system, 1 << s, stats) & post & ~covered
        if uncovered:
            return shortest_path(system, 1 << s, 1 << lowest_bit(uncovered), stats=stats)
    return None


def _over_sand(system, pre, post, pres, posts, stats) -> Optional[Path]:
    n = len(pres)
    # C1: a goal path starting outside λ(ι₁)
    bad_start = pre & ~pres[0]
    if reach(system, bad_start, stats) & post:
        return shortest_path(system, bad_start, post, stats=stats)
    # C2: a goal path ending outside λ(γₙ)
    bad_end = post & ~posts[-1]
    if coreach(system, bad_end, stats) & pre:
        return shortest_path(system, pre, bad_end, stats=stats)

    # greedy cut sets G_i and their escapes B_i
    cuts = [posts[i] & pres[i + 1] for i in range(n - 1)]
    frontier = pre & pres[0]
    for i in range(n - 1):
        avoiding = restrict(system, cuts[i])
        wander = reach(avoiding, frontier & ~cuts[i], stats)
        escape = wander & post
        if escape:
            logger.debug(f"SAND over-match: cut {i + 1} can be skipped on the way to {system.ids(escape)}")
            return _sand_escape_path(system, pre & pres[0], post, cuts, stats)
        step = 0
        for s in iter_bits(wander):
            step |= system.successors(s)
        frontier = (frontier | step) & cuts[i]
    return None


def _sand_escape_path(system, starts, post, cuts, stats) -> Path:
    """Shortest goal path on which the greedy cut sweep stalls before the last cut"""
    last = len(cuts)

    def advance(state: int, progress: int) -> int:
        while progress < last and (cuts[progress] >> state) & 1:
            progress += 1
        return progress

    parent: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {}
    queue = deque()
    for s in iter_bits(starts):
        key = (s, advance(s, 0))
        if key not in parent:
            parent[key] = None
            queue.append(key)
    while queue:
        key = queue.popleft()
        stats.states_explored += 1
        state, progress = key
        if progress < last and (post >> state) & 1:
            states = []
            cur: Optional[Tuple[int, int]] = key
            while cur is not None:
                states.append(cur[0])
                cur = parent[cur]
            states.reverse()
            return Path(system, states, validate=False)
        for t in iter_bits(system.successors(state)):
            nxt = (t, advance(t, progress))
            if nxt not in parent:
                parent[nxt] = key
                queue.append(nxt)
    raise AssertionError("escape set was non-empty but no escaping path was found")


def _over_and(system, expr, pre, post, settings, stats) -> Optional[Path]:
    """Depth-first search over elementary goal paths, rejecting each by membership"""
    budget = settings.over_and_budget
    for s in iter_bits(pre):
        trail = [s]
        visited = 1 << s
        stack = [iter(list(iter_bits(system.successors(s))))]
        if (post >> s) & 1:
            stats.paths_enumerated += 1
            candidate = Path(system, trail, validate=False)
            if not path_satisfies_expression(system, candidate, expr):
                return candidate
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                visited &= ~(1 << trail.pop())
                continue
            if (visited >> nxt) & 1:
                continue
            trail.append(nxt)
            visited |= 1 << nxt
            stack.append(iter(list(iter_bits(system.successors(nxt)))))
            if (post >> nxt) & 1:
                stats.paths_enumerated += 1
                if budget is not None and stats.paths_enumerated > budget:
                    raise SearchBudgetExceeded("over-and-simple-paths", budget)
                candidate = Path(system, trail, validate=False)
                if not path_satisfies_expression(system, candidate, expr):
                    return candidate
    return None


def check_over(
    system: TransitionSystem,
    goal: Goal,
    expr: GoalExpression,
    settings: CheckerSettings = DEFAULT_SETTINGS,
    node: NodePath = ROOT,
) -> CheckReport:
    """⟦expr⟧ ⊇ ⟦ι≫γ⟧"""
    started = time.perf_counter()
    require_arity_cap(expr, settings)
    stats = CheckStats()
    pre, post = system.label(goal.pre), system.label(goal.post)
    pres, posts = goal_sets(system, expr.goals)

    if expr.op is Operator.AND:
        stats.budget = settings.over_and_budget
        counter, engine = _over_and(system, expr, pre, post, settings, stats), "over-and-simple-paths"
    elif expr.op is Operator.SAND:
        counter, engine = _over_sand(system, pre, post, pres, posts, stats), "over-sand-cuts"
    else:
        counter, engine = _over_or(system, pre, post, pres, posts, stats), "over-or-pairs"
    return _finish(CheckReport(PropertyKind.OVER, counter is None, engine, counter, node, stats=stats), started)


# ============================================================
# MATCH
# ============================================================

def check_match(
    system: TransitionSystem,
    goal: Goal,
    expr: GoalExpression,
    settings: CheckerSettings = DEFAULT_SETTINGS,
    node: NodePath = ROOT,
) -> CheckReport:
    """Under-Match and Over-Match together"""
    started = time.perf_counter()
    under = check_under(system, goal, expr, settings, node)
    over = check_over(system, goal, expr, settings, node)
    stats = CheckStats()
    stats.absorb(under.stats)
    stats.absorb(over.stats)
    if not under.holds:
        evidence, detail = under.evidence, "under-match fails"
    elif not over.holds:
        evidence, detail = over.evidence, "over-match fails"
    else:
        evidence, detail = None, None
    report = CheckReport(
        PropertyKind.MATCH,
        under.holds and over.holds,
        f"{under.engine}+{over.engine}",
        evidence,
        node,
        detail,
        stats,
    )
    return _finish(report, started)


LOCAL_CHECKS = {
    PropertyKind.MEET: check_meet,
    PropertyKind.UNDER: check_under,
    PropertyKind.OVER: check_over,
    PropertyKind.MATCH: check_match,
}


# ============================================================
# TREE-LEVEL CHECKS
# ============================================================

def check_node(
    system: TransitionSystem,
    tree: AttackTree,
    node: NodePath,
    prop: PropertyKind,
    settings: CheckerSettings = DEFAULT_SETTINGS,
) -> CheckReport:
    """Local check of one refined node"""
    if prop is PropertyKind.ADMISSIBLE:
        raise ConfigurationError("Admissibility covers the whole tree; use check_admissible")
    goal, expr = expression_at(tree, node)
    if expr is None:
        raise TreeStructureError(f"Node {node} is a leaf; local checks need a refined node")
    return LOCAL_CHECKS[prop](system, goal, expr, settings, node)


def check_global(
    system: TransitionSystem,
    tree: AttackTree,
    prop: PropertyKind,
    settings: CheckerSettings = DEFAULT_SETTINGS,
) -> List[CheckReport]:
    """The property at every refined node, in preorder; a leaf tree gives no reports"""
    if prop is PropertyKind.ADMISSIBLE:
        raise ConfigurationError("Admissibility is already a whole-tree property; use check_admissible")
    nodes = composed_nodes(tree)
    if settings.jobs > 1 and len(nodes) > 1:
        with ThreadPoolExecutor(max_workers=settings.jobs) as pool:
            return list(pool.map(lambda path: check_node(system, tree, path, prop, settings), nodes))
    return [check_node(system, tree, path, prop, settings) for path in nodes]


def overall_verdict(reports: List[CheckReport]) -> bool:
    return all(r.holds for r in reports)
