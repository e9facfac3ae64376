"""
Attack Tree Checker - Goal Semantics
Path membership for goal expressions and the exact bounded witness search
"""

import logging
from typing import List, Optional, Sequence, Tuple

from models.errors import ArityCapExceeded
from models.goals import NO_CONSTRAINT, EndpointConstraint, Goal, GoalExpression, Operator
from models.report import CheckStats
from models.system import (
    Anchoring,
    Path,
    StateSet,
    TransitionSystem,
    concat,
    coreach,
    is_parallel_decomposition,
    lowest_bit,
    post_set,
    pre_set,
    reach,
    shortest_path,
)
from services.config import DEFAULT_SETTINGS, CheckerSettings

logger = logging.getLogger(__name__)


def goal_sets(system: TransitionSystem, goals: Sequence[Goal]) -> Tuple[List[StateSet], List[StateSet]]:
    """λ(ι_i) and λ(γ_i) for every goal; raises on unknown propositions"""
    pres = [system.label(g.pre) for g in goals]
    posts = [system.label(g.post) for g in goals]
    return pres, posts


def _member(mask: StateSet, state: int) -> bool:
    return bool((mask >> state) & 1)


# ============================================================
# MEMBERSHIP
# ============================================================

def path_satisfies_goal(system: TransitionSystem, path: Path, goal: Goal) -> bool:
    """π goes from ι to γ"""
    pre, post = system.label(goal.pre), system.label(goal.post)
    return _member(pre, path.first) and _member(post, path.last)


def path_satisfies_expression(system: TransitionSystem, path: Path, expr: GoalExpression) -> bool:
    pres, posts = goal_sets(system, expr.goals)
    if expr.op is None or expr.op is Operator.OR:
        return any(
            _member(pre, path.first) and _member(post, path.last)
            for pre, post in zip(pres, posts)
        )
    if expr.op is Operator.SAND:
        return _sand_member(path, pres, posts)
    return _and_member(path, pres, posts)


def _sand_member(path: Path, pres: List[StateSet], posts: List[StateSet]) -> bool:
    """Single sweep placing every cut at its earliest possible position"""
    if not _member(pres[0], path.first) or not _member(posts[-1], path.last):
        return False
    states = path.states
    j = 0
    for i in range(len(pres) - 1):
        cut = posts[i] & pres[i + 1]
        while j < len(states) and not _member(cut, states[j]):
            j += 1
        if j == len(states):
            return False
    return True


def _and_member(path: Path, pres: List[StateSet], posts: List[StateSet]) -> bool:
    """Widest anchoring per goal, then the coverage test"""
    states = path.states
    anchorings = []
    for pre, post in zip(pres, posts):
        k = next((p for p, s in enumerate(states) if _member(pre, s)), None)
        l = next((p for p in range(len(states) - 1, -1, -1) if _member(post, states[p])), None)
        if k is None or l is None or k > l:
            return False
        anchorings.append(Anchoring(k, l))
    return is_parallel_decomposition(path, anchorings)


# ============================================================
# WITNESS SEARCH
# ============================================================

def find_witness(
    system: TransitionSystem,
    expr: GoalExpression,
    constraint: EndpointConstraint = NO_CONSTRAINT,
    settings: CheckerSettings = DEFAULT_SETTINGS,
    stats: Optional[CheckStats] = None,
) -> Optional[Path]:
    """A path of ⟦expr⟧ meeting the endpoint constraint, or None if there is none"""
    stats = stats if stats is not None else CheckStats()
    if expr.op is Operator.AND:
        return and_marker_search(system, expr.goals, constraint, settings, stats)

    pres, posts = goal_sets(system, expr.goals)
    starts, ends = constraint.starts(system), constraint.ends(system)

    if expr.op is Operator.SAND:
        return _sand_witness(system, pres, posts, starts, ends, stats)

    for pre, post in zip(pres, posts):
        path = shortest_path(system, pre & starts, post & ends, stats=stats)
        if path is not None:
            return path
    return None


def _sand_witness(system, pres, posts, starts, ends, stats) -> Optional[Path]:
    """Forward chaining of cut-state sets, then backward choice of cut states"""
    n = len(pres)
    layers = [pres[0] & starts]
    for i in range(1, n):
        layers.append(posts[i - 1] & pres[i] & reach(system, layers[-1], stats))
    final = posts[-1] & ends & reach(system, layers[-1], stats)
    if not final:
        return None

    cuts = [lowest_bit(final)]
    for layer in reversed(layers):
        cuts.append(lowest_bit(layer & coreach(system, 1 << cuts[-1], stats)))
    cuts.reverse()

    segments = [
        shortest_path(system, 1 << a, 1 << b, stats=stats)
        for a, b in zip(cuts, cuts[1:])
    ]
    return concat(segments)


def and_marker_search(
    system: TransitionSystem,
    goals: Sequence[Goal],
    constraint: EndpointConstraint = NO_CONSTRAINT,
    settings: CheckerSettings = DEFAULT_SETTINGS,
    stats: Optional[CheckStats] = None,
) -> Optional[Path]:
    """Exact AND witness search over ordered blocks of interval markers.

    Marker 2i is the start k_i of goal i and marker 2i+1 its end l_i. A
    witness is a sequence of blocks at strictly increasing positions; a
    block's state must satisfy λ(ι_i) for its k-markers and λ(γ_i) for its
    l-markers. Between two blocks some interval must be open (k placed, l
    not yet) so every step of the path stays covered. Blocks are chosen
    include-first in marker order, which visits block assignment vectors in
    lexicographic order; failed (placed markers, block states) pairs are
    memoized.
    """
    n = len(goals)
    if n > settings.max_and_arity:
        raise ArityCapExceeded(n, settings.max_and_arity)
    stats = stats if stats is not None else CheckStats()

    pres, posts = goal_sets(system, goals)
    labels = []
    for pre, post in zip(pres, posts):
        labels.extend((pre, post))
    starts, ends = constraint.starts(system), constraint.ends(system)
    full = (1 << (2 * n)) - 1
    starts_of = sum(1 << (2 * i) for i in range(n))

    failed = set()
    chosen: List[Tuple[int, StateSet]] = []

    def has_open_interval(placed: int) -> bool:
        opened = placed & starts_of
        closed = (placed >> 1) & starts_of
        return bool(opened & ~closed)

    def search(placed: int, base: StateSet) -> bool:
        # base: states allowed for the next block
        if placed and not has_open_interval(placed):
            return False
        unplaced = [m for m in range(2 * n) if not (placed >> m) & 1]

        def choose(idx: int, block: int, allowed: StateSet) -> bool:
            if idx == len(unplaced):
                if not block:
                    return False
                now_placed = placed | block
                states = allowed & ends if now_placed == full else allowed
                if not states or (now_placed, states) in failed:
                    return False
                stats.weak_orders += 1
                chosen.append((block, states))
                if now_placed == full:
                    return True
                future = reach(system, post_set(system, states), stats)
                # every marker still to place needs a reachable state
                placeable = all(labels[m] & future for m in range(2 * n) if not (now_placed >> m) & 1)
                if placeable and search(now_placed, future):
                    return True
                chosen.pop()
                failed.add((now_placed, states))
                return False

            m = unplaced[idx]
            # an end marker never precedes its start marker
            if not (m & 1) or ((placed | block) >> (m - 1)) & 1:
                narrowed = allowed & labels[m]
                if narrowed and choose(idx + 1, block | (1 << m), narrowed):
                    return True
            return choose(idx + 1, block, allowed)

        return choose(0, 0, base)

    if not search(0, starts):
        logger.debug(f"AND search exhausted after {stats.weak_orders} block choices")
        return None

    # backward choice of one state per block, then shortest non-empty segments
    picks = [lowest_bit(chosen[-1][1])]
    for _, states in reversed(chosen[:-1]):
        predecessors = pre_set(system, coreach(system, 1 << picks[-1], stats))
        picks.append(lowest_bit(states & predecessors))
    picks.reverse()

    if len(picks) == 1:
        return Path(system, picks, validate=False)
    segments = [
        shortest_path(system, 1 << a, 1 << b, nonempty=True, stats=stats)
        for a, b in zip(picks, picks[1:])
    ]
    logger.debug(f"AND witness with {len(chosen)} blocks after {stats.weak_orders} block choices")
    return concat(segments)


def semantics_nonempty(
    system: TransitionSystem,
    expr: GoalExpression,
    settings: CheckerSettings = DEFAULT_SETTINGS,
    stats: Optional[CheckStats] = None,
) -> Tuple[bool, Optional[Path]]:
    """⟦expr⟧ ≠ ∅, with a witness when it holds"""
    witness = find_witness(system, expr, NO_CONSTRAINT, settings, stats)
    return witness is not None, witness


def infer_precondition(system: TransitionSystem, post: str) -> StateSet:
    """Weakest precondition set: every state from which λ(post) is reachable"""
    return coreach(system, system.label(post))
