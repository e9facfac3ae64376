"""
Shared test helpers: fixture loading and hypothesis strategies for random instances
"""

import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT_DIR)

from models.goals import Goal, GoalExpression, Operator  # noqa: E402
from models.system import TransitionSystem, build_system, iter_bits  # noqa: E402
from models.tree import AttackTree  # noqa: E402
from services.satgen import CnfInstance  # noqa: E402
from services.spec_lang import load_instance, parse_system_file, parse_tree_file, read_file  # noqa: E402

FIXTURES = os.path.join(ROOT_DIR, "fixtures")

PROPS = ("a", "b", "c", "d")

# Random systems whose path count up to the oracle budget exceeds this are discarded
MAX_ENUMERATED_PATHS = 4000


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def load_fixture(system_file: str, tree_file: str = None):
    """(TransitionSystem, AttackTree or None) for fixture file names"""
    system_doc = parse_system_file(read_file(fixture_path(system_file)))
    tree_doc = parse_tree_file(read_file(fixture_path(tree_file))) if tree_file else None
    return load_instance(system_doc, tree_doc)


def random_settings(max_examples: int):
    """Reproducible runs; oracle-sized instances are filtered, so tolerate rejections"""
    return settings(
        max_examples=max_examples,
        derandomize=True,
        database=None,
        deadline=None,
        suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow],
    )


# ============================================================
# STRATEGIES
# ============================================================

@st.composite
def systems(draw, min_states: int = 1, max_states: int = 5, props=PROPS) -> TransitionSystem:
    """States s0..s{n-1}, up to 2n transitions (self-loops included), each label on any subset"""
    n = draw(st.integers(min_states, max_states))
    states = [f"s{i}" for i in range(n)]
    pair = st.tuples(st.sampled_from(states), st.sampled_from(states))
    transitions = draw(st.lists(pair, unique=True, max_size=2 * n))
    labeling = {p: draw(st.lists(st.sampled_from(states), unique=True)) for p in props}
    return build_system(states, transitions, labeling)


def goals(props=PROPS):
    return st.builds(Goal, st.sampled_from(props), st.sampled_from(props))


@st.composite
def expressions(draw, ops=tuple(Operator), min_arity: int = 2, max_arity: int = 3) -> GoalExpression:
    op = draw(st.sampled_from(ops))
    arity = draw(st.integers(min_arity, max_arity))
    return GoalExpression.composed(op, draw(st.lists(goals(), min_size=arity, max_size=arity)))


def one_level_trees(ops=tuple(Operator), min_arity: int = 2, max_arity: int = 3):
    """A root goal refined once into leaf goals"""
    return st.builds(
        lambda goal, expr: AttackTree(goal, expr.op, tuple(AttackTree(g) for g in expr.goals)),
        goals(),
        expressions(ops, min_arity, max_arity),
    )


@st.composite
def walks(draw, system: TransitionSystem, max_length: int = 12):
    """State indices of a walk; stops early at a sink"""
    trail = [draw(st.sampled_from(list(iter_bits(system.all_states))))]
    for _ in range(draw(st.integers(0, max_length))):
        successors = list(iter_bits(system.successors(trail[-1])))
        if not successors:
            break
        trail.append(draw(st.sampled_from(successors)))
    return trail


def state_sets(system: TransitionSystem):
    return st.integers(0, system.all_states)


@st.composite
def cnfs(draw, max_vars: int = 6, max_clauses: int = 10, max_width: int = 3) -> CnfInstance:
    """Clauses of 1..max_width distinct variables with arbitrary signs"""
    num_vars = draw(st.integers(1, max_vars))
    literal = st.tuples(st.integers(1, num_vars), st.booleans()).map(lambda vs: vs[0] if vs[1] else -vs[0])
    clause = st.lists(literal, min_size=1, max_size=max_width, unique_by=abs)
    clauses = draw(st.lists(clause, min_size=1, max_size=max_clauses))
    return CnfInstance(num_vars, tuple(tuple(c) for c in clauses))


# ============================================================
# COUNTING
# ============================================================

def count_paths(system: TransitionSystem, max_size: int) -> int:
    """Number of paths of size <= max_size, by counting walks level by level"""
    counts = {s: 1 for s in iter_bits(system.all_states)}
    total = len(counts)
    for _ in range(max_size):
        following = {}
        for s, c in counts.items():
            for t in iter_bits(system.successors(s)):
                following[t] = following.get(t, 0) + c
        counts = following
        if not counts:
            break
        total += sum(counts.values())
    return total
