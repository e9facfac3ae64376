"""
Tests for the brute-force oracle and its agreement with the exact checkers
"""

import sys
import os

import pytest
from hypothesis import assume, given

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.errors import ConfigurationError
from models.goals import Goal, GoalExpression, Operator
from models.report import PropertyKind
from models.tree import ROOT, composed_nodes, expression_at
from services.checkers import check_admissible, check_node
from services.oracle import (
    PathBudget,
    default_budget,
    enumerate_paths,
    oracle_admissible,
    oracle_check,
    oracle_report,
    oracle_semantics,
)
from tests.support import MAX_ENUMERATED_PATHS, count_paths, load_fixture, one_level_trees, random_settings, systems

LOCAL_PROPERTIES = (PropertyKind.MEET, PropertyKind.UNDER, PropertyKind.OVER, PropertyKind.MATCH)


def test_enumeration_on_the_acyclic_chain():
    """8 states in a line: 8 + 7 + ... + 1 paths"""
    system, _ = load_fixture("sys_a.json")
    paths = list(enumerate_paths(system, 100))
    assert len(paths) == 36
    assert len(set(paths)) == 36
    assert [p.size for p in paths] == sorted(p.size for p in paths)
    assert paths[0].state_ids() == ["e0"]
    assert paths[-1].state_ids() == [f"e{i}" for i in range(8)]
    assert len(list(enumerate_paths(system, 0))) == 8


def test_enumeration_respects_sources():
    system, _ = load_fixture("sys_a.json")
    paths = list(enumerate_paths(system, 3, system.mask(["e5"])))
    assert [p.state_ids() for p in paths] == [["e5"], ["e5", "e6"], ["e5", "e6", "e7"]]


def test_bounded_semantics_grows_with_the_budget():
    """Each extra trip around the e3/e4 loop costs two transitions"""
    system, _ = load_fixture("sys_a_prime.json")
    goal = GoalExpression.atomic(Goal("iota", "gamma"))
    at_10 = oracle_semantics(system, goal, 10)
    assert sorted(p.size for p in at_10) == [7, 9]
    at_11 = oracle_semantics(system, goal, 11)
    assert sorted(p.size for p in at_11) == [7, 9, 11]
    assert at_10 < at_11


def test_negative_budget_is_rejected():
    with pytest.raises(ConfigurationError):
        PathBudget(-1)
    system, _ = load_fixture("sys_a.json")
    with pytest.raises(ConfigurationError):
        list(enumerate_paths(system, -3))


def test_default_budgets():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    _, expr = expression_at(tree, ROOT)
    assert default_budget(system, expr, PropertyKind.MEET) == 3 * 10
    assert default_budget(system, expr, PropertyKind.OVER) == 10
    assert default_budget(system, None, PropertyKind.ADMISSIBLE) == 10


@pytest.mark.parametrize("system_file,tree_file", [
    ("sys_b.json", "tree_1.json"),
    ("sys_c.json", "tree_2.json"),
])
def test_oracle_agrees_on_the_fixtures(system_file, tree_file):
    system, tree = load_fixture(system_file, tree_file)
    for node in composed_nodes(tree):
        goal, expr = expression_at(tree, node)
        for prop in LOCAL_PROPERTIES:
            exact = check_node(system, tree, node, prop)
            assert oracle_check(system, goal, expr, prop).holds == exact.holds, f"{prop.value} at {node}"


def test_oracle_report_on_the_roof_variant():
    system, tree = load_fixture("sys_c.json", "tree_2.json")
    goal, expr = expression_at(tree, ROOT)
    report = oracle_report(system, goal, expr, PropertyKind.MATCH)
    assert not report.holds
    assert report.engine == "oracle"
    assert report.detail == "over-match fails"
    assert report.evidence.state_ids() == ["e8", "e9"]
    holding = oracle_report(system, goal, expr, PropertyKind.UNDER)
    assert holding.holds and holding.evidence is None


def test_oracle_admissibility_on_the_fixture_tree():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    reports = oracle_admissible(system, tree)
    assert [str(r.node) for r in reports] == ["root", "0", "1", "1.0", "1.1", "1.1.0", "1.1.1", "1.1.2"]
    assert all(r.holds for r in reports)


@pytest.mark.slow
@random_settings(200)
@given(systems(min_states=2, max_states=5), one_level_trees())
def test_checkers_agree_with_the_oracle_on_random_instances(system, tree):
    """Every property, every operator, self-loops included"""
    goal, expr = expression_at(tree, ROOT)
    assume(count_paths(system, default_budget(system, expr, PropertyKind.MEET)) <= MAX_ENUMERATED_PATHS)
    for prop in LOCAL_PROPERTIES:
        exact = check_node(system, tree, ROOT, prop)
        oracle = oracle_check(system, goal, expr, prop)
        assert exact.holds == oracle.holds, f"{prop.value}: {goal} vs {expr} on {sorted(system.transitions)}"
    assert check_admissible(system, tree)[0].holds == oracle_admissible(system, tree)[0].holds


@pytest.mark.slow
@random_settings(60)
@given(systems(min_states=2, max_states=4), one_level_trees(ops=(Operator.AND,), min_arity=3, max_arity=3))
def test_random_and_refinements_agree(system, tree):
    """AND is the operator with the most delicate search; give it extra draws"""
    goal, expr = expression_at(tree, ROOT)
    assume(count_paths(system, default_budget(system, expr, PropertyKind.MEET)) <= MAX_ENUMERATED_PATHS)
    for prop in LOCAL_PROPERTIES:
        assert check_node(system, tree, ROOT, prop).holds == oracle_check(system, goal, expr, prop).holds
