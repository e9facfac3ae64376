"""
Golden checks on the two-room building: the door/window tree and its roof variant
"""

import sys
import os

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.errors import ArityCapExceeded, ConfigurationError, SearchBudgetExceeded, TreeStructureError
from models.goals import Goal, GoalExpression, Operator
from models.report import PropertyKind
from models.tree import ROOT, NodePath
from services.checkers import (
    check_admissible,
    check_global,
    check_meet,
    check_node,
    check_nonempty,
    overall_verdict,
)
from services.config import CheckerSettings
from tests.support import load_fixture

NODE_1 = NodePath.parse("1")


def test_root_match_holds():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    report = check_node(system, tree, ROOT, PropertyKind.MATCH)
    assert report.holds
    assert report.evidence is None
    assert report.detail is None


def test_and_node_over_match_holds():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    report = check_node(system, tree, NODE_1, PropertyKind.OVER)
    assert report.holds
    assert report.engine == "over-and-simple-paths"


def test_and_node_under_match_fails_through_the_window_state():
    """The open-window start reaches the door path, so AND paths leave ι2"""
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    report = check_node(system, tree, NODE_1, PropertyKind.UNDER)
    assert not report.holds
    ids = report.evidence.state_ids()
    assert (ids[0], ids[-1]) == ("e0p", "e7")
    assert ids == ["e0p", "e0", "e1", "e2", "e3", "e4", "e5", "e6", "e7"]


def test_global_match_fails_only_at_the_and_node():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    reports = check_global(system, tree, PropertyKind.MATCH)
    assert [str(r.node) for r in reports] == ["root", "1", "1.1"]
    assert [r.holds for r in reports] == [True, False, True]
    assert reports[1].detail == "under-match fails"
    assert not overall_verdict(reports)


def test_global_meet_holds():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    reports = check_global(system, tree, PropertyKind.MEET)
    assert overall_verdict(reports)
    for report in reports:
        assert report.evidence is not None


def test_global_checks_with_worker_threads_keep_preorder():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    reports = check_global(system, tree, PropertyKind.MATCH, CheckerSettings(jobs=3))
    assert [str(r.node) for r in reports] == ["root", "1", "1.1"]
    assert [r.holds for r in reports] == [True, False, True]


def test_tree_is_admissible():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    reports = check_admissible(system, tree)
    assert len(reports) == 8
    assert all(r.holds for r in reports)
    assert str(reports[0].node) == "root"


def test_roof_variant_under_match_holds():
    system, tree = load_fixture("sys_c.json", "tree_2.json")
    assert check_node(system, tree, ROOT, PropertyKind.UNDER).holds


def test_roof_variant_over_match_fails_via_the_roof():
    system, tree = load_fixture("sys_c.json", "tree_2.json")
    report = check_node(system, tree, ROOT, PropertyKind.OVER)
    assert not report.holds
    assert report.evidence.state_ids() == ["e8", "e9"]
    match = check_node(system, tree, ROOT, PropertyKind.MATCH)
    assert match.detail == "over-match fails"
    assert match.evidence.state_ids() == ["e8", "e9"]


def test_sand_node_checks():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    node = NodePath.parse("1.1")
    for prop in (PropertyKind.MEET, PropertyKind.UNDER, PropertyKind.OVER):
        assert check_node(system, tree, node, prop).holds, prop


def test_inadmissible_refinement_is_reported():
    """A SAND whose steps cannot be chained fails at (b)"""
    system, _ = load_fixture("sys_a.json")
    from models.tree import AttackTree
    tree = AttackTree.node("iota", "gamma", "SAND", [
        AttackTree.leaf("gamma221", "gamma222"),
        AttackTree.leaf("iota", "p"),
    ])
    reports = check_admissible(system, tree)
    assert not reports[0].holds
    assert reports[0].detail.startswith("(b)")
    assert reports[1].holds and reports[2].holds


def test_local_checks_reject_leaves():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    with pytest.raises(TreeStructureError):
        check_node(system, tree, NodePath.parse("0"), PropertyKind.MEET)
    with pytest.raises(ConfigurationError):
        check_node(system, tree, ROOT, PropertyKind.ADMISSIBLE)


def test_arity_cap_is_enforced():
    system, _ = load_fixture("sys_a.json")
    wide = GoalExpression.composed(Operator.AND, [Goal("iota", "gamma")] * 5)
    with pytest.raises(ArityCapExceeded):
        check_meet(system, Goal("iota", "gamma"), wide)
    with pytest.raises(ArityCapExceeded):
        check_nonempty(system, wide)
    assert check_meet(system, Goal("iota", "gamma"), wide, CheckerSettings(max_and_arity=5)).holds


def test_over_and_budget():
    system, tree = load_fixture("sys_b.json", "tree_1.json")
    with pytest.raises(SearchBudgetExceeded):
        check_node(system, tree, NODE_1, PropertyKind.OVER, CheckerSettings(over_and_budget=0))
    report = check_node(system, tree, NODE_1, PropertyKind.OVER, CheckerSettings(over_and_budget=1))
    assert report.holds
    assert report.stats.paths_enumerated == 1


def test_report_serialization():
    system, tree = load_fixture("sys_c.json", "tree_2.json")
    data = check_node(system, tree, ROOT, PropertyKind.OVER).to_dict()
    assert set(data) == {"node", "property", "verdict", "evidence", "engine", "stats"}
    assert data["verdict"] == "fails"
    assert data["evidence"] == ["e8", "e9"]
    assert "wall_time_ms" not in data["stats"]
