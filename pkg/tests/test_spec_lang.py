"""
Tests for the proposition parser and the system/tree JSON documents
"""

import json
import sys
import os

import pytest
from hypothesis import given
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.errors import SchemaError, SpecSyntaxError, SystemValidationError, UnknownPropositionError
from models.goals import Goal
from models.tree import ROOT
from services.prop_parser import And, ConstFalse, ConstTrue, Not, Or, VarEq, parse_prop_expr
from services.spec_lang import (
    load_instance,
    parse_system_file,
    parse_tree_file,
    read_file,
    serialize_system,
    serialize_tree,
    system_from_dict,
    tree_from_dict,
)
from tests.support import fixture_path, load_fixture, random_settings

SMALL_SYSTEM = {
    "variables": {"pos": ["out", "in"], "door": ["open", "shut"]},
    "states": [
        {"id": "a", "assign": {"pos": "out", "door": "shut"}},
        {"id": "b", "assign": {"pos": "out", "door": "open"}},
        {"id": "c", "assign": {"pos": "in", "door": "open"}},
    ],
    "transitions": [["a", "b"], ["b", "c"], ["c", "c"]],
    "propositions": {"outside": "pos == out", "inside": "pos == in"},
}


# ============================================================
# PROPOSITION EXPRESSIONS
# ============================================================

def test_and_binds_tighter_than_or():
    expr = parse_prop_expr("a == x || b == y && c == z")
    assert expr == Or(VarEq("a", "x"), And(VarEq("b", "y"), VarEq("c", "z")))
    assert str(parse_prop_expr("(a == x || b == y) && c == z")) == "((a == x || b == y) && c == z)"


def test_negation_and_constants():
    assert parse_prop_expr("!(lock1 == true)") == Not(VarEq("lock1", "true"))
    assert parse_prop_expr("true").evaluate({})
    assert not parse_prop_expr("false").evaluate({})
    assert parse_prop_expr("win == false && !(pos == out)").evaluate({"win": "false", "pos": "room1"})


def test_primed_identifiers():
    assert parse_prop_expr("iota1' == yes") == VarEq("iota1'", "yes")


@pytest.mark.parametrize("text,line,column", [
    ("pos = out", 1, 5),
    ("pos == out )", 1, 12),
    ("pos == out &&\n  )", 2, 3),
    ("", 1, 1),
])
def test_syntax_errors_carry_positions(text, line, column):
    with pytest.raises(SpecSyntaxError) as excinfo:
        parse_prop_expr(text)
    assert (excinfo.value.line, excinfo.value.column) == (line, column)


def test_unexpected_end_of_input():
    with pytest.raises(SpecSyntaxError) as excinfo:
        parse_prop_expr("pos == out &&")
    assert excinfo.value.reason == "Unexpected end of input"


PROP_ALPHABET = "abxy01_'=&|!() \t\ntruefals"

names = st.text(alphabet="abxy_'", min_size=1, max_size=4).filter(lambda s: s[0] != "'")
prop_exprs = st.recursive(
    st.one_of(st.builds(VarEq, names, st.one_of(names, st.sampled_from(["true", "false"]))),
              st.sampled_from([ConstTrue(), ConstFalse()])),
    lambda inner: st.one_of(st.builds(Not, inner), st.builds(And, inner, inner), st.builds(Or, inner, inner)),
    max_leaves=8,
)


@random_settings(300)
@given(st.one_of(st.text(alphabet=PROP_ALPHABET, max_size=30), st.text(max_size=30)))
def test_parser_accepts_or_reports_a_position(text):
    """Arbitrary text parses to an expression that prints back to itself, or fails with a position"""
    try:
        expr = parse_prop_expr(text)
    except SpecSyntaxError as error:
        assert error.line >= 1 and error.column >= 1
        return
    assert parse_prop_expr(str(expr)) == expr


@random_settings(200)
@given(prop_exprs)
def test_printed_expressions_parse_back(expr):
    assert parse_prop_expr(str(expr)) == expr


# ============================================================
# DOCUMENTS
# ============================================================

def test_fixture_labelings():
    """Goal propositions of the building example evaluate to the expected state sets"""
    system, _ = load_fixture("sys_b.json", "tree_1.json")
    expected = {
        "iota": ["e0p", "e0"],
        "gamma": ["e7", "e7p"],
        "iota1": ["e0p"],
        "iota2": ["e0"],
        "gamma21": ["e4", "e5", "e6", "e7"],
        "iota22": ["e0"],
        "gamma22": ["e7", "e7p"],
        "gamma221": ["e2", "e3", "e4", "e5"],
        "gamma222": ["e6", "e7"],
    }
    for name, states in expected.items():
        assert system.ids(system.label(name)) == states, name
    simple, _ = load_fixture("sys_a.json")
    assert simple.ids(simple.label("p")) == ["e0", "e1"]
    assert simple.ids(simple.label("p'")) == ["e3", "e4", "e5", "e6", "e7"]


def test_schema_errors_point_at_the_offending_value():
    bad = json.loads(json.dumps(SMALL_SYSTEM))
    bad["transitions"][1] = ["b"]
    with pytest.raises(SchemaError) as excinfo:
        system_from_dict(bad)
    assert excinfo.value.pointer == "/transitions/1"

    bad = json.loads(json.dumps(SMALL_SYSTEM))
    bad["states"][2]["colour"] = "red"
    with pytest.raises(SchemaError) as excinfo:
        system_from_dict(bad)
    assert excinfo.value.pointer == "/states/2/colour"

    with pytest.raises(SchemaError) as excinfo:
        tree_from_dict({"pre": "a", "post": "b", "op": "XOR", "children": []})
    assert excinfo.value.pointer == "/op"

    with pytest.raises(SchemaError) as excinfo:
        tree_from_dict({"post": "b", "op": "OR", "children": [{"post": "x"}, {"pre": "y"}]})
    assert excinfo.value.pointer == "/children/1/post"


def test_refined_node_needs_two_children():
    with pytest.raises(SchemaError) as excinfo:
        tree_from_dict({"post": "b", "op": "AND", "children": [{"post": "x"}]})
    assert excinfo.value.pointer == "/children"


def test_assignments_are_checked_against_domains():
    bad = json.loads(json.dumps(SMALL_SYSTEM))
    bad["states"][0]["assign"]["pos"] = "roof"
    with pytest.raises(SchemaError) as excinfo:
        load_instance(system_from_dict(bad))
    assert excinfo.value.pointer == "/states/0/assign/pos"

    bad = json.loads(json.dumps(SMALL_SYSTEM))
    bad["propositions"]["odd"] = "colour == red"
    with pytest.raises(SchemaError):
        load_instance(system_from_dict(bad))


def test_undeclared_transition_endpoint():
    bad = json.loads(json.dumps(SMALL_SYSTEM))
    bad["transitions"].append(["c", "d"])
    with pytest.raises(SystemValidationError):
        load_instance(system_from_dict(bad))


def test_invalid_json():
    with pytest.raises(SchemaError) as excinfo:
        parse_system_file(b'{"states": [')
    assert "invalid JSON" in str(excinfo.value)


def test_tree_goals_may_be_expressions():
    """Strings that are not declared names are labelled under their own text"""
    tree_doc = tree_from_dict({
        "pre": "outside",
        "post": "pos == in && door == open",
        "op": "SAND",
        "children": [
            {"pre": "door == shut", "post": "door == open"},
            {"pre": "door == open", "post": "inside"},
        ],
    })
    system, tree = load_instance(system_from_dict(SMALL_SYSTEM), tree_doc)
    assert tree.goal == Goal("outside", "pos == in && door == open")
    assert system.ids(system.label("pos == in && door == open")) == ["c"]
    assert system.ids(system.label("door == shut")) == ["a"]
    with pytest.raises(UnknownPropositionError):
        system.label("pos == roof")


def test_misspelled_goal_name_is_unknown():
    """A lone identifier never falls through to the expression parser"""
    tree_doc = tree_from_dict({
        "pre": "outside",
        "post": "inside",
        "op": "OR",
        "children": [{"pre": "outside", "post": "insid"}, {"pre": "outside", "post": "door == open"}],
    })
    with pytest.raises(UnknownPropositionError) as excinfo:
        load_instance(system_from_dict(SMALL_SYSTEM), tree_doc)
    assert excinfo.value.name == "insid"


def test_explicit_props_extend_the_labeling():
    doc = system_from_dict({
        "states": [{"id": "s", "props": ["p"]}, {"id": "t"}],
        "transitions": [["s", "t"], ["t", "t"]],
    })
    system, _ = load_instance(doc)
    assert system.ids(system.label("p")) == ["s"]


def test_documents_survive_serialization():
    system_doc = parse_system_file(read_file(fixture_path("sys_c.json")))
    assert parse_system_file(serialize_system(system_doc)) == system_doc
    tree_doc = parse_tree_file(read_file(fixture_path("tree_1.json")))
    assert parse_tree_file(serialize_tree(tree_doc)) == tree_doc
    assert tree_doc.children[1].children[0].pre == "true"
    _, tree = load_instance(system_doc, tree_doc)
    assert tree.subtree(ROOT).goal == Goal("iota", "gamma")
