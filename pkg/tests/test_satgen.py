"""
Tests for DIMACS handling and the CNF to attack-tree reduction
"""

import logging
import sys
import os

import pytest
from hypothesis import given
from sympy.logic.algorithms.dpll import dpll_satisfiable
from sympy.logic.utilities.dimacs import load

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.errors import DimacsError
from models.goals import Operator
from models.tree import ROOT
from services.checkers import check_admissible, check_nonempty
from services.config import CheckerSettings
from services.satgen import (
    CnfInstance,
    parse_dimacs,
    reduce,
    reduction_documents,
    truth_table_sat,
    write_dimacs,
)
from services.spec_lang import load_instance
from tests.support import cnfs, fixture_path, random_settings


def _fixture_cnf(name):
    with open(fixture_path(name)) as handle:
        return parse_dimacs(handle.read())


def test_parse_fixture():
    cnf = _fixture_cnf("two_clauses.cnf")
    assert cnf.num_vars == 3
    assert cnf.clauses == ((1, -2), (1, 3))
    assert parse_dimacs(write_dimacs(cnf)) == cnf


def test_clauses_may_span_lines():
    cnf = parse_dimacs("p cnf 2 1\n1\n-2 0\n")
    assert cnf.clauses == ((1, -2),)


@pytest.mark.parametrize("text,line", [
    ("p cnf 2 1\n1 x 0\n", 2),
    ("1 2 0\np cnf 2 1\n", 1),
    ("c header\np cnf 2\n", 2),
    ("p cnf 2 1\n1 3 0\n", 2),
    ("p cnf 2 1\np cnf 2 1\n", 2),
])
def test_malformed_dimacs_reports_the_line(text, line):
    with pytest.raises(DimacsError) as excinfo:
        parse_dimacs(text)
    assert excinfo.value.line == line


def test_missing_problem_line():
    with pytest.raises(DimacsError):
        parse_dimacs("c nothing here\n")


def test_clause_count_mismatch_is_a_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="services.satgen"):
        cnf = parse_dimacs("p cnf 2 3\n1 2 0\n-1 0\n")
    assert cnf.num_clauses == 2
    assert "announces 3 clauses" in caplog.text


def test_reduction_layout():
    """s, then one state per literal, and complete links between consecutive layers"""
    system, expr = reduce(_fixture_cnf("two_clauses.cnf"))
    assert system.num_states == 7
    assert len(system.transitions) == 10
    assert system.ids(system.label("start")) == ["s"]
    assert system.ids(system.label("C1")) == ["x1", "-x2"]
    assert system.ids(system.label("C2")) == ["x1", "x3"]
    assert expr.op is Operator.AND
    assert [str(g) for g in expr.goals] == ["start >> C1", "start >> C2"]


def test_single_clause_is_padded():
    system, expr = reduce(CnfInstance(1, ((1,),)))
    assert expr.arity == 2
    assert check_nonempty(system, expr)[0]


def test_reduction_needs_variables_and_clauses():
    with pytest.raises(DimacsError):
        reduce(CnfInstance(0, ()))
    with pytest.raises(DimacsError):
        reduce(CnfInstance(2, ()))


def test_satisfiable_formula_gives_an_admissible_tree():
    system, tree = load_instance(*reduction_documents(_fixture_cnf("two_clauses.cnf")))
    reports = check_admissible(system, tree)
    assert reports[0].holds
    assert reports[0].evidence.state_ids()[0] == "s"


def test_unsatisfiable_formula_fails_at_the_refinement():
    system, tree = load_instance(*reduction_documents(_fixture_cnf("unsat.cnf")))
    root = check_admissible(system, tree)[0]
    assert not root.holds
    assert root.node == ROOT
    assert root.detail.startswith("(b)")


@pytest.mark.slow
@random_settings(40)
@given(cnfs(max_vars=6, max_clauses=10))
def test_reduction_decides_generated_formulas(cnf):
    """Admissibility agrees with a truth table and with sympy's DPLL"""
    settings = CheckerSettings(max_and_arity=10)
    expected = truth_table_sat(cnf)
    assert bool(dpll_satisfiable(load(write_dimacs(cnf)))) == expected
    system, expr = reduce(cnf)
    assert check_nonempty(system, expr, settings)[0] == expected, write_dimacs(cnf)
    system, tree = load_instance(*reduction_documents(cnf))
    assert check_admissible(system, tree, settings)[0].holds == expected
