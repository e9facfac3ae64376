"""
Attack Tree Checker - Proposition Expression Parser
Boolean combinations of state-variable equalities, e.g. pos == out && !(key1 == true)
"""

import re
import threading
from dataclasses import dataclass
from typing import Mapping, Set

import ply.lex as lex
import ply.yacc as yacc

from models.errors import SpecSyntaxError


# ============================================================
# EXPRESSION TREE
# ============================================================

class PropExpr:
    """Base class of proposition expressions"""

    def evaluate(self, assignment: Mapping[str, str]) -> bool:
        raise NotImplementedError

    def variables(self) -> Set[str]:
        return set()


@dataclass(frozen=True)
class VarEq(PropExpr):
    variable: str
    value: str

    def evaluate(self, assignment):
        return assignment.get(self.variable) == self.value

    def variables(self):
        return {self.variable}

    def __str__(self):
        return f"{self.variable} == {self.value}"


@dataclass(frozen=True)
class Not(PropExpr):
    inner: PropExpr

    def evaluate(self, assignment):
        return not self.inner.evaluate(assignment)

    def variables(self):
        return self.inner.variables()

    def __str__(self):
        return f"!({self.inner})"


@dataclass(frozen=True)
class And(PropExpr):
    left: PropExpr
    right: PropExpr

    def evaluate(self, assignment):
        return self.left.evaluate(assignment) and self.right.evaluate(assignment)

    def variables(self):
        return self.left.variables() | self.right.variables()

    def __str__(self):
        return f"({self.left} && {self.right})"


@dataclass(frozen=True)
class Or(PropExpr):
    left: PropExpr
    right: PropExpr

    def evaluate(self, assignment):
        return self.left.evaluate(assignment) or self.right.evaluate(assignment)

    def variables(self):
        return self.left.variables() | self.right.variables()

    def __str__(self):
        return f"({self.left} || {self.right})"


@dataclass(frozen=True)
class ConstTrue(PropExpr):
    def evaluate(self, assignment):
        return True

    def __str__(self):
        return "true"


@dataclass(frozen=True)
class ConstFalse(PropExpr):
    def evaluate(self, assignment):
        return False

    def __str__(self):
        return "false"


def iter_var_eqs(expr: PropExpr):
    """Every VarEq leaf of an expression"""
    if isinstance(expr, VarEq):
        yield expr
    elif isinstance(expr, Not):
        yield from iter_var_eqs(expr.inner)
    elif isinstance(expr, (And, Or)):
        yield from iter_var_eqs(expr.left)
        yield from iter_var_eqs(expr.right)


# ============================================================
# LEXER
# ============================================================

reserved = {
    'true': 'TRUE',
    'false': 'FALSE',
}

tokens = (
    'IDENT', 'TRUE', 'FALSE', 'EQ', 'AND', 'OR', 'NOT', 'LPAREN', 'RPAREN',
)

t_EQ = r'=='
t_AND = r'&&'
t_OR = r'\|\|'
t_NOT = r'!'
t_LPAREN = r'\('
t_RPAREN = r'\)'

t_ignore = ' \t\r'


IDENT = r"[A-Za-z0-9_][A-Za-z0-9_']*"


@lex.TOKEN(IDENT)
def t_IDENT(t):
    t.type = reserved.get(t.value, 'IDENT')
    return t


def t_newline(t):
    r'\n+'
    t.lexer.lineno += len(t.value)


def t_error(t):
    raise SpecSyntaxError(
        f"Unexpected character {t.value[0]!r}", t.lexer.lineno, _column(t.lexer.lexdata, t.lexpos)
    )


def _column(text: str, pos: int) -> int:
    return pos - text.rfind('\n', 0, pos)


# ============================================================
# GRAMMAR (&& binds tighter than ||)
# ============================================================

precedence = (
    ('left', 'OR'),
    ('left', 'AND'),
    ('right', 'NOT'),
)


def p_expr_or(p):
    'expr : expr OR expr'
    p[0] = Or(p[1], p[3])


def p_expr_and(p):
    'expr : expr AND expr'
    p[0] = And(p[1], p[3])


def p_expr_not(p):
    'expr : NOT expr'
    p[0] = Not(p[2])


def p_expr_group(p):
    'expr : LPAREN expr RPAREN'
    p[0] = p[2]


def p_expr_eq(p):
    'expr : IDENT EQ value'
    p[0] = VarEq(p[1], p[3])


def p_expr_true(p):
    'expr : TRUE'
    p[0] = ConstTrue()


def p_expr_false(p):
    'expr : FALSE'
    p[0] = ConstFalse()


def p_value(p):
    '''value : IDENT
             | TRUE
             | FALSE'''
    p[0] = p[1]


class _UnexpectedEnd(Exception):
    pass


def p_error(p):
    if p is None:
        raise _UnexpectedEnd()
    raise SpecSyntaxError(
        f"Unexpected token {p.value!r}", p.lineno, _column(p.lexer.lexdata, p.lexpos)
    )


_lexer = lex.lex()
_parser = yacc.yacc(debug=False, write_tables=False, errorlog=yacc.NullLogger())
_lock = threading.Lock()


def parse_prop_expr(text: str) -> PropExpr:
    """Parse one proposition expression"""
    with _lock:
        lexer = _lexer.clone()
        lexer.lineno = 1
        try:
            result = _parser.parse(text, lexer=lexer)
        except _UnexpectedEnd:
            line = text.count('\n') + 1
            raise SpecSyntaxError("Unexpected end of input", line, _column(text, len(text))) from None
    if result is None:
        raise SpecSyntaxError("Empty expression", 1, 1)
    return result


_NAME = re.compile(IDENT)


def is_bare_name(text: str) -> bool:
    """A lone identifier: a proposition name, not an expression"""
    return _NAME.fullmatch(text) is not None and text not in reserved
