"""
Attack Tree Checker - System and Tree Documents
JSON schemas, validation with JSON-pointer locations, labeling compilation
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from models.errors import SchemaError, SpecSyntaxError, UnknownPropositionError
from models.goals import Operator
from models.system import TransitionSystem, build_system
from models.tree import AttackTree
from services.prop_parser import PropExpr, is_bare_name, iter_var_eqs, parse_prop_expr

logger = logging.getLogger(__name__)

SYSTEM_KEYS = {"variables", "states", "transitions", "propositions"}
STATE_KEYS = {"id", "assign", "props"}
TREE_KEYS = {"pre", "post", "op", "children"}

TOP = "true"


# ============================================================
# DOCUMENTS
# ============================================================

@dataclass(frozen=True)
class StateEntry:
    id: str
    assign: Optional[Dict[str, str]] = None
    props: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"id": self.id}
        if self.assign is not None:
            data["assign"] = dict(self.assign)
        if self.props:
            data["props"] = list(self.props)
        return data


@dataclass(frozen=True)
class SystemDocument:
    states: Tuple[StateEntry, ...]
    transitions: Tuple[Tuple[str, str], ...]
    variables: Optional[Dict[str, Tuple[str, ...]]] = None
    propositions: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        if self.variables is not None:
            data["variables"] = {name: list(values) for name, values in self.variables.items()}
        data["states"] = [s.to_dict() for s in self.states]
        data["transitions"] = [list(t) for t in self.transitions]
        if self.propositions:
            data["propositions"] = dict(self.propositions)
        return data


@dataclass(frozen=True)
class TreeDocument:
    post: str
    pre: str = TOP
    op: Optional[str] = None
    children: Tuple["TreeDocument", ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"pre": self.pre, "post": self.post}
        if self.op is not None:
            data["op"] = self.op
            data["children"] = [c.to_dict() for c in self.children]
        return data

    def expressions(self) -> Iterable[str]:
        yield self.pre
        yield self.post
        for child in self.children:
            yield from child.expressions()


# ============================================================
# JSON PARSING
# ============================================================

def _load_json(data: Union[bytes, str]) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SchemaError(f"input is not UTF-8: {e}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from None


def _expect(value, kind, pointer: str, what: str):
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise SchemaError(f"{what} expected", pointer)
    return value


def _no_extra_keys(obj: Dict, allowed, pointer: str) -> None:
    extra = sorted(set(obj) - allowed)
    if extra:
        raise SchemaError(f"unknown key {extra[0]!r}", f"{pointer}/{extra[0]}")


def system_from_dict(obj: Any) -> SystemDocument:
    _expect(obj, dict, "/", "object")
    _no_extra_keys(obj, SYSTEM_KEYS, "")

    variables = None
    if "variables" in obj:
        raw = _expect(obj["variables"], dict, "/variables", "object")
        variables = {}
        for name, values in raw.items():
            pointer = f"/variables/{name}"
            _expect(values, list, pointer, "list of values")
            for i, value in enumerate(values):
                _expect(value, str, f"{pointer}/{i}", "string value")
            variables[name] = tuple(values)

    if "states" not in obj:
        raise SchemaError("missing key 'states'", "/states")
    states = []
    for i, entry in enumerate(_expect(obj["states"], list, "/states", "list")):
        pointer = f"/states/{i}"
        _expect(entry, dict, pointer, "object")
        _no_extra_keys(entry, STATE_KEYS, pointer)
        if "id" not in entry:
            raise SchemaError("missing key 'id'", f"{pointer}/id")
        sid = _expect(entry["id"], str, f"{pointer}/id", "string")
        assign = None
        if "assign" in entry:
            assign = dict(_expect(entry["assign"], dict, f"{pointer}/assign", "object"))
            for var, value in assign.items():
                _expect(value, str, f"{pointer}/assign/{var}", "string value")
        props: List[str] = []
        for j, prop in enumerate(_expect(entry.get("props", []), list, f"{pointer}/props", "list")):
            props.append(_expect(prop, str, f"{pointer}/props/{j}", "string"))
        states.append(StateEntry(sid, assign, tuple(props)))

    transitions = []
    for i, pair in enumerate(_expect(obj.get("transitions", []), list, "/transitions", "list")):
        pointer = f"/transitions/{i}"
        if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(x, str) for x in pair):
            raise SchemaError("[from, to] pair of state ids expected", pointer)
        transitions.append((pair[0], pair[1]))

    propositions = {}
    for name, text in _expect(obj.get("propositions", {}), dict, "/propositions", "object").items():
        propositions[name] = _expect(text, str, f"/propositions/{name}", "expression string")

    return SystemDocument(tuple(states), tuple(transitions), variables, propositions)


def tree_from_dict(obj: Any, pointer: str = "") -> TreeDocument:
    _expect(obj, dict, pointer or "/", "object")
    _no_extra_keys(obj, TREE_KEYS, pointer)
    if "post" not in obj:
        raise SchemaError("missing key 'post'", f"{pointer}/post")
    post = _expect(obj["post"], str, f"{pointer}/post", "string")
    pre = _expect(obj.get("pre", TOP), str, f"{pointer}/pre", "string")

    has_op, has_children = "op" in obj, "children" in obj
    if has_op != has_children:
        missing = "children" if has_op else "op"
        raise SchemaError(f"'op' and 'children' go together; missing {missing!r}", f"{pointer}/{missing}")
    if not has_op:
        return TreeDocument(post, pre)

    op = _expect(obj["op"], str, f"{pointer}/op", "string")
    if op not in {o.value for o in Operator}:
        raise SchemaError(f"operator must be OR, AND or SAND, got {op!r}", f"{pointer}/op")
    raw_children = _expect(obj["children"], list, f"{pointer}/children", "list")
    if len(raw_children) < 2:
        raise SchemaError(f"{op} node needs at least 2 children, got {len(raw_children)}", f"{pointer}/children")
    children = tuple(tree_from_dict(child, f"{pointer}/children/{i}") for i, child in enumerate(raw_children))
    return TreeDocument(post, pre, op, children)


def parse_system_file(data: Union[bytes, str]) -> SystemDocument:
    return system_from_dict(_load_json(data))


def parse_tree_file(data: Union[bytes, str]) -> TreeDocument:
    return tree_from_dict(_load_json(data))


def serialize_system(doc: SystemDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, ensure_ascii=False) + "\n"


def serialize_tree(doc: TreeDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, ensure_ascii=False) + "\n"


# ============================================================
# LABELING
# ============================================================

def _variable_domains(doc: SystemDocument) -> Dict[str, set]:
    """Declared domains, or the values seen in assignments when none are declared"""
    if doc.variables is not None:
        return {name: set(values) for name, values in doc.variables.items()}
    domains: Dict[str, set] = {}
    for entry in doc.states:
        for var, value in (entry.assign or {}).items():
            domains.setdefault(var, set()).add(value)
    return domains


def _check_assignments(doc: SystemDocument, domains: Dict[str, set]) -> None:
    for i, entry in enumerate(doc.states):
        if entry.assign is None:
            continue
        pointer = f"/states/{i}/assign"
        for var, value in entry.assign.items():
            if var not in domains:
                raise SchemaError(f"undeclared variable {var!r}", f"{pointer}/{var}")
            if value not in domains[var]:
                raise SchemaError(f"value {value!r} is not in the domain of {var!r}", f"{pointer}/{var}")
        if doc.variables is not None:
            missing = sorted(set(domains) - set(entry.assign))
            if missing:
                raise SchemaError(f"assignment misses variable {missing[0]!r}", pointer)


def _check_expression(expr: PropExpr, domains: Dict[str, set], pointer: str) -> None:
    for eq in iter_var_eqs(expr):
        if eq.variable not in domains:
            raise SchemaError(f"undeclared variable {eq.variable!r}", pointer)
        if eq.value not in domains[eq.variable]:
            raise SchemaError(f"value {eq.value!r} is not in the domain of {eq.variable!r}", pointer)


def _compile_expression(text: str, pointer: str) -> PropExpr:
    try:
        return parse_prop_expr(text)
    except SpecSyntaxError as e:
        raise SpecSyntaxError(f"{pointer}: {e.reason}", e.line, e.column) from None


def compile_labeling(doc: SystemDocument, extra: Optional[Dict[str, str]] = None) -> TransitionSystem:
    """Build the transition system; λ(p) holds the states whose assignment satisfies p,
    plus every state listing p explicitly"""
    domains = _variable_domains(doc)
    _check_assignments(doc, domains)

    sources = [(name, text, f"/propositions/{name}") for name, text in doc.propositions.items()]
    sources += [(name, text, f"expression {text!r}") for name, text in (extra or {}).items()]

    labeling: Dict[str, List[str]] = {}
    for name, text, pointer in sources:
        expr = _compile_expression(text, pointer)
        _check_expression(expr, domains, pointer)
        labeling[name] = [e.id for e in doc.states if expr.evaluate(e.assign or {})]
    for entry in doc.states:
        for prop in entry.props:
            members = labeling.setdefault(prop, [])
            if entry.id not in members:
                members.append(entry.id)

    return build_system([e.id for e in doc.states], doc.transitions, labeling)


def declared_names(doc: SystemDocument) -> set:
    names = set(doc.propositions)
    for entry in doc.states:
        names.update(entry.props)
    return names


def expression_labels(names: set, texts: Iterable[str]) -> Dict[str, str]:
    """Goal strings that need their own label, keyed by their stripped text.

    A lone identifier must be a declared proposition name.
    """
    extra: Dict[str, str] = {}
    for text in texts:
        key = text.strip()
        if key in names or key in extra:
            continue
        if is_bare_name(key):
            raise UnknownPropositionError(key)
        extra[key] = key
    return extra


def compile_tree(doc: TreeDocument) -> AttackTree:
    if doc.op is None:
        return AttackTree.leaf(doc.pre.strip(), doc.post.strip())
    return AttackTree.node(
        doc.pre.strip(), doc.post.strip(), Operator(doc.op), [compile_tree(c) for c in doc.children]
    )


def load_instance(system_doc: SystemDocument, tree_doc: Optional[TreeDocument] = None):
    """Compile a system and, optionally, a tree whose goals may be names or expressions.

    Tree strings that are not declared proposition names are parsed as
    expressions and labelled under their own text.
    """
    extra = {}
    if tree_doc is not None:
        extra = expression_labels(declared_names(system_doc), tree_doc.expressions())
    system = compile_labeling(system_doc, extra)
    tree = compile_tree(tree_doc) if tree_doc is not None else None
    return system, tree


def read_file(path: str) -> bytes:
    with open(path, "rb") as handle:
        return handle.read()
