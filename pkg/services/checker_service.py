"""
Attack Tree Checker - Service Facade
Loads documents, dispatches engines and scopes, renders reports.
Shared by the CLI and the HTTP routes.
"""

import json
import logging
from typing import Any, Dict, List, Optional, Tuple, Union

from models.errors import ConfigurationError, TreeStructureError
from models.report import CheckReport, PropertyKind
from models.system import TransitionSystem
from models.tree import AttackTree, NodePath, composed_nodes, expression_at
from services import checkers, oracle
from services.config import CheckerConfig, CheckerSettings
from services.dot_export import export_dot
from services.satgen import parse_dimacs, reduction_documents, truth_table_sat
from services.semantics import infer_precondition
from services.spec_lang import (
    SystemDocument,
    TreeDocument,
    compile_labeling,
    compile_tree,
    declared_names,
    expression_labels,
    load_instance,
    parse_system_file,
    parse_tree_file,
    system_from_dict,
    tree_from_dict,
)

logger = logging.getLogger(__name__)

SCOPES = ("local", "global")
Source = Union[bytes, str, Dict[str, Any]]


def _system_doc(source: Source) -> SystemDocument:
    if isinstance(source, dict):
        return system_from_dict(source)
    return parse_system_file(source)


def _tree_doc(source: Source) -> TreeDocument:
    if isinstance(source, dict):
        return tree_from_dict(source)
    return parse_tree_file(source)


class CheckerService:
    """Entry point for checks, exports and SAT instance generation"""

    def __init__(self, settings: Optional[CheckerSettings] = None):
        self._settings = settings

    def settings(self, **overrides) -> CheckerSettings:
        if self._settings is not None:
            return self._settings.with_overrides(**overrides)
        return CheckerSettings.from_env(**overrides)

    # ==========================================
    # LOADING
    # ==========================================
    def load(self, system: Source, tree: Optional[Source] = None) -> Tuple[TransitionSystem, Optional[AttackTree]]:
        """Parse and compile a system document and an optional tree document"""
        system_doc = _system_doc(system)
        tree_doc = _tree_doc(tree) if tree is not None else None
        compiled, compiled_tree = load_instance(system_doc, tree_doc)
        logger.info(
            f"📂 Loaded system with {compiled.num_states} states"
            + (f" and a tree of {compiled_tree.size} nodes" if compiled_tree is not None else "")
        )
        return compiled, compiled_tree

    # ==========================================
    # CHECKS
    # ==========================================
    def check(
        self,
        system: TransitionSystem,
        tree: AttackTree,
        prop: Union[str, PropertyKind],
        scope: str = "global",
        node: Optional[str] = None,
        engine: str = "exact",
        budget: Optional[int] = None,
        max_and_arity: Optional[int] = None,
        jobs: Optional[int] = None,
    ) -> List[CheckReport]:
        """Reports in preorder; local scope yields exactly one report"""
        prop = prop if isinstance(prop, PropertyKind) else PropertyKind.parse(prop)
        if scope not in SCOPES:
            raise ConfigurationError(f"Unknown scope {scope!r}; expected local or global")
        if engine not in CheckerConfig.ENGINES:
            raise ConfigurationError(f"Unknown engine {engine!r}; expected exact or oracle")
        if scope == "local" and node is None:
            raise ConfigurationError("A local check needs a node selector (--node root, --node 1.1, ...)")
        if scope == "global" and node is not None:
            raise ConfigurationError("A node selector only applies to local checks")

        target = NodePath.parse(node) if node is not None else None
        if target is not None:
            tree.subtree(target)

        overrides: Dict[str, Any] = {"max_and_arity": max_and_arity, "jobs": jobs}
        if engine == "exact":
            overrides["over_and_budget"] = budget
        settings = self.settings(**overrides)
        if engine == "oracle" and budget is None:
            budget = settings.oracle_budget

        logger.info(f"🔍 {prop.value} check ({scope}, {engine}) on a {tree.size}-node tree")
        if prop is PropertyKind.ADMISSIBLE:
            reports = self._admissible(system, tree, engine, budget, settings)
            if target is not None:
                reports = [r for r in reports if r.node == target]
        elif engine == "exact":
            if target is not None:
                reports = [checkers.check_node(system, tree, target, prop, settings)]
            else:
                reports = checkers.check_global(system, tree, prop, settings)
        else:
            paths = [target] if target is not None else composed_nodes(tree)
            reports = [self._oracle_node(system, tree, path, prop, budget, settings) for path in paths]

        for report in reports:
            marker = "✅" if report.holds else "❌"
            logger.info(f"{marker} {report.node}: {report.property.value} {report.verdict}")
        return reports

    @staticmethod
    def _admissible(system, tree, engine, budget, settings) -> List[CheckReport]:
        if engine == "oracle":
            return oracle.oracle_admissible(system, tree, budget)
        return checkers.check_admissible(system, tree, settings)

    @staticmethod
    def _oracle_node(system, tree, path, prop, budget, settings) -> CheckReport:
        goal, expr = expression_at(tree, path)
        if expr is None:
            raise TreeStructureError(f"Node {path} is a leaf; local checks need a refined node")
        checkers.require_arity_cap(expr, settings)
        return oracle.oracle_report(system, goal, expr, prop, budget, path)

    # ==========================================
    # RENDERING
    # ==========================================
    @staticmethod
    def render_text(reports: List[CheckReport], witness: bool = False, timings: bool = False) -> str:
        """One line per node: mark, node, property, verdict, engine"""
        lines = []
        for report in reports:
            mark = "✓" if report.holds else "✗"
            line = f"{mark} {report.node} {report.property.value} {report.verdict} ({report.engine})"
            if report.detail:
                line += f": {report.detail}"
            if witness and report.evidence is not None:
                line += f" | {report.evidence}"
            if timings:
                line += f" [{report.stats.wall_time_ms:.3f} ms]"
            lines.append(line)
        return "\n".join(lines) + "\n"

    @staticmethod
    def render_json(reports: List[CheckReport], timings: bool = False) -> str:
        return json.dumps([r.to_dict(timings) for r in reports], indent=2, ensure_ascii=False) + "\n"

    # ==========================================
    # EXPORT, SAT, PRECONDITIONS
    # ==========================================
    def export_dot(self, system: Optional[Source] = None, tree: Optional[Source] = None) -> str:
        if system is None and tree is None:
            raise ConfigurationError("export-dot needs --system, --tree or both")
        if system is not None:
            compiled, compiled_tree = self.load(system, tree)
            return export_dot(compiled, compiled_tree)
        return export_dot(None, compile_tree(_tree_doc(tree)))

    def reduce_sat(self, dimacs: str) -> Dict[str, Any]:
        """System and tree documents for a CNF, plus its truth-table verdict when affordable"""
        cnf = parse_dimacs(dimacs)
        system_doc, tree_doc = reduction_documents(cnf)
        satisfiable = None
        if cnf.num_vars <= CheckerConfig.MAX_TRUTH_TABLE_VARIABLES:
            satisfiable = truth_table_sat(cnf)
        logger.info(f"🧩 Reduced CNF: {cnf.num_vars} variables, {cnf.num_clauses} clauses")
        return {"system": system_doc, "tree": tree_doc, "satisfiable": satisfiable}

    def infer_precondition(self, system: Source, post: str) -> List[str]:
        """State ids from which the postcondition is reachable"""
        doc = _system_doc(system)
        post = post.strip()
        compiled = compile_labeling(doc, expression_labels(declared_names(doc), [post]))
        return compiled.ids(infer_precondition(compiled, post))

    def get_service_info(self) -> Dict[str, Any]:
        settings = self.settings()
        return {
            "service": CheckerConfig.SERVICE_NAME,
            "version": CheckerConfig.VERSION,
            "engines": list(CheckerConfig.ENGINES),
            "properties": [p.value for p in PropertyKind],
            "scopes": list(SCOPES),
            "config": {
                "max_and_arity": settings.max_and_arity,
                "over_and_budget": settings.over_and_budget,
                "oracle_budget": settings.oracle_budget,
                "jobs": settings.jobs,
            },
        }


# ============================================================
# GLOBAL INSTANCE
# ============================================================
checker_service = CheckerService()


def get_service_info() -> Dict[str, Any]:
    return checker_service.get_service_info()
