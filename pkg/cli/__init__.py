"""
Attack Tree Checker - Command Line
check, export-dot, gen-sat and infer-pre on top of the service facade.

Exit codes: 0 property holds, 1 property fails, 2 usage or input error,
3 AND arity cap or search budget exceeded.
"""

import logging
import os
from typing import Optional

import click

from models.errors import ArityCapExceeded, AttackTreeError, SearchBudgetExceeded
from services.checker_service import checker_service
from services.config import CheckerConfig, configure_logging
from services.spec_lang import read_file, serialize_system, serialize_tree

logger = logging.getLogger(__name__)

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

PROPERTIES = ["admissible", "meet", "under", "over", "match"]

InputFile = click.Path(exists=True, dir_okay=False, readable=True)


def _abort(ctx: click.Context, error: Exception) -> None:
    code = EXIT_LIMIT if isinstance(error, (ArityCapExceeded, SearchBudgetExceeded)) else EXIT_USAGE
    logger.debug("Command failed", exc_info=True)
    click.echo(f"Error: {error}", err=True)
    ctx.exit(code)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"💾 Wrote {out}")
    else:
        click.echo(text, nl=False)


def _read(ctx: click.Context, path: str) -> bytes:
    try:
        return read_file(path)
    except OSError as e:
        _abort(ctx, e)


# ============================================================
# GROUP
# ============================================================

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING (default from ATC_LOG_LEVEL)")
@click.version_option(CheckerConfig.VERSION, prog_name="atc")
@click.pass_context
def cli(ctx, log_level):
    """Attack tree correctness checker"""
    try:
        configure_logging(log_level)
    except AttackTreeError as e:
        _abort(ctx, e)


# ============================================================
# CHECK
# ============================================================

@cli.command("check")
@click.option("--system", "system_path", type=InputFile, required=True, help="System JSON file")
@click.option("--tree", "tree_path", type=InputFile, required=True, help="Tree JSON file")
@click.option("--property", "prop", type=click.Choice(PROPERTIES), required=True)
@click.option("--scope", type=click.Choice(["local", "global"]), default="global", show_default=True)
@click.option("--node", default=None, help="Node selector for local checks: root, 1, 1.1, ...")
@click.option("--engine", type=click.Choice(list(CheckerConfig.ENGINES)), default="exact", show_default=True)
@click.option("--budget", type=click.IntRange(min=0), default=None,
              help="Oracle path-size bound, or the simple-path budget of the exact AND Over-Match engine")
@click.option("--max-and-arity", type=click.IntRange(min=1), default=None,
              help=f"AND arity cap (default ATC_MAX_AND_ARITY or {CheckerConfig.DEFAULT_MAX_AND_ARITY})")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--witness", is_flag=True, help="Print evidence paths in text output")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write the report here")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker threads for global checks")
@click.option("--timings", is_flag=True, help="Include wall time (output is no longer byte-stable)")
@click.pass_context
def check(ctx, system_path, tree_path, prop, scope, node, engine, budget, max_and_arity, fmt, witness, out, jobs,
          timings):
    """Check a property on one node or on every refined node"""
    system_data = _read(ctx, system_path)
    tree_data = _read(ctx, tree_path)
    try:
        system, tree = checker_service.load(system_data, tree_data)
        reports = checker_service.check(
            system, tree, prop,
            scope=scope, node=node, engine=engine, budget=budget,
            max_and_arity=max_and_arity, jobs=jobs,
        )
    except AttackTreeError as e:
        _abort(ctx, e)

    if fmt == "json":
        text = checker_service.render_json(reports, timings)
    else:
        text = checker_service.render_text(reports, witness, timings)
    _emit(text, out)
    ctx.exit(EXIT_HOLDS if all(r.holds for r in reports) else EXIT_FAILS)


# ============================================================
# EXPORT / GENERATE / INFER
# ============================================================

@cli.command("export-dot")
@click.option("--system", "system_path", type=InputFile, default=None, help="System JSON file")
@click.option("--tree", "tree_path", type=InputFile, default=None, help="Tree JSON file")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
def export_dot_command(ctx, system_path, tree_path, out):
    """Graphviz DOT for a system, a tree, or both"""
    if system_path is None and tree_path is None:
        raise click.UsageError("pass --system, --tree or both")
    system_data = _read(ctx, system_path) if system_path else None
    tree_data = _read(ctx, tree_path) if tree_path else None
    try:
        text = checker_service.export_dot(system_data, tree_data)
    except AttackTreeError as e:
        _abort(ctx, e)
    _emit(text, out)


@cli.command("gen-sat")
@click.argument("dimacs", type=InputFile)
@click.option("--out-dir", type=click.Path(file_okay=False), required=True,
              help="Directory for system.json and tree.json")
@click.pass_context
def gen_sat(ctx, dimacs, out_dir):
    """Reduce a DIMACS CNF to a system and an AND tree"""
    try:
        text = _read(ctx, dimacs).decode("utf-8")
    except UnicodeDecodeError as e:
        _abort(ctx, e)
    try:
        result = checker_service.reduce_sat(text)
    except AttackTreeError as e:
        _abort(ctx, e)

    os.makedirs(out_dir, exist_ok=True)
    system_file = os.path.join(out_dir, "system.json")
    tree_file = os.path.join(out_dir, "tree.json")
    _emit(serialize_system(result["system"]), system_file)
    _emit(serialize_tree(result["tree"]), tree_file)
    click.echo(f"{system_file}\n{tree_file}")
    if result["satisfiable"] is not None:
        click.echo(f"satisfiable: {str(result['satisfiable']).lower()}")


@cli.command("infer-pre")
@click.option("--system", "system_path", type=InputFile, required=True, help="System JSON file")
@click.option("--post", required=True, help="Proposition name or expression")
@click.pass_context
def infer_pre(ctx, system_path, post):
    """States from which the postcondition can be reached"""
    try:
        states = checker_service.infer_precondition(_read(ctx, system_path), post)
    except AttackTreeError as e:
        _abort(ctx, e)
    for state in states:
        click.echo(state)


def main():
    cli(prog_name="atc")
