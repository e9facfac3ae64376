"""
Attack Tree Checker - Graphviz DOT Export
Deterministic output: states and edges in index order, tree nodes in preorder
"""

from typing import Optional

from graphviz import Digraph, escape, nohtml

from models.goals import Operator
from models.system import TransitionSystem
from models.tree import AttackTree, NodePath

# DOT line break inside a label; everything else in a label is escaped text
NEWLINE = "\\n"


def state_node_id(index: int) -> str:
    return f"s_{index}"


def tree_node_id(path: NodePath) -> str:
    return "n_" + str(path).replace(".", "_")


def _add_system(graph: Digraph, system: TransitionSystem) -> None:
    for index, sid in enumerate(system.state_ids):
        if not system.is_active(index):
            continue
        label = escape(sid)
        props = system.labels_of(index)
        if props:
            label = nohtml(label + NEWLINE + "{" + escape(", ".join(props)) + "}")
        graph.node(state_node_id(index), label, shape="ellipse")
    for src, dst in system.transition_indices():
        graph.edge(state_node_id(src), state_node_id(dst))


def _add_tree(graph: Digraph, tree: AttackTree) -> None:
    order_edges = []
    for path, node in tree.walk():
        label = escape(str(node.goal))
        if node.is_leaf:
            graph.node(tree_node_id(path), label, shape="box")
            continue
        graph.node(tree_node_id(path), nohtml(label + NEWLINE + node.op.value), shape="box", style="rounded")
        children = [path.child(i) for i in range(len(node.children))]
        for child in children:
            graph.edge(tree_node_id(path), tree_node_id(child))
        if node.op is Operator.SAND:
            # sequence order of SAND children
            order_edges.extend(zip(children, children[1:]))
    for left, right in order_edges:
        graph.edge(tree_node_id(left), tree_node_id(right), style="dashed", constraint="false")


def export_dot(system: Optional[TransitionSystem] = None, tree: Optional[AttackTree] = None) -> str:
    """DOT text for a system, a tree, or both as two clusters of one graph"""
    if system is None and tree is None:
        raise ValueError("Nothing to export: pass a system, a tree or both")

    graph = Digraph()
    if system is not None and tree is not None:
        with graph.subgraph(name="cluster_system") as cluster:
            cluster.attr(label="transition system")
            _add_system(cluster, system)
        with graph.subgraph(name="cluster_tree") as cluster:
            cluster.attr(label="attack tree")
            _add_tree(cluster, tree)
    elif system is not None:
        _add_system(graph, system)
    else:
        _add_tree(graph, tree)
    return graph.source
