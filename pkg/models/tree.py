"""
Attack Tree Checker - Attack Trees and Node Addressing
"""

from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

from models.errors import TreeStructureError
from models.goals import Goal, GoalExpression, Operator


@dataclass(frozen=True)
class NodePath:
    """Child indices (0-based) from the root; the empty path is the root"""

    indices: Tuple[int, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "NodePath":
        text = (text or "").strip()
        if text in ("", "root"):
            return cls(())
        try:
            indices = tuple(int(part) for part in text.split("."))
        except ValueError:
            raise TreeStructureError(
                f"Bad node selector {text!r}; use 'root' or dot-separated child indices"
            ) from None
        if any(i < 0 for i in indices):
            raise TreeStructureError(f"Bad node selector {text!r}; indices are non-negative")
        return cls(indices)

    def child(self, index: int) -> "NodePath":
        return NodePath(self.indices + (index,))

    def __str__(self):
        return "root" if not self.indices else ".".join(str(i) for i in self.indices)


ROOT = NodePath()


@dataclass(frozen=True)
class AttackTree:
    """A node goal, optionally refined by OP over child trees"""

    goal: Goal
    op: Optional[Operator] = None
    children: Tuple["AttackTree", ...] = field(default_factory=tuple)

    @classmethod
    def leaf(cls, pre: str, post: str) -> "AttackTree":
        return cls(Goal(pre, post))

    @classmethod
    def node(cls, pre: str, post: str, op, children) -> "AttackTree":
        return cls(Goal(pre, post), Operator(op), tuple(children))

    @property
    def is_leaf(self) -> bool:
        return self.op is None

    @property
    def size(self) -> int:
        """Number of nodes"""
        return 1 + sum(child.size for child in self.children)

    def walk(self, path: NodePath = NodePath()) -> Iterator[Tuple[NodePath, "AttackTree"]]:
        """Preorder traversal"""
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk(path.child(i))

    def subtree(self, path: NodePath) -> "AttackTree":
        node = self
        for depth, i in enumerate(path.indices):
            if not 0 <= i < len(node.children):
                prefix = NodePath(path.indices[:depth])
                raise TreeStructureError(f"Node {path} does not exist (node {prefix} has {len(node.children)} children)")
            node = node.children[i]
        return node


def validate_tree(tree: AttackTree) -> List[str]:
    """Collect structural errors; an empty list means the tree is well formed"""
    errors = []
    for path, node in tree.walk():
        if node.op is None and node.children:
            errors.append(f"node {path}: children given without an operator")
        elif node.op is not None and len(node.children) < 2:
            errors.append(
                f"node {path}: {node.op.value} refinement has arity {len(node.children)}; at least 2 required"
            )
    return errors


def expression_at(tree: AttackTree, path: NodePath) -> Tuple[Goal, Optional[GoalExpression]]:
    """Node goal plus OP over the children's main goals (None for a leaf)"""
    node = tree.subtree(path)
    if node.is_leaf:
        return node.goal, None
    return node.goal, GoalExpression.composed(node.op, [c.goal for c in node.children])


def composed_nodes(tree: AttackTree) -> List[NodePath]:
    """Preorder list of the refined (non-leaf) nodes"""
    return [path for path, node in tree.walk() if not node.is_leaf]
