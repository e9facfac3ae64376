"""
Attack Tree Checker - Transition Systems and the Path Algebra
States are interned to dense indices; state sets are int bitmasks keyed by index.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from models.errors import PathError, SystemValidationError, UnknownPropositionError

logger = logging.getLogger(__name__)

# A set of states, bit i set <=> state with index i is a member
StateSet = int


# ============================================================
# BITSET HELPERS
# ============================================================

def iter_bits(mask: StateSet) -> Iterator[int]:
    """Yield the indices of a bitmask in ascending order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: StateSet) -> int:
    """Smallest index in a non-empty bitmask"""
    return (mask & -mask).bit_length() - 1


def popcount(mask: StateSet) -> int:
    return bin(mask).count("1")


def bits_of(indices: Iterable[int]) -> StateSet:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


# ============================================================
# TRANSITION SYSTEM
# ============================================================

class TransitionSystem:
    """Finite transition system (states, transition relation, labeling).

    Immutable after construction. restrict() keeps the index space of its
    source and only shrinks the active state set, so bitmasks computed on
    either system stay comparable.
    """

    __slots__ = ("_ids", "_index", "_succ", "_pred", "_labels", "_active", "_warnings")

    def __init__(
        self,
        state_ids: Sequence[str],
        successors: Sequence[StateSet],
        labeling: Mapping[str, StateSet],
        active: Optional[StateSet] = None,
        warnings: Sequence[str] = (),
    ):
        self._ids: Tuple[str, ...] = tuple(state_ids)
        self._index: Dict[str, int] = {sid: i for i, sid in enumerate(self._ids)}
        self._succ: Tuple[StateSet, ...] = tuple(successors)
        pred = [0] * len(self._ids)
        for src, targets in enumerate(self._succ):
            for dst in iter_bits(targets):
                pred[dst] |= 1 << src
        self._pred: Tuple[StateSet, ...] = tuple(pred)
        self._labels: Dict[str, StateSet] = dict(labeling)
        full = (1 << len(self._ids)) - 1
        self._active: StateSet = full if active is None else active & full
        self._warnings: Tuple[str, ...] = tuple(warnings)

    # --- states -------------------------------------------------------

    @property
    def all_states(self) -> StateSet:
        """Bitmask of the (active) states"""
        return self._active

    @property
    def states(self) -> List[str]:
        return [self._ids[i] for i in iter_bits(self._active)]

    @property
    def state_ids(self) -> Tuple[str, ...]:
        """Every interned id, including states removed by restrict()"""
        return self._ids

    @property
    def num_states(self) -> int:
        return popcount(self._active)

    @property
    def transitions(self) -> List[Tuple[str, str]]:
        return [(self._ids[s], self._ids[t]) for s, t in self.transition_indices()]

    @property
    def size(self) -> int:
        """|states| + |transitions|"""
        return self.num_states + len(self.transition_indices())

    @property
    def warnings(self) -> Tuple[str, ...]:
        return self._warnings

    def transition_indices(self) -> List[Tuple[int, int]]:
        return [
            (s, t)
            for s in iter_bits(self._active)
            for t in iter_bits(self._succ[s] & self._active)
        ]

    def is_active(self, index: int) -> bool:
        return bool((self._active >> index) & 1)

    def index_of(self, state_id: str) -> int:
        try:
            index = self._index[state_id]
        except KeyError:
            raise SystemValidationError(f"Unknown state: {state_id!r}") from None
        if not self.is_active(index):
            raise SystemValidationError(f"State {state_id!r} is not part of this system")
        return index

    def state_id(self, index: int) -> str:
        return self._ids[index]

    def mask(self, state_ids: Iterable[str]) -> StateSet:
        """Bitmask of a collection of state ids"""
        return bits_of(self.index_of(sid) for sid in state_ids)

    def ids(self, mask: StateSet) -> List[str]:
        """State ids of a bitmask, in index order"""
        return [self._ids[i] for i in iter_bits(mask)]

    def successors(self, index: int) -> StateSet:
        return self._succ[index] & self._active

    def predecessors(self, index: int) -> StateSet:
        return self._pred[index] & self._active

    def has_transition(self, src: int, dst: int) -> bool:
        return self.is_active(src) and self.is_active(dst) and bool((self._succ[src] >> dst) & 1)

    # --- labeling -----------------------------------------------------

    @property
    def propositions(self) -> List[str]:
        return sorted(self._labels)

    def label(self, name: str) -> StateSet:
        """λ(name) as a bitmask"""
        try:
            return self._labels[name] & self._active
        except KeyError:
            raise UnknownPropositionError(name) from None

    def labels_of(self, index: int) -> List[str]:
        return sorted(name for name, mask in self._labels.items() if (mask >> index) & 1)

    def __repr__(self):
        return f"<TransitionSystem states={self.num_states} transitions={len(self.transition_indices())}>"


def build_system(
    states: Sequence[str],
    transitions: Iterable[Tuple[str, str]],
    labeling: Optional[Mapping[str, Iterable[str]]] = None,
) -> TransitionSystem:
    """Validate and intern a transition system.

    States without successors are reported with a warning, not rejected.
    """
    index: Dict[str, int] = {}
    for sid in states:
        if sid in index:
            raise SystemValidationError(f"Duplicate state id: {sid!r}")
        index[sid] = len(index)

    successors = [0] * len(index)
    for src, dst in transitions:
        for endpoint in (src, dst):
            if endpoint not in index:
                raise SystemValidationError(
                    f"Transition ({src!r}, {dst!r}) references undeclared state {endpoint!r}"
                )
        successors[index[src]] |= 1 << index[dst]

    labels: Dict[str, StateSet] = {}
    for name, members in (labeling or {}).items():
        mask = 0
        for sid in members:
            if sid not in index:
                raise SystemValidationError(
                    f"Proposition {name!r} labels undeclared state {sid!r}"
                )
            mask |= 1 << index[sid]
        labels[name] = mask

    ids = list(index)
    sinks = [ids[i] for i, succ in enumerate(successors) if not succ]
    warnings = []
    if sinks:
        message = f"Transition relation is not left-total; states without successors: {', '.join(sinks)}"
        logger.warning(f"⚠️ {message}")
        warnings.append(message)

    return TransitionSystem(ids, successors, labels, warnings=warnings)


# ============================================================
# STATE-SET OPERATIONS
# ============================================================

def post_set(system: TransitionSystem, states: StateSet) -> StateSet:
    """Direct successors of a state set"""
    result = 0
    for s in iter_bits(states & system.all_states):
        result |= system.successors(s)
    return result


def pre_set(system: TransitionSystem, states: StateSet) -> StateSet:
    """Direct predecessors of a state set"""
    result = 0
    for s in iter_bits(states & system.all_states):
        result |= system.predecessors(s)
    return result


def reach(system: TransitionSystem, states: StateSet, stats=None) -> StateSet:
    """Reflexive-transitive successors of a state set"""
    seen = states & system.all_states
    frontier = seen
    while frontier:
        if stats is not None:
            stats.states_explored += popcount(frontier)
        frontier = post_set(system, frontier) & ~seen
        seen |= frontier
    return seen


def coreach(system: TransitionSystem, states: StateSet, stats=None) -> StateSet:
    """Reflexive-transitive predecessors of a state set"""
    seen = states & system.all_states
    frontier = seen
    while frontier:
        if stats is not None:
            stats.states_explored += popcount(frontier)
        frontier = pre_set(system, frontier) & ~seen
        seen |= frontier
    return seen


def restrict(system: TransitionSystem, forbidden: StateSet) -> TransitionSystem:
    """Drop the forbidden states together with every transition touching them"""
    # pylint: disable=protected-access
    return TransitionSystem(
        system._ids, system._succ, system._labels, system.all_states & ~forbidden
    )


# ============================================================
# PATHS
# ============================================================

@dataclass(frozen=True)
class Anchoring:
    """Interval [k, l] locating a factor inside a host path"""

    k: int
    l: int

    def __post_init__(self):
        if self.k < 0 or self.l < self.k:
            raise PathError(f"Invalid anchoring [{self.k}, {self.l}]")

    @property
    def size(self) -> int:
        return self.l - self.k


class Path:
    """Non-empty state sequence following the transitions of one system"""

    __slots__ = ("system", "states")

    def __init__(self, system: TransitionSystem, states: Sequence[int], validate: bool = True):
        states = tuple(states)
        if validate:
            if not states:
                raise PathError("A path contains at least one state")
            for s in states:
                if not (0 <= s < len(system.state_ids)) or not system.is_active(s):
                    raise PathError(f"State index {s} is not part of the system")
            for a, b in zip(states, states[1:]):
                if not system.has_transition(a, b):
                    raise PathError(
                        f"No transition {system.state_id(a)!r} -> {system.state_id(b)!r}"
                    )
        self.system = system
        self.states = states

    @classmethod
    def from_ids(cls, system: TransitionSystem, state_ids: Sequence[str]) -> "Path":
        return cls(system, [system.index_of(sid) for sid in state_ids])

    @property
    def size(self) -> int:
        """Number of transitions"""
        return len(self.states) - 1

    @property
    def first(self) -> int:
        return self.states[0]

    @property
    def last(self) -> int:
        return self.states[-1]

    def __getitem__(self, position: int) -> int:
        return self.states[position]

    def state_ids(self) -> List[str]:
        return [self.system.state_id(s) for s in self.states]

    def is_elementary(self) -> bool:
        return len(set(self.states)) == len(self.states)

    def to_dict(self) -> List[str]:
        return self.state_ids()

    def __eq__(self, other):
        if not isinstance(other, Path):
            return NotImplemented
        return self.system is other.system and self.states == other.states

    def __hash__(self):
        return hash(self.states)

    def __str__(self):
        return " -> ".join(self.state_ids())

    def __repr__(self):
        return f"<Path {self}>"


def concat(paths: Sequence[Path]) -> Path:
    """Concatenation: each path starts where the previous one ends"""
    if not paths:
        raise PathError("Cannot concatenate an empty sequence of paths")
    system = paths[0].system
    states = list(paths[0].states)
    for path in paths[1:]:
        if path.system is not system:
            raise PathError("Cannot concatenate paths of different systems")
        if path.first != states[-1]:
            raise PathError(
                f"Endpoint mismatch: {system.state_id(states[-1])!r} then {system.state_id(path.first)!r}"
            )
        states.extend(path.states[1:])
    return Path(system, states, validate=False)


def factor(path: Path, anchoring: Anchoring) -> Path:
    """Sub-path π(k)…π(l)"""
    if anchoring.l > path.size:
        raise PathError(f"Anchoring [{anchoring.k}, {anchoring.l}] outside a path of size {path.size}")
    return Path(path.system, path.states[anchoring.k:anchoring.l + 1], validate=False)


def remove_cycles(path: Path) -> Path:
    """Elementary path with the same ends, removing the leftmost-longest cycle first.

    After each cut the kept prefix holds no state that occurs later, so the
    next leftmost cycle starts at the current position and its longest choice
    jumps to the last occurrence of that state.
    """
    last_seen = {s: i for i, s in enumerate(path.states)}
    kept = []
    i = 0
    while i < len(path.states):
        s = path.states[i]
        kept.append(s)
        i = last_seen[s] + 1
    return Path(path.system, kept, validate=False)


def is_parallel_decomposition(path: Path, anchorings: Sequence[Anchoring]) -> bool:
    """True iff every step [j, j+1] of the path lies inside some anchoring"""
    n = path.size
    for a in anchorings:
        if a.l > n:
            raise PathError(f"Anchoring [{a.k}, {a.l}] outside a path of size {n}")
    if n == 0:
        return True
    # difference array over steps
    delta = [0] * (n + 1)
    for a in anchorings:
        delta[a.k] += 1
        delta[a.l] -= 1
    depth = 0
    for j in range(n):
        depth += delta[j]
        if depth <= 0:
            return False
    return True


# ============================================================
# SHORTEST PATHS
# ============================================================

def shortest_path(
    system: TransitionSystem,
    sources: StateSet,
    targets: StateSet,
    nonempty: bool = False,
    stats=None,
) -> Optional[Path]:
    """Breadth-first shortest path from a source state to a target state.

    With nonempty=True the path has at least one transition, so a source
    that is also a target needs a cycle back to itself. Ties are broken by
    lowest state index.
    """
    sources &= system.all_states
    targets &= system.all_states
    if not sources or not targets:
        return None
    if not nonempty and sources & targets:
        return Path(system, (lowest_bit(sources & targets),), validate=False)

    # parent[v] = (previous state, previous is a source)
    parent: Dict[int, Tuple[Optional[int], bool]] = {}
    queue: deque = deque()
    if nonempty:
        for s in iter_bits(sources):
            for v in iter_bits(system.successors(s)):
                if v not in parent:
                    parent[v] = (s, True)
                    queue.append(v)
    else:
        for s in iter_bits(sources):
            parent[s] = (None, True)
            queue.append(s)

    while queue:
        u = queue.popleft()
        if stats is not None:
            stats.states_explored += 1
        if (targets >> u) & 1:
            states = [u]
            cur = u
            while True:
                prev, from_source = parent[cur]
                if prev is None:
                    break
                states.append(prev)
                if from_source:
                    break
                cur = prev
            states.reverse()
            return Path(system, states, validate=False)
        for v in iter_bits(system.successors(u)):
            if v not in parent:
                parent[v] = (u, False)
                queue.append(v)
    return None
