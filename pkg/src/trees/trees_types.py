from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple


class TreeError(Exception):
    """Base class for ordered-tree failures."""


class TreeParseError(TreeError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class TreeInvariantError(TreeError):
    """Parent/children links do not describe a single rooted family tree."""


class CensoredBallError(TreeError):
    """A vertex inside the requested ball radius is not fully resolved."""


class VertexFlag(Enum):
    INTERIOR = "interior"
    RADIUS_BOUNDARY = "radius_boundary"
    CENSORED = "censored"
    # children known, parent unknown
    PARENT_CENSORED = "parent_censored"


class Ordering(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


class SuccessionLines(Enum):
    ONE = "one"
    TWO = "two"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class OrderedTree:
    """Immutable ordered family tree with vertices 0..n-1 numbered in pre-order.

    children[v] is eldest first. The stored top is vertex 0; it may still have a parent
    outside the stored tree unless it is flagged INTERIOR. `root` is the distinguished
    vertex, `spine` an optional top-to-bottom list of spine vertices.
    """

    parent: Tuple[Optional[int], ...]
    children: Tuple[Tuple[int, ...], ...]
    flags: Tuple[VertexFlag, ...]
    labels: Tuple[Optional[int], ...]
    root: int = 0
    spine: Tuple[int, ...] = ()
    _label_index: Dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        for v, label in enumerate(self.labels):
            if label is not None:
                self._label_index[label] = v

    @classmethod
    def single_vertex(cls, label: Optional[int] = None) -> "OrderedTree":
        return cls(
            parent=(None,),
            children=((),),
            flags=(VertexFlag.INTERIOR,),
            labels=(label,),
        )

    @property
    def size(self) -> int:
        return len(self.parent)

    @property
    def top(self) -> int:
        return 0

    def vertices(self) -> range:
        return range(self.size)

    def __len__(self) -> int:
        return self.size

    def is_interior(self, v: int) -> bool:
        return self.flags[v] is VertexFlag.INTERIOR

    def children_known(self, v: int) -> bool:
        """The stored children of v are all of its children, in order."""
        return self.flags[v] in (VertexFlag.INTERIOR, VertexFlag.PARENT_CENSORED)

    def is_fully_resolved(self) -> bool:
        return all(flag is VertexFlag.INTERIOR for flag in self.flags)

    def out_degree(self, v: int) -> int:
        """Number of stored children, d_1(v) when v is interior."""
        return len(self.children[v])

    def child_rank(self, v: int) -> Optional[int]:
        """1-based position among siblings, 1 being the eldest."""
        p = self.parent[v]
        if p is None:
            return None
        return self.children[p].index(v) + 1

    def ancestors(self, v: int) -> Iterator[int]:
        p = self.parent[v]
        while p is not None:
            yield p
            p = self.parent[p]

    def depth(self, v: int) -> int:
        return sum(1 for _ in self.ancestors(v))

    def label(self, v: int) -> Optional[int]:
        return self.labels[v]

    def vertex_of_label(self, label: int) -> Optional[int]:
        return self._label_index.get(label)

    def neighbours(self, v: int) -> List[int]:
        p = self.parent[v]
        return ([p] if p is not None else []) + list(self.children[v])

    def subtree(self, v: int) -> List[int]:
        """v and its stored descendants in pre-order."""
        out: List[int] = []
        stack = [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return out

    def with_root(self, v: int) -> "OrderedTree":
        if not 0 <= v < self.size:
            raise TreeError(f"Vertex {v} is not in the tree")
        return replace(self, root=v, _label_index={})

    def has_parent(self, v: int) -> Optional[bool]:
        """True/False when known; None for an unresolved top."""
        if self.parent[v] is not None:
            return True
        return False if self.is_interior(v) else None


class TreeBuilder:
    """Mutable scratch space for assembling an OrderedTree in any discovery order."""

    def __init__(self) -> None:
        self._parent: List[Optional[int]] = []
        self._children: List[List[int]] = []
        self._flags: List[VertexFlag] = []
        self._labels: List[Optional[int]] = []
        self.root: int = 0
        self.spine: List[int] = []
        self.id_map: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._parent)

    def add_vertex(
        self, label: Optional[int] = None, flag: VertexFlag = VertexFlag.INTERIOR
    ) -> int:
        self._parent.append(None)
        self._children.append([])
        self._flags.append(flag)
        self._labels.append(label)
        return len(self._parent) - 1

    def attach(self, child: int, parent: int, position: Optional[int] = None) -> None:
        """Make `child` a child of `parent` at eldest-first `position` (default: youngest)."""
        if self._parent[child] is not None:
            raise TreeInvariantError(f"Vertex {child} already has a parent")
        self._parent[child] = parent
        siblings = self._children[parent]
        if position is None:
            siblings.append(child)
        else:
            siblings.insert(position, child)

    def set_flag(self, v: int, flag: VertexFlag) -> None:
        self._flags[v] = flag

    def flag(self, v: int) -> VertexFlag:
        return self._flags[v]

    def parent_of(self, v: int) -> Optional[int]:
        return self._parent[v]

    def children_of(self, v: int) -> List[int]:
        return self._children[v]

    def build(self) -> OrderedTree:
        """Validate links and renumber vertices in pre-order from the stored top."""
        n = len(self._parent)
        if n == 0:
            raise TreeInvariantError("Cannot build an empty tree")
        tops = [v for v in range(n) if self._parent[v] is None]
        if len(tops) != 1:
            raise TreeInvariantError(f"Expected exactly one parentless vertex, found {len(tops)}")
        for v in range(n):
            for c in self._children[v]:
                if self._parent[c] != v:
                    raise TreeInvariantError(f"Child {c} of {v} does not point back")

        order: List[int] = []
        stack = [tops[0]]
        seen = set()
        while stack:
            v = stack.pop()
            if v in seen:
                raise TreeInvariantError(f"Cycle through vertex {v}")
            seen.add(v)
            order.append(v)
            stack.extend(reversed(self._children[v]))
        if len(order) != n:
            raise TreeInvariantError(f"{n - len(order)} vertices are not connected to the top")

        self.id_map = {old: new for new, old in enumerate(order)}
        m = self.id_map
        return OrderedTree(
            parent=tuple(
                None if self._parent[old] is None else m[self._parent[old]]  # type: ignore[index]
                for old in order
            ),
            children=tuple(tuple(m[c] for c in self._children[old]) for old in order),
            flags=tuple(self._flags[old] for old in order),
            labels=tuple(self._labels[old] for old in order),
            root=m[self.root],
            spine=tuple(m[v] for v in self.spine),
        )
