from collections import deque
from typing import Dict, List, Optional

from trees.trees_types import (
    Ordering,
    OrderedTree,
    SuccessionLines,
    TreeBuilder,
    TreeError,
    VertexFlag,
)


def _chain(t: OrderedTree, v: int) -> List[int]:
    """v followed by its stored ancestors."""
    return [v, *t.ancestors(v)]


def rls_compare(t: OrderedTree, u: int, v: int) -> Ordering:
    """Royal Line of Succession order: ancestors are larger, elder branches are larger.

    Returns LESS when u precedes v, i.e. v is an ancestor of u or v's branch at the
    least common ancestor is the elder one.
    """
    if u == v:
        return Ordering.EQUAL
    chain_u = _chain(t, u)
    chain_v = _chain(t, v)
    if v in chain_u:
        return Ordering.LESS
    if u in chain_v:
        return Ordering.GREATER

    on_v = {w: i for i, w in enumerate(chain_v)}
    for i, w in enumerate(chain_u):
        if w in on_v:
            if not t.children_known(w):
                return Ordering.INCOMPARABLE
            branch_u = chain_u[i - 1]
            branch_v = chain_v[on_v[w] - 1]
            siblings = t.children[w]
            # eldest first: a smaller position is the larger vertex
            if siblings.index(branch_v) < siblings.index(branch_u):
                return Ordering.LESS
            return Ordering.GREATER
    return Ordering.INCOMPARABLE


def rls_sort(t: OrderedTree) -> List[int]:
    """All stored vertices in ascending RLS order (post-order, youngest child first)."""
    out: List[int] = []
    stack: List[tuple[int, bool]] = [(t.top, False)]
    while stack:
        v, expanded = stack.pop()
        if expanded:
            out.append(v)
            continue
        stack.append((v, True))
        # push eldest first so the youngest is popped first
        for c in t.children[v]:
            stack.append((c, False))
    return out


def b_map(t: OrderedTree, u: int) -> Optional[int]:
    """Immediate predecessor max{v : v < u}; None when u is minimal or the answer is censored."""
    if t.children[u]:
        if not t.children_known(u):
            return None
        return t.children[u][0]
    if not t.children_known(u):
        return None

    w = u
    while True:
        p = t.parent[w]
        if p is None or not t.children_known(p):
            return None
        siblings = t.children[p]
        pos = siblings.index(w)
        if pos + 1 < len(siblings):
            return siblings[pos + 1]
        w = p


def a_map(t: OrderedTree, u: int) -> Optional[int]:
    """Immediate successor min{v : v > u}; None when u is maximal or the answer is censored."""
    p = t.parent[u]
    if p is None or not t.children_known(p):
        return None
    siblings = t.children[p]
    pos = siblings.index(u)
    if pos == 0:
        return p

    w = siblings[pos - 1]
    while True:
        if not t.children_known(w):
            return None
        if not t.children[w]:
            return w
        w = t.children[w][-1]


def succession_window(t: OrderedTree, o: int, n_back: int, n_fwd: int) -> List[int]:
    """Iterate b up to n_back times and a up to n_fwd times from o, ascending RLS order.

    Iteration stops at the first undefined step instead of repeating a vertex.
    """
    back: List[int] = []
    v: Optional[int] = o
    for _ in range(n_back):
        v = b_map(t, v) if v is not None else None
        if v is None:
            break
        back.append(v)

    fwd: List[int] = []
    v = o
    for _ in range(n_fwd):
        v = a_map(t, v) if v is not None else None
        if v is None:
            break
        fwd.append(v)

    return list(reversed(back)) + [o] + fwd


def count_succession_lines(t: OrderedTree) -> SuccessionLines:
    """Two when a spine vertex has a child younger than its spine child, else One.

    The check needs every spine vertex above the bottom to be interior; otherwise the
    answer is Undetermined unless a younger child was already seen.
    """
    if not t.spine:
        raise TreeError("count_succession_lines needs a spine annotation")

    undetermined = False
    for upper, lower in zip(t.spine, t.spine[1:]):
        if t.parent[lower] != upper:
            raise TreeError(f"Spine vertices {upper} -> {lower} are not parent and child")
        siblings = t.children[upper]
        if siblings.index(lower) < len(siblings) - 1:
            return SuccessionLines.TWO
        if not t.children_known(upper):
            undetermined = True

    if undetermined or len(t.spine) < 2:
        return SuccessionLines.UNDETERMINED
    return SuccessionLines.ONE


def foil_partition(t: OrderedTree) -> List[List[int]]:
    """Vertices grouped by depth below the stored top; non-interior vertices are left out.

    On a finite stored tree, u ~ v (F^n(u) = F^n(v) for some n >= 1) holds exactly when
    both sit at the same depth, since every such chain ends at the top.
    """
    classes: Dict[int, List[int]] = {}
    for v in t.vertices():
        if t.is_interior(v):
            classes.setdefault(t.depth(v), []).append(v)
    return [sorted(classes[d]) for d in sorted(classes)]


def distances_from(t: OrderedTree, v: int, max_distance: Optional[int] = None) -> Dict[int, int]:
    """Graph distances from v, ignoring edge direction."""
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if max_distance is not None and dist[u] >= max_distance:
            continue
        for w in t.neighbours(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def restrict_to_ball(t: OrderedTree, radius: int) -> OrderedTree:
    """Re-truncate t to the ball of `radius` around its root.

    Vertices at distance `radius` become RADIUS_BOUNDARY unless already CENSORED.
    """
    dist = distances_from(t, t.root, radius)
    builder = TreeBuilder()
    new_id: Dict[int, int] = {}
    for v in sorted(dist):
        flag = t.flags[v]
        if dist[v] == radius and t.children_known(v):
            flag = VertexFlag.RADIUS_BOUNDARY
        new_id[v] = builder.add_vertex(label=t.labels[v], flag=flag)
    # pre-order of t keeps sibling order when appending youngest-last
    for v in sorted(dist):
        p = t.parent[v]
        if p is not None and p in new_id:
            builder.attach(new_id[v], new_id[p])
    builder.root = new_id[t.root]
    builder.spine = [new_id[v] for v in t.spine if v in new_id]
    return builder.build()


def with_root(t: OrderedTree, v: int) -> OrderedTree:
    """Move the distinguished vertex; parent links stay as they are."""
    return t.with_root(v)
