"""
The tested family of transport functions for mass-transport checks.

Every weight looks only at u, v and the stored structure around the path joining
them, so it is a function of the doubly rooted ordered tree near (u, v).
"""

import zlib
from functools import partial
from typing import List, Optional

import numpy as np

from stats.stats_types import TransportFunction
from trees import OrderedTree, ball_key

FIXED_TRANSPORTS = ("identity", "parent", "child", "sibling", "eldest_child", "grandparent")
RANDOM_RADIUS = 2


def relative_path(t: OrderedTree, u: int, v: int, limit: int) -> Optional[str]:
    """'^' per step up from u to the common ancestor, then '.<rank>' per step down to v.

    None when u and v are more than `limit` steps apart or not connected in t.
    """
    chain_u = [u, *t.ancestors(u)][: limit + 1]
    chain_v = [v, *t.ancestors(v)][: limit + 1]
    on_v = {w: j for j, w in enumerate(chain_v)}
    for ups, w in enumerate(chain_u):
        if w in on_v:
            downs = list(reversed(chain_v[: on_v[w]]))
            if ups + len(downs) > limit:
                return None
            return "^" * ups + "".join(f".{t.child_rank(x)}" for x in downs)
    return None


def identity_weight(t: OrderedTree, u: int, v: int) -> float:
    return 1.0 if u == v else 0.0


def parent_weight(t: OrderedTree, u: int, v: int) -> float:
    return 1.0 if t.parent[u] == v else 0.0


def child_weight(t: OrderedTree, u: int, v: int) -> float:
    return 1.0 if t.parent[v] == u else 0.0


def sibling_weight(t: OrderedTree, u: int, v: int) -> float:
    p = t.parent[u]
    return 1.0 if u != v and p is not None and t.parent[v] == p else 0.0


def eldest_child_weight(t: OrderedTree, u: int, v: int) -> float:
    kids = t.children[u]
    return 1.0 if kids and kids[0] == v else 0.0


def grandparent_weight(t: OrderedTree, u: int, v: int) -> float:
    p = t.parent[u]
    return 1.0 if p is not None and t.parent[p] == v else 0.0


def random_local_weight(seed: int, t: OrderedTree, u: int, v: int) -> float:
    """Pseudo-random weight in [0, 1) of the pair's local shape, fixed by `seed`."""
    path = relative_path(t, u, v, RANDOM_RADIUS)
    if path is None:
        return 0.0
    key = f"{ball_key(t, u, 1)}|{path}|{ball_key(t, v, 1)}"
    return float(np.random.default_rng([seed, zlib.crc32(key.encode())]).random())


_FIXED = {
    "identity": (0, identity_weight),
    "parent": (1, parent_weight),
    "child": (1, child_weight),
    "sibling": (2, sibling_weight),
    "eldest_child": (1, eldest_child_weight),
    "grandparent": (2, grandparent_weight),
}


def transport_by_name(name: str, seed: int = 0) -> TransportFunction:
    if name in _FIXED:
        radius, weight = _FIXED[name]
        return TransportFunction(name=name, radius=radius, weight=weight)
    if name.startswith("random_"):
        index = int(name.removeprefix("random_"))
        return TransportFunction(
            name=name,
            radius=RANDOM_RADIUS,
            weight=partial(random_local_weight, seed * 1_000_003 + index),
        )
    raise KeyError(f"Unknown transport function '{name}'")


def transport_family(n: int, seed: int = 0) -> List[TransportFunction]:
    """The first n of: the fixed indicators, then random_0, random_1, ..."""
    names = list(FIXED_TRANSPORTS[:n])
    names += [f"random_{j}" for j in range(max(0, n - len(FIXED_TRANSPORTS)))]
    return [transport_by_name(name, seed) for name in names]
