"""
Breadth-first growth of a random ordered tree around its root, truncated at a radius.

Vertices closer than the radius are expanded: their parent (if the plan gives them one)
and their children are drawn. Vertices at the radius are kept as RADIUS_BOUNDARY leaves
and vertices left over when the node budget runs out are CENSORED.
"""

from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Optional

import numpy as np

from samplers.samplers_types import GrowthPlan, VertexRole
from trees import OrderedTree, TreeBuilder, VertexFlag, distances_from, restrict_to_ball


@dataclass
class _Node:
    role: VertexRole
    spine_index: Optional[int] = None
    parent_open: bool = False
    children_open: bool = True
    known_child: Optional[int] = None
    # bush children already fixed; only the spine child is still to come
    preset_bush: bool = False


class BallGrower:
    def __init__(
        self,
        plan: GrowthPlan,
        rng: np.random.Generator,
        radius: Optional[int],
        node_budget: int,
    ):
        self.plan = plan
        self.rng = rng
        self.radius = radius
        self.node_budget = node_budget
        self.builder = TreeBuilder()
        self.censored = False
        self._nodes: List[_Node] = []
        self._dist: List[int] = []
        self._spine: Dict[int, int] = {}
        self._queue: Deque[int] = deque()
        self._has_presets = False

    def _new(self, node: _Node, dist: int) -> int:
        v = self.builder.add_vertex()
        self._nodes.append(node)
        self._dist.append(dist)
        if node.spine_index is not None:
            self._spine[node.spine_index] = v
        self._queue.append(v)
        return v

    def grow(self) -> OrderedTree:
        """Grow from a fresh root of the plan's root role."""
        spine = self.plan.root_role is VertexRole.SPINE
        root = self._new(
            _Node(
                role=self.plan.root_role,
                spine_index=0 if spine else None,
                parent_open=spine,
            ),
            0,
        )
        self.builder.root = root
        return self._run()

    def grow_around(self, bush: OrderedTree, root: int) -> OrderedTree:
        """Grow an eternal spine through the top of a fixed, fully resolved `bush`.

        The bush top becomes spine vertex 0 and `root` (a bush vertex) the root.
        """
        self._has_presets = True
        dist = distances_from(bush, root)
        ids: Dict[int, int] = {}
        for v in bush.vertices():
            top = v == bush.top
            ids[v] = self._new(
                _Node(
                    role=VertexRole.SPINE if top else VertexRole.ORDINARY,
                    spine_index=0 if top else None,
                    parent_open=top,
                    children_open=top,
                    preset_bush=top,
                ),
                dist[v],
            )
        for v in bush.vertices():
            for c in bush.children[v]:
                self.builder.attach(ids[c], ids[v])
        self.builder.root = ids[root]
        return self._run()

    def _run(self) -> OrderedTree:
        while self._queue:
            v = self._queue.popleft()
            node = self._nodes[v]
            if not (node.parent_open or node.children_open):
                continue
            if self.radius is not None and self._dist[v] >= self.radius:
                self.builder.set_flag(v, VertexFlag.RADIUS_BOUNDARY)
                continue
            if len(self._nodes) >= self.node_budget:
                self.builder.set_flag(v, VertexFlag.CENSORED)
                self.censored = True
                continue
            if node.parent_open:
                self._grow_parent(v, node)
            if node.children_open:
                self._grow_children(v, node)
        return self._finish()

    def _grow_parent(self, v: int, node: _Node) -> None:
        node.parent_open = False
        if self.plan.up_prob < 1.0 and self.rng.random() >= self.plan.up_prob:
            return
        assert node.spine_index is not None
        p = self._new(
            _Node(
                role=VertexRole.SPINE,
                spine_index=node.spine_index + 1,
                parent_open=True,
                known_child=v,
            ),
            self._dist[v] + 1,
        )
        self.builder.attach(v, p)

    def _add_ordinary(self, parent: int, count: int, position: Optional[int] = None) -> None:
        for offset in range(count):
            c = self._new(_Node(role=VertexRole.ORDINARY), self._dist[parent] + 1)
            self.builder.attach(c, parent, None if position is None else position + offset)

    def _new_spine_child(self, v: int, node: _Node) -> None:
        assert node.spine_index is not None
        c = self._new(
            _Node(role=VertexRole.SPINE, spine_index=node.spine_index - 1),
            self._dist[v] + 1,
        )
        self.builder.attach(c, v)

    def _grow_children(self, v: int, node: _Node) -> None:
        node.children_open = False
        if node.role is VertexRole.ORDINARY:
            self._add_ordinary(v, self.plan.base.sample(self.rng))
            return
        if node.preset_bush:
            self._new_spine_child(v, node)
            return
        if node.known_child is None and not self.plan.eternal_down:
            self._add_ordinary(v, self.plan.root_law.sample(self.rng))
            return

        total = self.plan.spine_law.sample(self.rng)
        slot = total - 1 if self.plan.ecs else int(self.rng.integers(total))
        if node.known_child is not None:
            # the known child is already attached, so elder siblings go in front of it
            self._add_ordinary(v, slot, position=0)
        else:
            self._add_ordinary(v, slot)
            self._new_spine_child(v, node)
        self._add_ordinary(v, total - 1 - slot)

    def _finish(self) -> OrderedTree:
        if self.plan.annotate_spine:
            self.builder.spine = [self._spine[k] for k in sorted(self._spine, reverse=True)]
        tree = self.builder.build()
        if self._has_presets and self.radius is not None:
            tree = restrict_to_ball(tree, self.radius)
        return tree
