"""Maximally stable extremal regions on 8-bit rasters.

Bright regions (connected components of upper level sets ``q >= t``) are
found by flooding pixels in decreasing intensity order with a union-find
forest. Every time a component gains pixels a new node of the component
tree is created, so each node is one distinct extremal region.

Stability of a region ``R`` with minimum intensity ``m`` is measured as::

    variation(R) = (|R+| - |R|) / |R|

where ``R+`` is the component of ``q >= m - delta`` containing ``R``. A
region is maximally stable when its variation is no larger than that of
its parent and of each of its children (ties keep both).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ComponentTree:
    shape: tuple
    level: list = field(default_factory=list)  # min intensity of each region
    area: list = field(default_factory=list)
    parent: list = field(default_factory=list)
    children: list = field(default_factory=list)
    pixel_node: np.ndarray | None = None  # smallest region holding each pixel
    _by_node: np.ndarray | None = field(default=None, repr=False)
    _bounds: np.ndarray | None = field(default=None, repr=False)

    def _new_node(self, level, area, kids):
        node = len(self.level)
        self.level.append(level)
        self.area.append(area)
        self.parent.append(-1)
        self.children.append(kids)
        for k in kids:
            self.parent[k] = node
        return node

    def pixels(self, node: int) -> np.ndarray:
        """Flat indices of every pixel in the region, sorted."""
        if self._by_node is None:
            self._by_node = np.argsort(self.pixel_node, kind="stable")
            self._bounds = np.searchsorted(self.pixel_node[self._by_node],
                                           np.arange(len(self.level) + 1))
        parts = []
        stack = [node]
        while stack:
            n = stack.pop()
            parts.append(self._by_node[self._bounds[n]:self._bounds[n + 1]])
            stack.extend(self.children[n])
        return np.sort(np.concatenate(parts))


def component_tree(q: np.ndarray) -> ComponentTree:
    """Component tree of the upper level sets of ``q`` (4-connectivity)."""
    q = np.asarray(q)
    if q.ndim != 2:
        raise ValueError("expected a 2-D raster")
    h, w = q.shape
    order = np.argsort(-q.ravel().astype(np.int64), kind="stable").tolist()
    flat = q.ravel().tolist()

    tree = ComponentTree(shape=(h, w))
    # plain lists: scalar access on them is far cheaper than on ndarrays
    uf_parent = [-1] * (h * w)  # -1: not yet flooded
    size = [0] * (h * w)
    node_of = [-1] * (h * w)
    pixel_node = [0] * (h * w)
    kids: dict[int, list] = {}

    def find(p):
        root = p
        while uf_parent[root] != root:
            root = uf_parent[root]
        while uf_parent[p] != root:
            uf_parent[p], p = root, uf_parent[p]
        return root

    start = 0
    n = len(order)
    while start < n:
        lvl = flat[order[start]]
        stop = start
        while stop < n and flat[order[stop]] == lvl:
            stop += 1
        batch = order[start:stop]
        kids.clear()
        for p in batch:
            uf_parent[p] = p
            size[p] = 1
            kids[p] = []
            y, x = divmod(p, w)
            for nb, ok in ((p - 1, x > 0), (p + 1, x < w - 1), (p - w, y > 0), (p + w, y < h - 1)):
                if not ok or uf_parent[nb] < 0:
                    continue
                ra, rb = find(p), find(nb)
                if ra == rb:
                    continue
                if rb not in kids:
                    kids[rb] = [node_of[rb]] if node_of[rb] >= 0 else []
                if size[ra] < size[rb] or (size[ra] == size[rb] and rb < ra):
                    ra, rb = rb, ra
                uf_parent[rb] = ra
                size[ra] += size[rb]
                kids[ra] = kids[ra] + kids.pop(rb)
        for r in sorted({find(p) for p in batch}):
            node_of[r] = tree._new_node(lvl, size[r], kids[r])
        for p in batch:
            pixel_node[p] = node_of[find(p)]
        start = stop

    tree.pixel_node = np.array(pixel_node, dtype=np.int64)
    return tree


def variations(tree: ComponentTree, delta: int) -> np.ndarray:
    level = tree.level
    out = np.empty(len(level))
    for node in range(len(level)):
        up = node
        floor = level[node] - delta
        while tree.parent[up] >= 0 and level[tree.parent[up]] >= floor:
            up = tree.parent[up]
        out[node] = (tree.area[up] - tree.area[node]) / tree.area[node]
    return out


def maximally_stable(tree: ComponentTree, var: np.ndarray) -> list:
    stable = []
    for node in range(len(tree.level)):
        p = tree.parent[node]
        if p >= 0 and var[node] > var[p]:
            continue
        if any(var[node] > var[c] for c in tree.children[node]):
            continue
        stable.append(node)
    return stable


def detect_bright_regions(q: np.ndarray, delta: int = 5, max_variation: float = 0.25,
                          min_area: int = 1, max_area: int | None = None):
    """Maximally stable bright regions of an 8-bit raster.

    Returns ``(tree, nodes)`` with nodes in creation order.
    """
    tree = component_tree(q)
    var = variations(tree, delta)
    max_area = q.size if max_area is None else max_area
    nodes = [n for n in maximally_stable(tree, var)
             if var[n] <= max_variation and min_area <= tree.area[n] <= max_area]
    return tree, nodes
