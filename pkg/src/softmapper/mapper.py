"""Turn a binary cover assignment into a Mapper graph (clustered nerve)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clustering import Clusterer, cluster
from .data import PointCloud


@dataclass(frozen=True)
class MapperNode:
    id: int
    cover_index: int
    members: tuple[int, ...]  # sorted point indices, nonempty

    def __post_init__(self):
        if not self.members:
            raise ValueError("node members must be nonempty")


@dataclass(frozen=True)
class MapperGraph:
    """Dimension <= 1 nerve: nodes are clusters, edges mark shared points.

    Edges are unordered id pairs (u, v) with u < v; each weight is the size
    of the member intersection (always >= 1).
    """

    nodes: tuple[MapperNode, ...]
    edges: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def map_comp(cloud: PointCloud, e: np.ndarray, clusterer: Clusterer) -> MapperGraph:
    """Cluster each cover element's point set and take the nerve.

    Column j of e selects the points assigned to cover element j; each
    cluster becomes a node tagged with j. Node ids run in (cover_index,
    cluster) order. Every node pair sharing a point gets an edge, whatever
    their cover indices.
    """
    e = np.asarray(e)
    if e.ndim != 2 or e.shape[0] != cloud.n:
        raise ValueError(f"assignment matrix must have {cloud.n} rows, got {e.shape}")
    nodes = []
    for j in range(e.shape[1]):
        support = np.nonzero(e[:, j])[0]
        if support.size == 0:
            continue
        for part in cluster(clusterer, cloud, support):
            nodes.append(MapperNode(len(nodes), j + 1, tuple(int(i) for i in part)))
    edges: dict[tuple[int, int], int] = {}
    member_sets = [set(nd.members) for nd in nodes]
    for u in range(len(nodes)):
        for v in range(u + 1, len(nodes)):
            w = len(member_sets[u] & member_sets[v])
            if w:
                edges[(u, v)] = w
    return MapperGraph(tuple(nodes), edges)


def connected_components(graph: MapperGraph) -> dict[int, int]:
    """Map each node id to its component representative (smallest id)."""
    parent = {nd.id: nd.id for nd in graph.nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in graph.edges:
        ra, rb = find(u), find(v)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return {nd.id: find(nd.id) for nd in graph.nodes}
