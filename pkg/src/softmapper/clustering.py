"""Clustering of points inside a single cover element."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.spatial.distance import cdist

from .data import PointCloud, hausdorff_to_subsample


@dataclass(frozen=True)
class KMeansClusterer:
    k: int
    max_iter: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.max_iter < 1:
            raise ValueError("k and max_iter must be >= 1")


@dataclass(frozen=True)
class SingleLinkageClusterer:
    threshold: float

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError(f"threshold must be > 0, got {self.threshold}")


Clusterer = KMeansClusterer | SingleLinkageClusterer


def _kmeans_pp_init(pts: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = np.empty((k, pts.shape[1]))
    centers[0] = pts[rng.integers(pts.shape[0])]
    d2 = ((pts - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total == 0:  # all remaining points coincide with a chosen center
            centers[j] = pts[rng.integers(pts.shape[0])]
            continue
        centers[j] = pts[rng.choice(pts.shape[0], p=d2 / total)]
        d2 = np.minimum(d2, ((pts - centers[j]) ** 2).sum(axis=1))
    return centers


def _kmeans_labels(pts: np.ndarray, cfg: KMeansClusterer) -> np.ndarray:
    k = min(cfg.k, pts.shape[0])
    rng = np.random.default_rng(cfg.seed)
    centers = _kmeans_pp_init(pts, k, rng)
    # argmin breaks ties toward the lowest centroid index
    labels = cdist(pts, centers).argmin(axis=1)
    for _ in range(cfg.max_iter):
        for j in range(k):
            mask = labels == j
            if mask.any():
                centers[j] = pts[mask].mean(axis=0)
        new_labels = cdist(pts, centers).argmin(axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels


def _linkage_labels(pts: np.ndarray, threshold: float) -> np.ndarray:
    """Connected components of the graph linking points at distance <= threshold."""
    adj = sparse.csr_matrix(cdist(pts, pts) <= threshold)
    _, labels = sparse.csgraph.connected_components(adj, directed=False)
    return labels


def cluster(clusterer: Clusterer, cloud: PointCloud, member_indices) -> list[np.ndarray]:
    """Partition the given point indices into clusters.

    Returns disjoint sorted index arrays, ordered by smallest member index.
    """
    members = np.asarray(sorted(member_indices), dtype=int)
    if members.size == 0:
        raise ValueError("cannot cluster an empty member set")
    if members.max() >= cloud.n or members.min() < 0:
        raise ValueError("member index out of range")
    pts = cloud.points[members]
    if members.size == 1:
        return [members]
    if isinstance(clusterer, KMeansClusterer):
        labels = _kmeans_labels(pts, clusterer)
    else:
        labels = _linkage_labels(pts, clusterer.threshold)
    out = []
    seen = {}
    for local, lab in enumerate(labels):
        seen.setdefault(lab, []).append(members[local])
    for lab in sorted(seen, key=lambda l: seen[l][0]):
        out.append(np.array(seen[lab], dtype=int))
    return out


def threshold_from_hausdorff(
    cloud: PointCloud, fraction: float, factor: float, seed: int
) -> SingleLinkageClusterer:
    """Single-linkage clusterer whose threshold is a multiple of the
    Hausdorff distance between the cloud and a random subsample."""
    if not factor > 0:
        raise ValueError("factor must be > 0")
    return SingleLinkageClusterer(factor * hausdorff_to_subsample(cloud, fraction, seed))
