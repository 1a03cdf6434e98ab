"""Joint clustering of the folded eigenvectors and its evaluation.

The pipeline embeds every (view, vertex) pair as one row of the selected
eigenvector matrix, clusters all Mn rows jointly with k-means, and reads
per-view labels off the row blocks. Because views are clustered jointly,
label identity is meaningful across views without any matching step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, InsufficientSpatialEigenvectors
from .graph import TimeEvolvingGraph
from .laplacian import (DEFAULT_TAU, SpatioTemporalSystem, SpectralEmbedding,
                        assemble_system, eigendecompose)
from .operators import propagate_densities


@dataclass(frozen=True)
class Embedding:
    """Selected eigenvector columns; row i is (view i // n, vertex i % n)."""

    points: np.ndarray = field(repr=False)
    selection: tuple

    @property
    def k(self):
        return self.points.shape[1]


@dataclass(frozen=True)
class ClusteringResult:
    """Per-view labels plus the k-means objective and reproducibility metadata."""

    labels: np.ndarray
    inertia: float
    seed: object
    restarts: int

    @property
    def M(self):
        return self.labels.shape[0]

    @property
    def n(self):
        return self.labels.shape[1]


def select_spatial(embedding: SpectralEmbedding, k) -> Embedding:
    """The first k non-temporal eigenvectors, in descending eigenvalue order.

    The constant first eigenvector is retained by convention; temporal
    eigenvectors (constant within each view) are filtered out.
    """
    keep = [i for i, tag in enumerate(embedding.tags) if tag != "temporal"]
    if len(keep) < k:
        raise InsufficientSpatialEigenvectors(len(keep), k)
    keep = keep[:k]
    return Embedding(points=embedding.vectors[:, keep],
                     selection=tuple(keep))


def _kmeans_pp_init(points, k, rng):
    """k-means++ seeding: D^2-weighted draws."""
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    d2 = np.sum((points - centroids[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            centroids[c] = points[rng.integers(n)]
            continue
        centroids[c] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((points - centroids[c]) ** 2, axis=1))
    return centroids


def _assign(points, centroids):
    d2 = np.sum((points[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
    labels = np.argmin(d2, axis=1)
    inertia = float(d2[np.arange(len(points)), labels].sum())
    return labels, inertia


def _lloyd(points, k, rng, max_iter=300):
    """One k-means run; returns (labels, inertia, per-iteration inertias)."""
    centroids = _kmeans_pp_init(points, k, rng)
    labels, inertia = _assign(points, centroids)
    history = [inertia]
    for _ in range(max_iter):
        repair_d2 = None
        for c in range(k):
            members = points[labels == c]
            if len(members):
                centroids[c] = members.mean(axis=0)
            else:
                # empty-cluster repair: reseed at the point farthest from
                # its assigned centroid
                if repair_d2 is None:
                    repair_d2 = np.sum((points - centroids[labels]) ** 2, axis=1)
                far = int(np.argmax(repair_d2))
                centroids[c] = points[far]
                repair_d2[far] = -np.inf
        new_labels, new_inertia = _assign(points, centroids)
        if new_inertia > inertia + 1e-9 * max(1.0, inertia):
            raise AssertionError("k-means objective increased")
        history.append(new_inertia)
        if np.array_equal(new_labels, labels):
            return new_labels, new_inertia, history
        labels, inertia = new_labels, new_inertia
    return labels, inertia, history


def kmeans(points, k, seed=0, restarts=10, views=1) -> ClusteringResult:
    """Best-of-``restarts`` k-means on the rows of ``points``.

    Restart r draws its own generator from (seed, r), so the result is
    deterministic for a fixed (seed, restarts) regardless of scheduling.
    Labels are returned folded to (views, len(points) / views).
    """
    points = np.asarray(points, dtype=float)
    if k < 1 or len(points) < k:
        raise ValueError(f"need at least k={k} points, got {len(points)}")
    best = None
    for r in range(restarts):
        rng = np.random.default_rng((seed, r) if np.isscalar(seed) else (*seed, r))
        labels, inertia, _ = _lloyd(points, k, rng)
        if best is None or inertia < best[1]:
            best = (labels, inertia)
    labels, inertia = best
    n = len(points) // views
    if n * views != len(points):
        raise ValueError("point count is not a multiple of the view count")
    return ClusteringResult(labels=labels.reshape(views, n), inertia=inertia,
                            seed=seed, restarts=restarts)


def per_view_labels(result: ClusteringResult):
    """Label row of each view; identity across rows is meaningful."""
    return [result.labels[t].copy() for t in range(result.M)]


def adjusted_rand_index(a, b) -> float:
    """Chance-corrected pair-counting agreement of two labelings.

    Computed from the contingency table with exact integer arithmetic;
    1.0 iff the partitions coincide up to relabeling. Two partitions that
    both carry no pair information (the degenerate denominator) count as
    identical.
    """
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        raise ValueError("labelings must have equal length")
    n = len(a)
    if n < 2:
        raise DegenerateInput("adjusted Rand index needs at least two items")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    sum_cells = sum(math.comb(int(c), 2) for c in table.ravel())
    sum_rows = sum(math.comb(int(c), 2) for c in table.sum(axis=1))
    sum_cols = sum(math.comb(int(c), 2) for c in table.sum(axis=0))
    total = math.comb(n, 2)
    # ARI = (idx - exp) / (max - exp), scaled to integers
    numerator = 2 * (total * sum_cells - sum_rows * sum_cols)
    denominator = total * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols
    if denominator == 0:
        return 1.0
    return numerator / denominator


@dataclass(frozen=True)
class PipelineResult:
    """Everything produced by one spectral-clustering run."""

    system: SpatioTemporalSystem
    embedding: SpectralEmbedding
    selected: Embedding
    clustering: ClusteringResult
    ari_per_view: tuple | None = None


def score_against(labels, truth):
    """Per-view ARI of a label array against a ground-truth array."""
    labels = np.asarray(labels)
    truth = np.asarray(truth)
    return tuple(adjusted_rand_index(labels[t], truth[t])
                 for t in range(labels.shape[0]))


def spectral_cluster(graph: TimeEvolvingGraph, k, *, seed=0, restarts=10,
                     tau=DEFAULT_TAU, self_loops=True, k_eigs=None,
                     truth=None) -> PipelineResult:
    """Run the full pipeline: operators, C, eigenvectors, selection, k-means.

    ``k_eigs`` controls how many dominant eigenpairs are computed initially;
    it is grown automatically until k non-temporal eigenvectors are found
    (or the spectrum is exhausted).
    """
    ops = propagate_densities(graph, self_loops=self_loops)
    system = assemble_system(ops)
    N = system.size
    j = min(N, k_eigs if k_eigs is not None else k + graph.M + 3)
    while True:
        embedding = eigendecompose(system, j, tau=tau)
        try:
            selected = select_spatial(embedding, k)
            break
        except InsufficientSpatialEigenvectors:
            if j >= N:
                raise
            j = min(N, 2 * j)
    result = kmeans(selected.points, k, seed=seed, restarts=restarts,
                    views=graph.M)
    ari = score_against(result.labels, truth) if truth is not None else None
    return PipelineResult(system=system, embedding=embedding, selected=selected,
                          clustering=result, ari_per_view=ari)
