"""Random walks on time-evolving graphs and empirical escape rates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .operators import OperatorSequence


@dataclass(frozen=True)
class WalkTrace:
    """One realized walk: the vertex visited at each view, plus its seed."""

    path: tuple
    seed: object


def simulate_walk(ops: OperatorSequence, start, seed) -> WalkTrace:
    """Walk one particle across all views, one step per view transition.

    The position at view t+1 is drawn from row ``path[t]`` of S_t, so the
    path has length M. Deterministic for a fixed seed.
    """
    n = ops.n
    if not 0 <= start < n:
        raise ValueError(f"start vertex {start} out of range [0, {n})")
    rng = np.random.default_rng(seed)
    path = [int(start)]
    for S in ops.transitions[:-1]:
        row = S[[path[-1]], :].toarray().ravel() if sparse.issparse(S) else S[path[-1]]
        path.append(int(rng.choice(n, p=row)))
    return WalkTrace(path=tuple(path), seed=seed)


def simulate_walks(ops: OperatorSequence, starts, seed) -> list:
    """Simulate one walk per entry of ``starts`` with derived seeds.

    Walker i uses seed (seed, i), so results do not depend on scheduling
    or batch splitting.
    """
    return [simulate_walk(ops, s, (seed, i)) for i, s in enumerate(starts)]


def escape_rate(traces, set_per_view) -> float:
    """Fraction of traces that leave the designated vertex set at any view.

    ``set_per_view`` is either a single collection of vertices (used for all
    views) or one collection per view.
    """
    if not traces:
        raise ValueError("need at least one trace")
    M = len(traces[0].path)
    if set_per_view and isinstance(next(iter(set_per_view)), (set, frozenset, list, tuple, np.ndarray)):
        sets = [frozenset(int(v) for v in s) for s in set_per_view]
        if len(sets) != M:
            raise ValueError(f"expected {M} per-view sets, got {len(sets)}")
    else:
        sets = [frozenset(int(v) for v in set_per_view)] * M
    escaped = sum(
        1 for tr in traces
        if any(v not in sets[t] for t, v in enumerate(tr.path))
    )
    return escaped / len(traces)


def occupancy(traces, vertex_set) -> np.ndarray:
    """Per-view fraction of traces inside ``vertex_set``."""
    members = frozenset(int(v) for v in vertex_set)
    M = len(traces[0].path)
    counts = np.zeros(M)
    for tr in traces:
        for t, v in enumerate(tr.path):
            if v in members:
                counts[t] += 1
    return counts / len(traces)
