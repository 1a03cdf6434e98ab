"""Shared helpers for the test suite."""

import numpy as np

from stgl import TimeEvolvingGraph, assemble_system, propagate_densities


def random_teg(seed, n_max=50, M_max=6, density=0.25):
    """A random sparse time-evolving graph; alternates directed/undirected."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, n_max + 1))
    M = int(rng.integers(2, M_max + 1))
    directed = bool(rng.integers(2))
    snaps = []
    for _ in range(M):
        W = rng.random((n, n)) * (rng.random((n, n)) < density)
        np.fill_diagonal(W, 0.0)
        if not directed:
            W = np.triu(W)
            W = W + W.T
        snaps.append(W)
    return TimeEvolvingGraph.from_dense(snaps, directed=directed)


def build_system(graph, **kwargs):
    return assemble_system(propagate_densities(graph, **kwargs))


def ari_pair_oracle(a, b):
    """Exhaustive pair enumeration over all C(n, 2) item pairs."""
    n = len(a)
    s11 = s10 = s01 = s00 = 0
    for i in range(n):
        for j in range(i + 1, n):
            same_a = a[i] == a[j]
            same_b = b[i] == b[j]
            if same_a and same_b:
                s11 += 1
            elif same_a:
                s10 += 1
            elif same_b:
                s01 += 1
            else:
                s00 += 1
    denominator = (s11 + s10) * (s10 + s00) + (s11 + s01) * (s01 + s00)
    if denominator == 0:
        return 1.0
    return 2 * (s11 * s00 - s10 * s01) / denominator


def reference_symmetrized(graph):
    """Independent dense construction of B^{-1/2} A B^{-1/2}.

    Assembles the covariance blocks directly from the definitions, without
    going through the library's system assembly.
    """
    ops = propagate_densities(graph)
    n, M = graph.n, ops.M
    N = M * n
    A = np.zeros((N, N))
    for t in range(M - 1):
        S = ops.transition_dense(t + 1)
        cross = np.diag(ops.densities[t]) @ S
        A[t * n:(t + 1) * n, (t + 1) * n:(t + 2) * n] = cross
        A[(t + 1) * n:(t + 2) * n, t * n:(t + 1) * n] = cross.T
    b = np.concatenate([(1.0 if t in (0, M - 1) else 2.0) * ops.densities[t]
                        for t in range(M)])
    d = 1.0 / np.sqrt(b)
    return d[:, None] * A * d[None, :], b
