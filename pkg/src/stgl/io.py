"""File formats: graph JSON, CSV exports, and report JSON.

A graph file is a JSON document with fields ``n``, ``M``, ``directed``,
``edges`` (records ``[t, i, j, w]`` with 1-based view t, 0-based vertices,
w > 0; absent entries are zero) and optionally ``labels`` (M arrays of n
integers). Undirected graphs store each edge once with i <= j; the loader
mirrors it. All writers go through an atomic temp-file-plus-rename.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile

import numpy as np
from scipy import sparse

from .errors import GraphFormatError
from .graph import TimeEvolvingGraph


def _to_jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    return obj


def atomic_write_text(path, text):
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, payload):
    atomic_write_text(path, json.dumps(_to_jsonable(payload), indent=2,
                                       sort_keys=True) + "\n")


def save_graph(path, graph: TimeEvolvingGraph, labels=None):
    """Write a graph (and optional ground-truth labels) as JSON."""
    payload = {
        "n": graph.n,
        "M": graph.M,
        "directed": graph.directed,
        "edges": [[t, i, j, w] for t, i, j, w in graph.edge_records()],
    }
    if labels is not None:
        labels = np.asarray(labels, dtype=int)
        if labels.shape != (graph.M, graph.n):
            raise ValueError(f"labels must be {(graph.M, graph.n)}")
        payload["labels"] = labels.tolist()
    write_json(path, payload)


def load_graph(path):
    """Read a graph JSON file; returns (graph, labels-or-None)."""
    with open(path) as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as err:
            raise GraphFormatError(f"not valid JSON: {err}") from err
    try:
        n, M, directed = int(doc["n"]), int(doc["M"]), bool(doc["directed"])
        edges = doc["edges"]
    except (KeyError, TypeError, ValueError) as err:
        raise GraphFormatError(f"missing or malformed header field: {err}") from err

    entries = [dict() for _ in range(M)]
    for rec in edges:
        if len(rec) != 4:
            raise GraphFormatError(f"edge record {rec!r} must be [t, i, j, w]")
        t, i, j, w = int(rec[0]), int(rec[1]), int(rec[2]), float(rec[3])
        if not 1 <= t <= M:
            raise GraphFormatError(f"view {t} out of range [1, {M}]")
        if not (0 <= i < n and 0 <= j < n):
            raise GraphFormatError(f"vertex pair ({i}, {j}) out of range [0, {n})")
        if w <= 0:
            raise GraphFormatError(f"edge weight must be positive, got {w}")
        keys = [(i, j)] if directed or i == j else [(i, j), (j, i)]
        for key in keys:
            old = entries[t - 1].get(key)
            if old is not None and old != w:
                raise GraphFormatError(f"conflicting duplicate edge {key} at view {t}")
            entries[t - 1][key] = w

    snapshots = []
    for view in entries:
        if view:
            rows, cols = zip(*view.keys())
            W = sparse.coo_array((list(view.values()), (rows, cols)), shape=(n, n))
        else:
            W = sparse.coo_array((n, n))
        snapshots.append(sparse.csr_array(W))
    graph = TimeEvolvingGraph(n=n, M=M, snapshots=tuple(snapshots), directed=directed)

    labels = doc.get("labels")
    if labels is not None:
        labels = np.asarray(labels, dtype=int)
        if labels.shape != (M, n):
            raise GraphFormatError(f"labels must be {(M, n)}, got {labels.shape}")
    return graph, labels


def write_csv(path, header, rows):
    directory = os.path.dirname(os.path.abspath(os.fspath(path)))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_spectrum_csv(path, eigenvalues, tags, a=None):
    """Columns: index (1-based), eigenvalue_C, eigenvalue_L, tag [, a]."""
    header = ["index", "eigenvalue_C", "eigenvalue_L", "tag"]
    rows = [[i + 1, repr(float(ev)), repr(float(1.0 - ev)), tag]
            for i, (ev, tag) in enumerate(zip(eigenvalues, tags))]
    if a is not None:
        header.append("a")
        for row in rows:
            row.append(repr(float(a)))
    write_csv(path, header, rows)


def save_eigenvectors_csv(path, embedding):
    """Columns: eig_index (1-based), view (1-based), vertex, value."""
    rows = []
    for idx, folded in enumerate(embedding.folded, start=1):
        for t in range(embedding.M):
            for v in range(embedding.n):
                rows.append([idx, t + 1, v, repr(float(folded[t, v]))])
    write_csv(path, ["eig_index", "view", "vertex", "value"], rows)


def save_labels_csv(path, labels):
    """Columns: view (1-based), vertex, label."""
    labels = np.asarray(labels)
    rows = [[t + 1, v, int(labels[t, v])]
            for t in range(labels.shape[0]) for v in range(labels.shape[1])]
    write_csv(path, ["view", "vertex", "label"], rows)


def write_report(path, config, results, timings):
    """Report JSON: resolved config, results, and a separate timing section.

    Everything except ``timings`` is deterministic for a fixed config.
    """
    write_json(path, {"config": config, "results": results, "timings": timings})
