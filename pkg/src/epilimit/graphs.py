"""Sparse random contact networks: Erdos-Renyi and configuration model.

Graphs are undirected, simple, vertex-labelled 0..n-1, and immutable once
built. Both generators are deterministic functions of their seed. The
configuration model is the erased variant: uniform stub matching followed by
deletion of self-loops and parallel edges, recorded in the graph metadata as
``erased_cm`` (the O(1) erased edges do not affect the sparse-graph limits this
library targets).
"""

from __future__ import annotations

import math

import numpy as np

from .degree import DegreeDistribution
from .errors import ConfigError

__all__ = ["SparseGraph", "erdos_renyi", "configuration_model", "degree_histogram", "write_edge_list"]


class SparseGraph:
    """Undirected simple graph held as per-vertex sorted neighbor lists."""

    __slots__ = ("n", "adjacency", "meta")

    def __init__(self, n: int, edges, meta: dict | None = None):
        if n < 1:
            raise ConfigError("graph needs at least one vertex")
        adjacency: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            adjacency[u].append(v)
            adjacency[v].append(u)
        for lst in adjacency:
            lst.sort()
        self.n = n
        self.adjacency = adjacency
        self.meta = dict(meta or {})

    def neighbors(self, v: int) -> list[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self):
        """Yield each edge once as (u, v) with u < v, in sorted order."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)

    def mean_degree(self) -> float:
        return 2.0 * self.edge_count / self.n

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SparseGraph(n={self.n}, edges={self.edge_count}, meta={self.meta})"


def erdos_renyi(n: int, c: float, seed) -> SparseGraph:
    """G(n, p) with edge probability p = c/n, so c is the target mean degree.

    Uses geometric skipping over the lower triangle (expected O(n + m) work),
    which realizes independent Bernoulli(p) edges without touching all pairs.
    """
    n = int(n)
    c = float(c)
    if n < 1:
        raise ConfigError("erdos_renyi needs n >= 1")
    if c <= 0:
        raise ConfigError("erdos_renyi needs mean degree c > 0")
    p = c / n
    if p > 1:
        raise ConfigError(f"edge probability c/n = {p} exceeds 1")
    meta = {"model": "erdos_renyi", "n": n, "c": c, "seed": seed}
    rng = np.random.default_rng(seed)
    edges = []
    if p == 1.0:
        edges = [(u, v) for v in range(n) for u in range(v)]
        return SparseGraph(n, edges, meta)
    lp = math.log1p(-p)
    v, w = 1, -1
    while v < n:
        w += 1 + int(math.log(1.0 - rng.random()) / lp)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            edges.append((w, v))
    return SparseGraph(n, edges, meta)


def configuration_model(n: int, degrees, seed) -> SparseGraph:
    """Erased configuration model on a degree sequence or a degree law.

    If ``degrees`` is a :class:`DegreeDistribution` the sequence is sampled
    i.i.d. from it. An odd stub total is repaired by incrementing one uniformly
    chosen vertex's degree. Stubs are then matched uniformly at random and
    self-loops/parallel edges are erased.
    """
    n = int(n)
    if n < 1:
        raise ConfigError("configuration_model needs n >= 1")
    rng = np.random.default_rng(seed)
    if isinstance(degrees, DegreeDistribution):
        seq = rng.choice(degrees.probs.size, size=n, p=degrees.probs)
    else:
        seq = np.asarray(degrees, dtype=np.int64)
        if seq.shape != (n,):
            raise ConfigError(f"degree sequence length {seq.size} != n = {n}")
        if np.any(seq < 0):
            raise ConfigError("degrees must be nonnegative")
    seq = seq.astype(np.int64)
    if seq.sum() % 2 == 1:
        seq[rng.integers(n)] += 1
    if np.any(seq >= n):
        raise ConfigError("degree sequence has an entry >= n")

    stubs = np.repeat(np.arange(n, dtype=np.int64), seq)
    rng.shuffle(stubs)
    a, b = stubs[0::2], stubs[1::2]
    keep = a != b  # erase self-loops
    lo = np.minimum(a[keep], b[keep])
    hi = np.maximum(a[keep], b[keep])
    pairs = np.unique(np.column_stack([lo, hi]), axis=0)  # erase parallel edges
    meta = {"model": "erased_cm", "n": n, "seed": seed}
    return SparseGraph(n, [tuple(e) for e in pairs], meta)


def degree_histogram(g: SparseGraph) -> DegreeDistribution:
    """Empirical degree law of a graph as an explicit pmf."""
    degs = np.array([g.degree(v) for v in range(g.n)])
    counts = np.bincount(degs)
    return DegreeDistribution.from_pmf(counts / g.n)


def write_edge_list(g: SparseGraph, path) -> None:
    """Write one "u v" line per edge, u < v, ASCII decimal, LF endings."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")
