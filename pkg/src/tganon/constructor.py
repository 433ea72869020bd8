"""Rebuild graph slices from repaired degree sequences.

Given a realizable per-node degree target and the original slice, the
builder realizes the target exactly while preferring edges that existed in
the original graph, so the anonymized slice stays as close to the input
topology as the degree constraints allow.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .graph_core import Edge, TemporalGraph
from .realizability import is_realizable


def _completable(res: np.ndarray, v: int, blocked: np.ndarray) -> bool:
    """Can vertex v still place all its stubs on distinct allowed partners?

    Lays the remaining stubs of v onto the largest-degree available
    partners and tests the leftover sequence with the Erdos-Gallai
    inequalities.  An exchange argument shows that if any completion
    exists, the one using the largest available partners exists too, so
    this test is exact rather than heuristic.
    """
    r = int(res[v])
    if r == 0:
        rest = res.copy()
        rest[v] = 0
        return is_realizable(rest)
    avail = np.flatnonzero((res > 0) & ~blocked)
    if len(avail) < r:
        return False
    take = avail[np.argsort(-res[avail], kind="stable")][:r]
    rest = res.copy()
    rest[take] -= 1
    rest[v] = 0
    return is_realizable(rest)


def build_slice(target: Sequence[int], original: Iterable[Edge], n: int) -> tuple[Edge, ...]:
    """Realize a degree sequence while maximizing reuse of original edges.

    Vertices are processed in decreasing residual-degree order and each
    stub picks the best remaining partner, ranked by original-edge first,
    then residual degree, then index.  A partner is only accepted when the
    remaining stubs can still be completed, so the builder never dead-ends
    on a realizable target.  Raises ValueError if the target is not
    realizable.
    """
    res = np.asarray(target, dtype=np.int64).copy()
    if len(res) != n:
        raise ValueError(f"target has {len(res)} entries, expected {n}")
    if not is_realizable(res):
        raise ValueError("target degree sequence is not realizable")
    orig = np.zeros((n, n), dtype=bool)
    for u, v in original:
        orig[u, v] = orig[v, u] = True
    adj = np.zeros((n, n), dtype=bool)
    edges: list[Edge] = []
    idx = np.arange(n)

    while True:
        v = int(np.argmax(res))  # ties break to the lowest index
        if res[v] == 0:
            break
        while res[v] > 0:
            blocked = adj[v].copy()
            blocked[v] = True
            cand = np.flatnonzero((res > 0) & ~blocked)
            # original edges first, then high residual degree, then index
            cand = cand[np.lexsort((cand, -res[cand], ~orig[v, cand]))]
            placed = False
            for u in cand:
                u = int(u)
                res[v] -= 1
                res[u] -= 1
                blocked[u] = True
                if _completable(res, v, blocked):
                    adj[v, u] = adj[u, v] = True
                    edges.append((v, u) if v < u else (u, v))
                    placed = True
                    break
                res[v] += 1
                res[u] += 1
                blocked[u] = False
            if not placed:
                raise AssertionError("no feasible partner for a realizable target")
    return tuple(sorted(edges))


def havel_hakimi_slice(target: Sequence[int], n: int) -> tuple[Edge, ...]:
    """Priority-free baseline: same builder with no original edges to prefer."""
    return build_slice(target, (), n)


def edge_overlap(a: Iterable[Edge], b: Iterable[Edge]) -> int:
    """Number of edges two slices share."""
    return len(set(a) & set(b))


def build_temporal(
    target: np.ndarray, original: TemporalGraph, workers: int = 1
) -> TemporalGraph:
    """Realize every column of a repaired degree matrix against its slice.

    target column t must be realizable; the result's degree matrix equals
    target exactly.  Slices are independent, so they may be built in
    parallel without affecting the (deterministic) output.
    """
    target = np.asarray(target, dtype=np.int64)
    n, T = target.shape
    if n != original.n or T != original.T:
        raise ValueError("target shape must match the original graph")

    def job(t: int) -> tuple[Edge, ...]:
        return build_slice(target[:, t], original.slices[t], n)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            slices = tuple(pool.map(job, range(T)))
    else:
        slices = tuple(job(t) for t in range(T))
    return TemporalGraph(n=n, slices=slices)
