"""Temporal graph data model, degree matrices and edge-list I/O.

A temporal graph is a fixed node set observed over T snapshots.  Each
snapshot is an undirected simple graph stored as a sorted tuple of
``(u, v)`` pairs with ``u < v``, which keeps iteration order deterministic.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np

Edge = tuple[int, int]

HEADER_PREFIX = "n="


class EdgeListFormatError(ValueError):
    """Raised when a temporal edge list cannot be parsed.

    Carries the 1-based line number of the offending record.
    """

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _normalize_slice(n: int, edges: Iterable[Edge], t: int) -> tuple[Edge, ...]:
    seen = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop ({u},{v}) in slice {t}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n} in slice {t}")
        seen.add((u, v) if u < v else (v, u))
    return tuple(sorted(seen))


@dataclass(frozen=True)
class TemporalGraph:
    """Immutable sequence of edge sets over a shared node set of size n."""

    n: int
    slices: tuple[tuple[Edge, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(self.slices) < 1:
            raise ValueError("need at least one slice")

    @classmethod
    def from_slices(cls, n: int, slices: Iterable[Iterable[Edge]]) -> "TemporalGraph":
        """Build a graph from per-slice edge iterables.

        Edges are normalized to ``u < v``, duplicates are collapsed and each
        slice is sorted.  Self-loops and out-of-range endpoints raise
        ``ValueError``.
        """
        norm = tuple(_normalize_slice(n, sl, t) for t, sl in enumerate(slices))
        return cls(n=n, slices=norm)

    @property
    def T(self) -> int:
        return len(self.slices)

    def edge_sets(self) -> list[set[Edge]]:
        return [set(sl) for sl in self.slices]


def degree_matrix(g: TemporalGraph) -> np.ndarray:
    """Return the n x T matrix whose column t holds the slice-t degrees."""
    d = np.zeros((g.n, g.T), dtype=np.int64)
    for t, sl in enumerate(g.slices):
        for u, v in sl:
            d[u, t] += 1
            d[v, t] += 1
    return d


def is_k_anonymous(d: np.ndarray, k: int) -> bool:
    """True if every row of d occurs at least k times.

    A node is k-anonymous when at least k-1 other nodes share its whole
    temporal degree vector, so re-identification by degree narrows an
    attacker down to no fewer than k candidates.
    """
    d = np.asarray(d)
    n = d.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    _, counts = np.unique(d, axis=0, return_counts=True)
    return bool((counts >= k).min())


def degree_distance(d1: np.ndarray, d2: np.ndarray) -> int:
    """Raw l1 distance between two degree matrices, summed over all entries."""
    d1, d2 = np.asarray(d1), np.asarray(d2)
    if d1.shape != d2.shape:
        raise ValueError(f"shape mismatch {d1.shape} vs {d2.shape}")
    return int(np.abs(d1 - d2).sum())


def edit_distance_lower_bound(d1: np.ndarray, d2: np.ndarray) -> float:
    """Minimum number of edge edits needed to move between two degree matrices.

    Every single edge insertion or deletion changes exactly two entries of
    one column by one, so the edit count is at least half the l1 distance.
    """
    return degree_distance(d1, d2) / 2.0


def normalized_cost(d: np.ndarray, d_anon: np.ndarray) -> float:
    """Anonymization cost scaled into [0, 1]: l1 distance over T*n*(n-1)."""
    d = np.asarray(d)
    n, T = d.shape
    if n < 2:
        raise ValueError("normalized cost needs n >= 2")
    return degree_distance(d, d_anon) / float(T * n * (n - 1))


def edge_edit_count(g: TemporalGraph, h: TemporalGraph) -> int:
    """Total size of the per-slice symmetric differences between g and h."""
    if g.n != h.n or g.T != h.T:
        raise ValueError("graphs must share node count and slice count")
    return sum(
        len(set(a) ^ set(b)) for a, b in zip(g.slices, h.slices)
    )


def rebucket(g: TemporalGraph, width: int) -> TemporalGraph:
    """Coarsen temporal resolution by unioning consecutive runs of slices.

    An edge is active in a bucket when it is active in any constituent
    slice.  The last bucket may cover fewer than ``width`` slices.
    """
    if width < 1:
        raise ValueError("bucket width must be >= 1")
    merged = []
    for start in range(0, g.T, width):
        bucket: set[Edge] = set()
        for sl in g.slices[start:start + width]:
            bucket.update(sl)
        merged.append(tuple(sorted(bucket)))
    return TemporalGraph(n=g.n, slices=tuple(merged))


def load_temporal_edgelist(stream: IO[str] | IO[bytes]) -> TemporalGraph:
    """Parse the tab-separated temporal edge-list format.

    The first non-comment line declares ``n=<int> T=<int>``; every further
    non-comment line is ``t<TAB>u<TAB>v`` with 0-based indices.  Lines
    starting with ``#`` and blank lines are ignored.  Malformed input
    raises ``EdgeListFormatError`` with the offending line number.
    """
    n = T = -1
    per_slice: list[set[Edge]] = []
    for lineno, raw in enumerate(stream, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n < 0:
            parts = line.split()
            try:
                if not (parts[0].startswith("n=") and parts[1].startswith("T=")):
                    raise ValueError
                n = int(parts[0][2:])
                T = int(parts[1][2:])
            except (ValueError, IndexError):
                raise EdgeListFormatError(lineno, f"expected 'n=<int> T=<int>', got {line!r}")
            if n < 1 or T < 1:
                raise EdgeListFormatError(lineno, f"n and T must be positive, got n={n} T={T}")
            per_slice = [set() for _ in range(T)]
            continue
        parts = line.split()
        if len(parts) != 3:
            raise EdgeListFormatError(lineno, f"expected 't u v', got {line!r}")
        try:
            t, u, v = (int(p) for p in parts)
        except ValueError:
            raise EdgeListFormatError(lineno, f"non-integer field in {line!r}")
        if not 0 <= t < T:
            raise EdgeListFormatError(lineno, f"slice {t} out of range [0, {T})")
        if u == v:
            raise EdgeListFormatError(lineno, f"self-loop ({u},{v})")
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListFormatError(lineno, f"endpoint out of range [0, {n}) in {line!r}")
        per_slice[t].add((u, v) if u < v else (v, u))
    if n < 0:
        raise EdgeListFormatError(0, "missing 'n=<int> T=<int>' header")
    return TemporalGraph(n=n, slices=tuple(tuple(sorted(s)) for s in per_slice))


def dump_temporal_edgelist(g: TemporalGraph, stream: IO[str]) -> None:
    """Write g in the edge-list format; inverse of load_temporal_edgelist."""
    stream.write(f"n={g.n} T={g.T}\n")
    for t, sl in enumerate(g.slices):
        for u, v in sl:
            stream.write(f"{t}\t{u}\t{v}\n")


def dumps_temporal_edgelist(g: TemporalGraph) -> str:
    buf = io.StringIO()
    dump_temporal_edgelist(g, buf)
    return buf.getvalue()


def read_temporal_edgelist(path) -> TemporalGraph:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return load_temporal_edgelist(fh)


def write_temporal_edgelist(g: TemporalGraph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump_temporal_edgelist(g, fh)


def format_decimal(x: float) -> str:
    """Full-precision positional decimal, never scientific notation.

    Uses the shortest representation that round-trips through float.
    """
    if float(x) == int(x):
        return str(int(x))
    return np.format_float_positional(float(x), trim="-")


def write_degree_matrix_csv(d: np.ndarray, stream: IO[str]) -> None:
    """Write one row per node with T comma-separated integers, no header."""
    for row in np.asarray(d):
        stream.write(",".join(str(int(x)) for x in row) + "\n")


def read_degree_matrix_csv(stream: IO[str]) -> np.ndarray:
    rows = [
        [int(x) for x in line.strip().split(",")]
        for line in stream
        if line.strip()
    ]
    return np.array(rows, dtype=np.int64)
