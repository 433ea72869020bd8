"""Degree-matrix anonymization by constrained l1 clustering.

Nodes are partitioned into floor(n/k) groups of at least k members each;
every member then adopts the component-wise median of its group's degree
vectors, which makes the rows k-anonymous.  The partition is searched with
a k-means style alternation between an assignment step (greedy or exact)
and a median update step, restarted from several random partitions.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .graph_core import normalized_cost  # noqa: F401  (re-export for callers)

UNASSIGNED = -1

# the exact assignment solves a dense n x n matching; keep it desk-scale
MAX_EXACT_NODES = 4096


@dataclass(frozen=True)
class AnonymityGrouping:
    """Assignment of nodes to degree-sharing groups.

    assignment[i] is the group index of node i, or -1 while a node is still
    unassigned in a partial grouping.  Complete groupings keep every group
    at size >= 1; the anonymizer only produces groups of size >= k.
    """

    m: int
    assignment: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.assignment, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "assignment", arr)
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if arr.ndim != 1 or len(arr) == 0:
            raise ValueError("assignment must be a non-empty vector")
        if arr.min() < UNASSIGNED or arr.max() >= self.m:
            raise ValueError(f"group indices must lie in [-1, {self.m})")

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def complete(self) -> bool:
        return bool((self.assignment != UNASSIGNED).all())

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignment[self.assignment != UNASSIGNED],
                           minlength=self.m)

    def groups(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.assignment == g) for g in range(self.m)]

    def indicator(self) -> np.ndarray:
        """n x m 0/1 matrix with exactly one 1 per fully assigned row."""
        ind = np.zeros((self.n, self.m), dtype=np.int64)
        mask = self.assignment != UNASSIGNED
        ind[np.flatnonzero(mask), self.assignment[mask]] = 1
        return ind


@dataclass(frozen=True)
class AnonymizerConfig:
    """Tuning knobs for degree_anonymization; defaults follow the paper."""

    k: int
    restarts: int = 20
    inner_iters: int = 50
    greedy_perms: int = 10
    seed: int = 0
    mode: str = "greedy"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if min(self.restarts, self.inner_iters, self.greedy_perms) < 1:
            raise ValueError("restarts, inner_iters and greedy_perms must be >= 1")
        if self.mode not in ("greedy", "exact"):
            raise ValueError(f"unknown assignment mode {self.mode!r}")


@dataclass(frozen=True)
class AnonymizationOutcome:
    """Result of degree_anonymization.

    anonymized[i] equals medians[grouping.assignment[i]]; cost is the raw
    l1 distance between the input and anonymized matrices.  cost_histories
    records the cost after every median update of every restart, which is
    non-increasing within each restart by construction.
    """

    anonymized: np.ndarray
    grouping: AnonymityGrouping
    medians: np.ndarray
    cost: int
    best_restart: int
    iterations_used: tuple[int, ...]
    cost_histories: tuple[tuple[int, ...], ...]


def set_median(vectors) -> np.ndarray:
    """Component-wise median, taking the lower of the two middles.

    The l1-optimal shared vector for a group: each component minimizes the
    summed absolute deviation independently, and the lower median keeps the
    result integral on even group sizes.
    """
    arr = np.asarray(vectors, dtype=np.int64)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ValueError("expected a non-empty 2-d array of vectors")
    return np.sort(arr, axis=0)[(arr.shape[0] - 1) // 2]


def _cost_matrix(d: np.ndarray, p: np.ndarray) -> np.ndarray:
    """m x n matrix of l1 distances from each median row to each node row."""
    return np.abs(d[None, :, :] - p[:, None, :]).sum(axis=2)


def assignment_cost(d: np.ndarray, p: np.ndarray, assignment: np.ndarray) -> int:
    """Total l1 distance of every assigned node to its group median."""
    assignment = np.asarray(assignment)
    mask = assignment != UNASSIGNED
    return int(np.abs(d[mask] - p[assignment[mask]]).sum())


def _check_assignment_args(d: np.ndarray, p: np.ndarray, k: int) -> tuple[int, int]:
    n, m = d.shape[0], p.shape[0]
    if d.shape[1] != p.shape[1]:
        raise ValueError("degree and median matrices must share column count")
    if k < 1 or k > n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if m * k > n:
        raise ValueError(f"{m} groups of {k} nodes exceed n={n}")
    return n, m


def _fill_residual(C: np.ndarray, assignment: np.ndarray) -> np.ndarray:
    """Send every unassigned node to its l1-closest median, lowest index on ties."""
    out = assignment.copy()
    rest = np.flatnonzero(out == UNASSIGNED)
    if len(rest):
        out[rest] = np.argmin(C[:, rest], axis=0)
    return out


def assign_residual(
    d: np.ndarray, p: np.ndarray, partial: AnonymityGrouping
) -> AnonymityGrouping:
    """Complete a partial grouping greedily; already assigned nodes keep their group."""
    C = _cost_matrix(np.asarray(d), np.asarray(p))
    return AnonymityGrouping(partial.m, _fill_residual(C, np.asarray(partial.assignment)))


def greedy_assignment(
    d: np.ndarray, p: np.ndarray, k: int, l: int, rng: np.random.Generator
) -> AnonymityGrouping:
    """Constrained assignment via l random median orderings.

    For each of l permutations the medians claim, in turn, their k closest
    still-unassigned nodes; leftovers then join their closest median.  The
    permutation with the lowest total cost wins (first one on ties).  Node
    ordering ties are broken by index, so results depend only on rng state.
    """
    d, p = np.asarray(d), np.asarray(p)
    n, m = _check_assignment_args(d, p, k)
    if l < 1:
        raise ValueError("l must be >= 1")
    C = _cost_matrix(d, p)
    order = np.argsort(C, axis=1, kind="stable")
    best_cost = None
    best = None
    for _ in range(l):
        perm = rng.permutation(m)
        taken = np.zeros(n, dtype=bool)
        assign = np.full(n, UNASSIGNED, dtype=np.int64)
        for j in perm:
            row = order[j]
            chosen = row[~taken[row]][:k]
            assign[chosen] = j
            taken[chosen] = True
        assign = _fill_residual(C, assign)
        cost = int(C[assign, np.arange(n)].sum())
        if best_cost is None or cost < best_cost:
            best_cost, best = cost, assign
    return AnonymityGrouping(m, best)


def exact_assignment(d: np.ndarray, p: np.ndarray, k: int) -> AnonymityGrouping:
    """Optimal constrained assignment for fixed medians.

    Solved as a dense min-cost matching: every group contributes k
    mandatory slots priced by l1 distance, and the n - m*k leftover slots
    are priced at each node's distance to its closest median, which is
    what the greedy residual phase would charge.  The resulting grouping
    minimizes the total cost over all groupings with >= k nodes per group.
    """
    d, p = np.asarray(d), np.asarray(p)
    n, m = _check_assignment_args(d, p, k)
    if n > MAX_EXACT_NODES:
        raise ValueError(f"exact assignment capped at {MAX_EXACT_NODES} nodes, got {n}")
    C = _cost_matrix(d, p)
    slot_group = np.repeat(np.arange(m), k)
    rows = [C[slot_group, :]]
    if n - m * k:
        rows.append(np.tile(C.min(axis=0), (n - m * k, 1)))
    M = np.vstack(rows)
    slot_idx, node_idx = linear_sum_assignment(M)
    assign = np.full(n, UNASSIGNED, dtype=np.int64)
    mandatory = slot_idx < m * k
    assign[node_idx[mandatory]] = slot_group[slot_idx[mandatory]]
    return AnonymityGrouping(m, _fill_residual(C, assign))


def _initial_partition(n: int, m: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Shuffle nodes, deal k per group round-robin, spread leftovers."""
    perm = rng.permutation(n)
    assign = np.empty(n, dtype=np.int64)
    assign[perm[:m * k]] = np.arange(m * k) % m
    assign[perm[m * k:]] = np.arange(n - m * k)
    return assign


def _group_medians(d: np.ndarray, assignment: np.ndarray, m: int) -> np.ndarray:
    p = np.empty((m, d.shape[1]), dtype=np.int64)
    for g in range(m):
        p[g] = set_median(d[assignment == g])
    return p


def _run_restart(
    d: np.ndarray, cfg: AnonymizerConfig, m: int, seed_seq: np.random.SeedSequence
) -> tuple[int, np.ndarray, np.ndarray, int, tuple[int, ...]]:
    rng = np.random.default_rng(seed_seq)
    assign = _initial_partition(d.shape[0], m, cfg.k, rng)
    p = _group_medians(d, assign, m)
    cost = assignment_cost(d, p, assign)
    history = [cost]
    iters = 0
    while iters < cfg.inner_iters:
        if cfg.mode == "greedy":
            cand = greedy_assignment(d, p, cfg.k, cfg.greedy_perms, rng)
        else:
            cand = exact_assignment(d, p, cfg.k)
        iters += 1
        # keep the incumbent unless the fresh assignment strictly improves
        # under the current medians; this makes the cost trace non-increasing
        # and forces convergence (the cost is integral and bounded below)
        if assignment_cost(d, p, cand.assignment) >= cost:
            break
        assign = np.asarray(cand.assignment)
        p = _group_medians(d, assign, m)
        cost = assignment_cost(d, p, assign)
        history.append(cost)
    return cost, assign, p, iters, tuple(history)


def degree_anonymization(
    d: np.ndarray, cfg: AnonymizerConfig, workers: int = 1
) -> AnonymizationOutcome:
    """Search for a low-cost k-anonymous version of a degree matrix.

    Runs cfg.restarts independent alternations from random partitions and
    keeps the cheapest result (lowest restart index on ties).  Each restart
    draws its RNG stream from (cfg.seed, restart index), so the outcome is
    identical no matter how many workers execute the restarts.
    """
    d = np.asarray(d, dtype=np.int64)
    if d.ndim != 2 or d.shape[0] == 0:
        raise ValueError("expected a non-empty n x T degree matrix")
    n = d.shape[0]
    if cfg.k > n:
        raise ValueError(f"k={cfg.k} exceeds node count {n}")
    m = n // cfg.k
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)

    def job(i: int):
        return _run_restart(d, cfg, m, seeds[i])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(cfg.restarts)))
    else:
        results = [job(i) for i in range(cfg.restarts)]

    best = min(range(cfg.restarts), key=lambda i: (results[i][0], i))
    cost, assign, medians, _, _ = results[best]
    grouping = AnonymityGrouping(m, assign)
    return AnonymizationOutcome(
        anonymized=medians[assign],
        grouping=grouping,
        medians=medians,
        cost=cost,
        best_restart=best,
        iterations_used=tuple(r[3] for r in results),
        cost_histories=tuple(r[4] for r in results),
    )
