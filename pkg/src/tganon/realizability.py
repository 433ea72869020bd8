"""Degree-sequence realizability and group-uniform repair.

An anonymized degree-matrix column assigns one shared degree to every
member of a group.  Such a column can only be turned back into a graph
slice when the expanded sequence is graphical, i.e. has even sum and
satisfies the Erdos-Gallai prefix inequalities.  This module tests that
condition and repairs columns that fail it while keeping groups uniform.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np


def _prefix_feasible(sorted_desc: np.ndarray) -> bool:
    """Erdos-Gallai prefix inequalities on a non-increasing sequence.

    For each j: sum of the j largest degrees <= j(j-1) + sum over the rest
    of min(d_i, j).  The tail sums are evaluated for all j at once via a
    cumulative sum over the ascending view plus one searchsorted call.
    """
    s = np.asarray(sorted_desc, dtype=np.int64)
    n = len(s)
    if n == 0:
        return True
    lhs = np.cumsum(s)
    asc = s[::-1]
    asc_cum = np.concatenate(([0], np.cumsum(asc)))
    j = np.arange(1, n + 1)
    # tail(j) = the n-j smallest entries; split them around the threshold j
    le_total = np.searchsorted(asc, j, side="right")
    tail = n - j
    le_tail = np.minimum(le_total, tail)
    rhs = j * (j - 1) + asc_cum[le_tail] + j * (tail - le_tail)
    return bool(np.all(lhs <= rhs))


def is_realizable(seq) -> bool:
    """True if seq is the degree sequence of some simple undirected graph.

    Entries must be non-negative and at most len(seq) - 1.
    """
    s = np.asarray(seq, dtype=np.int64)
    if s.ndim != 1 or len(s) == 0:
        raise ValueError("expected a non-empty 1-d sequence")
    if (s < 0).any():
        raise ValueError("degrees must be non-negative")
    if (s >= len(s)).any():
        raise ValueError(f"degree {int(s.max())} impossible with {len(s)} nodes")
    if int(s.sum()) % 2 != 0:
        return False
    return _prefix_feasible(np.sort(s)[::-1])


@dataclass(frozen=True)
class GroupDegreeProfile:
    """One degree-matrix column summarized per group.

    delta[g] is the degree shared by every member of group g and sizes[g]
    the group's cardinality.  The expanded sequence repeats each degree
    sizes[g] times.
    """

    delta: tuple[int, ...]
    sizes: tuple[int, ...]

    def __post_init__(self):
        if len(self.delta) != len(self.sizes) or not self.delta:
            raise ValueError("delta and sizes must be non-empty and equal length")
        if any(s < 1 for s in self.sizes):
            raise ValueError("group sizes must be >= 1")
        if any(d < 0 for d in self.delta):
            raise ValueError("group degrees must be non-negative")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def ordering(self) -> tuple[int, ...]:
        """Group indices sorted by degree, largest first, ties by index."""
        m = len(self.delta)
        return tuple(sorted(range(m), key=lambda g: (-self.delta[g], g)))

    def expanded(self) -> np.ndarray:
        """Non-increasing full sequence with each degree repeated per size."""
        out = np.empty(self.n, dtype=np.int64)
        pos = 0
        for g in self.ordering:
            out[pos:pos + self.sizes[g]] = self.delta[g]
            pos += self.sizes[g]
        return out

    def cost_to(self, other: "GroupDegreeProfile") -> int:
        """Weighted l1 repair cost: per-group change times group size."""
        return int(
            sum(s * abs(a - b) for s, a, b in zip(self.sizes, self.delta, other.delta))
        )


def _profile_feasible(delta, sizes) -> bool:
    return _prefix_feasible(GroupDegreeProfile(tuple(delta), tuple(sizes)).expanded())


def enforce_realizability(profile: GroupDegreeProfile, n: int) -> GroupDegreeProfile:
    """Decrease group degrees until the prefix inequalities hold.

    Groups are processed in non-increasing degree order.  Each pass sums,
    per group, the magnitude of the violated prefix constraints whose index
    falls inside that group's block, lowers the group by the per-member
    share (rounded up) and clamps later groups so the order is preserved.
    A final polish pass raises degrees back toward their input values
    wherever that keeps the sequence feasible, which removes most of the
    overshoot the rounded pivot introduces.  Degrees never end above their
    input values, and parity is deliberately left alone (see fix_parity).
    """
    if profile.n != n:
        raise ValueError(f"profile spans {profile.n} nodes, expected {n}")
    if any(d > n - 1 for d in profile.delta):
        raise ValueError("group degree exceeds n-1")
    delta = list(profile.delta)
    sizes = list(profile.sizes)
    order = profile.ordering

    for _ in range(100):
        seq = GroupDegreeProfile(tuple(delta), tuple(sizes)).expanded()
        lhs = np.cumsum(seq)
        nn = len(seq)
        j = np.arange(1, nn + 1)
        asc = seq[::-1]
        asc_cum = np.concatenate(([0], np.cumsum(asc)))
        le_total = np.searchsorted(asc, j, side="right")
        tail = nn - j
        le_tail = np.minimum(le_total, tail)
        rhs = j * (j - 1) + asc_cum[le_tail] + j * (tail - le_tail)
        excess = np.maximum(lhs - rhs, 0)
        if not excess.any():
            break
        pos = 0
        for g in order:
            v = int(excess[pos:pos + sizes[g]].sum())
            if v > 0:
                delta[g] = max(0, delta[g] - int(np.ceil(v / sizes[g])))
            pos += sizes[g]
        # propagate reductions down the sorted order
        for a, b in itertools.pairwise(order):
            if delta[b] > delta[a]:
                delta[b] = delta[a]
    else:
        raise RuntimeError("realizability repair did not converge in 100 passes")

    # polish: raise groups back toward their original degrees while feasible
    changed = True
    while changed:
        changed = False
        for idx, g in enumerate(order):
            cap = profile.delta[g]
            if idx > 0:
                cap = min(cap, delta[order[idx - 1]])
            while delta[g] < cap:
                delta[g] += 1
                if _profile_feasible(delta, sizes):
                    changed = True
                else:
                    delta[g] -= 1
                    break
    return GroupDegreeProfile(tuple(delta), tuple(sizes))


def fix_parity(profile: GroupDegreeProfile, n: int) -> GroupDegreeProfile:
    """Make the total degree sum even without breaking feasibility.

    Requires the expanded sequence to satisfy the prefix inequalities.  If
    the sum is odd, some group must contribute an odd size-times-degree
    product; among those the group with the smallest size wins (ties by
    lower degree, then lower index) and all of its members move by one in
    the feasible direction of minimal cost, preferring a decrease when both
    directions cost the same.
    """
    delta = list(profile.delta)
    sizes = list(profile.sizes)
    total = sum(d * s for d, s in zip(delta, sizes))
    if total % 2 == 0:
        return profile
    odd = [g for g in range(len(delta)) if (delta[g] * sizes[g]) % 2 == 1]
    if not odd:
        raise AssertionError("odd total implies an odd size*degree group")
    g = min(odd, key=lambda g: (sizes[g], delta[g], g))
    # both directions cost sizes[g]; feasibility decides, tie -> decrease
    for step in (-1, +1):
        cand = list(delta)
        cand[g] += step
        if 0 <= cand[g] <= n - 1 and _profile_feasible(cand, sizes):
            return GroupDegreeProfile(tuple(cand), tuple(sizes))
    # neither single step stays feasible: decrease, re-enforce and retry
    cand = list(delta)
    cand[g] = max(0, cand[g] - 1)
    lowered = enforce_realizability(GroupDegreeProfile(tuple(cand), tuple(sizes)), n)
    return fix_parity(lowered, n)


def repair_profile(profile: GroupDegreeProfile, n: int) -> GroupDegreeProfile:
    """Full column repair: prefix feasibility first, then parity."""
    return fix_parity(enforce_realizability(profile, n), n)


@dataclass(frozen=True)
class RepairReport:
    """Per-column outcome of repairing an anonymized degree matrix."""

    columns_repaired: int
    total_cost: int
    column_costs: tuple[int, ...]


def _column_profile(column: np.ndarray, groups: list[np.ndarray]) -> GroupDegreeProfile:
    delta = []
    sizes = []
    for members in groups:
        vals = column[members]
        if not (vals == vals[0]).all():
            raise ValueError("column is not uniform within a group")
        delta.append(int(vals[0]))
        sizes.append(len(members))
    return GroupDegreeProfile(tuple(delta), tuple(sizes))


def repair_degree_matrix_report(
    d_anon: np.ndarray, assignment: np.ndarray
) -> tuple[np.ndarray, RepairReport]:
    """Repair every non-realizable column of a group-uniform degree matrix.

    assignment maps node -> group; each group must hold one shared degree
    per column.  Returns the repaired matrix plus cost accounting.  Columns
    that are already realizable pass through unchanged.
    """
    d_anon = np.asarray(d_anon, dtype=np.int64)
    assignment = np.asarray(assignment)
    n, T = d_anon.shape
    m = int(assignment.max()) + 1
    groups = [np.flatnonzero(assignment == g) for g in range(m)]
    if any(len(g) == 0 for g in groups):
        raise ValueError("every group must be non-empty")
    out = d_anon.copy()
    costs = []
    repaired = 0
    for t in range(T):
        profile = _column_profile(d_anon[:, t], groups)
        if is_realizable(profile.expanded()):
            costs.append(0)
            continue
        fixed = repair_profile(profile, n)
        for g, members in enumerate(groups):
            out[members, t] = fixed.delta[g]
        costs.append(profile.cost_to(fixed))
        repaired += 1
    return out, RepairReport(
        columns_repaired=repaired,
        total_cost=int(sum(costs)),
        column_costs=tuple(costs),
    )


def repair_degree_matrix(d_anon: np.ndarray, assignment: np.ndarray) -> np.ndarray:
    """Like repair_degree_matrix_report but returns only the matrix."""
    return repair_degree_matrix_report(d_anon, assignment)[0]


def brute_force_profile_repair(
    profile: GroupDegreeProfile, n: int
) -> tuple[GroupDegreeProfile, int]:
    """Exhaustive optimal group-uniform repair, for small instances only.

    Enumerates every candidate degree vector in [0, n-1]^m, keeps the
    realizable ones (prefix inequalities and even sum) and returns the one
    of minimal weighted l1 cost.  Intended as a reference point for the
    repair heuristic; the search space is (n)^m so keep m small.
    """
    m = len(profile.delta)
    if n ** m > 2_000_000:
        raise ValueError(f"instance too large for exhaustive repair: {n}^{m}")
    sizes = np.array(profile.sizes)
    base = np.array(profile.delta)
    grid = np.array(list(itertools.product(range(n), repeat=m)), dtype=np.int64)
    costs = (np.abs(grid - base) * sizes).sum(axis=1)
    # expand all candidates at once and test feasibility vectorized
    expanded = np.repeat(grid, profile.sizes, axis=1)
    expanded = np.sort(expanded, axis=1)[:, ::-1]
    even = expanded.sum(axis=1) % 2 == 0
    lhs = np.cumsum(expanded, axis=1)
    j = np.arange(1, n + 1)
    mins = np.minimum(expanded[:, None, :], j[None, :, None])
    tail_mask = np.arange(n)[None, :] >= j[:, None]
    rhs = j * (j - 1) + (mins * tail_mask[None, :, :]).sum(axis=2)
    feasible = even & np.all(lhs <= rhs, axis=1)
    if not feasible.any():
        raise RuntimeError("no realizable repair exists, which cannot happen")
    costs = np.where(feasible, costs, np.iinfo(np.int64).max)
    best = int(np.argmin(costs))
    return (
        GroupDegreeProfile(tuple(int(x) for x in grid[best]), profile.sizes),
        int(costs[best]),
    )


def random_nonrealizable_profile(
    n: int, k: int, rng: np.random.Generator
) -> GroupDegreeProfile:
    """Sample a k-anonymous group profile whose expanded sequence fails.

    Used by the repair experiments: sizes are a random composition of n
    into floor(n/k) parts of at least k, degrees are uniform on [0, n-1],
    and realizable draws are rejected.
    """
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}]")
    m = n // k
    while True:
        sizes = [k] * m
        for _ in range(n - m * k):
            sizes[int(rng.integers(0, m))] += 1
        delta = rng.integers(0, n, size=m)
        profile = GroupDegreeProfile(tuple(int(x) for x in delta), tuple(sizes))
        if not is_realizable(profile.expanded()):
            return profile
