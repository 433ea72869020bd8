"""Synthetic temporal graphs with tunable slice-to-slice correlation.

Slice 0 is an Erdos-Renyi draw; afterwards every node pair flips its state
(present or absent) independently with probability theta per step, giving
geometrically distributed edge lifetimes.  theta=0 freezes the first slice
forever, theta=1 alternates every pair with period two, and values in
between interpolate between strongly correlated and memoryless dynamics.
"""

from __future__ import annotations

import numpy as np

from .graph_core import TemporalGraph


def generate(
    n: int,
    T: int,
    theta: float,
    p0: float = 0.1,
    rng: np.random.Generator | None = None,
) -> TemporalGraph:
    """Sample a temporal graph with flip probability theta.

    Requires n >= 2, T >= 1, theta in [0, 1] and p0 in [0, 1].  Pass a
    seeded Generator for reproducible output.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if T < 1:
        raise ValueError("T must be >= 1")
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    if not 0.0 <= p0 <= 1.0:
        raise ValueError("p0 must lie in [0, 1]")
    if rng is None:
        rng = np.random.default_rng()
    iu, ju = np.triu_indices(n, k=1)
    state = rng.random(len(iu)) < p0
    slices = []
    for t in range(T):
        if t > 0:
            state = state ^ (rng.random(len(iu)) < theta)
        active = np.flatnonzero(state)
        slices.append(tuple(zip(iu[active].tolist(), ju[active].tolist())))
    return TemporalGraph(n=n, slices=tuple(slices))


DEFAULT_THETA_SWEEP = tuple(round(0.05 * i, 2) for i in range(11))
