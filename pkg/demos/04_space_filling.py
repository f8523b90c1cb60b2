"""Space-filling baselines side by side.

Maximin spreads points apart, minimax shrinks the largest hole, and the
centered L2-discrepancy makes the empirical distribution look uniform on
the unit cube.  All three are greedy: one point at a time, never revisited.
"""

import numpy as np
from scipy.stats import qmc

from manifold_doe.baselines import (
    centered_l2_discrepancy,
    covering_radius,
    l2_discrepancy_next,
    maximin_next,
    minimax_next,
    random_next,
)

rng = np.random.default_rng(0)
pool = rng.uniform(0, 1, (300, 2))


def greedy(pick, k=15):
    chosen = []
    for _ in range(k):
        chosen.append(pick(chosen))
    return chosen


designs = {
    "maximin": greedy(lambda c: maximin_next(pool, c)),
    "minimax": greedy(lambda c: minimax_next(pool, c)),
    "l2": greedy(lambda c: l2_discrepancy_next(pool, c)),
    "random": greedy(lambda c: random_next(len(pool), c, rng)),
}

print("design    min spacing  covering radius  CD^2")
for name, idx in designs.items():
    pts = pool[idx]
    spacing = min(np.linalg.norm(a - b) for i, a in enumerate(pts) for b in pts[i + 1:])
    print(f"{name:8s}  {spacing:10.3f}  {covering_radius(pool, idx):14.3f}  {centered_l2_discrepancy(pts):.5f}")

# the discrepancy agrees with scipy's implementation
pts = pool[designs["l2"]]
print("\nscipy check:", np.isclose(centered_l2_discrepancy(pts), qmc.discrepancy(pts, method="CD")))
