#!/usr/bin/env python3
"""Weighted Motzkin paths and their probability measure.

A path of length L is an altitude sequence with steps in {-1, 0, +1}
staying nonnegative.  Each step is weighted by the altitude at its left
end (up / flat / down weight tables), the two endpoints carry extra
boundary weights, and normalizing gives a probability measure on paths.
This demo enumerates a small family, prints the measure, and checks it
against exact samples.
"""

import numpy as np

from motzkinq import QModelParams, WeightModel
from motzkinq.motzkin import (
    enumerate_paths,
    normalizing_constant,
    path_line,
    path_weight,
    sample_paths,
)

model = QModelParams(q=0.4, sigma=0.7, rho0=0.3, rho1=0.2)
wm = WeightModel.from_qmodel(model)
L = 3

print(f"model: {model}")
print(f"normalizing constant C_{L} =", normalizing_constant(L, wm))
print()

# the measure restricted to paths from altitude 1 to altitude 0
C = normalizing_constant(L, wm)
print(f"paths of length {L} from 1 to 0:")
for p in enumerate_paths(L, 1, 0):
    w = path_weight(p, wm)
    prob = wm.alpha(1) * wm.beta(0) * w / C
    print(f"  {path_line(p):12s} weight={w:10.6f} probability={prob:.6f}")
print()

# exact sampling agrees with those probabilities
draws = sample_paths(L, wm, 200_000, seed=42)
keys, counts = np.unique(draws, axis=0, return_counts=True)
print("most frequent sampled paths (200k exact draws):")
order = np.argsort(-counts)[:5]
for i in order:
    alts = ",".join(str(int(a)) for a in keys[i])
    print(f"  {alts:12s} frequency={counts[i] / draws.shape[0]:.6f}")
