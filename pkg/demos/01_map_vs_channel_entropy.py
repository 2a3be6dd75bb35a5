"""
Map entropy versus channel entropy
==================================

Two numbers describe how noisy a channel is. The map entropy is the von
Neumann entropy of the Choi-Jamiolkowski state. The channel entropy is
``log d`` minus the largest relative entropy between the channel and the
completely depolarizing channel, optimized over entangled pure inputs.
The gap ``H^K - log d - H`` is never negative.
"""

import math

import numpy as np

import chanent as ce

# Extremes first: a unitary channel and the completely depolarizing one.
u = ce.unitary(np.array([[0, 1], [1, 0]], dtype=complex))
for name, phi in [("unitary", u), ("depolarizing", ce.depolarizing(2))]:
    rep = ce.lemma1_gap(phi, seed=1)
    print(f"{name:14s} H^K = {rep.h_map:+.6f}  H = {rep.h_channel:+.6f}  gap = {rep.gap:.2e}")

# A unitary channel has negative channel entropy, -log d.
print("-log 2 =", -math.log(2))

# Amplitude damping is not unital, so the gap can be strictly positive.
for gamma in [0.1, 0.5, 0.9]:
    rep = ce.lemma1_gap(ce.amplitude_damping(gamma), seed=1)
    print(f"amplitude damping {gamma:.1f}: gap = {rep.gap:.6f}, best Schmidt vector {rep.optimizer.schmidt.round(4)}")

# Random channels from the Wishart ensemble. The optimizer reports how many
# restarts agreed on the maximum.
for d in (2, 3):
    phi = ce.random_channel(d, seed=7)
    rep = ce.lemma1_gap(phi, seed=7)
    vals = [t.value for t in rep.optimizer.traces]
    print(f"random d={d}: gap = {rep.gap:.6f}, restart spread = {max(vals) - min(vals):.1e}")
