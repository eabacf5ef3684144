#!/usr/bin/env python3
"""From an edge potential to its Gibbs measure.

Stochasticize a random potential, read off exact cylinder measures, check
the defining Gibbs inequalities at desk scale, and test cohomology."""

import math

import numpy as np

from markovgibbs import (
    Potential,
    cohomologous_with_constant,
    counterexample_matrix,
    cylinder_measure,
    gibbs_ratio_bounds,
    ks_entropy,
    normalize,
)

matrix = counterexample_matrix()
rng = np.random.default_rng(0)
potential = Potential(matrix, {e: rng.uniform(-1.0, 1.0) for e in matrix.edges})

chain, data = normalize(potential)
print("Perron root:", data.root, " pressure:", math.log(data.root))
print("left eigenvector:", data.left)
print("stochastic matrix:")
print(chain.q)
print("stationary vector:", chain.pi, " sum:", chain.pi.sum())

print("\ncylinder measures")
for word in [(1,), (2,), (1, 2), (1, 3, 2), (1, 3, 2, 1)]:
    print(f"  mu([{''.join(map(str, word))}]) = {cylinder_measure(chain, word):.12f}")

level = sum(cylinder_measure(chain, w) for w in
            [(i, j) for i in range(1, 5) for j in range(1, 5) if matrix.has_edge(i, j)])
print("sum over all length-2 cylinders:", level)

print("\nKolmogorov-Sinai entropy:", ks_entropy(chain), "nats per symbol")

lo, hi = gibbs_ratio_bounds(chain, potential, math.log(data.root), max_len=10)
print("Gibbs ratio envelope over words of length <= 10:", (lo, hi))

# moving by a coboundary plus a constant does not move the measure
phi = rng.uniform(-1.0, 1.0, size=4)
moved = Potential(
    matrix,
    {(i, j): v + phi[j - 1] - phi[i - 1] + 0.25 for (i, j), v in potential.values.items()},
)
same, _ = cohomologous_with_constant(potential, moved)
moved_chain, _ = normalize(moved)
print("\ncoboundary-shifted potential cohomologous:", same)
print("largest difference between the two stochastic matrices:",
      np.abs(chain.q - moved_chain.q).max())
