#!/usr/bin/env python3
"""Tour of the combinatorial layer: admissibility, cycles, amalgamation,
and symbol symmetries for a few small transition matrices."""

import numpy as np

from markovgibbs import (
    TransitionMatrix,
    admissible_words,
    automorphisms,
    counterexample_matrix,
    cycle_intersection_condition,
    is_primitive,
    simple_cycles,
    structure,
    total_amalgamation,
)


def describe(name, matrix):
    print(f"=== {name} ===")
    print(matrix.entries)
    print("primitive:", is_primitive(matrix))
    st = structure(matrix)
    print("in-degrees:", st.in_degrees)
    print("branch symbols (in-degree >= 2):", sorted(st.branch_symbols))
    print("branch edges:", sorted(st.branch_edges, key=lambda e: (e[1], e[0])))
    print("words of length 3:", admissible_words(matrix, 3))
    cycles = simple_cycles(matrix)
    print("simple cycles:", ["".join(map(str, c)) for c in cycles])
    holds, violations = cycle_intersection_condition(matrix)
    print("cycles pairwise intersect with edge-count ratios < 2:", holds)
    if not holds:
        first = violations[0]
        print("  first violating pair:", first[0], first[1])
    reduced, mapping = total_amalgamation(matrix)
    if reduced.n == matrix.n:
        print("total amalgamation: already a fixed point")
    else:
        print(f"total amalgamation: {matrix.n} -> {reduced.n} symbols, map {mapping}")
    result = automorphisms(matrix)
    print(f"symbol permutations: {len(result.permutations)} ({result.status})")
    print()


describe("four-symbol non-rigidity base", counterexample_matrix())
describe("golden mean shift", TransitionMatrix([[0, 1], [1, 1]]))
describe("full shift on two symbols", TransitionMatrix(np.ones((2, 2), dtype=int)))
describe("full shift on three symbols", TransitionMatrix(np.ones((3, 3), dtype=int)))
