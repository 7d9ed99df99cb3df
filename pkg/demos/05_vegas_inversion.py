"""
Inverting by sampling from a mixture of generators
==================================================

The figure instance has one preimage among sixteen lines.  A uniform
generator finds it with probability 1/16 per run.
"""

import itertools

from owfkit import tiling, vegas

tiles = tiling.figure_tiles()
lines = list(itertools.product(range(4), repeat=2))
image = (tiles.index_of("T3"), tiles.index_of("T4"))


def f(line):
    return tiling.tiling_expansion(line, tiles)[0]


reg = vegas.GeneratorRegistry((vegas.uniform_choice_program(lines, "lines"),))
inv = vegas.invert_optimal(f, image, reg, cap=1000, seed=0)
print("witness:", [tiles.tile_name(c) for c in inv.witness], "after", inv.runs, "runs")

freq = vegas.success_frequency(f, image, reg, 20_000, seed=5)
print(f"success rate {freq.rate:.4f}, expected {1 / 16:.4f}")

# buying time: a program that needs 2^j times its volume succeeds w.p. 2^-j
for j in range(5):
    t = 4 * 2 ** j
    dist, _ = vegas.exact_outcomes(vegas.normalize_to_l(vegas.work_program(t), t), None, 4)
    print(j, dist.get("done"))
