"""
From a Turing machine to a tile set
===================================

Compile the bit-flipping machine, then read its output back off the
bottom row of a forced tiling.
"""

from owfkit import tableau, tiling, turing

m = turing.not_machine()
cr = tableau.compile_to_tiles(m)
print(f"{m.name}: {len(cr.tiles)} tiles")

word, width = "0101", 8
top = cr.encode(word, width)
bottom, _ = tiling.tiling_expansion(top, cr.tiles)

print("input        :", word)
print("tiling output:", cr.decode(bottom))
print("direct run   :", turing.tm_run(m, word, width - 1))

# the same check, over every short word
rep = tableau.check_reduction(cr, max_len=3, max_width=5, alphabet="01")
print(sum(r.ok for r in rep), "of", len(rep), "instances agree")
