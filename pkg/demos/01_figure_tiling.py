"""
Tiling expansion of a two-cell line
===================================

Four tiles, one top line, and the unique bottom line that a full
square forces.
"""

from owfkit import tiling

tiles = tiling.figure_tiles()
print(tiling.format_tileset(tiles))

top = (tiles.index_of("T1"), tiles.index_of("T2"))

# each empty cell sees its placed neighbours; here every choice is forced
trace = []
tiling.expand(tiling.Board.with_top(top), tiles, order="row", trace=trace)
for visit in trace:
    print(visit)

bottom, _ = tiling.tiling_expansion(top, tiles)
print("top   :", tiling.format_line(top, tiles))
print("bottom:", tiling.format_line(bottom, tiles))

# the sweep order does not change the result
for order in ("row", "col"):
    print(order, tiling.format_line(tiling.tiling_expansion(top, tiles, order)[0], tiles))
