"""
Perfect rounding and m-codes
============================

Round a small measure to dyadic cumulative values, then encode points
by those values.
"""

from fractions import Fraction as F

from owfkit import rounding

m = rounding.Measure((F(1, 3), F(1, 6), F(1, 2)), name="three points")
r = rounding.perfect_round(m)
print("densities:", [str(d) for d in m.densities])
print("rounded  :", [str(d) for d in r.densities()])
print(rounding.check_perfectly_rounded(r, m))

for x in range(r.N):
    bits = rounding.m_encode(r, x)
    print(x, bits, "->", rounding.m_decode(r, bits))

# a geometric measure: code lengths follow -log2 of the density
g = rounding.geometric_measure(12)
rg = rounding.perfect_round(g)
for x in range(rg.N):
    print(x, g.densities[x], rounding.m_encode(rg, x))
