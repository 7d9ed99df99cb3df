"""
Multimedian running time
========================

Total inverter calls to solve k instances, median over repetitions.
"""

from fractions import Fraction as F

from owfkit import vegas

k = 16
for p in (1.0, 0.5, 0.25):
    res = vegas.multimedian(lambda rng: None, vegas.coin_inverter(p), k, 101, seed=7)
    print(f"p={p}: MT={res.value}  (k/p = {k / p})")

# a family where a fraction eps of instances is slow
eps, t0 = F(1, 8), 1000
kk = vegas.planted_k(2, eps)
res = vegas.multimedian(vegas.planted_family(float(eps)), vegas.planted_inverter(t0), kk, 101, seed=3)
print(f"planted, k={kk}: MT={res.value}")
