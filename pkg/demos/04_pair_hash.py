"""
Sibling statistics under the pair hash
======================================

g(a, x) = (a, f(x) + a*x) over GF(2^n).  Whatever f is, the mean number
of siblings comes out the same.
"""

from owfkit import transform

n = 4
for name in transform.STOCK_FUNCTIONS:
    f = transform.stock_function(name, n)
    plain = transform.sibling_stats(f, n)
    g = transform.pair_hash_function(f)
    paired = transform.sibling_stats(g, 2 * n)
    print(f"{name:10s} f: {str(plain.mean_siblings):>6s}   g: {paired.mean_siblings}")

# a second multiplier collides two distinct inputs only at a = 0
print("collisions of 3 and 5:", transform.hash_collisions(n, 3, 5))
