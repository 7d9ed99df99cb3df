"""Arithmetic in GF(2^n) and the multiplicative universal hash family.

Elements are n-bit integers read as polynomials over GF(2): bit i is the
coefficient of x^i.  Each width uses the numerically smallest irreducible
polynomial of that degree as its modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_WIDTH = 64


def clmul(a: int, b: int) -> int:
    """Carry-less product of two polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    """Remainder of polynomial ``a`` modulo ``m`` (m != 0)."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(clmul(a, b), m)


def is_irreducible_trial(m: int) -> bool:
    """Irreducibility by trial division with every polynomial of degree <= n/2.

    Exponential in n; fine up to n of about 24.
    """
    n = m.bit_length() - 1
    if n < 1:
        return False
    for d in range(2, 1 << (n // 2 + 1)):
        if poly_mod(m, d) == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(m: int) -> bool:
    """Rabin's irreducibility test: m divides x^(2^n) - x and shares no
    factor with x^(2^(n/p)) - x for each prime p dividing n."""
    n = m.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True

    def frob(k: int) -> int:
        # x^(2^k) mod m by repeated squaring
        y = 0b10
        for _ in range(k):
            y = _mulmod(y, y, m)
        return y

    if frob(n) != poly_mod(0b10, m):
        return False
    for p in _prime_factors(n):
        if poly_gcd(m, frob(n // p) ^ 0b10) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def reduction_polynomial(n: int) -> int:
    """Smallest irreducible polynomial of degree ``n``, as a coefficient mask."""
    if not 1 <= n <= MAX_WIDTH:
        raise ValueError(f"width must be in 1..{MAX_WIDTH}, got {n}")
    for m in range(1 << n, 1 << (n + 1)):
        if is_irreducible(m):
            return m
    raise AssertionError("unreachable: irreducibles exist in every degree")


@dataclass(frozen=True)
class FieldElement:
    width: int
    value: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in 1..{MAX_WIDTH}, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    def __add__(self, other: FieldElement) -> FieldElement:
        return add(self, other)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mul(self, other)

    def __int__(self) -> int:
        return self.value

    def bits(self) -> str:
        return format(self.value, f"0{self.width}b")


def _check_widths(a: FieldElement, b: FieldElement) -> None:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_widths(a, b)
    return FieldElement(a.width, a.value ^ b.value)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_widths(a, b)
    m = reduction_polynomial(a.width)
    return FieldElement(a.width, poly_mod(clmul(a.value, b.value), m))


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    q, db = 0, b.bit_length()
    while a.bit_length() >= db:
        shift = a.bit_length() - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse via the extended Euclidean algorithm."""
    if a.value == 0:
        raise ZeroDivisionError("zero has no inverse")
    m = reduction_polynomial(a.width)
    r0, r1 = m, a.value
    s0, s1 = 0, 1
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ clmul(q, s1)
    return FieldElement(a.width, poly_mod(s0, m))


def hash(a: FieldElement, w: FieldElement) -> FieldElement:  # noqa: A001
    """Member ``a`` of the family h_a(w) = a*w."""
    return mul(a, w)


def truncate(y: FieldElement, k: int) -> str:
    """The ``k`` highest-degree coefficients of ``y`` as a bit string."""
    if not 0 <= k <= y.width:
        raise ValueError(f"k must be in 0..{y.width}, got {k}")
    return y.bits()[:k]


def mul_table(n: int) -> list[list[int]]:
    """Full multiplication table for width ``n`` (debugging aid)."""
    size = 1 << n
    m = reduction_polynomial(n)
    return [[poly_mod(clmul(a, b), m) for b in range(size)] for a in range(size)]
