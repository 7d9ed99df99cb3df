"""Exact measures on {0..N}, perfect rounding to dyadic cumulatives, and the
m-encoding under which a rounded measure looks nearly uniform.

Cumulative values are exclusive: mu(x) is the mass of {0..x-1}, with
mu(0) = 0 and mu(N+1) = 1.  Everything is exact; no floats anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Optional, Sequence

from .tiling import ParseError


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """numerator / 2**precision, kept in lowest terms."""

    numerator: int
    precision: int

    def __post_init__(self):
        if self.numerator < 0 or self.precision < 0:
            raise ValueError("dyadics here are non-negative with non-negative precision")
        if self.precision > 0 and self.numerator % 2 == 0:
            raise ValueError(f"{self.numerator}/2^{self.precision} is not in canonical form")

    @classmethod
    def make(cls, numerator: int, precision: int) -> Dyadic:
        if numerator == 0:
            return cls(0, 0)
        while precision > 0 and numerator % 2 == 0:
            numerator //= 2
            precision -= 1
        return cls(numerator, precision)

    @classmethod
    def of(cls, q) -> Dyadic:
        q = Fraction(q)
        d = q.denominator
        if d & (d - 1):
            raise ValueError(f"{q} is not a dyadic rational")
        return cls.make(q.numerator, d.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.precision)

    def scaled(self, precision: int) -> int:
        """Numerator over 2**precision (precision must be at least ours)."""
        return self.numerator << (precision - self.precision)

    def __lt__(self, other: Dyadic) -> bool:
        p = max(self.precision, other.precision)
        return self.scaled(p) < other.scaled(p)

    def __str__(self) -> str:
        return str(self.value)


def shortest_dyadic_between(lo: Fraction, hi: Fraction) -> Dyadic:
    """Shortest dyadic strictly inside (lo, hi), trying precisions 0, 1, 2, ...

    At a given precision the smallest fitting candidate is taken, which is
    the only one at the shortest precision anyway.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    k = 0
    while True:
        j = math.floor(lo * (1 << k)) + 1
        if Fraction(j, 1 << k) < hi:
            return Dyadic.make(j, k)
        k += 1


def _shortest_scaled(lo: int, hi: int, precision: int) -> Optional[int]:
    """Integer version of shortest_dyadic_between for numerators over
    2**precision; returns the numerator, or None if the interval is empty."""
    if lo + 1 >= hi:
        return None
    for k in range(precision + 1):
        step = 1 << (precision - k)
        j = (lo // step + 1) * step
        if j < hi:
            return j
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Measure:
    """Densities mu'(0..N) summing to one."""

    densities: tuple[Fraction, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        ds = tuple(Fraction(d) for d in self.densities)
        object.__setattr__(self, "densities", ds)
        if not ds:
            raise ValueError("a measure needs a non-empty domain")
        if any(d < 0 for d in ds):
            raise ValueError("densities must be non-negative")
        if sum(ds) != 1:
            raise ValueError(f"densities sum to {sum(ds)}, not 1")

    @property
    def N(self) -> int:
        return len(self.densities) - 1

    def __len__(self) -> int:
        return len(self.densities)

    def cumulative(self) -> tuple[Fraction, ...]:
        """mu(0), ..., mu(N+1)."""
        out, s = [Fraction(0)], Fraction(0)
        for d in self.densities:
            s += d
            out.append(s)
        return tuple(out)


@dataclass(frozen=True)
class RoundedDistribution:
    """Dyadic cumulative values mu1(1..N); the endpoints 0 and 1 are implied."""

    values: tuple[Dyadic, ...]

    @property
    def N(self) -> int:
        return len(self.values)

    @cached_property
    def _cumulative(self) -> tuple[Dyadic, ...]:
        return (Dyadic(0, 0),) + self.values + (Dyadic(1, 0),)

    @cached_property
    def _densities(self) -> tuple[Fraction, ...]:
        c = self._cumulative
        return tuple(c[x + 1].value - c[x].value for x in range(self.N + 1))

    @cached_property
    def precision(self) -> int:
        return max((v.precision for v in self.values), default=0)

    @cached_property
    def scaled(self) -> tuple[int, ...]:
        """mu1(0..N+1) as numerators over 2**precision."""
        p = self.precision
        return tuple(v.scaled(p) for v in self._cumulative)

    @cached_property
    def _code_lengths(self) -> tuple[Optional[int], ...]:
        c, p = self.scaled, self.precision
        out = []
        for x in range(self.N + 1):
            d = c[x + 1] - c[x]
            out.append(p - d.bit_length() + 1 if d > 0 and d & (d - 1) == 0 else None)
        return tuple(out)

    def cumulative(self) -> tuple[Dyadic, ...]:
        """mu1(0), ..., mu1(N+1)."""
        return self._cumulative

    def densities(self) -> tuple[Fraction, ...]:
        return self._densities

    def as_measure(self) -> Measure:
        return Measure(self.densities())

    @classmethod
    def from_measure(cls, m: Measure) -> RoundedDistribution:
        """Read a measure's own cumulative values as a rounding (they must be dyadic)."""
        return cls(tuple(Dyadic.of(v) for v in m.cumulative()[1:-1]))


# ---------------------------------------------------------------------------
# Rounding


def _code_length(p: Fraction) -> int:
    """ceil(log2(1/p)) + 1 for 0 < p <= 1."""
    c = -(-p.denominator // p.numerator)
    return (c - 1).bit_length() + 1


def perfect_round(m: Measure) -> RoundedDistribution:
    """Perfectly rounded version of ``m`` with mu1'(x) >= mu'(x)/4.

    Each point gets the Gilbert-Moore codeword of its interval midpoint
    (ceil(log2 1/p) + 1 bits, prefix-free and in domain order).  Collapsing
    the one-child nodes of their trie leaves a full binary tree whose
    leaves, read left to right, partition [0, 1) into aligned dyadic
    intervals no shorter than the codewords promised.
    """
    if m.N < 1:
        raise ValueError("rounding needs at least two domain points")
    if any(d == 0 for d in m.densities):
        raise ValueError("zero densities cannot be perfectly rounded (values must strictly increase)")
    cum = m.cumulative()
    codes = []
    for x, p in enumerate(m.densities):
        ell = _code_length(p)
        mid = cum[x] + p / 2
        codes.append((mid.numerator << ell) // mid.denominator)
    lengths = [_code_length(p) for p in m.densities]

    depth = [0] * len(codes)

    def bit(x: int, i: int) -> int:
        return (codes[x] >> (lengths[x] - 1 - i)) & 1

    # iterative: (first, last, trie depth, tree depth)
    stack = [(0, len(codes) - 1, 0, 0)]
    while stack:
        a, b, i, d = stack.pop()
        if a == b:
            depth[a] = d
            continue
        # codewords are sorted, so the 1-branch is a suffix of [a, b]
        split = next((x for x in range(a, b + 1) if bit(x, i)), b + 1)
        if split == a or split == b + 1:
            stack.append((a, b, i + 1, d))
        else:
            stack.append((a, split - 1, i + 1, d + 1))
            stack.append((split, b, i + 1, d + 1))

    values, lo = [], 0
    top = max(depth)
    for d in depth[:-1]:
        lo += 1 << (top - d)
        values.append(Dyadic.make(lo, top))
    return RoundedDistribution(tuple(values))


# ---------------------------------------------------------------------------
# Checking


@dataclass
class CheckReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "pass" if self.ok else "fail\n" + "\n".join(self.violations)


def check_perfectly_rounded(r: RoundedDistribution, m: Optional[Measure] = None,
                            max_report: int = 20) -> CheckReport:
    """Verify monotonicity, shortest-in-interval at every interior point,
    power-of-two densities and (if ``m`` is given) mu1' >= mu'/4."""
    rep = CheckReport()

    def bad(msg: str) -> None:
        if len(rep.violations) < max_report:
            rep.violations.append(msg)
        elif len(rep.violations) == max_report:
            rep.violations.append("...")

    if m is not None and len(m) != r.N + 1:
        bad(f"domain sizes differ: measure has {len(m)} points, rounding has {r.N + 1}")
        return rep
    cum = r.cumulative()
    prec = max(c.precision for c in cum)
    ints = [c.scaled(prec) for c in cum]
    for x in range(r.N + 1):
        if ints[x + 1] <= ints[x]:
            bad(f"x={x}: mu1 not strictly increasing ({cum[x]} -> {cum[x + 1]})")
    for x in range(1, r.N + 1):
        want = _shortest_scaled(ints[x - 1], ints[x + 1], prec)
        if want is not None and want != ints[x]:
            bad(f"x={x}: mu1={cum[x]} but {Dyadic.make(want, prec)} is shorter inside ({cum[x - 1]}, {cum[x + 1]})")
    for x in range(r.N + 1):
        gap = ints[x + 1] - ints[x]
        if gap > 0 and gap & (gap - 1):
            bad(f"x={x}: density {Fraction(gap, 1 << prec)} is not a power of two")
    if m is not None:
        for x, (d1, d) in enumerate(zip(r.densities(), m.densities)):
            if 4 * d1 < d:
                bad(f"x={x}: density {d1} below a quarter of {d}")
    return rep


# ---------------------------------------------------------------------------
# m-encoding


def code_length(r: RoundedDistribution, x: int) -> int:
    """ell(x) = -log2 mu1'(x); raises if the density is not a power of two."""
    if not 0 <= x <= r.N:
        raise ValueError(f"x={x} outside 0..{r.N}")
    ell = r._code_lengths[x]
    if ell is None:
        raise ValueError(f"density {r.densities()[x]} at x={x} is not a power of two")
    return ell


def m_encode(r: RoundedDistribution, x: int) -> str:
    """The ell(x)-bit binary expansion of mu1(x+1), for x in 0..N-1.

    The last point has mu1(N+1) = 1, which has no ell-bit expansion.
    """
    if not 0 <= x < r.N:
        raise ValueError(f"x={x} is not encodable (encodable points are 0..{r.N - 1})")
    ell = code_length(r, x)
    shift = r.precision - ell
    v = r.scaled[x + 1]
    if v & ((1 << shift) - 1):
        raise ValueError(f"mu1({x + 1})={r.cumulative()[x + 1]} has more than {ell} bits")
    return format(v >> shift, f"0{ell}b") if ell else ""


def m_decode_counted(r: RoundedDistribution, bits: str) -> tuple[int, int]:
    """(x, comparisons) by binary search for mu1(x+1) == 0.bits."""
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a non-empty bit string: {bits!r}")
    t, extra = int(bits, 2), len(bits) - r.precision
    if extra > 0:
        if t & ((1 << extra) - 1):
            raise ValueError(f"no domain point has code {bits}")
        t >>= extra
    else:
        t <<= -extra
    vals = r.scaled
    # mu1(x+1) for x in 0..N-1 sits at vals[x + 1]
    lo, hi, n = 0, r.N - 1, 0
    while lo <= hi:
        mid = (lo + hi) // 2
        n += 1
        v = vals[mid + 1]
        if v == t:
            x = mid
            if code_length(r, x) != len(bits):
                break
            return x, n
        if v < t:
            lo = mid + 1
        else:
            hi = mid - 1
    raise ValueError(f"no domain point has code {bits}")


def m_decode(r: RoundedDistribution, bits: str) -> int:
    return m_decode_counted(r, bits)[0]


def m_decode_linear(r: RoundedDistribution, bits: str) -> int:
    """Reference decoder: try every point."""
    for x in range(r.N):
        if m_encode(r, x) == bits:
            return x
    raise ValueError(f"no domain point has code {bits}")


# ---------------------------------------------------------------------------
# Example measures


def uniform_measure(size: int) -> Measure:
    return Measure(tuple(Fraction(1, size) for _ in range(size)), name=f"uniform-{size}")


def graph_uniform(n: int) -> Measure:
    """All 2^(n^2) directed graphs (adjacency bit masks) equally likely."""
    size = 1 << (n * n)
    return Measure(tuple(Fraction(1, size) for _ in range(size)), name=f"graph-mu1-n{n}")


def graph_edge_uniform(n: int) -> Measure:
    """Edge count uniform on 0..n^2, then the edge set uniform given its size."""
    e = n * n
    per_count = [Fraction(1, (e + 1) * math.comb(e, k)) for k in range(e + 1)]
    return Measure(tuple(per_count[bin(g).count("1")] for g in range(1 << e)),
                   name=f"graph-mu2-n{n}")


def edge_count_mass(m: Measure, n: int, k: int) -> Fraction:
    """Mass a graph measure puts on graphs with exactly k edges."""
    return sum((p for g, p in enumerate(m.densities) if bin(g).count("1") == k), Fraction(0))


def edge_count_mass_exact(n: int, k: int) -> tuple[Fraction, Fraction]:
    """(mu1, mu2) mass of graphs with k edges, by counting rather than enumeration."""
    e = n * n
    return Fraction(math.comb(e, k), 1 << e), Fraction(1, e + 1)


def geometric_measure(N: int) -> Measure:
    """2^-(x+1) for x < N and the leftover 2^-N on x = N."""
    ds = [Fraction(1, 1 << (x + 1)) for x in range(N)] + [Fraction(1, 1 << N)]
    return Measure(tuple(ds), name=f"geometric-{N}")


def length_weighted_measure(max_len: int) -> Measure:
    """Binary strings of length 1..max_len in (length, value) order; length n
    gets weight 1/(n(floor(log2 n)+1))^2, spread evenly over its strings."""
    weights = [Fraction(1, (n * (n.bit_length())) ** 2) for n in range(1, max_len + 1)]
    total = sum(weights)
    ds = []
    for n, w in zip(range(1, max_len + 1), weights):
        ds.extend([w / total / (1 << n)] * (1 << n))
    return Measure(tuple(ds), name=f"length-weighted-{max_len}")


def example_measures(max_vertices: int = 4) -> dict[str, Measure]:
    out: dict[str, Measure] = {}
    for n in range(1, max_vertices + 1):
        for mk in (graph_uniform, graph_edge_uniform):
            m = mk(n)
            out[m.name] = m
    for m in (geometric_measure(12), length_weighted_measure(6), uniform_measure(4)):
        out[m.name] = m
    return out


# ---------------------------------------------------------------------------
# Text format


def parse_measure(text: str, source: str = "<measure>") -> Measure:
    """``measure <size>`` then one ``<x> <p>/<q>`` line per point; '#' comments."""
    size = None
    dens: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if size is None:
            if toks[0] != "measure" or len(toks) != 2 or not toks[1].isdigit():
                raise ParseError("expected 'measure <size>'", lineno, col, source)
            size = int(toks[1])
            if size < 1:
                raise ParseError("domain size must be positive", lineno, col, source)
            continue
        if len(toks) != 2:
            raise ParseError("expected '<x> <p>/<q>'", lineno, col, source)
        if not toks[0].isdigit():
            raise ParseError(f"bad point {toks[0]!r}", lineno, col, source)
        x = int(toks[0])
        vcol = line.index(toks[1], col - 1 + len(toks[0])) + 1
        try:
            p = Fraction(toks[1])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad probability {toks[1]!r}", lineno, vcol, source) from None
        if not 0 <= x < size:
            raise ParseError(f"point {x} outside 0..{size - 1}", lineno, col, source)
        if x in dens:
            raise ParseError(f"point {x} given twice", lineno, col, source)
        if p < 0:
            raise ParseError("negative probability", lineno, vcol, source)
        dens[x] = p
    if size is None:
        raise ParseError("missing 'measure <size>' header", 1, 1, source)
    ds = tuple(dens.get(x, Fraction(0)) for x in range(size))
    if sum(ds) != 1:
        raise ParseError(f"probabilities sum to {sum(ds)}, not 1", lineno, 1, source)
    return Measure(ds)


def format_measure(m: Measure) -> str:
    lines = [f"measure {len(m)}"]
    lines += [f"{x} {p.numerator}/{p.denominator}" for x, p in enumerate(m.densities)]
    return "\n".join(lines) + "\n"


def rounding_rows(r: RoundedDistribution) -> list[tuple[int, Fraction, Fraction, str]]:
    """(x, mu1(x), mu1'(x), m-code or '') for every point."""
    cum = r.cumulative()
    dens = r.densities()
    return [(x, cum[x].value, dens[x], m_encode(r, x) if x < r.N else "")
            for x in range(r.N + 1)]


def random_measure(rng, size: int, max_den: int = 64) -> Measure:
    """Positive random densities with small denominators (``rng`` is a
    ``random.Random``)."""
    raw = [Fraction(rng.randint(1, max_den), rng.randint(1, max_den)) for _ in range(size)]
    total = sum(raw)
    return Measure(tuple(p / total for p in raw))


def dyadic_values(ds: Sequence[Fraction]) -> RoundedDistribution:
    """Rounded distribution with the given dyadic densities."""
    return RoundedDistribution.from_measure(Measure(tuple(ds)))
