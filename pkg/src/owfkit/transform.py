"""Hash-based transforms that make inversion problems length-preserving and
nearly sibling-free, with exhaustive preimage statistics as oracles."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .gf2 import FieldElement, add, mul, truncate

MAX_EXHAUSTIVE_WIDTH = 12


def _check_bits(s: str, n: int, what: str = "input") -> None:
    if len(s) != n or set(s) - {"0", "1"}:
        raise ValueError(f"{what} must be a {n}-bit string, got {s!r}")


def to_field(s: str) -> FieldElement:
    return FieldElement(len(s), int(s, 2))


@dataclass(frozen=True)
class CandidateFunction:
    """A length-preserving map on n-bit strings."""

    name: str
    width: int
    evaluator: Callable[[str], str]

    def __call__(self, w: str) -> str:
        _check_bits(w, self.width)
        y = self.evaluator(w)
        _check_bits(y, self.width, "output")
        return y


@dataclass(frozen=True)
class SeparatedOutput:
    image: str
    k: int
    a: FieldElement
    tag: str

    def __post_init__(self):
        if len(self.tag) != self.k:
            raise ValueError("tag length must equal k")
        if self.a.width != len(self.image):
            raise ValueError("a must have the image's width")

    def serialize(self) -> str:
        """image | k in bit_length(n) bits | a | tag."""
        n = len(self.image)
        return self.image + format(self.k, f"0{n.bit_length()}b") + self.a.bits() + self.tag


def sibling_separate(f: CandidateFunction, w: str, k: int, a: FieldElement) -> SeparatedOutput:
    """(f(w), k, a, first k bits of a*w)."""
    n = f.width
    if not 0 <= k <= n:
        raise ValueError(f"k must be in 0..{n}, got {k}")
    if a.width != n:
        raise ValueError(f"a has width {a.width}, expected {n}")
    image = f(w)
    return SeparatedOutput(image, k, a, truncate(mul(a, to_field(w)), k))


def compress_to_length(out: SeparatedOutput, c: FieldElement) -> str:
    """Serialize, multiply by the public constant ``c`` in the wide field and
    keep the top n bits."""
    s = out.serialize()
    if c.width != len(s):
        raise ValueError(f"c has width {c.width}, the serialization has {len(s)} bits")
    return truncate(mul(c, to_field(s)), len(out.image))


def separated_width(n: int, k: int) -> int:
    return 2 * n + n.bit_length() + k


def pair_hash(f: CandidateFunction, a: FieldElement, x: str) -> tuple[FieldElement, str]:
    """g(a, x) = (a, f(x) + a*x)."""
    if a.width != f.width:
        raise ValueError(f"a has width {a.width}, expected {f.width}")
    y = add(to_field(f(x)), mul(a, to_field(x)))
    return a, y.bits()


def pair_hash_function(f: CandidateFunction) -> CandidateFunction:
    """g as a length-preserving map on 2n-bit strings a|x."""
    n = f.width

    def g(s: str) -> str:
        a, y = pair_hash(f, to_field(s[:n]), s[n:])
        return a.bits() + y

    return CandidateFunction(f"pair({f.name})", 2 * n, g)


# ---------------------------------------------------------------------------
# Exhaustive statistics


def _domain(n: int):
    return (format(i, f"0{n}b") for i in range(1 << n))


def preimage_counts(evaluator: Callable[[str], str], n: int) -> Counter:
    """Image -> number of preimages, over the whole n-bit domain."""
    if not 0 <= n <= MAX_EXHAUSTIVE_WIDTH:
        raise ValueError(f"exhaustive width must be at most {MAX_EXHAUSTIVE_WIDTH}, got {n}")
    return Counter(evaluator(w) for w in _domain(n))


@dataclass(frozen=True)
class SiblingStats:
    width: int
    histogram: dict  # multiplicity -> number of images with it
    mean_siblings: Fraction

    def rows(self) -> list[tuple[int, int]]:
        return sorted(self.histogram.items())


def sibling_stats(evaluator: Callable[[str], str], n: int) -> SiblingStats:
    """Exact preimage-multiplicity histogram and mean number of other
    preimages per input."""
    counts = preimage_counts(evaluator, n)
    hist = Counter(counts.values())
    pairs = sum(m * (m - 1) * c for m, c in hist.items())
    return SiblingStats(n, dict(sorted(hist.items())), Fraction(pairs, 1 << n))


def sibling_count(evaluator: Callable[[str], str], n: int, w: str) -> int:
    y = evaluator(w)
    return sum(1 for v in _domain(n) if evaluator(v) == y) - 1


def tag_siblings(f: CandidateFunction, w: str, k: int, a: FieldElement) -> int:
    """Siblings of ``w`` under f that also share its k-bit tag under a."""
    out = sibling_separate(f, w, k, a)
    return sum(
        1 for v in _domain(f.width)
        if v != w and f(v) == out.image and sibling_separate(f, v, k, a).tag == out.tag
    )


def hash_collisions(n: int, w: int, w2: int, k: int | None = None) -> int:
    """Number of multipliers a for which a*w and a*w2 agree (on the top k bits)."""
    k = n if k is None else k
    x, y = FieldElement(n, w), FieldElement(n, w2)
    return sum(
        1 for a in range(1 << n)
        if truncate(mul(FieldElement(n, a), x), k) == truncate(mul(FieldElement(n, a), y), k)
    )


@dataclass(frozen=True)
class Security:
    """Exhaustive security of inverting f(w) for uniform w by uniform guessing:
    S(x) = 2^n / |f^-1(x)|."""

    name: str
    width: int
    mean_log2: float
    mean: Fraction
    max_log2: float


def security(f: CandidateFunction) -> Security:
    n = f.width
    counts = preimage_counts(f, n)
    size = 1 << n
    # every preimage of x is itself a uniform draw of w
    mean = sum((Fraction(size, m) * m for m in counts.values()), Fraction(0)) / size
    mean_log2 = sum(m * (n - math.log2(m)) for m in counts.values()) / size
    max_log2 = n - math.log2(min(counts.values()))
    return Security(f.name, n, mean_log2, mean, max_log2)


# ---------------------------------------------------------------------------
# Stock candidate functions


def _square(n: int) -> Callable[[str], str]:
    return lambda w: mul(to_field(w), to_field(w)).bits()


STOCK_FUNCTIONS: dict[str, Callable[[int], Callable[[str], str]]] = {
    "identity": lambda n: (lambda w: w),
    "zero": lambda n: (lambda w: "0" * n),
    "complement": lambda n: (lambda w: w.translate(str.maketrans("01", "10"))),
    "square": _square,
    "shift": lambda n: (lambda w: "0" + w[:-1]),
    "parity": lambda n: (lambda w: "0" * (n - 1) + str(w.count("1") % 2)),
}


def stock_function(name: str, n: int) -> CandidateFunction:
    try:
        make = STOCK_FUNCTIONS[name]
    except KeyError:
        raise ValueError(f"unknown function {name!r}; known: {', '.join(STOCK_FUNCTIONS)}") from None
    if n < 1:
        raise ValueError("width must be positive")
    return CandidateFunction(name, n, make(n))
