"""Las Vegas programs with a wagerable volume budget, mixtures of samplers,
optimal inversion by sampling, and the multimedian-time harness.

An L-program is a generator function ``body(x, budget)``.  It talks to the
runner only by yielding:

* ``STEP`` (or bare ``yield``): one unit of work, costs 1 volume;
* ``FLIP``: one unit of work that also returns a fair dice bit;
* ``Bet(v)``: free; stakes v of the remaining volume on the next dice bit
  and returns that bit (1 wins v, 0 loses v).

Returning a value emits it and costs 1 volume.  Any charge attempted with
no volume left aborts the run, as does a bad or oversized stake.
"""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Generator, Iterable, Optional, Sequence


class _Flip:
    def __repr__(self):
        return "FLIP"


STEP = None
FLIP = _Flip()


@dataclass(frozen=True)
class Bet:
    stake: int


@dataclass(frozen=True)
class LedgerEntry:
    stake: int
    dice: int
    volume: int  # remaining after settlement


class OutOfDice(Exception):
    """A fixed dice prefix was exhausted."""


class DiceStream:
    """Fair bits from a seeded generator, or from a fixed list; every bit
    handed out is recorded."""

    def __init__(self, seed: Optional[int] = None, bits: Optional[Sequence[int]] = None):
        self.seed = seed
        self._fixed = None if bits is None else list(bits)
        self._rng = random.Random(seed) if bits is None else None
        self.position = 0
        self.recorded: list[int] = []

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> DiceStream:
        return cls(bits=bits)

    def bit(self) -> int:
        if self._fixed is not None:
            if self.position >= len(self._fixed):
                raise OutOfDice
            b = self._fixed[self.position]
        else:
            b = self._rng.getrandbits(1)
        self.position += 1
        self.recorded.append(b)
        return b


class VolumeBudget:
    """Remaining volume plus the ledger of settled bets."""

    def __init__(self, volume: int):
        if volume < 0:
            raise ValueError("volume must be non-negative")
        self.remaining = volume
        self.ledger: list[LedgerEntry] = []
        self.steps = 0

    def charge(self) -> bool:
        if self.remaining == 0:
            return False
        self.remaining -= 1
        self.steps += 1
        return True

    def settle(self, stake: int, dice: int) -> None:
        self.remaining += stake if dice else -stake
        self.ledger.append(LedgerEntry(stake, dice, self.remaining))


Body = Callable[[Any, VolumeBudget], Generator]


@dataclass(frozen=True)
class LProgram:
    name: str
    body: Body = field(compare=False)


@dataclass(frozen=True)
class Output:
    value: Any
    remaining: int
    ledger: tuple[LedgerEntry, ...]
    steps: int


@dataclass(frozen=True)
class Abort:
    reason: str
    remaining: int
    ledger: tuple[LedgerEntry, ...]
    steps: int


def run_l(p: LProgram, x: Any, volume: int, dice: DiceStream) -> Output | Abort:
    """Run ``p`` on ``x`` with initial volume ``volume`` under strict accounting."""
    if volume < 1:
        raise ValueError("initial volume must be at least 1")
    budget = VolumeBudget(volume)
    gen = p.body(x, budget)
    send: Optional[int] = None

    def abort(reason: str) -> Abort:
        gen.close()
        return Abort(reason, budget.remaining, tuple(budget.ledger), budget.steps)

    while True:
        try:
            req = gen.send(send)
        except StopIteration as stop:
            if not budget.charge():
                return Abort("out of volume", budget.remaining, tuple(budget.ledger), budget.steps)
            return Output(stop.value, budget.remaining, tuple(budget.ledger), budget.steps)
        send = None
        if isinstance(req, Bet):
            v = req.stake
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                return abort(f"bad stake {v!r}")
            if v > budget.remaining:
                return abort(f"stake {v} exceeds remaining volume {budget.remaining}")
            send = dice.bit()
            budget.settle(v, send)
        elif req is STEP or req is FLIP:
            if not budget.charge():
                return abort("out of volume")
            if req is FLIP:
                send = dice.bit()
        else:
            return abort(f"unknown request {req!r}")


ABORT = "<abort>"


def outcome_key(res: Output | Abort) -> Any:
    return ABORT if isinstance(res, Abort) else res.value


def exact_outcomes(p: LProgram, x: Any, volume: int, max_bits: int = 24,
                   key: Callable[[Output | Abort], Any] = outcome_key) -> tuple[dict, Fraction]:
    """Exact outcome distribution by walking the dice tree.

    Returns ({key(result): probability}, mass of branches still running
    after ``max_bits`` dice).
    """
    dist: dict[Any, Fraction] = {}
    undecided = Fraction(0)
    stack: list[list[int]] = [[]]
    while stack:
        prefix = stack.pop()
        try:
            res = run_l(p, x, volume, DiceStream.from_bits(prefix))
        except OutOfDice:
            if len(prefix) >= max_bits:
                undecided += Fraction(1, 1 << len(prefix))
            else:
                stack.append(prefix + [1])
                stack.append(prefix + [0])
            continue
        k = key(res)
        dist[k] = dist.get(k, Fraction(0)) + Fraction(1, 1 << len(prefix))
    return dist, undecided


def expected_final_volume(p: LProgram, x: Any, volume: int, max_bits: int = 24) -> tuple[Fraction, Fraction]:
    """(exact expected remaining volume over finished branches, undecided mass)."""
    dist, undecided = exact_outcomes(p, x, volume, max_bits, key=lambda r: r.remaining)
    return sum((v * q for v, q in dist.items()), Fraction(0)), undecided


# ---------------------------------------------------------------------------
# Stock programs and wrappers


def emit_program(y: Any) -> LProgram:
    def body(x, budget):
        return y
        yield  # pragma: no cover

    return LProgram(f"emit({y!r})", body)


def all_in_program(y: Any = "win") -> LProgram:
    """Bets the whole volume once, then emits."""
    def body(x, budget):
        yield Bet(budget.remaining)
        return y

    return LProgram("all-in", body)


def work_program(t: int, y: Any = "done") -> LProgram:
    """Needs exactly t volume: t-1 steps and the emit."""
    if t < 1:
        raise ValueError("t must be at least 1")

    def body(x, budget):
        for _ in range(t - 1):
            yield STEP
        return y

    return LProgram(f"work({t})", body)


def normalize_to_l(p: LProgram, t: int) -> LProgram:
    """Wrap a program needing volume ``t`` so it can start from any volume:
    bet everything until at least ``t`` is available, then run it.

    Starting from b, success has probability about b/t; exactly 2^-j when
    t = 2^j * b.
    """
    if t < 1:
        raise ValueError("t must be at least 1")

    def body(x, budget):
        while budget.remaining < t:
            yield Bet(budget.remaining)
        return (yield from p.body(x, budget))

    return LProgram(f"normalize({p.name}, {t})", body)


def gambler_program(rounds: int, y: Any = "done") -> LProgram:
    """Flips for a stake size each round and bets it; used for the
    supermartingale checks."""
    def body(x, budget):
        for _ in range(rounds):
            b = yield FLIP
            if budget.remaining == 0:
                break
            stake = max(1, budget.remaining // (2 if b else 3))
            yield Bet(stake)
        return y

    return LProgram(f"gambler({rounds})", body)


def uniform_choice_program(choices: Sequence[Any], name: str = "uniform") -> LProgram:
    """Emits a uniform element of ``choices`` (length a power of two)."""
    k = len(choices)
    if k < 1 or k & (k - 1):
        raise ValueError("need a power-of-two number of choices")
    bits = k.bit_length() - 1

    def body(x, budget):
        i = 0
        for _ in range(bits):
            i = 2 * i + (yield FLIP)
        return choices[i]

    return LProgram(name, body)


def uniform_bits_program(n: int) -> LProgram:
    """Emits a uniform n-bit string."""
    def body(x, budget):
        s = []
        for _ in range(n):
            s.append(str((yield FLIP)))
        return "".join(s)

    return LProgram(f"bits({n})", body)


# ---------------------------------------------------------------------------
# Registries and the complete mixture


@dataclass(frozen=True)
class GeneratorRegistry:
    """Finitely many generators; generator i (1-based) has weight
    proportional to 1/i^2."""

    programs: tuple[LProgram, ...]
    volume: int = 64

    def __post_init__(self):
        if not self.programs:
            raise ValueError("registry must not be empty")
        object.__setattr__(self, "programs", tuple(self.programs))

    @property
    def weights(self) -> tuple[Fraction, ...]:
        raw = [Fraction(1, i * i) for i in range(1, len(self.programs) + 1)]
        z = sum(raw)
        return tuple(w / z for w in raw)

    def cumulative(self) -> tuple[Fraction, ...]:
        out, s = [Fraction(0)], Fraction(0)
        for w in self.weights:
            s += w
            out.append(s)
        return tuple(out)


def select_index(cum: Sequence[Fraction], dice: DiceStream, max_bits: Optional[int] = None) -> int:
    """Index i with probability cum[i+1]-cum[i], reading dice bits until the
    dyadic interval they pin down lies inside one slot."""
    lo, depth = 0, 0  # interval [lo, lo+1) / 2^depth
    n = len(cum) - 1
    while True:
        scale = 1 << depth
        for i in range(n):
            if cum[i] * scale <= lo and (lo + 1) <= cum[i + 1] * scale:
                return i
        if max_bits is not None and depth >= max_bits:
            raise OutOfDice
        lo = 2 * lo + dice.bit()
        depth += 1


def sample_complete(reg: GeneratorRegistry, x: Any, dice: DiceStream) -> tuple[int, Output | Abort]:
    """Draw a generator by weight and run it on ``x``; returns (index, result)."""
    i = select_index(reg.cumulative(), dice)
    return i, run_l(reg.programs[i], x, reg.volume, dice)


def selection_bounds(reg: GeneratorRegistry, max_bits: int) -> tuple[list[Fraction], Fraction]:
    """Exact probability that the selector has settled on each index within
    ``max_bits`` dice, and the mass still undecided."""
    cum = reg.cumulative()
    probs = [Fraction(0)] * len(reg.programs)
    undecided = Fraction(0)
    stack: list[list[int]] = [[]]
    while stack:
        prefix = stack.pop()
        try:
            i = select_index(cum, DiceStream.from_bits(prefix), max_bits=len(prefix))
        except OutOfDice:
            if len(prefix) >= max_bits:
                undecided += Fraction(1, 1 << len(prefix))
            else:
                stack.append(prefix + [1])
                stack.append(prefix + [0])
            continue
        probs[i] += Fraction(1, 1 << len(prefix))
    return probs, undecided


def generator_distributions(reg: GeneratorRegistry, x: Any, max_bits: int = 24) -> list[dict]:
    """Exact output distribution of each generator (aborts under ABORT)."""
    out = []
    for p in reg.programs:
        dist, undecided = exact_outcomes(p, x, reg.volume, max_bits)
        if undecided:
            raise ValueError(f"{p.name} does not finish within {max_bits} dice")
        out.append(dist)
    return out


def complete_distribution(reg: GeneratorRegistry, x: Any, max_bits: int = 24) -> dict:
    """Exact output distribution of sample_complete: the weighted mixture."""
    mix: dict[Any, Fraction] = {}
    for w, dist in zip(reg.weights, generator_distributions(reg, x, max_bits)):
        for y, q in dist.items():
            mix[y] = mix.get(y, Fraction(0)) + w * q
    return mix


def domination_violations(reg: GeneratorRegistry, x: Any, max_bits: int = 24) -> list[tuple[int, Any]]:
    """Pairs (i, y) where p_c(y) < w_i p_i(y); empty when the mixture dominates."""
    mix = complete_distribution(reg, x, max_bits)
    bad = []
    for i, (w, dist) in enumerate(zip(reg.weights, generator_distributions(reg, x, max_bits))):
        for y, q in dist.items():
            if y != ABORT and mix.get(y, 0) < w * q:
                bad.append((i, y))
    return bad


# ---------------------------------------------------------------------------
# Kl and security estimates


def wilson_interval(hits: int, trials: int, z: float = 3.0) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    p = hits / trials
    den = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / den
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / den
    lo = 0.0 if hits == 0 else max(0.0, centre - half)
    hi = 1.0 if hits == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class KlEstimate:
    hits: int
    trials: int
    point: Optional[float]  # None when nothing was hit
    lower: float
    upper: Optional[float]  # None when nothing was hit


def _neglog2(p: float) -> float:
    return -math.log2(p) if p > 0 else math.inf


def kl_estimate(reg: GeneratorRegistry, member: Callable[[Any], bool], x: Any,
                trials: int, seed: int = 0, z: float = 3.0) -> KlEstimate:
    """-log2 of the frequency with which the mixture lands in the set."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    hits = 0
    for t in range(trials):
        _, res = sample_complete(reg, x, DiceStream(_trial_seed(seed, t)))
        if isinstance(res, Output) and member(res.value):
            hits += 1
    lo, hi = wilson_interval(hits, trials, z)
    if hits == 0:
        return KlEstimate(0, trials, None, _neglog2(hi), None)
    point = -math.log2(hits / trials)
    return KlEstimate(hits, trials, point, _neglog2(hi), _neglog2(lo))


def kl_exact(reg: GeneratorRegistry, member: Callable[[Any], bool], x: Any,
             max_bits: int = 24) -> tuple[Fraction, float]:
    """(probability of the set under the mixture, its -log2)."""
    mix = complete_distribution(reg, x, max_bits)
    p = sum((q for y, q in mix.items() if y != ABORT and member(y)), Fraction(0))
    return p, _neglog2(float(p)) if p else math.inf


def _trial_seed(seed: int, t: int) -> int:
    return seed * 1_000_003 + t


def is_preimage(f: Callable[[Any], Any], w: Any, x: Any) -> bool:
    try:
        return f(w) == x
    except (ValueError, TypeError, IndexError):
        return False  # malformed candidates are simply wrong


@dataclass(frozen=True)
class Inversion:
    witness: Any  # None on failure
    runs: int
    security: float  # estimate of S, or a lower bound on failure
    log2_security: float
    solved: bool


def invert_optimal(f: Callable[[Any], Any], x: Any, reg: GeneratorRegistry,
                   cap: int, seed: int = 0) -> Inversion:
    """Sample candidates from the mixture parameterized by ``x`` until one
    maps to ``x``.  The number of runs to the first success is an unbiased
    estimate of S(f/x); on failure ``cap`` is a lower bound."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    for t in range(1, cap + 1):
        _, res = sample_complete(reg, x, DiceStream(_trial_seed(seed, t)))
        if isinstance(res, Output) and is_preimage(f, res.value, x):
            return Inversion(res.value, t, float(t), math.log2(t), True)
    return Inversion(None, cap, float(cap), math.log2(cap), False)


@dataclass(frozen=True)
class SuccessFrequency:
    successes: int
    trials: int

    @property
    def rate(self) -> float:
        return self.successes / self.trials

    @property
    def sigma(self) -> float:
        p = self.rate
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def security(self) -> float:
        return self.trials / self.successes if self.successes else math.inf


def success_frequency(f: Callable[[Any], Any], x: Any, reg: GeneratorRegistry,
                      trials: int, seed: int = 0) -> SuccessFrequency:
    """Fraction of single mixture runs that produce a preimage of ``x``."""
    wins = 0
    for t in range(trials):
        _, res = sample_complete(reg, x, DiceStream(_trial_seed(seed, t)))
        if isinstance(res, Output) and is_preimage(f, res.value, x):
            wins += 1
    return SuccessFrequency(wins, trials)


def exact_success_probability(f: Callable[[Any], Any], x: Any, reg: GeneratorRegistry,
                              max_bits: int = 24) -> Fraction:
    mix = complete_distribution(reg, x, max_bits)
    return sum((q for y, q in mix.items() if y != ABORT and is_preimage(f, y, x)), Fraction(0))


# ---------------------------------------------------------------------------
# Multimedian time


@dataclass(frozen=True)
class RepetitionRecord:
    repetition: int
    trials: int
    solved: int
    seed: int


@dataclass(frozen=True)
class MTResult:
    value: float
    records: tuple[RepetitionRecord, ...]


def multimedian(instance_gen: Callable[[random.Random], Any],
                inverter: Callable[[Any, int, random.Random], bool],
                k: int, reps: int, seed: int = 0, quantile: float = 0.5,
                solvable: Callable[[Any], bool] = lambda inst: True,
                cap: Optional[int] = None) -> MTResult:
    """Quantile (median by default) over ``reps`` repetitions of the total
    number of inverter calls needed to solve every solvable instance in a
    batch of ``k``.

    ``inverter(instance, attempt, rng)`` is called with attempt = 1, 2, ...
    until it returns True.  Unsolvable instances are skipped.  With ``cap``
    an instance is given up after that many attempts.
    """
    if k < 1 or reps < 1:
        raise ValueError("k and reps must be at least 1")
    if not 0 < quantile < 1:
        raise ValueError("quantile must be in (0, 1)")
    seeds = random.Random(seed)
    records = []
    for r in range(reps):
        rseed = seeds.getrandbits(32)
        rng = random.Random(rseed)
        total = solved = 0
        for _ in range(k):
            inst = instance_gen(rng)
            if not solvable(inst):
                continue
            attempt = 0
            while cap is None or attempt < cap:
                attempt += 1
                if inverter(inst, attempt, rng):
                    solved += 1
                    break
            total += attempt
        records.append(RepetitionRecord(r, total, solved, rseed))
    return MTResult(_quantile([rec.trials for rec in records], quantile), tuple(records))


def _quantile(values: Sequence[int], q: float) -> float:
    if q == 0.5:
        return float(statistics.median(values))
    s = sorted(values)
    return float(s[min(len(s) - 1, int(q * len(s)))])


# synthetic instance families


def always_inverter(inst, attempt, rng) -> bool:
    return True


def coin_inverter(p: Fraction | float) -> Callable[[Any, int, random.Random], bool]:
    return lambda inst, attempt, rng: rng.random() < p


@dataclass(frozen=True)
class PlantedInstance:
    hard: bool


def planted_family(eps: float) -> Callable[[random.Random], PlantedInstance]:
    """A fraction ``eps`` of instances is hard."""
    return lambda rng: PlantedInstance(rng.random() < eps)


def planted_inverter(t0: int) -> Callable[[PlantedInstance, int, random.Random], bool]:
    """Easy instances fall at once; hard ones hold out until attempt t0."""
    return lambda inst, attempt, rng: (not inst.hard) or attempt >= t0


def planted_k(n: int, eps: Fraction) -> int:
    """ceil(n^3 / eps)."""
    return math.ceil(Fraction(n ** 3) / Fraction(eps))


def mt_csv_rows(result: MTResult) -> Iterable[tuple[int, int, int, int]]:
    for rec in result.records:
        yield rec.repetition, rec.trials, rec.solved, rec.seed
