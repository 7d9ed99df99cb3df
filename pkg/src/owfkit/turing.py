"""Single-tape Turing machines with a step budget, plus the two machine
transformers used by the reduction: length forcing and program-prefix
preservation.

Conventions: symbols are single characters and words are ``str``.  The tape
starts as ``input + end`` followed by blanks, the head on cell 0.  A move
left from cell 0 leaves the head in place.  The output of a run is the tape
up to (not including) the first end-tape symbol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from .tiling import ParseError

MOVES = ("L", "R", "S")
_SPARE_SYMBOLS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ" + "αβγδεζηθικλμνξπρστυφχψω" + "ΓΔΘΛΞΠΣΦΨΩ"

Action = tuple[str, str, str]  # (next state, written symbol, move)


@dataclass(frozen=True)
class Machine:
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    start: str
    halt: str
    transitions: Mapping[tuple[str, str], Action] = field(hash=False)
    blank: str = "_"
    end: str = "$"
    name: str = field(default="machine", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transitions", dict(self.transitions))
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate symbol")
        for s in self.alphabet:
            if len(s) != 1 or s.isspace():
                raise ValueError(f"symbols must be single printable characters: {s!r}")
        for special in (self.start, self.halt):
            if special not in self.states:
                raise ValueError(f"unknown state {special!r}")
        for special in (self.blank, self.end):
            if special not in self.alphabet:
                raise ValueError(f"alphabet lacks {special!r}")
        if self.blank == self.end:
            raise ValueError("blank and end-tape symbols must differ")
        for (q, a), (q2, b, d) in self.transitions.items():
            if q == self.halt:
                raise ValueError("halt state must have no transitions")
            if q not in self.states or q2 not in self.states:
                raise ValueError(f"transition uses unknown state: {q!r} -> {q2!r}")
            if a not in self.alphabet or b not in self.alphabet:
                raise ValueError(f"transition uses unknown symbol: {a!r} -> {b!r}")
            if d not in MOVES:
                raise ValueError(f"bad move {d!r}")
        missing = [
            (q, a) for q in self.states if q != self.halt for a in self.alphabet
            if (q, a) not in self.transitions
        ]
        if missing:
            raise ValueError(f"transition map is not total; missing {missing[:4]}")

    def __hash__(self):
        return hash((self.states, self.alphabet, self.start, self.halt,
                     tuple(sorted(self.transitions.items()))))

    @property
    def input_alphabet(self) -> tuple[str, ...]:
        return tuple(a for a in self.alphabet if a not in (self.blank, self.end))

    def delta(self, q: str, a: str) -> Optional[Action]:
        if q == self.halt:
            return None
        return self.transitions[(q, a)]


@dataclass(frozen=True)
class TapeConfig:
    tape: str
    head: int
    state: str
    steps: int = 0

    def output(self, m: Machine) -> str:
        return tape_output(self.tape, m)


def tape_output(tape: str, m: Machine) -> str:
    i = tape.find(m.end)
    return tape[:i] if i >= 0 else tape.rstrip(m.blank)


def initial_config(m: Machine, word: str) -> TapeConfig:
    bad = [a for a in word if a not in m.input_alphabet]
    if bad:
        raise ValueError(f"input contains symbols outside the input alphabet: {bad!r}")
    return TapeConfig(word + m.end, 0, m.start, 0)


def step(m: Machine, cfg: TapeConfig) -> TapeConfig:
    """One transition; a halted configuration is returned unchanged."""
    act = m.delta(cfg.state, cfg.tape[cfg.head])
    if act is None:
        return cfg
    q, b, d = act
    tape = cfg.tape[:cfg.head] + b + cfg.tape[cfg.head + 1:]
    head = cfg.head + {"L": -1, "R": 1, "S": 0}[d]
    head = max(head, 0)
    if head == len(tape):
        tape += m.blank
    return TapeConfig(tape, head, q, cfg.steps + 1)


def configurations(m: Machine, word: str, budget: int) -> Iterator[TapeConfig]:
    """Configurations after 0, 1, ..., budget steps (halted ones repeat)."""
    cfg = initial_config(m, word)
    yield cfg
    for _ in range(budget):
        if cfg.state != m.halt:
            cfg = step(m, cfg)
        yield cfg


def tm_run(m: Machine, word: str, budget: int) -> str:
    """Run for at most ``budget`` steps and return the output word.

    An exhausted budget returns whatever the tape holds at that moment.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    cfg = initial_config(m, word)
    while cfg.steps < budget and cfg.state != m.halt:
        cfg = step(m, cfg)
    return cfg.output(m)


def run_to_halt(m: Machine, word: str, limit: int = 100_000) -> TapeConfig:
    cfg = initial_config(m, word)
    while cfg.state != m.halt:
        if cfg.steps >= limit:
            raise RuntimeError(f"no halt within {limit} steps")
        cfg = step(m, cfg)
    return cfg


# ---------------------------------------------------------------------------
# Machine transformers


def _spares(m: Machine, k: int) -> list[str]:
    out = [c for c in _SPARE_SYMBOLS if c not in m.alphabet][:k]
    if len(out) < k:
        raise ValueError("ran out of spare symbols")
    return out


def force_length(m: Machine) -> Machine:
    """Wrap ``m`` so its output always has the input's length.

    The wrapper marks cell 0, runs ``m`` with the input's end-tape cell
    pinned (writes to it are ignored, so the output can never grow past the
    input), then walks back to the mark and sweeps right to the pinned end,
    blanking everything after an early end-tape symbol written by ``m``.
    """
    E, B = m.end, m.blank
    spare = _spares(m, len(m.alphabet) + 2)
    sub = spare[0]  # an end-tape symbol written by m itself
    marked = dict(zip(list(m.alphabet) + [sub], spare[1:]))
    unmarked = {v: k for k, v in marked.items()}
    alphabet = list(m.alphabet) + [sub] + [marked[a] for a in list(m.alphabet) + [sub]]

    def view(s: str) -> str:
        s = unmarked.get(s, s)
        return E if s == sub else s

    def emit(old: str, b: str) -> str:
        if unmarked.get(old, old) == E:
            return old
        b = sub if b == E else b
        return marked[b] if old in unmarked else b

    inner = {q: f"m.{q}" for q in m.states if q != m.halt}
    MARK, SEEK, CLEAN, BLANK, HALT = "w.mark", "w.seek", "w.clean", "w.blank", "w.halt"
    states = [MARK, *inner.values(), SEEK, CLEAN, BLANK, HALT]

    def after_m(q: str) -> str:
        return SEEK if q == m.halt else inner[q]

    def clean_step(s: str) -> Action:
        if s == E:
            return HALT, E, "S"
        if s == sub:
            return BLANK, B, "R"
        return CLEAN, s, "R"

    delta: dict[tuple[str, str], Action] = {}
    for s in alphabet:
        plain = unmarked.get(s, s)
        if s == E:
            delta[(MARK, s)] = (HALT, E, "S")
        elif s in m.alphabet:
            delta[(MARK, s)] = (after_m(m.start), marked[s], "S")
        else:
            delta[(MARK, s)] = (HALT, s, "S")
        for q, name in inner.items():
            q2, b, d = m.transitions[(q, view(s))]
            delta[(name, s)] = (after_m(q2), emit(s, b), d)
        delta[(SEEK, s)] = clean_step(plain) if s in unmarked else (SEEK, s, "L")
        delta[(CLEAN, s)] = clean_step(plain)
        delta[(BLANK, s)] = (HALT, E, "S") if plain == E else (BLANK, B, "R")
    return Machine(tuple(states), tuple(alphabet), MARK, HALT, delta, B, E,
                   name=f"force_length({m.name})")


def program_prefix_embed(m: Machine, program: str) -> Machine:
    """Machine mapping ``program + payload`` to ``program + m(payload)``.

    The prefix cells are skipped untouched; the first payload cell is marked
    so that ``m`` sees it as its left end, and the mark is removed when
    ``m`` halts.
    """
    if any(a not in m.input_alphabet for a in program):
        raise ValueError("program must be over the machine's input alphabet")
    if not program:
        return m
    spare = _spares(m, len(m.alphabet))
    marked = dict(zip(m.alphabet, spare))
    unmarked = {v: k for k, v in marked.items()}
    alphabet = list(m.alphabet) + spare
    skip = [f"p.skip{i}" for i in range(len(program))]
    inner = {q: f"m.{q}" for q in m.states if q != m.halt}
    SEEK, HALT = "p.seek", "p.halt"
    states = [*skip, "p.mark", *inner.values(), SEEK, HALT]

    def after_m(q: str) -> str:
        return SEEK if q == m.halt else inner[q]

    delta: dict[tuple[str, str], Action] = {}
    for s in alphabet:
        plain = unmarked.get(s, s)
        for i, q in enumerate(skip):
            if s == m.end:
                delta[(q, s)] = (HALT, s, "S")
            else:
                nxt = skip[i + 1] if i + 1 < len(skip) else "p.mark"
                delta[(q, s)] = (nxt, s, "R")
        delta[("p.mark", s)] = (after_m(m.start), marked.get(s, s), "S")
        for q, name in inner.items():
            q2, b, d = m.transitions[(q, plain)]
            if s in unmarked:
                b = marked[b]
                if d == "L":
                    d = "S"
            delta[(name, s)] = (after_m(q2), b, d)
        delta[(SEEK, s)] = (HALT, plain, "S") if s in unmarked else (SEEK, s, "L")
    return Machine(tuple(states), tuple(alphabet), skip[0], HALT, delta, m.blank, m.end,
                   name=f"prefix[{program}]({m.name})")


# ---------------------------------------------------------------------------
# Stock machines


def _machine(name: str, rules: dict, alphabet="01_$", states=("s", "h")) -> Machine:
    return Machine(tuple(states), tuple(alphabet), states[0], states[-1], rules, name=name)


def identity_machine() -> Machine:
    """Halts on its first step, leaving the tape alone."""
    return _machine("identity", {("s", a): ("h", a, "S") for a in "01_$"})


def not_machine() -> Machine:
    """Flips each bit left to right and halts on the end-tape symbol."""
    rules = {("s", "0"): ("s", "1", "R"), ("s", "1"): ("s", "0", "R"),
             ("s", "_"): ("h", "_", "S"), ("s", "$"): ("h", "$", "S")}
    return _machine("not", rules)


def unary_increment_machine() -> Machine:
    """Unary counter 1^k 0 ... -> 1^(k+1) 0 ...; saturates when full."""
    rules = {("s", "1"): ("s", "1", "R"), ("s", "0"): ("h", "1", "S"),
             ("s", "_"): ("h", "_", "S"), ("s", "$"): ("h", "$", "S")}
    return _machine("increment", rules)


def write_one_machine() -> Machine:
    """Writes 1 on cell 0 and halts."""
    return _machine("write1", {("s", a): ("h", "1" if a != "$" else "$", "S") for a in "01_$"})


def truncating_machine() -> Machine:
    """Writes '1' then an early end-tape symbol: output '1' for nonempty input."""
    rules = {}
    for a in "01_":
        rules[("s", a)] = ("t", "1", "R")
        rules[("t", a)] = ("h", "$", "S")
    rules[("s", "$")] = ("h", "$", "S")
    rules[("t", "$")] = ("h", "$", "S")
    return _machine("truncate", rules, states=("s", "t", "h"))


STOCK = {
    "identity": identity_machine,
    "not": not_machine,
    "increment": unary_increment_machine,
    "write1": write_one_machine,
    "truncate": truncating_machine,
}


# ---------------------------------------------------------------------------
# Text format


def parse_machine(text: str, source: str = "<machine>") -> Machine:
    """Parse the line-oriented machine format::

        machine [name]
        states s t h
        alphabet 0 1 _ $
        start s
        halt h
        s 0 -> t 1 R

    Optional ``blank <sym>`` and ``end <sym>`` lines override ``_`` and ``$``.
    ``#`` starts a comment.
    """
    header: dict[str, list[str]] = {}
    rules: dict[tuple[str, str], Action] = {}
    seen_machine = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        col = raw.index(toks[0]) + 1
        key = toks[0]
        if not seen_machine:
            if key != "machine":
                raise ParseError("expected 'machine' header", lineno, col, source)
            seen_machine = True
            header["machine"] = toks[1:]
            continue
        if key in ("states", "alphabet", "start", "halt", "blank", "end") and "->" not in toks:
            if key in header:
                raise ParseError(f"duplicate '{key}' line", lineno, col, source)
            header[key] = toks[1:]
            continue
        if len(toks) != 6 or toks[2] != "->":
            raise ParseError("expected '<state> <sym> -> <state> <sym> <L|R|S>'", lineno, col, source)
        q, a, _, q2, b, d = toks
        if d not in MOVES:
            raise ParseError(f"move must be L, R or S, got {d!r}", lineno, raw.rindex(d) + 1, source)
        if (q, a) in rules:
            raise ParseError(f"duplicate transition for ({q}, {a})", lineno, col, source)
        rules[(q, a)] = (q2, b, d)
    if not seen_machine:
        raise ParseError("empty machine description", 1, 1, source)
    for key in ("states", "alphabet", "start", "halt"):
        if key not in header:
            raise ParseError(f"missing '{key}' line", 1, 1, source)
    single = {k: header[k] for k in ("start", "halt", "blank", "end") if k in header}
    for k, v in single.items():
        if len(v) != 1:
            raise ParseError(f"'{k}' takes exactly one value", 1, 1, source)
    name = header["machine"][0] if header["machine"] else "machine"
    try:
        return Machine(
            tuple(header["states"]), tuple(header["alphabet"]),
            single["start"][0], single["halt"][0], rules,
            single.get("blank", ["_"])[0], single.get("end", ["$"])[0], name=name,
        )
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, source) from None


def format_machine(m: Machine) -> str:
    lines = [f"machine {m.name}", "states " + " ".join(m.states),
             "alphabet " + " ".join(m.alphabet), f"start {m.start}", f"halt {m.halt}"]
    if m.blank != "_":
        lines.append(f"blank {m.blank}")
    if m.end != "$":
        lines.append(f"end {m.end}")
    for (q, a), (q2, b, d) in m.transitions.items():
        lines.append(f"{q} {a} -> {q2} {b} {d}")
    return "\n".join(lines) + "\n"
