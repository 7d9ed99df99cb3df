"""Compile a Turing machine into a tile set whose forced expansion replays
the machine's computation, one step per row.

Each tape cell carries its symbol and a tag: the head's state if the head
is on it, otherwise an arrow saying on which side the head is.  The corner
letter at lattice point (r, j) is the pair of cells on either side of it at
time r; letters on the square's left and right edges are the border letter.
A tile at (r, c) therefore sees cells c-1, c, c+1 at time r along its top
and the same cells at time r+1 along its bottom.

The arrows decide which neighbour pins a tile down.  The head's own window
is forced from above.  Right of the head, the cell a tile cannot see (c-2)
could only matter if it held the head, so the west neighbour settles the
choice; left of the head the east neighbour does.  Expansion therefore
fills each row outward from the head.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .tiling import (BORDER_LETTER, Board, Line, Tile, TileSet, Visit, candidates,
                     check_line, expand)
from .turing import Machine, configurations, tape_output, tm_run

WEST, EAST = "<", ">"
DEFAULT_LETTER_BUDGET = 1 << 16


class TCell(tuple):
    """(symbol, tag) where tag is '<', '>' or '@<state>'."""

    __slots__ = ()

    def __new__(cls, sym: str, tag: str):
        return tuple.__new__(cls, (sym, tag))

    @property
    def sym(self) -> str:
        return self[0]

    @property
    def tag(self) -> str:
        return self[1]

    @property
    def state(self) -> Optional[str]:
        t = self[1]
        return t[1:] if t[0] == "@" else None

    def __repr__(self):
        return f"{self[0]}{self[1]}"


Window = Sequence[Optional[TCell]]


def next_cell(m: Machine, left: Optional[TCell], mid: TCell, right: Optional[TCell]) -> TCell:
    """Cell ``mid`` one step later, from its neighbourhood (None = off the tape)."""
    q = mid.state
    if q is not None:
        act = m.delta(q, mid.sym)
        if act is None:
            return mid
        q2, b, d = act
        if d == "S" or (d == "L" and left is None):
            return TCell(b, "@" + q2)
        return TCell(b, WEST if d == "L" else EAST)
    for nb, move in ((left, "R"), (right, "L")):
        if nb is not None and nb.state is not None:
            act = m.delta(nb.state, nb.sym)
            if act is not None and act[2] == move:
                return TCell(mid.sym, "@" + act[0])
    return mid


def consistent(window: Window) -> bool:
    """At most one head, '>' cells left of it, '<' cells right of it; a
    headless window is uniformly tagged."""
    cells = [c for c in window if c is not None]
    heads = [i for i, c in enumerate(cells) if c.state is not None]
    if len(heads) > 1:
        return False
    if not heads:
        return len({c.tag for c in cells}) <= 1
    h = heads[0]
    return all(c.tag == EAST for c in cells[:h]) and all(c.tag == WEST for c in cells[h + 1:])


def _cell_name(c: TCell) -> str:
    return f"{c.sym}{c.tag}"


@dataclass(frozen=True)
class CompiledReduction:
    """Tile set for a machine plus the maps between words and tile lines."""

    machine: Machine
    tiles: TileSet
    tile_cells: tuple[TCell, ...] = field(repr=False)
    letter_of: dict = field(repr=False, compare=False)
    tile_of: dict = field(repr=False, compare=False)

    def initial_row(self, word: str, width: int) -> list[TCell]:
        m = self.machine
        if width < max(2, len(word) + 1):
            raise ValueError(f"width {width} too small for input of length {len(word)} (minimum is max(2, |w|+1))")
        if any(a not in m.input_alphabet for a in word):
            raise ValueError("input contains symbols outside the input alphabet")
        tape = word + m.end + m.blank * (width - len(word) - 1)
        return [TCell(a, "@" + m.start if i == 0 else WEST) for i, a in enumerate(tape)]

    def advance(self, row: Sequence[TCell]) -> list[TCell]:
        n = len(row)
        return [
            next_cell(self.machine, row[c - 1] if c > 0 else None, row[c],
                      row[c + 1] if c + 1 < n else None)
            for c in range(n)
        ]

    def _letter(self, a: Optional[TCell], b: Optional[TCell]) -> int:
        if a is None or b is None:
            return BORDER_LETTER
        return self.letter_of[(a, b)]

    def tile_for(self, top: Sequence[TCell], bottom: Sequence[TCell], c: int) -> int:
        n = len(top)
        get = lambda row, i: row[i] if 0 <= i < n else None  # noqa: E731
        t = Tile(self._letter(get(top, c - 1), top[c]), self._letter(top[c], get(top, c + 1)),
                 self._letter(get(bottom, c - 1), bottom[c]), self._letter(bottom[c], get(bottom, c + 1)))
        try:
            return self.tile_of[t]
        except KeyError:
            raise ValueError(f"no tile for column {c}: {t}") from None

    def encode(self, word: str, width: int) -> Line:
        """Top line of tiles for ``word`` on a ``width``-cell tape."""
        row0 = self.initial_row(word, width)
        row1 = self.advance(row0)
        return tuple(self.tile_for(row0, row1, c) for c in range(width))

    def decode_cells(self, line: Sequence[Optional[int]]) -> list[TCell]:
        if any(t is None for t in line):
            raise ValueError("line has blank cells (expansion got stuck)")
        return [self.tile_cells[t] for t in line]

    def decode(self, line: Sequence[Optional[int]]) -> str:
        """The word a line of tiles holds: tape symbols up to the end marker."""
        return tape_output("".join(c.sym for c in self.decode_cells(line)), self.machine)

    def decode_config(self, line: Sequence[Optional[int]]) -> tuple[str, Optional[int], Optional[str]]:
        """(tape, head position, state) of a row; head None if it left the square."""
        cells = self.decode_cells(line)
        heads = [i for i, c in enumerate(cells) if c.state is not None]
        tape = "".join(c.sym for c in cells)
        if not heads:
            return tape, None, None
        return tape, heads[0], cells[heads[0]].state


def _all_cells(m: Machine) -> list[TCell]:
    tags = [WEST, EAST] + ["@" + q for q in m.states]
    return [TCell(a, t) for a in m.alphabet for t in tags]


def _windows3(m: Machine) -> Iterator[tuple[Optional[TCell], TCell, Optional[TCell]]]:
    """Every consistent (left, mid, right), with None for off-tape ends."""
    syms = m.alphabet
    # a one-cell square has only border letters, so widths start at 2
    for has_l, has_r in ((True, True), (True, False), (False, True)):
        k = 1 + has_l + has_r
        for head in [None] + list(range(k)):
            states = m.states if head is not None else [None]
            for q in states:
                for side in ((WEST, EAST) if head is None else (None,)):
                    for word in itertools.product(syms, repeat=k):
                        cells = []
                        for i, a in enumerate(word):
                            if head is None:
                                tag = side
                            elif i == head:
                                tag = "@" + q
                            else:
                                tag = EAST if i < head else WEST
                            cells.append(TCell(a, tag))
                        left = cells[0] if has_l else None
                        mid = cells[1] if has_l else cells[0]
                        right = cells[-1] if has_r else None
                        yield left, mid, right


def _context(m: Machine, core: Sequence[Optional[TCell]], head_cells: list[TCell], west: bool) -> list[Optional[TCell]]:
    """Cells that may sit just beyond ``core`` on one side.  Only a head
    stepping inward, or the tape edge, changes the neighbour's next value."""
    cells = [c for c in core if c is not None]
    tags = {c.tag for c in cells}
    headless = all(c.state is None for c in cells)
    if headless:
        (tag,) = tags
    else:
        tag = EAST if west else WEST
    out: list[Optional[TCell]] = [None, TCell(m.blank, tag)]
    if headless and tag == (WEST if west else EAST):
        out += head_cells
    return out


def compile_to_tiles(m: Machine, letter_budget: int = DEFAULT_LETTER_BUDGET) -> CompiledReduction:
    """Tile set whose expansion from ``encode(w, N)`` replays ``m`` on ``w``.

    Row r of the expanded square holds the configuration after r steps
    (frozen once the machine halts), so the bottom row of an N-wide
    instance is the configuration after N-1 steps.
    """
    n_cells = len(m.alphabet) * (len(m.states) + 2)
    if 2 + n_cells * n_cells > letter_budget:
        raise ValueError(f"machine needs up to {2 + n_cells * n_cells} letters, budget is {letter_budget}")
    head_cells = [c for c in _all_cells(m) if c.state is not None]

    records: dict[tuple, TCell] = {}
    for left, mid, right in _windows3(m):
        ym = next_cell(m, left, mid, right)
        if left is None:
            lefts = [None]
        else:
            lefts = {next_cell(m, ll, left, mid) for ll in _context(m, (left, mid, right), head_cells, True)}
        if right is None:
            rights = [None]
        else:
            rights = {next_cell(m, mid, right, rr) for rr in _context(m, (left, mid, right), head_cells, False)}
        for yl in lefts:
            for yr in rights:
                records[(left, mid, right, yl, ym, yr)] = mid

    pairs = set()
    for left, mid, right, yl, ym, yr in records:
        for a, b in ((left, mid), (mid, right), (yl, ym), (ym, yr)):
            if a is not None and b is not None:
                pairs.add((a, b))
    ordered = sorted(pairs, key=lambda p: (_cell_name(p[0]), _cell_name(p[1])))
    if 2 + len(ordered) > letter_budget:
        raise ValueError(f"{2 + len(ordered)} letters exceed the budget of {letter_budget}")
    letter_of = {p: i + 2 for i, p in enumerate(ordered)}
    names = (".", "#") + tuple(f"{_cell_name(a)}|{_cell_name(b)}" for a, b in ordered)
    if len(set(names)) != len(names):
        raise ValueError("state or symbol names make letter names ambiguous")

    def letter(a, b):
        return BORDER_LETTER if a is None or b is None else letter_of[(a, b)]

    tiles: dict[Tile, TCell] = {}
    for (left, mid, right, yl, ym, yr), content in records.items():
        t = Tile(letter(left, mid), letter(mid, right), letter(yl, ym), letter(ym, yr))
        prev = tiles.setdefault(t, content)
        assert prev == content, "two tiles with equal corners decode differently"
    order = sorted(tiles)
    tileset = TileSet(2 + len(ordered), tuple(order), names,
                      tuple(f"t{i}" for i in range(len(order))))
    return CompiledReduction(m, tileset, tuple(tiles[t] for t in order), letter_of,
                             {t: i for i, t in enumerate(order)})


# ---------------------------------------------------------------------------
# Fidelity checks


@dataclass
class InstanceReport:
    word: str
    width: int
    expected: str
    got: Optional[str]
    full: bool
    forced: bool
    rows_match: bool
    orders_agree: bool

    @property
    def ok(self) -> bool:
        return (self.got == self.expected and self.full and self.forced
                and self.rows_match and self.orders_agree)


def replay_forced(board: Board, tiles: TileSet, trace: Sequence[Visit]) -> bool:
    """Replay a placement trace: each placement must be the only candidate
    at that moment, and no eligible cell may ever have zero candidates."""
    b = board.copy()
    for v in trace:
        if v.n_candidates == 0:
            return False
        if v.placed is None:
            continue
        cand = candidates(b, tiles, v.row, v.col)
        if cand != {v.placed}:
            return False
        b.cells[v.row][v.col] = v.placed
    return True


def check_instance(cr: CompiledReduction, word: str, width: int) -> InstanceReport:
    """Expand one compiled instance and compare it with direct simulation."""
    top = cr.encode(word, width)
    check_line(top, cr.tiles)
    start = Board.with_top(top)
    trace: list[Visit] = []
    board = expand(start, cr.tiles, order="row", trace=trace)
    col_board = expand(start, cr.tiles, order="col")
    full = board.is_full()
    forced = replay_forced(start, cr.tiles, trace)
    expected = _run_output(cr.machine, word, width - 1)
    got = cr.decode(board.row(width - 1)) if full else None
    rows_match = full
    if full:
        for r, cfg in enumerate(configurations(cr.machine, word, width - 1)):
            tape, head, state = cr.decode_config(board.row(r))
            want = (cfg.tape + cr.machine.blank * width)[:width]
            if tape != want or (head is not None and (head, state) != (cfg.head, cfg.state)):
                rows_match = False
                break
    return InstanceReport(word, width, expected, got, full, forced, rows_match, board == col_board)


def _run_output(m: Machine, word: str, budget: int) -> str:
    return tm_run(m, word, budget)


def check_reduction(cr: CompiledReduction, max_len: int, max_width: int,
                    alphabet: Optional[str] = None) -> list[InstanceReport]:
    """Every input over ``alphabet`` (default: the machine's input symbols)
    up to ``max_len``, on every width max(2, |w|+1) .. ``max_width``."""
    alpha = alphabet if alphabet is not None else cr.machine.input_alphabet
    words = ("".join(p) for k in range(max_len + 1) for p in itertools.product(alpha, repeat=k))
    reports = []
    for w in words:
        for n in range(max(2, len(w) + 1), max_width + 1):
            reports.append(check_instance(cr, w, n))
    return reports
