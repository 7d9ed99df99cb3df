"""Corner-lettered tiles and the Tiling Expansion function.

A tile is a unit square with a letter at each corner.  Two tiles may sit
side by side when the letters on their shared side agree.  Expansion grows a
partial tiling of an N x N square one tile at a time, only where the
placement is forced (exactly one permitted tile fits).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

BLANK_LETTER = 0
BORDER_LETTER = 1
RESERVED_LETTERS = (".", "#")

Cell = Optional[int]  # tile index, or None for an empty cell / blank marker


class ParseError(ValueError):
    """Malformed text input; carries a 1-based line and column."""

    def __init__(self, msg: str, line: int = 0, col: int = 0, source: str = "<input>"):
        self.msg, self.line, self.col, self.source = msg, line, col, source
        super().__init__(f"{source}:{line}:{col}: {msg}")


class Tile(NamedTuple):
    nw: int
    ne: int
    sw: int
    se: int


@dataclass(frozen=True)
class TileSet:
    """Ordered, duplicate-free set of permitted tiles.

    ``letter_names`` and ``tile_names`` are display metadata; they take no
    part in equality, so a decoded instance compares equal to the original.
    """

    alphabet_size: int
    tiles: tuple[Tile, ...]
    letter_names: tuple[str, ...] = field(default=(), compare=False, repr=False)
    tile_names: tuple[str, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "tiles", tuple(Tile(*t) for t in self.tiles))
        if self.alphabet_size < len(RESERVED_LETTERS):
            raise ValueError("alphabet must include the two reserved letters")
        if len(set(self.tiles)) != len(self.tiles):
            raise ValueError("duplicate tile in tile set")
        for t in self.tiles:
            if any(not 0 <= c < self.alphabet_size for c in t):
                raise ValueError(f"tile {t} uses a letter outside the alphabet")

    def __len__(self) -> int:
        return len(self.tiles)

    def __getitem__(self, i: int) -> Tile:
        return self.tiles[i]

    def letter_name(self, letter: int) -> str:
        if letter < len(self.letter_names):
            return self.letter_names[letter]
        if letter < len(RESERVED_LETTERS):
            return RESERVED_LETTERS[letter]
        return f"L{letter}"

    def tile_name(self, i: int) -> str:
        return self.tile_names[i] if i < len(self.tile_names) else f"T{i + 1}"

    def index_of(self, name: str) -> int:
        names = [self.tile_name(i) for i in range(len(self.tiles))]
        try:
            return names.index(name)
        except ValueError:
            raise KeyError(f"unknown tile {name!r}") from None

    # Side indexes: the pair of corner letters a neighbour must present.
    @cached_property
    def _by_side(self) -> dict[str, dict[tuple[int, int], frozenset[int]]]:
        idx: dict[str, dict] = {s: defaultdict(set) for s in ("n", "s", "w", "e")}
        for i, t in enumerate(self.tiles):
            idx["n"][(t.nw, t.ne)].add(i)
            idx["s"][(t.sw, t.se)].add(i)
            idx["w"][(t.nw, t.sw)].add(i)
            idx["e"][(t.ne, t.se)].add(i)
        return {s: {k: frozenset(v) for k, v in d.items()} for s, d in idx.items()}

    def with_side(self, side: str, letters: tuple[int, int]) -> frozenset[int]:
        """Tiles whose ``side`` ('n', 's', 'w', 'e') carries ``letters``."""
        return self._by_side[side].get(letters, frozenset())


def joins_horizontally(left: Tile, right: Tile) -> bool:
    return left.ne == right.nw and left.se == right.sw


def joins_vertically(upper: Tile, lower: Tile) -> bool:
    return upper.sw == lower.nw and upper.se == lower.ne


class Board:
    """An N x N partial tiling; cells hold tile indices or None."""

    def __init__(self, side: int, cells: Optional[Sequence[Sequence[Cell]]] = None):
        if side < 1:
            raise ValueError("board side must be positive")
        self.side = side
        if cells is None:
            self.cells = [[None] * side for _ in range(side)]
        else:
            if len(cells) != side or any(len(r) != side for r in cells):
                raise ValueError("cells must form a side x side grid")
            self.cells = [list(r) for r in cells]

    @classmethod
    def with_top(cls, top: Sequence[int]) -> Board:
        b = cls(len(top))
        b.cells[0] = list(top)
        return b

    def copy(self) -> Board:
        return Board(self.side, self.cells)

    def __getitem__(self, rc: tuple[int, int]) -> Cell:
        r, c = rc
        return self.cells[r][c]

    def __eq__(self, other) -> bool:
        return isinstance(other, Board) and self.cells == other.cells

    def __repr__(self) -> str:
        return f"Board({self.side}, {self.cells!r})"

    def row(self, r: int) -> tuple[Cell, ...]:
        return tuple(self.cells[r])

    def is_full(self) -> bool:
        return all(c is not None for row in self.cells for c in row)

    def placed_neighbours(self, r: int, c: int) -> int:
        n = self.side
        return sum(
            1
            for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
            if 0 <= rr < n and 0 <= cc < n and self.cells[rr][cc] is not None
        )

    def check_adjacency(self, tiles: TileSet) -> None:
        """Raise ValueError at the first pair of placed tiles that disagree."""
        n = self.side
        for r in range(n):
            for c in range(n):
                t = self.cells[r][c]
                if t is None:
                    continue
                if c + 1 < n and self.cells[r][c + 1] is not None:
                    if not joins_horizontally(tiles[t], tiles[self.cells[r][c + 1]]):
                        raise ValueError(f"mismatch between ({r},{c}) and ({r},{c + 1})")
                if r + 1 < n and self.cells[r + 1][c] is not None:
                    if not joins_vertically(tiles[t], tiles[self.cells[r + 1][c]]):
                        raise ValueError(f"mismatch between ({r},{c}) and ({r + 1},{c})")


def candidates(board: Board, tiles: TileSet, row: int, col: int) -> frozenset[int]:
    """Tile indices that agree with every placed orthogonal neighbour."""
    n = board.side
    if not (0 <= row < n and 0 <= col < n):
        raise IndexError(f"cell ({row},{col}) outside {n}x{n} board")
    if board.cells[row][col] is not None:
        raise ValueError(f"cell ({row},{col}) is not empty")
    result: Optional[frozenset[int]] = None
    cells = board.cells
    if row > 0 and cells[row - 1][col] is not None:
        up = tiles[cells[row - 1][col]]
        result = tiles.with_side("n", (up.sw, up.se))
    if row + 1 < n and cells[row + 1][col] is not None:
        down = tiles[cells[row + 1][col]]
        s = tiles.with_side("s", (down.nw, down.ne))
        result = s if result is None else result & s
    if col > 0 and cells[row][col - 1] is not None:
        left = tiles[cells[row][col - 1]]
        s = tiles.with_side("w", (left.ne, left.se))
        result = s if result is None else result & s
    if col + 1 < n and cells[row][col + 1] is not None:
        right = tiles[cells[row][col + 1]]
        s = tiles.with_side("e", (right.nw, right.sw))
        result = s if result is None else result & s
    if result is None:
        return frozenset(range(len(tiles)))
    return result


@dataclass
class Visit:
    """One look at an eligible empty cell during a sweep."""

    sweep: int
    row: int
    col: int
    n_candidates: int
    placed: Optional[int]


def _sweep_cells(n: int, order: str):
    if order == "row":
        return ((r, c) for r in range(n) for c in range(n))
    if order == "col":
        return ((r, c) for c in range(n) for r in range(n))
    raise ValueError(f"unknown sweep order {order!r}")


def expand(
    board: Board,
    tiles: TileSet,
    order: str = "row",
    trace: Optional[list[Visit]] = None,
) -> Board:
    """Maximal forced extension of ``board``.

    Sweeps the square repeatedly (row-major by default); every empty cell
    with at least one placed neighbour and exactly one candidate receives
    that tile at once.  Stops after a sweep that places nothing.  The input
    board is not modified.  If ``trace`` is given, every visit to an
    eligible cell is appended to it.
    """
    out = board.copy()
    n = out.side
    sweep = 0
    while True:
        placed_any = False
        for r, c in _sweep_cells(n, order):
            if out.cells[r][c] is not None or out.placed_neighbours(r, c) == 0:
                continue
            cand = candidates(out, tiles, r, c)
            chosen = next(iter(cand)) if len(cand) == 1 else None
            if chosen is not None:
                out.cells[r][c] = chosen
                placed_any = True
            if trace is not None:
                trace.append(Visit(sweep, r, c, len(cand), chosen))
        if not placed_any:
            return out
        sweep += 1


Line = tuple[Cell, ...]


def check_line(top: Sequence[Cell], tiles: TileSet) -> None:
    if len(top) < 1:
        raise ValueError("line must have at least one cell")
    for i, t in enumerate(top):
        if t is None:
            raise ValueError(f"top line has a blank at position {i}")
        if not 0 <= t < len(tiles):
            raise ValueError(f"invalid tile index {t} at position {i}")
    for i in range(len(top) - 1):
        if not joins_horizontally(tiles[top[i]], tiles[top[i + 1]]):
            raise ValueError(f"top tiles {i} and {i + 1} do not join")


def tiling_expansion(top: Sequence[int], tiles: TileSet, order: str = "row") -> tuple[Line, TileSet]:
    """Expand ``top`` to a square and return (bottom line, tile set).

    Cells left empty by the expansion appear as None in the bottom line.
    """
    check_line(top, tiles)
    board = expand(Board.with_top(top), tiles, order=order)
    return board.row(board.side - 1), tiles


# ---------------------------------------------------------------------------
# Binary instance encoding


def _gamma(v: int) -> str:
    s = bin(v + 1)[2:]
    return "1" * (len(s) - 1) + "0" + s[1:]


def _read_gamma(bits: str, pos: int) -> tuple[int, int]:
    k = 0
    while pos < len(bits) and bits[pos] == "1":
        k += 1
        pos += 1
    if pos >= len(bits):
        raise ValueError("truncated length prefix")
    pos += 1
    body = bits[pos:pos + k]
    if len(body) != k:
        raise ValueError("truncated length prefix")
    return int("1" + body, 2) - 1, pos + k


def line_bits(n: int, n_tiles: int) -> int:
    """ceil(n * log2(n_tiles + 1)), computed exactly."""
    return ((n_tiles + 1) ** n - 1).bit_length()


def encode_tileset(tiles: TileSet) -> str:
    w = (tiles.alphabet_size - 1).bit_length()
    parts = [_gamma(tiles.alphabet_size), _gamma(len(tiles))]
    for t in tiles.tiles:
        parts.extend(format(c, f"0{w}b") for c in t)
    return "".join(parts)


def decode_tileset(bits: str, pos: int = 0) -> tuple[TileSet, int]:
    alphabet, pos = _read_gamma(bits, pos)
    count, pos = _read_gamma(bits, pos)
    w = (alphabet - 1).bit_length()
    need = 4 * w * count
    if pos + need > len(bits):
        raise ValueError("truncated tile block")
    tiles = []
    for _ in range(count):
        corners = [int(bits[pos + j * w:pos + (j + 1) * w], 2) for j in range(4)]
        tiles.append(Tile(*corners))
        pos += 4 * w
    return TileSet(alphabet, tuple(tiles)), pos


def encode_instance(line: Sequence[Cell], tiles: TileSet) -> str:
    """Tile-set block followed by the line as a base-(tau+1) number.

    Digit tau stands for the blank marker; the line occupies exactly
    ceil(N log2(tau+1)) bits.
    """
    tau = len(tiles)
    if tau < 1:
        raise ValueError("cannot encode a line over an empty tile set")
    value = 0
    for cell in line:
        if cell is not None and not 0 <= cell < tau:
            raise ValueError(f"invalid tile index {cell}")
        value = value * (tau + 1) + (tau if cell is None else cell)
    width = line_bits(len(line), tau)
    body = format(value, f"0{width}b") if width else ""
    return encode_tileset(tiles) + body


def decode_instance(bits: str) -> tuple[Line, TileSet]:
    if any(b not in "01" for b in bits):
        raise ValueError("bit string may contain only 0 and 1")
    tiles, pos = decode_tileset(bits)
    tau = len(tiles)
    if tau < 1:
        raise ValueError("empty tile set")
    body = bits[pos:]
    n = 1
    while line_bits(n, tau) < len(body):
        n += 1
    if line_bits(n, tau) != len(body):
        raise ValueError(f"line block of {len(body)} bits matches no line length")
    value = int(body, 2)
    if value >= (tau + 1) ** n:
        raise ValueError("line value out of range")
    digits = []
    for _ in range(n):
        value, d = divmod(value, tau + 1)
        digits.append(None if d == tau else d)
    return tuple(reversed(digits)), tiles


# ---------------------------------------------------------------------------
# Text formats


def parse_tileset(text: str, source: str = "<tiles>") -> TileSet:
    """Parse ``tiles <alphabet-size>`` followed by ``<name> <nw> <ne> <sw> <se>``.

    Letters are arbitrary tokens.  ``#`` as a whole token is the border
    letter; ``#`` elsewhere starts a comment.
    """
    letters = list(RESERVED_LETTERS)
    size = None
    tiles, names = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _split_with_cols(raw)
        if not toks:
            continue
        # a bare '#' after a complete record opens a trailing comment
        limit = 2 if size is None else 5
        if len(toks) > limit and toks[limit][1] == "#":
            toks = toks[:limit]
        if size is None:
            if toks[0][1] != "tiles" or len(toks) != 2:
                raise ParseError("expected header 'tiles <alphabet-size>'", lineno, toks[0][0], source)
            try:
                size = int(toks[1][1])
            except ValueError:
                raise ParseError("alphabet size must be an integer", lineno, toks[1][0], source) from None
            continue
        if len(toks) != 5:
            raise ParseError("expected '<name> <nw> <ne> <sw> <se>'", lineno, toks[0][0], source)
        name = toks[0][1]
        if name in names:
            raise ParseError(f"duplicate tile name {name!r}", lineno, toks[0][0], source)
        corners = []
        for col, tok in toks[1:]:
            if tok not in letters:
                letters.append(tok)
            corners.append(letters.index(tok))
        if len(letters) > size:
            raise ParseError(f"more than {size} letters used", lineno, toks[-1][0], source)
        t = Tile(*corners)
        if t in tiles:
            raise ParseError("duplicate tile", lineno, toks[0][0], source)
        tiles.append(t)
        names.append(name)
    if size is None:
        raise ParseError("missing 'tiles' header", 1, 1, source)
    try:
        return TileSet(size, tuple(tiles), tuple(letters), tuple(names))
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, source) from None


def _split_with_cols(raw: str) -> list[tuple[int, str]]:
    """Whitespace tokens with 1-based columns; a token starting with '#'
    other than the bare border letter begins a comment."""
    out, i = [], 0
    for part in raw.split():
        i = raw.index(part, i)
        if part.startswith("#") and part != "#":
            break
        if part == "#" and not out:
            break  # a line that starts with '#' is a comment
        out.append((i + 1, part))
        i += len(part)
    return out


def format_tileset(tiles: TileSet) -> str:
    lines = [f"tiles {tiles.alphabet_size}"]
    for i, t in enumerate(tiles.tiles):
        lines.append(" ".join([tiles.tile_name(i)] + [tiles.letter_name(c) for c in t]))
    return "\n".join(lines) + "\n"


def parse_line(text: str, tiles: TileSet, source: str = "<line>") -> Line:
    """Parse ``line <name> <name> ...`` (the ``line`` keyword is optional).

    The token ``.`` stands for a blank cell.
    """
    toks = _split_with_cols(text.strip().splitlines()[0] if text.strip() else "")
    if toks and toks[0][1] == "line":
        toks = toks[1:]
    if not toks:
        raise ParseError("empty line", 1, 1, source)
    cells: list[Cell] = []
    for col, tok in toks:
        if tok == ".":
            cells.append(None)
            continue
        try:
            cells.append(tiles.index_of(tok))
        except KeyError:
            raise ParseError(f"unknown tile {tok!r}", 1, col, source) from None
    return tuple(cells)


def format_line(line: Sequence[Cell], tiles: TileSet, keyword: bool = False) -> str:
    body = " ".join("." if c is None else tiles.tile_name(c) for c in line)
    return f"line {body}" if keyword else body


def figure_tiles(extra: bool = False) -> TileSet:
    """The four-tile example set (optionally with T5 = e r / q q)."""
    text = """\
tiles 12
T1 a x e r
T2 x c r z
T3 e r n s
T4 r z s z
"""
    if extra:
        text += "T5 e r q q\n"
    return parse_tileset(text)
