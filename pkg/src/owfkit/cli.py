"""Command-line entry point: ``owfkit <group> <command> [options]``.

Tabular output is CSV with a fixed header row.  All randomness comes from
``--seed``, so equal arguments give byte-identical output.  Exit status is
0 on success, 1 when a check fails and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import gf2, rounding, tableau, tiling, transform, turing, vegas
from .tiling import ParseError


class CheckFailed(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _int(s: str) -> int:
    return int(s, 0)


# ---------------------------------------------------------------------------
# tile


def _tiles(args) -> tiling.TileSet:
    if args.tiles == "figure":
        return tiling.figure_tiles()
    return tiling.parse_tileset(_read(args.tiles), source=args.tiles)


def cmd_tile_expand(args) -> str:
    tiles = _tiles(args)
    top = tiling.parse_line(args.top, tiles, source="--top")
    if any(c is None for c in top):
        raise ParseError("top line may not contain blanks", 1, 1, "--top")
    try:
        tiling.check_line(top, tiles)
    except ValueError as exc:
        raise CheckFailed(str(exc)) from None
    bottom, _ = tiling.tiling_expansion(top, tiles, order=args.order)
    return tiling.format_line(bottom, tiles) + "\n"


# ---------------------------------------------------------------------------
# tm


def _machine(args) -> turing.Machine:
    if args.machine in turing.STOCK:
        m = turing.STOCK[args.machine]()
    else:
        m = turing.parse_machine(_read(args.machine), source=args.machine)
    if args.force_length:
        m = turing.force_length(m)
    return m


def cmd_tm_run(args) -> str:
    m = _machine(args)
    try:
        return turing.tm_run(m, args.input, args.budget) + "\n"
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, "--input") from None


def cmd_tm_compile(args) -> str:
    cr = tableau.compile_to_tiles(_machine(args), letter_budget=args.letter_budget)
    if args.input is not None:
        width = args.width or len(args.input) + 1
        return tiling.format_line(cr.encode(args.input, width), cr.tiles, keyword=True) + "\n"
    return tiling.format_tileset(cr.tiles)


def cmd_tm_check(args) -> str:
    cr = tableau.compile_to_tiles(_machine(args), letter_budget=args.letter_budget)
    reports = tableau.check_reduction(cr, args.max_len, args.max_width, alphabet=args.alphabet)
    rows = [(r.word, r.width, r.expected, "" if r.got is None else r.got, int(r.forced),
             int(r.orders_agree), int(r.ok)) for r in reports]
    out = _csv(["word", "width", "expected", "got", "forced", "orders_agree", "ok"], rows)
    if not all(r.ok for r in reports):
        raise CheckFailed(out)
    return out


# ---------------------------------------------------------------------------
# gf2


def cmd_gf2_mul(args) -> str:
    a, b = gf2.FieldElement(args.n, args.a), gf2.FieldElement(args.n, args.b)
    return f"{gf2.mul(a, b).value}\n"


def cmd_gf2_inv(args) -> str:
    return f"{gf2.inv(gf2.FieldElement(args.n, args.a)).value}\n"


def cmd_gf2_table(args) -> str:
    if args.n > 8:
        raise ValueError("tables are limited to n <= 8")
    table = gf2.mul_table(args.n)
    return _csv(["a", "b", "product"],
                ((a, b, p) for a, row in enumerate(table) for b, p in enumerate(row)))


# ---------------------------------------------------------------------------
# owf


def _function(args) -> transform.CandidateFunction:
    f = transform.stock_function(args.fn, args.n)
    return transform.pair_hash_function(f) if getattr(args, "pair", False) else f


def cmd_owf_stats(args) -> str:
    f = _function(args)
    st = transform.sibling_stats(f, f.width)
    return _csv(["multiplicity", "count"], st.rows())


def cmd_owf_compare(args) -> str:
    f = transform.stock_function(args.fn, args.n)
    rows = []
    for h in (f, transform.pair_hash_function(f)):
        s = transform.security(h)
        st = transform.sibling_stats(h, h.width)
        rows.append((s.name, s.width, f"{s.mean_log2:.6f}", _frac(s.mean), f"{s.max_log2:.6f}",
                     _frac(st.mean_siblings)))
    return _csv(["function", "width", "mean_log2_security", "mean_security",
                 "max_log2_security", "mean_siblings"], rows)


# ---------------------------------------------------------------------------
# dist


def _measure(path: str) -> rounding.Measure:
    return rounding.parse_measure(_read(path), source=path)


def cmd_dist_round(args) -> str:
    r = rounding.perfect_round(_measure(args.measure))
    rows = [(x, _frac(c), _frac(d), code) for x, c, d, code in rounding.rounding_rows(r)]
    return _csv(["x", "mu1", "density", "code"], rows)


def cmd_dist_check(args) -> str:
    m = _measure(args.measure)
    try:
        r = rounding.RoundedDistribution.from_measure(_measure(args.rounded) if args.rounded else m)
    except ValueError as exc:
        raise CheckFailed(f"fail\n{exc}\n") from None
    rep = rounding.check_perfectly_rounded(r, m)
    if not rep.ok:
        raise CheckFailed(str(rep) + "\n")
    return "pass\n"


def cmd_dist_encode(args) -> str:
    r = rounding.perfect_round(_measure(args.measure))
    if args.x is not None:
        return rounding.m_encode(r, args.x) + "\n"
    return _csv(["x", "code"], ((x, rounding.m_encode(r, x)) for x in range(r.N)))


# ---------------------------------------------------------------------------
# search and bench


def _line_registry(tiles: tiling.TileSet, width: int) -> vegas.GeneratorRegistry:
    lines = list(itertools.product(range(len(tiles)), repeat=width))
    size = 1
    while size < len(lines):
        size *= 2
    # pad to a power of two with None, which is never a preimage
    padded = lines + [None] * (size - len(lines))
    return vegas.GeneratorRegistry((vegas.uniform_choice_program(padded, f"lines({width})"),),
                                   volume=64)


def _tiling_problem(args):
    tiles = _tiles(args)
    image = tiling.parse_line(args.image, tiles, source="--image")
    f = lambda line: tiling.tiling_expansion(line, tiles)[0]  # noqa: E731
    return tiles, image, f, _line_registry(tiles, len(image))


def cmd_search_invert(args) -> str:
    tiles, image, f, reg = _tiling_problem(args)
    rows = []
    for t in range(args.trials):
        seed = args.seed + t
        inv = vegas.invert_optimal(f, image, reg, args.cap, seed=seed)
        wit = tiling.format_line(inv.witness, tiles) if inv.solved else ""
        rows.append((seed, int(inv.solved), inv.runs, wit, f"{inv.log2_security:.6f}"))
    return _csv(["seed", "solved", "runs", "witness", "log2_security"], rows)


def cmd_search_kl(args) -> str:
    tiles, image, f, reg = _tiling_problem(args)
    member = lambda line: vegas.is_preimage(f, line, image)  # noqa: E731
    est = vegas.kl_estimate(reg, member, image, args.trials, seed=args.seed)
    fmt = lambda v: "" if v is None else f"{v:.6f}"  # noqa: E731
    return _csv(["hits", "trials", "kl", "kl_lower", "kl_upper"],
                [(est.hits, est.trials, fmt(est.point), fmt(est.lower), fmt(est.upper))])


def cmd_bench_mt(args) -> str:
    if args.family == "coin":
        gen, inv = (lambda rng: None), vegas.coin_inverter(args.p)
    else:
        gen, inv = vegas.planted_family(args.eps), vegas.planted_inverter(args.t0)
    res = vegas.multimedian(gen, inv, args.k, args.reps, seed=args.seed, cap=args.cap)
    return _csv(["repetition", "trials", "solved", "seed"], vegas.mt_csv_rows(res))


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="owfkit", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    groups = p.add_subparsers(dest="group", required=True)

    def command(group, name, func, help_text):
        sp = group.add_parser(name, help=help_text, description=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write output here instead of standard output")
        return sp

    g = groups.add_parser("tile", help="tiling expansion").add_subparsers(dest="cmd", required=True)
    sp = command(g, "expand", cmd_tile_expand,
                 "Expand a top line; prints the bottom line as tile names.")
    sp.add_argument("--tiles", required=True, help="tile-set file, or 'figure' for the four example tiles")
    sp.add_argument("--top", required=True, help="tile names, e.g. 'T1 T2'")
    sp.add_argument("--order", choices=("row", "col"), default="row")

    g = groups.add_parser("tm", help="Turing machines and their tile compilation").add_subparsers(
        dest="cmd", required=True)

    def machine_args(sp):
        sp.add_argument("--machine", required=True,
                        help=f"machine file or stock name ({', '.join(turing.STOCK)})")
        sp.add_argument("--force-length", action="store_true", help="wrap with the length-forcing transform")

    sp = command(g, "run", cmd_tm_run, "Run a machine; prints the output word.")
    machine_args(sp)
    sp.add_argument("--input", required=True)
    sp.add_argument("--budget", type=int, required=True)
    sp = command(g, "compile", cmd_tm_compile,
                 "Compile to a tile set (tile-set text), or with --input print the encoded top line.")
    machine_args(sp)
    sp.add_argument("--letter-budget", type=int, default=tableau.DEFAULT_LETTER_BUDGET)
    sp.add_argument("--input")
    sp.add_argument("--width", type=int)
    sp = command(g, "check", cmd_tm_check,
                 "Compare expansion with simulation. CSV: word,width,expected,got,forced,orders_agree,ok.")
    machine_args(sp)
    sp.add_argument("--letter-budget", type=int, default=tableau.DEFAULT_LETTER_BUDGET)
    sp.add_argument("--max-len", type=int, default=3)
    sp.add_argument("--max-width", type=int, default=5)
    sp.add_argument("--alphabet", default="01")

    g = groups.add_parser("gf2", help="GF(2^n) arithmetic").add_subparsers(dest="cmd", required=True)
    sp = command(g, "mul", cmd_gf2_mul, "Product of a and b; prints an integer.")
    for name in ("--n", "--a", "--b"):
        sp.add_argument(name, type=_int, required=True)
    sp = command(g, "inv", cmd_gf2_inv, "Inverse of a; prints an integer.")
    for name in ("--n", "--a"):
        sp.add_argument(name, type=_int, required=True)
    sp = command(g, "table", cmd_gf2_table, "Multiplication table. CSV: a,b,product.")
    sp.add_argument("--n", type=_int, required=True)

    g = groups.add_parser("owf", help="hash transforms and sibling statistics").add_subparsers(
        dest="cmd", required=True)
    fns = ", ".join(transform.STOCK_FUNCTIONS)
    sp = command(g, "stats", cmd_owf_stats, "Preimage multiplicities. CSV: multiplicity,count.")
    sp.add_argument("--fn", required=True, help=f"one of {fns}")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--pair", action="store_true", help="analyse g(a,x) = (a, f(x)+ax) instead of f")
    sp = command(g, "compare", cmd_owf_compare,
                 "Exhaustive security of f and g. CSV: function,width,mean_log2_security,"
                 "mean_security,max_log2_security,mean_siblings.")
    sp.add_argument("--fn", required=True, help=f"one of {fns}")
    sp.add_argument("--n", type=int, required=True)

    g = groups.add_parser("dist", help="perfect rounding and m-codes").add_subparsers(
        dest="cmd", required=True)
    sp = command(g, "round", cmd_dist_round, "Perfectly round a measure. CSV: x,mu1,density,code.")
    sp.add_argument("--measure", required=True)
    sp = command(g, "check", cmd_dist_check,
                 "Check that a measure (or --rounded) is perfectly rounded; prints pass or the violations.")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--rounded")
    sp = command(g, "encode", cmd_dist_encode, "m-codes after rounding. CSV: x,code (or one code with --x).")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--x", type=int)

    g = groups.add_parser("search", help="inversion by sampling").add_subparsers(dest="cmd", required=True)
    for name, func, text in (
        ("invert", cmd_search_invert,
         "Invert a tiling instance by uniform top lines. CSV: seed,solved,runs,witness,log2_security."),
        ("kl", cmd_search_kl, "Estimate Kl of the preimage set. CSV: hits,trials,kl,kl_lower,kl_upper."),
    ):
        sp = command(g, name, func, text)
        sp.add_argument("--tiles", default="figure")
        sp.add_argument("--image", required=True, help="bottom line as tile names")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=1 if name == "invert" else 10000)
        sp.add_argument("--cap", type=int, default=1000)

    g = groups.add_parser("bench", help="benchmarks").add_subparsers(dest="cmd", required=True)
    sp = command(g, "mt", cmd_bench_mt,
                 "Multimedian-time repetitions. CSV: repetition,trials,solved,seed.")
    sp.add_argument("--k", type=int, default=16)
    sp.add_argument("--reps", type=int, default=101)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--family", choices=("coin", "planted"), default="coin")
    sp.add_argument("--p", type=float, default=0.5, help="per-trial success probability (coin)")
    sp.add_argument("--eps", type=float, default=0.125, help="hard fraction (planted)")
    sp.add_argument("--t0", type=int, default=1000, help="attempts a hard instance needs (planted)")
    sp.add_argument("--cap", type=int)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    status = 0
    try:
        out = args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        out, status = str(exc), 1
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
