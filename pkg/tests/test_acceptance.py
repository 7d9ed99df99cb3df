"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line
with its measured runtime against the stated limit."""

import itertools
import math
import random
import statistics
import time
import timeit
from contextlib import contextmanager
from fractions import Fraction as F

import pytest
from scipy.stats import nbinom

from owfkit import gf2, rounding, tableau, tiling, transform, turing, vegas
from owfkit.cli import main as cli_main


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(num, title, limit_s):
        t0 = time.perf_counter()
        ok, note = False, ""
        try:
            yield
            ok = True
        except AssertionError as exc:
            note = f" ({str(exc).splitlines()[0][:120]})" if str(exc) else ""
            raise
        finally:
            dt = time.perf_counter() - t0
            if ok and dt > limit_s:
                ok, note = False, " (over time limit)"
            with capsys.disabled():
                print(f"\n[criterion {num:2d}] {'PASS' if ok else 'FAIL'} {title}: "
                      f"{dt:.4f}s / limit {limit_s}s{note}")
        assert dt <= limit_s, f"criterion {num} took {dt:.2f}s, limit {limit_s}s"

    return run


# 1 --------------------------------------------------------------------------


def test_c01_figure_reproduction(criterion):
    tiles = tiling.figure_tiles()
    top = (tiles.index_of("T1"), tiles.index_of("T2"))
    with criterion(1, "figure tiling expansion [T1,T2] -> [T3,T4]", 1e-3):
        bottom, out_tiles = tiling.tiling_expansion(top, tiles)
    assert [tiles.tile_name(c) for c in bottom] == ["T3", "T4"]
    assert out_tiles == tiles
    per_call = min(timeit.repeat(lambda: tiling.tiling_expansion(top, tiles), number=100, repeat=5)) / 100
    assert per_call < 1e-3, f"{per_call * 1e3:.3f} ms per expansion"


# 2 --------------------------------------------------------------------------


def test_c02_reduction_fidelity(criterion):
    with criterion(2, "compiled tilings replay force_length(m) for |w|<=6, N<=8", 30.0):
        total = 0
        for make in (turing.identity_machine, turing.not_machine, turing.unary_increment_machine):
            m = turing.force_length(make())
            cr = tableau.compile_to_tiles(m)
            for k in range(7):
                for p in itertools.product("01", repeat=k):
                    w = "".join(p)
                    for n in range(max(2, k + 1), 9):
                        rep = tableau.check_instance(cr, w, n)
                        assert rep.got == turing.tm_run(m, w, n - 1), (m.name, w, n, rep)
                        assert rep.forced and rep.full and rep.orders_agree and rep.rows_match, rep
                        total += 1
        assert total == 3 * 373


# 3 --------------------------------------------------------------------------


def test_c03_pair_hash_mean_siblings(criterion):
    with criterion(3, "mean siblings of g(a,x) is exactly 1 - 2^-n", 10.0):
        for n in (2, 3, 4, 5):
            for name in ("zero", "identity", "complement", "square", "shift", "parity"):
                g = transform.pair_hash_function(transform.stock_function(name, n))
                counts = transform.preimage_counts(g, 2 * n)
                pairs = sum(m * (m - 1) for m in counts.values())
                # integer form of mean = 1 - 2^-n over 2^(2n) inputs
                assert pairs * 2 ** n == (2 ** n - 1) * 2 ** (2 * n), (name, n)
                assert transform.sibling_stats(g, 2 * n).mean_siblings == 1 - F(1, 2 ** n)


# 4 --------------------------------------------------------------------------


def test_c04_universal_hashing(criterion):
    with criterion(4, "a*w collides for exactly one a; truncation bound 2^-k + 2^-n", 20.0):
        for n in range(1, 7):
            table = gf2.mul_table(n)
            size = 1 << n
            for w, v in itertools.combinations(range(size), 2):
                diffs = [table[a][w] ^ table[a][v] for a in range(size)]
                assert sum(d == 0 for d in diffs) == 1
                for k in range(n + 1):
                    hits = sum(d >> (n - k) == 0 for d in diffs)
                    assert F(hits, size) <= F(1, 2 ** k) + F(1, 2 ** n), (n, w, v, k)
            # the library path agrees with the table on a sample
            for w, v in {(0, 1), (1, size - 1)} - {(1, 1)}:
                assert transform.hash_collisions(n, w, v) == 1


# 5 --------------------------------------------------------------------------


def _test_measures():
    rng = random.Random(20240601)
    ms = [rounding.random_measure(rng, rng.randint(2, 33)) for _ in range(200)]
    for n in (1, 2, 3, 4):
        ms += [rounding.graph_uniform(n), rounding.graph_edge_uniform(n)]
    return ms


@pytest.fixture(scope="module")
def rounded_cases():
    ms = _test_measures()
    return [(m, rounding.perfect_round(m)) for m in ms]


def test_c05_perfect_rounding(criterion):
    with criterion(5, "perfect_round passes the checker with mu1' >= mu'/4", 10.0):
        for m in _test_measures():
            r = rounding.perfect_round(m)
            rep = rounding.check_perfectly_rounded(r, m)
            assert rep.ok, rep
            for d1, d in zip(r.densities(), m.densities):
                assert 4 * d1 >= d
                assert d1.numerator == 1 and d1.denominator & (d1.denominator - 1) == 0


# 6 --------------------------------------------------------------------------


def test_c06_m_encoding(criterion, rounded_cases):
    with criterion(6, "m-code round trip, binary = linear decode, near-uniformity", 5.0):
        for m, r in rounded_cases:
            dens = r.densities()
            linear = r.N <= 600
            for x in range(r.N):
                bits = rounding.m_encode(r, x)
                assert rounding.m_decode(r, bits) == x
                if linear:
                    assert rounding.m_decode_linear(r, bits) == x
                if bits[0] == "1":
                    assert 1 <= 2 * int(bits, 2) * dens[x] <= 2


# 7 --------------------------------------------------------------------------


def _toy_registry():
    def coin_or_abort(x, budget):
        b = yield vegas.FLIP
        if b:
            return "a"
        yield vegas.Bet(budget.remaining)
        for _ in range(3):
            yield vegas.STEP
        return "c"

    return vegas.GeneratorRegistry((
        vegas.uniform_choice_program(["a", "b", "c", "d"], "four"),
        vegas.LProgram("coin-or-abort", coin_or_abort),
        vegas.emit_program("b"),
        vegas.normalize_to_l(vegas.work_program(8, "d"), 8),
    ), volume=2)


def test_c07_domination(criterion):
    with criterion(7, "complete mixture dominates every generator; 3-sigma over 1e5 draws", 30.0):
        reg = _toy_registry()
        mix = vegas.complete_distribution(reg, None)
        for w, dist in zip(reg.weights, vegas.generator_distributions(reg, None)):
            for y, q in dist.items():
                assert mix[y] >= w * q
        n = 100_000
        counts = {}
        for s in range(n):
            _, res = vegas.sample_complete(reg, None, vegas.DiceStream(s))
            key = vegas.outcome_key(res)
            counts[key] = counts.get(key, 0) + 1
        for y, p in mix.items():
            p = float(p)
            assert abs(counts.get(y, 0) / n - p) <= 3 * math.sqrt(p * (1 - p) / n), (y, counts.get(y), p)


# 8 --------------------------------------------------------------------------


def test_c08_budget_ledger(criterion):
    with criterion(8, "normalize_to_l succeeds w.p. 2^-j exactly; supermartingale in 3 sigma", 30.0):
        b = 4
        for j in range(11):
            t = b * 2 ** j
            p = vegas.normalize_to_l(vegas.work_program(t), t)
            dist, undecided = vegas.exact_outcomes(p, None, b, max_bits=j + 1)
            assert undecided == 0 and dist["done"] == F(1, 2 ** j)
        gambler = vegas.gambler_program(6)
        mean, undecided = vegas.expected_final_volume(gambler, None, 16)
        assert undecided == 0 and mean <= 16
        n = 100_000
        finals = [vegas.run_l(gambler, None, 16, vegas.DiceStream(s)).remaining for s in range(n)]
        avg = sum(finals) / n
        sd = statistics.pstdev(finals)
        assert avg <= 16 + 3 * sd / math.sqrt(n)


# 9 --------------------------------------------------------------------------


def test_c09_multimedian(criterion):
    with criterion(9, "MT(k)=k; NB median within 15%; planted family MT >= T0", 60.0):
        res = vegas.multimedian(lambda rng: None, vegas.always_inverter, 16, 101, seed=1)
        assert res.value == 16
        k, reps = 16, 101
        res = vegas.multimedian(lambda rng: None, vegas.coin_inverter(0.5), k, reps, seed=7)
        exact = k + nbinom.median(k, 0.5)
        rng = random.Random(99)
        sim = statistics.median(
            sum(1 + int(math.log(1 - rng.random()) / math.log(0.5)) for _ in range(k)) for _ in range(2001))
        for oracle in (exact, sim):
            assert abs(res.value - oracle) <= 0.15 * oracle, (res.value, oracle)
        eps, t0 = F(1, 8), 1000
        kk = vegas.planted_k(2, eps)
        assert kk == 64
        res = vegas.multimedian(vegas.planted_family(float(eps)), vegas.planted_inverter(t0), kk, 101, seed=3)
        assert res.value >= t0


# 10 -------------------------------------------------------------------------


def test_c10_optimal_inversion(criterion):
    with criterion(10, "inverting the figure instance at the exhaustive preimage rate", 10.0):
        tiles = tiling.figure_tiles()
        lines = list(itertools.product(range(4), repeat=2))
        reg = vegas.GeneratorRegistry((vegas.uniform_choice_program(lines, "lines"),))
        image = (tiles.index_of("T3"), tiles.index_of("T4"))
        f = lambda line: tiling.tiling_expansion(line, tiles)[0]  # noqa: E731
        preimages = [ln for ln in lines if vegas.is_preimage(f, ln, image)]
        assert preimages
        inv = vegas.invert_optimal(f, image, reg, cap=1000, seed=0)
        assert inv.solved and f(inv.witness) == image
        freq = vegas.success_frequency(f, image, reg, 20_000, seed=5)
        p = len(preimages) / len(lines)
        assert abs(freq.rate - p) <= 3 * math.sqrt(p * (1 - p) / freq.trials), (freq.rate, p)


# 11 -------------------------------------------------------------------------


def test_c11_cli_reproducibility(criterion, tmp_path, capsys):
    u = tmp_path / "m.measure"
    u.write_text("measure 3\n0 1/3\n1 1/6\n2 1/2\n")
    commands = [
        ["bench", "mt", "--k", "16", "--reps", "101", "--seed", "7"],
        ["bench", "mt", "--family", "planted", "--k", "64", "--reps", "11", "--seed", "3"],
        ["search", "invert", "--image", "T3 T4", "--trials", "20", "--seed", "4"],
        ["search", "kl", "--image", "T3 T4", "--trials", "3000", "--seed", "4"],
        ["owf", "compare", "--fn", "shift", "--n", "4"],
        ["dist", "round", "--measure", str(u)],
        ["tm", "check", "--machine", "not", "--force-length", "--max-len", "2", "--max-width", "4"],
    ]
    with criterion(11, "CLI benchmarks are byte-identical on rerun", 60.0):
        for i, cmd in enumerate(commands):
            outs = []
            for rep in range(2):
                path = tmp_path / f"out{i}_{rep}.csv"
                assert cli_main(cmd + ["--out", str(path)]) == 0, cmd
                outs.append(path.read_bytes())
            assert outs[0] == outs[1] and outs[0], cmd
