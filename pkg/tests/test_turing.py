import itertools

import pytest
from hypothesis import given, strategies as st

from owfkit import turing
from owfkit.tiling import ParseError
from owfkit.turing import STOCK, force_length, program_prefix_embed, tm_run

words = st.text(alphabet="01", max_size=8)


def all_words(max_len, alpha="01"):
    for k in range(max_len + 1):
        for p in itertools.product(alpha, repeat=k):
            yield "".join(p)


def test_not_examples():
    m = turing.not_machine()
    assert tm_run(m, "01", 10) == "10"
    # one flip per step: two steps flip the first two bits only
    assert tm_run(m, "0101", 2) == "1001"
    assert tm_run(m, "", 5) == ""


def test_identity_and_increment():
    assert tm_run(turing.identity_machine(), "0110", 5) == "0110"
    inc = turing.unary_increment_machine()
    assert tm_run(inc, "1100", 10) == "1110"
    assert tm_run(inc, "111", 10) == "111"  # saturated


def test_budget_zero_returns_input():
    assert tm_run(turing.not_machine(), "0110", 0) == "0110"
    with pytest.raises(ValueError):
        tm_run(turing.not_machine(), "01", -1)


def test_left_edge_clamps():
    m = turing.Machine(("s", "t", "h"), ("0", "1", "_", "$"), "s", "h",
                       {**{("s", a): ("t", a, "L") for a in "01_$"},
                        **{("t", a): ("h", "1", "S") for a in "01_$"}})
    cfg = turing.run_to_halt(m, "00")
    assert cfg.head == 0 and cfg.tape == "10$"


def test_rejects_foreign_input():
    with pytest.raises(ValueError):
        tm_run(turing.not_machine(), "0$1", 3)


def test_machine_validation():
    with pytest.raises(ValueError):
        turing.Machine(("s", "h"), ("0", "_", "$"), "s", "h", {("s", "0"): ("h", "0", "S")})
    with pytest.raises(ValueError):
        turing.Machine(("s", "h"), ("0", "_", "$"), "s", "h",
                       {**{("s", a): ("h", a, "S") for a in "0_$"}, ("h", "0"): ("h", "0", "S")})
    with pytest.raises(ValueError):
        turing.Machine(("s", "h"), ("00", "_", "$"), "s", "h", {})


@pytest.mark.parametrize("name", sorted(STOCK))
def test_force_length_preserves_length(name):
    m = force_length(STOCK[name]())
    for w in all_words(5):
        cfg = turing.run_to_halt(m, w, limit=1000)
        assert len(cfg.output(m)) == len(w), (w, cfg)


@pytest.mark.parametrize("name", ["identity", "not", "increment", "write1"])
def test_force_length_agrees_with_length_preserving_machines(name):
    base = STOCK[name]()
    m = force_length(base)
    for w in all_words(5):
        assert turing.run_to_halt(m, w).output(m) == turing.run_to_halt(base, w).output(base)


def test_force_length_pads_short_outputs():
    m = force_length(turing.truncating_machine())
    assert turing.run_to_halt(m, "000").output(m) == "1__"
    assert turing.run_to_halt(m, "").output(m) == ""


def test_force_length_not_size():
    m = force_length(turing.not_machine())
    assert len(m.states) == 6 and len(m.alphabet) == 10


@given(st.text(alphabet="01", max_size=3), words)
def test_prefix_embed_keeps_prefix(prefix, payload):
    m = program_prefix_embed(turing.not_machine(), prefix)
    out = turing.run_to_halt(m, prefix + payload, limit=10_000).output(m)
    assert out.startswith(prefix)
    assert out[len(prefix):] == tm_run(turing.not_machine(), payload, 100)


def test_prefix_embed_example_and_empty_prefix():
    m = program_prefix_embed(turing.not_machine(), "11")
    assert turing.run_to_halt(m, "1101").output(m) == "1110"
    assert program_prefix_embed(turing.not_machine(), "") == turing.not_machine()


def test_configurations_repeat_after_halt():
    cfgs = list(turing.configurations(turing.identity_machine(), "01", 3))
    assert len(cfgs) == 4
    assert cfgs[1] == cfgs[2] == cfgs[3]


@pytest.mark.parametrize("name", sorted(STOCK))
def test_format_parse_round_trip(name):
    for m in (STOCK[name](), force_length(STOCK[name]())):
        assert turing.parse_machine(turing.format_machine(m)) == m


@pytest.mark.parametrize("text,line", [
    ("states s h\n", 1),
    ("machine x\nstates s h\nalphabet 0 _ $\nstart s\nhalt h\ns 0 -> h 0 X\n", 6),
    ("machine x\nstates s h\nalphabet 0 _ $\nstart s\nhalt h\ns 0 h 0 S\n", 6),
    ("machine x\nstates s h\nalphabet 0 _ $\nstart s\n", 1),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        turing.parse_machine(text, source="m.tm")
    assert exc.value.line == line
