from __future__ import annotations

import random
from fractions import Fraction

import pytest

from corpus import miniram_corpus
from enumreg.errors import CapabilityError, ContractViolation, LoadError, SpecError
from enumreg.machine import (
    ChunkedFile,
    DirectoryFile,
    FixtureSpec,
    FlatFile,
    LazyCopyFile,
    assemble,
    load,
    make_fixture,
    parse_fixture,
    parse_storage,
    run_solo,
)

STORAGES = ("flat", "chunks:2", "chunks:16", "directory")


def trace(machine):
    out = []
    while not machine.is_done():
        sol = machine.step()
        if sol is not None:
            out.append((machine.steps, sol))
    return out, machine.steps


# -- MiniRAM ----------------------------------------------------------------


def test_halt_only_program_is_done_after_one_step():
    m = load("halt")
    assert not m.is_done()
    assert m.step() is None
    assert m.is_done()
    assert m.steps == 1


def test_step_after_done_is_a_contract_violation():
    m = load("halt")
    m.step()
    with pytest.raises(ContractViolation):
        m.step()


COUNT = """
        loadi r1, 1
        loadi r2, 1
loop:   br eq, r1, r0, last
        out r1, r1
        add r1, r1, r2
        jmp loop
last:   out r1, r1
        halt
"""


def test_hand_traced_counting_loop():
    # 1 loadi, 2 loadi, 3 br (1 != 2), 4 out -> (1,), 5 add, 6 jmp,
    # 7 br (2 == 2), 8 out -> (2,) with the following halt folded in
    got, steps = trace(load(COUNT, [2]))
    assert got == [(4, (1,)), (8, (2,))]
    assert steps == 8


def test_three_step_loop_emits_every_third_step():
    src = """
        loadi r2, 1
loop:   add r1, r1, r2
        out r0, r0
        br lt, r1, r3, loop
        halt
    """
    # r3 = 2 from the input vector (r0, r1, r2, r3) = (9, 0, 0, 2)
    got, steps = trace(load(src, [9, 0, 0, 2]))
    assert got == [(3, (9,)), (6, (9,))]
    # the closing branch and halt cost two more steps
    assert steps == 8


def test_running_off_the_end_halts():
    got, steps = trace(load("out r0, r1", [3, 4]))
    assert got == [(1, (3, 4))]
    assert steps == 1


def test_indirect_load_and_store():
    src = """
        loadi r1, 40
        loadi r2, 7
        sti r1, r2
        ldi r3, r1
        out r3, r3
        halt
    """
    got, _ = trace(load(src))
    assert got == [(5, (7,))]


@pytest.mark.parametrize(
    "src, index",
    [
        ("frob r1", 0),
        ("loadi r1, 2\nadd r1, r2", 1),
        ("jmp nowhere", 0),
        ("out r3, r1", 0),
        ("loadi x1, 3", 0),
        ("br xx, r0, r0, a\na: halt", 0),
    ],
)
def test_malformed_programs_name_the_instruction(src, index):
    with pytest.raises(LoadError) as err:
        assemble(src)
    assert err.value.index == index


def test_duplicate_label_rejected():
    with pytest.raises(LoadError):
        assemble("a: halt\na: halt")


@pytest.mark.parametrize("name, src, inputs, expected", miniram_corpus(), ids=lambda v: v if isinstance(v, str) and len(v) < 16 else "")
def test_corpus_programs_against_python(name, src, inputs, expected):
    assert run_solo(load(src, inputs)) == expected


@pytest.mark.parametrize("name, src, inputs, expected", miniram_corpus()[:8], ids=lambda v: v if isinstance(v, str) and len(v) < 16 else "")
def test_storage_is_transparent(name, src, inputs, expected):
    traces = {tag: trace(load(src, inputs, tag)) for tag in STORAGES}
    assert len(set(map(repr, traces.values()))) == 1


# -- storage ----------------------------------------------------------------


def linear_chunk(t: int, factor: int) -> tuple[int, int]:
    k, base = 0, 0
    while True:
        size = factor**k
        if t < base + size:
            return k, t - base
        base += size
        k += 1


@pytest.mark.parametrize("factor", [2, 3, 16])
def test_chunk_resolution_matches_linear_scan(factor):
    f = ChunkedFile(factor)
    for t in range(3000):
        assert f.resolve(t) == linear_chunk(t, factor)


def test_directory_resolution_and_overflow():
    d = DirectoryFile(slots=3)
    # slot k holds registers 2**k - 1 .. 2**(k+1) - 2
    assert [d.resolve(t) for t in (0, 1, 2, 3, 6, 7)] == [(0, 0), (1, 0), (1, 1), (2, 0), (2, 3), (3, 0)]
    for t in (0, 5, 6, 7, 100, 5000):
        d.write(t, t + 1)
    assert [d.read(t) for t in (0, 5, 6, 7, 100, 5000, 4999)] == [1, 6, 7, 8, 101, 5001, 0]
    assert len(d._overflow) > 0


@pytest.mark.parametrize("tag", STORAGES + ("directory:4",))
def test_files_read_zero_and_track_high_water(tag):
    f = parse_storage(tag)()
    assert f.read(10) == 0
    assert f.high_water == 11
    f.write(3, 9)
    assert f.read(3) == 9
    assert f.dump()[3] == 9
    c = f.copy()
    f.write(3, 1)
    assert c.read(3) == 9


@pytest.mark.parametrize("tag", ["", "chunks", "chunks:1", "chunks:x", "directory:0", "heap"])
def test_bad_storage_tags(tag):
    with pytest.raises(SpecError):
        parse_storage(tag)


def test_lazy_copy_keeps_value_written_later_at_source():
    src = FlatFile()
    for t in range(8):
        src.write(t, 10 + t)
    lazy = LazyCopyFile(src)
    src.write(5, -1)  # before the sweep reaches cell 5
    assert lazy.read(5) == 15
    assert src.read(5) == -1


def test_lazy_sweep_finishes_within_register_count_steps():
    m = load("loadi r7, 3\nloop: add r1, r1, r7\njmp loop")
    for _ in range(5):
        m.step()
    used = m.registers.high_water
    clone = m.snapshot("lazy")
    assert clone.lazy_copy_active()
    steps = 0
    while clone.lazy_copy_active():
        clone.step()
        steps += 1
    assert steps <= used
    assert clone.registers.source is None
    assert clone.registers.read(1) == m.registers.read(1) + 3 * (steps // 2 + steps % 2)


@pytest.mark.parametrize("mode", ["eager", "lazy"])
def test_snapshot_continues_identically(mode):
    name, src, inputs, _ = miniram_corpus()[8]  # sieve: uses indirect memory
    m = load(src, inputs, "chunks:2")
    for _ in range(60):
        m.step()
    c = m.snapshot(mode)
    assert trace(c) == trace(m)


def test_snapshot_mode_must_be_known():
    with pytest.raises(CapabilityError):
        load("halt").snapshot("deep")


# -- fixtures ---------------------------------------------------------------


def test_bursty_schedule_per_step():
    m = make_fixture(FixtureSpec("bursty", (4, 2)))
    seen = [m.step() for _ in range(13)]
    assert seen[:4] == [0, 1, 2, 3]
    assert seen[4:12] == [None] * 8
    assert seen[12] == 4
    assert m.is_done()


def test_fixture_schedules():
    assert FixtureSpec("bursty", (8, 3)).schedule() == tuple(range(1, 9)) + (33,)
    assert FixtureSpec("adversary", (3, 10)).schedule() == (1, 2, 3, 10)
    assert FixtureSpec("scripted", (1, 1, 5)).schedule() == (1, 2, 7)
    assert FixtureSpec("uniform", (3, 4)).schedule() == (4, 8, 12)
    assert FixtureSpec("triangular", (3, 2)).schedule() == (2, 6, 12)


def test_fixture_incremental_delay():
    assert FixtureSpec("bursty", (8, 3)).incremental_delay() == Fraction(33, 9)
    assert FixtureSpec("adversary", (4, 100)).incremental_delay() == Fraction(20)


@pytest.mark.parametrize("text", ["bursty", "bursty:", "bursty:8", "bursty:8,x", "adversary:5,5", "wave:1,2", "uniform:0,3", "scripted:1,-1"])
def test_fixture_grammar_is_strict(text):
    with pytest.raises(SpecError):
        parse_fixture(text)


def test_fixture_round_trip():
    spec = parse_fixture("scripted:3,1,4")
    assert str(spec) == "scripted:3,1,4"
    assert run_solo(make_fixture(spec)) == [0, 1, 2]


def test_random_snapshot_points_keep_fixture_trace():
    rng = random.Random(3)
    spec = FixtureSpec("bursty", (20, 2))
    for _ in range(20):
        m = make_fixture(spec)
        for _ in range(rng.randint(0, 40)):
            m.step()
        assert trace(m.snapshot()) == trace(m)
