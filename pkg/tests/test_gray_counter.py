from __future__ import annotations

import pytest

from enumreg.gray_counter import GrayCounter, gray_decode, gray_encode


def counter_at(v: int) -> GrayCounter:
    c = GrayCounter()
    for _ in range(v):
        c.inc()
    return c


def test_fresh_counter_is_zero_without_mbit():
    c = GrayCounter()
    assert c.is_zero()
    assert c.value() == 0
    assert c.mbit() is None
    assert c.ones_stack == []


def test_first_increment_sets_low_bit():
    c = counter_at(1)
    assert c.word() == "1"
    assert c.mbit() == 0


def test_eight_increments_give_reflected_code():
    # brute force: reflected Gray code of 8 is 8 ^ 4 = 12 = 0b1100
    c = counter_at(8)
    assert c.word() == format(8 ^ (8 >> 1), "b") == "1100"
    assert c.mbit() == 3


@pytest.mark.parametrize(
    "start, word_before, stack_before, word_after, stack_after",
    [
        (2, "011", [0, 1], "010", [1]),
        (5, "111", [0, 1, 2], "101", [0, 2]),
    ],
)
def test_worked_transitions(start, word_before, stack_before, word_after, stack_after):
    c = counter_at(start)
    # counters grow on demand, so compare against the code word padded to 3 digits
    assert c.word().zfill(3) == word_before
    assert c.ones_stack == stack_before
    c.inc()
    assert c.word().zfill(3) == word_after
    assert c.ones_stack == stack_after
    assert c.value() == start + 1


def test_growth_at_saturation():
    c = counter_at(7)
    assert c.word() == "100"
    assert c.ones_stack == [2]
    assert c.capacity == 3
    c.inc()
    assert c.capacity == 4
    assert c.word() == "1100"
    assert c.ones_stack == [2, 3]
    assert c.mbit() == 3


@pytest.mark.parametrize("v, expected", [(1, 0), (6, 2), (1024, 10)])
def test_mbit_examples(v, expected):
    assert counter_at(v).mbit() == expected


def test_stack_tracks_one_positions():
    c = GrayCounter()
    for v in range(1, 600):
        c.inc()
        g = gray_encode(v)
        ones = [i for i in range(g.bit_length()) if g >> i & 1]
        assert c.ones_stack == ones
        assert c.value() == v
        assert c.stack_ops <= 2


def test_encode_decode_round_trip():
    for v in range(4096):
        g = gray_encode(v)
        assert gray_decode(g) == v
        assert bin(g ^ gray_encode(v + 1)).count("1") == 1


def test_copy_is_independent():
    c = counter_at(5)
    d = c.copy()
    d.inc()
    assert c.value() == 5
    assert d.value() == 6
