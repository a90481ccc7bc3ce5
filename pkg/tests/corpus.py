"""Seeded corpora shared by the unit and acceptance tests."""

from __future__ import annotations

import random

from enumreg.dnf import DnfFormula, parse_dnf
from enumreg.machine import FixtureSpec


def random_fixtures(count: int, seed: int = 2024, max_solutions: int = 4096) -> list[FixtureSpec]:
    """Mixed bursty / adversary / scripted / uniform fixtures with S <= max_solutions.

    Sizes are drawn log-uniformly so small and large instances both appear.
    """
    rng = random.Random(seed)
    families = ("bursty", "adversary", "scripted", "uniform")
    out = []
    for k in range(count):
        fam = families[k % 4]
        size = max(1, int(2 ** rng.uniform(0, 12)))
        if fam == "bursty":
            s = min(size, max_solutions - 1)
            out.append(FixtureSpec("bursty", (s, rng.randint(1, 8))))
        elif fam == "adversary":
            s = min(size, max_solutions - 1)
            out.append(FixtureSpec("adversary", (s, s + rng.randint(1, 8 * s))))
        elif fam == "scripted":
            n = min(size, 512)
            out.append(FixtureSpec("scripted", tuple(rng.randint(1, 12) for _ in range(n))))
        else:
            out.append(FixtureSpec("uniform", (min(size, max_solutions), rng.randint(1, 8))))
    return out


def random_dnf(rng: random.Random, max_vars: int = 12, max_terms: int = 64) -> DnfFormula:
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_terms)
    lines = [f"p dnf {n} {m}"]
    for _ in range(m):
        width = rng.randint(1, n)
        lits = [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), width)]
        lines.append(" ".join(map(str, lits)) + " 0")
    return parse_dnf("\n".join(lines) + "\n")


def dnf_corpus(count: int, seed: int = 7, **kw) -> list[DnfFormula]:
    rng = random.Random(seed)
    return [random_dnf(rng, **kw) for _ in range(count)]


# ---------------------------------------------------------------------------
# MiniRAM corpus: (name, source, inputs, expected outputs computed in Python)
# ---------------------------------------------------------------------------

_COUNT = """
        loadi r1, 1
        loadi r2, 1
loop:   br eq, r1, r0, last
        out r1, r1
        add r1, r1, r2
        jmp loop
last:   out r1, r1
        halt
"""

_PAIRS = """
        loadi r9, 1
        loadi r1, 1
outer:  add r2, r1, r9
inner:  br gt, r2, r0, next
        out r1, r2
        add r2, r2, r9
        jmp inner
next:   add r1, r1, r9
        br lt, r1, r0, outer
        halt
"""

_SQUARES = """
        loadi r9, 1
        loadi r1, 1
loop:   mul r3, r1, r1
        out r3, r3
        add r1, r1, r9
        br le, r1, r0, loop
"""

_FIB = """
        loadi r9, 1
        loadi r1, 0
        loadi r2, 1
        loadi r5, 0
loop:   out r1, r1
        add r3, r1, r2
        add r1, r2, r0
        sub r1, r1, r0
        add r1, r2, r5
        add r2, r3, r5
        add r4, r4, r9
        br lt, r4, r0, loop
"""

_TABLE = """
        loadi r9, 1
        loadi r1, 1
outer:  loadi r2, 1
inner:  mul r3, r1, r2
        out r1, r3
        add r2, r2, r9
        br le, r2, r0, inner
        add r1, r1, r9
        br le, r1, r0, outer
"""

_POWERS = """
        loadi r9, 1
        loadi r8, 2
        loadi r1, 1
        loadi r4, 0
loop:   out r1, r1
        mul r1, r1, r8
        add r4, r4, r9
        br le, r4, r0, loop
"""

_COUNTDOWN = """
        loadi r9, 1
        loadi r8, 1
        add r1, r0, r8
        sub r1, r1, r9
loop:   out r1, r1
        sub r1, r1, r9
        br ge, r1, r8, loop
"""

_TRIANGULAR = """
        loadi r9, 1
        loadi r1, 1
outer:  loadi r2, 0
spin:   add r2, r2, r9
        br lt, r2, r1, spin
        out r1, r1
        add r1, r1, r9
        br le, r1, r0, outer
"""

_SIEVE = """
        loadi r9, 1
        loadi r7, 100
        loadi r1, 2
outer:  br gt, r1, r0, done
        add r5, r7, r1
        ldi r6, r5
        br ne, r6, r10, skip
        out r1, r1
        add r2, r1, r1
mark:   br gt, r2, r0, skip
        add r5, r7, r2
        sti r5, r9
        add r2, r2, r1
        jmp mark
skip:   add r1, r1, r9
        jmp outer
done:   halt
"""

_COLLATZ = """
        loadi r9, 1
        loadi r8, 2
        loadi r7, 3
        add r1, r0, r10
loop:   out r1, r1
        br eq, r1, r9, done
        loadi r2, 0
half:   mul r3, r2, r8
        br eq, r3, r1, even
        br gt, r3, r1, odd
        add r2, r2, r9
        jmp half
even:   add r1, r2, r10
        jmp loop
odd:    mul r1, r1, r7
        add r1, r1, r9
        jmp loop
done:   halt
"""

_EVENS = """
        loadi r9, 1
        loadi r8, 2
        loadi r1, 1
loop:   mul r3, r1, r8
        out r3, r3
        add r1, r1, r9
        br le, r1, r0, loop
"""

_BURSTY = """
        loadi r9, 1
        loadi r8, 3
        loadi r1, 1
fast:   out r1, r1
        add r1, r1, r9
        br le, r1, r0, fast
        mul r2, r0, r8
spin:   sub r2, r2, r9
        br gt, r2, r10, spin
        out r1, r1
        halt
"""

_PREFIX = """
        loadi r9, 1
        loadi r8, 3
        loadi r7, 50
        loadi r1, 1
fill:   mul r3, r1, r8
        add r5, r7, r1
        sti r5, r3
        add r1, r1, r9
        br le, r1, r0, fill
        loadi r1, 1
        loadi r4, 0
sum:    add r5, r7, r1
        ldi r3, r5
        add r4, r4, r3
        out r4, r4
        add r1, r1, r9
        br le, r1, r0, sum
"""

_DIVISORS = """
        loadi r9, 1
        loadi r1, 1
outer:  add r2, r0, r10
rem:    br lt, r2, r1, test
        sub r2, r2, r1
        jmp rem
test:   br ne, r2, r10, next
        out r1, r1
next:   add r1, r1, r9
        br le, r1, r0, outer
"""

_FAR = """
        loadi r9, 1
        loadi r7, 1000
        loadi r1, 1
fill:   add r5, r7, r1
        mul r5, r5, r1
        sti r5, r1
        add r1, r1, r9
        br le, r1, r0, fill
        loadi r1, 1
read:   add r5, r7, r1
        mul r5, r5, r1
        ldi r3, r5
        out r3, r5
        add r1, r1, r9
        br le, r1, r0, read
"""

_HALT = """
        halt
"""

_SILENT = """
        loadi r9, 1
loop:   sub r0, r0, r9
        br gt, r0, r10, loop
        halt
"""

_GCD = """
        loadi r9, 1
        loadi r1, 1
outer:  add r2, r1, r10
        add r3, r0, r10
gcd:    br eq, r2, r3, found
        br gt, r2, r3, bigger
        sub r3, r3, r2
        jmp gcd
bigger: sub r2, r2, r3
        jmp gcd
found:  out r2, r2
        add r1, r1, r9
        br le, r1, r0, outer
"""

_REVERSE = """
        loadi r9, 1
        loadi r7, 200
        loadi r1, 1
fill:   add r5, r7, r1
        sti r5, r1
        add r1, r1, r9
        br le, r1, r0, fill
        add r1, r0, r10
back:   add r5, r7, r1
        ldi r3, r5
        out r3, r3
        sub r1, r1, r9
        br ge, r1, r9, back
"""

_ECHO = """
        out r0, r2
"""


def _collatz(n: int) -> list[int]:
    out = [n]
    while n != 1:
        n = n // 2 if n % 2 == 0 else 3 * n + 1
        out.append(n)
    return out


def _fib(n: int) -> list[int]:
    a, b, out = 0, 1, []
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def miniram_corpus() -> list[tuple[str, str, tuple[int, ...], list[tuple[int, ...]]]]:
    n = 7
    one = lambda xs: [(x,) for x in xs]  # noqa: E731
    return [
        ("count", _COUNT, (n,), one(range(1, n + 1))),
        ("pairs", _PAIRS, (n,), [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]),
        ("squares", _SQUARES, (n,), one(i * i for i in range(1, n + 1))),
        ("fib", _FIB, (n,), one(_fib(n))),
        ("table", _TABLE, (4,), [(i, j, i * j) for i in range(1, 5) for j in range(1, 5)]),
        ("powers", _POWERS, (n,), one(2**k for k in range(n + 1))),
        ("countdown", _COUNTDOWN, (n,), one(range(n, 0, -1))),
        ("triangular", _TRIANGULAR, (n,), one(range(1, n + 1))),
        ("sieve", _SIEVE, (30,), one(p for p in range(2, 31) if all(p % d for d in range(2, p)))),
        ("collatz", _COLLATZ, (n,), one(_collatz(n))),
        ("evens", _EVENS, (n,), one(range(2, 2 * n + 1, 2))),
        ("bursty", _BURSTY, (n,), one(range(1, n + 2))),
        ("prefix", _PREFIX, (n,), one(3 * i * (i + 1) // 2 for i in range(1, n + 1))),
        ("divisors", _DIVISORS, (36,), one(d for d in range(1, 37) if 36 % d == 0)),
        ("far", _FAR, (5,), [(i, 0, (1000 + i) * i) for i in range(1, 6)]),
        ("halt", _HALT, (), []),
        ("silent", _SILENT, (5,), []),
        ("gcd", _GCD, (12,), one(_gcd(i, 12) for i in range(1, 13))),
        ("reverse", _REVERSE, (n,), one(range(n, 0, -1))),
        ("echo", _ECHO, (4, 5, 6), [(4, 5, 6)]),
    ]
