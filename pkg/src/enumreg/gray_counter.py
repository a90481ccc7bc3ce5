"""Unbounded counter with O(1) increment and O(1) most-significant-bit query.

The counter stores the binary-reflected Gray code of its value, one digit per
cell, together with a stack of the positions of the 1-bits (smallest on top),
the parity of the number of 1-bits and the position of the highest 1-bit.
Increment follows Knuth's Algorithm G; the stack makes "the lowest 1-bit"
available without scanning.

The stack keeps its top element in a dedicated register, so inserting or
removing the element directly *below* the top costs a single push or pop.
"""

from __future__ import annotations

__all__ = ["GrayCounter", "gray_encode", "gray_decode"]


def gray_encode(v: int) -> int:
    return v ^ (v >> 1)


def gray_decode(g: int) -> int:
    v = 0
    while g:
        v ^= g
        g >>= 1
    return v


class GrayCounter:
    """Counter supporting :meth:`inc` and :meth:`mbit` in constant time.

    Starts as a 1-bit bounded word. When the word saturates (its value is
    ``2**k - 1``, whose Gray code has the single bit ``k - 1`` set) a fresh
    ``k + 1`` bit word is allocated and the single bit, the one-element stack,
    the parity and the msb are transferred. Old words are retained.

    ``stack_ops`` and ``bit_writes`` count the work done by the most recent
    :meth:`inc`, so tests can check the per-call constant bound.
    """

    __slots__ = (
        "_bits",
        "_top",
        "_rest",
        "parity",
        "msb",
        "_retired",
        "stack_ops",
        "bit_writes",
    )

    def __init__(self) -> None:
        self._bits: list[int] = [0]
        self._top: int | None = None  # smallest 1-position, cached top of stack
        self._rest: list[int] = []  # remaining positions; end of list is next-smallest
        self.parity = 0
        self.msb = 0  # meaningful once at least one bit is set
        self._retired: list[list[int]] = []
        self.stack_ops = 0
        self.bit_writes = 0

    # -- stack primitives (each counts as one operation) --------------------
    def _push(self, pos: int) -> None:
        if self._top is not None:
            self._rest.append(self._top)
        self._top = pos
        self.stack_ops += 1

    def _pop(self) -> int:
        top = self._top
        self._top = self._rest.pop() if self._rest else None
        self.stack_ops += 1
        return top  # type: ignore[return-value]

    def _push_under_top(self, pos: int) -> None:
        self._rest.append(pos)
        self.stack_ops += 1

    def _pop_under_top(self) -> int:
        self.stack_ops += 1
        return self._rest.pop()

    # -- public API ---------------------------------------------------------
    @property
    def capacity(self) -> int:
        return len(self._bits)

    @property
    def bits(self) -> list[int]:
        """Current code word, least significant digit first."""
        return list(self._bits)

    @property
    def ones_stack(self) -> list[int]:
        """Positions of the 1-bits in pop order (top first)."""
        if self._top is None:
            return []
        return [self._top] + self._rest[::-1]

    def word(self) -> str:
        """Code word as a string, most significant digit first."""
        return "".join(str(b) for b in reversed(self._bits))

    def _grow(self) -> None:
        # saturated word has exactly one 1-bit, at position k-1
        k = len(self._bits)
        fresh = [0] * (k + 1)
        fresh[k - 1] = 1
        self._retired.append(self._bits)
        self._bits = fresh
        self.bit_writes += 1

    def inc(self) -> None:
        self.stack_ops = 0
        self.bit_writes = 0
        bits = self._bits
        if self.parity == 0:
            bits[0] ^= 1
            self.bit_writes += 1
            if bits[0]:
                self._push(0)
            else:
                self._pop()
        else:
            j = self._top
            if j == len(bits) - 1:
                self._grow()
                bits = self._bits
            pos = j + 1
            bits[pos] ^= 1
            self.bit_writes += 1
            if bits[pos]:
                self._push_under_top(pos)
                if pos > self.msb:
                    self.msb = pos
            else:
                self._pop_under_top()
        self.parity ^= 1

    def mbit(self) -> int | None:
        """Position of the most significant bit of the value, or ``None`` at zero."""
        if self._top is None:
            return None
        return self.msb

    def is_zero(self) -> bool:
        return self._top is None

    def value(self) -> int:
        """Decode the stored word (O(k); for tests and reports only)."""
        g = 0
        for pos, b in enumerate(self._bits):
            if b:
                g |= 1 << pos
        return gray_decode(g)

    def copy(self) -> GrayCounter:
        other = GrayCounter.__new__(GrayCounter)
        other._bits = list(self._bits)
        other._top = self._top
        other._rest = list(self._rest)
        other.parity = self.parity
        other.msb = self.msb
        other._retired = []
        other.stack_ops = 0
        other.bit_writes = 0
        return other

    def __repr__(self) -> str:
        return f"GrayCounter(word={self.word()!r}, stack={self.ones_stack})"
