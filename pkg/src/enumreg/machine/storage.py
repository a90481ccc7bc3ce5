"""Register-file strategies for simulated machines, plus lazy copying.

Three layouts are provided:

* ``flat``: one contiguous Python list, grown on demand.
* ``chunks:C``: a list of arrays where chunk ``k`` holds ``C**k`` cells;
  register ``t`` lives at ``(k, r)`` with ``t = r + sum(C**i for i < k)``.
  Resolution walks the chunk list, so it costs ``O(log t / log C)``.
* ``directory``: a fixed table of ``D`` slots where slot ``k`` points to a
  ``2**k`` cell array allocated on first touch. ``k`` is the msb of ``t + 1``,
  found by binary search over a precomputed table of powers of two. Registers
  past the table spill into an overflow list of further ``2**k`` chunks.

All layouts read unaccessed cells as zero and track a high-water mark.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Callable

from ..errors import SpecError

__all__ = [
    "RegisterFile",
    "FlatFile",
    "ChunkedFile",
    "DirectoryFile",
    "LazyCopyFile",
    "parse_storage",
    "make_storage",
]


class RegisterFile:
    """Base class. Subclasses implement ``_load``, ``_store``, ``peek`` and ``fresh``."""

    def __init__(self) -> None:
        self.high_water = 0
        self._watchers: list[LazyCopyFile] = []

    def read(self, t: int) -> int:
        if t < 0:
            raise IndexError(f"negative register index {t}")
        if t >= self.high_water:
            self.high_water = t + 1
        return self._load(t)

    def write(self, t: int, value: int) -> None:
        if t < 0:
            raise IndexError(f"negative register index {t}")
        for w in self._watchers:
            w.on_source_write(t)
        if t >= self.high_water:
            self.high_water = t + 1
        self._store(t, value)

    def _load(self, t: int) -> int:
        raise NotImplementedError

    def _store(self, t: int, value: int) -> None:
        raise NotImplementedError

    def peek(self, t: int) -> int:
        """Read without side effects (no materialization, no high-water update)."""
        raise NotImplementedError

    def fresh(self) -> RegisterFile:
        """Empty file with the same strategy."""
        raise NotImplementedError

    def dump(self) -> list[int]:
        return [self.peek(t) for t in range(self.high_water)]

    def copy(self) -> RegisterFile:
        """Eager full copy: O(high_water) work."""
        other = self.fresh()
        for t in range(self.high_water):
            v = self.peek(t)
            if v:
                other._store(t, v)
        other.high_water = self.high_water
        return other


class FlatFile(RegisterFile):
    tag = "flat"

    def __init__(self) -> None:
        super().__init__()
        self._cells: list[int] = []

    def _grow(self, t: int) -> None:
        self._cells.extend([0] * (t + 1 - len(self._cells)))

    def _load(self, t: int) -> int:
        if t >= len(self._cells):
            return 0
        return self._cells[t]

    def _store(self, t: int, value: int) -> None:
        if t >= len(self._cells):
            self._grow(t)
        self._cells[t] = value

    def peek(self, t: int) -> int:
        return self._cells[t] if t < len(self._cells) else 0

    def fresh(self) -> FlatFile:
        return FlatFile()

    @property
    def allocated(self) -> int:
        return len(self._cells)


class ChunkedFile(RegisterFile):
    """List of arrays with geometrically growing sizes ``C**k``."""

    def __init__(self, factor: int) -> None:
        if factor < 2:
            raise SpecError(f"chunk factor must be >= 2, got {factor}")
        super().__init__()
        self.factor = factor
        self._chunks: list[list[int]] = []
        self.last_walk = 0  # chunk-list hops taken by the most recent resolve

    @property
    def tag(self) -> str:
        return f"chunks:{self.factor}"

    def resolve(self, t: int) -> tuple[int, int]:
        base, size, k = 0, 1, 0
        while t >= base + size:
            base += size
            size *= self.factor
            k += 1
        self.last_walk = k
        return k, t - base

    def _load(self, t: int) -> int:
        k, r = self.resolve(t)
        if k >= len(self._chunks):
            return 0
        return self._chunks[k][r]

    def _store(self, t: int, value: int) -> None:
        k, r = self.resolve(t)
        while len(self._chunks) <= k:
            self._chunks.append([0] * self.factor ** len(self._chunks))
        self._chunks[k][r] = value

    def peek(self, t: int) -> int:
        k, r = self.resolve(t)
        return self._chunks[k][r] if k < len(self._chunks) else 0

    def fresh(self) -> ChunkedFile:
        return ChunkedFile(self.factor)

    @property
    def allocated(self) -> int:
        return sum(len(c) for c in self._chunks)


class DirectoryFile(RegisterFile):
    """Array of ``2**k`` arrays addressed through a power-of-two table."""

    def __init__(self, slots: int = 64) -> None:
        if slots < 1:
            raise SpecError(f"directory needs at least one slot, got {slots}")
        super().__init__()
        self.slots = slots
        self._powers = [1 << i for i in range(slots + 1)]
        self._table: list[list[int] | None] = [None] * slots
        self._overflow: list[list[int]] = []  # chunk k >= slots stored at k - slots

    @property
    def tag(self) -> str:
        return "directory" if self.slots == 64 else f"directory:{self.slots}"

    def resolve(self, t: int) -> tuple[int, int]:
        u = t + 1
        if u < self._powers[-1]:
            k = bisect_right(self._powers, u) - 1
        else:
            k = u.bit_length() - 1
        return k, u - (1 << k)

    def _chunk(self, k: int, create: bool) -> list[int] | None:
        if k < self.slots:
            chunk = self._table[k]
            if chunk is None and create:
                chunk = self._table[k] = [0] * (1 << k)
            return chunk
        idx = k - self.slots
        if idx >= len(self._overflow):
            if not create:
                return None
            while len(self._overflow) <= idx:
                self._overflow.append([0] * (1 << (self.slots + len(self._overflow))))
        return self._overflow[idx]

    def _load(self, t: int) -> int:
        k, r = self.resolve(t)
        chunk = self._chunk(k, False)
        return chunk[r] if chunk is not None else 0

    def _store(self, t: int, value: int) -> None:
        k, r = self.resolve(t)
        self._chunk(k, True)[r] = value  # type: ignore[index]

    def peek(self, t: int) -> int:
        return self._load(t)

    def fresh(self) -> DirectoryFile:
        return DirectoryFile(self.slots)

    @property
    def allocated(self) -> int:
        n = sum(len(c) for c in self._table if c is not None)
        return n + sum(len(c) for c in self._overflow)


class LazyCopyFile(RegisterFile):
    """Copy of ``source`` that materializes cells on demand.

    Cells below the source's high-water mark at creation time are copied when
    the destination first reads them, when the source is about to overwrite
    them, or when the background sweep (one cell per :meth:`sweep`) reaches
    them. Once the sweep passes the end the link to the source is dropped.
    ``flag_ops`` counts copied-flag checks, for overhead assertions.
    """

    def __init__(self, source: RegisterFile) -> None:
        super().__init__()
        self.source: RegisterFile | None = source
        self.dest = source.fresh()
        self.limit = source.high_water
        self.copied = bytearray(self.limit)
        self.cursor = 0
        self.active = self.limit > 0
        self.high_water = self.limit
        self.flag_ops = 0
        if self.active:
            source._watchers.append(self)
        else:
            self.source = None

    @property
    def tag(self) -> str:
        return self.dest.tag  # type: ignore[attr-defined]

    def _materialize(self, t: int) -> None:
        self.flag_ops += 1
        if not self.copied[t]:
            self.dest._store(t, self.source.peek(t))  # type: ignore[union-attr]
            self.copied[t] = 1

    def on_source_write(self, t: int) -> None:
        if self.active and t < self.limit:
            self._materialize(t)

    def sweep(self) -> None:
        """Advance the background copy by one cell."""
        if not self.active:
            return
        self._materialize(self.cursor)
        self.cursor += 1
        if self.cursor >= self.limit:
            self._finish()

    def _finish(self) -> None:
        self.active = False
        if self.source is not None:
            self.source._watchers.remove(self)
        self.source = None

    def _load(self, t: int) -> int:
        if self.active and t < self.limit:
            self._materialize(t)
        return self.dest._load(t)

    def _store(self, t: int, value: int) -> None:
        if self.active and t < self.limit:
            self.flag_ops += 1
            self.copied[t] = 1
        self.dest._store(t, value)

    def peek(self, t: int) -> int:
        if self.active and t < self.limit and not self.copied[t]:
            return self.source.peek(t)  # type: ignore[union-attr]
        return self.dest.peek(t)

    def fresh(self) -> RegisterFile:
        return self.dest.fresh()


def parse_storage(tag: str) -> Callable[[], RegisterFile]:
    """Parse ``flat`` | ``chunks:C`` | ``directory`` | ``directory:D`` into a constructor."""
    tag = tag.strip()
    if tag == "flat":
        return FlatFile
    if tag == "directory":
        return DirectoryFile
    name, _, arg = tag.partition(":")
    try:
        n = int(arg)
    except ValueError:
        raise SpecError(f"bad storage tag {tag!r}") from None
    if name == "chunks":
        if n < 2:
            raise SpecError(f"chunk factor must be >= 2 in {tag!r}")
        return lambda: ChunkedFile(n)
    if name == "directory":
        if n < 1:
            raise SpecError(f"directory size must be >= 1 in {tag!r}")
        return lambda: DirectoryFile(n)
    raise SpecError(f"unknown storage strategy {tag!r}")


def make_storage(tag: str) -> RegisterFile:
    return parse_storage(tag)()
