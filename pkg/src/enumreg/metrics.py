"""Deterministic move-unit instrumentation.

A :class:`Ledger` is handed to a regularizer (or a solo run) and records one
entry per underlying ``step()`` call and per emitted solution, plus space
observations. :meth:`Ledger.finalize` turns it into a :class:`DelayProfile` and
a :class:`SpaceProfile`. Ratios are kept as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import StateError

__all__ = [
    "Ledger",
    "DelayProfile",
    "SpaceProfile",
    "GAP_ELISION_LIMIT",
    "profiles_to_json",
    "profiles_to_csv",
]

GAP_ELISION_LIMIT = 100_000


def _ratio(fr: Fraction) -> list[int]:
    return [fr.numerator, fr.denominator]


def _histogram(gaps: tuple[int, ...]) -> dict[str, int]:
    # power-of-two buckets: "0", "1", "2-3", "4-7", ...
    hist: dict[int, int] = {}
    for g in gaps:
        b = g.bit_length()
        hist[b] = hist.get(b, 0) + 1
    out = {}
    for b in sorted(hist):
        if b == 0:
            key = "0"
        elif b == 1:
            key = "1"
        else:
            key = f"{1 << (b - 1)}-{(1 << b) - 1}"
        out[key] = hist[b]
    return out


@dataclass(frozen=True)
class DelayProfile:
    preprocessing: int
    gaps: tuple[int, ...]
    max_gap: int
    average_gap: Fraction
    incremental_sup: Fraction
    total_moves: int
    emissions: int

    def to_dict(self, elide_above: int = GAP_ELISION_LIMIT) -> dict[str, Any]:
        d: dict[str, Any] = {
            "preprocessing": self.preprocessing,
            "max_gap": self.max_gap,
            "average_gap": _ratio(self.average_gap),
            "incremental_sup": _ratio(self.incremental_sup),
            "total_moves": self.total_moves,
            "emissions": self.emissions,
        }
        if len(self.gaps) > elide_above:
            d["gaps"] = None
            d["gap_histogram"] = _histogram(self.gaps)
        else:
            d["gaps"] = list(self.gaps)
        return d


@dataclass(frozen=True)
class SpaceProfile:
    peak_queue: int = 0
    peak_live_simulations: int = 0
    peak_register_cells: int = 0
    peak_lazy_copies: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "peak_queue": self.peak_queue,
            "peak_live_simulations": self.peak_live_simulations,
            "peak_register_cells": self.peak_register_cells,
            "peak_lazy_copies": self.peak_lazy_copies,
        }


@dataclass
class Ledger:
    """Move / emission recorder for a single run."""

    moves: int = 0
    emit_moves: list[int] = field(default_factory=list)
    preprocessing_moves: int | None = None
    preprocessing_emits: int = 0
    peak_queue: int = 0
    peak_live: int = 0
    peak_cells: int = 0
    peak_lazy: int = 0
    finished: bool = False

    def record_move(self, n: int = 1) -> None:
        self.moves += n

    def record_emit(self) -> None:
        self.emit_moves.append(self.moves)

    def end_preprocessing(self) -> None:
        """Mark everything recorded so far (moves and emissions) as preprocessing."""
        self.preprocessing_moves = self.moves
        self.preprocessing_emits = len(self.emit_moves)

    def observe_queue(self, n: int) -> None:
        if n > self.peak_queue:
            self.peak_queue = n

    def observe_live(self, n: int) -> None:
        if n > self.peak_live:
            self.peak_live = n

    def observe_cells(self, n: int) -> None:
        if n > self.peak_cells:
            self.peak_cells = n

    def observe_lazy(self, n: int) -> None:
        if n > self.peak_lazy:
            self.peak_lazy = n

    @property
    def emissions(self) -> int:
        return len(self.emit_moves)

    def finish(self) -> None:
        self.finished = True

    def finalize(self) -> tuple[DelayProfile, SpaceProfile]:
        if not self.finished:
            raise StateError("finalize called before the run finished")
        pre = self.preprocessing_moves or 0
        marks = self.emit_moves[self.preprocessing_emits :]
        gaps = []
        prev = pre
        sup = Fraction(0)
        for i, m in enumerate(marks, start=1):
            gaps.append(m - prev)
            prev = m
            r = Fraction(m - pre, i)
            if r > sup:
                sup = r
        n = len(gaps)
        avg = Fraction(sum(gaps), n) if n else Fraction(0)
        delay = DelayProfile(
            preprocessing=pre,
            gaps=tuple(gaps),
            max_gap=max(gaps, default=0),
            average_gap=avg,
            incremental_sup=sup,
            total_moves=self.moves,
            emissions=len(self.emit_moves),
        )
        space = SpaceProfile(self.peak_queue, self.peak_live, self.peak_cells, self.peak_lazy)
        return delay, space


def profiles_to_json(
    delay: DelayProfile, space: SpaceProfile, extra: dict[str, Any] | None = None
) -> str:
    doc: dict[str, Any] = {"delay": delay.to_dict(), "space": space.to_dict()}
    if extra:
        doc.update(extra)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def profiles_to_csv(rows: list[dict[str, Any]]) -> str:
    """One row per run. Columns are the scalar fields of both profiles; the gap
    list is not included (use JSON for per-gap data)."""
    buf = io.StringIO()
    if not rows:
        return ""
    fields = list(rows[0].keys())
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    return buf.getvalue()


def flat_row(delay: DelayProfile, space: SpaceProfile, **extra: Any) -> dict[str, Any]:
    row: dict[str, Any] = dict(extra)
    row.update(
        preprocessing=delay.preprocessing,
        max_gap=delay.max_gap,
        average_gap=f"{delay.average_gap.numerator}/{delay.average_gap.denominator}",
        incremental_sup=f"{delay.incremental_sup.numerator}/{delay.incremental_sup.denominator}",
        total_moves=delay.total_moves,
        emissions=delay.emissions,
    )
    row.update(space.to_dict())
    return row
