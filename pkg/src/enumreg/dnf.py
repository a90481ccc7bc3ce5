"""DNF formulas, their extension oracle, and model enumeration.

File format (DIMACS style)::

    c optional comment lines
    p dnf <n> <m>
    1 -3 0          # one term per clause line: x1 and not x3
    ...

A term may span several lines; it ends at ``0``. Models are printed as
``n``-character strings, character ``i`` being the value of ``x_{i+1}``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator

from .amortizers import RegularizedRun, geometric_regularize, queue_regularize
from .errors import ContractViolation, ParseError, SpecError
from .flashlight import FlashlightMachine, FlashlightProblem, HybridMachine, hybridize
from .machine.base import run_solo
from .metrics import Ledger

__all__ = [
    "Term",
    "DnfFormula",
    "parse_dnf",
    "dnf_extension_check",
    "dnf_problem",
    "brute_force_models",
    "Calibration",
    "calibrate",
    "dnf_enumerate",
    "dnf_run",
    "PIPELINES",
]

PIPELINES = ("none", "queue", "geometric")


@dataclass(frozen=True)
class Term:
    positives: frozenset[int]
    negatives: frozenset[int]

    def __post_init__(self) -> None:
        if self.positives & self.negatives:
            raise SpecError(f"contradictory term on variables {sorted(self.positives & self.negatives)}")

    def masks(self) -> tuple[int, int]:
        pos = sum(1 << (v - 1) for v in self.positives)
        neg = sum(1 << (v - 1) for v in self.negatives)
        return pos, neg


@dataclass(frozen=True)
class DnfFormula:
    n: int
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise SpecError("variable count must be >= 0")
        for t in self.terms:
            for v in t.positives | t.negatives:
                if not 1 <= v <= self.n:
                    raise SpecError(f"variable {v} outside 1..{self.n}")
        object.__setattr__(self, "_masks", tuple(t.masks() for t in self.terms))

    @property
    def m(self) -> int:
        return len(self.terms)

    @property
    def term_masks(self) -> tuple[tuple[int, int], ...]:
        return self._masks  # type: ignore[attr-defined]

    def evaluate(self, assignment: int) -> bool:
        """Truth value under ``assignment`` (bit ``i`` is ``x_{i+1}``)."""
        return any(pos & ~assignment == 0 and neg & assignment == 0 for pos, neg in self.term_masks)

    def format_model(self, assignment: int) -> str:
        return "".join("1" if assignment >> i & 1 else "0" for i in range(self.n))

    def to_text(self) -> str:
        lines = [f"p dnf {self.n} {self.m}"]
        for t in self.terms:
            lits = sorted(t.positives) + [-v for v in sorted(t.negatives)]
            lines.append(" ".join(map(str, lits + [0])))
        return "\n".join(lines) + "\n"


def parse_dnf(text: str, *, lenient: bool = False) -> DnfFormula:
    """Parse DIMACS-style DNF text.

    Contradictory terms raise :class:`ParseError` unless ``lenient`` is set,
    in which case they are dropped with a warning (they have no models).
    """
    header: tuple[int, int] | None = None
    terms: list[Term] = []
    lits: list[int] = []
    term_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ParseError("second header line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "dnf":
                raise ParseError(f"expected 'p dnf <n> <m>', got {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"non-integer header field in {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("header counts must be non-negative", lineno)
            header = (n, m)
            continue
        if header is None:
            raise ParseError("literal line before the 'p dnf' header", lineno)
        n = header[0]
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if not lits:
                term_line = lineno
            if lit == 0:
                _close_term(lits, terms, term_line, lenient)
                lits = []
                continue
            if abs(lit) > n:
                raise ParseError(f"literal {lit} out of range 1..{n}", lineno)
            lits.append(lit)
    if header is None:
        raise ParseError("missing 'p dnf <n> <m>' header", None)
    if lits:
        raise ParseError("last term is not terminated by 0", term_line)
    n, m = header
    return _finish(n, m, terms, lenient)


_DROPPED = object()


def _close_term(lits: list[int], terms: list[Any], line: int, lenient: bool) -> None:
    pos = frozenset(v for v in lits if v > 0)
    neg = frozenset(-v for v in lits if v < 0)
    if pos & neg:
        if not lenient:
            raise ParseError(f"contradictory term (x{min(pos & neg)} and its negation)", line)
        warnings.warn(f"line {line}: dropping contradictory term", stacklevel=3)
        terms.append(_DROPPED)
        return
    terms.append(Term(pos, neg))


def _finish(n: int, m: int, terms: list[Any], lenient: bool) -> DnfFormula:
    if len(terms) != m:
        raise ParseError(f"header announces {m} terms, found {len(terms)}", None)
    return DnfFormula(n, tuple(t for t in terms if t is not _DROPPED))


def dnf_extension_check(f: DnfFormula, fixed_true: set[int] | frozenset[int], fixed_false: set[int] | frozenset[int]) -> bool:
    """Is some term compatible with the partial assignment?"""
    if set(fixed_true) & set(fixed_false):
        raise ContractViolation("a variable cannot be fixed both true and false")
    return any(not (t.positives & set(fixed_false)) and not (t.negatives & set(fixed_true)) for t in f.terms)


def dnf_problem(f: DnfFormula, selector: Callable[[int], int] | None = None) -> FlashlightProblem:
    """Flashlight problem whose solutions are the sets of true variables of models.

    In mask form ``a`` holds the variables fixed true and ``full - b`` those
    fixed false, so a term is compatible iff ``pos <= b`` and ``neg & a == 0``.
    """
    masks = f.term_masks

    def ext(a: int, b: int) -> bool:
        for pos, neg in masks:
            if pos & ~b == 0 and neg & a == 0:
                return True
        return False

    kw: dict[str, Any] = {}
    if selector is not None:
        kw["selector"] = selector
    return FlashlightProblem(tuple(range(1, f.n + 1)), ext, **kw)


def brute_force_models(f: DnfFormula) -> list[int]:
    """All models by truth table, in increasing integer order."""
    return [v for v in range(1 << f.n) if f.evaluate(v)]


@dataclass(frozen=True)
class Calibration:
    """Measurements of one solo flashlight pass and one hybrid pass."""

    models: int
    path_time: int
    solo_moves: int
    average_delay: Fraction  # solo moves per model
    preprocessing_budget: int  # hybrid p
    hybrid_incremental: int  # ceil of the hybrid's incremental sup after its first emission

    def to_dict(self) -> dict[str, Any]:
        return {
            "models": self.models,
            "path_time": self.path_time,
            "solo_moves": self.solo_moves,
            "average_delay": [self.average_delay.numerator, self.average_delay.denominator],
            "preprocessing_budget": self.preprocessing_budget,
            "hybrid_incremental": self.hybrid_incremental,
        }


def calibrate(f: DnfFormula, *, preprocessing_budget: int | None = None) -> Calibration:
    """Measure path time on a solo pass, then the hybrid's incremental delay.

    The hybrid's budget defaults to twice the measured path time.
    """
    prob = dnf_problem(f)
    solo = FlashlightMachine(prob)
    ledger = Ledger()
    found = run_solo(solo, ledger)
    delay, _ = ledger.finalize()
    budget = preprocessing_budget or max(1, 2 * solo.path_time)
    hyb = HybridMachine(FlashlightMachine(prob), budget)
    hl = Ledger()
    first = True
    while not hyb.is_done():
        sol = hyb.step()
        hl.moves += 1
        if sol is not None:
            hl.record_emit()
            if first:
                hl.end_preprocessing()
                first = False
    hl.finish()
    hd, _ = hl.finalize()
    s = len(found)
    return Calibration(
        models=s,
        path_time=solo.path_time,
        solo_moves=delay.total_moves,
        average_delay=Fraction(delay.total_moves, s) if s else Fraction(delay.total_moves),
        preprocessing_budget=budget,
        hybrid_incremental=max(1, math.ceil(hd.incremental_sup)),
    )


def dnf_run(
    f: DnfFormula,
    pipeline: str = "none",
    *,
    p: int | None = None,
    preprocessing_budget: int | None = None,
    solution_bound: int | None = None,
    calibration: Calibration | None = None,
    check_invariants: bool = False,
    keep: bool = True,
) -> tuple[RegularizedRun, Calibration | None]:
    """Run one pipeline and return its run record (models as assignment ints).

    ``none`` is the bare flashlight search. ``queue`` and ``geometric`` wrap
    the search in a hybrid machine; their delay parameter ``p`` defaults to
    the hybrid's measured incremental delay and the geometric solution bound
    defaults to ``2**n``.
    """
    if pipeline not in PIPELINES:
        raise SpecError(f"unknown pipeline {pipeline!r}; choose from {', '.join(PIPELINES)}")
    prob = dnf_problem(f)
    if pipeline == "none":
        m = FlashlightMachine(prob, check_subtrees=check_invariants)
        ledger = Ledger()
        out = run_solo(m, ledger)
        ledger.observe_live(1)
        ledger.observe_cells(m.max_depth * 3)
        delay, space = ledger.finalize()
        run = RegularizedRun(
            out if keep else None,
            len(out),
            delay,
            space,
            {"path_time": m.path_time, "total_moves": delay.total_moves},
        )
        return run, None
    cal = calibration
    if cal is None or (preprocessing_budget is not None and preprocessing_budget != cal.preprocessing_budget):
        cal = calibrate(f, preprocessing_budget=preprocessing_budget)
    budget = cal.preprocessing_budget
    rate = p if p is not None else cal.hybrid_incremental

    def factory() -> HybridMachine:
        return hybridize(prob, budget, check_subtrees=check_invariants)

    if pipeline == "queue":
        run = queue_regularize(factory(), rate, preprocess=True, keep=keep)
    else:
        bound = solution_bound if solution_bound is not None else max(1, 1 << f.n)
        run = geometric_regularize(
            factory, rate, bound, preprocess=True, check_invariants=check_invariants, keep=keep
        )
    run.stats.update(preprocessing_budget=budget, p=rate)
    return run, cal


def dnf_enumerate(f: DnfFormula, pipeline: str = "none", **kw: Any) -> Iterator[str]:
    """Yield every model of ``f`` once, as an ``n``-character 0/1 string."""
    run, _ = dnf_run(f, pipeline, **kw)
    for a in run.solutions or ():
        yield f.format_model(a)
