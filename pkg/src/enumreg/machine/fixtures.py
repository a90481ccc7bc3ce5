"""Native machines with a fixed emission schedule.

Families (emission steps are 1-based):

``bursty(s, d)``
    ``s`` solutions at steps ``1..s``, silence for ``d*s`` steps, then the last
    solution at step ``s + d*s + 1``. Incremental delay ``d + 1``.
``adversary(s, t)``
    ``s`` solutions at steps ``1..s`` and the last one at step ``t > s``.
``uniform(S, p)``
    one solution every ``p`` steps: ``p, 2p, ..., S*p``.
``scripted(g1, g2, ...)``
    the ``k``-th solution ``g_k`` steps after the previous one.
``triangular(S, p)``
    the ``t``-th solution at step ``t*(t+1)/2 * p``; incremental time ``~ t**2 p``.

Solution ``k`` (0-based) is the integer ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from ..errors import SpecError
from .base import SteppableMachine

__all__ = ["FixtureSpec", "ScheduledMachine", "make_fixture", "parse_fixture", "FAMILIES"]

FAMILIES = ("bursty", "adversary", "uniform", "scripted", "triangular")


@dataclass(frozen=True)
class FixtureSpec:
    family: str
    params: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise SpecError(f"unknown fixture family {self.family!r}")
        if not self.params:
            raise SpecError(f"{self.family} needs parameters")
        if any(not isinstance(x, int) or x <= 0 for x in self.params):
            raise SpecError(f"{self.family} parameters must be positive integers: {self.params}")
        need = {"bursty": 2, "adversary": 2, "uniform": 2, "triangular": 2}
        if self.family in need and len(self.params) != need[self.family]:
            raise SpecError(f"{self.family} takes {need[self.family]} parameters")
        if self.family == "adversary" and self.params[1] <= self.params[0]:
            raise SpecError("adversary(s, t) needs t > s")

    def schedule(self) -> tuple[int, ...]:
        f, p = self.family, self.params
        if f == "bursty":
            s, d = p
            return tuple(range(1, s + 1)) + (s + d * s + 1,)
        if f == "adversary":
            s, t = p
            return tuple(range(1, s + 1)) + (t,)
        if f == "uniform":
            n, step = p
            return tuple(step * k for k in range(1, n + 1))
        if f == "triangular":
            n, step = p
            return tuple(t * (t + 1) // 2 * step for t in range(1, n + 1))
        return tuple(accumulate(p))

    @property
    def solution_count(self) -> int:
        return len(self.schedule())

    def incremental_delay(self) -> Fraction:
        """Exact ``sup_i T(i)/i`` of the schedule."""
        return max(Fraction(t, i) for i, t in enumerate(self.schedule(), start=1))

    def __str__(self) -> str:
        return f"{self.family}:{','.join(map(str, self.params))}"


class ScheduledMachine(SteppableMachine):
    """Emits solution ``k`` exactly at ``schedule[k]``; snapshots are O(1)."""

    supports_snapshot = True

    def __init__(self, schedule: tuple[int, ...], label: str = "") -> None:
        super().__init__()
        if any(b <= a for a, b in zip(schedule, schedule[1:])) or (schedule and schedule[0] < 1):
            raise SpecError("schedule must be strictly increasing positive steps")
        self.schedule = schedule
        self.label = label
        self._next = 0
        if not schedule:
            self._done = True

    def _advance(self):
        k = self._next
        if self.steps == self.schedule[k]:
            self._next = k + 1
            if self._next == len(self.schedule):
                self._done = True
            return k
        return None

    def snapshot(self, mode: str = "eager") -> ScheduledMachine:
        other = ScheduledMachine.__new__(ScheduledMachine)
        other.steps = self.steps
        other.last_solution = self.last_solution
        other._done = self._done
        other.schedule = self.schedule
        other.label = self.label
        other._next = self._next
        return other

    def state_size(self) -> int:
        return 2


def make_fixture(spec: FixtureSpec) -> ScheduledMachine:
    return ScheduledMachine(spec.schedule(), str(spec))


def parse_fixture(text: str) -> FixtureSpec:
    """Parse the strict ``family:arg,arg`` grammar."""
    family, sep, rest = text.strip().partition(":")
    if not sep or not rest:
        raise SpecError(f"fixture must look like family:arg,arg, got {text!r}")
    try:
        params = tuple(int(x) for x in rest.split(","))
    except ValueError:
        raise SpecError(f"non-integer fixture parameter in {text!r}") from None
    return FixtureSpec(family, params)
