"""Binary-partition ("flashlight") search as a steppable machine.

A partial solution is a pair ``(a, b)`` of element sets with ``a <= b``: ``a``
is forced in, ``b`` is still allowed. The search keeps an explicit stack of
frames and branches on one element ``u`` of ``b - a``, include-child first.
A child is entered only if the extension oracle accepts it.

Sets are bitmasks over the problem's ordered universe (bit ``i`` is
``universe[i]``). Every step is one move-unit and does exactly one of:

* an oracle call,
* a push (entering a node; a leaf emits on this step),
* a pop (leaving a node; charged to the parent's work).

*Path time* is the largest total work ever held by the frames on the stack at
the same time, i.e. the most work along one root-to-node path.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterator, Sequence

from .errors import BoundViolation, InvariantViolation, SoundnessError, SpecError
from .machine.base import SteppableMachine

__all__ = [
    "PartialSolution",
    "FlashlightProblem",
    "FlashlightMachine",
    "HybridMachine",
    "flashlight_enumerate",
    "hybridize",
    "lowest_index",
]

Oracle = Callable[[int, int], bool]
Selector = Callable[[int], int]


def lowest_index(free: int) -> int:
    """Default selector: the lowest set bit of ``b - a``."""
    return (free & -free).bit_length() - 1


@dataclass(frozen=True)
class PartialSolution:
    a: frozenset
    b: frozenset

    def __post_init__(self) -> None:
        if not self.a <= self.b:
            raise SpecError("partial solution needs a <= b")

    @property
    def is_leaf(self) -> bool:
        return self.a == self.b


@dataclass
class FlashlightProblem:
    """Universe plus an extension oracle on bitmasks.

    ``ext(a, b)`` must be true iff some solution ``y`` has ``a <= y <= b``.
    With ``memoize`` the answers are cached per ``(a, b)``; the cache is shared
    by every machine built from this problem (it saves wall time only, the
    move-unit accounting is unchanged).
    """

    universe: Sequence[Hashable]
    ext: Oracle
    selector: Selector = lowest_index
    memoize: bool = True
    oracle_calls: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_sets(
        cls, universe: Sequence[Hashable], ext: Callable[[frozenset, frozenset], bool], **kw: Any
    ) -> FlashlightProblem:
        """Wrap an oracle that takes element sets instead of bitmasks."""
        elems = tuple(universe)

        def on_masks(a: int, b: int) -> bool:
            return ext(_decode(elems, a), _decode(elems, b))

        return cls(elems, on_masks, **kw)

    @property
    def full(self) -> int:
        return (1 << len(self.universe)) - 1

    def check(self, a: int, b: int) -> bool:
        self.oracle_calls += 1
        if not self.memoize:
            return bool(self.ext(a, b))
        key = (a, b)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = bool(self.ext(a, b))
        return hit

    def decode(self, mask: int) -> frozenset:
        return _decode(self.universe, mask)


def _decode(universe: Sequence[Hashable], mask: int) -> frozenset:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(universe[i])
        mask >>= 1
        i += 1
    return frozenset(out)


# frame stages
_TRY_INCLUDE = 0  # next: oracle on the include child
_PUSH_INCLUDE = 1
_TRY_EXCLUDE = 2  # next: oracle on the exclude child
_PUSH_EXCLUDE = 3
_LEAVE = 4  # next: pop this frame

# child states used by the subtree-completeness check
_UNTOUCHED, _ACTIVE, _COMPLETE, _EMPTY = "untouched", "active", "complete", "empty"


class _Frame:
    __slots__ = ("a", "b", "u", "stage", "work", "done_count", "inc", "exc", "include_empty")

    def __init__(self, a: int, b: int) -> None:
        self.a = a
        self.b = b
        self.u = -1
        self.stage = _LEAVE if a == b else _TRY_INCLUDE
        self.work = 1  # the push that created it
        self.done_count = 0  # solutions in completed child subtrees (plus own leaf)
        self.inc = _UNTOUCHED
        self.exc = _UNTOUCHED
        self.include_empty = False

    def clone(self) -> _Frame:
        f = _Frame.__new__(_Frame)
        for s in _Frame.__slots__:
            setattr(f, s, getattr(self, s))
        return f


class FlashlightMachine(SteppableMachine):
    """Depth-first binary-partition search, one move-unit per step.

    The machine is done on the step that pops the root, which usually comes
    after the last emission. Wrap it with :class:`HybridMachine` to get a
    machine that stops on its last solution.
    """

    supports_snapshot = True

    def __init__(self, problem: FlashlightProblem, check_subtrees: bool = False) -> None:
        super().__init__()
        self.problem = problem
        self.check_subtrees = check_subtrees
        self.stack: list[_Frame] = []
        self.started = False
        self.emitted = 0
        self.path_work = 0  # work held by the frames currently on the stack
        self.path_time = 0
        self.subtree_checks = 0
        self.max_depth = 0
        self.closed = 0  # solutions under the root once it is popped

    def _push(self, a: int, b: int) -> Any:
        f = _Frame(a, b)
        self.stack.append(f)
        self.path_work += 1
        if len(self.stack) > self.max_depth:
            self.max_depth = len(self.stack)
        if a == b:
            self.emitted += 1
            f.done_count = 1
            return a
        return None

    def _advance(self) -> Any:
        prob = self.problem
        sol = None
        if not self.started:
            self.started = True
            root_b = prob.full
            if not prob.check(0, root_b):
                self._done = True
            self.path_time = max(self.path_time, 1)
            return None
        if not self.stack:
            # first step after an accepted root check
            sol = self._push(0, prob.full)
            self._note()
            return sol

        f = self.stack[-1]
        st = f.stage
        if st == _TRY_INCLUDE:
            f.u = prob.selector(f.b & ~f.a)
            f.work += 1
            self.path_work += 1
            if prob.check(f.a | (1 << f.u), f.b):
                f.stage = _PUSH_INCLUDE
            else:
                f.include_empty = True
                f.inc = _EMPTY
                f.stage = _TRY_EXCLUDE
        elif st == _PUSH_INCLUDE:
            f.inc = _ACTIVE
            f.stage = _TRY_EXCLUDE
            sol = self._push(f.a | (1 << f.u), f.b)
        elif st == _TRY_EXCLUDE:
            f.work += 1
            self.path_work += 1
            if prob.check(f.a, f.b & ~(1 << f.u)):
                f.stage = _PUSH_EXCLUDE
            else:
                if f.include_empty:
                    raise SoundnessError(
                        f"oracle accepted node with a={f.a:#x}, b={f.b:#x} but rejected both children"
                    )
                f.exc = _EMPTY
                f.stage = _LEAVE
        elif st == _PUSH_EXCLUDE:
            f.exc = _ACTIVE
            f.stage = _LEAVE
            sol = self._push(f.a, f.b & ~(1 << f.u))
        else:  # _LEAVE
            self.stack.pop()
            self.path_work -= f.work
            if self.stack:
                parent = self.stack[-1]
                parent.work += 1
                self.path_work += 1
                parent.done_count += f.done_count
                if parent.exc == _ACTIVE:
                    parent.exc = _COMPLETE
                else:
                    parent.inc = _COMPLETE
            else:
                self.closed = f.done_count
                self._done = True
        self._note()
        return sol

    def _note(self) -> None:
        if self.path_work > self.path_time:
            self.path_time = self.path_work
        if self.check_subtrees:
            self.check_subtree_completeness()

    def check_subtree_completeness(self) -> None:
        """Every subtree hanging off the current path is finished or untouched.

        Also checks that the solutions counted in finished subtrees (plus
        the current leaf) account for every emission so far.
        """
        self.subtree_checks += 1
        stack = self.stack
        for depth, f in enumerate(stack):
            on_path = depth + 1 < len(stack)
            if on_path:
                # exactly one child is the active one (the next frame)
                if f.exc == _ACTIVE:
                    ok = f.inc in (_COMPLETE, _EMPTY)
                elif f.inc == _ACTIVE:
                    ok = f.exc == _UNTOUCHED
                else:
                    ok = False
            else:
                ok = _ACTIVE not in (f.inc, f.exc)
            if not ok:
                raise InvariantViolation(
                    f"subtree state broken at depth {depth}: include={f.inc}, exclude={f.exc}"
                )
        total = self.closed + sum(f.done_count for f in stack)
        if total != self.emitted:
            raise InvariantViolation(
                f"emitted {self.emitted} solutions but finished subtrees hold {total}"
            )

    def snapshot(self, mode: str = "eager") -> FlashlightMachine:
        other = FlashlightMachine.__new__(FlashlightMachine)
        other.__dict__.update(self.__dict__)
        other.stack = [f.clone() for f in self.stack]
        return other

    def state_size(self) -> int:
        return 3 * len(self.stack)


def flashlight_enumerate(
    problem: FlashlightProblem, *, check_subtrees: bool = False, decode: bool = True
) -> Iterator[Any]:
    """Yield every solution in include-first depth-first order."""
    m = FlashlightMachine(problem, check_subtrees)
    while not m.is_done():
        sol = m.step()
        if sol is not None:
            yield problem.decode(sol) if decode else sol


class HybridMachine(SteppableMachine):
    """Flashlight search behind a queue, turned into a front-loaded enumerator.

    ``preprocessing``: the first ``p`` steps only run the search and queue
    what it finds. ``main``: each step runs one search step and then emits the
    oldest queued solution, keeping one in reserve so that the final emission
    can coincide with termination. ``flush``: the search is over; one queued
    solution per step.
    """

    supports_snapshot = True

    def __init__(self, inner: FlashlightMachine, p: int) -> None:
        if p < 1:
            raise SpecError(f"preprocessing budget must be >= 1, got {p}")
        super().__init__()
        self.inner = inner
        self.p = p
        self.queue: deque = deque()
        self.phase = "preprocessing"
        self.peak_queue = 0

    def _advance(self) -> Any:
        inner = self.inner
        q = self.queue
        if self.phase != "flush" and not inner.is_done():
            sol = inner.step()
            if sol is not None:
                q.append(sol)
                if len(q) > self.peak_queue:
                    self.peak_queue = len(q)
        if self.phase == "preprocessing":
            if self.steps >= self.p or inner.is_done():
                if not q and not inner.is_done():
                    raise BoundViolation(
                        f"no solution within the preprocessing budget of {self.p} steps",
                        step=self.steps,
                        bound=f"path_time<={self.p}",
                    )
                self.phase = "flush" if inner.is_done() else "main"
                if not q:
                    self._done = True
            return None
        if self.phase == "main":
            if inner.is_done():
                self.phase = "flush"
            elif len(q) < 2:
                return None
        out = q.popleft() if q else None
        if not q and self.phase == "flush":
            self._done = True
        return out

    def snapshot(self, mode: str = "eager") -> HybridMachine:
        other = HybridMachine.__new__(HybridMachine)
        other.__dict__.update(self.__dict__)
        other.inner = self.inner.snapshot(mode)
        other.queue = deque(self.queue)
        return other

    def state_size(self) -> int:
        return self.inner.state_size() + len(self.queue)


def hybridize(problem: FlashlightProblem, p: int, *, check_subtrees: bool = False) -> HybridMachine:
    """Hybrid machine over a fresh search; ``p`` bounds the path time."""
    return HybridMachine(FlashlightMachine(problem, check_subtrees), p)
