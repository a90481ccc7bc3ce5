"""Delay regularizers for incremental-delay enumerators.

Every regularizer consumes a :class:`~enumreg.machine.SteppableMachine` (or a
factory producing fresh copies of the same computation) and re-emits its
solutions with a bounded gap. Cost is counted in move-units: one ``step()``
call on any underlying machine.

``queue_regularize``
    Buffer solutions and pull one every ``p`` moves. Same order.
``adaptive_regularize``
    Same, but the pull period is derived on the fly from the observed
    ``steps / (solutions + 1)`` ratio; ``p`` is not needed.
``geometric_regularize``
    ``N + 1`` simulations; simulation ``i`` only outputs solutions found at
    a step in its zone ``Z_i``. Space stays ``O(N)`` machines.
``geometric_regularize_dynamic``
    The same without a solution-count bound: simulations are spawned by
    snapshot when the last one is about to enter its zone.
``usualinc_regularize``
    Geometric amortization with per-round budgets growing like ``S**a``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .errors import (
    BoundViolation,
    CapabilityError,
    CoverageError,
    IncrementalDelayViolation,
    InvariantViolation,
    SpecError,
)
from .gray_counter import GrayCounter
from .machine.base import MachineFactory, SteppableMachine
from .metrics import DelayProfile, Ledger, SpaceProfile

__all__ = [
    "RegularizerConfig",
    "RegularizedRun",
    "c_epsilon",
    "zone",
    "queue_regularize",
    "adaptive_regularize",
    "geometric_regularize",
    "geometric_regularize_dynamic",
    "usualinc_regularize",
    "REGULARIZERS",
    "regularize",
]


# ---------------------------------------------------------------------------
# configuration and results
# ---------------------------------------------------------------------------


@dataclass
class RegularizerConfig:
    p: int | None = None
    epsilon: Fraction = Fraction(1)
    arithmetic_mode: str = "exact"
    solution_count_bound: int | None = None
    a: int = 0
    retire_machines: bool = False
    snapshot_mode: str | None = None
    preprocess: bool = False
    state_size: int | None = None
    check_invariants: bool = False

    def __post_init__(self) -> None:
        self.epsilon = Fraction(self.epsilon)
        if self.p is not None and self.p < 1:
            raise SpecError(f"p must be >= 1, got {self.p}")
        if self.epsilon <= 0:
            raise SpecError(f"epsilon must be > 0, got {self.epsilon}")
        if self.a < 0:
            raise SpecError(f"exponent a must be >= 0, got {self.a}")
        if self.arithmetic_mode not in ("exact", "mbit"):
            raise SpecError(f"arithmetic_mode must be exact or mbit, got {self.arithmetic_mode!r}")
        if self.solution_count_bound is not None and self.solution_count_bound < 1:
            raise SpecError("solution_count_bound must be >= 1")
        if self.snapshot_mode not in (None, "eager", "lazy"):
            raise SpecError(f"snapshot mode must be eager or lazy, got {self.snapshot_mode!r}")
        if self.state_size is not None and self.state_size < 1:
            raise SpecError("state_size must be >= 1")


@dataclass
class RegularizedRun:
    solutions: list[Any] | None
    count: int
    delay: DelayProfile
    space: SpaceProfile
    stats: dict[str, Any] = field(default_factory=dict)
    # zone index of the simulation that emitted each solution (geometric runs)
    emitters: list[int] | None = None


class _Sink:
    __slots__ = ("ledger", "keep", "on_emit", "solutions", "count", "emitters")

    def __init__(self, ledger: Ledger, keep: bool, on_emit: Callable[[Any], None] | None):
        self.ledger = ledger
        self.keep = keep
        self.on_emit = on_emit
        self.solutions: list[Any] = []
        self.emitters: list[int] = []
        self.count = 0

    def emit(self, sol: Any, zone: int | None = None) -> None:
        self.ledger.record_emit()
        self.count += 1
        if self.keep:
            self.solutions.append(sol)
            if zone is not None:
                self.emitters.append(zone)
        if self.on_emit is not None:
            self.on_emit(sol)

    def result(self, stats: dict[str, Any], geometric: bool = False) -> RegularizedRun:
        self.ledger.finish()
        delay, space = self.ledger.finalize()
        stats.setdefault("total_moves", self.ledger.moves)
        return RegularizedRun(
            solutions=self.solutions if self.keep else None,
            count=self.count,
            delay=delay,
            space=space,
            stats=stats,
            emitters=self.emitters if (self.keep and geometric) else None,
        )


def _preprocess_single(m: SteppableMachine, ledger: Ledger, sink: _Sink) -> None:
    """Run ``m`` until its first solution; that solution is emitted as preprocessing."""
    while not m.is_done():
        sol = m.step()
        ledger.moves += 1
        if sol is not None:
            sink.emit(sol)
            break
    ledger.end_preprocessing()


# ---------------------------------------------------------------------------
# queue with known incremental delay
# ---------------------------------------------------------------------------


def queue_regularize(
    machine: SteppableMachine,
    p: int,
    *,
    preprocess: bool = False,
    keep: bool = True,
    on_emit: Callable[[Any], None] | None = None,
    ledger: Ledger | None = None,
) -> RegularizedRun:
    """Pull one buffered solution every ``p`` moves, then flush.

    Raises :class:`IncrementalDelayViolation` if the queue is empty at a
    scheduled pull, i.e. the machine's incremental delay exceeds ``p``.
    """
    if p < 1:
        raise SpecError(f"p must be >= 1, got {p}")
    ledger = ledger or Ledger()
    sink = _Sink(ledger, keep, on_emit)
    if preprocess:
        _preprocess_single(machine, ledger, sink)
    q: deque = deque()
    j = 0
    peak = 0
    while not machine.is_done():
        j += 1
        sol = machine.step()
        ledger.moves += 1
        if sol is not None:
            q.append(sol)
            if len(q) > peak:
                peak = len(q)
        if j == p:
            if not q:
                raise IncrementalDelayViolation(
                    f"queue empty at pull after step {machine.steps}: incremental delay exceeds p={p}",
                    step=machine.steps,
                    bound=f"p={p}",
                )
            sink.emit(q.popleft())
            j = 0
    while q:
        sink.emit(q.popleft())
    ledger.observe_queue(peak)
    ledger.observe_live(1)
    ledger.observe_cells(machine.state_size())
    return sink.result({"p": p})


# ---------------------------------------------------------------------------
# queue with adaptive pull period
# ---------------------------------------------------------------------------


def c_epsilon(epsilon: Fraction | int | float) -> int:
    """Smallest integer ``C >= 1 / (1 - 2**-epsilon)``, computed exactly for rational epsilon."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise SpecError("epsilon must be > 0")
    r, q = eps.numerator, eps.denominator
    # C >= 1/(1-2^-eps)  <=>  2^r (C-1)^q >= C^q
    guess = max(2, int(1.0 / (1.0 - 2.0 ** (-float(eps)))) - 1)
    c = guess
    while c > 2 and (1 << r) * (c - 1) ** q >= c**q:
        c -= 1
    while not ((1 << r) * (c - 1) ** q >= c**q):
        c += 1
    return c


def _ceil_power(num: int, den: int, exponent: Fraction) -> int:
    """Smallest integer ``K`` with ``K >= (num/den) ** exponent`` (num, den > 0)."""
    a, b = exponent.numerator, exponent.denominator
    if b == 1:
        top, bot = num**a, den**a
        return -(-top // bot)
    lhs = num**a  # need K^b * den^a >= num^a
    dena = den**a
    k = max(0, int(math.ceil((num / den) ** float(exponent))) - 1)
    while k > 0 and (k - 1) ** b * dena >= lhs:
        k -= 1
    while k**b * dena < lhs:
        k += 1
    return k


def adaptive_regularize(
    machine: SteppableMachine,
    epsilon: Fraction | int = 1,
    arithmetic_mode: str = "exact",
    *,
    preprocess: bool = False,
    keep: bool = True,
    on_emit: Callable[[Any], None] | None = None,
    ledger: Ledger | None = None,
) -> RegularizedRun:
    """Queue regularization that estimates the incremental delay as it runs.

    ``exact`` pulls when ``j >= C * ceil((steps / (S + 1)) ** (1 + eps))``.
    ``mbit`` replaces the test by a comparison of most-significant-bit
    positions of three Gray counters (for ``j``, ``steps`` and ``S + 1``).
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise SpecError("epsilon must be > 0")
    if arithmetic_mode not in ("exact", "mbit"):
        raise SpecError(f"unknown arithmetic mode {arithmetic_mode!r}")
    ledger = ledger or Ledger()
    sink = _Sink(ledger, keep, on_emit)
    if preprocess:
        _preprocess_single(machine, ledger, sink)
    C = c_epsilon(eps)
    expo = 1 + eps
    q: deque = deque()
    peak = 0
    steps = 0
    found = 0
    j = 0
    if arithmetic_mode == "mbit":
        k_eps = C.bit_length() - 1
        cj, cM, cS = GrayCounter(), GrayCounter(), GrayCounter()
        cS.inc()  # counts found + 1
    while not machine.is_done():
        j += 1
        sol = machine.step()
        ledger.moves += 1
        steps += 1
        if sol is not None:
            q.append(sol)
            found += 1
            if len(q) > peak:
                peak = len(q)
        if arithmetic_mode == "exact":
            pull = j >= C and j >= C * _ceil_power(steps, found + 1, expo)
        else:
            cj.inc()
            cM.inc()
            if sol is not None:
                cS.inc()
            pull = cj.mbit() >= k_eps + 1 + expo * (cM.mbit() + 1 - cS.mbit())
        if pull:
            if not q:
                raise InvariantViolation(f"adaptive queue empty at pull after step {steps}")
            sink.emit(q.popleft())
            j = 0
            if arithmetic_mode == "mbit":
                cj = GrayCounter()
    while q:
        sink.emit(q.popleft())
    ledger.observe_queue(peak)
    ledger.observe_live(1)
    ledger.observe_cells(machine.state_size())
    return sink.result({"epsilon": [eps.numerator, eps.denominator], "c_epsilon": C, "mode": arithmetic_mode})


# ---------------------------------------------------------------------------
# geometric amortization
# ---------------------------------------------------------------------------


def zone(i: int, p: int) -> tuple[int, int]:
    """Inclusive step interval owned by simulation ``i``."""
    if i == 0:
        return 1, p
    return (p << (i - 1)) + 1, p << i


class ZoneClock:
    """Tracks whether a simulation's next move is inside its zone.

    A :class:`GrayCounter` is bumped once every ``p`` moves; the zone is
    entered after ``mbit == zone - 1`` first holds and left once
    ``mbit == zone``, so the test is constant-time. ``ticks`` keeps the plain
    move count for reports and invariant checks.
    """

    __slots__ = ("p", "zone", "sub", "counter", "ticks", "in_zone", "entered", "exited")

    def __init__(self, p: int, zone_index: int) -> None:
        self.p = p
        self.zone = zone_index
        self.sub = 0
        self.counter = GrayCounter()
        self.ticks = 0
        self.in_zone = zone_index == 0
        self.entered = zone_index == 0
        self.exited = False

    @classmethod
    def at_entry_of_previous(cls, p: int, zone_index: int) -> ZoneClock:
        """Clock for a simulation of zone ``z`` cloned from the last simulation
        (zone ``z - 1``) right as that one enters its zone, i.e. after
        ``2**(z-2) * p`` moves. ``z >= 1``."""
        clk = cls(p, zone_index)
        if zone_index >= 2:
            clk.counter = _gray_at_power_of_two(zone_index - 2)
            clk.ticks = p << (zone_index - 2)
        return clk

    def tick(self) -> tuple[bool, bool]:
        """Account one move. Returns (move was in zone, zone entry happens after this move)."""
        self.ticks += 1
        now = self.in_zone
        entering = False
        self.sub += 1
        if self.sub == self.p:
            self.sub = 0
            c = self.counter
            c.inc()
            mb = c.msb
            if mb == self.zone:
                self.in_zone = False
                self.exited = True
            elif not self.entered and mb == self.zone - 1:
                self.in_zone = True
                self.entered = True
                entering = True
        return now, entering


def _gray_at_power_of_two(k: int) -> GrayCounter:
    """Counter holding the value ``2**k`` built in O(1) bit writes.

    The Gray code of ``2**k`` has bits ``k`` and ``k - 1`` set (only bit 0
    when ``k == 0``), so the ones-stack has at most two entries.
    """
    c = GrayCounter()
    c._bits = [0] * (k + 2)
    if k == 0:
        c._bits[0] = 1
        c._top = 0
        c.parity = 1
    else:
        c._bits[k] = c._bits[k - 1] = 1
        c._top = k - 1
        c._rest = [k]
        c.parity = 0
    c.msb = k
    return c


class _Sim:
    __slots__ = ("machine", "clock", "zone", "outputs", "idle")

    def __init__(self, machine: SteppableMachine, clock: ZoneClock) -> None:
        self.machine = machine
        self.clock = clock
        self.zone = clock.zone
        self.outputs = 0
        self.idle = 0  # budget consumed after the machine stopped

    @property
    def vclock(self) -> int:
        return self.clock.ticks + self.idle


def _observe_space(ledger: Ledger, sims: list[_Sim]) -> None:
    ledger.observe_live(len(sims))
    ledger.observe_cells(sum(s.machine.state_size() for s in sims))
    ledger.observe_lazy(sum(1 for s in sims if s.machine.lazy_copy_active()))


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def _geometric_core(
    factory: MachineFactory,
    p: int,
    N: int,
    budget: Callable[[int], int],
    *,
    preprocess: bool,
    check_invariants: bool,
    keep: bool,
    on_emit: Callable[[Any], None] | None,
    ledger: Ledger,
    bound: int | None,
    pace_invariant: bool,
) -> RegularizedRun:
    sink = _Sink(ledger, keep, on_emit)
    machines = [factory() for _ in range(N + 1)]
    if preprocess:
        lead = machines[0]
        _preprocess_single(lead, ledger, sink)
        origin = lead.steps
        for k in range(1, N + 1):
            m = machines[k]
            if lead.supports_snapshot:
                machines[k] = lead.snapshot("eager")
            else:
                while m.steps < origin and not m.is_done():
                    m.step()
                    ledger.moves += 1
        ledger.end_preprocessing()
        first_done = lead.is_done()
    else:
        first_done = False
    sims = [_Sim(m, ZoneClock(p, i)) for i, m in enumerate(machines)]
    _observe_space(ledger, sims)
    checks = 0
    emitted_total = sink.count
    j = N
    two_p = 2 * p

    def pace_check() -> None:
        nonlocal checks
        checks += 1
        acc = 0
        for i in range(N):
            acc += sims[i].outputs
            if sims[i + 1].vclock < two_p * acc:
                raise InvariantViolation(
                    f"pace invariant violated: steps(M[{i + 1}])={sims[i + 1].vclock} < 2p*{acc}"
                )

    if first_done:
        j = -1
    while j >= 0:
        sim = sims[j]
        m = sim.machine
        clk = sim.clock
        b = budget(emitted_total)
        emitted = False
        used = 0
        while used < b:
            if m.is_done():
                sim.idle += b - used
                break
            used += 1
            sol = m.step()
            ledger.moves += 1
            in_zone, _ = clk.tick()
            if sol is not None:
                if in_zone:
                    sim.outputs += 1
                    emitted_total += 1
                    if bound is not None and emitted_total > bound:
                        raise BoundViolation(
                            f"machine emitted more than the declared {bound} solutions",
                            step=m.steps,
                            bound=f"S={bound}",
                        )
                    sink.emit(sol, sim.zone)
                    emitted = True
                    break
                if j == N and clk.exited:
                    raise CoverageError(
                        f"solution at step {clk.ticks} lies past the last zone end {p << N}",
                        step=clk.ticks,
                        bound=f"p={p}",
                    )
        if emitted:
            if check_invariants and pace_invariant:
                pace_check()
            if sink.count % 64 == 0:
                _observe_space(ledger, sims)
            j = N
        else:
            j -= 1
    _observe_space(ledger, sims)
    top = sims[N]
    # a correct p and S leave the top simulation finished; otherwise make sure
    # nothing is hiding past the last zone
    while not top.machine.is_done():
        sol = top.machine.step()
        ledger.moves += 1
        top.clock.tick()
        if sol is not None:
            raise CoverageError(
                f"solution at step {top.clock.ticks} lies past the last zone end {p << N}",
                step=top.clock.ticks,
                bound=f"p={p}",
            )
    # a simulation may stop short of its zone end only by finishing its machine
    for s in sims:
        end = zone(s.zone, p)[1]
        if s.vclock < end and not s.machine.is_done():
            raise CoverageError(
                f"simulation {s.zone} stopped at step {s.vclock} before its zone end {end}",
                step=s.vclock,
                bound=f"p={p}",
            )
    if check_invariants and pace_invariant:
        pace_check()
    stats = {
        "p": p,
        "N": N,
        "simulations": N + 1,
        "pace_checks": checks,
        "final_steps": [s.vclock for s in sims],
    }
    return sink.result(stats, geometric=True)


def geometric_regularize(
    factory: MachineFactory,
    p: int,
    solution_count_bound: int,
    *,
    preprocess: bool = False,
    check_invariants: bool = False,
    keep: bool = True,
    on_emit: Callable[[Any], None] | None = None,
    ledger: Ledger | None = None,
) -> RegularizedRun:
    """Geometric amortization with a known bound ``S`` on the number of solutions.

    Runs ``N + 1 = ceil(log2 S) + 1`` simulations from ``factory``; moves the
    highest one first with a budget of ``2p`` moves and falls back to lower
    ones when a budget runs out without output. The output order generally
    differs from the machine's.
    """
    if p < 1:
        raise SpecError(f"p must be >= 1, got {p}")
    if solution_count_bound < 1:
        raise SpecError("solution_count_bound must be >= 1")
    N = _ceil_log2(solution_count_bound)
    return _geometric_core(
        factory,
        p,
        N,
        lambda _s: 2 * p,
        preprocess=preprocess,
        check_invariants=check_invariants,
        keep=keep,
        on_emit=on_emit,
        ledger=ledger or Ledger(),
        bound=solution_count_bound,
        pace_invariant=True,
    )


def usualinc_regularize(
    factory: MachineFactory,
    p: int,
    a: int,
    solution_count_bound: int,
    *,
    preprocess: bool = False,
    keep: bool = True,
    on_emit: Callable[[Any], None] | None = None,
    ledger: Ledger | None = None,
) -> RegularizedRun:
    """Geometric amortization for machines with incremental time ``t**(a+1) * p``.

    The per-simulation budget after ``S`` outputs is ``max(S, 1)**a * (a+1) * 2p``
    and the zones cover ``[1, S_max**(a+1) * p]``. With ``a = 0`` this is
    exactly :func:`geometric_regularize`.
    """
    if p < 1:
        raise SpecError(f"p must be >= 1, got {p}")
    if a < 0:
        raise SpecError("a must be >= 0")
    if solution_count_bound < 1:
        raise SpecError("solution_count_bound must be >= 1")
    N = _ceil_log2(solution_count_bound ** (a + 1))
    scale = (a + 1) * 2 * p
    return _geometric_core(
        factory,
        p,
        N,
        lambda s: max(s, 1) ** a * scale,
        preprocess=preprocess,
        check_invariants=False,
        keep=keep,
        on_emit=on_emit,
        ledger=ledger or Ledger(),
        bound=solution_count_bound,
        pace_invariant=False,
    )


def geometric_regularize_dynamic(
    factory: MachineFactory,
    p: int,
    *,
    retire_machines: bool = False,
    snapshot_mode: str | None = None,
    preprocess: bool = False,
    state_size: int | None = None,
    keep: bool = True,
    on_emit: Callable[[Any], None] | None = None,
    ledger: Ledger | None = None,
) -> RegularizedRun:
    """Geometric amortization without a bound on the number of solutions.

    Starts from one simulation and, whenever the last simulation (zone ``z``)
    is one move away from entering its zone, clones it into a new last
    simulation for zone ``z + 1``. The zone-0 simulation is cloned at load.

    ``retire_machines`` drops a simulation as soon as it leaves its zone (or
    stops), so each underlying step is simulated at most twice.

    ``state_size`` (a bound ``s`` on the machine's register use) enables the
    single-active-copy layout: ``s`` moves of preprocessing on a probe
    machine, then fresh simulations for zones ``0..i`` with
    ``2**(i-1) * p >= s``, and clones only beyond that, so every lazy copy has
    finished its sweep before the next clone starts.
    """
    if p < 1:
        raise SpecError(f"p must be >= 1, got {p}")
    ledger = ledger or Ledger()
    sink = _Sink(ledger, keep, on_emit)
    first = factory()
    if not first.supports_snapshot:
        raise CapabilityError(f"{type(first).__name__} cannot be snapshot; dynamic amortization needs it")
    mode = snapshot_mode or "lazy"
    spawned = 0
    snapshot_cells = 0
    peak_lazy = 0
    sims: list[_Sim] = []

    def clone(src: _Sim) -> _Sim:
        nonlocal spawned, snapshot_cells
        m = src.machine.snapshot(mode)
        snapshot_cells += getattr(m, "snapshot_cost", 0)
        spawned += 1
        return _Sim(m, ZoneClock.at_entry_of_previous(p, src.zone + 1))

    if state_size is not None:
        buffered = []
        probe = first
        while not probe.is_done() and probe.steps < state_size:
            sol = probe.step()
            ledger.moves += 1
            if sol is not None:
                buffered.append(sol)
        if probe.is_done():
            ledger.end_preprocessing()
            for sol in buffered:
                sink.emit(sol, 0)
            ledger.observe_live(1)
            ledger.observe_queue(len(buffered))
            return sink.result({"p": p, "spawned": 0, "final_length": 1, "created": 1}, geometric=True)
        ledger.end_preprocessing()
        i0 = 1
        while (p << (i0 - 1)) < state_size:
            i0 += 1
        sims = [_Sim(factory(), ZoneClock(p, z)) for z in range(i0 + 1)]
        created = i0 + 1
    else:
        if preprocess:
            _preprocess_single(first, ledger, sink)
        sims = [_Sim(first, ZoneClock(p, 0))]
        created = 1
        if not first.is_done():
            sims.append(clone(sims[0]))
            created += 1

    max_len = len(sims)
    max_zone = sims[-1].zone
    _observe_space(ledger, sims)
    j = len(sims) - 1
    two_p = 2 * p
    while j >= 0 and sims:
        sim = sims[j]
        m = sim.machine
        clk = sim.clock
        emitted = False
        moved_on = False
        used = 0
        while used < two_p:
            if m.is_done():
                sim.idle += two_p - used
                break
            used += 1
            sol = m.step()
            ledger.moves += 1
            in_zone, entering = clk.tick()
            if entering and sim.zone == max_zone and not m.is_done():
                sims.append(clone(sim))
                created += 1
                max_zone = sims[-1].zone
                if len(sims) > max_len:
                    max_len = len(sims)
                lazy_now = sum(1 for s in sims if s.machine.lazy_copy_active())
                if lazy_now > peak_lazy:
                    peak_lazy = lazy_now
                _observe_space(ledger, sims)
                j = len(sims) - 1
                moved_on = True
                break
            if sol is not None and in_zone:
                sim.outputs += 1
                sink.emit(sol, sim.zone)
                emitted = True
                break
            if retire_machines and clk.exited:
                break
        if retire_machines and (clk.exited or m.is_done()) and not moved_on:
            pos = sims.index(sim)
            del sims[pos]
            if emitted:
                j = len(sims) - 1
            elif pos <= j:
                j -= 1
            continue
        if emitted:
            j = len(sims) - 1
        elif not moved_on:
            j -= 1
    ledger.observe_lazy(peak_lazy)
    _observe_space(ledger, sims)
    stats = {
        "p": p,
        "created": created,
        "spawned": spawned,
        "final_length": max_zone + 1,
        "max_live": max_len,
        "snapshot_mode": mode,
        "snapshot_cells_copied": snapshot_cells,
    }
    return sink.result(stats, geometric=True)


# ---------------------------------------------------------------------------
# name-based dispatch
# ---------------------------------------------------------------------------

REGULARIZERS = ("queue", "adaptive", "geometric", "dynamic", "usualinc")


def regularize(
    name: str,
    factory: MachineFactory,
    config: RegularizerConfig,
    *,
    keep: bool = True,
    on_emit: Callable[[Any], None] | None = None,
) -> RegularizedRun:
    """Run regularizer ``name`` on a fresh machine (or several) from ``factory``."""
    cfg = config
    if name in ("queue", "geometric", "dynamic", "usualinc") and cfg.p is None:
        raise SpecError(f"{name} needs the incremental delay p")
    if name == "queue":
        return queue_regularize(factory(), cfg.p, preprocess=cfg.preprocess, keep=keep, on_emit=on_emit)
    if name == "adaptive":
        return adaptive_regularize(
            factory(), cfg.epsilon, cfg.arithmetic_mode, preprocess=cfg.preprocess, keep=keep, on_emit=on_emit
        )
    if name in ("geometric", "usualinc"):
        if cfg.solution_count_bound is None:
            raise SpecError(f"{name} needs solution_count_bound")
        if name == "geometric":
            return geometric_regularize(
                factory,
                cfg.p,
                cfg.solution_count_bound,
                preprocess=cfg.preprocess,
                check_invariants=cfg.check_invariants,
                keep=keep,
                on_emit=on_emit,
            )
        return usualinc_regularize(
            factory, cfg.p, cfg.a, cfg.solution_count_bound, preprocess=cfg.preprocess, keep=keep, on_emit=on_emit
        )
    if name == "dynamic":
        return geometric_regularize_dynamic(
            factory,
            cfg.p,
            retire_machines=cfg.retire_machines,
            snapshot_mode=cfg.snapshot_mode,
            preprocess=cfg.preprocess,
            state_size=cfg.state_size,
            keep=keep,
            on_emit=on_emit,
        )
    raise SpecError(f"unknown regularizer {name!r}; choose from {', '.join(REGULARIZERS)}")
