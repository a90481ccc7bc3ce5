from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Callable

from ..errors import CapabilityError, ContractViolation

__all__ = ["SteppableMachine", "MachineFactory", "run_solo"]


class SteppableMachine(ABC):
    """A suspended enumeration computation advanced one cost unit at a time.

    Subclasses implement :meth:`_advance`, which performs exactly one unit of
    work and returns the emitted solution or ``None``. A machine must be done
    right after the step that emits its last solution (solutions are never
    ``None``).
    """

    supports_snapshot = False

    def __init__(self) -> None:
        self.steps = 0
        self.last_solution: Any = None
        self._done = False

    @abstractmethod
    def _advance(self) -> Any:
        ...

    def step(self) -> Any:
        if self._done:
            raise ContractViolation(f"step() on a finished machine (after {self.steps} steps)")
        self.steps += 1
        sol = self._advance()
        self.last_solution = sol
        return sol

    def is_done(self) -> bool:
        return self._done

    def snapshot(self, mode: str = "eager") -> SteppableMachine:
        raise CapabilityError(f"{type(self).__name__} does not support snapshot")

    def state_size(self) -> int:
        """Number of storage cells held by this machine (for space profiles)."""
        return 0

    def lazy_copy_active(self) -> bool:
        return False


MachineFactory = Callable[[], SteppableMachine]


def run_solo(machine: SteppableMachine, ledger=None) -> list[Any]:
    """Run ``machine`` to completion with no regularization."""
    out = []
    while not machine.is_done():
        sol = machine.step()
        if ledger is not None:
            ledger.record_move()
        if sol is not None:
            out.append(sol)
            if ledger is not None:
                ledger.record_emit()
    if ledger is not None:
        ledger.finish()
    return out
