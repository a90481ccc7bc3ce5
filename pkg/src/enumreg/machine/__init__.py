"""Steppable machines: the abstract interface, MiniRAM, storage and fixtures."""

from .base import MachineFactory, SteppableMachine, run_solo
from .fixtures import FixtureSpec, ScheduledMachine, make_fixture, parse_fixture
from .miniram import MiniRamMachine, MiniRamProgram, assemble, load
from .storage import (
    ChunkedFile,
    DirectoryFile,
    FlatFile,
    LazyCopyFile,
    RegisterFile,
    make_storage,
    parse_storage,
)


def snapshot(machine: SteppableMachine, mode: str = "eager") -> SteppableMachine:
    return machine.snapshot(mode)


__all__ = [
    "SteppableMachine",
    "MachineFactory",
    "run_solo",
    "snapshot",
    "FixtureSpec",
    "ScheduledMachine",
    "make_fixture",
    "parse_fixture",
    "MiniRamMachine",
    "MiniRamProgram",
    "assemble",
    "load",
    "RegisterFile",
    "FlatFile",
    "ChunkedFile",
    "DirectoryFile",
    "LazyCopyFile",
    "make_storage",
    "parse_storage",
]
