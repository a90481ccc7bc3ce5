"""A tiny register machine with an ``out`` instruction.

Assembly format (one instruction per line, ``#`` starts a comment, ``name:``
defines a label that may share a line with an instruction)::

    loadi rD, IMM        rD <- IMM
    add   rD, rA, rB     rD <- rA + rB        (also: sub, mul)
    br    COND, rA, rB, LABEL                 jump if rA COND rB
    jmp   LABEL          alias for ``br al, r0, r0, LABEL``
    ldi   rD, rA         rD <- R[rA]          (indirect load)
    sti   rA, rS         R[rA] <- rS          (indirect store)
    out   rI, rJ         emit (R[I], ..., R[J])
    halt

``COND`` is one of ``eq ne lt le gt ge al``. The input word vector is placed
in registers ``r0 .. r{len-1}`` at load time; every other register starts at
zero. Each executed instruction costs one step. A ``halt`` reached by falling
through from an ``out`` is folded into that step, so a machine that ends with
``out; halt`` stops on the step that emits its last solution. Running off the
end of the program also halts.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import CapabilityError, LoadError
from .base import SteppableMachine
from .storage import LazyCopyFile, RegisterFile, parse_storage

__all__ = ["Instr", "MiniRamProgram", "MiniRamMachine", "assemble", "load", "OPCODES"]

OPCODES = ("loadi", "add", "sub", "mul", "br", "ldi", "sti", "out", "halt")

_CONDS: dict[str, Callable[[int, int], bool]] = {
    "eq": operator.eq,
    "ne": operator.ne,
    "lt": operator.lt,
    "le": operator.le,
    "gt": operator.gt,
    "ge": operator.ge,
    "al": lambda a, b: True,
}

_ARITH = {"add": operator.add, "sub": operator.sub, "mul": operator.mul}


@dataclass(frozen=True)
class Instr:
    op: str
    args: tuple = ()

    def __str__(self) -> str:
        return f"{self.op} {', '.join(map(str, self.args))}".strip()


@dataclass(frozen=True)
class MiniRamProgram:
    instructions: tuple[Instr, ...]
    labels: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        validate(self.instructions)

    def __len__(self) -> int:
        return len(self.instructions)


def validate(instrs: Sequence[Instr]) -> None:
    n = len(instrs)
    for idx, ins in enumerate(instrs):
        op, a = ins.op, ins.args
        arity = {"loadi": 2, "add": 3, "sub": 3, "mul": 3, "br": 4, "ldi": 2, "sti": 2, "out": 2, "halt": 0}
        if op not in arity:
            raise LoadError(f"unknown opcode {op!r}", idx)
        if len(a) != arity[op]:
            raise LoadError(f"{op} takes {arity[op]} operands, got {len(a)}", idx)
        if op == "br":
            cond, ra, rb, target = a
            if cond not in _CONDS:
                raise LoadError(f"unknown condition {cond!r}", idx)
            regs = (ra, rb)
            if not isinstance(target, int) or not 0 <= target <= n:
                raise LoadError(f"branch target {target!r} out of range", idx)
        elif op == "loadi":
            regs = (a[0],)
            if not isinstance(a[1], int):
                raise LoadError("loadi needs an integer immediate", idx)
        else:
            regs = a
        for r in regs:
            if not isinstance(r, int) or r < 0:
                raise LoadError(f"bad register operand {r!r}", idx)
        if op == "out" and a[0] > a[1]:
            raise LoadError(f"empty output range r{a[0]}..r{a[1]}", idx)


_REG = re.compile(r"^r(\d+)$")


def _reg(tok: str, idx: int) -> int:
    m = _REG.match(tok)
    if not m:
        raise LoadError(f"expected register, got {tok!r}", idx)
    return int(m.group(1))


def assemble(text: str) -> MiniRamProgram:
    """Parse assembly text into a validated program."""
    raw: list[tuple[str, list[str], int]] = []
    labels: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        while True:
            m = re.match(r"^([A-Za-z_][\w]*)\s*:\s*(.*)$", line)
            if not m:
                break
            name = m.group(1)
            if name in labels:
                raise LoadError(f"duplicate label {name!r} (line {lineno})", len(raw))
            labels[name] = len(raw)
            line = m.group(2).strip()
        if not line:
            continue
        op, _, rest = line.partition(" ")
        operands = [t.strip() for t in rest.split(",")] if rest.strip() else []
        raw.append((op.lower(), operands, lineno))

    instrs = []
    for idx, (op, ops, lineno) in enumerate(raw):
        try:
            if op in ("add", "sub", "mul"):
                args: tuple = tuple(_reg(t, idx) for t in ops)
            elif op == "loadi":
                if len(ops) != 2:
                    raise LoadError("loadi takes 2 operands", idx)
                args = (_reg(ops[0], idx), int(ops[1], 0))
            elif op in ("ldi", "sti", "out"):
                args = tuple(_reg(t, idx) for t in ops)
            elif op == "br":
                if len(ops) != 4:
                    raise LoadError("br takes 4 operands", idx)
                target = ops[3]
                if target not in labels:
                    raise LoadError(f"undefined label {target!r}", idx)
                args = (ops[0].lower(), _reg(ops[1], idx), _reg(ops[2], idx), labels[target])
            elif op == "jmp":
                if len(ops) != 1 or ops[0] not in labels:
                    raise LoadError(f"jmp needs a defined label, got {ops}", idx)
                op, args = "br", ("al", 0, 0, labels[ops[0]])
            elif op == "halt":
                args = tuple(ops)
            else:
                raise LoadError(f"unknown opcode {op!r} (line {lineno})", idx)
        except ValueError as exc:
            raise LoadError(f"{exc} (line {lineno})", idx) from None
        instrs.append(Instr(op, args))
    return MiniRamProgram(tuple(instrs), tuple(sorted(labels.items(), key=lambda kv: kv[1])))


class MiniRamMachine(SteppableMachine):
    supports_snapshot = True

    def __init__(
        self,
        program: MiniRamProgram,
        registers: RegisterFile,
        pc: int = 0,
    ) -> None:
        super().__init__()
        self.program = program
        self._code = program.instructions
        self.registers = registers
        self.pc = pc
        self.snapshot_cost = 0  # cells copied by the snapshot that created this machine
        self.step_flag_ops = 0

    def _advance(self):
        regs = self.registers
        lazy = regs if isinstance(regs, LazyCopyFile) and regs.active else None
        before = lazy.flag_ops if lazy is not None else 0
        code = self._code
        pc = self.pc
        if pc >= len(code):
            self._done = True
            return None
        ins = code[pc]
        op, a = ins.op, ins.args
        sol = None
        nxt = pc + 1
        if op == "loadi":
            regs.write(a[0], a[1])
        elif op in _ARITH:
            regs.write(a[0], _ARITH[op](regs.read(a[1]), regs.read(a[2])))
        elif op == "br":
            if _CONDS[a[0]](regs.read(a[1]), regs.read(a[2])):
                nxt = a[3]
        elif op == "ldi":
            regs.write(a[0], regs.read(regs.read(a[1])))
        elif op == "sti":
            regs.write(regs.read(a[0]), regs.read(a[1]))
        elif op == "out":
            sol = tuple(regs.read(t) for t in range(a[0], a[1] + 1))
        elif op == "halt":
            self._done = True
            nxt = pc
        self.pc = nxt
        if lazy is not None:
            lazy.sweep()
            self.step_flag_ops = lazy.flag_ops - before
        else:
            self.step_flag_ops = 0
        if not self._done and (nxt >= len(code) or (sol is not None and code[nxt].op == "halt")):
            self._done = True
        return sol

    def snapshot(self, mode: str = "eager") -> MiniRamMachine:
        if mode == "eager":
            regs = self.registers.copy()
            cost = self.registers.high_water
        elif mode == "lazy":
            regs = LazyCopyFile(self.registers)
            cost = 0
        else:
            raise CapabilityError(f"unknown snapshot mode {mode!r}")
        other = MiniRamMachine(self.program, regs, self.pc)
        other.steps = self.steps
        other._done = self._done
        other.last_solution = self.last_solution
        other.snapshot_cost = cost
        return other

    def state_size(self) -> int:
        return self.registers.high_water + 1

    def lazy_copy_active(self) -> bool:
        return isinstance(self.registers, LazyCopyFile) and self.registers.active


def load(program: MiniRamProgram | str, inputs: Sequence[int] = (), storage: str = "flat") -> MiniRamMachine:
    """Build a machine at step 0 with ``inputs`` in the low registers."""
    if isinstance(program, str):
        program = assemble(program)
    regs = parse_storage(storage)()
    for i, w in enumerate(inputs):
        regs.write(i, int(w))
    return MiniRamMachine(program, regs)
