"""Command-line driver.

Subcommands::

    enumreg demo     one machine source through one regularizer
    enumreg compare  one machine source through several regularizers
    enumreg dnf models FILE

Exit status: 0 when every delay verdict passes, 2 when a bound is violated
(either caught while running or by the final verdict), 1 for usage, input or
I/O errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from .amortizers import REGULARIZERS, RegularizedRun, RegularizerConfig, c_epsilon, regularize
from .dnf import PIPELINES, DnfFormula, calibrate, dnf_problem, dnf_run, parse_dnf
from .errors import BoundViolation, EnumRegError
from .flashlight import hybridize
from .machine import assemble, load, make_fixture, parse_fixture
from .machine.base import MachineFactory, SteppableMachine
from .metrics import Ledger, profiles_to_csv

__all__ = ["Scenario", "run_scenario", "calibrate_machine", "delay_bound", "main", "build_parser"]

EXIT_OK, EXIT_USAGE, EXIT_BOUND = 0, 1, 2


@dataclass
class Scenario:
    """What to run. Exactly one of ``fixture``, ``program`` or ``dnf`` is set."""

    fixture: str | None = None
    program: str | None = None
    dnf: str | None = None
    inputs: tuple[int, ...] = ()
    storage: str = "flat"
    regularizers: tuple[str, ...] = ("queue",)
    config: RegularizerConfig = field(default_factory=RegularizerConfig)
    emit: bool = False
    report: str | None = None
    fmt: str = "json"
    lenient: bool = False

    def __post_init__(self) -> None:
        given = [x for x in (self.fixture, self.program, self.dnf) if x is not None]
        if len(given) != 1:
            raise EnumRegError("give exactly one machine source: --fixture, --program or --dnf")
        for r in self.regularizers:
            if r not in REGULARIZERS:
                raise EnumRegError(f"unknown regularizer {r!r}; choose from {', '.join(REGULARIZERS)}")
        if self.fmt not in ("json", "csv"):
            raise EnumRegError(f"unknown format {self.fmt!r}")


def _jsonable(x: Any) -> Any:
    if isinstance(x, (tuple, list)):
        return [_jsonable(v) for v in x]
    if isinstance(x, frozenset):
        return sorted(x)
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    return x


def calibrate_machine(factory: MachineFactory, preprocess: bool) -> tuple[int, int]:
    """Solo run: solution count and ``ceil`` of the incremental delay.

    With ``preprocess`` the first solution and the moves before it are not
    counted toward the incremental delay.
    """
    m = factory()
    ledger = Ledger()
    first = True
    while not m.is_done():
        sol = m.step()
        ledger.moves += 1
        if sol is not None:
            ledger.record_emit()
            if preprocess and first:
                ledger.end_preprocessing()
            first = False
    ledger.finish()
    delay, _ = ledger.finalize()
    return delay.emissions, max(1, math.ceil(delay.incremental_sup))


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length() if x > 1 else 0


def delay_bound(name: str, cfg: RegularizerConfig, run: RegularizedRun) -> int | None:
    """The gap bound the regularizer promises under ``cfg``, or None if unknown."""
    p = cfg.p
    if p is None:
        return None
    if name == "queue":
        return p
    if name == "adaptive":
        c = c_epsilon(cfg.epsilon)
        e = 1 + cfg.epsilon
        pe = math.ceil(Fraction(p) ** e) if e.denominator == 1 else math.ceil(p ** float(e))
        if cfg.arithmetic_mode == "exact":
            return c * (pe + 1) + 2
        return 2 * 4**2 * c * (pe + 1)
    if name == "geometric":
        return 2 * p * (_ceil_log2(cfg.solution_count_bound or 1) + 1)
    if name == "usualinc":
        s = max(cfg.solution_count_bound or 1, 1)
        n = _ceil_log2(s ** (cfg.a + 1))
        return s**cfg.a * (cfg.a + 1) * 2 * p * (n + 1)
    if name == "dynamic":
        # a spawn cuts the top simulation's budget short and restarts the
        # descent, so each spawn can add one more budget to a gap
        return 2 * p * (run.stats.get("final_length", 1) + run.stats.get("spawned", 0))
    return None


def _source(s: Scenario) -> tuple[Callable[[], SteppableMachine], dict[str, Any], bool]:
    """Factory, description, and whether the first solution is preprocessing."""
    if s.fixture is not None:
        spec = parse_fixture(s.fixture)
        return (lambda: make_fixture(spec)), {"fixture": str(spec)}, False
    if s.program is not None:
        text = Path(s.program).read_text()
        prog = assemble(text)
        inputs = s.inputs
        storage = s.storage
        return (lambda: load(prog, inputs, storage)), {
            "program": Path(s.program).name,
            "inputs": list(inputs),
            "storage": storage,
        }, False
    f = parse_dnf(Path(s.dnf).read_text(), lenient=s.lenient)  # type: ignore[arg-type]
    cal = calibrate(f)
    prob = dnf_problem(f)
    budget = cal.preprocessing_budget
    return (lambda: hybridize(prob, budget)), {
        "dnf": Path(s.dnf).name,  # type: ignore[arg-type]
        "calibration": cal.to_dict(),
    }, True


def run_scenario(s: Scenario) -> tuple[int, dict[str, Any]]:
    """Run every requested regularizer; return the exit status and the report."""
    factory, desc, pre = _source(s)
    count, inc = calibrate_machine(factory, pre)
    report: dict[str, Any] = {"source": desc, "solo": {"solutions": count, "incremental_delay": inc}}
    runs: dict[str, Any] = {}
    status = EXIT_OK
    for name in s.regularizers:
        base = s.config
        cfg = RegularizerConfig(**{**base.__dict__})
        cfg.preprocess = base.preprocess or pre
        if cfg.p is None and name != "adaptive":
            cfg.p = inc
        if cfg.solution_count_bound is None:
            cfg.solution_count_bound = max(1, count)
        entry: dict[str, Any] = {"config": _config_dict(name, cfg)}
        try:
            run = regularize(name, factory, cfg, keep=s.emit)
        except BoundViolation as exc:
            entry.update(verdict="fail", error=f"{type(exc).__name__}: {exc}", violated_bound=exc.bound)
            status = EXIT_BOUND
            runs[name] = entry
            continue
        if name == "adaptive" and s.config.p is None:
            cfg.p = inc  # for the verdict only
        bound = delay_bound(name, cfg, run)
        ok = bound is None or run.delay.max_gap <= bound
        entry.update(
            solutions=run.count,
            delay=run.delay.to_dict(),
            space=run.space.to_dict(),
            stats=_jsonable(run.stats),
            delay_bound=bound,
            verdict="pass" if ok else "fail",
        )
        if not ok:
            entry["violated_bound"] = f"max_gap<={bound}"
            status = EXIT_BOUND
        if s.emit:
            entry["output"] = _jsonable(run.solutions)
        runs[name] = entry
    report["runs"] = runs
    return status, report


def _config_dict(name: str, cfg: RegularizerConfig) -> dict[str, Any]:
    d: dict[str, Any] = {"regularizer": name, "p": cfg.p, "preprocess": cfg.preprocess}
    if name == "adaptive":
        d.update(epsilon=_jsonable(cfg.epsilon), arithmetic_mode=cfg.arithmetic_mode)
    if name in ("geometric", "usualinc"):
        d["solution_count_bound"] = cfg.solution_count_bound
    if name == "usualinc":
        d["a"] = cfg.a
    if name == "dynamic":
        d.update(retire_machines=cfg.retire_machines, snapshot_mode=cfg.snapshot_mode or "lazy")
    return d


def render(report: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    rows = []
    for name, e in report["runs"].items():
        row: dict[str, Any] = {"regularizer": name, "verdict": e["verdict"]}
        if "delay" in e:
            d, sp = e["delay"], e["space"]
            row.update(solutions=e["solutions"], delay_bound=e["delay_bound"])
            row.update({k: v for k, v in d.items() if k not in ("gaps", "gap_histogram")})
            row["average_gap"] = "/".join(map(str, d["average_gap"]))
            row["incremental_sup"] = "/".join(map(str, d["incremental_sup"]))
            row.update(sp)
        else:
            row["error"] = e["error"]
        rows.append(row)
    keys: list[str] = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    return profiles_to_csv([{k: r.get(k, "") for k in keys} for r in rows])


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _add_config_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, help="incremental delay bound (default: measured by a solo run)")
    sp.add_argument("--epsilon", type=Fraction, default=Fraction(1), help="adaptive exponent slack, e.g. 1 or 1/2")
    sp.add_argument("--arithmetic", choices=("exact", "mbit"), default="exact", help="adaptive pull test")
    sp.add_argument("--solution-bound", type=int, help="bound S on the number of solutions (default: solo count)")
    sp.add_argument("--exponent-a", type=int, default=0, help="usualinc growth exponent a")
    sp.add_argument("--retire", action="store_true", help="dynamic: drop simulations past their zone")
    sp.add_argument("--snapshot", choices=("eager", "lazy"), help="dynamic: snapshot mode (default lazy)")
    sp.add_argument("--state-size", type=int, help="dynamic: start the spawn schedule at this state size")
    sp.add_argument("--preprocess", action="store_true", help="treat the first solution as preprocessing")
    sp.add_argument("--storage", default="flat", help="flat | chunks:C | directory | directory:D")
    sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    sp.add_argument("--report", help="write the report here instead of stdout")
    sp.add_argument("--emit", action="store_true", help="include the emitted solutions in the report")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixture", help="family:arg,arg (bursty, adversary, uniform, scripted, triangular)")
    src.add_argument("--program", help="MiniRAM assembly file")
    src.add_argument("--dnf", help="DNF file, run through the hybrid flashlight machine")
    sp.add_argument("--input", type=_ints, default=(), help="comma-separated input words for --program")
    sp.add_argument("--lenient", action="store_true", help="drop contradictory DNF terms instead of failing")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="enumreg", description="Delay regularization of enumeration machines.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    demo = sub.add_parser("demo", help="run one regularizer")
    demo.add_argument("--regularizer", choices=REGULARIZERS, default="queue")
    _add_config_flags(demo)

    cmp_ = sub.add_parser("compare", help="run several regularizers on the same source")
    cmp_.add_argument("--regularizers", default=",".join(REGULARIZERS), help="comma-separated list")
    _add_config_flags(cmp_)

    dnf = sub.add_parser("dnf", help="DNF model enumeration")
    dsub = dnf.add_subparsers(dest="dnf_command", required=True, parser_class=_Parser)
    models = dsub.add_parser("models", help="print every model of a DNF file")
    models.add_argument("file")
    models.add_argument("--pipeline", choices=PIPELINES, default="none")
    models.add_argument("--p", type=int, help="override the measured incremental delay of the hybrid")
    models.add_argument("--path-time", type=int, help="override the hybrid preprocessing budget")
    models.add_argument("--solution-bound", type=int, help="geometric bound S (default 2**n)")
    models.add_argument("--lenient", action="store_true")
    models.add_argument("--binary", action="store_true", help="write models as packed little-endian bytes")
    models.add_argument("--report", help="also write a JSON profile here")
    return parser


def _scenario(args: argparse.Namespace, regs: tuple[str, ...]) -> Scenario:
    cfg = RegularizerConfig(
        p=args.p,
        epsilon=args.epsilon,
        arithmetic_mode=args.arithmetic,
        solution_count_bound=args.solution_bound,
        a=args.exponent_a,
        retire_machines=args.retire,
        snapshot_mode=args.snapshot,
        preprocess=args.preprocess,
        state_size=args.state_size,
    )
    return Scenario(
        fixture=args.fixture,
        program=args.program,
        dnf=args.dnf,
        inputs=args.input,
        storage=args.storage,
        regularizers=regs,
        config=cfg,
        emit=args.emit,
        report=args.report,
        fmt=args.fmt,
        lenient=args.lenient,
    )


def _dnf_models(args: argparse.Namespace) -> int:
    f: DnfFormula = parse_dnf(Path(args.file).read_text(), lenient=args.lenient)
    run, cal = dnf_run(
        f,
        args.pipeline,
        p=args.p,
        preprocessing_budget=args.path_time,
        solution_bound=args.solution_bound,
    )
    models = run.solutions or []
    if args.binary:
        width = max(1, (f.n + 7) // 8)
        sys.stdout.buffer.write(b"".join(a.to_bytes(width, "little") for a in models))
        sys.stdout.buffer.flush()
    else:
        sys.stdout.write("".join(f.format_model(a) + "\n" for a in models))
    if args.report:
        doc = {
            "source": {"dnf": Path(args.file).name, "n": f.n, "m": f.m},
            "pipeline": args.pipeline,
            "models": run.count,
            "delay": run.delay.to_dict(),
            "space": run.space.to_dict(),
            "stats": _jsonable(run.stats),
            "calibration": cal.to_dict() if cal else None,
        }
        Path(args.report).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "dnf":
            return _dnf_models(args)
        if args.command == "demo":
            regs: tuple[str, ...] = (args.regularizer,)
        else:
            regs = tuple(r.strip() for r in args.regularizers.split(",") if r.strip())
        scen = _scenario(args, regs)
        status, report = run_scenario(scen)
        _write(render(report, scen.fmt), scen.report)
        for name, e in report["runs"].items():
            if e["verdict"] == "fail":
                print(f"enumreg: {name}: bound violated ({e.get('violated_bound')})", file=sys.stderr)
        return status
    except BoundViolation as exc:
        print(f"enumreg: bound violated ({exc.bound}): {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (EnumRegError, OSError, ValueError) as exc:
        print(f"enumreg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
