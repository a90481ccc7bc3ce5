"""Delay regularization for enumeration algorithms.

Enumerators are modelled as steppable machines whose every ``step()`` costs
one move-unit. The regularizers in :mod:`enumreg.amortizers` turn a machine
with a good incremental delay into one with a good worst-case delay.
"""

from .amortizers import (
    REGULARIZERS,
    RegularizedRun,
    RegularizerConfig,
    adaptive_regularize,
    c_epsilon,
    geometric_regularize,
    geometric_regularize_dynamic,
    queue_regularize,
    regularize,
    usualinc_regularize,
    zone,
)
from .dnf import DnfFormula, brute_force_models, dnf_enumerate, dnf_extension_check, parse_dnf
from .errors import (
    BoundViolation,
    CapabilityError,
    ContractViolation,
    CoverageError,
    EnumRegError,
    IncrementalDelayViolation,
    InvariantViolation,
    LoadError,
    ParseError,
    SoundnessError,
    SpecError,
    StateError,
)
from .flashlight import FlashlightProblem, HybridMachine, PartialSolution, flashlight_enumerate, hybridize
from .gray_counter import GrayCounter, gray_decode, gray_encode
from .machine import (
    FixtureSpec,
    MiniRamMachine,
    SteppableMachine,
    assemble,
    load,
    make_fixture,
    parse_fixture,
    run_solo,
    snapshot,
)
from .metrics import DelayProfile, Ledger, SpaceProfile

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
