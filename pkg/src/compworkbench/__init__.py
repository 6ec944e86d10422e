"""Models of computation workbench.

Turing machines, register machines, recursive functions and circuits as
composable objects, with encodings, a Cook-Levin bridge to SAT, fuel-bounded
computability checks, resource metering, Kolmogorov upper bounds and an
algorithm normalizer for register programs.
"""

from .core import (UNARY, Alphabet, BlackBoxFunction, EquivalenceReport, FuelExhausted, Halted, Rejected,
                   behaviorally_equivalent)
from .errors import WorkbenchError
from .turing import TuringMachine, parse_tm, run, semantics, serialize_tm
from .regmachine import RegProgram, parse_rm, run_reg, serialize_rm
from .recfun import eval_rec, parse_rf
from .circuits import Circuit, eval_circuit, parse_ckt

__version__ = "0.1.0"

__all__ = [
    'UNARY', 'Alphabet', 'BlackBoxFunction', 'EquivalenceReport', 'FuelExhausted', 'Halted', 'Rejected',
    'behaviorally_equivalent', 'WorkbenchError', 'TuringMachine', 'parse_tm', 'run', 'semantics',
    'serialize_tm', 'RegProgram', 'parse_rm', 'run_reg', 'serialize_rm', 'eval_rec', 'parse_rf', 'Circuit',
    'eval_circuit', 'parse_ckt',
]
