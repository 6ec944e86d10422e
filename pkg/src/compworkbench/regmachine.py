"""Register machines: the three-instruction language, its VM, composition and tensor.

The literal language is ``Z = 0``, ``Z = Z + 1`` and ``if Z = 0 goto L``. Two
extensions are clearly marked: ``Z = Z - 1`` (monus) makes the language
universal, and ``call #k (...) -> (...)`` runs program k of a ProgramTable.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .core import UNARY, BlackBoxFunction, FuelExhausted, Halted, RunOutcome, resolve_fuel
from .errors import FormatError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SetZero:
    reg: str


@dataclass(frozen=True)
class Inc:
    reg: str


@dataclass(frozen=True)
class Dec:
    """Extension: decrement, stopping at zero."""
    reg: str


@dataclass(frozen=True)
class IfZeroGoto:
    reg: str
    label: str


@dataclass(frozen=True)
class Call:
    """Extension: run program ``index`` of the table on ``args``, storing results in ``rets``."""
    index: int
    args: Tuple[str, ...]
    rets: Tuple[str, ...]


Instruction = Union[SetZero, Inc, Dec, IfZeroGoto, Call]


def registers_of(ins: Instruction) -> Tuple[str, ...]:
    if isinstance(ins, Call):
        return ins.args + ins.rets
    return (ins.reg,)


def written_by(ins: Instruction) -> Tuple[str, ...]:
    if isinstance(ins, (SetZero, Inc, Dec)):
        return (ins.reg,)
    if isinstance(ins, Call):
        return ins.rets
    return ()


def read_by(ins: Instruction) -> Tuple[str, ...]:
    if isinstance(ins, (Inc, Dec, IfZeroGoto)):
        return (ins.reg,)
    if isinstance(ins, Call):
        return ins.args
    return ()


@dataclass(frozen=True)
class RegProgram:
    instructions: Tuple[Instruction, ...]
    inputs: Tuple[str, ...] = ()
    outputs: Tuple[str, ...] = ()
    labels: Tuple[Tuple[str, int], ...] = ()
    name: str = field(default="rm", compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'instructions', tuple(self.instructions))
        object.__setattr__(self, 'inputs', tuple(self.inputs))
        object.__setattr__(self, 'outputs', tuple(self.outputs))
        labels = self.labels.items() if isinstance(self.labels, dict) else self.labels
        object.__setattr__(self, 'labels', tuple(sorted(labels, key=lambda kv: (kv[1], kv[0]))))
        table = dict(self.labels)
        if len(table) != len(self.labels):
            raise ShapeError(f"{self.name}: duplicate label")
        for label, line in self.labels:
            if not 0 <= line <= len(self.instructions):
                raise ShapeError(f"{self.name}: label {label} points outside the program")
        for ins in self.instructions:
            if isinstance(ins, IfZeroGoto) and ins.label not in table:
                raise ShapeError(f"{self.name}: undefined label {ins.label}")
        if len(set(self.inputs)) != len(self.inputs) or len(set(self.outputs)) != len(self.outputs):
            raise ShapeError(f"{self.name}: repeated register in inputs or outputs")
        if set(self.inputs) & set(self.outputs):
            raise ShapeError(f"{self.name}: a register cannot be both input and output")
        object.__setattr__(self, '_targets', table)

    @property
    def label_map(self) -> Dict[str, int]:
        return dict(self._targets)

    @property
    def registers(self) -> Tuple[str, ...]:
        """All registers in order of first appearance (inputs first, then outputs)."""
        seen: List[str] = []
        for reg in itertools.chain(self.inputs, self.outputs,
                                   (r for ins in self.instructions for r in registers_of(ins))):
            if reg not in seen:
                seen.append(reg)
        return tuple(seen)

    @property
    def work(self) -> Tuple[str, ...]:
        roles = set(self.inputs) | set(self.outputs)
        return tuple(r for r in self.registers if r not in roles)

    @property
    def uses_extensions(self) -> bool:
        return any(isinstance(ins, (Dec, Call)) for ins in self.instructions)

    @property
    def uses_call(self) -> bool:
        return any(isinstance(ins, Call) for ins in self.instructions)

    def labels_at(self, line: int) -> List[str]:
        return [label for label, at in self.labels if at == line]


class ProgramTable:
    """Append-only registry of programs reachable through ``call #k``."""

    def __init__(self, programs: Iterable[RegProgram] = ()):
        self._programs: List[RegProgram] = list(programs)

    def register(self, program: RegProgram) -> int:
        self._programs.append(program)
        return len(self._programs) - 1

    def __getitem__(self, index: int) -> RegProgram:
        if not 0 <= index < len(self._programs):
            raise ShapeError(f"call index #{index} is not in the program table")
        return self._programs[index]

    def __len__(self) -> int:
        return len(self._programs)


@dataclass
class _Frame:
    program: RegProgram
    regs: Dict[str, int]
    returns: Tuple[str, ...] = ()
    pc: int = 0
    written: Set[str] = field(default_factory=set)


def _execute(p: RegProgram, inputs: Sequence[int], fuel: int, table: Optional[ProgramTable]) -> RunOutcome:
    """Run on an explicit stack of frames; a call pushes the callee, falling off its end pops it."""
    stack = [_Frame(p, dict(zip(p.inputs, inputs)))]
    steps = 0
    while True:
        frame = stack[-1]
        program = frame.program
        if frame.pc >= len(program.instructions):
            outputs = tuple(frame.regs.get(y, 0) for y in program.outputs)
            stack.pop()
            if not stack:
                return Halted(outputs, steps, len(frame.written))
            stack[-1].regs.update(zip(frame.returns, outputs))
            continue
        if steps >= fuel:
            return FuelExhausted(steps, len(stack[0].written))
        ins = program.instructions[frame.pc]
        steps += 1
        frame.pc += 1
        regs = frame.regs
        if isinstance(ins, SetZero):
            regs[ins.reg] = 0
            frame.written.add(ins.reg)
        elif isinstance(ins, Inc):
            regs[ins.reg] = regs.get(ins.reg, 0) + 1
            frame.written.add(ins.reg)
        elif isinstance(ins, Dec):
            regs[ins.reg] = max(regs.get(ins.reg, 0) - 1, 0)
            frame.written.add(ins.reg)
        elif isinstance(ins, IfZeroGoto):
            if regs.get(ins.reg, 0) == 0:
                frame.pc = program._targets[ins.label]
        else:
            if table is None:
                raise ShapeError(f"{program.name} calls #{ins.index} but no program table was supplied")
            callee = table[ins.index]
            if len(ins.args) != len(callee.inputs) or len(ins.rets) != len(callee.outputs):
                raise ShapeError(f"call #{ins.index} does not match {callee.name}'s arity")
            args = [regs.get(a, 0) for a in ins.args]
            stack.append(_Frame(callee, dict(zip(callee.inputs, args)), ins.rets))


def run_reg(p: RegProgram, inputs: Sequence[int], fuel: Optional[int] = None,
            table: Optional[ProgramTable] = None) -> RunOutcome:
    """Run p on natural-number inputs; falling off the end halts with the Y values."""
    inputs = tuple(inputs)
    if len(inputs) != len(p.inputs):
        raise ShapeError(f"{p.name} takes {len(p.inputs)} inputs, got {len(inputs)}")
    if any(not isinstance(v, int) or v < 0 for v in inputs):
        raise ShapeError(f"register inputs must be naturals, got {inputs}")
    return _execute(p, inputs, resolve_fuel(fuel), table)


def nat_semantics(p: RegProgram, table: Optional[ProgramTable] = None) -> BlackBoxFunction:
    """The function of p on naturals."""
    return BlackBoxFunction(len(p.inputs), len(p.outputs),
                            lambda inputs, fuel: run_reg(p, inputs, fuel, table), p.name)


def nat_to_unary(n: int) -> str:
    return "1" * n


def unary_to_nat(word: str) -> int:
    return len(UNARY.check_word(word))


def reg_semantics(p: RegProgram, table: Optional[ProgramTable] = None) -> BlackBoxFunction:
    """The function of p with naturals crossing the boundary as unary words over {1}."""

    def evaluate(words, fuel):
        outcome = run_reg(p, [unary_to_nat(w) for w in words], fuel, table)
        if isinstance(outcome, Halted):
            return Halted(tuple(nat_to_unary(v) for v in outcome.outputs), outcome.steps_used,
                          outcome.cells_used)
        return outcome

    return BlackBoxFunction(len(p.inputs), len(p.outputs), evaluate, p.name)


# -- renaming, composition, tensor ---------------------------------------------------

def rename(p: RegProgram, mapping: Dict[str, str], label_prefix: str = "", name: Optional[str] = None) -> RegProgram:
    """Rename registers (and prefix labels); unmapped registers keep their names."""

    def r(reg: str) -> str:
        return mapping.get(reg, reg)

    def convert(ins: Instruction) -> Instruction:
        if isinstance(ins, IfZeroGoto):
            return IfZeroGoto(r(ins.reg), label_prefix + ins.label)
        if isinstance(ins, Call):
            return Call(ins.index, tuple(map(r, ins.args)), tuple(map(r, ins.rets)))
        return type(ins)(r(ins.reg))

    return RegProgram(tuple(convert(i) for i in p.instructions), tuple(map(r, p.inputs)),
                      tuple(map(r, p.outputs)), tuple((label_prefix + l, at) for l, at in p.labels),
                      name=name or p.name)


class _Namer:
    def __init__(self):
        self.counts = {"X": 0, "Y": 0, "W": 0}

    def fresh(self, role: str) -> str:
        self.counts[role] += 1
        return f"{role}{self.counts[role]}"


def _concat(parts: Sequence[RegProgram], inputs, outputs, name: str, extra_labels=()) -> RegProgram:
    instructions: List[Instruction] = []
    labels = list(extra_labels)
    for part in parts:
        offset = len(instructions)
        instructions.extend(part.instructions)
        labels.extend((label, at + offset) for label, at in part.labels)
    return RegProgram(tuple(instructions), tuple(inputs), tuple(outputs), tuple(labels), name=name)


def move_program(pairs: Sequence[Tuple[str, str]], zero: str, label_prefix: str) -> RegProgram:
    """dst = src for each pair (emptying src), using Dec/Inc loops and a register that stays 0."""
    instructions: List[Instruction] = []
    labels = []
    for i, (src, dst) in enumerate(pairs):
        loop, done = f"{label_prefix}loop{i}", f"{label_prefix}done{i}"
        instructions.append(SetZero(dst))
        labels.append((loop, len(instructions)))
        instructions += [IfZeroGoto(src, done), Dec(src), Inc(dst), IfZeroGoto(zero, loop)]
        labels.append((done, len(instructions)))
    return RegProgram(tuple(instructions), labels=tuple(labels), name="move")


def compose_reg(p1: RegProgram, p2: RegProgram) -> RegProgram:
    """p2 after p1: p1's Y-values are moved into p2's X-registers."""
    if len(p1.outputs) != len(p2.inputs):
        raise ShapeError(f"cannot compose {p1.name} ({len(p1.outputs)} outputs) with {p2.name} ({len(p2.inputs)} inputs)")
    namer = _Namer()
    first = {x: namer.fresh("X") for x in p1.inputs}
    for reg in p1.registers:
        first.setdefault(reg, namer.fresh("W"))
    second = {y: namer.fresh("Y") for y in p2.outputs}
    for reg in p2.registers:
        second.setdefault(reg, namer.fresh("W"))
    zero = namer.fresh("W")
    a = rename(p1, first, "a.")
    b = rename(p2, second, "b.")
    wiring = move_program([(first[y], second[x]) for y, x in zip(p1.outputs, p2.inputs)], zero, "wire.")
    return _concat([a, wiring, b], a.inputs, b.outputs, f"{p2.name}∘{p1.name}")


def tensor_reg(p1: RegProgram, p2: RegProgram) -> RegProgram:
    """Run p1 then p2 on disjoint registers; inputs and outputs are concatenated."""
    namer = _Namer()
    maps = []
    for p in (p1, p2):
        maps.append({x: namer.fresh("X") for x in p.inputs})
    for p, mapping in zip((p1, p2), maps):
        mapping.update({y: namer.fresh("Y") for y in p.outputs})
    for p, mapping in zip((p1, p2), maps):
        for reg in p.registers:
            mapping.setdefault(reg, namer.fresh("W"))
    a = rename(p1, maps[0], "a.")
    b = rename(p2, maps[1], "b.")
    return _concat([a, b], a.inputs + b.inputs, a.outputs + b.outputs, f"{p1.name}⊗{p2.name}")


# -- text format --------------------------------------------------------------------

_REG = r"([A-Za-z][A-Za-z0-9_.]*)"
_PATTERNS = [
    (re.compile(rf"^{_REG}\s*=\s*0$"), lambda m: SetZero(m.group(1))),
    (re.compile(rf"^{_REG}\s*=\s*{_REG}\s*\+\s*1$"), lambda m: Inc(m.group(1)) if m.group(1) == m.group(2) else None),
    (re.compile(rf"^{_REG}\s*=\s*{_REG}\s*-\s*1$"), lambda m: Dec(m.group(1)) if m.group(1) == m.group(2) else None),
    (re.compile(rf"^if\s+{_REG}\s*=\s*0\s+goto\s+{_REG}$"), lambda m: IfZeroGoto(m.group(1), m.group(2))),
    (re.compile(r"^call\s+#(\d+)\s*\(([^)]*)\)\s*->\s*\(([^)]*)\)$"),
     lambda m: Call(int(m.group(1)), tuple(m.group(2).split()), tuple(m.group(3).split()))),
]


def format_instruction(ins: Instruction) -> str:
    if isinstance(ins, SetZero):
        return f"{ins.reg} = 0"
    if isinstance(ins, Inc):
        return f"{ins.reg} = {ins.reg} + 1"
    if isinstance(ins, Dec):
        return f"{ins.reg} = {ins.reg} - 1"
    if isinstance(ins, IfZeroGoto):
        return f"if {ins.reg} = 0 goto {ins.label}"
    return f"call #{ins.index} ({' '.join(ins.args)}) -> ({' '.join(ins.rets)})"


def parse_rm(text: str, name: str = "rm") -> RegProgram:
    instructions: List[Instruction] = []
    labels: List[Tuple[str, int]] = []
    inputs: Tuple[str, ...] = ()
    outputs: Tuple[str, ...] = ()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("inputs"):
            inputs = tuple(line.split()[1:])
            continue
        if line.startswith("outputs"):
            outputs = tuple(line.split()[1:])
            continue
        label_match = re.match(rf"^{_REG}\s*:\s*(.*)$", line)
        while label_match:
            labels.append((label_match.group(1), len(instructions)))
            line = label_match.group(2).strip()
            label_match = re.match(rf"^{_REG}\s*:\s*(.*)$", line)
        if not line:
            continue
        for pattern, build in _PATTERNS:
            found = pattern.match(line)
            if found and build(found) is not None:
                instructions.append(build(found))
                break
        else:
            raise FormatError(f"unrecognized instruction {line!r}", number)
    try:
        return RegProgram(tuple(instructions), inputs, outputs, tuple(labels), name=name)
    except ShapeError as e:
        raise FormatError(e.message)


def serialize_rm(p: RegProgram) -> str:
    lines = [f"inputs {' '.join(p.inputs)}".rstrip(), f"outputs {' '.join(p.outputs)}".rstrip()]
    for line, ins in enumerate(p.instructions):
        prefix = "".join(f"{label}: " for label in p.labels_at(line))
        lines.append(prefix + format_instruction(ins))
    for label in p.labels_at(len(p.instructions)):
        lines.append(f"{label}:")
    return "\n".join(lines) + "\n"
