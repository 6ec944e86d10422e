"""Register programs up to "essentially the same algorithm".

A program is parsed into structured statements (loops, guards, plain
instructions) and rewritten to a fixpoint by four rules:

* alpha: registers renamed by role and first use (X1.., Y1.., W1..; W0 for
  registers that are never written and so always read 0);
* roll: a peeled first iteration ``if Z != 0 { B; while Z != 0 { B } }`` becomes
  the loop it was peeled from;
* fission: a counted loop whose body splits into groups sharing no register
  becomes a chain of loops, each passing its iteration count to the next
  through a relay register;
* reorder: adjacent statements that do not conflict are sorted by their text.

Control flow that does not parse (jumps into the middle of a loop, loops whose
back edge is conditional) is left as is and only renamed.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from .core import BlackBoxFunction
from .errors import UnsupportedError
from .regmachine import (Dec, IfZeroGoto, Inc, Instruction, RegProgram, format_instruction, read_by,
                         reg_semantics, registers_of, rename, serialize_rm, written_by)

logger = logging.getLogger(__name__)

ALL_RULES: FrozenSet[str] = frozenset({"alpha", "roll", "fission", "reorder"})
JUMP = "W0"
_MAX_ROUNDS = 32


@dataclass(frozen=True)
class Basic:
    ins: Instruction


@dataclass(frozen=True)
class Loop:
    reg: str
    body: Tuple["Statement", ...]


@dataclass(frozen=True)
class Guard:
    reg: str
    body: Tuple["Statement", ...]


Statement = Union[Basic, Loop, Guard]


# -- structuring --------------------------------------------------------------------

def _never_written(p: RegProgram) -> Set[str]:
    written = {r for ins in p.instructions for r in written_by(ins)}
    return {r for r in p.registers if r not in written and r not in p.inputs}


def structure(p: RegProgram) -> Optional[Tuple[Statement, ...]]:
    """Structured statements of p, or None when its jumps do not nest."""
    if p.uses_call:
        raise UnsupportedError(f"{p.name} uses call; normalization covers the literal and decrement instructions")
    targets = p.label_map
    constant = _never_written(p)
    code = p.instructions

    def region(start: int, end: int) -> Optional[List[Statement]]:
        out: List[Statement] = []
        i = start
        while i < end:
            ins = code[i]
            if not isinstance(ins, IfZeroGoto):
                out.append(Basic(ins))
                i += 1
                continue
            t = targets[ins.label]
            if t <= i or t > end:
                return None
            back = code[t - 1] if t - 1 > i else None
            if (isinstance(back, IfZeroGoto) and back.reg in constant and targets[back.label] == i):
                body = region(i + 1, t - 1)
                if body is None:
                    return None
                out.append(Loop(ins.reg, tuple(body)))
            else:
                body = region(i + 1, t)
                if body is None:
                    return None
                out.append(Guard(ins.reg, tuple(body)))
            i = t
        return out

    found = region(0, len(code))
    return tuple(found) if found is not None else None


def emit(statements: Sequence[Statement], inputs: Sequence[str], outputs: Sequence[str], name: str,
         jump: str = JUMP) -> RegProgram:
    """Back to instructions, with labels L1, L2, ... in order of appearance.

    Loops close with ``if <jump> = 0 goto <head>``; jump must be a register nothing writes.
    """
    code: List[Instruction] = []
    labels: List[Tuple[str, int]] = []
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"L{counter[0]}"

    def walk(block: Sequence[Statement]):
        for s in block:
            if isinstance(s, Basic):
                code.append(s.ins)
            elif isinstance(s, Loop):
                head, done = fresh(), fresh()
                labels.append((head, len(code)))
                code.append(IfZeroGoto(s.reg, done))
                walk(s.body)
                code.append(IfZeroGoto(jump, head))
                labels.append((done, len(code)))
            else:
                done = fresh()
                code.append(IfZeroGoto(s.reg, done))
                walk(s.body)
                labels.append((done, len(code)))

    walk(statements)
    return RegProgram(tuple(code), tuple(inputs), tuple(outputs), tuple(labels), name=name)


# -- dependence ---------------------------------------------------------------------

def reads_of(s: Statement) -> Set[str]:
    if isinstance(s, Basic):
        return set(read_by(s.ins))
    return {s.reg}.union(*(reads_of(b) for b in s.body))


def writes_of(s: Statement) -> Set[str]:
    if isinstance(s, Basic):
        return set(written_by(s.ins))
    return set().union(*(writes_of(b) for b in s.body))


def uses_of(s: Statement) -> Set[str]:
    return reads_of(s) | writes_of(s)


def conflicts(a: Statement, b: Statement) -> bool:
    wa, wb = writes_of(a), writes_of(b)
    return bool(wa & (reads_of(b) | wb) or wb & reads_of(a))


def dependence_graph(statements: Sequence[Statement]) -> nx.DiGraph:
    """Edge i -> j (i < j) when statement j must stay after statement i."""
    graph = nx.DiGraph()
    for i, s in enumerate(statements):
        graph.add_node(i, reads=reads_of(s), writes=writes_of(s))
    for i in range(len(statements)):
        for j in range(i + 1, len(statements)):
            if conflicts(statements[i], statements[j]):
                graph.add_edge(i, j)
    return graph


def statement_text(s: Statement) -> str:
    if isinstance(s, Basic):
        return format_instruction(s.ins)
    inner = "; ".join(statement_text(b) for b in s.body)
    word = "while" if isinstance(s, Loop) else "if"
    return f"{word} {s.reg} != 0 {{ {inner} }}"


# -- rewrites -----------------------------------------------------------------------

def _roll(block: Sequence[Statement]) -> Tuple[Statement, ...]:
    out = []
    for s in block:
        if isinstance(s, (Loop, Guard)):
            s = type(s)(s.reg, _roll(s.body))
        if isinstance(s, Guard) and s.body and isinstance(s.body[-1], Loop):
            loop = s.body[-1]
            if loop.reg == s.reg and tuple(s.body[:-1]) == loop.body:
                s = loop
        out.append(s)
    return tuple(out)


class _Relays:
    def __init__(self, taken: Iterable[str]):
        self.taken = set(taken)
        self.n = 0

    def fresh(self) -> str:
        while True:
            self.n += 1
            name = f"R{self.n}"
            if name not in self.taken:
                self.taken.add(name)
                return name


def _count_uses(block: Sequence[Statement], reg: str) -> int:
    total = 0
    for s in block:
        if isinstance(s, Basic):
            total += registers_of(s.ins).count(reg)
        else:
            total += (s.reg == reg) + _count_uses(s.body, reg)
    return total


def _relay_out(block: Sequence[Statement], k: int, everywhere: Sequence[Statement],
               roles: Set[str]) -> Optional[str]:
    """Register counting block[k]'s iterations for the loop right after it, if any."""
    if k + 1 >= len(block) or not isinstance(block[k + 1], Loop):
        return None
    r = block[k + 1].reg
    if r in roles or Basic(Inc(r)) not in block[k].body or Basic(Dec(r)) not in block[k + 1].body:
        return None
    # Inc in this loop, header and Dec in the next: nothing else may touch it.
    return r if _count_uses(everywhere, r) == 3 else None


def _fission(block: Sequence[Statement], everywhere: Sequence[Statement], roles: Set[str],
             relays: _Relays) -> Tuple[Statement, ...]:
    out: List[Statement] = []
    for k, s in enumerate(block):
        if isinstance(s, (Loop, Guard)):
            s = type(s)(s.reg, _fission(s.body, everywhere, roles, relays))
        if not isinstance(s, Loop) or s.body.count(Basic(Dec(s.reg))) != 1 or _count_uses(s.body, s.reg) != 1:
            out.append(s)
            continue
        relay = _relay_out(block, k, everywhere, roles)
        rest = [b for b in s.body if b != Basic(Dec(s.reg)) and (relay is None or b != Basic(Inc(relay)))]
        shared = nx.Graph()
        shared.add_nodes_from(range(len(rest)))
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                if uses_of(rest[i]) & uses_of(rest[j]):
                    shared.add_edge(i, j)
        groups = [sorted(c) for c in nx.connected_components(shared)]
        if len(groups) < 2:
            out.append(s)
            continue
        groups.sort(key=lambda g: "; ".join(statement_text(rest[i]) for i in g))
        counter = s.reg
        for n, group in enumerate(groups):
            last = n == len(groups) - 1
            nxt = relay if last else relays.fresh()
            body = [Basic(Dec(counter))] + [rest[i] for i in group]
            if nxt is not None:
                body.append(Basic(Inc(nxt)))
            out.append(Loop(counter, tuple(body)))
            counter = nxt
        logger.debug(f"Split a loop on {s.reg} into {len(groups)} loops")
    return tuple(out)


def _reorder(block: Sequence[Statement]) -> Tuple[Statement, ...]:
    block = [type(s)(s.reg, _reorder(s.body)) if isinstance(s, (Loop, Guard)) else s for s in block]
    texts = [statement_text(s) for s in block]
    order = nx.lexicographical_topological_sort(dependence_graph(block), key=lambda i: texts[i])
    return tuple(block[i] for i in order)


def alpha_rename(p: RegProgram) -> RegProgram:
    """X1.. for inputs, Y1.. for outputs, W0 for never-written registers, W1.. by first use."""
    mapping: Dict[str, str] = {x: f"X{i}" for i, x in enumerate(p.inputs, start=1)}
    mapping.update({y: f"Y{i}" for i, y in enumerate(p.outputs, start=1)})
    constant = _never_written(p) - set(p.outputs)
    work = 0
    for ins in p.instructions:
        for reg in registers_of(ins):
            if reg in mapping:
                continue
            if reg in constant:
                mapping[reg] = JUMP
            else:
                work += 1
                mapping[reg] = f"W{work}"
    return rename(p, mapping, name=p.name)


# -- normal forms -------------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    program: RegProgram
    text: str
    digest: str
    structured: bool = True
    rounds: int = field(default=0, compare=False)

    def to_dict(self) -> Dict[str, object]:
        return {'name': self.program.name, 'digest': self.digest, 'structured': self.structured,
                'rounds': self.rounds, 'text': self.text}


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _jump_register(p: RegProgram) -> str:
    """W0 unless p already uses W0 for something that can be nonzero."""
    if JUMP not in p.registers or JUMP in _never_written(p):
        return JUMP
    n = 0
    while f"J{n}" in p.registers:
        n += 1
    return f"J{n}"


def _round(p: RegProgram, rules: FrozenSet[str]) -> Tuple[RegProgram, bool]:
    statements = structure(p)
    if statements is None:
        return (alpha_rename(p) if "alpha" in rules else p), False
    if "roll" in rules:
        statements = _roll(statements)
    if "fission" in rules:
        roles = set(p.inputs) | set(p.outputs)
        statements = _fission(statements, statements, roles, _Relays(p.registers))
    if "reorder" in rules:
        statements = _reorder(statements)
    q = emit(statements, p.inputs, p.outputs, p.name, _jump_register(p))
    return (alpha_rename(q) if "alpha" in rules else q), True


def normalize(p: RegProgram, rules: FrozenSet[str] = ALL_RULES) -> NormalForm:
    """Rewrite to a fixpoint; if the rewrites cycle, the smallest text on the cycle wins."""
    unknown = set(rules) - ALL_RULES
    if unknown:
        raise UnsupportedError(f"unknown rewrite rules: {sorted(unknown)}")
    rules = frozenset(rules)
    seen: Dict[str, RegProgram] = {}
    history: List[str] = []
    structured = True
    current = p
    for rounds in range(1, _MAX_ROUNDS + 1):
        current, structured = _round(current, rules)
        text = serialize_rm(current)
        if text in seen:
            cycle = history[history.index(text):]
            best = min(cycle)
            logger.debug(f"{p.name}: normal form after {rounds} rounds (cycle of {len(cycle)})")
            return NormalForm(seen[best], best, _digest(best), structured, rounds)
        seen[text] = current
        history.append(text)
    logger.warning(f"{p.name}: no fixpoint after {_MAX_ROUNDS} rounds; using the last form")
    return NormalForm(current, history[-1], _digest(history[-1]), structured, _MAX_ROUNDS)


def same_algorithm(p1: RegProgram, p2: RegProgram, rules: FrozenSet[str] = ALL_RULES) -> bool:
    return normalize(p1, rules).digest == normalize(p2, rules).digest


def algorithm_to_function(nf: NormalForm) -> BlackBoxFunction:
    """The function of a normal form, on unary words like ``reg_semantics``."""
    return reg_semantics(nf.program)
