"""Machines as propositional formulas.

A machine run bounded to ``t_max`` steps and ``p_max`` cells per tape is written
as a CNF over tableau variables:

* ``C`` (t, tape, cell, glyph): the cell holds the glyph at time t
* ``P`` (t, tape, cell): the head of the tape is on the cell
* ``Q`` (t, state): the machine is in the state

plus auxiliary variables that keep the transition clauses small: ``H`` (the
glyph under a head), ``R`` (which rule fires), ``N`` (no rule applies, so the
run has halted and stutters) and ``A`` (accepted at time t). Cells are numbered
from 1. Cells the head is not on keep their glyph (frame clauses).
"""

import itertools
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from .core import Word
from .errors import AuditError, FormatError, ShapeError, UnsupportedError
from .turing import WILD, Configuration, TuringMachine, step

logger = logging.getLogger(__name__)

ZONES = ("input", "work", "output")
TABLEAU_KINDS = ("C", "P", "Q")
Clause = Tuple[int, ...]


@dataclass(frozen=True)
class TableauVar:
    kind: str
    t: int
    z: str = "-"
    i: int = 0
    j: int = 0
    k: int = 0
    q: int = 0
    part: str = ""

    def label(self) -> str:
        last = self.q if self.kind == "Q" else self.k
        text = f"{self.kind},{self.z},{self.t},{self.i},{self.j},{last}"
        return f"{text}@{self.part}" if self.part else text

    @classmethod
    def from_label(cls, label: str) -> "TableauVar":
        body, _, part = label.partition("@")
        fields = body.split(",")
        if len(fields) != 6:
            raise FormatError(f"variable label needs six fields, got {label!r}")
        kind, z = fields[0], fields[1]
        try:
            t, i, j, last = (int(x) for x in fields[2:])
        except ValueError:
            raise FormatError(f"non-numeric index in {label!r}")
        if kind == "Q":
            return cls(kind, t, z, i, j, 0, last, part)
        return cls(kind, t, z, i, j, last, 0, part)


@dataclass(frozen=True)
class Interface:
    """What composition needs to know: which variables carry the inputs and outputs."""

    m_in: int
    n_out: int
    in_part: str
    out_part: str
    out_time: int
    glyphs: Tuple[str, ...]
    p_max: int


@dataclass(frozen=True)
class CnfFormula:
    var_count: int
    clauses: Tuple[Clause, ...]
    variables: Mapping[int, TableauVar] = field(default_factory=dict)
    t_max: int = 0
    p_max: int = 0
    interface: Optional[Interface] = field(default=None, compare=False)
    machine: Optional[TuringMachine] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'clauses', tuple(tuple(c) for c in self.clauses))
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.var_count:
                    raise ShapeError(f"literal {lit} outside 1..{self.var_count}")

    @cached_property
    def index(self) -> Dict[TableauVar, int]:
        return {v: n for n, v in self.variables.items()}

    def conjoin(self, clauses: Iterable[Sequence[int]]) -> "CnfFormula":
        return replace(self, clauses=self.clauses + tuple(tuple(c) for c in clauses))


def _zone(m: TuringMachine, tape: int) -> Tuple[str, int]:
    if tape < m.m_in:
        return "input", tape
    if tape < m.m_in + m.work_tapes:
        return "work", tape - m.m_in
    return "output", tape - m.m_in - m.work_tapes


def _exactly_one(lits: Sequence[int]) -> List[Clause]:
    return [tuple(lits)] + _at_most_one(lits)


def _at_most_one(lits: Sequence[int]) -> List[Clause]:
    return [(-a, -b) for a, b in itertools.combinations(lits, 2)]


def tableau_var_count(m: TuringMachine, t_max: int, p_max: int) -> int:
    """Closed form for the number of variables ``tableau`` allocates."""
    k, s = m.tape_count, len(m.alphabet.tape_glyphs)
    return (t_max + 1) * (len(m.states) + k * p_max + k * p_max * s + k * s + 2) + t_max * m.rule_count


class _Tableau:
    def __init__(self, m: TuringMachine, t_max: int, p_max: int):
        self.m = m
        self.t_max = t_max
        self.p_max = p_max
        self.glyphs = m.alphabet.tape_glyphs
        self.tapes = range(m.tape_count)
        self.cells = range(1, p_max + 1)
        self.ids: Dict[Tuple, int] = {}
        self.variables: Dict[int, TableauVar] = {}
        self.clauses: List[Clause] = []
        self._allocate()

    def _new(self, key: Tuple, var: TableauVar):
        n = len(self.ids) + 1
        self.ids[key] = n
        self.variables[n] = var

    def _allocate(self):
        m = self.m
        for t in range(self.t_max + 1):
            for q, _ in enumerate(m.states):
                self._new(("Q", t, q), TableauVar("Q", t, q=q))
            for g in self.tapes:
                z, i = _zone(m, g)
                for j in self.cells:
                    self._new(("P", t, g, j), TableauVar("P", t, z, i, j))
            for g in self.tapes:
                z, i = _zone(m, g)
                for j in self.cells:
                    for s, _ in enumerate(self.glyphs):
                        self._new(("C", t, g, j, s), TableauVar("C", t, z, i, j, s))
            for g in self.tapes:
                z, i = _zone(m, g)
                for s, _ in enumerate(self.glyphs):
                    self._new(("H", t, g, s), TableauVar("H", t, z, i, k=s))
            self._new(("N", t), TableauVar("N", t))
            self._new(("A", t), TableauVar("A", t))
            if t < self.t_max:
                for r, _ in enumerate(m.rules):
                    self._new(("R", t, r), TableauVar("R", t, k=r))

    def Q(self, t, state: str) -> int:
        return self.ids[("Q", t, self.m.states.index(state))]

    def P(self, t, g, j) -> int:
        return self.ids[("P", t, g, j)]

    def C(self, t, g, j, glyph: str) -> int:
        return self.ids[("C", t, g, j, self.glyphs.index(glyph))]

    def H(self, t, g, glyph: str) -> int:
        return self.ids[("H", t, g, self.glyphs.index(glyph))]

    def build(self):
        m, add = self.m, self.clauses.extend
        for t in range(self.t_max + 1):
            add(_exactly_one([self.Q(t, q) for q in m.states]))
            for g in self.tapes:
                add(_exactly_one([self.P(t, g, j) for j in self.cells]))
                for j in self.cells:
                    add(_exactly_one([self.C(t, g, j, s) for s in self.glyphs]))
                    add((-self.P(t, g, j), -self.C(t, g, j, s), self.H(t, g, s)) for s in self.glyphs)
                add(_at_most_one([self.H(t, g, s) for s in self.glyphs]))
            n = self.ids[("N", t)]
            for rule in m.rules:
                add([(-n, -self.Q(t, rule.state),
                      *(-self.H(t, g, r) for g, r in enumerate(rule.reads) if r != WILD))])
            if t < self.t_max:
                self._transitions(t)
        add([(self.Q(0, m.start),)])
        for g in self.tapes:
            add([(self.P(0, g, 1),)])
            if g >= m.m_in:
                add((self.C(0, g, j, m.alphabet.blank),) for j in self.cells)

    def _transitions(self, t: int):
        m, add = self.m, self.clauses.extend
        n = self.ids[("N", t)]
        fired = [self.ids[("R", t, r)] for r in range(m.rule_count)]
        add([(n, *fired)])
        for rule_index, rule in enumerate(m.rules):
            r = fired[rule_index]
            action = rule.action
            add([(-r, self.Q(t, rule.state)), (-r, self.Q(t + 1, action.state))])
            add((-r, self.H(t, g, glyph)) for g, glyph in enumerate(rule.reads) if glyph != WILD)
            for g in self.tapes:
                write, move = action.writes[g], action.moves[g]
                for j in self.cells:
                    here = self.P(t, g, j)
                    if write != WILD:
                        add([(-r, -here, self.C(t + 1, g, j, write))])
                    else:
                        add((-r, -here, -self.C(t, g, j, s), self.C(t + 1, g, j, s)) for s in self.glyphs)
                    if move == "R" and j == self.p_max:
                        add([(-r, -here)])
                        continue
                    target = {"R": j + 1, "L": max(1, j - 1), "S": j}[move]
                    add([(-r, -here, self.P(t + 1, g, target))])
        same_state: Dict[str, List[int]] = {}
        for rule_index, rule in enumerate(m.rules):
            same_state.setdefault(rule.state, []).append(fired[rule_index])
        for group in same_state.values():
            add(_at_most_one(group))
        # halted runs stutter
        add((-n, -self.Q(t, q), self.Q(t + 1, q)) for q in m.states)
        for g in self.tapes:
            for j in self.cells:
                add([(-n, -self.P(t, g, j), self.P(t + 1, g, j))])
                for s in self.glyphs:
                    add([(-n, -self.P(t, g, j), -self.C(t, g, j, s), self.C(t + 1, g, j, s)),
                         (self.P(t, g, j), -self.C(t, g, j, s), self.C(t + 1, g, j, s))])

    def acceptance(self):
        accepting = [q for q in self.m.states if self.m.is_accepting(q)]
        flags = []
        for t in range(self.t_max + 1):
            a = self.ids[("A", t)]
            flags.append(a)
            self.clauses.append((-a, self.ids[("N", t)]))
            self.clauses.append((-a, *(self.Q(t, q) for q in accepting)))
        self.clauses.append(tuple(flags))

    def formula(self) -> CnfFormula:
        interface = Interface(self.m.m_in, self.m.n_out, "", "", self.t_max, self.glyphs, self.p_max)
        return CnfFormula(len(self.ids), tuple(self.clauses), dict(self.variables), self.t_max, self.p_max,
                          interface, self.m)


def _check_bounds(m: TuringMachine, t_max: int, p_max: int):
    if m.oracle_port is not None:
        raise UnsupportedError(f"{m.name}: only plain rule-table machines have a tableau")
    if t_max < 0 or p_max < 1:
        raise ShapeError(f"bounds must satisfy t_max >= 0 and p_max >= 1, got {t_max}, {p_max}")


def tableau(m: TuringMachine, t_max: int, p_max: int) -> CnfFormula:
    """Every run of m truncated to t_max steps within p_max cells per tape; inputs left free."""
    _check_bounds(m, t_max, p_max)
    builder = _Tableau(m, t_max, p_max)
    builder.build()
    f = builder.formula()
    logger.debug(f"Tableau of {m.name} (t={t_max}, p={p_max}): {f.var_count} vars, {len(f.clauses)} clauses")
    return f


def accept_formula(m: TuringMachine, t_max: int, p_max: int) -> CnfFormula:
    """The tableau plus: some run halts in an accepting state by t_max."""
    _check_bounds(m, t_max, p_max)
    builder = _Tableau(m, t_max, p_max)
    builder.build()
    builder.acceptance()
    return builder.formula()


def with_input(f: CnfFormula, m: TuringMachine, x: Sequence[Word]) -> CnfFormula:
    """Fix the time-0 input tapes to x, blanks beyond."""
    iface = f.interface
    if iface is None:
        raise ShapeError("formula has no input interface")
    if len(x) != iface.m_in:
        raise ShapeError(f"expected {iface.m_in} input words, got {len(x)}")
    units = []
    for i, word in enumerate(x):
        m.alphabet.check_word(word)
        if len(word) > iface.p_max:
            raise ShapeError(f"input {word!r} does not fit in {iface.p_max} cells")
        for j in range(1, iface.p_max + 1):
            glyph = word[j - 1] if j <= len(word) else m.alphabet.blank
            var = TableauVar("C", 0, "input", i, j, iface.glyphs.index(glyph), 0, iface.in_part)
            units.append((f.index[var],))
    return f.conjoin(units)


def halt_formula(m: TuringMachine, x: Sequence[Word], t: int, p_max: Optional[int] = None) -> CnfFormula:
    """Satisfiable exactly when some run of m on x halts accepting within t steps."""
    if p_max is None:
        p_max = max([t + 1] + [len(w) for w in x])
    return with_input(accept_formula(m, t, p_max), m, x)


def cook_levin_encode(m: TuringMachine, x: Word, t: int, p_max: Optional[int] = None) -> CnfFormula:
    """The acceptance formula of a decision machine on one input word."""
    if not m.accept:
        raise ShapeError(f"{m.name} does not mark accepting states")
    return halt_formula(m, (x,), t, p_max)


def clause_bound(m: TuringMachine, t_max: int, p_max: int) -> int:
    """Upper bound on the clauses ``halt_formula`` emits, as a closed-form polynomial."""
    k, s = m.tape_count, len(m.alphabet.tape_glyphs)
    q, r, p = len(m.states), m.rule_count, p_max
    per_time = (1 + q * q + k * (1 + p * p) + k * p * (1 + s * s) + k * p * s + k * s * s + r
                + 1 + r * (2 + k) + r * r + r * k * p * (s + 1) + q + k * p * (1 + 2 * s) + 2)
    initial = 1 + k + k * p + m.m_in * p
    return (t_max + 1) * per_time + initial + 1


# -- composition --------------------------------------------------------------------

def _shifted(clause: Clause, offset: int) -> Clause:
    return tuple(lit + offset if lit > 0 else lit - offset for lit in clause)


def compose_logic(f1: CnfFormula, f2: CnfFormula) -> CnfFormula:
    """Conjunction of both formulas with f1's final outputs equated to f2's initial inputs."""
    a, b = f1.interface, f2.interface
    if a is None or b is None:
        raise ShapeError("both formulas need an interface to compose")
    if a.n_out != b.m_in:
        raise ShapeError(f"cannot feed {a.n_out} outputs into {b.m_in} inputs")
    if a.glyphs != b.glyphs or a.p_max != b.p_max:
        raise ShapeError("composed formulas must share glyphs and cell bounds")
    offset = f1.var_count
    variables = {n: replace(v, part="1" + v.part) for n, v in f1.variables.items()}
    variables.update({n + offset: replace(v, part="2" + v.part) for n, v in f2.variables.items()})
    clauses = list(f1.clauses) + [_shifted(c, offset) for c in f2.clauses]
    for i in range(a.n_out):
        for j in range(1, a.p_max + 1):
            for s, _ in enumerate(a.glyphs):
                out = f1.index[TableauVar("C", a.out_time, "output", i, j, s, 0, a.out_part)]
                into = f2.index[TableauVar("C", 0, "input", i, j, s, 0, b.in_part)] + offset
                clauses += [(-out, into), (-into, out)]
    interface = Interface(a.m_in, b.n_out, "1" + a.in_part, "2" + b.out_part, b.out_time, a.glyphs, a.p_max)
    return CnfFormula(f1.var_count + f2.var_count, tuple(clauses), variables,
                      max(f1.t_max, f2.t_max), a.p_max, interface)


def tautology(m_in: int, n_out: int, glyphs: Sequence[str], p_max: int) -> CnfFormula:
    """Interface variables only and no clauses: every assignment satisfies it."""
    variables: Dict[int, TableauVar] = {}
    for z, count in (("input", m_in), ("output", n_out)):
        for i in range(count):
            for j in range(1, p_max + 1):
                for s, _ in enumerate(glyphs):
                    variables[len(variables) + 1] = TableauVar("C", 0, z, i, j, s)
    interface = Interface(m_in, n_out, "", "", 0, tuple(glyphs), p_max)
    return CnfFormula(len(variables), (), variables, 0, p_max, interface)


# -- DIMACS -------------------------------------------------------------------------

def emit_dimacs(f: CnfFormula) -> str:
    lines = [f"c t_max {f.t_max}", f"c p_max {f.p_max}", f"p cnf {f.var_count} {len(f.clauses)}"]
    lines += [" ".join(map(str, clause)) + " 0" for clause in f.clauses]
    return "\n".join(lines) + "\n"


def emit_sidecar(f: CnfFormula) -> str:
    return "".join(f"var {n} = {v.label()}\n" for n, v in sorted(f.variables.items()))


def parse_sidecar(text: str) -> Dict[int, TableauVar]:
    variables = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "var" or parts[2] != "=":
            raise FormatError(f"expected 'var <n> = <label>', got {line!r}", number)
        try:
            variables[int(parts[1])] = TableauVar.from_label(parts[3])
        except ValueError:
            raise FormatError(f"bad variable number {parts[1]!r}", number)
        except FormatError as e:
            raise FormatError(e.message, number)
    return variables


def parse_dimacs(text: str, sidecar: Optional[str] = None) -> CnfFormula:
    """Read ``p cnf`` text; clauses may span lines and end at each 0."""
    header = None
    bounds = {"t_max": 0, "p_max": 0}
    clauses: List[Clause] = []
    pending: List[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 3 and parts[1] in bounds and parts[2].isdigit():
                bounds[parts[1]] = int(parts[2])
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[:2] != ["p", "cnf"]:
                raise FormatError(f"expected 'p cnf <vars> <clauses>', got {line!r}", number)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError("non-numeric problem line", number)
            continue
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise FormatError(f"bad literal {token!r}", number)
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if header is None:
        raise FormatError("missing problem line")
    if pending:
        raise FormatError("last clause is not terminated by 0")
    var_count, clause_count = header
    if len(clauses) != clause_count:
        raise FormatError(f"header promises {clause_count} clauses, found {len(clauses)}")
    if any(abs(lit) > var_count for clause in clauses for lit in clause):
        raise FormatError(f"literal outside 1..{var_count}")
    variables = parse_sidecar(sidecar) if sidecar else {}
    return CnfFormula(var_count, tuple(clauses), variables, bounds["t_max"], bounds["p_max"])


# -- solving ------------------------------------------------------------------------

class SolveResult(BaseModel):
    satisfiable: bool
    model: List[int] = []
    decisions: int = 0
    propagations: int = 0

    @property
    def assignment(self) -> Dict[int, bool]:
        return {abs(lit): lit > 0 for lit in self.model}


class DpllSolver:
    """Backtracking search with unit propagation over two watched literals.

    Branching is fixed: the lowest unassigned variable, tried true first, with
    chronological backtracking. No clause learning.
    """

    def __init__(self, var_count: int, clauses: Iterable[Sequence[int]]):
        self.var_count = var_count
        self.values: List[Optional[bool]] = [None] * (var_count + 1)
        self.trail: List[int] = []
        self.head = 0
        self.clauses: List[List[int]] = []
        self.units: List[int] = []
        self.watches: Dict[int, List[int]] = {lit: [] for v in range(1, var_count + 1) for lit in (v, -v)}
        self.empty = False
        self.decisions = 0
        self.propagations = 0
        for clause in clauses:
            lits = list(dict.fromkeys(clause))
            if any(-lit in lits for lit in lits):
                continue
            if not lits:
                self.empty = True
            elif len(lits) == 1:
                self.units.append(lits[0])
            else:
                self.watches[lits[0]].append(len(self.clauses))
                self.watches[lits[1]].append(len(self.clauses))
                self.clauses.append(lits)

    def _value(self, lit: int) -> Optional[bool]:
        v = self.values[abs(lit)]
        return v if v is None or lit > 0 else not v

    def _enqueue(self, lit: int) -> bool:
        seen = self._value(lit)
        if seen is not None:
            return seen
        self.values[abs(lit)] = lit > 0
        self.trail.append(lit)
        return True

    def _propagate(self) -> bool:
        while self.head < len(self.trail):
            false_lit = -self.trail[self.head]
            self.head += 1
            watching = self.watches[false_lit]
            kept: List[int] = []
            for position, index in enumerate(watching):
                clause = self.clauses[index]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                if self._value(clause[0]) is True:
                    kept.append(index)
                    continue
                for other in range(2, len(clause)):
                    if self._value(clause[other]) is not False:
                        clause[1], clause[other] = clause[other], clause[1]
                        self.watches[clause[1]].append(index)
                        break
                else:
                    kept.append(index)
                    if self._value(clause[0]) is False:
                        kept.extend(watching[position + 1:])
                        self.watches[false_lit] = kept
                        return False
                    self._enqueue(clause[0])
                    self.propagations += 1
            self.watches[false_lit] = kept
        return True

    def _undo(self, size: int):
        while len(self.trail) > size:
            self.values[abs(self.trail.pop())] = None
        self.head = size

    def solve(self) -> SolveResult:
        if self.empty or not all(self._enqueue(lit) for lit in self.units):
            return SolveResult(satisfiable=False)
        levels: List[Tuple[int, int, bool]] = []  # (trail size, decision literal, flipped)
        cursor = 1
        while True:
            if not self._propagate():
                while levels and levels[-1][2]:
                    levels.pop()
                if not levels:
                    return SolveResult(satisfiable=False, decisions=self.decisions,
                                       propagations=self.propagations)
                size, lit, _ = levels.pop()
                self._undo(size)
                levels.append((size, -lit, True))
                self._enqueue(-lit)
                cursor = min(cursor, abs(lit))
                continue
            while cursor <= self.var_count and self.values[cursor] is not None:
                cursor += 1
            if cursor > self.var_count:
                model = [v if self.values[v] else -v for v in range(1, self.var_count + 1)]
                return SolveResult(satisfiable=True, model=model, decisions=self.decisions,
                                   propagations=self.propagations)
            self.decisions += 1
            levels.append((len(self.trail), cursor, False))
            self._enqueue(cursor)


def solve_clauses(var_count: int, clauses: Iterable[Sequence[int]]) -> SolveResult:
    return DpllSolver(var_count, clauses).solve()


def solve(f: CnfFormula) -> SolveResult:
    result = solve_clauses(f.var_count, f.clauses)
    logger.debug(f"Solved {f.var_count} vars / {len(f.clauses)} clauses: "
                 f"{'SAT' if result.satisfiable else 'UNSAT'} after {result.decisions} decisions")
    return result


def truth_table_solve(var_count: int, clauses: Sequence[Sequence[int]]) -> bool:
    """Satisfiability by filling out the whole truth table."""
    for bits in itertools.product((False, True), repeat=var_count):
        if all(any(bits[abs(lit) - 1] == (lit > 0) for lit in clause) for clause in clauses):
            return True
    return False


# -- audits and traces --------------------------------------------------------------

Assignment = Union[SolveResult, Mapping[int, bool]]


def _as_mapping(assignment: Assignment) -> Mapping[int, bool]:
    return assignment.assignment if isinstance(assignment, SolveResult) else assignment


def _check_unique(f: CnfFormula, values: Mapping[int, bool]):
    groups: Dict[Tuple, List[TableauVar]] = {}
    for n, v in f.variables.items():
        if v.kind not in TABLEAU_KINDS:
            continue
        key = {"Q": (v.part, v.t, "Q"), "P": (v.part, v.t, "P", v.z, v.i),
               "C": (v.part, v.t, "C", v.z, v.i, v.j)}[v.kind]
        group = groups.setdefault(key, [])
        if values.get(n, False):
            group.append(v)
    for key, true_vars in groups.items():
        if len(true_vars) != 1:
            raise AuditError(f"{len(true_vars)} true variables in group {key}",
                             {'group': list(map(str, key)), 'true': [v.label() for v in true_vars]})


def audit_assignment(f: CnfFormula, assignment: Assignment) -> bool:
    """Raise AuditError unless the assignment satisfies every clause and every uniqueness group."""
    values = _as_mapping(assignment)
    for clause in f.clauses:
        if not any(values.get(abs(lit), False) == (lit > 0) for lit in clause):
            raise AuditError(f"clause {list(clause)} is falsified", {'clause': list(clause)})
    _check_unique(f, values)
    return True


def decode_trace(f: CnfFormula, assignment: Assignment, m: TuringMachine, part: str = "") -> List[Configuration]:
    """Read the run back out of a satisfying assignment, up to the first halting configuration."""
    values = _as_mapping(assignment)
    _check_unique(f, values)
    glyphs, blank = m.alphabet.tape_glyphs, m.alphabet.blank
    truth = {v: values.get(n, False) for n, v in f.variables.items() if v.part == part}

    def true_one(candidates: List[TableauVar]) -> TableauVar:
        hits = [v for v in candidates if truth.get(v)]
        if len(hits) != 1:
            raise AuditError(f"expected one true variable, found {len(hits)}")
        return hits[0]

    configs = []
    for t in range(f.t_max + 1):
        state = m.states[true_one([TableauVar("Q", t, q=q, part=part) for q in range(len(m.states))]).q]
        tapes, heads = [], []
        for g in range(m.tape_count):
            z, i = _zone(m, g)
            cells = range(1, f.p_max + 1)
            heads.append(true_one([TableauVar("P", t, z, i, j, part=part) for j in cells]).j - 1)
            tape = []
            for j in cells:
                s = true_one([TableauVar("C", t, z, i, j, s, part=part) for s in range(len(glyphs))]).k
                if glyphs[s] != blank:
                    tape.append((j - 1, glyphs[s]))
            tapes.append(tuple(tape))
        configs.append(Configuration(state, tuple(tapes), tuple(heads), t))

    run = [configs[0]]
    for before, after in zip(configs, configs[1:]):
        successors = step(m, before)
        if not successors:
            if after.key() != before.key():
                raise AuditError(f"halted configuration changed at time {after.steps}")
            break
        if after.key() not in {s.key() for s in successors}:
            raise AuditError(f"illegal transition at time {after.steps}",
                             {'state': before.state, 'next': after.state})
        run.append(after)
    return run
