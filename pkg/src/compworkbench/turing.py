"""Multi-tape Turing machines: deterministic, nondeterministic and oracle.

Tape layout is always ``inputs + work + outputs``. Tapes are one-way infinite,
heads start at cell 0 and a left move at cell 0 stays put. A machine halts when
no rule applies; accept/reject markers classify the halt.

Rules may use ``*`` as a read (any glyph) or a write (keep the glyph), which keeps
lifted rules in composite machines small.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .core import (Alphabet, BlackBoxFunction, FuelExhausted, Halted, Rejected, RunOutcome, Word,
                   resolve_fuel)
from .errors import AlphabetError, FormatError, OracleError, ShapeError, UnsupportedError

logger = logging.getLogger(__name__)

WILD = "*"
MOVES = ("L", "R", "S")


@dataclass(frozen=True)
class Action:
    state: str
    writes: Tuple[str, ...]
    moves: Tuple[str, ...]


@dataclass(frozen=True)
class Rule:
    state: str
    reads: Tuple[str, ...]
    action: Action

    def matches(self, state: str, symbols: Sequence[str]) -> bool:
        return state == self.state and all(r == WILD or r == s for r, s in zip(self.reads, symbols))

    def overlaps(self, other: "Rule") -> bool:
        return self.state == other.state and all(
            a == WILD or b == WILD or a == b for a, b in zip(self.reads, other.reads))

    def text(self) -> str:
        a = self.action
        return " ".join([self.state, *self.reads, "->", a.state, *a.writes, *a.moves])


@dataclass(frozen=True)
class OraclePort:
    """Entering ``query_state`` replaces tape ``tape`` with the oracle's answer in one step."""

    tape: int
    query_state: str
    answer_state: str


@dataclass(frozen=True)
class TuringMachine:
    alphabet: Alphabet
    m_in: int
    n_out: int
    start: str
    rules: Tuple[Rule, ...] = ()
    work_tapes: int = 1
    states: Tuple[str, ...] = ()
    accept: FrozenSet[str] = frozenset()
    reject: FrozenSet[str] = frozenset()
    oracle_port: Optional[OraclePort] = None
    name: str = field(default="tm", compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'rules', tuple(self.rules))
        object.__setattr__(self, 'accept', frozenset(self.accept))
        object.__setattr__(self, 'reject', frozenset(self.reject))
        if min(self.m_in, self.n_out, self.work_tapes) < 0:
            raise ShapeError("tape counts must be non-negative")
        if WILD in self.alphabet.tape_glyphs:
            raise AlphabetError(f"{WILD!r} is reserved for wildcard rules")
        k = self.tape_count
        glyphs = set(self.alphabet.tape_glyphs) | {WILD}
        for rule in self.rules:
            a = rule.action
            if not (len(rule.reads) == len(a.writes) == len(a.moves) == k):
                raise ShapeError(f"rule '{rule.text()}' does not cover exactly {k} tapes")
            if not set(rule.reads) <= glyphs or not set(a.writes) <= glyphs:
                raise AlphabetError(f"rule '{rule.text()}' uses glyphs outside {self.alphabet.declaration()!r}")
            if not set(a.moves) <= set(MOVES):
                raise ShapeError(f"rule '{rule.text()}' has a move outside L/R/S")

        ordered: List[str] = []
        extra = [self.start, *self.states]
        for rule in self.rules:
            extra += [rule.state, rule.action.state]
        extra += sorted(self.accept) + sorted(self.reject)
        if self.oracle_port:
            extra += [self.oracle_port.query_state, self.oracle_port.answer_state]
        seen = set()
        for state in extra:
            if state not in seen:
                seen.add(state)
                ordered.append(state)
        object.__setattr__(self, 'states', tuple(ordered))

        by_state: Dict[str, List[Rule]] = {}
        for rule in self.rules:
            by_state.setdefault(rule.state, []).append(rule)
        object.__setattr__(self, '_by_state', by_state)

        if self.accept & self.reject:
            raise ShapeError(f"states both accepting and rejecting: {sorted(self.accept & self.reject)}")
        for state in self.accept | self.reject:
            if state in by_state:
                raise ShapeError(f"halting marker state {state!r} must not have rules")
        if self.oracle_port:
            if not 0 <= self.oracle_port.tape < k:
                raise ShapeError(f"oracle tape {self.oracle_port.tape} out of range")
            if self.oracle_port.query_state in by_state:
                raise ShapeError("the oracle query state must not have rules")

    # -- structure -------------------------------------------------------------

    @property
    def tape_count(self) -> int:
        return self.m_in + self.work_tapes + self.n_out

    @property
    def input_tapes(self) -> range:
        return range(0, self.m_in)

    @property
    def work_tape_indices(self) -> range:
        return range(self.m_in, self.m_in + self.work_tapes)

    @property
    def output_tapes(self) -> range:
        return range(self.m_in + self.work_tapes, self.tape_count)

    @property
    def rule_count(self) -> int:
        """Sz(T): the number of transition rules."""
        return len(self.rules)

    @property
    def deterministic(self) -> bool:
        for rules in self._by_state.values():
            for a, b in itertools.combinations(rules, 2):
                if a.action != b.action and a.overlaps(b):
                    return False
        return True

    def rules_for(self, state: str) -> List[Rule]:
        return self._by_state.get(state, [])

    def actions_for(self, state: str, symbols: Sequence[str]) -> List[Action]:
        """Distinct actions of every matching rule, in declaration order."""
        actions: List[Action] = []
        for rule in self._by_state.get(state, ()):
            if rule.matches(state, symbols) and rule.action not in actions:
                actions.append(rule.action)
        return actions

    def is_accepting(self, state: str) -> bool:
        if self.accept:
            return state in self.accept
        return state not in self.reject

    def is_final(self, state: str) -> bool:
        return state in self.accept or state in self.reject

    def read_patterns(self, state: str) -> List[Tuple[str, ...]]:
        """Concrete glyphs on the tapes the state inspects, ``*`` on the others."""
        rules = self.rules_for(state)
        relevant = [i for i in range(self.tape_count) if any(r.reads[i] != WILD for r in rules)]
        patterns = []
        for combo in itertools.product(self.alphabet.tape_glyphs, repeat=len(relevant)):
            symbols = [WILD] * self.tape_count
            for i, glyph in zip(relevant, combo):
                symbols[i] = glyph
            patterns.append(tuple(symbols))
        return patterns

    def gaps(self, state: str) -> List[Tuple[str, ...]]:
        """Read patterns for which no rule applies."""
        return [p for p in self.read_patterns(state) if not self.actions_for(state, p)]

    @property
    def branching(self) -> int:
        """The largest number of distinct actions any configuration offers."""
        return max((len(self.actions_for(q, p)) for q in self.states for p in self.read_patterns(q)), default=0)


# -- configurations -----------------------------------------------------------------

Tape = Tuple[Tuple[int, str], ...]


@dataclass(frozen=True)
class Configuration:
    state: str
    tapes: Tuple[Tape, ...]
    heads: Tuple[int, ...]
    steps: int = 0

    def read(self, tape: int, blank: str) -> str:
        return dict(self.tapes[tape]).get(self.heads[tape], blank)

    def symbols(self, blank: str) -> Tuple[str, ...]:
        return tuple(self.read(i, blank) for i in range(len(self.tapes)))

    def key(self) -> Tuple:
        return (self.state, self.tapes, self.heads)

    def contents(self, tape: int) -> Word:
        """The non-blank prefix of a tape starting at cell 0."""
        cells = dict(self.tapes[tape])
        out = []
        i = 0
        while i in cells:
            out.append(cells[i])
            i += 1
        return "".join(out)


def _tape_from_word(word: Word) -> Tape:
    return tuple(enumerate(word))


def initial_configuration(m: TuringMachine, inputs: Sequence[Word]) -> Configuration:
    if len(inputs) != m.m_in:
        raise ShapeError(f"{m.name} takes {m.m_in} inputs, got {len(inputs)}")
    for word in inputs:
        m.alphabet.check_word(word)
    tapes = [_tape_from_word(w) for w in inputs] + [() for _ in range(m.work_tapes + m.n_out)]
    return Configuration(m.start, tuple(tapes), tuple(0 for _ in tapes))


def apply_action(m: TuringMachine, c: Configuration, action: Action) -> Configuration:
    tapes = list(c.tapes)
    heads = list(c.heads)
    for i, (glyph, move) in enumerate(zip(action.writes, action.moves)):
        if glyph != WILD:
            cells = dict(tapes[i])
            if glyph == m.alphabet.blank:
                cells.pop(heads[i], None)
            else:
                cells[heads[i]] = glyph
            tapes[i] = tuple(sorted(cells.items()))
        if move == "R":
            heads[i] += 1
        elif move == "L" and heads[i] > 0:
            heads[i] -= 1
    return Configuration(action.state, tuple(tapes), tuple(heads), c.steps + 1)


def _oracle_step(m: TuringMachine, c: Configuration, oracle: Optional[BlackBoxFunction],
                 fuel: Optional[int]) -> Optional[Configuration]:
    """Answer a query; None means the oracle itself ran out of fuel."""
    if oracle is None:
        raise OracleError(f"{m.name} entered query state {c.state!r} but no oracle was supplied")
    port = m.oracle_port
    outcome = oracle((c.contents(port.tape),), fuel)
    if isinstance(outcome, FuelExhausted):
        return None
    answer = outcome.outputs[0] if isinstance(outcome, Halted) and outcome.outputs else ""
    tapes = list(c.tapes)
    tapes[port.tape] = _tape_from_word(str(answer))
    heads = list(c.heads)
    heads[port.tape] = 0
    return Configuration(port.answer_state, tuple(tapes), tuple(heads), c.steps + 1)


def step(m: TuringMachine, c: Configuration, oracle: Optional[BlackBoxFunction] = None,
         oracle_fuel: Optional[int] = None) -> List[Configuration]:
    """All successors of c, in rule declaration order; empty means m halts in c."""
    if m.oracle_port and c.state == m.oracle_port.query_state:
        answered = _oracle_step(m, c, oracle, oracle_fuel)
        return [answered] if answered is not None else []
    return [apply_action(m, c, a) for a in m.actions_for(c.state, c.symbols(m.alphabet.blank))]


def output_words(m: TuringMachine, c: Configuration) -> Tuple[Word, ...]:
    return tuple(c.contents(i) for i in m.output_tapes)


# -- running ------------------------------------------------------------------------

class _SpaceMeter:
    """Distinct work-tape cells under a head when a transition fires, summed over work tapes."""

    def __init__(self, m: TuringMachine):
        self.seen = set()
        self.tapes = list(m.work_tape_indices)

    def touch(self, c: Configuration):
        for i in self.tapes:
            self.seen.add((i, c.heads[i]))

    @property
    def cells(self) -> int:
        return len(self.seen)


def run(m: TuringMachine, inputs: Sequence[Word], fuel: Optional[int] = None,
        oracle: Optional[BlackBoxFunction] = None) -> RunOutcome:
    """Run m on inputs.

    Deterministic machines iterate ``step``; nondeterministic machines are
    explored breadth first and halt on the first accepting leaf. Every
    transition (or, breadth first, every expansion) costs one unit of fuel.
    """
    fuel = resolve_fuel(fuel)
    inputs = tuple(inputs)
    if m.oracle_port is not None and oracle is None:
        raise OracleError(f"{m.name} declares an oracle port but no oracle was supplied")
    if m.oracle_port is None and oracle is not None:
        raise OracleError(f"{m.name} has no oracle port")
    c = initial_configuration(m, inputs)
    if not m.deterministic:
        return _run_breadth_first(m, c, fuel, oracle)
    return _run_deterministic(m, c, fuel, oracle)


def _halt(m: TuringMachine, c: Configuration, steps: int, meter: _SpaceMeter) -> RunOutcome:
    if m.is_accepting(c.state):
        return Halted(output_words(m, c), steps, meter.cells)
    return Rejected(steps, meter.cells)


def _run_deterministic(m, c, fuel, oracle) -> RunOutcome:
    meter = _SpaceMeter(m)
    while True:
        querying = m.oracle_port is not None and c.state == m.oracle_port.query_state
        if not querying and not m.actions_for(c.state, c.symbols(m.alphabet.blank)):
            return _halt(m, c, c.steps, meter)
        if c.steps >= fuel:
            return FuelExhausted(c.steps, meter.cells)
        successors = step(m, c, oracle, fuel - c.steps - 1)
        if not successors:
            return FuelExhausted(fuel, meter.cells)
        meter.touch(c)
        c = successors[0]


def _run_breadth_first(m, c, fuel, oracle) -> RunOutcome:
    meter = _SpaceMeter(m)
    frontier = deque([c])
    expansions = 0
    while frontier:
        c = frontier.popleft()
        querying = m.oracle_port is not None and c.state == m.oracle_port.query_state
        if not querying and not m.actions_for(c.state, c.symbols(m.alphabet.blank)):
            if m.is_accepting(c.state):
                return Halted(output_words(m, c), expansions, meter.cells)
            continue
        if expansions >= fuel:
            return FuelExhausted(expansions, meter.cells)
        expansions += 1
        meter.touch(c)
        successors = step(m, c, oracle, fuel - expansions)
        if querying and not successors:
            return FuelExhausted(fuel, meter.cells)
        frontier.extend(successors)
    return Rejected(expansions, meter.cells)


def accepts_within(m: TuringMachine, inputs: Sequence[Word], t: int) -> bool:
    """Whether some computation path accepts after at most t transitions."""
    if m.oracle_port is not None:
        raise UnsupportedError("bounded acceptance is not defined for oracle machines")
    level = {initial_configuration(m, inputs).key(): initial_configuration(m, inputs)}
    for depth in range(t + 1):
        following = {}
        for c in level.values():
            successors = step(m, c)
            if not successors:
                if m.is_accepting(c.state):
                    return True
                continue
            if depth < t:
                for s in successors:
                    following.setdefault(s.key(), s)
        level = following
    return False


def trace(m: TuringMachine, inputs: Sequence[Word], fuel: Optional[int] = None) -> List[Configuration]:
    """The configuration sequence of a deterministic run (for tableau audits)."""
    if not m.deterministic:
        raise UnsupportedError("trace() follows a single path; use accepts_within for NTMs")
    fuel = resolve_fuel(fuel)
    c = initial_configuration(m, inputs)
    configs = [c]
    while c.steps < fuel:
        successors = step(m, c)
        if not successors:
            break
        c = successors[0]
        configs.append(c)
    return configs


def semantics(m: TuringMachine) -> BlackBoxFunction:
    return BlackBoxFunction(m.m_in, m.n_out, lambda inputs, fuel: run(m, inputs, fuel), m.name)


# -- constructions ------------------------------------------------------------------

def _require_rules(*machines: TuringMachine):
    for m in machines:
        if m.oracle_port is not None:
            raise UnsupportedError(f"{m.name} has an oracle port; rule-level constructions need plain machines")


def _check_alphabets(a: Alphabet, b: Alphabet) -> Alphabet:
    return a.union(b)


def _copy_machine(sources: Sequence[int], alphabet: Alphabet, name: str) -> TuringMachine:
    """Copy input tape sources[j] to output tape j, one tape after another, then accept."""
    n = len(sources)
    k = 2 * n
    if n == 0:
        return TuringMachine(alphabet, 0, 0, "accept", (), work_tapes=0, accept={"accept"}, name=name)
    rules = []
    for j, src in enumerate(sources):
        here = f"copy{j}"
        after = f"copy{j + 1}" if j + 1 < n else "accept"
        for glyph in alphabet.symbols:
            reads = [WILD] * k
            writes = [WILD] * k
            moves = ["S"] * k
            reads[src] = glyph
            writes[n + j] = glyph
            moves[src] = moves[n + j] = "R"
            rules.append(Rule(here, tuple(reads), Action(here, tuple(writes), tuple(moves))))
        reads = [WILD] * k
        reads[src] = alphabet.blank
        rules.append(Rule(here, tuple(reads), Action(after, tuple([WILD] * k), tuple(["S"] * k))))
    return TuringMachine(alphabet, n, n, "copy0", tuple(rules), work_tapes=0, accept={"accept"}, name=name)


def identity_machine(n: int, alphabet: Alphabet) -> TuringMachine:
    """Copies each input tape to the matching output tape and accepts."""
    if n < 0:
        raise ShapeError("arity must be non-negative")
    return _copy_machine(list(range(n)), alphabet, f"id{n}")


def twist_machine(n1: int, n2: int, alphabet: Alphabet) -> TuringMachine:
    """Outputs the input tapes with the two blocks swapped."""
    sources = list(range(n1, n1 + n2)) + list(range(n1))
    return _copy_machine(sources, alphabet, f"twist{n1},{n2}")


def explicit_halting(m: TuringMachine) -> TuringMachine:
    """Equivalent machine (up to one extra step) that halts only in accept/reject states."""
    _require_rules(m)
    target = "halt.reject" if m.accept else "halt.accept"
    extra = []
    for state in m.states:
        if m.is_final(state):
            continue
        for pattern in m.gaps(state):
            extra.append(Rule(state, pattern, Action(target, tuple([WILD] * m.tape_count),
                                                     tuple(["S"] * m.tape_count))))
    if not extra:
        return m
    if m.accept:
        return replace(m, rules=m.rules + tuple(extra), reject=m.reject | {target})
    # without accept markers every halt outside a reject state was an acceptance
    return replace(m, rules=m.rules + tuple(extra), accept=frozenset({target}))


def _fresh_glyphs(taken: Iterable[str], count: int) -> List[str]:
    taken = set(taken) | {WILD, "#"}
    pool = itertools.chain("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz23456789",
                           (chr(c) for c in range(0x100, 0x2000)))
    fresh = []
    for glyph in pool:
        if glyph not in taken and not glyph.isspace():
            fresh.append(glyph)
            if len(fresh) == count:
                return fresh
    raise AlphabetError("ran out of fresh glyphs")


def _place(rule: Rule, k: int, positions: Sequence[int], rename: str) -> Tuple[List[str], List[str], List[str], str]:
    reads, writes, moves = [WILD] * k, [WILD] * k, ["S"] * k
    for src, dst in enumerate(positions):
        reads[dst] = rule.reads[src]
        writes[dst] = rule.action.writes[src]
        moves[dst] = rule.action.moves[src]
    return reads, writes, moves, rename + rule.action.state


def _lift_marked(rule: Rule, k: int, positions: Sequence[int], prefix: str, marked: Sequence[int],
                 mark: Dict[str, str], plain: Sequence[str]) -> List[Rule]:
    """Embed a component rule, duplicating it for marked cell-0 glyphs on the marked tapes."""
    reads, writes, moves, nxt = _place(rule, k, positions, prefix)
    variants_per_tape = []
    for p in marked:
        r, w = reads[p], writes[p]
        if r != WILD:
            variants_per_tape.append([(r, w), (mark[r], mark[w] if w != WILD else WILD)])
        elif w != WILD:
            variants_per_tape.append([(g, w) for g in plain] + [(mark[g], mark[w]) for g in plain])
        else:
            variants_per_tape.append([(WILD, WILD)])
    lifted = []
    for combo in itertools.product(*variants_per_tape):
        r2, w2 = list(reads), list(writes)
        for p, (r, w) in zip(marked, combo):
            r2[p], w2[p] = r, w
        lifted.append(Rule(prefix + rule.state, tuple(r2), Action(nxt, tuple(w2), tuple(moves))))
    return lifted


def compose(t1: TuringMachine, t2: TuringMachine) -> TuringMachine:
    """t2 after t1: t1's outputs become t2's inputs.

    t1's output tapes become work tapes of the composite. Their cell 0 is marked
    at start-up so that, once t1 accepts, the heads can be rewound to cell 0
    before control passes to t2's start state.
    """
    _require_rules(t1, t2)
    if t1.n_out != t2.m_in:
        raise ShapeError(f"cannot compose {t1.name} ({t1.n_out} outputs) with {t2.name} ({t2.m_in} inputs)")
    base = _check_alphabets(t1.alphabet, t2.alphabet)
    a, b = explicit_halting(t1), explicit_halting(t2)
    plain = list(base.tape_glyphs)
    marks = dict(zip(plain, _fresh_glyphs(plain, len(plain))))
    alphabet = Alphabet(base.symbols + tuple(marks[g] for g in plain), base.blank)

    m, n, p = a.m_in, a.n_out, b.n_out
    w1, w2 = a.work_tapes, b.work_tapes
    k = m + w1 + n + w2 + p
    mid = list(range(m + w1, m + w1 + n))
    pos_a = list(range(m + w1)) + mid
    pos_b = mid + list(range(m + w1 + n, k))

    rules: List[Rule] = []
    start = "a." + a.start
    if n:
        start = "compose.init"
        writes = [WILD] * k
        for i in mid:
            writes[i] = marks[base.blank]
        rules.append(Rule(start, tuple([WILD] * k), Action("a." + a.start, tuple(writes), tuple(["S"] * k))))
    for rule in a.rules:
        rules += _lift_marked(rule, k, pos_a, "a.", mid, marks, plain)
    after_a = "compose.rewind0" if n else "b." + b.start
    for state in sorted(a.accept):
        rules.append(Rule("a." + state, tuple([WILD] * k), Action(after_a, tuple([WILD] * k), tuple(["S"] * k))))
    for i, tape in enumerate(mid):
        here = f"compose.rewind{i}"
        nxt = f"compose.rewind{i + 1}" if i + 1 < n else "b." + b.start
        for g in plain:
            reads, moves = [WILD] * k, ["S"] * k
            reads[tape], moves[tape] = g, "L"
            rules.append(Rule(here, tuple(reads), Action(here, tuple([WILD] * k), tuple(moves))))
            reads = [WILD] * k
            reads[tape] = marks[g]
            rules.append(Rule(here, tuple(reads), Action(nxt, tuple([WILD] * k), tuple(["S"] * k))))
    for rule in b.rules:
        rules += _lift_marked(rule, k, pos_b, "b.", mid, marks, plain)

    composite = TuringMachine(
        alphabet, m, p, start, tuple(rules), work_tapes=w1 + n + w2,
        states=tuple(["a." + s for s in a.states] + ["b." + s for s in b.states]),
        accept={"b." + s for s in b.accept},
        reject={"a." + s for s in a.reject} | {"b." + s for s in b.reject},
        name=f"{t2.name}∘{t1.name}")
    logger.debug(f"Composed {composite.name}: {len(composite.states)} states, {composite.rule_count} rules")
    return composite


def tensor(t1: TuringMachine, t2: TuringMachine) -> TuringMachine:
    """Lock-step product. A component that has halted idles until its partner halts."""
    _require_rules(t1, t2)
    alphabet = _check_alphabets(t1.alphabet, t2.alphabet)
    a, b = explicit_halting(t1), explicit_halting(t2)
    m, w, n = a.m_in + b.m_in, a.work_tapes + b.work_tapes, a.n_out + b.n_out
    k = m + w + n
    pos_a = (list(range(a.m_in)) + list(range(m, m + a.work_tapes))
             + list(range(m + w, m + w + a.n_out)))
    pos_b = (list(range(a.m_in, m)) + list(range(m + a.work_tapes, m + w))
             + list(range(m + w + a.n_out, k)))

    def pair(x: str, y: str) -> str:
        return f"<{x},{y}>"

    def placed(rule: Optional[Rule], positions, reads, writes, moves):
        if rule is None:
            return
        for src, dst in enumerate(positions):
            reads[dst] = rule.reads[src]
            writes[dst] = rule.action.writes[src]
            moves[dst] = rule.action.moves[src]

    rules = []
    for x in a.states:
        for y in b.states:
            if a.is_final(x) and b.is_final(y):
                continue
            left = [None] if a.is_final(x) else a.rules_for(x)
            right = [None] if b.is_final(y) else b.rules_for(y)
            for r1 in left:
                for r2 in right:
                    reads, writes, moves = [WILD] * k, [WILD] * k, ["S"] * k
                    placed(r1, pos_a, reads, writes, moves)
                    placed(r2, pos_b, reads, writes, moves)
                    target = pair(r1.action.state if r1 else x, r2.action.state if r2 else y)
                    rules.append(Rule(pair(x, y), tuple(reads), Action(target, tuple(writes), tuple(moves))))
    final_a = a.accept | a.reject
    final_b = b.accept | b.reject
    return TuringMachine(
        alphabet, m, n, pair(a.start, b.start), tuple(rules), work_tapes=w,
        states=tuple(pair(x, y) for x in a.states for y in b.states),
        accept={pair(x, y) for x in a.accept for y in b.accept},
        reject={pair(x, y) for x in final_a for y in final_b if x in a.reject or y in b.reject},
        name=f"{t1.name}⊗{t2.name}")


def determinize(m: TuringMachine) -> TuringMachine:
    """A deterministic machine that walks m's computation tree breadth first.

    Work tapes: one simulation tape per tape of m, then an address tape. The
    address is a flag in cell 0 followed by one choice digit per step of m.
    Addresses are tried by length, then in digit order, which is the order in
    which a breadth-first search meets the nodes of the tree. For each address
    the inputs are copied onto cleared simulation tapes and m is replayed along
    the choices. A replay that ends in an accepting halt copies m's outputs and
    accepts. The flag records whether some replay of the current length is
    still running; if none is, the tree is exhausted and the machine rejects.
    """
    if m.oracle_port is not None:
        raise UnsupportedError(f"cannot determinize oracle machine {m.name}")
    k, m_in, n_out = m.tape_count, m.m_in, m.n_out
    blank = m.alphabet.blank
    glyphs = m.alphabet.tape_glyphs
    fan = max(m.branching, 1)
    fresh = _fresh_glyphs(glyphs, fan + 2)
    digits, idle, live = fresh[:fan], fresh[fan], fresh[fan + 1]
    flags = (idle, live)

    sims = [m_in + t for t in range(k)]
    addr = m_in + k
    outs = [addr + 1 + j for j in range(n_out)]
    sim_outs = [sims[t] for t in m.output_tapes]
    width = addr + 1 + n_out
    lockstep = [addr, *range(m_in), *sims]
    rules: List[Rule] = []

    def emit(state: str, nxt: str, reads: Dict[int, str], writes: Optional[Dict[int, str]] = None,
             moves: Optional[Dict[int, str]] = None):
        r, w, mv = [WILD] * width, [WILD] * width, ["S"] * width
        for i, g in reads.items():
            r[i] = g
        for i, g in (writes or {}).items():
            w[i] = g
        for i, d in (moves or {}).items():
            mv[i] = d
        rules.append(Rule(state, tuple(r), Action(nxt, tuple(w), tuple(mv))))

    emit("init", "sweep", {}, {addr: idle})

    # Copy the inputs and clear every other simulation cell, all heads in one column.
    for a in (*flags, *digits, blank):
        for combo in itertools.product(glyphs, repeat=m_in):
            reads = {addr: a, **dict(enumerate(combo))}
            if a == blank and all(g == blank for g in combo):
                emit("sweep", "rewind", reads)
                continue
            writes = {s: blank for s in sims}
            writes.update({sims[i]: g for i, g in enumerate(combo)})
            emit("sweep", "sweep", reads, writes, {i: "R" for i in lockstep})
    for a in (*digits, blank):
        emit("rewind", "rewind", {addr: a}, moves={i: "L" for i in lockstep})
    for a in flags:
        emit("rewind", "sim." + m.start, {addr: a}, moves={addr: "R"})

    for q in m.states:
        for pattern in m.read_patterns(q):
            actions = m.actions_for(q, pattern)
            reads = {sims[t]: g for t, g in enumerate(pattern) if g != WILD}
            for j, d in enumerate(digits):
                if j >= len(actions):
                    emit("sim." + q, "seek", {**reads, addr: d})
                    continue
                a = actions[j]
                writes = {sims[t]: g for t, g in enumerate(a.writes) if g != WILD}
                moves = {sims[t]: mv for t, mv in enumerate(a.moves)}
                moves[addr] = "R"
                emit("sim." + q, "sim." + a.state, {**reads, addr: d}, writes, moves)
            if actions:
                done = "mark-live"
            elif m.is_accepting(q):
                done = "gather"
            else:
                done = "seek"
            emit("sim." + q, done, {**reads, addr: blank})

    for a in (*digits, blank):
        emit("mark-live", "mark-live", {addr: a}, moves={addr: "L"})
    for a in flags:
        emit("mark-live", "seek", {addr: a}, {addr: live})

    # Next address: add one to the last digit with carry; past the largest, grow by one digit.
    for a in (*flags, *digits):
        emit("seek", "seek", {addr: a}, moves={addr: "R"})
    emit("seek", "next", {addr: blank}, moves={addr: "L"})
    for j, d in enumerate(digits[:-1]):
        emit("next", "reset", {addr: d}, {addr: digits[j + 1]})
    emit("next", "next", {addr: digits[-1]}, {addr: digits[0]}, {addr: "L"})
    emit("next", "reject", {addr: idle})
    emit("next", "deepen", {addr: live}, {addr: idle}, {addr: "R"})
    emit("deepen", "deepen", {addr: digits[0]}, moves={addr: "R"})
    emit("deepen", "reset", {addr: blank}, {addr: digits[0]})

    # Simulation heads sit at most one cell per digit from cell 0; walking back over the
    # whole address brings them home.
    for a in (*flags, *digits):
        emit("reset", "reset", {addr: a}, moves={addr: "R"})
    emit("reset", "reset-back", {addr: blank})
    for a in (*digits, blank):
        emit("reset-back", "reset-back", {addr: a}, moves={i: "L" for i in [addr, *sims]})
    for a in flags:
        emit("reset-back", "sweep", {addr: a})

    for a in (*digits, blank):
        emit("gather", "gather", {addr: a}, moves={i: "L" for i in [addr, *sims]})
    for a in flags:
        emit("gather", "copy-out", {addr: a})
    for combo in itertools.product(glyphs, repeat=n_out):
        reads = dict(zip(sim_outs, combo))
        if all(g == blank for g in combo):
            emit("copy-out", "accept", reads)
        else:
            emit("copy-out", "copy-out", reads, dict(zip(outs, combo)), {i: "R" for i in sim_outs + outs})

    searcher = TuringMachine(Alphabet(m.alphabet.symbols + tuple(fresh), blank), m_in, n_out, "init",
                             tuple(rules), work_tapes=k + 1, accept={"accept"}, reject={"reject"},
                             name=f"F({m.name})")
    logger.debug(f"Determinized {m.name}: branching {fan}, {searcher.rule_count} rules")
    return searcher


# -- text format --------------------------------------------------------------------

def serialize_tm(m: TuringMachine, canonical: bool = False) -> str:
    """Render the ``.tm`` text; canonical form sorts states and rules."""
    states = sorted(m.states) if canonical else list(m.states)
    rules = sorted(r.text() for r in m.rules) if canonical else [r.text() for r in m.rules]
    lines = [
        m.alphabet.declaration(),
        f"tapes: {m.m_in} {m.work_tapes} {m.n_out}",
        f"start: {m.start}",
        f"accept: {' '.join(sorted(m.accept))}".rstrip(),
        f"reject: {' '.join(sorted(m.reject))}".rstrip(),
        f"states: {' '.join(states)}",
    ]
    if m.oracle_port:
        port = m.oracle_port
        lines.append(f"oracle: tape {port.tape} state {port.query_state} answer {port.answer_state}")
    return "\n".join(lines + rules) + "\n"


def parse_tm(text: str, name: str = "tm") -> TuringMachine:
    """Parse ``.tm`` text. Lines sharing a left side declare nondeterministic alternatives."""
    header: Dict[str, str] = {}
    alphabet = None
    rule_lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("alphabet:"):
            try:
                alphabet = Alphabet.parse_declaration(line)
            except (FormatError, AlphabetError) as e:
                raise FormatError(e.message, number)
        elif "->" in line:
            rule_lines.append((number, line))
        elif ":" in line:
            key, _, value = line.partition(":")
            header[key.strip()] = value.strip()
        else:
            raise FormatError(f"unrecognized line {line!r}", number)
    if alphabet is None:
        raise FormatError("missing alphabet declaration")
    try:
        m_in, work, n_out = (int(x) for x in header.get("tapes", "").split())
    except ValueError:
        raise FormatError("missing or malformed 'tapes: <m> <w> <n>' line")
    if "start" not in header:
        raise FormatError("missing 'start:' line")
    k = m_in + work + n_out
    rules = []
    for number, line in rule_lines:
        left, _, right = line.partition("->")
        lhs, rhs = left.split(), right.split()
        if len(lhs) != k + 1 or len(rhs) != 2 * k + 1:
            raise FormatError(f"rule must mention {k} tapes on each side", number)
        rules.append(Rule(lhs[0], tuple(lhs[1:]), Action(rhs[0], tuple(rhs[1:k + 1]), tuple(rhs[k + 1:]))))
    port = None
    if "oracle" in header:
        parts = header["oracle"].split()
        if len(parts) != 6 or parts[0] != "tape" or parts[2] != "state" or parts[4] != "answer":
            raise FormatError("oracle line must read 'oracle: tape <i> state <q> answer <r>'")
        port = OraclePort(int(parts[1]), parts[3], parts[5])
    try:
        return TuringMachine(alphabet, m_in, n_out, header["start"], tuple(rules), work_tapes=work,
                             states=tuple(header.get("states", "").split()),
                             accept=frozenset(header.get("accept", "").split()),
                             reject=frozenset(header.get("reject", "").split()),
                             oracle_port=port, name=name)
    except (ShapeError, AlphabetError) as e:
        raise FormatError(e.message)


def canonical(m: TuringMachine) -> TuringMachine:
    """The machine as it reads back from its canonical text."""
    return parse_tm(serialize_tm(m, canonical=True), name=m.name)
