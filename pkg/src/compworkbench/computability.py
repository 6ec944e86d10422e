"""Halting, reductions between decision problems, and the diagonal argument, run under fuel.

A machine number is the Gödel number of a ``.tm`` text (see ``encodings``).
``semi_decide_halt`` and the halting oracle count any halt. The bounded
procedure behind the reductions asks whether machine y, given the single input
x, halts in an accepting state; there a halt in a reject state is a witnessed
"no". Numbers that do not name a one-input plain machine are read as the
always-rejecting machine.

Verdicts are three-valued: a run that outlives its fuel is Unknown unless the
machine's reachable configurations were exhausted without an accepting halt.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from .core import (Alphabet, BlackBoxFunction, FuelExhausted, FuelTank, Halted, Rejected, RunOutcome, Word,
                   resolve_fuel)
from .encodings import godel_decode, godel_number, nat_string_codec, tuple_codec
from .errors import AlphabetError, DecodeError, NonTotalError, PromiseViolation, ShapeError
from .library import BINARY, always_accept, always_reject, self_loop
from .regmachine import Call, ProgramTable, RegProgram, compose_reg, parse_rm, run_reg
from .turing import (WILD, Action, Rule, TuringMachine, explicit_halting, initial_configuration, run,
                     serialize_tm, step)

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class DecisionVerdict:
    verdict: Verdict
    fuel_spent: int = 0
    witness: Optional[Any] = None
    max_len: Optional[int] = None

    @property
    def decided(self) -> bool:
        return self.verdict != Verdict.UNKNOWN

    def negate(self) -> "DecisionVerdict":
        flipped = {Verdict.TRUE: Verdict.FALSE, Verdict.FALSE: Verdict.TRUE}.get(self.verdict, self.verdict)
        return DecisionVerdict(flipped, self.fuel_spent, self.witness, self.max_len)


TRUE, FALSE = Verdict.TRUE, Verdict.FALSE
UNKNOWN = Verdict.UNKNOWN


# -- machines behind numbers ---------------------------------------------------------

def decode_machine(y: int, strict: bool = False) -> TuringMachine:
    """The one-input machine numbered y; other numbers read as always-reject unless strict."""
    try:
        m = godel_decode(y, name=f"#{y}")
        if m.m_in != 1 or m.oracle_port is not None:
            raise DecodeError(f"machine #{y} is not a plain one-input machine")
        return m
    except DecodeError:
        if strict:
            raise
        return always_reject(BINARY, 1, 0)


def never_accepts(m: TuringMachine, inputs: Sequence[Word], fuel: Optional[int] = None) -> bool:
    """True when every configuration reachable from the inputs was visited within fuel and none is an accepting halt."""
    fuel = resolve_fuel(fuel)
    if m.oracle_port is not None:
        return False
    start = initial_configuration(m, inputs)
    seen = {start.key()}
    frontier = [start]
    expansions = 0
    while frontier:
        if expansions >= fuel:
            return False
        c = frontier.pop()
        expansions += 1
        successors = step(m, c)
        if not successors and m.is_accepting(c.state):
            return False
        for s in successors:
            if s.key() not in seen:
                seen.add(s.key())
                frontier.append(s)
    return True


def _accepts(m: TuringMachine, inputs: Sequence[Word], fuel: int) -> Tuple[Verdict, RunOutcome]:
    outcome = run(m, inputs, fuel)
    if isinstance(outcome, Halted):
        return TRUE, outcome
    if isinstance(outcome, Rejected) or never_accepts(m, inputs, fuel):
        return FALSE, outcome
    return UNKNOWN, outcome


def semi_decide_halt(y: int, x: Word, fuel: Optional[int] = None) -> DecisionVerdict:
    """Run machine y on x: True on any halt, accepting or rejecting; Unknown when fuel runs out.

    False is reserved for numbers and inputs that are not instances at all.
    """
    fuel = resolve_fuel(fuel)
    try:
        m = decode_machine(y, strict=True)
        outcome = run(m, (x,), fuel)
    except (DecodeError, ShapeError, AlphabetError) as e:
        logger.debug(f"semi_decide_halt: #{y} on {x!r} is not an instance: {e}")
        return DecisionVerdict(FALSE)
    if isinstance(outcome, (Halted, Rejected)):
        return DecisionVerdict(TRUE, outcome.steps_used)
    return DecisionVerdict(UNKNOWN, outcome.steps_used)


def par_halt(x: Word, y: int, fuel: Optional[int] = None) -> DecisionVerdict:
    """The partial halting function: True or no answer at all."""
    verdict = semi_decide_halt(y, x, fuel)
    return verdict if verdict.verdict == TRUE else DecisionVerdict(UNKNOWN, verdict.fuel_spent)


def halt_problem(fuel: Optional[int] = None) -> Callable[[Tuple[Word, int]], DecisionVerdict]:
    """A bounded decision procedure for Halt over (x, y) pairs."""

    def decide(instance: Tuple[Word, int]) -> DecisionVerdict:
        x, y = instance
        m = decode_machine(y)
        try:
            verdict, outcome = _accepts(m, (x,), resolve_fuel(fuel))
        except (ShapeError, AlphabetError):
            return DecisionVerdict(FALSE)
        return DecisionVerdict(verdict, outcome.steps_used)

    return decide


def complement_problem(decide: Callable[..., DecisionVerdict]) -> Callable[..., DecisionVerdict]:
    """NOT after the procedure; Unknown stays Unknown."""

    def negated(*args, **kwargs) -> DecisionVerdict:
        return decide(*args, **kwargs).negate()

    return negated


# -- bounded checkers over machine numbers --------------------------------------------

def _inputs(m: TuringMachine, max_len: int) -> List[Word]:
    return list(m.alphabet.words(max_len))


def nonempty_check(y: int, max_len: int, fuel: Optional[int] = None) -> DecisionVerdict:
    """Does machine y accept some word? Checked on words up to max_len."""
    fuel = resolve_fuel(fuel)
    m = decode_machine(y)
    unknown = False
    for w in _inputs(m, max_len):
        verdict, _ = _accepts(m, (w,), fuel)
        if verdict == TRUE:
            return DecisionVerdict(TRUE, witness=w, max_len=max_len)
        unknown = unknown or verdict == UNKNOWN
    return DecisionVerdict(UNKNOWN if unknown else FALSE, max_len=max_len)


def empty_check(y: int, max_len: int, fuel: Optional[int] = None) -> DecisionVerdict:
    return complement_problem(nonempty_check)(y, max_len, fuel)


def print42_check(y: int, max_len: int, fuel: Optional[int] = None) -> DecisionVerdict:
    """Does some input make machine y output the word "42"?"""
    fuel = resolve_fuel(fuel)
    m = decode_machine(y)
    if m.n_out != 1:
        return DecisionVerdict(FALSE, max_len=max_len)
    unknown = False
    for w in _inputs(m, max_len):
        verdict, outcome = _accepts(m, (w,), fuel)
        if verdict == TRUE and tuple(outcome.outputs) == ("42",):
            return DecisionVerdict(TRUE, witness=w, max_len=max_len)
        unknown = unknown or verdict == UNKNOWN
    return DecisionVerdict(UNKNOWN if unknown else FALSE, max_len=max_len)


def _partial_value(m: TuringMachine, w: Word, fuel: int):
    """('value', outputs), ('undefined',) or None when fuel leaves it open."""
    verdict, outcome = _accepts(m, (w,), fuel)
    if verdict == TRUE:
        return ("value", tuple(outcome.outputs))
    if verdict == FALSE:
        return ("undefined",)
    return None


def equiv_check(y1: int, y2: int, max_len: int, fuel: Optional[int] = None) -> DecisionVerdict:
    """Do machines y1 and y2 compute the same partial function? Rejection counts as undefined."""
    fuel = resolve_fuel(fuel)
    m1, m2 = decode_machine(y1), decode_machine(y2)
    if m1.n_out != m2.n_out:
        return DecisionVerdict(FALSE, max_len=max_len)
    alphabet = m1.alphabet.union(m2.alphabet)
    unknown = False
    for w in alphabet.words(max_len):
        left = _partial_value(m1, w, fuel) if all(g in m1.alphabet.symbols for g in w) else ("undefined",)
        right = _partial_value(m2, w, fuel) if all(g in m2.alphabet.symbols for g in w) else ("undefined",)
        if left is None or right is None:
            unknown = True
        elif left != right:
            return DecisionVerdict(FALSE, witness=w, max_len=max_len)
    return DecisionVerdict(UNKNOWN if unknown else TRUE, max_len=max_len)


# -- dovetailing ---------------------------------------------------------------------

def dovetail_decider(f_rec: BlackBoxFunction, fc_rec: BlackBoxFunction, x: Word,
                     fuel: Optional[int] = None) -> DecisionVerdict:
    """Run two recognizers of complementary sets one step at a time, alternating.

    Out of ``fuel`` steps f_rec takes the odd-numbered ones and fc_rec the even
    ones; once a side rejects, the other runs alone on what is left. A run
    depends only on its own fuel, so each side is run with its share and the
    steps are laid out on the shared clock afterwards. Whichever accepts first
    decides; both accepting within their shares breaks the promise.
    ``fuel_spent`` is the number of steps taken on the shared clock.
    """
    fuel = resolve_fuel(fuel)
    left, right = f_rec((x,), (fuel + 1) // 2), fc_rec((x,), fuel // 2)
    if isinstance(left, Halted) and isinstance(right, Halted):
        raise PromiseViolation(f"{f_rec.name} and {fc_rec.name} both accept {x!r}",
                               {'input': x, 'recognizers': [f_rec.name, fc_rec.name]})
    if isinstance(left, Rejected) and isinstance(right, FuelExhausted):
        right = fc_rec((x,), fuel - left.steps_used)
    elif isinstance(right, Rejected) and isinstance(left, FuelExhausted):
        left = f_rec((x,), fuel - right.steps_used)
    if isinstance(left, Halted):
        a = left.steps_used
        return DecisionVerdict(TRUE, a + min(max(a - 1, 0), right.steps_used))
    if isinstance(right, Halted):
        b = right.steps_used
        return DecisionVerdict(FALSE, b + min(b, left.steps_used))
    if isinstance(left, FuelExhausted) or isinstance(right, FuelExhausted):
        return DecisionVerdict(UNKNOWN, fuel)
    return DecisionVerdict(UNKNOWN, left.steps_used + right.steps_used)


# -- reduction constructions -----------------------------------------------------------

def _embed(rule: Rule, k: int, positions: Sequence[int], prefix: str) -> Rule:
    reads, writes, moves = [WILD] * k, [WILD] * k, ["S"] * k
    for src, dst in enumerate(positions):
        reads[dst] = rule.reads[src]
        writes[dst] = rule.action.writes[src]
        moves[dst] = rule.action.moves[src]
    return Rule(prefix + rule.state, tuple(reads), Action(prefix + rule.action.state, tuple(writes), tuple(moves)))


def _jump(state: str, target: str, k: int, writes: Optional[Dict[int, str]] = None,
          moves: Optional[Dict[int, str]] = None, reads: Optional[Dict[int, str]] = None) -> Rule:
    r, w, mv = [WILD] * k, [WILD] * k, ["S"] * k
    for i, g in (reads or {}).items():
        r[i] = g
    for i, g in (writes or {}).items():
        w[i] = g
    for i, d in (moves or {}).items():
        mv[i] = d
    return Rule(state, tuple(r), Action(target, tuple(w), tuple(mv)))


def _inline_on_constant(y: TuringMachine, x: Word, compare: bool, extra: Alphabet,
                        tail: Optional[TuringMachine] = None, print_word: str = "") -> TuringMachine:
    """Machine on input w: (optionally) reject unless w == x; then run y on x; if y accepts, finish.

    Finishing is one of: accept, write ``print_word`` on the output and accept, or
    run ``tail`` on w. y's tapes (its input holding x) are work tapes of the result.
    """
    a = explicit_halting(y)
    alphabet = BINARY.union(a.alphabet).union(extra)
    if tail is not None:
        alphabet = alphabet.union(tail.alphabet)
        b = explicit_halting(tail)
        n_out, tail_work = b.n_out, b.work_tapes + b.m_in - 1
    else:
        b = None
        n_out, tail_work = (1 if print_word else 0), 0
    k_y = a.tape_count
    work = k_y + tail_work
    k = 1 + work + n_out
    y_tapes = list(range(1, 1 + k_y))
    rules: List[Rule] = []

    state = "check0" if compare else "write0"
    start = state
    if compare:
        for i, glyph in enumerate(x):
            here, nxt = f"check{i}", f"check{i + 1}"
            rules.append(_jump(here, nxt, k, reads={0: glyph}, moves={0: "R"}))
            rules += [_jump(here, "reject", k, reads={0: g}) for g in alphabet.tape_glyphs if g != glyph]
        last = f"check{len(x)}"
        rules.append(_jump(last, "write0", k, reads={0: alphabet.blank}))
        rules += [_jump(last, "reject", k, reads={0: g}) for g in alphabet.symbols]
    x_tape = y_tapes[0]
    for i, glyph in enumerate(x):
        rules.append(_jump(f"write{i}", f"write{i + 1}", k, writes={x_tape: glyph}, moves={x_tape: "R"}))
    for i in range(len(x)):
        rules.append(_jump(f"write{len(x)}" if i == 0 else f"rewind{i}", f"rewind{i + 1}", k,
                           moves={x_tape: "L"}))
    ready = f"rewind{len(x)}" if x else "write0"
    rules.append(_jump(ready, "y." + a.start, k))

    rules += [_embed(rule, k, y_tapes, "y.") for rule in a.rules]
    finish = "accept"
    if b is not None:
        finish = "w." + b.start
        tail_tapes = [0] + list(range(1 + k_y, 1 + work)) + list(range(1 + work, k))
        rules += [_embed(rule, k, tail_tapes, "w.") for rule in b.rules]
        rules += [_jump("w." + s, "accept", k) for s in sorted(b.accept)]
        rules += [_jump("w." + s, "reject", k) for s in sorted(b.reject)]
    elif print_word:
        finish = "print0"
        out = k - 1
        for i, glyph in enumerate(print_word):
            nxt = f"print{i + 1}" if i + 1 < len(print_word) else "accept"
            rules.append(_jump(f"print{i}", nxt, k, writes={out: glyph}, moves={out: "R"}))
    rules += [_jump("y." + s, finish, k) for s in sorted(a.accept)]
    rules += [_jump("y." + s, "reject", k) for s in sorted(a.reject)]
    return TuringMachine(alphabet, 1, n_out, start, tuple(rules), work_tapes=work,
                         accept={"accept"}, reject={"reject"}, name=f"inline({y.name},{x!r})")


def nonempty_instance(y: TuringMachine, x: Word) -> TuringMachine:
    """Accepts exactly {x} if y accepts x, and nothing otherwise."""
    return _inline_on_constant(y, x, compare=True, extra=BINARY)


def print42_instance(y: TuringMachine, x: Word) -> TuringMachine:
    """Outputs "42" on input x exactly when y accepts x; rejects every other input."""
    return _inline_on_constant(y, x, compare=True, extra=Alphabet.of("42"), print_word="42")


def rice_instance(y: TuringMachine, x: Word, with_property: TuringMachine) -> TuringMachine:
    """Behaves like with_property if y accepts x, and accepts nothing otherwise."""
    if with_property.m_in != 1:
        raise ShapeError("the witness machine must take one input")
    return _inline_on_constant(y, x, compare=False, extra=BINARY, tail=with_property)


def _burn(tank: Optional[FuelTank], n: int):
    if tank is not None:
        tank.burn(n)


def _read_machine(y: int, tank: Optional[FuelTank]) -> TuringMachine:
    """Decode machine y; one step per character of its text."""
    m = decode_machine(y)
    _burn(tank, len(serialize_tm(m, canonical=True)))
    return m


def _write_machine(m: TuringMachine, tank: Optional[FuelTank]) -> int:
    """Number the built machine; one step per rule built and per character written."""
    _burn(tank, m.rule_count + len(serialize_tm(m, canonical=True)))
    return godel_number(m)


def reduce_halt_to_nonempty(x: Word, y: int, tank: Optional[FuelTank] = None) -> int:
    _burn(tank, len(x))
    return _write_machine(nonempty_instance(_read_machine(y, tank), x), tank)


def reduce_halt_to_print42(x: Word, y: int, tank: Optional[FuelTank] = None) -> int:
    _burn(tank, len(x))
    return _write_machine(print42_instance(_read_machine(y, tank), x), tank)


def rice_transform(x: Word, y: int, witness_without: int, witness_with: int,
                   tank: Optional[FuelTank] = None) -> int:
    """Halt(x, y) iff the result behaves like witness_with.

    witness_without (conventionally always-reject) is what the result behaves like
    when y does not accept x; it only documents the branch and is checked to decode.
    """
    _read_machine(witness_without, tank)
    _burn(tank, len(x))
    image = rice_instance(_read_machine(y, tank), x, _read_machine(witness_with, tank))
    return _write_machine(image, tank)


def reduce_empty_to_equiv(y: int, tank: Optional[FuelTank] = None) -> Tuple[int, int]:
    """(y, y0) with y0 the machine of the same shape that never halts."""
    m = _read_machine(y, tank)
    _burn(tank, len(serialize_tm(m, canonical=True)))
    return y, _write_machine(self_loop(m.alphabet, 1, m.n_out), tank)


# -- reductions and commutation ------------------------------------------------------------

def value_size(value: Any) -> int:
    """Length of a word, bit length of a number, summed over tuples."""
    if isinstance(value, str):
        return len(value)
    if isinstance(value, int):
        return value.bit_length()
    if isinstance(value, (tuple, list)):
        return sum(value_size(v) for v in value)
    raise ShapeError(f"no size for {type(value).__name__}")


def machine_size(y: int) -> int:
    """Characters in the canonical text of machine y."""
    return len(serialize_tm(decode_machine(y), canonical=True))


def halt_instance_size(instance: Tuple[Word, int]) -> int:
    x, y = instance
    return len(x) + machine_size(y)


@dataclass(frozen=True)
class Reduction:
    """A many-one reduction between named problems.

    ``transform(instance, tank)`` burns one unit of the tank per step of work,
    in the same units ``size`` measures instances in.
    """

    name: str
    transform: Callable[[Any, FuelTank], Any] = field(compare=False)
    source: str
    target: str
    size: Callable[[Any], int] = field(default=value_size, compare=False)

    def apply(self, instance: Any, fuel: Optional[int] = None) -> Tuple[Any, int]:
        """The image of instance and the steps the transform burned."""
        tank = FuelTank(resolve_fuel(fuel))
        image = self.transform(instance, tank)
        return image, tank.used

    def __call__(self, instance: Any) -> Any:
        return self.apply(instance)[0]


class CommutationReport(BaseModel):
    reduction: str
    checked: int = 0
    agreed: int = 0
    unknown: int = 0
    violations: List[str] = []

    @property
    def commutes(self) -> bool:
        return not self.violations


def check_reduction(r: Reduction, source_oracle: Callable[[Any], DecisionVerdict],
                    target_oracle: Callable[[Any], DecisionVerdict], inputs: Iterable[Any]) -> CommutationReport:
    """Check f(x) == g(h(x)) wherever both verdicts are decided."""
    report = CommutationReport(reduction=r.name)
    for instance in inputs:
        report.checked += 1
        before = source_oracle(instance)
        after = target_oracle(r(instance))
        if not before.decided or not after.decided:
            report.unknown += 1
        elif before.verdict == after.verdict:
            report.agreed += 1
        else:
            report.violations.append(f"{instance!r}: {before.verdict.value} vs {after.verdict.value}")
    if report.violations:
        logger.warning(f"Reduction {r.name} fails to commute on {len(report.violations)} inputs")
    return report


def halt_to_nonempty(max_len: int = 3, fuel: Optional[int] = None) -> Tuple[Reduction, Callable, Callable]:
    """The reduction with its source and target oracles."""
    reduction = Reduction("halt->nonempty", lambda inst, tank: reduce_halt_to_nonempty(*inst, tank=tank), "halt",
                          "nonempty", halt_instance_size)
    return reduction, halt_problem(fuel), lambda y: nonempty_check(y, max_len, fuel)


def halt_to_print42(max_len: int = 3, fuel: Optional[int] = None) -> Tuple[Reduction, Callable, Callable]:
    reduction = Reduction("halt->print42", lambda inst, tank: reduce_halt_to_print42(*inst, tank=tank), "halt",
                          "print42", halt_instance_size)
    return reduction, halt_problem(fuel), lambda y: print42_check(y, max_len, fuel)


def empty_to_equiv(max_len: int = 3, fuel: Optional[int] = None) -> Tuple[Reduction, Callable, Callable]:
    reduction = Reduction("empty->equiv", reduce_empty_to_equiv, "empty", "equiv", machine_size)
    return (reduction, lambda y: empty_check(y, max_len, fuel),
            lambda pair: equiv_check(pair[0], pair[1], max_len, fuel))


def halt_to_rice(max_len: int = 3, fuel: Optional[int] = None) -> Tuple[Reduction, Callable, Callable]:
    """The Rice construction for the property "accepts some word", witnessed by always-accept."""
    without, with_property = godel_number(always_reject(BINARY, 1, 0)), godel_number(always_accept())
    reduction = Reduction("halt->rice", lambda inst, tank: rice_transform(*inst, without, with_property, tank),
                          "halt", "nonempty", halt_instance_size)
    return reduction, halt_problem(fuel), lambda y: nonempty_check(y, max_len, fuel)


# -- the diagonal argument -----------------------------------------------------------

def delta_program() -> RegProgram:
    """n -> (n, n)."""
    return parse_rm("""
inputs X1
outputs Y1 Y2
loop: if X1 = 0 goto done
X1 = X1 - 1
Y1 = Y1 + 1
Y2 = Y2 + 1
if W1 = 0 goto loop
done:
""", name="delta")


def par_not_program() -> RegProgram:
    """Loops forever on a nonzero input; returns 1 on 0."""
    return parse_rm("""
inputs X1
outputs Y1
spin: if X1 = 0 goto done
if W1 = 0 goto spin
done: Y1 = Y1 + 1
""", name="par-not")


def call_program(index: int, arity_in: int, arity_out: int) -> RegProgram:
    args = tuple(f"X{i}" for i in range(1, arity_in + 1))
    rets = tuple(f"Y{i}" for i in range(1, arity_out + 1))
    return RegProgram((Call(index, args, rets),), args, rets, name=f"call#{index}")


class ContradictionReport(BaseModel):
    candidate: str
    index: int
    claimed: str
    observed: str
    contradiction: bool
    fuel: int


def _check_total_decider(candidate: RegProgram, table: ProgramTable, sample: int, fuel: int):
    if (len(candidate.inputs), len(candidate.outputs)) != (2, 1):
        raise ShapeError(f"{candidate.name} must map two inputs to one output")
    for a in range(sample):
        for b in range(sample):
            outcome = run_reg(candidate, (a, b), fuel, table)
            if not isinstance(outcome, Halted) or outcome.outputs[0] not in (0, 1):
                raise NonTotalError(f"{candidate.name} is not a 0/1 decider on ({a}, {b})",
                                    {'candidate': candidate.name, 'input': [a, b]})


def diagonal_construct(candidate: RegProgram, table: Optional[ProgramTable] = None,
                       fuel: Optional[int] = None, sample: int = 4) -> Tuple[int, ContradictionReport]:
    """Build Halt' = ParNOT . candidate . Delta, register it, and run it on its own index."""
    fuel = resolve_fuel(fuel)
    table = table if table is not None else ProgramTable()
    _check_total_decider(candidate, table, sample, fuel)
    c = table.register(candidate)
    halt_prime = compose_reg(compose_reg(delta_program(), call_program(c, 2, 1)), par_not_program())
    p0 = table.register(halt_prime)

    claim = run_reg(candidate, (p0, p0), fuel, table)
    if not isinstance(claim, Halted):
        raise NonTotalError(f"{candidate.name} gives no answer on ({p0}, {p0})")
    claims_halt = claim.outputs[0] == 1
    outcome = run_reg(halt_prime, (p0,), fuel, table)
    halted = isinstance(outcome, Halted)
    report = ContradictionReport(
        candidate=candidate.name, index=p0,
        claimed="halts" if claims_halt else "loops",
        observed="halted" if halted else "no halt within fuel",
        contradiction=claims_halt != halted, fuel=fuel)
    logger.info(f"Diagonal against {candidate.name}: claimed {report.claimed}, observed {report.observed}")
    return p0, report


def constant_decider(bit: int) -> RegProgram:
    lines = ["inputs X1 X2", "outputs Y1", "Y1 = 0"] + ["Y1 = Y1 + 1"] * bit
    return parse_rm("\n".join(lines), name=f"always-{bit}")


def equality_decider() -> RegProgram:
    """1 when both inputs are equal."""
    return parse_rm("""
inputs X1 X2
outputs Y1
loop: if X1 = 0 goto first_empty
if X2 = 0 goto done
X1 = X1 - 1
X2 = X2 - 1
if W1 = 0 goto loop
first_empty: if X2 = 0 goto same
if W1 = 0 goto done
same: Y1 = Y1 + 1
done:
""", name="equal")


def parity_decider() -> RegProgram:
    """1 when the first input is even."""
    return parse_rm("""
inputs X1 X2
outputs Y1
Y1 = Y1 + 1
loop: if X1 = 0 goto done
X1 = X1 - 1
if Y1 = 0 goto set
Y1 = Y1 - 1
if W1 = 0 goto loop
set: Y1 = Y1 + 1
if W1 = 0 goto loop
done:
""", name="first-even")


def candidate_deciders() -> Dict[str, RegProgram]:
    return {
        "always-1": constant_decider(1),
        "always-0": constant_decider(0),
        "equal": equality_decider(),
        "first-even": parity_decider(),
    }


# -- an oracle for halting -----------------------------------------------------------------

def halt_query(y: int, x: Word) -> Word:
    """The oracle question "does machine y halt on x?" as one binary word."""
    return tuple_codec(2).encode((nat_string_codec().encode(y), x))


def bounded_halt_oracle(fuel: Optional[int] = None) -> BlackBoxFunction:
    """Answers halt queries with "1"/"0" after running the machine within fuel; "" for malformed queries.

    The oracle's own run is not charged to the asking machine: each answer costs one step.
    """
    codec, nats = tuple_codec(2), nat_string_codec()

    def evaluate(inputs, _fuel):
        try:
            y_word, x = codec.decode(inputs[0])
            verdict = semi_decide_halt(nats.decode(y_word), x, resolve_fuel(fuel))
        except DecodeError:
            return Halted(("",), 1)
        return Halted(("1" if verdict.verdict == TRUE else "0",), 1)

    return BlackBoxFunction(1, 1, evaluate, "halt-oracle")
