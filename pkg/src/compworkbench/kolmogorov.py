"""Upper bounds on Kolmogorov complexity by bounded machine enumeration.

K(x|y) is the rule count of the smallest machine that prints x when started on y.
It is not computable, so every estimate here is an upper bound: the smallest
machine found within a rule cap, a candidate cap and a fuel bound. Known
constructions (print-literally, copy, the zero counter) join the enumerated
candidates so that a long target still gets a bound.
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel

from .core import Alphabet, Halted, Word, _fan_out, resolve_fuel
from .errors import ShapeError
from .turing import (WILD, Action, Rule, TuringMachine, identity_machine, initial_configuration, parse_tm, run,
                     serialize_tm, step)

logger = logging.getLogger(__name__)

ZEROS_45 = "0" * 45
PATTERN_45 = "11011101111101111111011111111111011111111111110"
RANDOM_45 = "01010010110110101011011101111001100000111111010"

_CHUNK = 256


@dataclass(frozen=True)
class SizeBudget:
    """Search limits; max_candidates caps the machines tried at each rule count."""

    max_rules: int = 8
    fuel: int = 10000
    alphabet: Alphabet = field(default_factory=Alphabet.binary)
    max_candidates: int = 500

    def __post_init__(self):
        if self.max_rules < 1:
            raise ShapeError("max_rules must be at least 1")
        if self.fuel < 0 or self.max_candidates < 0:
            raise ShapeError("fuel and max_candidates must be non-negative")


class KEstimate(BaseModel):
    target: str
    condition: str = ""
    k_hat: Optional[int] = None
    witness: Optional[str] = None
    source: Optional[str] = None
    candidates_tried: int = 0
    max_rules: int
    fuel: int

    @property
    def found(self) -> bool:
        return self.k_hat is not None

    @property
    def bound(self) -> float:
        """k_hat, or infinity when nothing was found within budget."""
        return float(self.k_hat) if self.k_hat is not None else math.inf

    def machine(self) -> Optional[TuringMachine]:
        return parse_tm(self.witness, name="witness") if self.witness else None


# -- known constructions ------------------------------------------------------------

def _emit(state: str, nxt: str, glyph: str) -> Rule:
    return Rule(state, (WILD, WILD), Action(nxt, (WILD, glyph), ("S", "R")))


def literal_machine(x: Word, alphabet: Alphabet = Alphabet.binary()) -> TuringMachine:
    """Prints x one glyph per rule and halts; |x| rules."""
    alphabet.check_word(x)
    states = [f"p{i}" for i in range(len(x))] + ["done"]
    rules = tuple(_emit(states[i], states[i + 1], g) for i, g in enumerate(x))
    return TuringMachine(alphabet, 1, 1, states[0], rules, work_tapes=0, accept={"done"}, name=f"print-{x or 'empty'}")


def copy_machine(alphabet: Alphabet = Alphabet.binary()) -> TuringMachine:
    return identity_machine(1, alphabet)


def zeros_witness(m: int) -> TuringMachine:
    """Prints (m+1)(m+2) zeros with m+6 rules.

    Lays down a marker and m ones on the work tape, then bounces between the
    marker and the right end, erasing one '1' per trip and printing a '0' on
    every step.
    """
    if m < 0:
        raise ShapeError("m must be non-negative")

    def rule(state, work, nxt, write, move):
        return Rule(state, (WILD, work, WILD), Action(nxt, (WILD, write, "0"), ("S", move, "R")))

    setup = [f"s{i}" for i in range(m + 1)] + ["right"]
    rules = [rule(setup[0], "_", setup[1], "0", "R")]
    rules += [rule(setup[i], "_", setup[i + 1], "1", "R") for i in range(1, m + 1)]
    rules += [
        rule("right", "1", "right", WILD, "R"),
        rule("right", "_", "erase", WILD, "L"),
        rule("erase", "1", "left", "_", "L"),
        rule("left", "1", "left", WILD, "L"),
        rule("left", "0", "right", WILD, "R"),
    ]
    return TuringMachine(Alphabet.binary(), 1, 1, setup[0], tuple(rules), work_tapes=1,
                         name=f"zeros-{(m + 1) * (m + 2)}")


def _zeros_for(x: Word) -> Optional[TuringMachine]:
    if not x or set(x) != {"0"}:
        return None
    m = 0
    while (m + 1) * (m + 2) < len(x):
        m += 1
    return zeros_witness(m) if (m + 1) * (m + 2) == len(x) else None


def motif_strings(n: int) -> Dict[str, Word]:
    """Length-n versions of the all-zeros, patterned and random-looking strings."""
    if not 0 <= n <= 45:
        raise ShapeError("motif strings exist for lengths 0..45")
    return {'zeros': ZEROS_45[:n], 'pattern': PATTERN_45[:n], 'random': RANDOM_45[:n]}


# -- enumeration --------------------------------------------------------------------

def _rule_keys(alphabet: Alphabet, states: int) -> List[Tuple[str, str, str]]:
    """(state, input glyph, work glyph) pairs a rule can dispatch on; reads are always concrete."""
    glyphs = alphabet.tape_glyphs
    return [(f"q{q}", read_in, read_work) for q, read_in, read_work in itertools.product(range(states), glyphs, glyphs)]


@functools.lru_cache(maxsize=None)
def _actions(key: Tuple[str, str, str], alphabet: Alphabet, states: int) -> Tuple[Action, ...]:
    """Every action for a key over targets q0..q{states}, without the rule that changes nothing."""
    writes = (WILD,) + alphabet.tape_glyphs
    actions = []
    for nxt, work_write, work_move, out_write, in_move in itertools.product(
            range(states + 1), writes, ("L", "R", "S"), (WILD,) + alphabet.symbols, ("S", "R")):
        if (f"q{nxt}", work_write, work_move, out_write, in_move) == (key[0], WILD, "S", WILD, "S"):
            continue
        out_move = "S" if out_write == WILD else "R"
        actions.append(Action(f"q{nxt}", (WILD, work_write, out_write), (in_move, work_move, out_move)))
    return tuple(actions)


def _canonical_names(rules: Tuple[Rule, ...]) -> bool:
    """States appear in first-use order q0, q1, ... with no gaps."""
    seen = 0
    for r in rules:
        for state in (r.state, r.action.state):
            index = int(state[1:])
            if index > seen:
                return False
            if index == seen:
                seen += 1
    return True


def _machines_of_size(size: int, alphabet: Alphabet) -> Iterator[Tuple[Rule, ...]]:
    """Canonical rule tuples of one size: key sets in order, then actions per key."""
    if size == 0:
        yield ()
        return
    states = size
    keys = _rule_keys(alphabet, states)
    for chosen in itertools.combinations(keys, size):
        if chosen[0][0] != "q0":
            break
        for actions in itertools.product(*(_actions(key, alphabet, states) for key in chosen)):
            rules = tuple(Rule(q, (read_in, read_work, WILD), action)
                          for (q, read_in, read_work), action in zip(chosen, actions))
            if _canonical_names(rules):
                yield rules


def enumerate_machines(budget: SizeBudget) -> Iterator[TuringMachine]:
    """Deterministic canonical machines by rule count, at most max_candidates of each size.

    Rules dispatch on concrete (state, input, work) glyphs, so no two rules of a
    candidate can overlap and every candidate is deterministic.
    """
    produced = 0
    for size in range(0, budget.max_rules + 1):
        for rules in itertools.islice(_machines_of_size(size, budget.alphabet), budget.max_candidates):
            yield TuringMachine(budget.alphabet, 1, 1, "q0", rules, work_tapes=1, name=f"enum{produced}")
            produced += 1


def _prints(m: TuringMachine, x: Word, y: Word, fuel: int, prune: bool = False) -> bool:
    """Run m on y and compare its output with x.

    With ``prune`` (for enumerated machines, whose output head never moves left
    or writes a blank) a run stops early once its output stops being a prefix
    of x, or when it revisits a configuration.
    """
    if not prune:
        outcome = run(m, (y,), fuel)
        return isinstance(outcome, Halted) and outcome.outputs == (x,)
    out = m.output_tapes[0]
    c = initial_configuration(m, (y,))
    seen = set()
    while True:
        successors = step(m, c)
        if not successors:
            return m.is_accepting(c.state) and c.contents(out) == x
        if c.steps >= fuel or not x.startswith(c.contents(out)) or c.key() in seen:
            return False
        seen.add(c.key())
        c = successors[0]


def _known_witnesses(x: Word, y: Word, alphabet: Alphabet) -> List[Tuple[str, TuringMachine]]:
    found = [("literal", literal_machine(x, alphabet))]
    if x == y:
        found.append(("copy", copy_machine(alphabet)))
    zeros = _zeros_for(x)
    if zeros is not None:
        found.append(("zeros", zeros))
    return found


def estimate_k(x: Word, y: Word = "", budget: Optional[SizeBudget] = None,
               workers: Optional[int] = None) -> KEstimate:
    """Smallest machine (by rule count) found that prints x when started on y."""
    budget = budget or SizeBudget()
    budget.alphabet.check_word(x)
    budget.alphabet.check_word(y)
    fuel = resolve_fuel(budget.fuel)
    logger.info("=" * 60)
    logger.info(f"Estimating K({x!r} | {y!r}) with at most {budget.max_rules} rules")

    best: Optional[Tuple[int, int, str, TuringMachine]] = None
    tried = 0
    stream = enumerate_machines(budget)
    while True:
        chunk = list(itertools.islice(stream, _CHUNK))
        if not chunk:
            break
        hits = _fan_out(lambda m: _prints(m, x, y, fuel, prune=True), chunk, workers)
        tried += len(chunk)
        winner = next((m for m, hit in zip(chunk, hits) if hit), None)
        if winner is not None:
            best = (winner.rule_count, 0, "enumeration", winner)
            break
    logger.debug(f"Enumeration tried {tried} candidates")

    for order, (source, m) in enumerate(_known_witnesses(x, y, budget.alphabet), start=1):
        if m.rule_count > budget.max_rules or not _prints(m, x, y, fuel):
            continue
        if best is None or (m.rule_count, order) < best[:2]:
            best = (m.rule_count, order, source, m)

    if best is None:
        logger.info(f"No machine within budget prints {x!r}")
        return KEstimate(target=x, condition=y, candidates_tried=tried, max_rules=budget.max_rules, fuel=fuel)
    size, _, source, m = best
    logger.info(f"k_hat = {size} via {source}")
    return KEstimate(target=x, condition=y, k_hat=size, witness=serialize_tm(m, canonical=True), source=source,
                     candidates_tried=tried, max_rules=budget.max_rules, fuel=fuel)


class CompressibilityReport(BaseModel):
    target: str
    c: int
    k_hat: Optional[int]
    literal_cost: int
    compressible: bool

    @property
    def verdict(self) -> str:
        return "compressible" if self.compressible else "not witnessed within budget"


def compressibility_report(x: Word, c: int = 0, budget: Optional[SizeBudget] = None) -> CompressibilityReport:
    """x is compressible when k_hat(x) <= Sz(literal_machine(x)) + c; a miss never claims randomness."""
    budget = budget or SizeBudget()
    estimate = estimate_k(x, "", budget)
    literal_cost = literal_machine(x, budget.alphabet).rule_count
    compressible = estimate.found and estimate.k_hat <= literal_cost + c
    return CompressibilityReport(target=x, c=c, k_hat=estimate.k_hat, literal_cost=literal_cost,
                                 compressible=compressible)
