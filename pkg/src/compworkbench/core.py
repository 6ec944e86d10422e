"""Alphabets, words, fuel, run outcomes and the behavioral-equivalence harness.

Every machine model in the workbench is observed through a ``BlackBoxFunction``:
a procedure from a tuple of input words plus a fuel budget to a ``RunOutcome``.
Divergence is never executed; it is observed as ``FuelExhausted``.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from .config import get_settings
from .errors import AlphabetError, FormatError, ShapeError

logger = logging.getLogger(__name__)

# Words are plain strings of single-character glyphs.
Word = str


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of glyphs plus a blank that is not one of them."""

    symbols: Tuple[str, ...]
    blank: str = "_"

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, 'symbols', symbols)
        if not symbols:
            raise AlphabetError("alphabet needs at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise AlphabetError(f"duplicate symbols in {''.join(symbols)!r}")
        for glyph in symbols + (self.blank,):
            if len(glyph) != 1 or glyph.isspace():
                raise AlphabetError(f"glyphs must be single visible characters, got {glyph!r}")
        if self.blank in symbols:
            raise AlphabetError(f"blank {self.blank!r} is also a symbol")

    @classmethod
    def binary(cls) -> "Alphabet":
        return cls(("0", "1"))

    @classmethod
    def of(cls, glyphs: str, blank: str = "_") -> "Alphabet":
        return cls(tuple(glyphs), blank)

    @property
    def tape_glyphs(self) -> Tuple[str, ...]:
        """Glyphs that can appear on a tape; the blank always has index 0."""
        return (self.blank,) + self.symbols

    def index(self, glyph: str) -> int:
        try:
            return self.tape_glyphs.index(glyph)
        except ValueError:
            raise AlphabetError(f"glyph {glyph!r} not in alphabet {self.declaration()!r}")

    def check_word(self, word: Word) -> Word:
        for glyph in word:
            if glyph not in self.symbols:
                raise AlphabetError(f"word {word!r} uses glyph {glyph!r} outside {''.join(self.symbols)!r}")
        return word

    def declaration(self) -> str:
        return f"alphabet: {''.join(self.symbols)} blank:{self.blank}"

    @classmethod
    def parse_declaration(cls, line: str) -> "Alphabet":
        parts = line.split()
        if len(parts) != 3 or parts[0] != "alphabet:" or not parts[2].startswith("blank:"):
            raise FormatError(f"expected 'alphabet: <glyphs> blank:<glyph>', got {line.strip()!r}")
        return cls(tuple(parts[1]), parts[2][len("blank:"):])

    def union(self, other: "Alphabet") -> "Alphabet":
        if self.blank != other.blank:
            raise AlphabetError(f"blanks differ: {self.blank!r} vs {other.blank!r}")
        extra = tuple(s for s in other.symbols if s not in self.symbols)
        return Alphabet(self.symbols + extra, self.blank)

    def words(self, max_len: int) -> Iterator[Word]:
        """All words of length <= max_len, by length then alphabet order."""
        for n in range(max_len + 1):
            for glyphs in itertools.product(self.symbols, repeat=n):
                yield "".join(glyphs)

    def words_of_length(self, n: int) -> Iterator[Word]:
        for glyphs in itertools.product(self.symbols, repeat=n):
            yield "".join(glyphs)

    def word_tuples(self, arity: int, max_total: int) -> List[Tuple[Word, ...]]:
        """All arity-tuples with total length <= max_total, by total length then lexicographically."""
        order = {glyph: i for i, glyph in enumerate(self.symbols)}

        def key(t: Tuple[Word, ...]):
            return (sum(len(w) for w in t), tuple(len(w) for w in t), tuple(order[g] for w in t for g in w))

        tuples = []
        for lengths in itertools.product(range(max_total + 1), repeat=arity):
            if sum(lengths) > max_total:
                continue
            tuples.extend(itertools.product(*(list(self.words_of_length(n)) for n in lengths)))
        return sorted(tuples, key=key)


UNARY = Alphabet(("1",))


class FuelTank:
    """Countdown shared by one evaluation; never allows more than ``steps`` burns."""

    def __init__(self, steps: int):
        if steps < 0:
            raise ShapeError(f"fuel must be non-negative, got {steps}")
        self.steps = steps
        self.used = 0

    @property
    def remaining(self) -> int:
        return self.steps - self.used

    def burn(self, n: int = 1) -> bool:
        if self.used + n > self.steps:
            self.used = self.steps
            return False
        self.used += n
        return True


def resolve_fuel(fuel: Optional[int]) -> int:
    """Explicit fuel, or the configured default."""
    if fuel is None:
        return get_settings().default_fuel
    if fuel < 0:
        raise ShapeError(f"fuel must be non-negative, got {fuel}")
    return fuel


@dataclass(frozen=True)
class Halted:
    outputs: Tuple[Any, ...]
    steps_used: int
    cells_used: int = 0


@dataclass(frozen=True)
class Rejected:
    steps_used: int
    cells_used: int = 0


@dataclass(frozen=True)
class FuelExhausted:
    steps_used: int = 0
    cells_used: int = 0


RunOutcome = Union[Halted, Rejected, FuelExhausted]


def outcome_to_dict(outcome: RunOutcome) -> Dict[str, Any]:
    data: Dict[str, Any] = {'outcome': type(outcome).__name__, 'steps_used': outcome.steps_used,
                            'cells_used': outcome.cells_used}
    if isinstance(outcome, Halted):
        data['outputs'] = list(outcome.outputs)
    return data


def observation(outcome: RunOutcome) -> Optional[Tuple[str, Tuple[Any, ...]]]:
    """What an outside observer can compare: outputs of a halt, or the fact of rejection."""
    if isinstance(outcome, Halted):
        return ('halted', tuple(outcome.outputs))
    if isinstance(outcome, Rejected):
        return ('rejected', ())
    return None


@dataclass(frozen=True)
class BlackBoxFunction:
    """A fueled procedure from an input tuple to a RunOutcome."""

    arity_in: int
    arity_out: int
    evaluate: Callable[[Tuple[Any, ...], int], RunOutcome] = field(compare=False)
    name: str = "anonymous"

    def __call__(self, inputs: Sequence[Any], fuel: Optional[int] = None) -> RunOutcome:
        inputs = tuple(inputs)
        if len(inputs) != self.arity_in:
            raise ShapeError(f"{self.name} takes {self.arity_in} inputs, got {len(inputs)}")
        return self.evaluate(inputs, resolve_fuel(fuel))

    def then(self, other: "BlackBoxFunction") -> "BlackBoxFunction":
        """Host-level composition: run self, hand its outputs and leftover fuel to other."""
        if self.arity_out != other.arity_in:
            raise ShapeError(f"cannot compose {self.name} ({self.arity_out} out) with {other.name} ({other.arity_in} in)")

        def evaluate(inputs, fuel):
            first = self.evaluate(inputs, fuel)
            if not isinstance(first, Halted):
                return first
            second = other.evaluate(tuple(first.outputs), fuel - first.steps_used)
            if isinstance(second, Halted):
                return Halted(second.outputs, first.steps_used + second.steps_used,
                              max(first.cells_used, second.cells_used))
            if isinstance(second, Rejected):
                return Rejected(first.steps_used + second.steps_used, max(first.cells_used, second.cells_used))
            return FuelExhausted(fuel, max(first.cells_used, second.cells_used))

        return BlackBoxFunction(self.arity_in, other.arity_out, evaluate, f"{other.name}∘{self.name}")

    @classmethod
    def from_function(cls, fn: Callable[..., Tuple[Any, ...]], arity_in: int, arity_out: int,
                      name: str = "host") -> "BlackBoxFunction":
        """Wrap a total host function; it costs one step per call."""

        def evaluate(inputs, fuel):
            if fuel < 1:
                return FuelExhausted(fuel)
            return Halted(tuple(fn(*inputs)), 1)

        return cls(arity_in, arity_out, evaluate, name)


class EquivalenceReport(BaseModel):
    verdict: str
    counterexample: Optional[List[Any]] = None
    left: Optional[Dict[str, Any]] = None
    right: Optional[Dict[str, Any]] = None
    inconclusive: List[List[Any]] = []
    checked: int = 0
    max_len: int
    fuel: int

    @property
    def equal(self) -> bool:
        return self.verdict == "equal"


def _fan_out(fn: Callable[[Any], Any], items: Sequence[Any], workers: Optional[int]) -> List[Any]:
    workers = workers or get_settings().workers
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def behaviorally_equivalent(f: BlackBoxFunction, g: BlackBoxFunction, alphabet: Alphabet,
                            max_len: int, fuel: Optional[int] = None,
                            inputs: Optional[Sequence[Tuple[Any, ...]]] = None,
                            workers: Optional[int] = None) -> EquivalenceReport:
    """Compare f and g on every input tuple of total length <= max_len.

    Inputs where either side runs out of fuel are inconclusive, never counterexamples.
    A caller may pass ``inputs`` to compare over a different domain (e.g. naturals).
    """
    if (f.arity_in, f.arity_out) != (g.arity_in, g.arity_out):
        raise ShapeError(f"arity mismatch: {f.name} is {f.arity_in}->{f.arity_out}, "
                         f"{g.name} is {g.arity_in}->{g.arity_out}")
    fuel = resolve_fuel(fuel)
    cases = list(inputs) if inputs is not None else alphabet.word_tuples(f.arity_in, max_len)
    logger.debug(f"Comparing {f.name} and {g.name} on {len(cases)} inputs (fuel {fuel})")

    results = _fan_out(lambda case: (f(case, fuel), g(case, fuel)), cases, workers)

    inconclusive = []
    for case, (left, right) in zip(cases, results):
        seen_left, seen_right = observation(left), observation(right)
        if seen_left is None or seen_right is None:
            inconclusive.append(list(case))
            continue
        if seen_left != seen_right:
            logger.info(f"Counterexample for {f.name} vs {g.name}: {case}")
            return EquivalenceReport(verdict="counterexample", counterexample=list(case),
                                     left=outcome_to_dict(left), right=outcome_to_dict(right),
                                     inconclusive=inconclusive, checked=len(cases),
                                     max_len=max_len, fuel=fuel)
    return EquivalenceReport(verdict="equal", inconclusive=inconclusive, checked=len(cases),
                             max_len=max_len, fuel=fuel)
