"""Resource metering, worst-case curves and growth classes, plus Savitch reachability.

Every check here is empirical: a curve that stays under ``slack * g(n)`` for the
measured n "fits within the measured range"; nothing is proved about larger n.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from .circuits import Circuit, CircuitFamily, circuit_semantics
from .core import (UNARY, Alphabet, BlackBoxFunction, FuelExhausted, Halted, Word, _fan_out,
                   behaviorally_equivalent, resolve_fuel)
from .errors import EquivalenceError, NonTotalError, ResourceError, ShapeError, UnsupportedError
from .recfun import RecExpr, Zero, Succ, Proj, Comp, PrimRec, Mu, rec_semantics
from .regmachine import RegProgram, nat_semantics, reg_semantics, unary_to_nat, nat_to_unary
from .turing import WILD, Configuration, TuringMachine, initial_configuration, run, semantics, step

logger = logging.getLogger(__name__)

RESOURCES = ("time", "space")
Measurable = Union[TuringMachine, RegProgram, RecExpr, Circuit, BlackBoxFunction]


# -- metering -----------------------------------------------------------------------

class ResourceSample(BaseModel):
    machine: str
    inputs: List[Any]
    time: int
    space: int
    complete: bool
    outcome: str


def _unary_words(fn: BlackBoxFunction) -> BlackBoxFunction:
    """Run a function on naturals with unary words at the boundary."""

    def evaluate(words, fuel):
        outcome = fn.evaluate(tuple(unary_to_nat(w) for w in words), fuel)
        if isinstance(outcome, Halted):
            return Halted(tuple(nat_to_unary(v) for v in outcome.outputs), outcome.steps_used, outcome.cells_used)
        return outcome

    return BlackBoxFunction(fn.arity_in, fn.arity_out, evaluate, fn.name)


def as_function(obj: Measurable, naturals: bool = False) -> BlackBoxFunction:
    """The fueled function of any model; register programs and expressions take unary words unless ``naturals``."""
    if isinstance(obj, BlackBoxFunction):
        return obj
    if isinstance(obj, TuringMachine):
        return semantics(obj)
    if isinstance(obj, RegProgram):
        return nat_semantics(obj) if naturals else reg_semantics(obj)
    if isinstance(obj, (Zero, Succ, Proj, Comp, PrimRec, Mu)):
        fn = rec_semantics(obj)
        return fn if naturals else _unary_words(fn)
    if isinstance(obj, Circuit):
        return circuit_semantics(obj)
    raise UnsupportedError(f"cannot meter {type(obj).__name__}")


def default_alphabet(obj: Measurable) -> Alphabet:
    if isinstance(obj, TuringMachine):
        return obj.alphabet
    if isinstance(obj, (RegProgram, Zero, Succ, Proj, Comp, PrimRec, Mu)):
        return UNARY
    return Alphabet.binary()


def _sample(fn: BlackBoxFunction, inputs: Tuple[Any, ...], fuel: int) -> ResourceSample:
    outcome = fn(inputs, fuel)
    return ResourceSample(machine=fn.name, inputs=list(inputs), time=outcome.steps_used,
                          space=outcome.cells_used, complete=not isinstance(outcome, FuelExhausted),
                          outcome=type(outcome).__name__)


def meter(obj: Measurable, inputs: Sequence[Any], fuel: Optional[int] = None) -> ResourceSample:
    """Steps and work cells of one run; ``complete`` is False when fuel ran out."""
    naturals = any(isinstance(v, int) for v in inputs)
    return _sample(as_function(obj, naturals), tuple(inputs), resolve_fuel(fuel))


# -- worst-case curves --------------------------------------------------------------

class WorstCaseCurve(BaseModel):
    machine: str
    resource: str
    points: Dict[int, int]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'n': list(self.points), f'{self.resource}_max': list(self.points.values())})


def _all_samples(obj: Measurable, n_max: int, alphabet: Optional[Alphabet], fuel: Optional[int],
                 workers: Optional[int]) -> List[ResourceSample]:
    fn = as_function(obj)
    alphabet = alphabet or default_alphabet(obj)
    fuel = resolve_fuel(fuel)
    cases = alphabet.word_tuples(fn.arity_in, n_max) if fn.arity_in else [()]
    samples = _fan_out(lambda case: _sample(fn, case, fuel), cases, workers)
    for s in samples:
        if not s.complete:
            raise NonTotalError(f"{fn.name} ran out of fuel on {s.inputs} (fuel {fuel})",
                                {'machine': fn.name, 'input': s.inputs, 'fuel': fuel})
    return samples


def _curve(name: str, resource: str, samples: Iterable[ResourceSample]) -> WorstCaseCurve:
    points: Dict[int, int] = {}
    for s in samples:
        n = sum(len(w) for w in s.inputs)
        points[n] = max(points.get(n, 0), getattr(s, resource))
    return WorstCaseCurve(machine=name, resource=resource, points=dict(sorted(points.items())))


def worst_case(obj: Measurable, resource: str = "time", n_max: int = 4, alphabet: Optional[Alphabet] = None,
               fuel: Optional[int] = None, workers: Optional[int] = None) -> WorstCaseCurve:
    """Maximum of the resource over every input of each total length 0..n_max."""
    if resource not in RESOURCES:
        raise ShapeError(f"resource must be one of {RESOURCES}, got {resource!r}")
    samples = _all_samples(obj, n_max, alphabet, fuel, workers)
    return _curve(as_function(obj).name, resource, samples)


def measure_frame(obj: Measurable, n_max: int, alphabet: Optional[Alphabet] = None,
                  fuel: Optional[int] = None, workers: Optional[int] = None) -> pd.DataFrame:
    """Columns n, time_max, space_max."""
    samples = _all_samples(obj, n_max, alphabet, fuel, workers)
    name = as_function(obj).name
    time_curve, space_curve = _curve(name, "time", samples), _curve(name, "space", samples)
    return time_curve.to_frame().merge(space_curve.to_frame(), on='n')


def circuit_size_curve(family: CircuitFamily, n_max: int, resource: str = "size", n_min: int = 1) -> WorstCaseCurve:
    """Gate count (or depth) of family(n) for n_min..n_max."""
    if resource not in ("size", "depth"):
        raise ShapeError(f"circuit resources are size and depth, got {resource!r}")
    points = {}
    name = "family"
    for n in range(n_min, n_max + 1):
        c = family(n)
        name = c.name
        points[n] = c.size if resource == "size" else c.depth
    return WorstCaseCurve(machine=name, resource=resource, points=points)


def fit_polynomial(curve: WorstCaseCurve, degree: int) -> Tuple[List[float], float]:
    """Least-squares coefficients (highest power first) and the largest absolute residual."""
    xs = np.array(list(curve.points), dtype=float)
    ys = np.array(list(curve.points.values()), dtype=float)
    if len(xs) <= degree:
        raise ShapeError(f"need more than {degree} points to fit degree {degree}")
    coefficients = np.polyfit(xs, ys, degree)
    residual = float(np.max(np.abs(np.polyval(coefficients, xs) - ys)))
    return [float(c) for c in coefficients], residual


# -- growth classes -----------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class GrowthClass:
    form: str
    degree: float = 0.0
    base: float = 2.0
    c: float = 1.0

    def __post_init__(self):
        if self.form not in ("const", "log", "poly", "exp"):
            raise ShapeError(f"unknown growth form {self.form!r}")
        if self.degree < 0 or self.c < 0 or (self.form == "exp" and self.base <= 1):
            raise ShapeError("growth classes need degree >= 0, c >= 0 and base > 1")

    def rank(self) -> Tuple[int, float]:
        if self.form == "const" or (self.form == "poly" and self.degree == 0):
            return (0, 0.0)
        if self.form == "log":
            return (1, 0.0)
        if self.form == "poly":
            return (2, self.degree)
        return (3, self.base)

    def __lt__(self, other: "GrowthClass") -> bool:
        return self.rank() < other.rank()

    def __call__(self, n: int) -> float:
        if self.form == "const":
            return self.c
        if self.form == "log":
            return math.log2(n + 2)
        if self.form == "poly":
            return float(n + 1) ** self.degree
        return self.base ** n

    def __str__(self) -> str:
        return {"const": f"Const({self.c:g})", "log": "Log", "poly": f"Poly({self.degree:g})",
                "exp": f"Exp({self.base:g})"}[self.form]


def Const(c: float = 1.0) -> GrowthClass:
    return GrowthClass("const", c=c)


def Log() -> GrowthClass:
    return GrowthClass("log")


def Poly(degree: float) -> GrowthClass:
    return GrowthClass("poly", degree=degree)


def Exp(base: float = 2.0) -> GrowthClass:
    return GrowthClass("exp", base=base)


class GrowthComparison(BaseModel):
    big_o: bool
    theta: bool


def compare_growth(g1: GrowthClass, g2: GrowthClass) -> GrowthComparison:
    """Symbolic order Const < Log < Poly(d) < Poly(d') < Exp(b) < Exp(b')."""
    return GrowthComparison(big_o=g1.rank() <= g2.rank(), theta=g1.rank() == g2.rank())


class Classification(BaseModel):
    growth: str
    slack: float
    fits: bool
    violated_at: Optional[int] = None
    value: Optional[int] = None
    bound: Optional[float] = None

    @property
    def label(self) -> str:
        return "fits within measured range" if self.fits else f"violated at n={self.violated_at}"


def classify(curve: WorstCaseCurve, g: GrowthClass, slack: float = 1.0) -> Classification:
    """Is curve(n) <= slack * g(n) at every measured n?"""
    if not curve.points:
        raise ShapeError("cannot classify an empty curve")
    for n, value in curve.points.items():
        bound = slack * g(n)
        if value > bound:
            return Classification(growth=str(g), slack=slack, fits=False, violated_at=n, value=value, bound=bound)
    return Classification(growth=str(g), slack=slack, fits=True)


def min_over_registry(registry: Mapping[str, Measurable], resource: str = "time", n_max: int = 4,
                      alphabet: Optional[Alphabet] = None, fuel: Optional[int] = None) -> Tuple[str, WorstCaseCurve]:
    """The cheapest of several implementations of one function (sum over measured n, ties by name)."""
    if not registry:
        raise ShapeError("registry is empty")
    names = sorted(registry)
    first = registry[names[0]]
    alphabet = alphabet or default_alphabet(first)
    for name in names[1:]:
        report = behaviorally_equivalent(as_function(first), as_function(registry[name]), alphabet, n_max, fuel)
        if report.verdict != "equal":
            raise EquivalenceError(f"{names[0]} and {name} compute different functions",
                                   {'counterexample': report.counterexample})
    curves = {name: worst_case(registry[name], resource, n_max, alphabet, fuel) for name in names}
    best = min(names, key=lambda name: (sum(curves[name].points.values()), name))
    logger.info(f"Cheapest in registry by {resource}: {best}")
    return best, curves[best]


# -- reductions ---------------------------------------------------------------------

class ReductionCertificate(BaseModel):
    reduction: str
    degree: float
    slack: float
    certified: bool
    points: Dict[int, int]
    violated_at: Optional[int] = None


def poly_reduction(reduction: Any, degree: float, instances: Iterable[Any], slack: float = 8.0,
                   fuel: Optional[int] = None) -> ReductionCertificate:
    """Meter the steps a reduction's transform burns against slack * (size + 1)^degree.

    ``reduction`` needs ``apply(instance, fuel)`` returning the image and the steps
    burned, and ``size(instance)``. A transform that burns the whole tank is
    recorded at the tank's size.
    """
    points: Dict[int, int] = {}
    for instance in instances:
        _, steps = reduction.apply(instance, fuel)
        n = reduction.size(instance)
        points[n] = max(points.get(n, 0), steps)
    curve = WorstCaseCurve(machine=reduction.name, resource="steps", points=dict(sorted(points.items())))
    verdict = classify(curve, Poly(degree), slack)
    return ReductionCertificate(reduction=reduction.name, degree=degree, slack=slack, certified=verdict.fits,
                                points=curve.points, violated_at=verdict.violated_at)


# -- Savitch ------------------------------------------------------------------------

class SavitchReport(BaseModel):
    machine: str
    input: str
    space_bound: int
    accepts: bool
    universe: int
    time_bound: int
    depth: int
    frames: int
    space_cells: int
    calls: int


def _tape_options(m: TuringMachine, x: Word, s: int) -> List[List[Tuple[Tuple[int, str], ...]]]:
    reach = max(len(x), s)
    written = {g for rule in m.rules for g in rule.action.writes if g != WILD}
    start = initial_configuration(m, (x,))
    per_tape = []
    for i in range(m.tape_count):
        if not any(rule.action.writes[i] != WILD for rule in m.rules):
            per_tape.append([start.tapes[i]])
            continue
        glyphs = sorted(written | set(x) | {m.alphabet.blank}) if i < m.m_in else sorted(written | {m.alphabet.blank})
        per_tape.append([tuple((j, g) for j, g in enumerate(cells) if g != m.alphabet.blank)
                         for cells in itertools.product(glyphs, repeat=reach)])
    return per_tape


def universe_size(m: TuringMachine, x: Word, s: int) -> int:
    """How many configurations ``configuration_universe`` would list, without listing them."""
    reach = max(len(x), s)
    written = {g for rule in m.rules for g in rule.action.writes if g != WILD}
    size = len(m.states) * (reach + 1) ** m.tape_count
    for i in range(m.tape_count):
        if any(rule.action.writes[i] != WILD for rule in m.rules):
            glyphs = written | set(x) | {m.alphabet.blank} if i < m.m_in else written | {m.alphabet.blank}
            size *= len(glyphs) ** reach
    return size


def configuration_universe(m: TuringMachine, x: Word, s: int) -> List[Configuration]:
    """Every configuration with heads within max(|x|, s) cells and tape contents over the glyphs that can appear."""
    reach = max(len(x), s)
    heads = list(itertools.product(range(reach + 1), repeat=m.tape_count))
    return [Configuration(q, tapes, h) for q in m.states for tapes in itertools.product(*_tape_options(m, x, s))
            for h in heads]


def _cells(key: Tuple) -> int:
    """Storage for one configuration: its state, one head per tape and the non-blank cells."""
    _, tapes, heads = key
    return 1 + len(heads) + sum(len(tape) for tape in tapes)


def savitch_reach(m: TuringMachine, x: Word, s: int, time_bound: Optional[int] = None,
                  budget: int = 5000) -> SavitchReport:
    """Middle-first reachability from the initial configuration to an accepting halt.

    CanYield(a, b, t) asks whether b follows a within t steps by trying every
    middle configuration with t/2 steps on each side; the outermost call asks
    for any accepting halt instead of a fixed b. Nothing is remembered between
    calls. ``space_cells`` is the peak over the run of the cells held by the
    live frames: both endpoints, the middle under test and the step counter.
    """
    if m.oracle_port is not None or m.m_in != 1:
        raise UnsupportedError(f"savitch_reach needs a plain one-input machine, got {m.name}")
    if s < 1:
        raise ShapeError("space bound must be at least 1")
    size = universe_size(m, x, s)
    if size > budget:
        raise ResourceError(f"{size} configurations exceed the budget of {budget}",
                            {'universe': size, 'budget': budget})
    keys = [c.key() for c in configuration_universe(m, x, s)]
    total = time_bound if time_bound is not None else len(keys)
    levels = max(0, math.ceil(math.log2(total))) if total > 1 else 0
    horizon = 2 ** levels

    def moves(key) -> List[Tuple]:
        return [c.key() for c in step(m, Configuration(*key))]

    reach = max(len(x), s)

    def accepting(key) -> bool:
        inside = all(h <= reach for h in key[2]) and all(j < reach for tape in key[1] for j, _ in tape)
        return inside and not moves(key) and m.is_accepting(key[0])

    stats = {'depth': 0, 'calls': 0, 'live': 0, 'peak': 0}

    def hold(cells: int):
        stats['live'] += cells
        stats['peak'] = max(stats['peak'], stats['live'])

    def can_yield(a, b, t: int, depth: int) -> bool:
        """b is None for "some accepting halt"."""
        stats['calls'] += 1
        stats['depth'] = max(stats['depth'], depth)
        frame = 1 + _cells(a) + (_cells(b) if b is not None else 0)
        hold(frame)
        try:
            if t <= 1:
                if b is None:
                    return accepting(a) or (t == 1 and any(accepting(c) for c in moves(a)))
                return a == b or (t == 1 and b in moves(a))
            half = t // 2
            for mid in keys:
                hold(_cells(mid))
                found = can_yield(a, mid, t - half, depth + 1) and can_yield(mid, b, half, depth + 1)
                stats['live'] -= _cells(mid)
                if found:
                    return True
            return False
        finally:
            stats['live'] -= frame

    start = initial_configuration(m, (x,)).key()
    if start not in set(keys):
        raise ShapeError("the initial configuration lies outside the space bound")
    accepts = can_yield(start, None, horizon, 1)
    depth = stats['depth']
    report = SavitchReport(machine=m.name, input=x, space_bound=s, accepts=accepts, universe=len(keys),
                           time_bound=horizon, depth=depth, frames=depth, space_cells=stats['peak'],
                           calls=stats['calls'])
    logger.debug(f"Savitch on {m.name}({x!r}), s={s}: {report.model_dump()}")
    return report


def bfs_expansions(m: TuringMachine, x: Word, fuel: Optional[int] = None) -> int:
    """Configurations a breadth-first search of m's computation tree expands before it stops."""
    return run(m, (x,), fuel).steps_used
