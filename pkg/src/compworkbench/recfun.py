"""Recursive functions: basic functions closed under composition, primitive recursion and mu.

Expressions are immutable trees. Evaluation charges one unit of fuel per node
visit (and per mu candidate), so a mu without a root runs out of fuel instead
of diverging.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

from .core import BlackBoxFunction, FuelExhausted, FuelTank, Halted, RunOutcome, resolve_fuel
from .errors import FormatError, ShapeError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Zero:
    """z(x1..xn) = 0; plain z has n = 1."""
    n: int = 1


@dataclass(frozen=True)
class Succ:
    pass


@dataclass(frozen=True)
class Proj:
    n: int
    i: int


@dataclass(frozen=True)
class Comp:
    g: "RecExpr"
    fs: Tuple["RecExpr", ...]


@dataclass(frozen=True)
class PrimRec:
    """h(x, 0) = f(x); h(x, y+1) = g(x, y, h(x, y))."""
    f: "RecExpr"
    g: "RecExpr"


@dataclass(frozen=True)
class Mu:
    """The least y with f(x, y) = 0."""
    f: "RecExpr"


RecExpr = Union[Zero, Succ, Proj, Comp, PrimRec, Mu]


@lru_cache(maxsize=None)
def arity(e: RecExpr) -> int:
    """Arity of a well-formed expression; raises ShapeError on malformed trees."""
    if isinstance(e, Zero):
        if e.n < 0:
            raise ShapeError("zero arity must be non-negative")
        return e.n
    if isinstance(e, Succ):
        return 1
    if isinstance(e, Proj):
        if not 1 <= e.i <= e.n:
            raise ShapeError(f"projection pi^{e.n}_{e.i} needs 1 <= i <= n")
        return e.n
    if isinstance(e, Comp):
        if not e.fs:
            raise ShapeError("composition needs at least one inner function")
        inner = {arity(f) for f in e.fs}
        if len(inner) != 1:
            raise ShapeError(f"inner functions of a composition disagree on arity: {sorted(inner)}")
        if arity(e.g) != len(e.fs):
            raise ShapeError(f"outer function has arity {arity(e.g)} but receives {len(e.fs)} values")
        return inner.pop()
    if isinstance(e, PrimRec):
        m = arity(e.f)
        if arity(e.g) != m + 2:
            raise ShapeError(f"recursion step must have arity {m + 2}, has {arity(e.g)}")
        return m + 1
    if isinstance(e, Mu):
        m = arity(e.f) - 1
        if m < 0:
            raise ShapeError("mu needs a function of arity at least 1")
        return m
    raise ShapeError(f"not a recursive-function expression: {e!r}")


class _OutOfFuel(Exception):
    pass


def _eval(e: RecExpr, args: Tuple[int, ...], tank: FuelTank) -> int:
    if not tank.burn():
        raise _OutOfFuel()
    if isinstance(e, Zero):
        return 0
    if isinstance(e, Succ):
        return args[0] + 1
    if isinstance(e, Proj):
        return args[e.i - 1]
    if isinstance(e, Comp):
        return _eval(e.g, tuple(_eval(f, args, tank) for f in e.fs), tank)
    if isinstance(e, PrimRec):
        *xs, y = args
        value = _eval(e.f, tuple(xs), tank)
        for k in range(y):
            value = _eval(e.g, (*xs, k, value), tank)
        return value
    y = 0
    while True:
        if not tank.burn():
            raise _OutOfFuel()
        if _eval(e.f, (*args, y), tank) == 0:
            return y
        y += 1


def eval_rec(e: RecExpr, args: Sequence[int], fuel: Optional[int] = None) -> RunOutcome:
    """Evaluate e on args; one unit of fuel per node visit."""
    args = tuple(args)
    if len(args) != arity(e):
        raise ShapeError(f"expression has arity {arity(e)}, got {len(args)} arguments")
    tank = FuelTank(resolve_fuel(fuel))
    try:
        value = _eval(e, args, tank)
    except _OutOfFuel:
        return FuelExhausted(tank.used)
    return Halted((value,), tank.used)


def is_primitive_recursive(e: RecExpr) -> bool:
    if isinstance(e, Mu):
        return False
    if isinstance(e, Comp):
        return is_primitive_recursive(e.g) and all(is_primitive_recursive(f) for f in e.fs)
    if isinstance(e, PrimRec):
        return is_primitive_recursive(e.f) and is_primitive_recursive(e.g)
    return True


def rec_semantics(e: RecExpr) -> BlackBoxFunction:
    return BlackBoxFunction(arity(e), 1, lambda args, fuel: eval_rec(e, args, fuel), format_rf(e))


def ackermann(m: int, n: int, fuel: Optional[int] = None) -> RunOutcome:
    """A(m, n) with an explicit work stack; one unit of fuel per expansion."""
    if m < 0 or n < 0:
        raise ShapeError("ackermann takes naturals")
    tank = FuelTank(resolve_fuel(fuel))
    stack: List[int] = [m]
    deepest = 1
    while stack:
        if not tank.burn():
            return FuelExhausted(tank.used, deepest)
        m = stack.pop()
        if m == 0:
            n += 1
        elif n == 0:
            stack.append(m - 1)
            n = 1
        else:
            stack.append(m - 1)
            stack.append(m)
            n -= 1
        deepest = max(deepest, len(stack))
    return Halted((n,), tank.used, min(deepest, tank.used))


# -- .rf s-expressions --------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_rf(text: str) -> RecExpr:
    tokens = _TOKEN.findall("\n".join(line.split(";", 1)[0] for line in text.splitlines()))
    if not tokens:
        raise FormatError("empty expression")
    position = 0

    def expr() -> RecExpr:
        nonlocal position
        if position >= len(tokens):
            raise FormatError("unexpected end of expression")
        token = tokens[position]
        position += 1
        if token == "z":
            return Zero()
        if token == "s":
            return Succ()
        if token != "(":
            raise FormatError(f"unexpected token {token!r}")
        head = tokens[position] if position < len(tokens) else ")"
        position += 1
        if head in ("proj", "z"):
            numbers = []
            while position < len(tokens) and tokens[position] != ")":
                if not tokens[position].isdigit():
                    raise FormatError(f"{head} takes numbers, got {tokens[position]!r}")
                numbers.append(int(tokens[position]))
                position += 1
            node = _numeric(head, numbers)
        else:
            children = []
            while position < len(tokens) and tokens[position] != ")":
                children.append(expr())
            node = _compound(head, children)
        if position >= len(tokens):
            raise FormatError("missing ')'")
        position += 1
        return node

    result = expr()
    if position != len(tokens):
        raise FormatError(f"trailing tokens after expression: {' '.join(tokens[position:])}")
    try:
        arity(result)
    except ShapeError as e:
        raise FormatError(e.message)
    return result


def _numeric(head: str, numbers: List[int]) -> RecExpr:
    if head == "proj" and len(numbers) == 2:
        return Proj(numbers[0], numbers[1])
    if head == "z" and len(numbers) == 1:
        return Zero(numbers[0])
    raise FormatError(f"malformed ({head} ...)")


def _compound(head: str, children: List[RecExpr]) -> RecExpr:
    if head == "comp" and len(children) >= 2:
        return Comp(children[0], tuple(children[1:]))
    if head == "primrec" and len(children) == 2:
        return PrimRec(children[0], children[1])
    if head == "mu" and len(children) == 1:
        return Mu(children[0])
    raise FormatError(f"malformed ({head} ...) with {len(children)} arguments")


def format_rf(e: RecExpr) -> str:
    if isinstance(e, Zero):
        return "z" if e.n == 1 else f"(z {e.n})"
    if isinstance(e, Succ):
        return "s"
    if isinstance(e, Proj):
        return f"(proj {e.n} {e.i})"
    if isinstance(e, Comp):
        return f"(comp {format_rf(e.g)} {' '.join(format_rf(f) for f in e.fs)})"
    if isinstance(e, PrimRec):
        return f"(primrec {format_rf(e.f)} {format_rf(e.g)})"
    return f"(mu {format_rf(e.f)})"
