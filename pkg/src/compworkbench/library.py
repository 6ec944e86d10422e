"""Reference corpus: named machines, programs, expressions and circuits.

Everything here is small enough to check exhaustively at desk scale and is
shared by the tests, the cli and the reduction/complexity harnesses.
"""

from typing import Dict, List, Tuple

import numpy as np

from .circuits import Circuit, Gate, compose_circuit, tensor_circuit
from .core import Alphabet
from .errors import ShapeError
from .recfun import Comp, Mu, PrimRec, Proj, RecExpr, Succ, Zero
from .regmachine import RegProgram, parse_rm
from .turing import WILD, Action, OraclePort, Rule, TuringMachine, identity_machine

BINARY = Alphabet.binary()


def _rule(state: str, reads, nxt: str, writes, moves) -> Rule:
    return Rule(state, tuple(reads), Action(nxt, tuple(writes), tuple(moves)))


# -- Turing machines ---------------------------------------------------------------

def append_glyph(glyph: str, alphabet: Alphabet = BINARY) -> TuringMachine:
    """Copies its input and writes one more glyph at the end."""
    rules = [_rule("copy", (g, WILD), "copy", (WILD, g), ("R", "R")) for g in alphabet.symbols]
    rules.append(_rule("copy", (alphabet.blank, WILD), "accept", (WILD, glyph), ("S", "S")))
    return TuringMachine(alphabet, 1, 1, "copy", tuple(rules), work_tapes=0, accept={"accept"},
                         name=f"append-{glyph}")


def erase(alphabet: Alphabet = BINARY) -> TuringMachine:
    """Ignores its input and outputs the empty word."""
    return TuringMachine(alphabet, 1, 1, "accept", (), work_tapes=0, accept={"accept"}, name="erase")


def self_loop(alphabet: Alphabet = BINARY, m_in: int = 1, n_out: int = 1) -> TuringMachine:
    """Never halts on any input."""
    k = m_in + n_out
    rule = _rule("loop", [WILD] * k, "loop", [WILD] * k, ["S"] * k)
    return TuringMachine(alphabet, m_in, n_out, "loop", (rule,), work_tapes=0, name="self-loop")


def always_reject(alphabet: Alphabet = BINARY, m_in: int = 1, n_out: int = 1) -> TuringMachine:
    return TuringMachine(alphabet, m_in, n_out, "reject", (), work_tapes=0, reject={"reject"},
                         name="always-reject")


def always_accept(alphabet: Alphabet = BINARY, m_in: int = 1, n_out: int = 0) -> TuringMachine:
    return TuringMachine(alphabet, m_in, n_out, "accept", (), work_tapes=0, accept={"accept"},
                         name="always-accept")


def contains_one() -> TuringMachine:
    """NTM: on each '1' it may keep scanning or guess that it has found its witness."""
    rules = (
        _rule("scan", ("0",), "scan", (WILD,), ("R",)),
        _rule("scan", ("1",), "scan", (WILD,), ("R",)),
        _rule("scan", ("1",), "accept", (WILD,), ("S",)),
    )
    return TuringMachine(BINARY, 1, 0, "scan", rules, work_tapes=0, accept={"accept"}, name="contains-1")


def ends_with_one() -> TuringMachine:
    """NTM: guesses which '1' is the last glyph and checks the blank after it."""
    rules = (
        _rule("scan", ("0",), "scan", (WILD,), ("R",)),
        _rule("scan", ("1",), "scan", (WILD,), ("R",)),
        _rule("scan", ("1",), "check", (WILD,), ("R",)),
        _rule("check", ("_",), "accept", (WILD,), ("S",)),
    )
    return TuringMachine(BINARY, 1, 0, "scan", rules, work_tapes=0, accept={"accept"}, name="ends-with-1")


def one_step_accept() -> TuringMachine:
    """NTM that either accepts after one step or wanders off and rejects."""
    rules = (
        _rule("start", (WILD,), "accept", (WILD,), ("S",)),
        _rule("start", (WILD,), "reject", (WILD,), ("R",)),
    )
    return TuringMachine(BINARY, 1, 0, "start", rules, work_tapes=0, accept={"accept"}, reject={"reject"},
                         name="one-step")


def parity_recognizer(even: bool) -> TuringMachine:
    """Accepts words of the chosen length parity and runs forever on the others."""
    final_ok, final_bad = ("even", "odd") if even else ("odd", "even")
    rules = []
    for g in BINARY.symbols:
        rules.append(_rule("even", (g,), "odd", (WILD,), ("R",)))
        rules.append(_rule("odd", (g,), "even", (WILD,), ("R",)))
    rules.append(_rule(final_ok, ("_",), "accept", (WILD,), ("S",)))
    rules.append(_rule(final_bad, ("_",), "spin", (WILD,), ("S",)))
    rules.append(_rule("spin", (WILD,), "spin", (WILD,), ("S",)))
    return TuringMachine(BINARY, 1, 0, "even", tuple(rules), work_tapes=0, accept={"accept"},
                         name="even-length" if even else "odd-length")


def binary_successor() -> TuringMachine:
    """Increments a little-endian binary number, using the work tape as scratch for the carry walk."""
    rules = [
        _rule("carry", ("1", WILD, WILD), "carry", (WILD, "1", "0"), ("R", "R", "R")),
        _rule("carry", ("0", WILD, WILD), "copy", (WILD, "1", "1"), ("R", "R", "R")),
        _rule("carry", ("_", WILD, WILD), "accept", (WILD, "1", "1"), ("S", "S", "S")),
    ]
    for g in BINARY.symbols:
        rules.append(_rule("copy", (g, WILD, WILD), "copy", (WILD, WILD, g), ("R", "S", "R")))
    rules.append(_rule("copy", ("_", WILD, WILD), "accept", (WILD, WILD, WILD), ("S", "S", "S")))
    return TuringMachine(BINARY, 1, 1, "carry", tuple(rules), work_tapes=1, accept={"accept"},
                         name="binary-successor")


def branching_chain() -> TuringMachine:
    """NTM used for space-scaling runs on inputs 1^s.

    On every '1' it either steps right at once or pauses for one step first; the
    two branches reconverge, so the configuration graph stays small while the
    tree of computation paths grows exponentially with s.
    """
    rules = (
        _rule("go", ("1",), "go", (WILD,), ("R",)),
        _rule("go", ("1",), "pause", (WILD,), ("S",)),
        _rule("pause", ("1",), "go", (WILD,), ("R",)),
        _rule("go", ("_",), "accept", (WILD,), ("S",)),
    )
    return TuringMachine(BINARY, 1, 0, "go", rules, work_tapes=0, accept={"accept"}, name="branching-chain")


def turing_corpus() -> Dict[str, TuringMachine]:
    """1-in/1-out deterministic machines over the binary alphabet."""
    return {
        "id": identity_machine(1, BINARY),
        "append-0": append_glyph("0"),
        "append-1": append_glyph("1"),
        "erase": erase(),
        "successor": binary_successor(),
        "self-loop": self_loop(),
        "always-reject": always_reject(),
    }


def decision_corpus() -> Dict[str, TuringMachine]:
    """Decision machines (1 input, no outputs), including nondeterministic ones."""
    return {
        "contains-1": contains_one(),
        "ends-with-1": ends_with_one(),
        "one-step": one_step_accept(),
        "even-length": parity_recognizer(True),
        "always-accept": always_accept(),
        "branching-chain": branching_chain(),
    }


def oracle_relay(alphabet: Alphabet = BINARY) -> TuringMachine:
    """Hands its input to the oracle in one query and copies the answer to the output."""
    rules = [_rule("got", (g, WILD), "got", (WILD, g), ("R", "R")) for g in alphabet.symbols]
    rules.append(_rule("got", (alphabet.blank, WILD), "accept", (WILD, WILD), ("S", "S")))
    return TuringMachine(alphabet, 1, 1, "ask", tuple(rules), work_tapes=0, accept={"accept"},
                         oracle_port=OraclePort(0, "ask", "got"), name="oracle-relay")


# -- register programs ---------------------------------------------------------------

def _rm(name: str, text: str) -> RegProgram:
    return parse_rm(text, name=name)


def constant_program(k: int) -> RegProgram:
    """Literal instruction set only: Y1 = k."""
    lines = ["inputs", "outputs Y1", "Y1 = 0"] + ["Y1 = Y1 + 1"] * k
    return _rm(f"const-{k}", "\n".join(lines))


def successor_program() -> RegProgram:
    return _rm("successor", """
inputs X1
outputs Y1
loop: if X1 = 0 goto done
X1 = X1 - 1
Y1 = Y1 + 1
if W1 = 0 goto loop
done: Y1 = Y1 + 1
""")


def identity_program(n: int = 1) -> RegProgram:
    """Identity wiring: moves each X_i into Y_i."""
    lines = [f"inputs {' '.join(f'X{i}' for i in range(1, n + 1))}",
             f"outputs {' '.join(f'Y{i}' for i in range(1, n + 1))}"]
    for i in range(1, n + 1):
        lines += [f"move{i}: if X{i} = 0 goto next{i}", f"X{i} = X{i} - 1", f"Y{i} = Y{i} + 1",
                  f"if W0 = 0 goto move{i}", f"next{i}:"]
    return _rm(f"id-wiring-{n}", "\n".join(lines))


def add_program() -> RegProgram:
    return _rm("add", """
inputs X1 X2
outputs Y1
first: if X1 = 0 goto second
X1 = X1 - 1
Y1 = Y1 + 1
if W1 = 0 goto first
second: if X2 = 0 goto done
X2 = X2 - 1
Y1 = Y1 + 1
if W1 = 0 goto second
done:
""")


def mul_program() -> RegProgram:
    return _rm("mul", """
inputs X1 X2
outputs Y1
outer: if X1 = 0 goto done
X1 = X1 - 1
inner: if X2 = 0 goto restore
X2 = X2 - 1
Y1 = Y1 + 1
W2 = W2 + 1
if W1 = 0 goto inner
restore: if W2 = 0 goto outer
W2 = W2 - 1
X2 = X2 + 1
if W1 = 0 goto restore
done:
""")


def monus_program() -> RegProgram:
    """max(X1 - X2, 0)."""
    return _rm("monus", """
inputs X1 X2
outputs Y1
copy: if X1 = 0 goto sub
X1 = X1 - 1
Y1 = Y1 + 1
if W1 = 0 goto copy
sub: if X2 = 0 goto done
X2 = X2 - 1
Y1 = Y1 - 1
if W1 = 0 goto sub
done:
""")


def copy_direct_program() -> RegProgram:
    return _rm("copy-direct", """
inputs X1
outputs Y1
loop: if X1 = 0 goto done
X1 = X1 - 1
Y1 = Y1 + 1
if W9 = 0 goto loop
done:
""")


def copy_via_scratch_program() -> RegProgram:
    """Same function as copy-direct, computed by a different algorithm (two passes)."""
    return _rm("copy-via-scratch", """
inputs X1
outputs Y1
park: if X1 = 0 goto unpark
X1 = X1 - 1
W1 = W1 + 1
if W9 = 0 goto park
unpark: if W1 = 0 goto done
W1 = W1 - 1
Y1 = Y1 + 1
if W9 = 0 goto unpark
done:
""")


def register_corpus() -> Dict[str, RegProgram]:
    return {
        "const-2": constant_program(2),
        "successor": successor_program(),
        "id-wiring": identity_program(1),
        "add": add_program(),
        "mul": mul_program(),
        "monus": monus_program(),
        "copy-direct": copy_direct_program(),
        "copy-via-scratch": copy_via_scratch_program(),
    }


# -- recursive-function expressions ----------------------------------------------------

def constant_expr(k: int, arity: int = 1) -> RecExpr:
    e: RecExpr = Zero(arity)
    for _ in range(k):
        e = Comp(Succ(), (e,))
    return e


ADD: RecExpr = PrimRec(Proj(1, 1), Comp(Succ(), (Proj(3, 3),)))
MUL: RecExpr = PrimRec(Zero(1), Comp(ADD, (Proj(3, 3), Proj(3, 1))))
PRED: RecExpr = PrimRec(Zero(0), Proj(2, 1))
MONUS: RecExpr = PrimRec(Proj(1, 1), Comp(PRED, (Proj(3, 3),)))
ABS_DIFF: RecExpr = Comp(ADD, (MONUS, Comp(MONUS, (Proj(2, 2), Proj(2, 1)))))
CONST_1: RecExpr = constant_expr(1)


def distance_to(k: int) -> RecExpr:
    """f(y) = |y - k|."""
    return Comp(ABS_DIFF, (Proj(1, 1), constant_expr(k)))


def recfun_corpus() -> Dict[str, RecExpr]:
    return {
        "add": ADD,
        "mul": MUL,
        "pred": PRED,
        "monus": MONUS,
        "abs-diff": ABS_DIFF,
        "const-1": CONST_1,
        "root-of-distance-3": Mu(distance_to(3)),
    }


# -- circuits ------------------------------------------------------------------------

def _xor_gates(a: int, b: int, fresh: int) -> Tuple[List[Gate], int, int]:
    """Four NANDs and three FANOUTs computing a xor b; returns gates, output wire, next free wire."""
    a1, a2, b1, b2, n, n1, n2, l, r, out = range(fresh, fresh + 10)
    gates = [
        Gate("FANOUT", (a,), (a1, a2)),
        Gate("FANOUT", (b,), (b1, b2)),
        Gate("NAND", (a1, b1), (n,)),
        Gate("FANOUT", (n,), (n1, n2)),
        Gate("NAND", (a2, n1), (l,)),
        Gate("NAND", (b2, n2), (r,)),
        Gate("NAND", (l, r), (out,)),
    ]
    return gates, out, fresh + 10


def xor_circuit() -> Circuit:
    gates, out, _ = _xor_gates(0, 1, 2)
    return Circuit((1, 1), (1,), (0, 1), (out,), tuple(gates), name="xor")


def and_circuit() -> Circuit:
    return Circuit((1, 1), (1,), (0, 1), (2,), (Gate("AND", (0, 1), (2,)),), name="and")


def half_adder() -> Circuit:
    """(a, b) -> (a xor b, a and b)."""
    spread = Circuit((1, 1), (1, 1, 1, 1), (0, 1), (2, 4, 3, 5),
                     (Gate("FANOUT", (0,), (2, 3)), Gate("FANOUT", (1,), (4, 5))), name="spread")
    adder = compose_circuit(spread, tensor_circuit(xor_circuit(), and_circuit()))
    return Circuit(adder.in_bundles, adder.out_bundles, adder.input_wires, adder.output_wires,
                   adder.gates, name="half-adder")


def parity_family(n: int) -> Circuit:
    """Odd parity of an n-bit bundle as a chain of xor gadgets."""
    if n < 1:
        raise ShapeError("parity needs at least one input bit")
    gates: List[Gate] = []
    acc, fresh = 0, n
    for i in range(1, n):
        more, acc, fresh = _xor_gates(acc, i, fresh)
        gates.extend(more)
    return Circuit((n,), (1,), tuple(range(n)), (acc,), tuple(gates), name=f"parity-{n}")


def random_circuit(width: int, gates: int, seed: int = 0) -> Circuit:
    """A width->width circuit of random two-input gates.

    Each gate consumes two pool wires, fans one of them out so a copy returns to
    the pool, and adds its own output; the pool stays at ``width`` wires.
    """
    if width < 2:
        raise ShapeError("random circuits need at least two wires")
    rng = np.random.default_rng(seed)
    pool = list(range(width))
    fresh = width
    out: List[Gate] = []
    for _ in range(gates):
        i, j = (int(k) for k in rng.choice(len(pool), size=2, replace=False))
        x, y = pool[i], pool[j]
        kind = str(rng.choice(["AND", "OR", "NAND", "NOR"]))
        keep, feed, z = fresh, fresh + 1, fresh + 2
        fresh += 3
        out.append(Gate("FANOUT", (x,), (keep, feed)))
        out.append(Gate(kind, (feed, y), (z,)))
        pool[i], pool[j] = keep, z
    return Circuit((width,), (width,), tuple(range(width)), tuple(pool), tuple(out),
                   name=f"random-{width}x{gates}@{seed}")


def circuit_corpus() -> Dict[str, Circuit]:
    return {
        "xor": xor_circuit(),
        "and": and_circuit(),
        "half-adder": half_adder(),
        "parity-3": parity_family(3),
        "random-4x6": random_circuit(4, 6, seed=7),
    }
