"""Feedforward Boolean circuits over wire bundles.

Wires are integers. Every wire has exactly one source (a circuit input or a gate
output) and at most one consumer (a gate input or a circuit output); copying a
signal takes an explicit FANOUT gate. Wires nobody consumes are discarded.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .core import BlackBoxFunction, FuelExhausted, Halted, Word
from .errors import FormatError, ShapeError

logger = logging.getLogger(__name__)

LOGIC = {
    "AND": (2, lambda a, b: a & b),
    "OR": (2, lambda a, b: a | b),
    "NAND": (2, lambda a, b: 1 - (a & b)),
    "NOR": (2, lambda a, b: 1 - (a | b)),
    "NOT": (1, lambda a: 1 - a),
}
GATE_KINDS = tuple(LOGIC) + ("FANOUT",)


@dataclass(frozen=True)
class Gate:
    kind: str
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]

    def text(self) -> str:
        return f"gate {self.kind} {' '.join(map(str, self.inputs))} -> {' '.join(map(str, self.outputs))}"


@dataclass(frozen=True)
class Circuit:
    in_bundles: Tuple[int, ...]
    out_bundles: Tuple[int, ...]
    input_wires: Tuple[int, ...]
    output_wires: Tuple[int, ...]
    gates: Tuple[Gate, ...] = ()
    name: str = field(default="circuit", compare=False)

    def __post_init__(self):
        for attr in ("in_bundles", "out_bundles", "input_wires", "output_wires", "gates"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        if any(w < 0 for w in self.in_bundles + self.out_bundles):
            raise ShapeError("bundle widths must be non-negative")
        if sum(self.in_bundles) != len(self.input_wires):
            raise ShapeError(f"{self.name}: input bundles {self.in_bundles} need {sum(self.in_bundles)} wires")
        if sum(self.out_bundles) != len(self.output_wires):
            raise ShapeError(f"{self.name}: output bundles {self.out_bundles} need {sum(self.out_bundles)} wires")

        source: Dict[int, Optional[int]] = {}
        for w in self.input_wires:
            if w in source:
                raise ShapeError(f"{self.name}: wire {w} has two sources")
            source[w] = None
        for index, gate in enumerate(self.gates):
            if gate.kind not in GATE_KINDS:
                raise ShapeError(f"{self.name}: unknown gate kind {gate.kind}")
            want_in, want_out = (1, None) if gate.kind == "FANOUT" else (LOGIC[gate.kind][0], 1)
            if len(gate.inputs) != want_in or (want_out and len(gate.outputs) != want_out) \
                    or (gate.kind == "FANOUT" and len(gate.outputs) < 2):
                raise ShapeError(f"{self.name}: malformed {gate.text()}")
            for w in gate.outputs:
                if w in source:
                    raise ShapeError(f"{self.name}: wire {w} has two sources")
                source[w] = index

        consumed = set()
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self.gates)))
        for index, gate in enumerate(self.gates):
            for w in gate.inputs:
                if w not in source:
                    raise ShapeError(f"{self.name}: gate input wire {w} is not driven")
                if w in consumed:
                    raise ShapeError(f"{self.name}: wire {w} is consumed twice; use FANOUT")
                consumed.add(w)
                if source[w] is not None:
                    graph.add_edge(source[w], index)
        for w in self.output_wires:
            if w not in source:
                raise ShapeError(f"{self.name}: output wire {w} is not driven")
            if w in consumed:
                raise ShapeError(f"{self.name}: wire {w} is consumed twice; use FANOUT")
            consumed.add(w)
        if not nx.is_directed_acyclic_graph(graph):
            raise ShapeError(f"{self.name}: circuits must be acyclic")
        object.__setattr__(self, '_graph', graph)
        object.__setattr__(self, '_order', tuple(nx.lexicographical_topological_sort(graph)))

    @property
    def graph(self) -> nx.DiGraph:
        return self._graph

    @property
    def wires(self) -> List[int]:
        return list(self.input_wires) + [w for g in self.gates for w in g.outputs]

    @property
    def size(self) -> int:
        """Logic gates; FANOUT is wiring and costs nothing."""
        return sum(1 for g in self.gates if g.kind != "FANOUT")

    @property
    def depth(self) -> int:
        """Logic gates on the longest input-to-output path."""
        level: Dict[int, int] = {}
        for index in self._order:
            gate = self.gates[index]
            before = max((level[p] for p in self._graph.predecessors(index)), default=0)
            level[index] = before + (0 if gate.kind == "FANOUT" else 1)
        return max(level.values(), default=0)

    def gate_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for g in self.gates:
            counts[g.kind] = counts.get(g.kind, 0) + 1
        return counts


def _split(bits: Sequence[int], widths: Sequence[int]) -> Tuple[Word, ...]:
    out, at = [], 0
    for w in widths:
        out.append("".join(str(b) for b in bits[at:at + w]))
        at += w
    return tuple(out)


def eval_circuit(c: Circuit, inputs: Sequence[Word]) -> Tuple[Word, ...]:
    """Evaluate in topological order; total for every well-formed circuit."""
    if len(inputs) != len(c.in_bundles):
        raise ShapeError(f"{c.name} takes {len(c.in_bundles)} bundles, got {len(inputs)}")
    values: Dict[int, int] = {}
    bits = "".join(inputs)
    for word, width in zip(inputs, c.in_bundles):
        if len(word) != width or set(word) - {"0", "1"}:
            raise ShapeError(f"{c.name}: expected a {width}-bit word, got {word!r}")
    for w, b in zip(c.input_wires, bits):
        values[w] = int(b)
    for index in c._order:
        gate = c.gates[index]
        args = [values[w] for w in gate.inputs]
        if gate.kind == "FANOUT":
            for w in gate.outputs:
                values[w] = args[0]
        else:
            values[gate.outputs[0]] = LOGIC[gate.kind][1](*args)
    return _split([values[w] for w in c.output_wires], c.out_bundles)


def circuit_semantics(c: Circuit) -> BlackBoxFunction:
    """Evaluation as a fueled function; one step per logic gate."""

    def evaluate(inputs, fuel):
        if c.size > fuel:
            return FuelExhausted(fuel)
        return Halted(eval_circuit(c, inputs), c.size)

    return BlackBoxFunction(len(c.in_bundles), len(c.out_bundles), evaluate, c.name)


def bit_inputs(widths: Sequence[int]) -> Iterator[Tuple[Word, ...]]:
    """Every assignment to the given bundles, in counting order."""
    total = sum(widths)
    for n in range(2 ** total):
        bits = format(n, f"0{total}b") if total else ""
        yield _split([int(b) for b in bits], widths)


def truth_table(c: Circuit) -> Dict[Tuple[Word, ...], Tuple[Word, ...]]:
    return {inputs: eval_circuit(c, inputs) for inputs in bit_inputs(c.in_bundles)}


def same_function(c1: Circuit, c2: Circuit) -> bool:
    """Exhaustive extensional equality."""
    if c1.in_bundles != c2.in_bundles or c1.out_bundles != c2.out_bundles:
        return False
    return all(eval_circuit(c1, x) == eval_circuit(c2, x) for x in bit_inputs(c1.in_bundles))


# -- constructions ------------------------------------------------------------------

def _relabel(c: Circuit, mapping: Callable[[int], int]) -> Tuple[Tuple[int, ...], Tuple[int, ...], List[Gate]]:
    gates = [Gate(g.kind, tuple(map(mapping, g.inputs)), tuple(map(mapping, g.outputs))) for g in c.gates]
    return tuple(map(mapping, c.input_wires)), tuple(map(mapping, c.output_wires)), gates


def _next_wire(c: Circuit) -> int:
    return max(c.wires, default=-1) + 1


def identity_circuit(bundles: Sequence[int]) -> Circuit:
    """Plain wires."""
    wires = tuple(range(sum(bundles)))
    return Circuit(tuple(bundles), tuple(bundles), wires, wires, name=f"wires{tuple(bundles)}")


def compose_circuit(c1: Circuit, c2: Circuit) -> Circuit:
    """c2 after c1: c1's output wires feed c2's input wires."""
    if c1.out_bundles != c2.in_bundles:
        raise ShapeError(f"cannot attach {c1.name} {c1.out_bundles} to {c2.name} {c2.in_bundles}")
    offset = _next_wire(c1)
    splice = dict(zip(c2.input_wires, c1.output_wires))
    _, outputs, gates = _relabel(c2, lambda w: splice.get(w, w + offset))
    return Circuit(c1.in_bundles, c2.out_bundles, c1.input_wires, outputs,
                   c1.gates + tuple(gates), name=f"{c2.name}∘{c1.name}")


def tensor_circuit(c1: Circuit, c2: Circuit) -> Circuit:
    """The two circuits side by side."""
    offset = _next_wire(c1)
    inputs, outputs, gates = _relabel(c2, lambda w: w + offset)
    return Circuit(c1.in_bundles + c2.in_bundles, c1.out_bundles + c2.out_bundles,
                   c1.input_wires + inputs, c1.output_wires + outputs, c1.gates + tuple(gates),
                   name=f"{c1.name}⊗{c2.name}")


def twist_circuit(b1: Sequence[int], b2: Sequence[int]) -> Circuit:
    """Crosses the first block of bundles over the second."""
    n1 = sum(b1)
    wires = tuple(range(n1 + sum(b2)))
    return Circuit(tuple(b1) + tuple(b2), tuple(b2) + tuple(b1), wires, wires[n1:] + wires[:n1],
                   name=f"twist{tuple(b1)},{tuple(b2)}")


def nand_synthesize(c: Circuit) -> Circuit:
    """Gate-local rewrite into NAND and FANOUT only."""
    fresh = _next_wire(c)
    gates: List[Gate] = []

    def wire() -> int:
        nonlocal fresh
        fresh += 1
        return fresh - 1

    def negate(x: int, out: Optional[int] = None) -> int:
        a, b = wire(), wire()
        out = wire() if out is None else out
        gates.append(Gate("FANOUT", (x,), (a, b)))
        gates.append(Gate("NAND", (a, b), (out,)))
        return out

    for g in c.gates:
        if g.kind in ("NAND", "FANOUT"):
            gates.append(g)
        elif g.kind == "NOT":
            negate(g.inputs[0], g.outputs[0])
        elif g.kind == "AND":
            t = wire()
            gates.append(Gate("NAND", g.inputs, (t,)))
            negate(t, g.outputs[0])
        elif g.kind == "OR":
            gates.append(Gate("NAND", (negate(g.inputs[0]), negate(g.inputs[1])), g.outputs))
        else:  # NOR
            t = wire()
            gates.append(Gate("NAND", (negate(g.inputs[0]), negate(g.inputs[1])), (t,)))
            negate(t, g.outputs[0])
    return Circuit(c.in_bundles, c.out_bundles, c.input_wires, c.output_wires, tuple(gates),
                   name=f"nand({c.name})")


CircuitFamily = Callable[[int], Circuit]


# -- netlist text -------------------------------------------------------------------

def serialize_ckt(c: Circuit) -> str:
    lines = [
        f"inputs {' '.join(map(str, c.in_bundles))} : {' '.join(map(str, c.input_wires))}".replace("  ", " "),
        f"outputs {' '.join(map(str, c.out_bundles))} : {' '.join(map(str, c.output_wires))}".replace("  ", " "),
    ]
    lines += [g.text() for g in c.gates]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _ints(text: str, number: int) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split())
    except ValueError:
        raise FormatError(f"expected wire numbers, got {text!r}", number)


def parse_ckt(text: str, name: str = "circuit") -> Circuit:
    """Netlist lines: ``inputs <widths> : <wires>``, ``outputs ...`` and ``gate <KIND> <in> -> <out>``."""
    bundles: Dict[str, Tuple[Tuple[int, ...], Tuple[int, ...]]] = {}
    gates: List[Gate] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head in ("inputs", "outputs"):
            widths, colon, wires = rest.partition(":")
            if not colon:
                raise FormatError(f"{head} line needs '<widths> : <wires>'", number)
            bundles[head] = (_ints(widths, number), _ints(wires, number))
        elif head == "gate":
            kind, _, wiring = rest.strip().partition(" ")
            left, arrow, right = wiring.partition("->")
            if not arrow:
                raise FormatError("gate line needs '->'", number)
            gates.append(Gate(kind.upper(), _ints(left, number), _ints(right, number)))
        else:
            raise FormatError(f"unrecognized line {line!r}", number)
    for head in ("inputs", "outputs"):
        if head not in bundles:
            raise FormatError(f"missing '{head}' line")
    try:
        return Circuit(bundles["inputs"][0], bundles["outputs"][0], bundles["inputs"][1],
                       bundles["outputs"][1], tuple(gates), name=name)
    except ShapeError as e:
        raise FormatError(e.message)
