"""Command line entry point: every module over the text file formats.

Artifacts (machine texts, DIMACS, CSV, JSON reports) go to standard output and
are byte-deterministic; logs go to standard error. Exit status is 0 on success,
1 on domain errors (a JSON error object on standard error) and 2 on usage errors.
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from .algorithms import normalize
from .circuits import compose_circuit, eval_circuit, nand_synthesize, parse_ckt, serialize_ckt, tensor_circuit
from .complexity import measure_frame, poly_reduction, savitch_reach
from .computability import (Reduction, candidate_deciders, check_reduction, diagonal_construct, dovetail_decider,
                            empty_to_equiv, halt_to_nonempty, halt_to_print42, halt_to_rice, rice_transform)
from .config import get_settings
from .core import Alphabet, Halted, Rejected, behaviorally_equivalent, outcome_to_dict, resolve_fuel
from .encodings import godel_decode, godel_number, nat_string_codec, tuple_codec
from .errors import FormatError, ShapeError, UnreadableFileError, WorkbenchError
from .kolmogorov import SizeBudget, compressibility_report, estimate_k
from .library import always_reject, decision_corpus, turing_corpus
from .logic import cook_levin_encode, emit_dimacs, emit_sidecar, halt_formula, parse_dimacs, solve
from .recfun import ackermann, eval_rec, parse_rf
from .regmachine import compose_reg, parse_rm, run_reg, serialize_rm, tensor_reg
from .turing import compose, determinize, parse_tm, run, semantics, serialize_tm, tensor

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
_EXTENSIONS = ('.tm', '.rm', '.rf', '.ckt')


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so dispatch keeps control of the status."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"usage-error: {message}\n")
        raise _UsageError(message)


class _UsageError(Exception):
    pass


# -- file loading -------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding='utf-8') as handle:
            return handle.read()
    except OSError as e:
        raise UnreadableFileError(f"cannot read {path}: {e.strerror}", {'path': path})


def _kind(path: str) -> str:
    ext = os.path.splitext(path)[1]
    if ext not in _EXTENSIONS:
        raise FormatError(f"unknown file type {ext or '(none)'}; expected one of {', '.join(_EXTENSIONS)}")
    return ext


def load_model(path: str):
    """Parse a .tm, .rm, .rf or .ckt file by its extension."""
    ext, text = _kind(path), _read(path)
    name = os.path.splitext(os.path.basename(path))[0]
    if ext == '.tm':
        return parse_tm(text, name=name)
    if ext == '.rm':
        return parse_rm(text, name=name)
    if ext == '.rf':
        return parse_rf(text)
    return parse_ckt(text, name=name)


def _naturals(values: Sequence[str]) -> List[int]:
    try:
        return [int(v) for v in values]
    except ValueError:
        raise ShapeError(f"register and recursive-function inputs are naturals, got {list(values)}")


def _write(text: str):
    sys.stdout.write(text)
    if text and not text.endswith("\n"):
        sys.stdout.write("\n")


def _json(data: Any):
    _write(json.dumps(data, indent=2, sort_keys=False))


def _serialize(model) -> str:
    if hasattr(model, 'rules'):
        return serialize_tm(model)
    if hasattr(model, 'instructions'):
        return serialize_rm(model)
    return serialize_ckt(model)


# -- subcommands --------------------------------------------------------------------

def cmd_run(args) -> int:
    ext = _kind(args.file)
    model = load_model(args.file)
    fuel = resolve_fuel(args.fuel)
    if ext == '.tm':
        outcome = run(model, tuple(args.input), fuel)
    elif ext == '.rm':
        outcome = run_reg(model, _naturals(args.input), fuel)
    elif ext == '.rf':
        outcome = eval_rec(model, _naturals(args.input), fuel)
    else:
        outcome = Halted(eval_circuit(model, tuple(args.input)), model.size)
    if args.json:
        _json(outcome_to_dict(outcome))
    elif isinstance(outcome, Halted):
        _write("".join(f"{v}\n" for v in outcome.outputs) if outcome.outputs else "accept\n")
    elif isinstance(outcome, Rejected):
        _write("reject\n")
    else:
        _write(f"fuel exhausted after {outcome.steps_used} steps\n")
    return 0


def _pair(args, tm: Callable, rm: Callable, ckt: Callable) -> int:
    first, second = _kind(args.first), _kind(args.second)
    if first != second or first == '.rf':
        raise ShapeError(f"cannot combine {first} with {second}")
    a, b = load_model(args.first), load_model(args.second)
    combine = {'.tm': tm, '.rm': rm, '.ckt': ckt}[first]
    _write(_serialize(combine(a, b)))
    return 0


def cmd_compose(args) -> int:
    return _pair(args, compose, compose_reg, compose_circuit)


def cmd_tensor(args) -> int:
    return _pair(args, tensor, tensor_reg, tensor_circuit)


def cmd_determinize(args) -> int:
    m = load_model(args.file)
    if _kind(args.file) != '.tm':
        raise ShapeError("determinize takes a .tm file")
    d = determinize(m)
    fuel = resolve_fuel(args.fuel)
    if args.input is not None:
        _json(outcome_to_dict(run(d, tuple(args.input), fuel)))
        return 0
    max_len = args.max_len if args.max_len is not None else get_settings().max_len
    report = behaviorally_equivalent(semantics(d), semantics(m), m.alphabet, max_len, fuel)
    _write(report.model_dump_json(indent=2))
    return 0


def cmd_encode(args) -> int:
    if args.mode in ('nat', 'godel', 'godel-decode') and len(args.values) != 1:
        raise ShapeError(f"{args.mode} takes exactly one value")
    if args.mode == 'nat':
        _write(nat_string_codec().encode(int(args.values[0])) + "\n")
    elif args.mode == 'nat-decode':
        _write(f"{nat_string_codec().decode(args.values[0] if args.values else '')}\n")
    elif args.mode == 'tuple':
        _write(tuple_codec(len(args.values)).encode(tuple(args.values)) + "\n")
    elif args.mode == 'tuple-decode':
        words = tuple_codec(args.arity).decode(args.values[0] if args.values else "")
        _write("".join(f"{w}\n" for w in words))
    elif args.mode == 'godel':
        _write(f"{godel_number(load_model(args.values[0]))}\n")
    else:
        _write(serialize_tm(godel_decode(int(args.values[0]))))
    return 0


def cmd_to_sat(args) -> int:
    m = load_model(args.file)
    if _kind(args.file) != '.tm':
        raise ShapeError("to-sat takes a .tm file")
    if m.accept and m.m_in == 1:
        f = cook_levin_encode(m, args.input[0] if args.input else "", args.t_max, args.p_max)
    else:
        f = halt_formula(m, tuple(args.input), args.t_max, args.p_max)
    _write(emit_dimacs(f))
    if args.sidecar:
        with open(args.sidecar, 'w', encoding='utf-8') as handle:
            handle.write(emit_sidecar(f))
    return 0


def cmd_solve(args) -> int:
    sidecar = _read(args.sidecar) if args.sidecar else None
    f = parse_dimacs(_read(args.file), sidecar)
    result = solve(f)
    if result.satisfiable:
        _write("s SATISFIABLE\n" + "v " + " ".join(map(str, result.model)) + " 0\n")
    else:
        _write("s UNSATISFIABLE\n")
    return 0


_REDUCTIONS: Dict[str, Callable[..., Any]] = {
    'halt-nonempty': halt_to_nonempty,
    'halt-print42': halt_to_print42,
    'empty-equiv': empty_to_equiv,
    'halt-rice': halt_to_rice,
}


def _instances(reduction: Reduction, max_len: int) -> List[Any]:
    machines = list(decision_corpus().values()) + list(turing_corpus().values())
    numbers = [godel_number(m) for m in machines]
    if reduction.source == 'empty':
        return numbers
    words = list(Alphabet.binary().words(max_len))
    return [(x, y) for y in numbers for x in words]


def cmd_reduce(args) -> int:
    fuel = resolve_fuel(args.fuel)
    reduction, source, target = _REDUCTIONS[args.name](args.max_len, fuel)
    if args.check:
        instances = _instances(reduction, args.max_len)
        report = check_reduction(reduction, source, target, instances)
        certificate = poly_reduction(reduction, args.degree, instances, args.slack)
        _json({'commutation': report.model_dump(), 'commutes': report.commutes,
               'certificate': certificate.model_dump()})
        return 0
    if not args.machine:
        raise ShapeError("reduce needs --machine unless --check is given")
    y = godel_number(load_model(args.machine))
    if args.name == 'empty-equiv':
        left, right = reduction(y)
        _json({'reduction': reduction.name, 'image': [str(left), str(right)]})
        return 0
    _write(serialize_tm(godel_decode(reduction((args.input or "", y)))))
    return 0


def _machine(path: str):
    if _kind(path) != '.tm':
        raise ShapeError(f"{path} is not a .tm file")
    return load_model(path)


def cmd_rice(args) -> int:
    y = godel_number(_machine(args.machine))
    with_property = godel_number(_machine(args.with_property))
    without = godel_number(_machine(args.without)) if args.without else godel_number(always_reject(m_in=1, n_out=0))
    _write(serialize_tm(godel_decode(rice_transform(args.input or "", y, without, with_property))))
    return 0


def cmd_diagonal(args) -> int:
    candidate = _program(args.program) if args.program else candidate_deciders()[args.candidate]
    _, report = diagonal_construct(candidate, fuel=resolve_fuel(args.fuel), sample=args.sample)
    _json(report.model_dump())
    return 0


def cmd_dovetail(args) -> int:
    f, fc = _machine(args.recognizer), _machine(args.complement)
    verdict = dovetail_decider(semantics(f), semantics(fc), args.input or "", resolve_fuel(args.fuel))
    _json({'verdict': verdict.verdict.value, 'fuel_spent': verdict.fuel_spent})
    return 0


def cmd_nand(args) -> int:
    if _kind(args.file) != '.ckt':
        raise ShapeError("nand takes a .ckt file")
    _write(serialize_ckt(nand_synthesize(load_model(args.file))))
    return 0


def cmd_ackermann(args) -> int:
    _json(outcome_to_dict(ackermann(args.m, args.n, resolve_fuel(args.fuel))))
    return 0


def cmd_measure(args) -> int:
    model = load_model(args.file)
    frame = measure_frame(model, args.n_max, fuel=args.fuel)
    _write(frame.to_csv(index=False))
    return 0


def cmd_savitch(args) -> int:
    m = load_model(args.file)
    if _kind(args.file) != '.tm':
        raise ShapeError("savitch takes a .tm file")
    report = savitch_reach(m, args.input or "", args.space, args.time_bound, args.budget)
    _write(report.model_dump_json(indent=2))
    return 0


def cmd_kolmogorov(args) -> int:
    budget = SizeBudget(max_rules=args.max_rules, fuel=resolve_fuel(args.fuel),
                        max_candidates=args.max_candidates)
    estimate = estimate_k(args.target, args.condition, budget)
    data = estimate.model_dump(exclude={'witness'})
    data['witness_file'] = None
    if estimate.witness and args.witness:
        with open(args.witness, 'w', encoding='utf-8') as handle:
            handle.write(estimate.witness)
        data['witness_file'] = args.witness
    _json(data)
    return 0


def cmd_compress(args) -> int:
    budget = SizeBudget(max_rules=args.max_rules, fuel=resolve_fuel(args.fuel),
                        max_candidates=args.max_candidates)
    report = compressibility_report(args.target, args.c, budget)
    data = report.model_dump()
    data['verdict'] = report.verdict
    _json(data)
    return 0


def _program(path: str):
    if _kind(path) != '.rm':
        raise ShapeError(f"{path} is not a .rm file")
    return load_model(path)


def cmd_normalize(args) -> int:
    _write(normalize(_program(args.file)).text)
    return 0


def cmd_alg_id(args) -> int:
    _write(normalize(_program(args.file)).digest + "\n")
    return 0


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='compworkbench', description='Models of computation workbench')
    parser.add_argument('--log-level', default=None, help='Logging level (default: LOG_LEVEL or INFO)')
    parser.add_argument('--workers', type=int, default=None, help='Thread-pool size for per-input fan-out')
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)
    sub.required = True

    def command(name: str, handler: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = command('run', cmd_run, 'Run a .tm, .rm, .rf or .ckt file')
    p.add_argument('file')
    p.add_argument('--input', action='append', default=[], help='One input (repeat for several)')
    p.add_argument('--fuel', type=int, default=None)
    p.add_argument('--json', action='store_true', help='Print the outcome as JSON')

    for name, handler in (('compose', cmd_compose), ('tensor', cmd_tensor)):
        p = command(name, handler, f'{name.capitalize()} two files of the same model')
        p.add_argument('first')
        p.add_argument('second')

    p = command('determinize', cmd_determinize, 'Breadth-first determinization of a .tm file')
    p.add_argument('file')
    p.add_argument('--input', action='append', default=None)
    p.add_argument('--fuel', type=int, default=None)
    p.add_argument('--max-len', type=int, default=None)

    p = command('encode', cmd_encode, 'Encode or decode naturals, tuples and machine numbers')
    p.add_argument('mode', choices=['nat', 'nat-decode', 'tuple', 'tuple-decode', 'godel', 'godel-decode'])
    p.add_argument('values', nargs='*')
    p.add_argument('--arity', type=int, default=2, help='Tuple arity for tuple-decode')

    p = command('to-sat', cmd_to_sat, 'Encode bounded acceptance of a .tm file as DIMACS CNF')
    p.add_argument('file')
    p.add_argument('--input', action='append', default=[])
    p.add_argument('--t-max', type=int, required=True)
    p.add_argument('--p-max', type=int, default=None)
    p.add_argument('--sidecar', default=None, help='Write the variable map here')

    p = command('solve', cmd_solve, 'Solve a DIMACS CNF file')
    p.add_argument('file')
    p.add_argument('--sidecar', default=None)

    p = command('reduce', cmd_reduce, 'Apply or check a many-one reduction')
    p.add_argument('name', choices=sorted(_REDUCTIONS))
    p.add_argument('--machine', default=None)
    p.add_argument('--input', default=None)
    p.add_argument('--check', action='store_true', help='Check commutation and polynomial cost on the corpus')
    p.add_argument('--max-len', type=int, default=1)
    p.add_argument('--fuel', type=int, default=None)
    p.add_argument('--degree', type=float, default=2.0)
    p.add_argument('--slack', type=float, default=8.0)

    p = command('measure', cmd_measure, 'Worst-case time and space as CSV')
    p.add_argument('file')
    p.add_argument('--n-max', type=int, default=4)
    p.add_argument('--fuel', type=int, default=None)

    p = command('savitch', cmd_savitch, 'Middle-first reachability with a space report')
    p.add_argument('file')
    p.add_argument('--input', default=None)
    p.add_argument('--space', type=int, required=True)
    p.add_argument('--time-bound', type=int, default=None)
    p.add_argument('--budget', type=int, default=5000)

    p = command('kolmogorov', cmd_kolmogorov, 'Upper-bound K(target | condition)')
    p.add_argument('--target', required=True)
    p.add_argument('--condition', default="")
    p.add_argument('--max-rules', type=int, default=8)
    p.add_argument('--max-candidates', type=int, default=500)
    p.add_argument('--fuel', type=int, default=None)
    p.add_argument('--witness', default=None, help='Write the witness machine here')

    p = command('compress', cmd_compress, 'Compressibility of a word against its literal printer')
    p.add_argument('--target', required=True)
    p.add_argument('--c', type=int, default=0, help='Slack over the literal cost')
    p.add_argument('--max-rules', type=int, default=8)
    p.add_argument('--max-candidates', type=int, default=500)
    p.add_argument('--fuel', type=int, default=None)

    p = command('rice', cmd_rice, 'Rice construction: behaves like --with iff the machine accepts --input')
    p.add_argument('machine')
    p.add_argument('--input', default=None)
    p.add_argument('--with', dest='with_property', required=True, help='A .tm machine with the property')
    p.add_argument('--without', default=None, help='A .tm machine without it (default: always-reject)')

    p = command('diagonal', cmd_diagonal, 'Run the diagonal construction against a claimed halting decider')
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--candidate', choices=sorted(candidate_deciders()))
    source.add_argument('--program', default=None, help='A .rm program mapping two inputs to 0/1')
    p.add_argument('--fuel', type=int, default=None)
    p.add_argument('--sample', type=int, default=4)

    p = command('dovetail', cmd_dovetail, 'Decide with a recognizer and one for the complement, alternating steps')
    p.add_argument('recognizer')
    p.add_argument('complement')
    p.add_argument('--input', default=None)
    p.add_argument('--fuel', type=int, default=None)

    p = command('nand', cmd_nand, 'Rewrite a .ckt file into NAND and FANOUT gates')
    p.add_argument('file')

    p = command('ackermann', cmd_ackermann, 'Evaluate the Ackermann function under fuel')
    p.add_argument('m', type=int)
    p.add_argument('n', type=int)
    p.add_argument('--fuel', type=int, default=None)

    p = command('normalize', cmd_normalize, 'Normal form of a .rm program')
    p.add_argument('file')

    p = command('alg-id', cmd_alg_id, 'Algorithm digest of a .rm program')
    p.add_argument('file')
    return parser


def _configure(args):
    settings = get_settings()
    if args.workers is not None:
        if args.workers < 1:
            raise ShapeError("--workers must be at least 1")
        settings.workers = args.workers
    level = (args.log_level or settings.log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), format=LOG_FORMAT, stream=sys.stderr)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, run one subcommand and return the exit status."""
    try:
        args = build_parser().parse_args(argv)
    except _UsageError:
        return 2
    except SystemExit as e:
        # --help and --version
        return e.code if isinstance(e.code, int) else 0
    try:
        _configure(args)
        return args.handler(args)
    except WorkbenchError as e:
        logger.debug(f"{args.command} failed", exc_info=get_settings().debug)
        sys.stderr.write(json.dumps(e.to_dict()) + "\n")
        return 1
    except ValueError as e:
        error = ShapeError(str(e))
        sys.stderr.write(json.dumps(error.to_dict()) + "\n")
        return 1
