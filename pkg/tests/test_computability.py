import pytest

from compworkbench import library
from compworkbench.computability import (FALSE, TRUE, UNKNOWN, DecisionVerdict, bounded_halt_oracle,
                                         candidate_deciders, check_reduction, complement_problem, constant_decider,
                                         decode_machine, delta_program, diagonal_construct, dovetail_decider,
                                         empty_check, empty_to_equiv, equiv_check, halt_problem, halt_query,
                                         halt_to_nonempty, halt_to_print42, halt_to_rice, machine_size, never_accepts,
                                         nonempty_check, nonempty_instance, par_halt, print42_check, print42_instance,
                                         reduce_empty_to_equiv, reduce_halt_to_nonempty, rice_transform,
                                         semi_decide_halt, value_size)
from compworkbench.core import Halted, Rejected
from compworkbench.encodings import godel_number
from compworkbench.errors import DecodeError, NonTotalError, PromiseViolation, ShapeError
from compworkbench.regmachine import ProgramTable
from compworkbench.turing import canonical, parse_tm, run, semantics, serialize_tm

RIGHT_FOREVER = parse_tm("alphabet: 01 blank:_\ntapes: 1 0 0\nstart: q\nq * -> q * R\n", "right-forever")


@pytest.fixture
def numbers(turing_corpus, decision_corpus):
    machines = dict(decision_corpus)
    machines.update({name: turing_corpus[name] for name in ("id", "append-1", "self-loop", "always-reject")})
    machines["right-forever"] = RIGHT_FOREVER
    return {name: godel_number(m) for name, m in machines.items()}


class TestMachineNumbers:
    @staticmethod
    def test_decode_round_trip(turing_corpus):
        m = turing_corpus["successor"]
        assert decode_machine(godel_number(m)) == canonical(m)

    @staticmethod
    def test_junk_reads_as_always_reject(binary):
        assert decode_machine(5) == library.always_reject(binary, 1, 0)
        twist = godel_number(library.identity_machine(2, binary))
        assert decode_machine(twist) == library.always_reject(binary, 1, 0)
        with pytest.raises(DecodeError):
            decode_machine(5, strict=True)

    @staticmethod
    def test_machine_size(turing_corpus):
        assert machine_size(godel_number(turing_corpus["erase"])) > 0


class TestHalting:
    @staticmethod
    def test_semi_decision(numbers):
        assert semi_decide_halt(numbers["append-1"], "01", 100).verdict == TRUE
        assert semi_decide_halt(numbers["self-loop"], "01", 100).verdict == UNKNOWN
        assert semi_decide_halt(5, "01", 100).verdict == FALSE
        assert semi_decide_halt(numbers["id"], "2", 100).verdict == FALSE

    @staticmethod
    def test_rejecting_halt_is_a_halt(numbers):
        verdict = semi_decide_halt(numbers["always-reject"], "01", 100)
        assert verdict.verdict == TRUE
        assert verdict.fuel_spent == 0
        assert semi_decide_halt(numbers["contains-1"], "000", 100).verdict == TRUE
        assert semi_decide_halt(numbers["even-length"], "0", 100).verdict == UNKNOWN

    @staticmethod
    def test_partial_halt_never_says_no(numbers):
        assert par_halt("1", numbers["contains-1"], 100).verdict == TRUE
        assert par_halt("0", numbers["contains-1"], 100).verdict == TRUE
        assert par_halt("0", numbers["always-reject"], 100).verdict == TRUE
        assert par_halt("0", numbers["self-loop"], 100).verdict == UNKNOWN

    @staticmethod
    def test_bounded_procedure_detects_cycles(numbers):
        decide = halt_problem(200)
        assert decide(("0", numbers["self-loop"])).verdict == FALSE
        assert decide(("0", numbers["even-length"])).verdict == FALSE
        assert decide(("00", numbers["even-length"])).verdict == TRUE
        assert decide(("0", numbers["right-forever"])).verdict == UNKNOWN

    @staticmethod
    def test_never_accepts(turing_corpus, decision_corpus):
        assert never_accepts(turing_corpus["self-loop"], ("01",), 10)
        assert never_accepts(decision_corpus["contains-1"], ("000",), 100)
        assert not never_accepts(decision_corpus["contains-1"], ("010",), 100)
        assert not never_accepts(RIGHT_FOREVER, ("",), 100)

    @staticmethod
    def test_complement_keeps_unknown():
        negated = complement_problem(lambda v: DecisionVerdict(v))
        assert negated(TRUE).verdict == FALSE
        assert negated(FALSE).verdict == TRUE
        assert negated(UNKNOWN).verdict == UNKNOWN


class TestBoundedCheckers:
    @staticmethod
    def test_nonempty_and_empty(numbers):
        found = nonempty_check(numbers["contains-1"], 2, 200)
        assert found.verdict == TRUE
        assert found.witness == "1"
        assert nonempty_check(numbers["always-reject"], 3, 200).verdict == FALSE
        assert empty_check(numbers["always-reject"], 3, 200).verdict == TRUE
        assert nonempty_check(numbers["right-forever"], 2, 50).verdict == UNKNOWN

    @staticmethod
    def test_print42(binary, numbers):
        m = print42_instance(library.identity_machine(1, binary), "01")
        assert run(m, ("01",), 500).outputs == ("42",)
        assert isinstance(run(m, ("1",), 500), Rejected)
        assert print42_check(godel_number(m), 2, 500).verdict == TRUE
        assert print42_check(numbers["id"], 2, 500).verdict == FALSE

    @staticmethod
    def test_equivalence(numbers, turing_corpus):
        assert equiv_check(numbers["id"], godel_number(turing_corpus["id"]), 3, 200).verdict == TRUE
        differ = equiv_check(numbers["id"], godel_number(turing_corpus["append-0"]), 3, 200)
        assert differ.verdict == FALSE
        assert differ.witness == ""

    @staticmethod
    def test_rejection_and_divergence_are_both_undefined(binary, numbers):
        assert equiv_check(numbers["always-reject"], numbers["self-loop"], 3, 200).verdict == TRUE
        no_output = godel_number(library.self_loop(binary, 1, 0))
        assert equiv_check(numbers["always-reject"], no_output, 3, 200).verdict == FALSE


class TestDovetailing:
    @staticmethod
    def test_decides_complementary_sets():
        even, odd = semantics(library.parity_recognizer(True)), semantics(library.parity_recognizer(False))
        assert dovetail_decider(even, odd, "01", 1000).verdict == TRUE
        assert dovetail_decider(even, odd, "010", 1000).verdict == FALSE

    @staticmethod
    def test_promise_violation():
        accept = semantics(library.always_accept())
        with pytest.raises(PromiseViolation):
            dovetail_decider(accept, accept, "0", 100)

    @staticmethod
    def test_alternates_single_steps():
        even, odd = semantics(library.parity_recognizer(True)), semantics(library.parity_recognizer(False))
        # even-length accepts "01" on its 3rd step, which is step 5 of the shared clock
        assert dovetail_decider(even, odd, "01", 1000) == DecisionVerdict(TRUE, 5)
        assert dovetail_decider(even, odd, "01", 5) == DecisionVerdict(TRUE, 5)
        assert dovetail_decider(even, odd, "01", 4) == DecisionVerdict(UNKNOWN, 4)
        # odd-length accepts "010" on its 4th step, step 8 of the shared clock
        assert dovetail_decider(even, odd, "010", 1000) == DecisionVerdict(FALSE, 8)
        assert dovetail_decider(even, odd, "010", 7) == DecisionVerdict(UNKNOWN, 7)

    @staticmethod
    def test_survivor_runs_alone_after_a_rejection(binary):
        reject = semantics(library.always_reject(binary, 1, 0))
        odd = semantics(library.parity_recognizer(False))
        assert dovetail_decider(reject, odd, "010", 4) == DecisionVerdict(FALSE, 4)
        assert dovetail_decider(odd, reject, "010", 4) == DecisionVerdict(TRUE, 4)

    @staticmethod
    def test_unknown_when_neither_accepts(binary):
        loop = semantics(library.self_loop(binary, 1, 0))
        verdict = dovetail_decider(loop, loop, "0", 100)
        assert verdict.verdict == UNKNOWN
        assert verdict.fuel_spent <= 100
        reject = semantics(library.always_reject(binary, 1, 0))
        assert dovetail_decider(reject, reject, "0", 100).verdict == UNKNOWN


class TestReductions:
    @staticmethod
    def test_halt_to_nonempty_commutes(numbers):
        reduction, source, target = halt_to_nonempty(max_len=3, fuel=400)
        instances = [(x, numbers[name]) for name in ("contains-1", "even-length", "always-accept", "self-loop",
                                                     "always-reject", "id") for x in ("", "1", "01")]
        report = check_reduction(reduction, source, target, instances)
        assert report.commutes, report.violations
        assert report.agreed == report.checked == len(instances)

    @staticmethod
    def test_halt_to_print42_commutes(numbers):
        reduction, source, target = halt_to_print42(max_len=2, fuel=400)
        instances = [(x, numbers[name]) for name in ("ends-with-1", "self-loop", "append-1") for x in ("0", "1")]
        report = check_reduction(reduction, source, target, instances)
        assert report.commutes, report.violations
        assert report.unknown == 0

    @staticmethod
    def test_empty_to_equiv_commutes(numbers):
        reduction, source, target = empty_to_equiv(max_len=2, fuel=300)
        instances = [numbers[name] for name in ("always-reject", "id", "even-length", "contains-1", "self-loop")]
        report = check_reduction(reduction, source, target, instances)
        assert report.commutes, report.violations
        assert report.agreed == len(instances)

    @staticmethod
    def test_a_broken_reduction_is_caught(numbers):
        reduction, source, target = halt_to_nonempty(max_len=2, fuel=300)
        broken = reduction.__class__("broken", lambda inst, tank: numbers["always-accept"], "halt", "nonempty")
        report = check_reduction(broken, source, target, [("0", numbers["always-reject"])])
        assert not report.commutes

    @staticmethod
    def test_transform_steps_are_counted_in_characters(numbers):
        reduction, _, _ = halt_to_nonempty()
        y = numbers["contains-1"]
        image, steps = reduction.apply(("01", y))
        built = nonempty_instance(decode_machine(y), "01")
        read = len(serialize_tm(decode_machine(y), canonical=True))
        written = built.rule_count + len(serialize_tm(built, canonical=True))
        assert image == godel_number(built)
        assert steps == 2 + read + written
        assert reduction.size(("01", y)) == 2 + read

    @staticmethod
    def test_rice_reduction_commutes(numbers):
        reduction, source, target = halt_to_rice(max_len=2, fuel=300)
        instances = [(x, numbers[name]) for name in ("contains-1", "always-reject", "self-loop", "id")
                     for x in ("", "1", "01")]
        report = check_reduction(reduction, source, target, instances)
        assert report.commutes
        assert report.agreed > 0

    @staticmethod
    def test_junk_machine_maps_to_empty_language():
        image = reduce_halt_to_nonempty("1", 5)
        assert nonempty_check(image, 2, 300).verdict == FALSE

    @staticmethod
    def test_empty_to_equiv_pairs_with_a_looper(numbers, binary):
        y, y0 = reduce_empty_to_equiv(numbers["id"])
        assert y == numbers["id"]
        assert y0 == godel_number(library.self_loop(binary, 1, 1))

    @staticmethod
    def test_rice_transform(numbers):
        with_property = numbers["append-1"]
        image = decode_machine(rice_transform("0", numbers["id"], numbers["always-reject"], with_property))
        assert run(image, ("10",), 2000).outputs == ("101",)
        empty = decode_machine(rice_transform("0", numbers["always-reject"], numbers["always-reject"], with_property))
        assert isinstance(run(empty, ("10",), 2000), Rejected)

    @staticmethod
    def test_value_size():
        assert value_size("abc") == 3
        assert value_size(5) == 3
        assert value_size(("ab", 4)) == 5
        with pytest.raises(ShapeError):
            value_size(1.5)


class TestDiagonal:
    @staticmethod
    @pytest.mark.parametrize("name", ["always-1", "always-0", "equal", "first-even"])
    def test_every_candidate_is_refuted(name):
        candidate = candidate_deciders()[name]
        index, report = diagonal_construct(candidate, fuel=3000)
        assert report.contradiction
        assert report.index == index
        assert report.candidate == name

    @staticmethod
    def test_claims_are_reported():
        _, says_halts = diagonal_construct(constant_decider(1), fuel=500)
        assert says_halts.claimed == "halts"
        assert says_halts.observed == "no halt within fuel"
        _, says_loops = diagonal_construct(constant_decider(0), fuel=500)
        assert says_loops.claimed == "loops"
        assert says_loops.observed == "halted"

    @staticmethod
    def test_shared_table_grows():
        table = ProgramTable()
        first, _ = diagonal_construct(constant_decider(0), table, fuel=500)
        second, _ = diagonal_construct(constant_decider(1), table, fuel=500)
        assert (first, second) == (1, 3)
        assert len(table) == 4

    @staticmethod
    def test_rejects_non_deciders():
        with pytest.raises(NonTotalError):
            diagonal_construct(constant_decider(2), fuel=500)
        with pytest.raises(ShapeError):
            diagonal_construct(delta_program(), fuel=500)


class TestHaltOracle:
    @staticmethod
    def test_answers(numbers):
        oracle = bounded_halt_oracle(200)
        assert oracle((halt_query(numbers["append-1"], "0"),), 5) == Halted(("1",), 1)
        assert oracle((halt_query(numbers["self-loop"], "0"),), 5).outputs == ("0",)
        assert oracle(("1",), 5).outputs == ("",)

    @staticmethod
    def test_oracle_machine_asks_it(numbers):
        outcome = run(library.oracle_relay(), (halt_query(numbers["contains-1"], "01"),), 100000,
                      oracle=bounded_halt_oracle(200))
        assert outcome.outputs == ("1",)
