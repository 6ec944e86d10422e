import pytest

from compworkbench import library
from compworkbench.core import (Alphabet, BlackBoxFunction, FuelExhausted, Halted, Rejected,
                                behaviorally_equivalent)
from compworkbench.errors import AlphabetError, FormatError, OracleError, ShapeError, UnsupportedError
from compworkbench.turing import (WILD, Action, Rule, TuringMachine, accepts_within, canonical, compose,
                                  determinize, explicit_halting, identity_machine, parse_tm, run, semantics,
                                  serialize_tm, tensor, trace, twist_machine)


def _host(fn, name="host"):
    return BlackBoxFunction.from_function(lambda w: (fn(w),), 1, 1, name)


class TestConstruction:
    @staticmethod
    def test_rule_must_cover_every_tape(binary):
        rule = Rule("q", ("0",), Action("q", ("0",), ("R",)))
        with pytest.raises(ShapeError):
            TuringMachine(binary, 1, 1, "q", (rule,), work_tapes=0)

    @staticmethod
    def test_marker_states_have_no_rules(binary):
        rule = Rule("done", ("0", WILD), Action("done", (WILD, WILD), ("S", "S")))
        with pytest.raises(ShapeError):
            TuringMachine(binary, 1, 1, "done", (rule,), work_tapes=0, accept={"done"})

    @staticmethod
    def test_wildcard_glyph_reserved():
        with pytest.raises(AlphabetError):
            TuringMachine(Alphabet.of("0*"), 1, 0, "q", ())

    @staticmethod
    def test_states_start_first(turing_corpus):
        m = turing_corpus["append-1"]
        assert m.states[0] == "copy"
        assert "accept" in m.states
        assert m.rule_count == 3

    @staticmethod
    def test_determinism(decision_corpus, turing_corpus):
        assert turing_corpus["successor"].deterministic
        assert not decision_corpus["contains-1"].deterministic
        assert not decision_corpus["branching-chain"].deterministic


class TestRun:
    @staticmethod
    @pytest.mark.parametrize("name,word,expected", [
        ("id", "0110", "0110"),
        ("append-0", "1", "10"),
        ("append-1", "", "1"),
        ("erase", "0101", ""),
        ("successor", "", "1"),
        ("successor", "1", "01"),
        ("successor", "11", "001"),
        ("successor", "01", "11"),
    ])
    def test_deterministic_outputs(turing_corpus, name, word, expected):
        outcome = run(turing_corpus[name], (word,), 200)
        assert isinstance(outcome, Halted)
        assert outcome.outputs == (expected,)

    @staticmethod
    def test_steps_counted(turing_corpus):
        assert run(turing_corpus["id"], ("01",), 50) == Halted(("01",), 3, 0)

    @staticmethod
    def test_divergence_is_fuel_exhaustion(turing_corpus):
        assert run(turing_corpus["self-loop"], ("0",), 25) == FuelExhausted(25, 0)

    @staticmethod
    def test_fuel_zero_still_sees_an_immediate_halt(turing_corpus):
        assert isinstance(run(turing_corpus["erase"], ("1",), 0), Halted)
        assert isinstance(run(turing_corpus["id"], ("1",), 0), FuelExhausted)

    @staticmethod
    def test_reject(turing_corpus):
        assert run(turing_corpus["always-reject"], ("1",), 10) == Rejected(0)

    @staticmethod
    def test_work_tape_space(turing_corpus):
        assert run(turing_corpus["successor"], ("11",), 50).cells_used == 3

    @staticmethod
    def test_space_adds_up_across_work_tapes(binary):
        rules = [Rule("walk", (g, WILD, WILD), Action("walk", (WILD, g, g), ("R", "R", "R"))) for g in "01"]
        rules.append(Rule("walk", ("_", WILD, WILD), Action("done", (WILD, WILD, WILD), ("S", "S", "S"))))
        m = TuringMachine(binary, 1, 0, "walk", tuple(rules), work_tapes=2, accept={"done"})
        outcome = run(m, ("011",), 50)
        # cells 0..3 on each of the two work tapes
        assert outcome.cells_used == 8

    @staticmethod
    def test_input_shape_and_alphabet(turing_corpus):
        with pytest.raises(ShapeError):
            run(turing_corpus["id"], ("0", "1"), 10)
        with pytest.raises(AlphabetError):
            run(turing_corpus["id"], ("2",), 10)

    @staticmethod
    @pytest.mark.parametrize("word,accepted", [
        ("", False), ("000", False), ("0010", True), ("1", True),
    ])
    def test_nondeterministic_contains_one(decision_corpus, word, accepted):
        outcome = run(decision_corpus["contains-1"], (word,), 500)
        assert isinstance(outcome, Halted) == accepted
        if not accepted:
            assert isinstance(outcome, Rejected)

    @staticmethod
    def test_ends_with_one(decision_corpus):
        m = decision_corpus["ends-with-1"]
        assert isinstance(run(m, ("0101",), 500), Halted)
        assert isinstance(run(m, ("10",), 500), Rejected)

    @staticmethod
    def test_parity_recognizer_diverges_off_language(decision_corpus):
        m = decision_corpus["even-length"]
        assert isinstance(run(m, ("01",), 100), Halted)
        assert isinstance(run(m, ("0",), 100), FuelExhausted)

    @staticmethod
    def test_trace(turing_corpus):
        configs = trace(turing_corpus["id"], ("01",), 100)
        assert len(configs) == 4
        assert configs[-1].state == "accept"
        assert configs[-1].contents(1) == "01"
        with pytest.raises(UnsupportedError):
            trace(library.contains_one(), ("1",))


class TestAcceptsWithin:
    @staticmethod
    def test_bound_is_exact(decision_corpus):
        m = decision_corpus["one-step"]
        assert not accepts_within(m, ("0",), 0)
        assert accepts_within(m, ("0",), 1)

    @staticmethod
    def test_contains_one(decision_corpus):
        m = decision_corpus["contains-1"]
        assert accepts_within(m, ("001",), 3)
        assert not accepts_within(m, ("001",), 2)
        assert not accepts_within(m, ("000",), 8)

    @staticmethod
    def test_always_accept_at_zero(decision_corpus):
        assert accepts_within(decision_corpus["always-accept"], ("",), 0)


class TestOracle:
    @staticmethod
    def test_answer_replaces_query_tape():
        outcome = run(library.oracle_relay(), ("01",), 100, oracle=_host(lambda w: w[::-1], "rev"))
        assert isinstance(outcome, Halted)
        assert outcome.outputs == ("10",)

    @staticmethod
    def test_oracle_required_and_only_for_ports(turing_corpus):
        with pytest.raises(OracleError):
            run(library.oracle_relay(), ("01",), 100)
        with pytest.raises(OracleError):
            run(turing_corpus["id"], ("01",), 100, oracle=_host(lambda w: w))

    @staticmethod
    def test_oracle_out_of_fuel_propagates():
        looping = BlackBoxFunction(1, 1, lambda inputs, fuel: FuelExhausted(fuel), "loop")
        assert isinstance(run(library.oracle_relay(), ("0",), 100, oracle=looping), FuelExhausted)


class TestConstructions:
    @staticmethod
    def test_identity_and_twist(binary):
        assert identity_machine(1, binary).rule_count == 3
        outcome = run(twist_machine(1, 1, binary), ("0", "11"), 50)
        assert outcome.outputs == ("11", "0")

    @staticmethod
    def test_compose_matches_host_composition(binary, turing_corpus):
        m = compose(turing_corpus["append-0"], turing_corpus["append-1"])
        assert m.m_in == 1 and m.n_out == 1
        report = behaviorally_equivalent(semantics(m), _host(lambda w: w + "01"), binary, 3, fuel=500)
        assert report.equal
        assert not report.inconclusive

    @staticmethod
    def test_compose_with_successor(binary, turing_corpus):
        m = compose(turing_corpus["successor"], turing_corpus["successor"])
        assert run(m, ("1",), 500).outputs == ("11",)

    @staticmethod
    def test_compose_propagates_rejection(turing_corpus):
        m = compose(turing_corpus["always-reject"], turing_corpus["id"])
        assert isinstance(run(m, ("01",), 100), Rejected)

    @staticmethod
    def test_compose_arity_mismatch(binary, turing_corpus):
        with pytest.raises(ShapeError):
            compose(twist_machine(1, 1, binary), turing_corpus["id"])

    @staticmethod
    def test_tensor_runs_side_by_side(turing_corpus):
        m = tensor(turing_corpus["append-0"], turing_corpus["erase"])
        assert (m.m_in, m.n_out) == (2, 2)
        assert run(m, ("1", "0"), 100).outputs == ("10", "")

    @staticmethod
    def test_tensor_rejects_if_either_side_rejects(turing_corpus):
        m = tensor(turing_corpus["id"], turing_corpus["always-reject"])
        assert isinstance(run(m, ("1", "0"), 100), Rejected)

    @staticmethod
    def test_explicit_halting_adds_reject_rules(decision_corpus):
        m = explicit_halting(decision_corpus["contains-1"])
        assert m.rule_count == 4
        assert "halt.reject" in m.reject
        assert isinstance(run(m, ("00",), 100), Rejected)

    @staticmethod
    def test_determinize_writes_a_deterministic_rule_table(decision_corpus):
        m = decision_corpus["contains-1"]
        d = determinize(m)
        assert not m.deterministic
        assert d.deterministic
        assert d.rule_count > 0
        assert d.work_tapes == m.tape_count + 1
        outcome = run(d, ("1",), 1000)
        assert isinstance(outcome, Halted)
        assert (outcome.outputs, outcome.steps_used) == ((), 44)

    @staticmethod
    def test_determinize_preserves_behaviour(binary, decision_corpus):
        for name in ("contains-1", "ends-with-1", "one-step"):
            m = decision_corpus[name]
            report = behaviorally_equivalent(semantics(m), semantics(determinize(m)), binary, 5, fuel=50000)
            assert report.equal, name
            assert report.inconclusive == [], name

    @staticmethod
    def test_determinize_keeps_outputs(binary, turing_corpus):
        for name in ("append-1", "successor", "id"):
            m = turing_corpus[name]
            report = behaviorally_equivalent(semantics(m), semantics(determinize(m)), binary, 4, fuel=20000)
            assert report.equal and not report.inconclusive, name

    @staticmethod
    def test_determinized_search_rejects_and_diverges(decision_corpus, turing_corpus):
        d = determinize(decision_corpus["contains-1"])
        assert isinstance(run(d, ("000",), 5000), Rejected)
        assert isinstance(run(determinize(turing_corpus["self-loop"]), ("0",), 500), FuelExhausted)

    @staticmethod
    def test_determinize_refuses_oracles():
        with pytest.raises(UnsupportedError):
            determinize(library.oracle_relay())


class TestTextFormat:
    @staticmethod
    def test_round_trip(turing_corpus, decision_corpus):
        for m in list(turing_corpus.values()) + list(decision_corpus.values()) + [library.oracle_relay()]:
            assert parse_tm(serialize_tm(m), m.name) == m

    @staticmethod
    def test_canonical_is_stable(turing_corpus):
        m = turing_corpus["successor"]
        assert serialize_tm(canonical(m), canonical=True) == serialize_tm(m, canonical=True)

    @staticmethod
    def test_parse_handwritten():
        m = parse_tm("""
# flips every bit
alphabet: 01 blank:_
tapes: 1 0 1
start: go
accept: done
go 0 * -> go * 1 R R
go 1 * -> go * 0 R R
go _ * -> done * * S S
""")
        assert run(m, ("0110",), 50).outputs == ("1001",)

    @staticmethod
    @pytest.mark.parametrize("text", [
        "tapes: 1 0 1\nstart: q\n",
        "alphabet: 01 blank:_\nstart: q\n",
        "alphabet: 01 blank:_\ntapes: 1 0 1\n",
        "alphabet: 01 blank:_\ntapes: 1 0 1\nstart: q\nq 0 -> q 0 R\n",
        "alphabet: 01 blank:_\ntapes: 1 0 1\nstart: q\nnonsense\n",
    ])
    def test_malformed(text):
        with pytest.raises(FormatError):
            parse_tm(text)

    @staticmethod
    def test_error_names_line():
        with pytest.raises(FormatError) as caught:
            parse_tm("alphabet: 01 blank:_\ntapes: 1 0 1\nstart: q\nq 0 -> q 0 R\n")
        assert caught.value.details['line'] == 4

    @staticmethod
    def test_determinized_machine_has_text(decision_corpus):
        d = determinize(decision_corpus["contains-1"])
        again = parse_tm(serialize_tm(d), d.name)
        assert again.deterministic
        assert run(again, ("1",), 1000).steps_used == 44
