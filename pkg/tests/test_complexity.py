import pytest

from compworkbench import library
from compworkbench.complexity import (Const, Exp, GrowthClass, Log, Poly, as_function, bfs_expansions,
                                      circuit_size_curve, classify, compare_growth, configuration_universe,
                                      fit_polynomial, measure_frame, meter, min_over_registry, poly_reduction,
                                      savitch_reach, universe_size, worst_case)
from compworkbench.computability import Reduction, empty_to_equiv, halt_to_nonempty, halt_to_print42
from compworkbench.core import Halted
from compworkbench.encodings import godel_number
from compworkbench.errors import EquivalenceError, NonTotalError, ResourceError, ShapeError, UnsupportedError
from compworkbench.turing import accepts_within, determinize, identity_machine, run, twist_machine


class TestMetering:
    @staticmethod
    def test_register_program_on_naturals(register_corpus):
        sample = meter(register_corpus["add"], (3, 4), 1000)
        assert sample.time == 30
        assert sample.complete
        assert sample.outcome == "Halted"

    @staticmethod
    def test_expression_on_unary_words():
        sample = meter(library.ADD, ("11", "1"), 1000)
        assert sample.complete
        assert as_function(library.ADD)(("11", "1"), 1000).outputs == ("111",)

    @staticmethod
    def test_fuel_exhaustion_is_incomplete(turing_corpus):
        sample = meter(turing_corpus["self-loop"], ("0",), 20)
        assert not sample.complete
        assert sample.outcome == "FuelExhausted"

    @staticmethod
    def test_unmeterable():
        with pytest.raises(UnsupportedError):
            as_function("not a model")


class TestWorstCase:
    @staticmethod
    def test_identity_time(turing_corpus):
        curve = worst_case(turing_corpus["id"], "time", 4)
        assert curve.points == {0: 1, 1: 2, 2: 3, 3: 4, 4: 5}

    @staticmethod
    def test_successor_space(turing_corpus):
        curve = worst_case(turing_corpus["successor"], "space", 3)
        assert curve.points == {0: 1, 1: 2, 2: 3, 3: 4}

    @staticmethod
    def test_register_program_is_linear(register_corpus):
        curve = worst_case(register_corpus["add"], "time", 4)
        assert curve.points == {n: 4 * n + 2 for n in range(5)}
        coefficients, residual = fit_polynomial(curve, 1)
        assert coefficients == pytest.approx([4.0, 2.0])
        assert residual == pytest.approx(0.0, abs=1e-9)

    @staticmethod
    def test_divergence_is_reported(turing_corpus):
        with pytest.raises(NonTotalError):
            worst_case(turing_corpus["self-loop"], "time", 2, fuel=50)

    @staticmethod
    def test_resource_name_checked(turing_corpus):
        with pytest.raises(ShapeError):
            worst_case(turing_corpus["id"], "energy", 2)

    @staticmethod
    def test_parallel_matches_serial(turing_corpus):
        m = turing_corpus["successor"]
        assert worst_case(m, "time", 4, workers=1) == worst_case(m, "time", 4, workers=4)

    @staticmethod
    def test_measure_frame(turing_corpus):
        frame = measure_frame(turing_corpus["id"], 3)
        assert list(frame.columns) == ["n", "time_max", "space_max"]
        assert frame["time_max"].tolist() == [1, 2, 3, 4]
        assert frame["space_max"].tolist() == [0, 0, 0, 0]

    @staticmethod
    def test_circuit_family():
        size = circuit_size_curve(library.parity_family, 5)
        assert size.points == {1: 0, 2: 4, 3: 8, 4: 12, 5: 16}
        assert classify(size, Poly(1), slack=4).fits
        depth = circuit_size_curve(library.parity_family, 4, resource="depth")
        assert depth.points == {1: 0, 2: 3, 3: 6, 4: 9}
        with pytest.raises(ShapeError):
            circuit_size_curve(library.parity_family, 3, resource="wires")

    @staticmethod
    def test_fit_needs_enough_points(turing_corpus):
        curve = worst_case(turing_corpus["id"], "time", 1)
        with pytest.raises(ShapeError):
            fit_polynomial(curve, 2)


class TestGrowth:
    @staticmethod
    def test_symbolic_order():
        ordered = [Const(), Log(), Poly(1), Poly(2), Exp(2), Exp(3)]
        assert sorted(reversed(ordered)) == ordered
        assert compare_growth(Poly(1), Poly(2)).big_o
        assert not compare_growth(Poly(1), Poly(2)).theta
        assert not compare_growth(Exp(2), Poly(3)).big_o
        assert compare_growth(Poly(0), Const(5)).theta

    @staticmethod
    def test_values_and_names():
        assert Poly(2)(3) == 16.0
        assert Exp(2)(5) == 32
        assert Log()(0) == 1.0
        assert Const(3)(100) == 3
        assert [str(g) for g in (Const(), Log(), Poly(2), Exp(2))] == ["Const(1)", "Log", "Poly(2)", "Exp(2)"]

    @staticmethod
    @pytest.mark.parametrize("kwargs", [
        {"form": "cubic"},
        {"form": "exp", "base": 1.0},
        {"form": "poly", "degree": -1},
    ])
    def test_malformed(kwargs):
        with pytest.raises(ShapeError):
            GrowthClass(**kwargs)

    @staticmethod
    def test_classify(turing_corpus):
        curve = worst_case(turing_corpus["id"], "time", 4)
        assert classify(curve, Poly(1)).label == "fits within measured range"
        const = classify(curve, Const(1))
        assert not const.fits
        assert const.violated_at == 1
        assert const.label == "violated at n=1"
        assert classify(curve, Log()).violated_at == 1
        assert classify(curve, Const(1), slack=5).fits

    @staticmethod
    def test_exponential_curve_escapes_polynomials():
        from compworkbench.complexity import WorstCaseCurve

        curve = WorstCaseCurve(machine="doubling", resource="time", points={n: 2 ** n for n in range(12)})
        assert classify(curve, Exp(2)).fits
        assert not classify(curve, Poly(2), slack=8).fits


class TestRegistry:
    @staticmethod
    def test_cheapest_copy(register_corpus):
        registry = {name: register_corpus[name] for name in ("copy-via-scratch", "copy-direct")}
        best, curve = min_over_registry(registry, "time", 4)
        assert best == "copy-direct"
        assert curve.points[4] == 17

    @staticmethod
    def test_rejects_different_functions(register_corpus):
        registry = {name: register_corpus[name] for name in ("copy-direct", "successor")}
        with pytest.raises(EquivalenceError):
            min_over_registry(registry, "time", 3)

    @staticmethod
    def test_empty_registry():
        with pytest.raises(ShapeError):
            min_over_registry({})


def _copy(w, tank):
    tank.burn(len(w))
    return w


def _pad_exponentially(w, tank):
    tank.burn(2 ** len(w))
    return "0" * 2 ** len(w)


def _cube_then_forget(w, tank):
    tank.burn(len(w) ** 3)
    return ""


class TestPolynomialReductions:
    @staticmethod
    @pytest.mark.parametrize("build", [halt_to_nonempty, halt_to_print42])
    def test_halting_reductions_are_polynomial(build, turing_corpus, decision_corpus):
        reduction, _, _ = build()
        machines = [decision_corpus["contains-1"], decision_corpus["even-length"], turing_corpus["id"],
                    turing_corpus["successor"]]
        instances = [(x, godel_number(m)) for m in machines for x in ("", "0", "101", "0110")]
        certificate = poly_reduction(reduction, 2, instances, slack=8)
        assert certificate.certified
        assert certificate.violated_at is None
        assert len(certificate.points) >= 4

    @staticmethod
    def test_empty_to_equiv_is_polynomial(turing_corpus, decision_corpus):
        reduction, _, _ = empty_to_equiv()
        instances = [godel_number(m) for m in list(turing_corpus.values()) + list(decision_corpus.values())]
        assert poly_reduction(reduction, 2, instances, slack=8).certified

    @staticmethod
    def test_exponential_blowup_is_caught(binary):
        blowup = Reduction("blowup", _pad_exponentially, "words", "words")
        certificate = poly_reduction(blowup, 1, list(binary.words(4)), slack=1)
        assert not certificate.certified
        assert certificate.violated_at == 2

    @staticmethod
    def test_work_counts_even_when_the_image_is_small(binary):
        busy = Reduction("busy", _cube_then_forget, "words", "words")
        certificate = poly_reduction(busy, 1, list(binary.words(4)), slack=1)
        assert not certificate.certified
        assert certificate.violated_at == 2
        assert certificate.points == {0: 0, 1: 1, 2: 8, 3: 27, 4: 64}
        assert poly_reduction(busy, 3, list(binary.words(4)), slack=1).certified

    @staticmethod
    def test_tank_caps_the_metered_steps(binary):
        blowup = Reduction("blowup", _pad_exponentially, "words", "words")
        certificate = poly_reduction(blowup, 1, list(binary.words(4)), slack=1, fuel=5)
        assert certificate.points == {0: 1, 1: 2, 2: 4, 3: 5, 4: 5}


class TestSavitch:
    @staticmethod
    @pytest.mark.parametrize("s,depth,cells", [(2, 3, 31), (3, 3, 38), (4, 4, 64), (5, 4, 74), (6, 4, 84)])
    def test_frame_stack_on_branching_chain(decision_corpus, s, depth, cells):
        m = decision_corpus["branching-chain"]
        report = savitch_reach(m, "1" * s, s, time_bound=s + 1)
        assert report.accepts
        assert report.universe == 3 * (s + 1)
        assert report.time_bound == 2 ** (depth - 1)
        assert report.depth == depth
        # top and bottom frames hold two configurations of s + 2 cells, the others three
        assert report.space_cells == cells
        assert report.space_cells <= 8 * s * s

    @staticmethod
    def test_default_horizon_covers_the_universe(decision_corpus):
        report = savitch_reach(decision_corpus["branching-chain"], "11", 2)
        assert report.universe == 9
        assert report.time_bound == 16
        assert report.depth == 5
        assert report.space_cells == 57

    @staticmethod
    def test_breadth_first_work_outgrows_savitch_space(decision_corpus):
        m = decision_corpus["branching-chain"]
        expansions = [bfs_expansions(m, "1" * s, 100000) for s in range(2, 7)]
        assert expansions == [6, 11, 19, 32, 53]
        space = [savitch_reach(m, "1" * s, s, time_bound=s + 1).space_cells for s in range(2, 7)]
        assert expansions[-1] / expansions[0] > space[-1] / space[0]

    @staticmethod
    @pytest.mark.parametrize("word", ["000", "010", "001", "1"])
    def test_agrees_with_bounded_acceptance(decision_corpus, word):
        m = decision_corpus["contains-1"]
        report = savitch_reach(m, word, 3)
        assert report.accepts == accepts_within(m, (word,), report.time_bound)

    @staticmethod
    def test_time_bound(decision_corpus):
        m = decision_corpus["branching-chain"]
        assert not savitch_reach(m, "11", 2, time_bound=1).accepts
        assert savitch_reach(m, "11", 2, time_bound=8).accepts

    @staticmethod
    def test_universe_of_a_writing_machine(turing_corpus):
        universe = configuration_universe(turing_corpus["append-1"], "0", 1)
        # two states, input fixed, output cells over {_, 0, 1}, heads 0..1 on two tapes
        assert len(universe) == 2 * 3 * 4
        assert universe_size(turing_corpus["append-1"], "0", 1) == 24

    @staticmethod
    def test_limits(decision_corpus, binary):
        m = decision_corpus["branching-chain"]
        with pytest.raises(ResourceError):
            savitch_reach(m, "11", 2, budget=5)
        with pytest.raises(ShapeError):
            savitch_reach(m, "11", 0)
        with pytest.raises(ResourceError):
            savitch_reach(determinize(m), "11", 2)
        with pytest.raises(UnsupportedError):
            savitch_reach(twist_machine(1, 1, binary), "1", 2)


class TestSpecialCases:
    @staticmethod
    def test_identity_is_affine(turing_corpus):
        coefficients, residual = fit_polynomial(worst_case(turing_corpus["id"], "time", 6), 1)
        assert coefficients == pytest.approx([1.0, 1.0])
        assert residual == pytest.approx(0.0, abs=1e-9)

    @staticmethod
    def test_no_input_machine_has_one_point(binary):
        assert worst_case(identity_machine(0, binary), "time", 3).points == {0: 0}

    @staticmethod
    def test_space_never_exceeds_time(turing_corpus, binary):
        for m in turing_corpus.values():
            for word in binary.words(3):
                sample = meter(m, (word,), 200)
                assert sample.space <= sample.time

    @staticmethod
    def test_identity_transform_is_linear(binary):
        same = Reduction("identity", _copy, "words", "words")
        assert poly_reduction(same, 1, list(binary.words(4)), slack=1).certified

    @staticmethod
    def test_one_step_acceptance_needs_one_frame(decision_corpus):
        report = savitch_reach(decision_corpus["one-step"], "", 1, time_bound=1)
        assert report.accepts
        assert report.depth == 1

    @staticmethod
    @pytest.mark.parametrize("name", ["contains-1", "ends-with-1", "one-step", "even-length", "always-accept",
                                      "branching-chain"])
    def test_agrees_with_breadth_first_search(decision_corpus, binary, name):
        m = decision_corpus[name]
        for word in binary.words(3):
            report = savitch_reach(m, word, max(len(word), 1), time_bound=8)
            assert report.accepts == isinstance(run(determinize(m), (word,), 10000), Halted), word
