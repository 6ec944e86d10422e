import pytest

from compworkbench import library
from compworkbench.core import FuelExhausted, Halted
from compworkbench.errors import FormatError, ShapeError
from compworkbench.recfun import (Comp, Mu, PrimRec, Proj, Succ, Zero, ackermann, arity, eval_rec, format_rf,
                                  is_primitive_recursive, parse_rf, rec_semantics)


def _value(e, args, fuel=200000):
    outcome = eval_rec(e, args, fuel)
    assert isinstance(outcome, Halted)
    return outcome.outputs[0]


class TestArity:
    @staticmethod
    def test_corpus_arities():
        corpus = library.recfun_corpus()
        assert arity(corpus["add"]) == 2
        assert arity(corpus["pred"]) == 1
        assert arity(corpus["const-1"]) == 1
        assert arity(corpus["root-of-distance-3"]) == 0

    @staticmethod
    @pytest.mark.parametrize("expr", [
        Proj(2, 3),
        Proj(1, 0),
        Comp(Succ(), (Proj(2, 1), Proj(1, 1))),
        Comp(Proj(2, 1), (Succ(),)),
        PrimRec(Zero(1), Succ()),
        Mu(Zero(0)),
    ])
    def test_malformed(expr):
        with pytest.raises(ShapeError):
            arity(expr)


class TestEvaluation:
    @staticmethod
    @pytest.mark.parametrize("name,args,expected", [
        ("add", (2, 3), 5),
        ("add", (0, 0), 0),
        ("mul", (3, 4), 12),
        ("pred", (0,), 0),
        ("pred", (5,), 4),
        ("monus", (5, 2), 3),
        ("monus", (2, 5), 0),
        ("abs-diff", (2, 5), 3),
        ("const-1", (7,), 1),
        ("root-of-distance-3", (), 3),
    ])
    def test_corpus_values(name, args, expected):
        assert _value(library.recfun_corpus()[name], args) == expected

    @staticmethod
    def test_mu_without_root_runs_out_of_fuel():
        assert eval_rec(Mu(Succ()), (), 50) == FuelExhausted(50)

    @staticmethod
    def test_fuel_counts_node_visits():
        assert eval_rec(Succ(), (4,), 1) == Halted((5,), 1)
        assert isinstance(eval_rec(Comp(Succ(), (Succ(),)), (0,), 2), FuelExhausted)

    @staticmethod
    def test_argument_count():
        with pytest.raises(ShapeError):
            eval_rec(library.ADD, (1,), 10)

    @staticmethod
    def test_primitive_recursive():
        assert is_primitive_recursive(library.MUL)
        assert not is_primitive_recursive(Mu(library.distance_to(2)))

    @staticmethod
    def test_semantics_is_named_by_text():
        f = rec_semantics(library.PRED)
        assert f.name == "(primrec (z 0) (proj 2 1))"
        assert f((3,), 100).outputs == (2,)


class TestAckermann:
    @staticmethod
    @pytest.mark.parametrize("m,n,expected", [(3, 3, 61), (2, 3, 9), (1, 2, 4)])
    def test_values(m, n, expected):
        outcome = ackermann(m, n, 100000)
        assert isinstance(outcome, Halted)
        assert outcome.outputs == (expected,)

    @staticmethod
    @pytest.mark.parametrize("n", range(6))
    def test_base_row(n):
        assert ackermann(0, n, 10).outputs == (n + 1,)

    @staticmethod
    def test_out_of_fuel():
        assert isinstance(ackermann(4, 1, 1000), FuelExhausted)
        with pytest.raises(ShapeError):
            ackermann(-1, 0)


class TestTextFormat:
    @staticmethod
    def test_parse_add():
        text = """
; addition by recursion on the second argument
(primrec (proj 1 1)
         (comp s (proj 3 3)))
"""
        assert parse_rf(text) == library.ADD

    @staticmethod
    def test_round_trip():
        for e in library.recfun_corpus().values():
            assert parse_rf(format_rf(e)) == e

    @staticmethod
    def test_zero_forms():
        assert parse_rf("z") == Zero(1)
        assert parse_rf("(z 3)") == Zero(3)

    @staticmethod
    @pytest.mark.parametrize("text", ["", "(comp s)", "(proj 1 2)", "(mu s", "s s", "(proj a b)", "(loop s)"])
    def test_malformed(text):
        with pytest.raises(FormatError):
            parse_rf(text)
