import pytest

from compworkbench.core import Alphabet
from compworkbench.encodings import godel_decode, godel_number, nat_string_codec, tuple_codec, unary_codec
from compworkbench.errors import AlphabetError, DecodeError, ShapeError
from compworkbench.turing import canonical


def _number_of_text(text):
    bits = "".join(format(b, "08b") for b in text.encode("utf-8"))
    return nat_string_codec().decode(bits)


class TestNaturals:
    @staticmethod
    def test_first_codes():
        codec = nat_string_codec()
        assert [codec.encode(n) for n in range(7)] == ["", "0", "1", "00", "01", "10", "11"]

    @staticmethod
    def test_round_trip_to_a_thousand():
        assert nat_string_codec().round_trips(range(1001)) == []

    @staticmethod
    def test_bijective_onto_short_words(binary):
        codec = nat_string_codec()
        words = list(binary.words(6))
        assert [codec.decode(w) for w in words] == list(range(len(words)))

    @staticmethod
    def test_rejects():
        codec = nat_string_codec()
        with pytest.raises(ShapeError):
            codec.encode(-1)
        with pytest.raises(DecodeError):
            codec.decode("012")

    @staticmethod
    def test_unary():
        codec = unary_codec()
        assert codec.encode(3) == "111"
        assert codec.round_trips(range(50)) == []
        with pytest.raises(DecodeError):
            codec.decode("101")


class TestTuples:
    @staticmethod
    def test_layout():
        codec = tuple_codec(2)
        assert codec.encode(("", "")) == "00"
        assert codec.encode(("1", "")) == "1010"
        assert codec.encode(("", "01")) == "011001"

    @staticmethod
    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_round_trip_and_injective(binary, k):
        codec = tuple_codec(k)
        tuples = binary.word_tuples(k, 4)
        assert codec.round_trips(tuples) == []
        assert len({codec.encode(t) for t in tuples}) == len(tuples)

    @staticmethod
    def test_wider_alphabet():
        codec = tuple_codec(1, Alphabet.of("abc"))
        assert codec.decode(codec.encode(("cab",))) == ("cab",)
        with pytest.raises(DecodeError):
            codec.decode("1011")

    @staticmethod
    @pytest.mark.parametrize("code", ["1", "000", "2", "10"])
    def test_malformed_codes(code):
        with pytest.raises(DecodeError):
            tuple_codec(2).decode(code)

    @staticmethod
    def test_encode_checks_shape():
        with pytest.raises(ShapeError):
            tuple_codec(2).encode(("0",))
        with pytest.raises(AlphabetError):
            tuple_codec(1).encode(("2",))


class TestGodelNumbering:
    @staticmethod
    def test_decode_inverts_encode(turing_corpus, decision_corpus):
        for m in list(turing_corpus.values()) + list(decision_corpus.values()):
            assert godel_decode(godel_number(m)) == canonical(m)

    @staticmethod
    def test_distinct_machines_distinct_numbers(turing_corpus):
        numbers = {godel_number(m) for m in turing_corpus.values()}
        assert len(numbers) == len(turing_corpus)

    @staticmethod
    def test_number_ignores_rule_order(turing_corpus):
        from dataclasses import replace

        m = turing_corpus["append-1"]
        assert godel_number(replace(m, rules=tuple(reversed(m.rules)))) == godel_number(m)

    @staticmethod
    @pytest.mark.parametrize("y", [0, 5, 12345])
    def test_most_numbers_are_not_machines(y):
        with pytest.raises(DecodeError):
            godel_decode(y)

    @staticmethod
    def test_text_that_is_not_a_machine():
        with pytest.raises(DecodeError):
            godel_decode(_number_of_text("hello world\n"))
