"""Encode/decode pairs between naturals, word tuples and single words, and machine numbering.

None of these encodings is canonical; each is just one that a programmer might pick.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, List, Sequence, Tuple

from .core import Alphabet, Word
from .errors import AlphabetError, DecodeError, FormatError, ShapeError
from .regmachine import nat_to_unary, unary_to_nat
from .turing import TuringMachine, parse_tm, serialize_tm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Codec:
    encode: Callable[[Any], Word] = field(compare=False)
    decode: Callable[[Word], Any] = field(compare=False)
    domain: str

    def round_trips(self, values: Iterable[Any]) -> List[Any]:
        """Values where decode(encode(v)) != v; empty when the codec law holds."""
        return [v for v in values if self.decode(self.encode(v)) != v]


# -- naturals <-> binary words ------------------------------------------------------

def _nat_to_word(n: int) -> Word:
    if n < 0:
        raise ShapeError(f"naturals only, got {n}")
    digits = []
    while n > 0:
        if n % 2:
            digits.append("0")
            n = (n - 1) // 2
        else:
            digits.append("1")
            n = (n - 2) // 2
    return "".join(reversed(digits))


def _word_to_nat(word: Word) -> int:
    n = 0
    for glyph in word:
        if glyph not in "01":
            raise DecodeError(f"not a binary word: {word!r}")
        n = 2 * n + (1 if glyph == "0" else 2)
    return n


def nat_string_codec() -> Codec:
    """Bijective base 2: 0 is the empty word, then "0", "1", "00", "01", ..."""
    return Codec(_nat_to_word, _word_to_nat, "nat<->{0,1}*")


def unary_codec() -> Codec:
    """Naturals as runs of '1', the convention register programs use on words."""

    def decode(word: Word) -> int:
        if set(word) - {"1"}:
            raise DecodeError(f"not a unary word: {word!r}")
        return unary_to_nat(word)

    return Codec(nat_to_unary, decode, "nat<->1*")


# -- word tuples <-> one binary word ------------------------------------------------

def tuple_codec(k: int, alphabet: Alphabet = Alphabet.binary()) -> Codec:
    """Self-delimiting concatenation of k words into one binary word.

    Each component is written as its length in unary ("1" * len + "0") followed by
    the fixed-width binary index of each glyph.
    """
    if k < 0:
        raise ShapeError("arity must be non-negative")
    symbols = alphabet.symbols
    width = (len(symbols) - 1).bit_length()

    def encode(words: Sequence[Word]) -> Word:
        words = tuple(words)
        if len(words) != k:
            raise ShapeError(f"expected a {k}-tuple, got {len(words)} components")
        parts = []
        for word in words:
            alphabet.check_word(word)
            parts.append("1" * len(word) + "0")
            parts.extend(format(symbols.index(g), f"0{width}b") if width else "" for g in word)
        return "".join(parts)

    def decode(code: Word) -> Tuple[Word, ...]:
        if set(code) - {"0", "1"}:
            raise DecodeError(f"tuple codes are binary, got {code!r}")
        words, at = [], 0
        for _ in range(k):
            length = 0
            while at < len(code) and code[at] == "1":
                length += 1
                at += 1
            if at >= len(code):
                raise DecodeError(f"truncated length prefix in {code!r}")
            at += 1
            glyphs = []
            for _ in range(length):
                chunk = code[at:at + width]
                if len(chunk) < width:
                    raise DecodeError(f"truncated glyph in {code!r}")
                index = int(chunk, 2) if width else 0
                if index >= len(symbols):
                    raise DecodeError(f"glyph index {index} outside the alphabet")
                glyphs.append(symbols[index])
                at += width
            words.append("".join(glyphs))
        if at != len(code):
            raise DecodeError(f"{len(code) - at} trailing bits after a {k}-tuple")
        return tuple(words)

    return Codec(encode, decode, f"({''.join(symbols)}*)^{k}<->{{0,1}}*")


# -- machine numbering --------------------------------------------------------------

def godel_number(m: TuringMachine) -> int:
    """Canonical ``.tm`` text, as UTF-8 bits, read as a natural."""
    text = serialize_tm(m, canonical=True)
    bits = "".join(format(b, "08b") for b in text.encode("utf-8"))
    return _word_to_nat(bits)


def godel_decode(y: int, name: str = "decoded") -> TuringMachine:
    """The machine numbered y; DecodeError for numbers that are not well-formed machine texts."""
    bits = _nat_to_word(y)
    if len(bits) % 8:
        raise DecodeError(f"{y} does not spell whole bytes")
    raw = bytes(int(bits[i:i + 8], 2) for i in range(0, len(bits), 8))
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise DecodeError(f"{y} is not UTF-8 text")
    try:
        return parse_tm(text, name=name)
    except (FormatError, ShapeError, AlphabetError, ValueError) as e:
        logger.debug(f"Number {y} is not a machine: {e}")
        raise DecodeError(f"{y} is not a well-formed machine: {e}")
