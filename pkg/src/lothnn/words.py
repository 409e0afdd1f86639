"""Free-group words over vertex letters and the two special letters X, Y.

A letter is a ``(symbol, sign)`` pair and a word is a tuple of letters.
Vertex symbols are strings; the special letters are members of
:class:`Special` so they can never collide with a vertex name.
"""

from __future__ import annotations

import enum
from typing import Iterable, NamedTuple, Union


class Special(enum.Enum):
    X = "X"
    Y = "Y"

    def __str__(self):
        return self.value


X = Special.X
Y = Special.Y

Symbol = Union[str, Special]


class Letter(NamedTuple):
    symbol: Symbol
    sign: int

    def inverse(self) -> Letter:
        return Letter(self.symbol, -self.sign)

    def __str__(self):
        return f"{self.symbol}" if self.sign > 0 else f"{self.symbol}^-1"


Word = tuple  # tuple[Letter, ...]


def letter(symbol: Symbol, sign: int = 1) -> Letter:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return Letter(symbol, sign)


def word(*letters: Letter | tuple) -> Word:
    return tuple(Letter(*l) for l in letters)


def parse_word(text: str, specials: bool = True) -> Word:
    """Inverse of :func:`format_word`; ``X``/``Y`` become special letters when ``specials``."""
    out = []
    for tok in text.split():
        sign = 1
        if tok.endswith("^-1"):
            tok, sign = tok[:-3], -1
        sym: Symbol = tok
        if specials and tok in ("X", "Y"):
            sym = Special(tok)
        out.append(Letter(sym, sign))
    return tuple(out)


def format_word(w: Iterable[Letter]) -> str:
    return " ".join(str(l) for l in w)


def inverse(w: Word) -> Word:
    return tuple(l.inverse() for l in reversed(w))


def free_reduce(w: Iterable[Letter]) -> Word:
    stack: list[Letter] = []
    for l in w:
        if stack and stack[-1].symbol == l.symbol and stack[-1].sign == -l.sign:
            stack.pop()
        else:
            stack.append(l)
    return tuple(stack)


def _cyclic_core(w: Word) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i].symbol == w[j - 1].symbol and w[i].sign == -w[j - 1].sign:
        i += 1
        j -= 1
    return w[i:j]


def symbol_key(s: Symbol) -> tuple:
    return (1, s.value) if isinstance(s, Special) else (0, s)


def word_key(w: Word) -> tuple:
    return tuple((symbol_key(l.symbol), l.sign) for l in w)


def rotations(w: Word) -> list[Word]:
    return [w[i:] + w[:i] for i in range(max(len(w), 1))]


class CyclicWord:
    """A conjugacy class representative; equality ignores rotation."""

    __slots__ = ("word",)

    def __init__(self, w: Iterable[Letter]):
        self.word: Word = tuple(w)

    def reduced(self) -> Word:
        return _cyclic_core(self.word)

    def canonical(self, allow_inverse: bool = False) -> Word:
        core = self.reduced()
        candidates = rotations(core)
        if allow_inverse:
            candidates += rotations(inverse(core))
        return min(candidates, key=word_key)

    def __eq__(self, other):
        if not isinstance(other, CyclicWord):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __len__(self):
        return len(self.word)

    def __iter__(self):
        return iter(self.word)

    def __repr__(self):
        return f"CyclicWord({format_word(self.word)!r})"


def cyclic_reduce(w: Word) -> CyclicWord:
    return CyclicWord(_cyclic_core(w))


def cyclic_equal(a, b, allow_inverse: bool = False) -> bool:
    a = a if isinstance(a, CyclicWord) else CyclicWord(a)
    b = b if isinstance(b, CyclicWord) else CyclicWord(b)
    ra, rb = a.reduced(), b.reduced()
    if _is_rotation(ra, rb):
        return True
    return allow_inverse and _is_rotation(ra, inverse(rb))


def _is_rotation(a: Word, b: Word) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    doubled = a + a
    first = b[0]
    return any(doubled[i] == first and doubled[i:i + len(b)] == b for i in range(len(a)))


def exponent_sum(w: Iterable[Letter], s: Symbol) -> int:
    return sum(l.sign for l in w if l.symbol == s)


def occurrences(w: Iterable[Letter], s: Symbol) -> int:
    return sum(1 for l in w if l.symbol == s)


def positivity(w: Iterable[Letter], s: Symbol) -> str:
    """One of ``absent``, ``strictly-positive``, ``strictly-negative``, ``mixed``.

    ``positive``/``negative`` are the non-strict classes; a word with at least
    one occurrence is always strict or mixed, so they only arise via
    :func:`is_positive` / :func:`is_negative`.
    """
    signs = {l.sign for l in w if l.symbol == s}
    if not signs:
        return "absent"
    if signs == {1}:
        return "strictly-positive"
    if signs == {-1}:
        return "strictly-negative"
    return "mixed"


def is_positive(w, s) -> bool:
    return positivity(w, s) in ("absent", "strictly-positive")


def is_negative(w, s) -> bool:
    return positivity(w, s) in ("absent", "strictly-negative")


def is_alternating(w: Word) -> bool:
    """Even length and signs alternate cyclically."""
    if len(w) % 2:
        return False
    return all(w[i].sign != w[(i + 1) % len(w)].sign for i in range(len(w)))


def substitute(w: Word, mapping: dict) -> Word:
    """Replace each symbol by a word (inverse letters by the inverse word)."""
    out: list[Letter] = []
    for l in w:
        image = mapping.get(l.symbol, (Letter(l.symbol, 1),))
        out.extend(image if l.sign > 0 else inverse(image))
    return tuple(out)
