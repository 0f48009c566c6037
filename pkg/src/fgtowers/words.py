"""Words in finitely generated free groups.

A letter is a nonzero int: ``+i`` is generator ``i`` and ``-i`` its inverse
(generators are numbered from 1).  A :class:`Word` always holds a freely
reduced tuple of letters, so equality of words is equality in the group.

Letters are ordered by generator index, with ``+i`` before ``-i``; words are
ordered shortlex (shorter first, then lexicographically).  Conjugation follows
``w^g = g^-1 w g``.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ParseError, RankMismatch, TrivialWord, UnboundVariable


class Letter(NamedTuple):
    index: int
    sign: int

    def code(self) -> int:
        if self.index < 1 or self.sign not in (1, -1):
            raise ValueError(f"bad letter {self!r}")
        return self.index * self.sign


def letter_key(x: int) -> int:
    return 2 * abs(x) + (x < 0)


def _free_reduce(letters: Iterable) -> tuple:
    out: list[int] = []
    for x in letters:
        if not isinstance(x, int):
            x = Letter(*x).code()
        elif x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class Word:
    """An element of a free group, stored as its reduced letter tuple."""

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable = ()):
        object.__setattr__(self, "letters", _free_reduce(letters))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _trusted(cls, letters: tuple) -> "Word":
        w = object.__new__(cls)
        object.__setattr__(w, "letters", letters)
        object.__setattr__(w, "_hash", None)
        return w

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __reduce__(self):
        return (Word, (self.letters,))

    def __eq__(self, other):
        if isinstance(other, Word):
            return self.letters == other.letters
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(("Word", self.letters))
            object.__setattr__(self, "_hash", h)
        return h

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word._trusted(self.letters[i])
        return self.letters[i]

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        return power(self, k)

    def __lt__(self, other: "Word") -> bool:
        return shortlex_key(self) < shortlex_key(other)

    def generators(self) -> set[int]:
        return {abs(x) for x in self.letters}

    def max_generator(self) -> int:
        return max((abs(x) for x in self.letters), default=0)

    def __repr__(self):
        return f"Word({format_word(self)!r})"

    def __str__(self):
        return format_word(self)


IDENTITY = Word._trusted(())


def reduce(raw: Iterable) -> Word:
    """Freely reduce a sequence of letters (ints or ``(index, sign)`` pairs)."""
    return Word(raw)


def _join(x: tuple, y: tuple) -> tuple:
    n = min(len(x), len(y))
    i = 0
    lx = len(x)
    while i < n and x[lx - 1 - i] == -y[i]:
        i += 1
    return x[: lx - i] + y[i:]


def multiply(*words: Word) -> Word:
    acc: tuple = ()
    for w in words:
        acc = _join(acc, w.letters)
    return Word._trusted(acc)


def invert(w: Word) -> Word:
    return Word._trusted(tuple(-x for x in reversed(w.letters)))


def conjugate(w: Word, g: Word) -> Word:
    """``g^-1 w g``."""
    return multiply(invert(g), w, g)


def commutator(x: Word, y: Word) -> Word:
    """``[x, y] = x^-1 y^-1 x y``."""
    return multiply(invert(x), invert(y), x, y)


def power(w: Word, k: int) -> Word:
    if k < 0:
        w, k = invert(w), -k
    if k == 0 or not w:
        return IDENTITY
    core, conj = cyclic_reduce(w)
    # conj^-1 core^k conj reduces without touching core^k
    return multiply(invert(conj), Word._trusted(core.letters * k), conj)


def is_cyclically_reduced(w: Word) -> bool:
    return len(w) <= 1 or w.letters[0] != -w.letters[-1]


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w = conjugator^-1 core conjugator`` with ``core`` cyclically reduced."""
    t = w.letters
    i, j = 0, len(t) - 1
    while i < j and t[i] == -t[j]:
        i += 1
        j -= 1
    return Word._trusted(t[i : j + 1]), Word._trusted(t[j + 1 :])


def shortlex_key(w: Word) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w.letters))


def rotations(w: Word) -> list[Word]:
    t = w.letters
    return [Word._trusted(t[i:] + t[:i]) for i in range(max(len(t), 1))]


def min_rotation(w: Word) -> Word:
    """Shortlex-least rotation of a cyclically reduced word."""
    return min(rotations(w), key=shortlex_key)


def _encode(t: tuple) -> str:
    return "".join(chr(0x8000 + x) for x in t)


def _minimal_period(t: tuple) -> int:
    n = len(t)
    for d in range(1, n + 1):
        if n % d == 0 and t[:d] * (n // d) == t:
            return d
    return n


def primitive_root(w: Word) -> tuple[Word, int]:
    """Return ``(u, k)`` with ``w = u^k`` and ``u`` not a proper power."""
    if not w:
        raise TrivialWord("the identity has no primitive root")
    core, conj = cyclic_reduce(w)
    d = _minimal_period(core.letters)
    root = multiply(invert(conj), Word._trusted(core.letters[:d]), conj)
    return root, len(core) // d


def centralizer_generator(w: Word) -> Word:
    """Canonical generator of the centralizer of ``w``: the shortlex-smaller of root and inverse."""
    u, _ = primitive_root(w)
    v = invert(u)
    return u if shortlex_key(u) <= shortlex_key(v) else v


def is_conjugate_free(w1: Word, w2: Word) -> bool:
    c1, _ = cyclic_reduce(w1)
    c2, _ = cyclic_reduce(w2)
    if len(c1) != len(c2):
        return False
    if not c1:
        return True
    return _encode(c2.letters) in _encode(c1.letters * 2)


def power_membership(w: Word, u: Word, m: int = 1) -> int | None:
    """Return ``k`` with ``w = u^(m k)``, or ``None`` when no such integer exists."""
    if not u:
        raise TrivialWord("power_membership needs a nontrivial base")
    if m < 1:
        raise ValueError("m must be positive")
    if not w:
        return 0
    root, e = primitive_root(u)
    rc, _ = cyclic_reduce(root)
    wc, _ = cyclic_reduce(w)
    if len(wc) % len(rc):
        return None
    s = len(wc) // len(rc)
    for cand in (s, -s):
        if power(root, cand) == w:
            if cand % (e * m):
                return None
            return cand // (e * m)
    return None


def substitute(template: Word, assignment: Mapping[int, Word] | Sequence[Word]) -> Word:
    """Evaluate a word in formal variables ``x_1..x_k`` on the given words.

    ``assignment`` maps variable index to word; a sequence is read 1-based.
    """
    if not isinstance(assignment, Mapping):
        assignment = {i + 1: v for i, v in enumerate(assignment)}
    acc: tuple = ()
    for x in template.letters:
        try:
            v = assignment[abs(x)]
        except KeyError:
            raise UnboundVariable(f"x{abs(x)}") from None
        acc = _join(acc, v.letters if x > 0 else invert(v).letters)
    return Word._trusted(acc)


# ---------------------------------------------------------------------------
# text format

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_TOKEN_RE = re.compile(r"^(?P<base>[A-Za-z][A-Za-z0-9_]*)(?:\^(?P<exp>-?\d+))?$")
_ALIAS_RE = re.compile(r"^x(\d+)$")


def default_names(rank: int) -> list[str]:
    if rank <= 20:
        return list("abcdefghijklmnopqrst"[:rank])
    return [f"x{i}" for i in range(1, rank + 1)]


class FreeGroup:
    """A free group of fixed rank with named generators.

    The group is the context for parsing and printing, and its checked
    operations reject words that use generators beyond its rank.
    """

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        names = list(names) if names is not None else default_names(rank)
        if len(names) != rank:
            raise ValueError(f"expected {rank} generator names, got {len(names)}")
        index: dict[str, int] = {}
        for i, name in enumerate(names, 1):
            if not _NAME_RE.match(name) or name in index:
                raise ValueError(f"bad or repeated generator name {name!r}")
            index[name] = i
        upper: dict[str, int] = {}
        for name, i in index.items():
            if len(name) == 1 and name.islower():
                if name.upper() in index:
                    raise ValueError(f"{name.upper()!r} clashes with the inverse of {name!r}")
                upper[name.upper()] = i
        self.rank = rank
        self.names = tuple(names)
        self._index = index
        self._upper = upper

    @classmethod
    def named(cls, prefix: str, rank: int) -> "FreeGroup":
        return cls(rank, [f"{prefix}{i}" for i in range(1, rank + 1)])

    def __repr__(self):
        return f"FreeGroup({self.rank}, names={list(self.names)!r})"

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def generator(self, i: int) -> Word:
        self._check_index(i)
        return Word._trusted((i,))

    def gens(self) -> list[Word]:
        return [Word._trusted((i,)) for i in range(1, self.rank + 1)]

    def _check_index(self, i: int):
        if not 1 <= i <= self.rank:
            raise RankMismatch(f"generator {i} outside rank {self.rank}")

    def check(self, w: Word) -> Word:
        if w.max_generator() > self.rank:
            raise RankMismatch(f"{w.letters} uses generators beyond rank {self.rank}")
        return w

    def _token(self, tok: str) -> list[int]:
        m = _TOKEN_RE.match(tok)
        if m:
            base, exp = m.group("base"), m.group("exp")
            k = int(exp) if exp is not None else 1
            if base in self._index:
                i = self._index[base]
            elif base in self._upper:
                i, k = self._upper[base], -k
            elif base == base.upper() and base.lower() in self._index:
                i, k = self._index[base.lower()], -k
            elif _ALIAS_RE.match(base) and 1 <= int(base[1:]) <= self.rank:
                i = int(base[1:])
            else:
                i = None
            if i is not None:
                return [i if k > 0 else -i] * abs(k)
        # compact spelling of single-letter generators, e.g. "abAB"
        if all(ch in self._index or ch in self._upper for ch in tok):
            return [self._index[ch] if ch in self._index else -self._upper[ch] for ch in tok]
        raise ParseError(f"unknown token {tok!r} for {self!r}")

    def parse(self, text: str) -> Word:
        letters: list[int] = []
        for tok in text.split():
            if tok == "1":
                continue
            letters.extend(self._token(tok))
        return Word(letters)

    def format(self, w: Word) -> str:
        self.check(w)
        if not w:
            return "1"
        out = []
        for x in w.letters:
            name = self.names[abs(x) - 1]
            if x > 0:
                out.append(name)
            elif len(name) == 1 and name.islower():
                out.append(name.upper())
            else:
                out.append(name + "^-1")
        return " ".join(out)

    def __call__(self, text: str) -> Word:
        return self.parse(text)

    # checked arithmetic
    def multiply(self, *words: Word) -> Word:
        return multiply(*(self.check(w) for w in words))

    def invert(self, w: Word) -> Word:
        return invert(self.check(w))

    def conjugate(self, w: Word, g: Word) -> Word:
        return conjugate(self.check(w), self.check(g))


def format_word(w: Word) -> str:
    return FreeGroup(max(w.max_generator(), 0)).format(w) if w else "1"


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse with default generator names; the rank is inferred when omitted."""
    if rank is None:
        rank = 20
        if re.search(r"\bx\d+", text):
            rank = max([20] + [int(k) for k in re.findall(r"x(\d+)", text)])
    return FreeGroup(rank).parse(text)
