"""Rational subsets of free groups, decided by Benois saturation.

An automaton reads letters (signed ints, see :mod:`fgtowers.words`); the
label ``0`` is reserved for empty moves.  After :func:`saturate` the automaton
has no empty moves and accepts a freely reduced word exactly when some word of
the original language reduces to it.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .errors import NotSaturated, TrivialWord
from .words import Word

EPS = 0


@dataclass(frozen=True)
class WordAutomaton:
    n_states: int
    transitions: frozenset  # of (p, letter, q)
    initial: int
    accepting: frozenset
    saturated: bool = False

    @property
    def states(self) -> range:
        return range(self.n_states)

    def dump(self) -> str:
        """Line-oriented edge list for inspection; the layout may change."""
        lines = [f"# states={self.n_states} initial={self.initial} "
                 f"accepting={sorted(self.accepting)} saturated={self.saturated}"]
        for p, x, q in sorted(self.transitions):
            lines.append(f"{p} {x} {q}")
        return "\n".join(lines)


def word_automaton(w: Word) -> WordAutomaton:
    """Automaton accepting the single word ``w``."""
    t = frozenset((i, x, i + 1) for i, x in enumerate(w.letters))
    return WordAutomaton(len(w) + 1, t, 0, frozenset({len(w)}))


def automaton_of_cyclic(u: Word, m: int = 1) -> WordAutomaton:
    """Automaton for the language of the subgroup generated by ``u^m``.

    A cycle labelled ``u^m`` with every edge also readable backwards by the
    inverse letter; closed walks at the base point spell exactly the words
    equal to powers of ``u^m``.
    """
    if not u:
        raise TrivialWord("cyclic subgroup of the identity")
    if m < 1:
        raise ValueError("m must be positive")
    label = u.letters * m
    n = len(label)
    t = set()
    for i, x in enumerate(label):
        j = (i + 1) % n
        t.add((i, x, j))
        t.add((j, -x, i))
    return WordAutomaton(n, frozenset(t), 0, frozenset({0}))


def _shift(a: WordAutomaton, k: int):
    return {(p + k, x, q + k) for p, x, q in a.transitions}


def concat(a1: WordAutomaton, a2: WordAutomaton) -> WordAutomaton:
    k = a1.n_states
    t = {(p, x, q) for p, x, q in a1.transitions} | _shift(a2, k)
    t |= {(f, EPS, a2.initial + k) for f in a1.accepting}
    return WordAutomaton(k + a2.n_states, frozenset(t), a1.initial,
                         frozenset(f + k for f in a2.accepting))


def concat_word(a: WordAutomaton, w: Word, side: str = "right") -> WordAutomaton:
    if side == "right":
        return concat(a, word_automaton(w))
    if side == "left":
        return concat(word_automaton(w), a)
    raise ValueError("side must be 'left' or 'right'")


def _eps_closure(n: int, t) -> list[set]:
    eps = defaultdict(set)
    for p, x, q in t:
        if x == EPS:
            eps[p].add(q)
    closure = []
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            p = stack.pop()
            for q in eps[p]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        closure.append(seen)
    return closure


def saturate(a: WordAutomaton) -> WordAutomaton:
    """Add empty moves for every cancelling pair ``x x^-1`` until stable, then remove them."""
    if a.saturated:
        return a
    n = a.n_states
    t = set(a.transitions)
    while True:
        closure = _eps_closure(n, t)
        out = defaultdict(list)
        for p, x, q in t:
            if x != EPS:
                out[p, x].append(q)
        new = set()
        for p, x, r in t:
            if x == EPS:
                continue
            for r2 in closure[r]:
                for q in out.get((r2, -x), ()):
                    if q not in closure[p]:
                        new.add((p, EPS, q))
        if not new:
            break
        t |= new
    closure = _eps_closure(n, t)
    moves = [(p, x, q) for p, x, q in t if x != EPS]
    final = set()
    for s in range(n):
        for p, x, q in moves:
            if p in closure[s]:
                for q2 in closure[q]:
                    final.add((s, x, q2))
    acc = frozenset(s for s in range(n) if closure[s] & a.accepting)
    return WordAutomaton(n, frozenset(final), a.initial, acc, saturated=True)


def accepts_reduced(a: WordAutomaton, w: Word) -> bool:
    if not a.saturated:
        raise NotSaturated("call saturate() first")
    out = defaultdict(set)
    for p, x, q in a.transitions:
        out[p, x].add(q)
    current = {a.initial}
    for x in w.letters:
        current = {q for p in current for q in out.get((p, x), ())}
        if not current:
            return False
    return bool(current & a.accepting)


def double_coset_automaton(a: Word, m: int, b: Word, c: Word, n: int) -> WordAutomaton:
    """Saturated automaton for ``<a^m> b <c^n>``."""
    return saturate(concat(concat_word(automaton_of_cyclic(a, m), b), automaton_of_cyclic(c, n)))
