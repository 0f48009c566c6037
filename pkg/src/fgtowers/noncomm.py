"""Swap automorphisms against candidate word-map group operations.

A candidate operation is a word map ``(x, y) -> op(x, y)`` on ``l``-tuples,
given by one template per output coordinate over the variables
``x_1..x_l`` (indices ``1..l``), ``y_1..y_l`` (indices ``l+1..2l``) and
optional fixed parameters (indices ``2l+1..``).  If ``op`` were commutative,
swapping the fresh generator used by ``a'`` with the one used by ``a`` would
fix ``op(a, a')``; the check reports whether that fails outright or only up
to conjugacy.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import GeneratorCollision
from .imaginaries import conj_class_key
from .words import Word, is_conjugate_free, substitute


@dataclass(frozen=True)
class CandidateOperation:
    templates: tuple  # of Word, one per output coordinate
    arity: int = 1
    parameters: tuple = ()  # of Word

    def __post_init__(self):
        object.__setattr__(self, "templates", tuple(self.templates))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if self.arity < 1:
            raise ValueError("arity must be positive")
        top = 2 * self.arity + len(self.parameters)
        for t in self.templates:
            if t.max_generator() > top:
                raise ValueError(f"template {t!r} uses variables beyond {top}")

    def __call__(self, x: Sequence[Word], y: Sequence[Word]) -> tuple:
        if len(x) != self.arity or len(y) != self.arity:
            raise ValueError("operand tuples must match the arity")
        args = list(x) + list(y) + list(self.parameters)
        return tuple(substitute(t, args) for t in self.templates)


def concatenation() -> CandidateOperation:
    return CandidateOperation((Word([1, 2]),))


def swap_automorphism(i: int, j: int, w: Word) -> Word:
    """Apply the automorphism exchanging generators ``e_i`` and ``e_j``."""
    if i == j:
        raise ValueError("swap needs two distinct generators")
    swap = {i: j, j: i}
    return Word([(1 if x > 0 else -1) * swap.get(abs(x), abs(x)) for x in w.letters])


@dataclass(frozen=True)
class Verdict:
    kind: str  # commutes_exactly | fails_equality | fails_only_up_to_conjugacy
    value: tuple
    swapped: tuple

    @property
    def witness(self):
        return (self.value, self.swapped) if self.kind == "fails_equality" else None


def noncommutativity_check(op: CandidateOperation, a: Sequence[Word], fresh_index: int) -> Verdict:
    """Compare ``op(a, a')`` with its image under the swap ``e_{n+1} <-> e_{n+2}``.

    ``a'`` is ``a`` with ``e_{n+1}`` renamed to ``e_{n+2} = e_fresh``; the image
    of ``op(a, a')`` under the swap equals ``op(a', a)``.
    """
    a = tuple(a)
    old = fresh_index - 1
    if old < 1 or not any(old in w.generators() for w in a):
        raise ValueError(f"a must use generator {old}")
    used = set().union(*(w.generators() for w in a), *(p.generators() for p in op.parameters))
    if fresh_index in used:
        raise GeneratorCollision(f"generator {fresh_index} is not fresh")
    a_prime = tuple(swap_automorphism(old, fresh_index, w) for w in a)
    s = op(a, a_prime)
    t = tuple(swap_automorphism(old, fresh_index, w) for w in s)
    if s == t:
        kind = "commutes_exactly"
    elif all(is_conjugate_free(x, y) for x, y in zip(s, t)):
        kind = "fails_only_up_to_conjugacy"
    else:
        kind = "fails_equality"
    return Verdict(kind, s, t)


def multi_summand_class_count(op_N: Word, assignments: Sequence[Word], perms) -> int:
    """Distinct conjugacy classes of ``op_N`` evaluated on permuted summands."""
    assignments = list(assignments)
    if len(assignments) < 2:
        raise ValueError("need at least two summands")
    seen: set = set()
    for w in assignments:
        g = w.generators()
        if g & seen:
            raise GeneratorCollision("summands must use distinct fresh generators")
        seen |= g
    keys = set()
    for sigma in perms:
        args = [assignments[sigma[i] - 1] for i in range(len(assignments))]
        keys.add(conj_class_key(substitute(op_N, args)))
    return len(keys)
