"""The basic equivalence relations on a free group and canonical class keys.

* E1: conjugacy of elements.
* E2_m: pairs ``(a, b)``; ``b`` fixes a cyclic centralizer ``<r>`` and ``a`` is
  taken modulo ``<r^m>``.
* E3_{m,n}: triples ``(a, b, c)``; ``b`` is taken modulo ``<r_a^m> b <r_c^n>``.

Triviality is read literally: ``(a1, b1)`` and ``(a2, b2)`` with exactly one
of ``b1, b2`` trivial are not E2-equivalent, and likewise for the outer entries
of an E3 triple.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil

from .errors import TrivialWord
from .rational import accepts_reduced, double_coset_automaton
from .words import (
    FreeGroup,
    Word,
    centralizer_generator,
    cyclic_reduce,
    invert,
    is_conjugate_free,
    min_rotation,
    multiply,
    power,
    power_membership,
    shortlex_key,
)


def _fmt(w: Word, group: FreeGroup | None) -> str:
    if group is None:
        return str(w)
    return group.format(w)


@dataclass(frozen=True)
class ConjClassKey:
    canonical: Word

    def text(self, group: FreeGroup | None = None) -> str:
        return f"E1[ {_fmt(self.canonical, group)} ]"

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class CosetClassKey:
    m: int
    b_canonical: Word | None
    a_rep: Word | None
    degenerate: bool = False

    def text(self, group: FreeGroup | None = None) -> str:
        if self.degenerate:
            return f"E2^{self.m}[ 1 ]"
        return f"E2^{self.m}[ {_fmt(self.b_canonical, group)} | {_fmt(self.a_rep, group)} ]"

    def __str__(self):
        return self.text()


@dataclass(frozen=True)
class DoubleCosetClassKey:
    m: int
    n: int
    a_canonical: Word | None
    b_rep: Word | None
    c_canonical: Word | None
    degenerate_left: bool = False
    degenerate_right: bool = False

    def text(self, group: FreeGroup | None = None) -> str:
        head = f"E3^{{{self.m},{self.n}}}"
        if self.degenerate_left:
            return f"{head}[ 1 | * | * ]"
        if self.degenerate_right:
            return f"{head}[ * | * | 1 ]"
        parts = (self.a_canonical, self.b_rep, self.c_canonical)
        return f"{head}[ " + " | ".join(_fmt(w, group) for w in parts) + " ]"

    def __str__(self):
        return self.text()


# ---------------------------------------------------------------------------
# E1

def equiv_E1(w1: Word, w2: Word) -> bool:
    return is_conjugate_free(w1, w2)


def conj_class_key(w: Word) -> ConjClassKey:
    core, _ = cyclic_reduce(w)
    return ConjClassKey(min_rotation(core) if core else core)


# ---------------------------------------------------------------------------
# E2

def _core_len(w: Word) -> int:
    return len(cyclic_reduce(w)[0])


def coset_min(a: Word, r: Word, m: int) -> tuple[Word, int]:
    """Shortlex-least element of ``a <r^m>`` and the exponent ``k`` reaching it.

    ``|a r^N| >= |N| p - |a|`` for ``p`` the cyclic length of ``r``, so no
    exponent with ``|N| > 2|a|/p`` beats ``a`` itself.
    """
    window = (2 * len(a)) // (m * _core_len(r)) + 1
    step = power(r, m)
    back = invert(step)
    best, best_k = a, 0
    key = shortlex_key(a)
    fwd, bwd = a, a
    for k in range(1, window + 1):
        fwd = multiply(fwd, step)
        bwd = multiply(bwd, back)
        for cand, kk in ((fwd, k), (bwd, -k)):
            ck = shortlex_key(cand)
            if ck < key:
                best, best_k, key = cand, kk, ck
    return best, best_k


def equiv_E2(m: int, p1: tuple[Word, Word], p2: tuple[Word, Word]) -> bool:
    (a1, b1), (a2, b2) = p1, p2
    if not b1 and not b2:
        return True
    if not b1 or not b2:
        return False
    r = centralizer_generator(b1)
    if centralizer_generator(b2) != r:
        return False
    return power_membership(multiply(invert(a1), a2), r, m) is not None


def coset_class_key(m: int, p: tuple[Word, Word]) -> CosetClassKey:
    a, b = p
    if not b:
        return CosetClassKey(m, None, None, degenerate=True)
    r = centralizer_generator(b)
    rep, _ = coset_min(a, r, m)
    return CosetClassKey(m, r, rep)


# ---------------------------------------------------------------------------
# E3

def witness_bound(m: int, n: int, a: Word, c: Word, b1: Word, b2: Word) -> int:
    """Bound on ``|i|`` in ``a^(m i) b1 c^(n j) = b2`` beyond which no new solutions appear.

    Outside the case where ``c^-1`` is conjugate to ``a`` the three factors can
    cancel at most ``|b1| + 2(|a| + |c|)`` letters, so ``|i| m p`` is bounded
    by total length; in that conjugate case the solutions form a line and one
    of them has ``|i| <= n``.
    """
    total = len(b1) + len(b2) + 2 * (len(a) + len(c))
    return ceil(2 * total / (m * _core_len(a))) + n + 2


def _i_order(bound: int):
    yield 0
    for i in range(1, bound + 1):
        yield i
        yield -i


def double_coset_witness(m: int, n: int, a: Word, b1: Word, c: Word, b2: Word,
                         bound: int | None = None) -> tuple[int, int] | None:
    """Find ``(i, j)`` with ``a^(m i) b1 c^(n j) = b2`` by exhausting ``i``.

    For each ``i`` in the window the matching ``j`` is read off exactly from
    ``c``-power membership, so only ``i`` is searched.
    """
    if not a or not c:
        raise TrivialWord("double coset needs nontrivial a and c")
    if bound is None:
        bound = witness_bound(m, n, a, c, b1, b2)
    am, am_inv = power(a, m), power(a, -m)
    # left[i] = a^(m i) b1
    pos, neg = b1, b1
    lefts = {0: b1}
    for i in range(1, bound + 1):
        pos = multiply(am, pos)
        neg = multiply(am_inv, neg)
        lefts[i], lefts[-i] = pos, neg
    for i in _i_order(bound):
        rest = multiply(invert(lefts[i]), b2)
        j = power_membership(rest, c, n)
        if j is not None:
            return i, j
    return None


def _e3_centralizers(t1, t2):
    (a1, _, c1), (a2, _, c2) = t1, t2
    ra = centralizer_generator(a1)
    rc = centralizer_generator(c1)
    if centralizer_generator(a2) != ra or centralizer_generator(c2) != rc:
        return None
    return ra, rc


def _e3_degenerate(t1, t2) -> bool | None:
    (a1, _, c1), (a2, _, c2) = t1, t2
    if (not a1 and not a2) or (not c1 and not c2):
        return True
    if not a1 or not a2 or not c1 or not c2:
        return False
    return None


def equiv_E3(m: int, n: int, t1: tuple[Word, Word, Word], t2: tuple[Word, Word, Word]) -> bool:
    """Decide E3_{m,n} with a saturated automaton for ``<r_a^m> b1 <r_c^n>``."""
    verdict = _e3_degenerate(t1, t2)
    if verdict is not None:
        return verdict
    roots = _e3_centralizers(t1, t2)
    if roots is None:
        return False
    ra, rc = roots
    aut = double_coset_automaton(ra, m, t1[1], rc, n)
    return accepts_reduced(aut, t2[1])


def equiv_E3_bruteforce(m: int, n: int, t1, t2) -> bool:
    """Same relation as :func:`equiv_E3`, decided through :func:`double_coset_witness`."""
    verdict = _e3_degenerate(t1, t2)
    if verdict is not None:
        return verdict
    roots = _e3_centralizers(t1, t2)
    if roots is None:
        return False
    ra, rc = roots
    return double_coset_witness(m, n, ra, t1[1], rc, t2[1]) is not None


def double_coset_min(m: int, n: int, a: Word, b: Word, c: Word) -> Word:
    """Shortlex-least element of ``<a^m> b <c^n>``."""
    bound = witness_bound(m, n, a, c, b, b)
    am, am_inv = power(a, m), power(a, -m)
    best = b
    key = shortlex_key(b)
    pos, neg = b, b
    for i in range(bound + 1):
        for left in ((pos,) if i == 0 else (pos, neg)):
            cand, _ = coset_min(left, c, n)
            ck = shortlex_key(cand)
            if ck < key:
                best, key = cand, ck
        pos = multiply(am, pos)
        neg = multiply(am_inv, neg)
    return best


def double_coset_class_key(m: int, n: int, t: tuple[Word, Word, Word]) -> DoubleCosetClassKey:
    a, b, c = t
    if not a:
        return DoubleCosetClassKey(m, n, None, None, None, degenerate_left=True)
    if not c:
        return DoubleCosetClassKey(m, n, None, None, None, degenerate_right=True)
    ra, rc = centralizer_generator(a), centralizer_generator(c)
    return DoubleCosetClassKey(m, n, ra, double_coset_min(m, n, ra, b, rc), rc)


def e3_witness(m: int, n: int, t1, t2) -> tuple[int, int] | None:
    """``(i, j)`` with ``r_a^(m i) b1 r_c^(n j) = b2`` for nondegenerate triples, else ``None``."""
    if _e3_degenerate(t1, t2) is not None:
        return None
    roots = _e3_centralizers(t1, t2)
    if roots is None:
        return None
    return double_coset_witness(m, n, roots[0], t1[1], roots[1], t2[1])
