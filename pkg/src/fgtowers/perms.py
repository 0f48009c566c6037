"""Permutations of ``1..n`` as image tuples: ``p[i - 1]`` is the image of ``i``."""
from __future__ import annotations

from itertools import permutations

Perm = tuple


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def transposition(n: int, i: int, j: int) -> Perm:
    p = list(range(1, n + 1))
    p[i - 1], p[j - 1] = j, i
    return tuple(p)


def product(n: int, *cycles: tuple[int, ...]) -> Perm:
    """The permutation written in cycle notation, e.g. ``product(6, (1, 3), (2, 4))``."""
    p = list(range(1, n + 1))
    for cyc in reversed(cycles):
        q = list(range(1, n + 1))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            q[a - 1] = b
        p = [q[x - 1] for x in p]
    return tuple(p)


def compose(s: Perm, t: Perm) -> Perm:
    """``s t``: apply ``t`` first."""
    return tuple(s[t[i] - 1] for i in range(len(t)))


def inverse(p: Perm) -> Perm:
    q = [0] * len(p)
    for i, x in enumerate(p, 1):
        q[x - 1] = i
    return tuple(q)


def symmetric_group(n: int):
    return [tuple(p) for p in permutations(range(1, n + 1))]


def cycles(p: Perm) -> str:
    seen = set()
    out = []
    for start in range(1, len(p) + 1):
        if start in seen or p[start - 1] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p[start - 1]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p[x - 1]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"
