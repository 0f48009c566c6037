"""Seeded random words and star elements.

All randomness goes through :class:`random.Random` (Mersenne Twister).  Each
trial gets its own generator seeded from a SHA-256 digest of
``(seed, trial, tags)``, so results do not depend on trial order.
"""
from __future__ import annotations

import hashlib
import random

from .stars import StarPresentation, StarReducedForm, in_A, star_reduce
from .words import Word


def substream(seed: int, trial: int, *tags) -> random.Random:
    text = ":".join(str(x) for x in (seed, trial) + tags)
    digest = hashlib.sha256(text.encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def random_word(rng: random.Random, rank: int, length: int) -> Word:
    """A uniformly built reduced word of exactly ``length`` letters."""
    letters: list[int] = []
    while len(letters) < length:
        x = rng.randint(1, rank) * rng.choice((1, -1))
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return Word(letters)


def random_ray_sequence(rng: random.Random, n: int, length: int, all_rays: bool = False,
                        cyclic: bool = True) -> list[int]:
    """Rays with distinct neighbours (also across the ends when ``cyclic``).

    With two rays a cyclic sequence must alternate, so an odd ``length`` is
    rounded down.
    """
    if all_rays and length < n:
        raise ValueError("too short to visit every ray")
    if cyclic and n == 2:
        length -= length % 2
        start = rng.randint(1, 2)
        return [start if i % 2 == 0 else 3 - start for i in range(length)]
    if all_rays:
        seq = list(range(1, n + 1))
        rng.shuffle(seq)
    else:
        seq = [rng.randint(1, n)] if length else []
    while len(seq) < length:
        i = rng.randint(0, len(seq))
        left = seq[i - 1] if i > 0 else (seq[-1] if cyclic else None)
        right = seq[i] if i < len(seq) else (seq[0] if cyclic else None)
        choices = [r for r in range(1, n + 1) if r != left and r != right]
        seq.insert(i, rng.choice(choices))
    return seq


def random_syllable(rng: random.Random, p: StarPresentation, max_letters: int) -> Word:
    while True:
        w = random_word(rng, p.factor_rank, rng.randint(1, max_letters))
        if not in_A(p.regime, w):
            return w


def random_star_element(rng: random.Random, p: StarPresentation, length: int, max_letters: int = 2,
                        all_rays: bool = False, cyclic: bool = True) -> StarReducedForm:
    """An element with ``length`` syllables of at most ``max_letters`` letters each."""
    rays = random_ray_sequence(rng, p.n_rays, length, all_rays, cyclic) if length else []
    return star_reduce(p, [(r, random_syllable(rng, p, max_letters)) for r in rays])


def random_bounded_star_element(rng: random.Random, p: StarPresentation, n_rays: int,
                                max_total: int, all_rays: bool = True) -> StarReducedForm:
    """Rank-1 style sample: at least ``n_rays`` syllables and at most ``max_total`` letters."""
    length = rng.randint(n_rays, max_total) if all_rays else rng.randint(1, max_total)
    rays = random_ray_sequence(rng, p.n_rays, length, all_rays, True)
    budget = max_total - length
    raw = []
    for r in rays:
        extra = rng.randint(0, min(budget, 1))
        budget -= extra
        while True:
            w = random_word(rng, p.factor_rank, 1 + extra)
            if not in_A(p.regime, w):
                break
        raw.append((r, w))
    return star_reduce(p, raw)
