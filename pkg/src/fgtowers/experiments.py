"""Randomized orbit-bound experiments shared by the command line and the test suite."""
from __future__ import annotations

from dataclasses import asdict, dataclass

from . import stars as S
from .sampling import random_bounded_star_element, random_star_element, substream
from .words import Word

LEMMAS = ("lemma42", "lemma42_missing", "lemma43", "lemma44")


@dataclass(frozen=True)
class OrbitRow:
    lemma: str
    n: int
    trial: int
    branch: str
    observed: int
    bound: int

    @property
    def passed(self) -> bool:
        return self.observed >= self.bound

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def rank_one_star(n: int) -> S.StarPresentation:
    return S.StarPresentation(n, 1, S.TrivialA())


def cyclic_star(n: int) -> S.StarPresentation:
    return S.StarPresentation(n, 2, S.CyclicA(Word([1, 2])))


def _branch(x: S.StarReducedForm) -> str:
    return "long" if x.length >= 2 else ("one" if x.length == 1 else "amalgam")


def conjugacy_trial(n: int, trial: int, seed: int, max_len: int = 12) -> OrbitRow:
    rng = substream(seed, trial, "lemma42", n)
    p = rank_one_star(n)
    g = random_bounded_star_element(rng, p, n, max_len)
    fam = S.lemma_permutation_families(n, "lemma42")
    count = S.orbit_class_count_conjugacy(p, g, fam)
    return OrbitRow("lemma42", n, trial, "all_rays", count, S.lemma_bound(n, "lemma42"))


def missing_trial(n: int, trial: int, seed: int, k: int, max_len: int = 12) -> OrbitRow:
    rng = substream(seed, trial, "lemma42_missing", n, k)
    p = rank_one_star(n)
    present = sorted(rng.sample(range(1, n + 1), n - k))
    sub = rank_one_star(max(n - k, 2))
    h = random_bounded_star_element(rng, sub, n - k, max(max_len, n - k))
    g = S.star_reduce(p, [(present[s.ray - 1], s.element) for s in h.syllables])
    fam = S.lemma_permutation_families(n, "lemma42_missing", g)
    count = S.orbit_class_count_conjugacy(p, g, fam)
    return OrbitRow("lemma42_missing", n, trial, f"k={k}", count, S.lemma_bound(n, "lemma42_missing", g))


def coset_trial(n: int, trial: int, seed: int, m: int, max_len: int = 12, regime: str = "trivial",
                branch: str = "long") -> OrbitRow:
    rng = substream(seed, trial, "lemma43", n, m, regime, branch)
    p = rank_one_star(n) if regime == "trivial" else cyclic_star(n)
    letters = 1 if regime == "trivial" else 2
    g = random_star_element(rng, p, rng.randint(1, 4), letters, cyclic=False)
    if branch == "long":
        h = random_star_element(rng, p, rng.randint(n, n + 2), letters, all_rays=True)
    elif branch == "one":
        h = random_star_element(rng, p, 1, letters)
    else:
        if regime == "trivial":
            raise ValueError("a trivial amalgam has no nontrivial length-0 elements")
        h = S.star_from_A(p, p.regime.peg ** rng.choice((1, -1, 2)))
    ctx = (g, h)
    fam = S.lemma_permutation_families(n, "lemma43", ctx)
    count = S.orbit_class_count_coset(p, m, ctx, fam)
    return OrbitRow("lemma43", n, trial, f"{regime}/{_branch(h)}/m={m}", count,
                    S.lemma_bound(n, "lemma43", ctx))


def double_coset_trial(n: int, trial: int, seed: int, q: int, k: int, regime: str = "trivial") -> OrbitRow:
    rng = substream(seed, trial, "lemma44", n, q, k, regime)
    p = rank_one_star(n) if regime == "trivial" else cyclic_star(n)
    letters = 1 if regime == "trivial" else 2
    u = random_star_element(rng, p, rng.randint(n, n + 2), letters, all_rays=True)
    g = random_star_element(rng, p, rng.randint(0, 3), letters, cyclic=False)
    h = random_star_element(rng, p, rng.randint(n, n + 2), letters, all_rays=True)
    ctx = (u, g, h)
    fam = S.lemma_permutation_families(n, "lemma44", ctx)
    count = S.orbit_class_count_double_coset(p, q, k, ctx, fam)
    return OrbitRow("lemma44", n, trial, f"{regime}/q={q},k={k}", count, S.lemma_bound(n, "lemma44", ctx))
