import itertools
import json
import random

import pytest

from fgtowers import towers as T
from fgtowers.errors import (
    DimensionMismatch,
    FloorMismatch,
    InvalidTower,
    ParseError,
    SingularClosure,
    SingularMatrix,
    UnsupportedTowerShape,
)
from fgtowers.stars import CyclicA, FreeFactorA
from fgtowers.words import FreeGroup, Word, commutator, invert, multiply, power

F2 = FreeGroup(2)
PEG = F2.parse("a a b b b")
EXAMPLE = T.TowerSpec(2, (T.AbelianFloor(PEG, 1),))


def rules(t):
    return [str(v) for v in T.validate_tower(t)]


def torus_floor():
    # one-holed torus glued along the commutator, retracting onto the ground
    return T.SurfaceFloor(1, True, 1, (F2.parse("B A b a"),), (Word([1]), Word([2])))


# ---------------------------------------------------------------------------
# validation

def test_validate_examples():
    assert rules(EXAMPLE) == []
    assert rules(T.TowerSpec(2, (T.AbelianFloor(F2.parse("a a"), 1),))) == ["NotMaximalAbelian@floor1"]
    assert rules(T.TowerSpec(2, (T.SurfaceFloor(0, True, 3, ()),))) == ["ExceptionalSurface@floor1"]


def test_validate_other_rules():
    a, b = Word([1]), Word([2])
    assert rules(T.TowerSpec(1, ())) == ["GroundRank@floor0"]
    assert rules(T.TowerSpec(2, (T.AbelianFloor(Word(), 1),))) == ["TrivialPeg@floor1"]
    assert rules(T.TowerSpec(2, (T.AbelianFloor(Word([3]), 1),))) == ["UnknownGenerator@floor1"]
    assert rules(T.TowerSpec(2, (T.AbelianFloor(a, 0),))) == ["InvalidRank@floor1"]
    conj = T.TowerSpec(2, (T.AbelianFloor(multiply(a, b), 1), T.AbelianFloor(F2.parse("B A"), 1)))
    assert rules(conj) == ["ConjugatePegs@floor2"]
    late = T.TowerSpec(2, (T.AbelianFloor(a, 1), T.AbelianFloor(Word([3, 1]), 1), T.AbelianFloor(b, 1)))
    assert rules(late) == ["PouchOrder@floor3"]
    assert [str(w) for w in T.tower_warnings(late)] == ["PegUnchecked@floor2"]


def test_validate_surfaces():
    assert rules(T.TowerSpec(2, (torus_floor(),))) == []
    bad = T.SurfaceFloor(1, True, 1, (F2.parse("a b"),), (Word([1]), Word([2])))
    assert rules(T.TowerSpec(2, (bad,))) == ["RetractionNotHomomorphism@floor1"]
    # s1^2 s2^2 s3^2 d with s -> a, A, a forces d -> A A: a homomorphism with abelian image
    flat = T.SurfaceFloor(3, False, 1, (F2.parse("A A"),), (Word([1]), Word([-1]), Word([1])))
    assert rules(T.TowerSpec(2, (flat,))) == ["AbelianRetraction@floor1"]
    assert rules(T.TowerSpec(2, (T.SurfaceFloor(1, True, 0),))) == ["NonNegativeEuler@floor1", "NoBoundary@floor1"]
    unmapped = T.SurfaceFloor(1, True, 1, (F2.parse("B A b a"),))
    t = T.TowerSpec(2, (unmapped,))
    assert rules(t) == [] and [str(w) for w in T.tower_warnings(t)] == ["RetractionUnchecked@floor1"]
    assert T.SurfaceFloor(1, False, 2).exceptional and T.SurfaceFloor(2, True, 1).euler_characteristic == -3


# ---------------------------------------------------------------------------
# presentations

def test_presentation_examples():
    p = T.presentation_of(EXAMPLE)
    assert p.generators == ("a", "b", "z1")
    assert p.relators == (commutator(Word([3]), PEG),)
    assert p.text() == "< a, b, z1 | z1^-1 B B B A A z1 a a b b b >"
    assert T.presentation_of(T.TowerSpec(2, ())).text() == "< a, b |  >"
    rank2 = T.presentation_of(T.TowerSpec(2, (T.AbelianFloor(PEG, 2),)))
    z1, z2 = Word([3]), Word([4])
    assert set(rank2.relators) == {commutator(z1, PEG), commutator(z2, PEG), commutator(z1, z2)}
    with pytest.raises(InvalidTower):
        T.presentation_of(T.TowerSpec(2, (T.AbelianFloor(F2.parse("a a"), 1),)))


def test_pouch_examples():
    assert T.abelian_pouch(EXAMPLE) == T.presentation_of(EXAMPLE)
    upper = T.TowerSpec(2, (torus_floor(), T.AbelianFloor(Word([3]), 1)))
    assert T.abelian_pouch(upper).text() == "< a, b |  >"
    two = T.TowerSpec(2, (T.AbelianFloor(Word([1]), 2), T.AbelianFloor(Word([2]), 1)))
    pouch = T.abelian_pouch(two)
    assert pouch.generators == ("a", "b", "z1", "z2", "z3")
    assert len(pouch.relators) == 3 + 1
    assert commutator(Word([3]), Word([5])) not in pouch.relators


# ---------------------------------------------------------------------------
# multiplets

GROUND_PEGS = ["a", "b", "a b", "a B", "a a b"]


def shaped_tower(m, n, rng):
    """A valid tower with ``m`` floors, the first ``n`` on ground pegs."""
    floors = [T.AbelianFloor(F2.parse(GROUND_PEGS[i]), rng.randint(1, 2)) for i in range(n)]
    if n == 0:
        floors.append(torus_floor())
    while len(floors) < m:
        top = 2 + sum(f.n_generators for f in floors)
        floors.append(T.AbelianFloor(Word([top, 1]), rng.randint(1, 2)))
    t = T.TowerSpec(2, tuple(floors))
    assert T.validate_tower(t) == []
    return t


def test_multiplet_examples():
    m3 = T.multiplet(EXAMPLE, 3)
    assert m3.height == 1 and m3.floors[0].rank == 3
    t = shaped_tower(2, 0, random.Random(0))
    assert T.multiplet(t, 2).height == 4
    with pytest.raises(ValueError):
        T.multiplet(EXAMPLE, 1)


def test_multiplet_floor_counts():
    rng = random.Random(1)
    for m in range(1, 6):
        for n in range(0, m + 1):
            t = shaped_tower(m, n, rng)
            for N in range(2, 7):
                tm = T.multiplet(t, N)
                assert tm.height == n + N * (m - n) == T.expected_floor_count(m, n, N)
                assert T.validate_tower(tm) == []


def test_multiplet_pouch_is_inflated_pouch():
    rng = random.Random(2)
    for m in range(1, 5):
        for n in range(1, m + 1):
            t = shaped_tower(m, n, rng)
            N = rng.randint(2, 4)
            inflated = T.TowerSpec(2, tuple(T.AbelianFloor(f.peg, f.rank * N) for f in t.floors[:n]))
            assert T.abelian_pouch(T.multiplet(t, N)) == T.presentation_of(inflated)


def test_multiplet_copies_are_disjoint():
    t = shaped_tower(3, 1, random.Random(3))
    tm = T.multiplet(t, 3)
    pegs = [f.peg for f in tm.floors[1:] if isinstance(f, T.AbelianFloor)]
    assert len(set(pegs)) == len(pegs)


def test_star_view():
    t = shaped_tower(2, 0, random.Random(4))
    sp = T.star_view(T.multiplet(t, 3))
    assert sp.n_rays == 3 and sp.regime == FreeFactorA(2)
    sp = T.star_view(T.multiplet(EXAMPLE, 2))
    assert sp.n_rays == 2 and sp.regime == CyclicA(PEG) and sp.factor_rank == 3
    with pytest.raises(UnsupportedTowerShape):
        T.star_view(T.TowerSpec(2, ()))
    with pytest.raises(UnsupportedTowerShape):
        T.star_view(T.multiplet(shaped_tower(2, 1, random.Random(5)), 2))


# ---------------------------------------------------------------------------
# closures

def test_closure_example():
    cl = T.ClosureSpec((T.FloorClosure((1,), ((4,),)),))
    p = T.closure_apply(EXAMPLE, cl)
    z, y = Word([3]), Word([4])
    assert p.generators == ("a", "b", "z1", "y1")
    assert set(p.relators) == {commutator(z, PEG), commutator(y, PEG), commutator(z, y),
                               multiply(invert(z), PEG, power(y, 4))}


def test_closure_rank_two():
    t = T.TowerSpec(2, (T.AbelianFloor(PEG, 2),))
    p = T.closure_apply(t, T.ClosureSpec((T.FloorClosure((0, 1), ((2, 0), (0, 3))),)))
    z1, z2, y1, y2 = (Word([k]) for k in (3, 4, 5, 6))
    assert multiply(invert(z1), power(y1, 2)) in p.relators
    assert multiply(invert(z2), PEG, power(y2, 3)) in p.relators
    assert T.determinant([[2, 0], [0, 3]]) == 6


def test_closure_errors():
    with pytest.raises(SingularClosure):
        T.FloorClosure((0, 0), ((1, 2), (2, 4)))
    with pytest.raises(DimensionMismatch):
        T.FloorClosure((0,), ((1, 0), (0, 1)))
    with pytest.raises(FloorMismatch):
        T.closure_apply(EXAMPLE, T.ClosureSpec(()))
    with pytest.raises(SingularClosure):
        T.closure_apply(EXAMPLE, T.ClosureSpec((T.FloorClosure((1,), ((4,),)),)), strict=True)
    T.closure_apply(EXAMPLE, T.ClosureSpec((T.FloorClosure((1,), ((-1,),)),)), strict=True)


def random_unimodular(rng, m):
    M = [[int(i == j) for j in range(m)] for i in range(m)]
    for _ in range(6):
        i, j = rng.sample(range(m), 2) if m > 1 else (0, 0)
        if i == j:
            M[0][0] = -M[0][0]
            continue
        k = rng.randint(-2, 2)
        M[i] = [a + k * b for a, b in zip(M[i], M[j])]
    return M


def test_unimodular_closure_keeps_abelianization_rank():
    rng = random.Random(6)
    for _ in range(40):
        m = rng.randint(1, 3)
        t = T.TowerSpec(2, (T.AbelianFloor(rng.choice([PEG, F2.parse("a b"), Word([1])]), m),))
        fc = T.FloorClosure(tuple(rng.randint(-3, 3) for _ in range(m)), random_unimodular(rng, m))
        assert fc.unimodular
        closed = T.closure_apply(t, T.ClosureSpec((fc,)), strict=True)
        assert T.abelianization_rank(closed) == T.abelianization_rank(T.presentation_of(t)) == 2 + m


def test_morphism_examples():
    fc = ((1,), ((4,),))
    assert T.morphism_extends(fc, (5,)) == (1,)
    assert T.morphism_extends(fc, (6,)) is None
    assert T.morphism_extends(fc, (1,)) == (0,)
    with pytest.raises(DimensionMismatch):
        T.morphism_extends(fc, (1, 2))


def test_solve_examples():
    assert T.solve_integer_linear([[2, 0], [0, 3]], [4, 9]) == (2, 3)
    assert T.solve_integer_linear([[2, 0], [0, 3]], [1, 0]) is None
    assert T.solve_integer_linear([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [7, -2, 5]) == (7, -2, 5)
    with pytest.raises(SingularMatrix):
        T.solve_integer_linear([[1, 2], [2, 4]], [1, 1])


def random_closure(rng, m):
    while True:
        M = [[rng.randint(-5, 5) for _ in range(m)] for _ in range(m)]
        if T.determinant(M):
            return T.FloorClosure(tuple(rng.randint(-5, 5) for _ in range(m)), M)


def test_morphism_matches_brute_force():
    rng = random.Random(7)
    for _ in range(120):
        m = rng.randint(1, 2)
        fc = random_closure(rng, m)
        t = tuple(rng.randint(-20, 20) for _ in range(m))
        hits = [s for s in itertools.product(range(-20, 21), repeat=m)
                if all(fc.c[j] + sum(fc.M[j][k] * s[k] for k in range(m)) == t[j] for j in range(m))]
        got = T.morphism_extends(fc, t)
        if hits:
            assert got == hits[0]
        else:
            # the unique solution, if any, lies outside the search box
            assert got is None or max(map(abs, got)) > 20


def test_extending_set_is_the_coset():
    rng = random.Random(8)
    for _ in range(100):
        m = rng.randint(1, 3)
        fc = random_closure(rng, m)
        s = tuple(rng.randint(-9, 9) for _ in range(m))
        t = tuple(fc.c[j] + sum(fc.M[j][k] * s[k] for k in range(m)) for j in range(m))
        assert T.morphism_extends(fc, t) == s
        if abs(T.determinant(fc.M)) > 1:
            # some unit shift of t leaves the coset
            shifted = [tuple(x + (j == i) for j, x in enumerate(t)) for i in range(m)]
            assert any(T.morphism_extends(fc, u) is None for u in shifted)


def test_example_extension_is_mod_four():
    fc = T.FloorClosure((1,), ((4,),))
    for t in range(-50, 51):
        assert (T.morphism_extends(fc, (t,)) is not None) == (t % 4 == 1)


# ---------------------------------------------------------------------------
# JSON

def test_json_round_trips():
    rng = random.Random(9)
    for t in (EXAMPLE, shaped_tower(3, 0, rng), shaped_tower(4, 2, rng), T.multiplet(EXAMPLE, 3)):
        doc = json.loads(json.dumps(T.tower_to_json(t)))
        assert T.tower_from_json(doc) == t
    cl = T.ClosureSpec((T.FloorClosure((1, 0), ((2, 1), (0, 3))),))
    assert T.closure_from_json(json.dumps(T.closure_to_json(cl))) == cl
    with pytest.raises(ParseError):
        T.tower_from_json({"format": 2, "ground_rank": 2})
    with pytest.raises(ParseError):
        T.tower_from_json({"format": 1, "ground_rank": 2, "floors": [{"type": "cone"}]})


def test_bundled_example_files(tmp_path):
    from importlib import resources
    data = resources.files("fgtowers").joinpath("data")
    t = T.tower_from_json(data.joinpath("example_tower.json").read_text())
    assert t == EXAMPLE
    p = tmp_path / "t.json"
    p.write_text(json.dumps(T.tower_to_json(t)))
    assert T.load_tower(p) == EXAMPLE
    cl = T.closure_from_json(data.joinpath("example_closure.json").read_text())
    assert cl.floors[0] == T.FloorClosure((1,), ((4,),))
