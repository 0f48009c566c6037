"""Towers over a free ground floor, their multiplets, pouches and abelian closures.

Generators of a tower are numbered globally: the ground floor owns ``1..r``
(printed ``a, b, ...``) and every floor appends its own block.  An abelian
floor of rank ``m`` appends ``z_k ... z_{k+m-1}`` (``z`` numbered across the
whole tower); a surface floor appends ``s<f>_1 ...`` for the surface and
``d<f>_1 ...`` for its boundary curves.  Words stored in floors refer to this
global numbering.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from .errors import (
    DimensionMismatch,
    FloorMismatch,
    GeneratorCollision,
    InvalidTower,
    ParseError,
    SingularClosure,
    SingularMatrix,
    UnsupportedTowerShape,
)
from .stars import CyclicA, FreeFactorA, StarPresentation
from .words import (
    FreeGroup,
    Word,
    centralizer_generator,
    commutator,
    default_names,
    invert,
    is_conjugate_free,
    multiply,
    power,
    primitive_root,
    substitute,
)


@dataclass(frozen=True)
class AbelianFloor:
    peg: Word
    rank: int

    @property
    def n_generators(self) -> int:
        return self.rank


@dataclass(frozen=True)
class SurfaceFloor:
    genus: int
    orientable: bool
    boundaries: int
    gluing: tuple = ()
    retraction_images: tuple = ()

    @property
    def n_surface_generators(self) -> int:
        return 2 * self.genus if self.orientable else self.genus

    @property
    def n_generators(self) -> int:
        return self.n_surface_generators + self.boundaries

    @property
    def euler_characteristic(self) -> int:
        if self.orientable:
            return 2 - 2 * self.genus - self.boundaries
        return 2 - self.genus - self.boundaries

    @property
    def exceptional(self) -> bool:
        shape = (self.orientable, self.genus, self.boundaries)
        return shape in {(True, 0, 3), (False, 1, 2), (False, 2, 1), (False, 3, 0)}


FloorSpec = Union[AbelianFloor, SurfaceFloor]


@dataclass(frozen=True)
class TowerSpec:
    ground_rank: int
    floors: tuple = ()
    # set by multiplet(): number of copies and how many leading floors they share
    copies: int = 1
    shared_floors: int = 0

    def __post_init__(self):
        object.__setattr__(self, "floors", tuple(self.floors))

    @property
    def height(self) -> int:
        return len(self.floors)

    def layout(self) -> list[tuple[int, int]]:
        """``(first, count)`` of the generator block owned by each floor."""
        out = []
        nxt = self.ground_rank + 1
        for f in self.floors:
            out.append((nxt, f.n_generators))
            nxt += f.n_generators
        return out

    @property
    def n_generators(self) -> int:
        return self.ground_rank + sum(f.n_generators for f in self.floors)

    def generator_names(self) -> list[str]:
        names = default_names(self.ground_rank)
        z = 0
        for idx, f in enumerate(self.floors, 1):
            if isinstance(f, AbelianFloor):
                names += [f"z{z + k}" for k in range(1, f.rank + 1)]
                z += f.rank
            else:
                names += [f"s{idx}_{k}" for k in range(1, f.n_surface_generators + 1)]
                names += [f"d{idx}_{k}" for k in range(1, f.boundaries + 1)]
        if len(set(names)) != len(names):
            raise GeneratorCollision("generator names collide")
        return names

    def group(self) -> FreeGroup:
        return FreeGroup(self.n_generators, self.generator_names())

    def ground_peg_count(self) -> int:
        """Number of abelian floors whose pegs lie in the ground floor."""
        return sum(1 for f in self.floors if _ground_peg(self, f))


def _ground_peg(t: TowerSpec, f) -> bool:
    return isinstance(f, AbelianFloor) and f.peg.max_generator() <= t.ground_rank


@dataclass(frozen=True)
class Violation:
    floor: int
    rule: str
    detail: str = ""

    def __str__(self):
        return f"{self.rule}@floor{self.floor}"


def _commute(x: Word, y: Word) -> bool:
    return multiply(x, y) == multiply(y, x)


def _surface_relator(first: int, f: SurfaceFloor) -> Word:
    k = f.n_surface_generators
    s = [Word([first + i]) for i in range(k)]
    d = [Word([first + k + i]) for i in range(f.boundaries)]
    if f.orientable:
        body = [commutator(s[2 * i], s[2 * i + 1]) for i in range(f.genus)]
    else:
        body = [power(x, 2) for x in s]
    return multiply(*body, *d)


def _check_surface(t: TowerSpec, idx: int, first: int, f: SurfaceFloor, known: int,
                   out: list, unchecked: list):
    if f.genus < 0 or f.boundaries < 0 or (not f.orientable and f.genus < 1):
        out.append(Violation(idx, "InvalidSurface", "bad genus or boundary count"))
        return
    if f.exceptional:
        out.append(Violation(idx, "ExceptionalSurface", "the surface is one of the four exceptions"))
        return
    if f.euler_characteristic >= 0:
        out.append(Violation(idx, "NonNegativeEuler", f"chi = {f.euler_characteristic}"))
    if f.boundaries == 0:
        out.append(Violation(idx, "NoBoundary", "a surface floor must be glued"))
    if len(f.gluing) != f.boundaries:
        out.append(Violation(idx, "GluingMismatch", "one gluing word per boundary"))
        return
    if any(not w or w.max_generator() >= first for w in f.gluing):
        out.append(Violation(idx, "BadGluing", "gluing words must be nontrivial words below the floor"))
        return
    if not f.retraction_images:
        unchecked.append(Violation(idx, "RetractionUnchecked", "no retraction images given"))
        return
    if len(f.retraction_images) != f.n_surface_generators:
        out.append(Violation(idx, "RetractionMismatch", "one image per surface generator"))
        return
    images = list(f.retraction_images) + list(f.gluing)
    if any(w.max_generator() > t.ground_rank for w in images):
        unchecked.append(Violation(idx, "RetractionUnchecked", "images above the ground floor"))
        return
    assignment = {first + i: w for i, w in enumerate(images)}
    if substitute(_surface_relator(first, f), assignment):
        out.append(Violation(idx, "RetractionNotHomomorphism", "surface relator does not map to 1"))
    if all(_commute(x, y) for x, y in combinations(images, 2)):
        out.append(Violation(idx, "AbelianRetraction", "retraction image is abelian"))


def _check(t: TowerSpec) -> tuple[list[Violation], list[Violation]]:
    out: list[Violation] = []
    unchecked: list[Violation] = []
    if t.ground_rank < 2:
        out.append(Violation(0, "GroundRank", "the ground floor must be nonabelian"))
    ground_roots = []
    seen_upper = False
    for idx, (f, (first, _)) in enumerate(zip(t.floors, t.layout()), 1):
        known = first - 1
        if isinstance(f, SurfaceFloor):
            seen_upper = True
            _check_surface(t, idx, first, f, known, out, unchecked)
            continue
        if f.rank < 1:
            out.append(Violation(idx, "InvalidRank", "abelian floors need positive rank"))
        if not f.peg:
            out.append(Violation(idx, "TrivialPeg", "peg must be nontrivial"))
            continue
        if f.peg.max_generator() > known:
            out.append(Violation(idx, "UnknownGenerator", "peg uses generators not yet built"))
            continue
        if not _ground_peg(t, f):
            seen_upper = True
            unchecked.append(Violation(idx, "PegUnchecked", "maximality and conjugacy above the ground"))
            continue
        if seen_upper:
            out.append(Violation(idx, "PouchOrder", "ground pegs must come first"))
        if primitive_root(f.peg)[1] != 1:
            out.append(Violation(idx, "NotMaximalAbelian", "peg is a proper power"))
        root = centralizer_generator(f.peg)
        for j, other in ground_roots:
            if is_conjugate_free(root, other) or is_conjugate_free(root, invert(other)):
                out.append(Violation(idx, "ConjugatePegs", f"conjugate to the peg of floor {j}"))
        ground_roots.append((idx, root))
    return out, unchecked


def validate_tower(t: TowerSpec) -> list[Violation]:
    return _check(t)[0]


def tower_warnings(t: TowerSpec) -> list[Violation]:
    """Conditions that could not be decided exactly (pegs and retractions above the ground)."""
    return _check(t)[1]


def _require_valid(t: TowerSpec):
    bad = validate_tower(t)
    if bad:
        raise InvalidTower(bad)


# ---------------------------------------------------------------------------
# presentations

@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple

    def group(self) -> FreeGroup:
        return FreeGroup(len(self.generators), list(self.generators))

    def text(self) -> str:
        G = self.group()
        rels = ", ".join(G.format(r) for r in self.relators)
        return f"< {', '.join(self.generators)} | {rels} >"

    def __str__(self):
        return self.text()


def _floor_relators(first: int, f: FloorSpec) -> list[Word]:
    if isinstance(f, AbelianFloor):
        zs = [Word([first + k]) for k in range(f.rank)]
        rels = [commutator(z, f.peg) for z in zs]
        rels += [commutator(x, y) for x, y in combinations(zs, 2)]
        return rels
    k = f.n_surface_generators
    rels = [_surface_relator(first, f)]
    for i, w in enumerate(f.gluing):
        rels.append(multiply(Word([-(first + k + i)]), w))
    return rels


def _present(t: TowerSpec, floors: int) -> Presentation:
    sub = replace(t, floors=t.floors[:floors])
    rels = []
    for f, (first, _) in zip(sub.floors, sub.layout()):
        rels += _floor_relators(first, f)
    return Presentation(tuple(sub.generator_names()), tuple(rels))


def presentation_of(t: TowerSpec) -> Presentation:
    _require_valid(t)
    return _present(t, t.height)


def abelian_pouch(t: TowerSpec) -> Presentation:
    """The ground floor together with the abelian floors on ground pegs (which come first)."""
    _require_valid(t)
    return _present(t, t.ground_peg_count())


# ---------------------------------------------------------------------------
# multiplets

def expected_floor_count(m: int, n: int, N: int) -> int:
    return m * N if n == 0 else m + (m - n) * (N - 1)


def _rename(w: Word, mapping: dict) -> Word:
    return Word([(1 if x > 0 else -1) * mapping.get(abs(x), abs(x)) for x in w.letters])


def multiplet(t: TowerSpec, N: int) -> TowerSpec:
    """Attach ``N`` copies of the floors of ``t`` over its abelian pouch."""
    if N < 2:
        raise ValueError("a multiplet needs N >= 2")
    _require_valid(t)
    if t.copies != 1:
        raise UnsupportedTowerShape("multiplets of multiplets are not supported")
    n = t.ground_peg_count()
    old = t.layout()
    floors: list = []
    nxt = t.ground_rank + 1
    # copy c of ground-floor generator block k is the c-th summand of the inflated floor
    maps = [dict() for _ in range(N)]
    for k in range(n):
        f = t.floors[k]
        first, count = old[k]
        for c in range(N):
            for j in range(count):
                maps[c][first + j] = nxt + c * count + j
        floors.append(AbelianFloor(f.peg, f.rank * N))
        nxt += count * N
    for c in range(N):
        for k in range(n, t.height):
            f = t.floors[k]
            first, count = old[k]
            mp = maps[c]
            if isinstance(f, AbelianFloor):
                new = AbelianFloor(_rename(f.peg, mp), f.rank)
            else:
                new = replace(f, gluing=tuple(_rename(w, mp) for w in f.gluing),
                              retraction_images=tuple(_rename(w, mp) for w in f.retraction_images))
            for j in range(count):
                mp[first + j] = nxt + j
            floors.append(new)
            nxt += count
    return TowerSpec(t.ground_rank, tuple(floors), copies=N, shared_floors=n)


def star_view(tm: TowerSpec) -> StarPresentation:
    """Model the multiplet as a star whose rays are the ``N`` replicated branches.

    Each ray is modelled by the free group on the ground generators plus one
    copy's generators (relators are dropped; only the ray combinatorics are
    kept).  With a free pouch the rays share the ground floor, giving a
    :class:`FreeFactorA` star.  A single inflated ground-peg floor with no
    replicated content gives a :class:`CyclicA` star over the peg.
    """
    if tm.copies < 2 or not tm.floors:
        raise UnsupportedTowerShape("not a multiplet")
    N, n = tm.copies, tm.shared_floors
    r = tm.ground_rank
    if n == 0:
        per_copy = sum(f.n_generators for f in tm.floors) // N
        return StarPresentation(N, r + per_copy, FreeFactorA(r))
    if n == 1 and tm.height == 1:
        f = tm.floors[0]
        if f.rank // N != 1:
            raise UnsupportedTowerShape("cyclic stars model rank-1 pegs only")
        return StarPresentation(N, r + 1, CyclicA(f.peg))
    raise UnsupportedTowerShape("the shared pouch carries replicated floors")


# ---------------------------------------------------------------------------
# closures

def _as_fractions(M):
    return [[Fraction(x) for x in row] for row in M]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-valued elimination."""
    A = _as_fractions(M)
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatch("matrix is not square")
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for i in range(col + 1, n):
            f = A[i][col] / A[col][col]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return int(det)


def solve_integer_linear(M: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...] | None:
    """The unique solution of ``M s = v`` if it is integral, else ``None``."""
    n = len(M)
    if any(len(row) != n for row in M) or len(v) != n:
        raise DimensionMismatch("need a square matrix and a matching vector")
    A = [row + [Fraction(b)] for row, b in zip(_as_fractions(M), v)]
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for i in range(n):
            if i != col and A[i][col]:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    sol = [A[i][n] for i in range(n)]
    if any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)


@dataclass(frozen=True)
class FloorClosure:
    c: tuple
    M: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        object.__setattr__(self, "M", tuple(tuple(int(x) for x in row) for row in self.M))
        m = len(self.c)
        if len(self.M) != m or any(len(row) != m for row in self.M):
            raise DimensionMismatch("c and M must have matching size")
        if determinant(self.M) == 0:
            raise SingularClosure("closure matrix must be nonsingular")

    @property
    def rank(self) -> int:
        return len(self.c)

    @property
    def unimodular(self) -> bool:
        return abs(determinant(self.M)) == 1


@dataclass(frozen=True)
class ClosureSpec:
    floors: tuple  # of FloorClosure, one per abelian floor in order

    def __post_init__(self):
        object.__setattr__(self, "floors", tuple(self.floors))


def _abelian_floors(t: TowerSpec):
    return [(i, f, first) for i, (f, (first, _)) in enumerate(zip(t.floors, t.layout()))
            if isinstance(f, AbelianFloor)]


def closure_apply(t: TowerSpec, cl: ClosureSpec, strict: bool = False) -> Presentation:
    """Presentation of the closure: each abelian floor gains ``y`` generators with ``z_j = peg^c_j y^M_j``.

    With ``strict`` the matrices must be unimodular rather than merely nonsingular.
    """
    base = presentation_of(t)
    abel = _abelian_floors(t)
    if len(abel) != len(cl.floors):
        raise FloorMismatch(f"{len(abel)} abelian floors but {len(cl.floors)} closures")
    names = list(base.generators)
    rels = list(base.relators)
    nxt = len(names) + 1
    y = 0
    for (_, f, first), fc in zip(abel, cl.floors):
        if fc.rank != f.rank:
            raise FloorMismatch("closure rank differs from floor rank")
        if strict and not fc.unimodular:
            raise SingularClosure("closure matrix is not unimodular")
        ys = [Word([nxt + k]) for k in range(f.rank)]
        zs = [Word([first + k]) for k in range(f.rank)]
        names += [f"y{y + k}" for k in range(1, f.rank + 1)]
        y += f.rank
        nxt += f.rank
        rels += [commutator(a, f.peg) for a in ys]
        rels += [commutator(a, b) for a, b in combinations(ys, 2)]
        rels += [commutator(z, a) for z in zs for a in ys]
        for j, z in enumerate(zs):
            image = multiply(power(f.peg, fc.c[j]), *(power(ys[k], fc.M[j][k]) for k in range(f.rank)))
            rels.append(multiply(invert(z), image))
    if len(set(names)) != len(names):
        raise GeneratorCollision("closure generator names collide")
    return Presentation(tuple(names), tuple(rels))


def morphism_extends(fc: FloorClosure | tuple, t: Sequence[int]) -> tuple[int, ...] | None:
    """Witness ``s`` with ``t = c + M s``, or ``None`` when the morphism does not extend."""
    if not isinstance(fc, FloorClosure):
        fc = FloorClosure(*fc)
    if len(t) != fc.rank:
        raise DimensionMismatch("exponent vector has the wrong length")
    return solve_integer_linear([list(r) for r in fc.M], [a - b for a, b in zip(t, fc.c)])


def abelianization_rank(p: Presentation) -> int:
    """Free rank of the abelianization: generators minus the rational rank of relator exponent sums."""
    n = len(p.generators)
    rows = []
    for r in p.relators:
        v = [0] * n
        for x in r.letters:
            v[abs(x) - 1] += 1 if x > 0 else -1
        rows.append([Fraction(a) for a in v])
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return n - rank


# ---------------------------------------------------------------------------
# JSON

def _names_upto(t: TowerSpec, floors: list, upto: int) -> FreeGroup:
    sub = TowerSpec(t.ground_rank, tuple(floors[:upto]))
    return sub.group()


def tower_to_json(t: TowerSpec) -> dict:
    floors = []
    for i, f in enumerate(t.floors):
        G = _names_upto(t, list(t.floors), i)
        if isinstance(f, AbelianFloor):
            floors.append({"type": "abelian", "peg": G.format(f.peg), "rank": f.rank})
            continue
        Gs = _names_upto(t, list(t.floors), i + 1)
        floors.append({
            "type": "surface", "genus": f.genus, "orientable": f.orientable,
            "boundaries": f.boundaries,
            "gluing": [G.format(w) for w in f.gluing],
            "retraction_images": [Gs.format(w) for w in f.retraction_images],
        })
    doc = {"format": 1, "ground_rank": t.ground_rank, "floors": floors}
    if t.copies != 1:
        doc["copies"] = t.copies
        doc["shared_floors"] = t.shared_floors
    return doc


def tower_from_json(doc: dict | str) -> TowerSpec:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("format") != 1:
        raise ParseError(f"unsupported tower format {doc.get('format')!r}")
    r = int(doc["ground_rank"])
    floors: list = []
    for i, fd in enumerate(doc.get("floors", [])):
        G = TowerSpec(r, tuple(floors)).group()
        kind = fd.get("type")
        if kind == "abelian":
            floors.append(AbelianFloor(G.parse(fd["peg"]), int(fd.get("rank", 1))))
        elif kind == "surface":
            placeholder = SurfaceFloor(int(fd["genus"]), bool(fd.get("orientable", True)),
                                       int(fd["boundaries"]))
            Gs = TowerSpec(r, tuple(floors) + (placeholder,)).group()
            floors.append(replace(
                placeholder,
                gluing=tuple(G.parse(w) for w in fd.get("gluing", [])),
                retraction_images=tuple(Gs.parse(w) for w in fd.get("retraction_images", [])),
            ))
        else:
            raise ParseError(f"floor {i + 1}: unknown type {kind!r}")
    return TowerSpec(r, tuple(floors), int(doc.get("copies", 1)), int(doc.get("shared_floors", 0)))


def closure_to_json(cl: ClosureSpec) -> dict:
    return {"format": 1, "floors": [{"c": list(f.c), "M": [list(r) for r in f.M]} for f in cl.floors]}


def closure_from_json(doc: dict | str) -> ClosureSpec:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("format") != 1:
        raise ParseError(f"unsupported closure format {doc.get('format')!r}")
    return ClosureSpec(tuple(FloorClosure(f["c"], f["M"]) for f in doc["floors"]))


def load_tower(path) -> TowerSpec:
    with open(path) as fh:
        return tower_from_json(json.load(fh))


def load_closure(path) -> ClosureSpec:
    with open(path) as fh:
        doc = json.load(fh)
    return closure_from_json(doc.get("closure", doc))
