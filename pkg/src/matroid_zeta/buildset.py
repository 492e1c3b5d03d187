"""Building sets, irreducibles, nested-set complexes and combinatorial blowups."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import Check, InputError, ResourceError
from .poset import Poset, _bits, is_isomorphic


class Blown(NamedTuple):
    """The element ``[center, base]`` created by blowing up ``center``."""

    center: Hashable
    base: Hashable


def _nonbottom(lattice: Poset) -> list:
    b = lattice.bottom
    return [x for x in lattice.elements if x != b]


def max_below(lattice: Poset, members: Iterable, p) -> list:
    """Maximal elements of ``members`` weakly below ``p``."""
    below = lattice._down[lattice.index(p)]
    m = lattice.mask(members) & below
    return [lattice._elems[i] for i in _bits(m) if lattice._up[i] & m == 1 << i]


def _join_map_is_iso(lattice: Poset, p, factors: Sequence) -> Check:
    """Is ``(x_f) -> join(x_f)`` an order isomorphism prod [0,f] -> [0,p]?"""
    idx = lattice.index(p)
    target = lattice._down[idx]
    parts = [list(_bits(lattice._down[lattice.index(f)])) for f in factors]
    size = 1
    for part in parts:
        size *= len(part)
    if size != target.bit_count():
        return Check(False, p, f"interval size {target.bit_count()} != product size {size}")
    inverse: dict[int, tuple[int, ...]] = {}
    for combo in itertools.product(*parts):
        j = lattice._join_idx(combo)
        if j is None or j in inverse:
            return Check(False, p, "join map is not injective")
        inverse[j] = combo
    for i in _bits(target):
        for j in lattice._lower_cover_idx[i]:
            lo, hi = inverse[j], inverse[i]
            if not all(lattice._down[h] >> l & 1 for l, h in zip(lo, hi)):
                return Check(False, p, "inverse of the join map is not monotone")
    return Check(True)


def is_building_set(lattice: Poset, members: Iterable) -> Check:
    """Definition check through the join map; failure carries the offending ``p``."""
    members = list(members)
    bottom = lattice.bottom
    for g in members:
        lattice.index(g)
        if g == bottom:
            raise InputError("a building set cannot contain the bottom element", g)
    for p in _nonbottom(lattice):
        factors = max_below(lattice, members, p)
        if factors == [p]:
            continue
        if not factors:
            return Check(False, p, "no building-set element below p")
        res = _join_map_is_iso(lattice, p, factors)
        if not res:
            return Check(False, p, res.reason)
    return Check(True)


@dataclass(frozen=True, eq=False)
class BuildingSet:
    lattice: Poset
    members: frozenset

    def __eq__(self, other):
        return (isinstance(other, BuildingSet) and other.lattice is self.lattice
                and other.members == self.members)

    def __hash__(self):
        return hash(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, x):
        return x in self.members

    def sorted(self) -> list:
        return sorted(self.members, key=self.lattice.index)

    def factors(self, p) -> list:
        """F_G(p): maximal members weakly below ``p``."""
        if p == self.lattice.bottom:
            raise InputError("F_G is undefined at the bottom element", p)
        return max_below(self.lattice, self.members, p)

    @cached_property
    def mask(self) -> int:
        return self.lattice.mask(self.members)

    def labels(self) -> list[str]:
        return [self.lattice.label(x) for x in self.sorted()]


def building_set(lattice: Poset, members: Iterable, check: bool = True) -> BuildingSet:
    members = frozenset(members)
    if check:
        res = is_building_set(lattice, members)
        if not res:
            raise InputError(f"not a building set: fails at {lattice.label(res.witness)} "
                             f"({res.reason})", res.witness)
    return BuildingSet(lattice, members)


def max_g_below(g: BuildingSet, p) -> list:
    return g.factors(p)


def _is_atomic(lattice: Poset) -> bool:
    if "atomic" not in lattice._memo:
        b = lattice.bottom
        ok = b is not None
        if ok:
            atoms = [x for x in lattice.elements if lattice.lower_covers(x) == [b]]
            am = lattice.mask(atoms)
            ok = all(lattice._join_idx(_bits(lattice._down[i] & am)) == i
                     for i in range(len(lattice)))
        lattice._memo["atomic"] = ok
    return lattice._memo["atomic"]


def is_decomposable(lattice: Poset, p) -> bool:
    """Does ``[0, p]`` split as a product of two proper lower intervals via the join map?"""
    bottom = lattice.bottom
    if p == bottom:
        return False
    i = lattice.index(p)
    below = lattice._down[i] & ~(1 << i) & ~(1 << lattice.index(bottom))
    if _is_atomic(lattice):
        atoms = [a for a in lattice.from_mask(below) if lattice.lower_covers(a) == [bottom]]
        if len(atoms) < 2:
            return False
        first, rest = atoms[0], atoms[1:]
        for r in range(0, len(rest)):
            for side in itertools.combinations(rest, r):
                b1 = [first, *side]
                b2 = [a for a in rest if a not in side]
                x1, x2 = lattice.join(b1), lattice.join(b2)
                if x1 is None or x2 is None or x1 == p or x2 == p:
                    continue
                if _join_map_is_iso(lattice, p, [x1, x2]):
                    return True
        return False
    cands = lattice.from_mask(below)
    for x1, x2 in itertools.combinations(cands, 2):
        if _join_map_is_iso(lattice, p, [x1, x2]):
            return True
    return False


def irreducibles(lattice: Poset) -> BuildingSet:
    """Irr(L): non-bottom elements whose lower interval has no product splitting.

    Searches atom bipartitions for atomic lattices and element pairs otherwise.
    The result is re-checked with :func:`is_building_set`.
    """
    cached = lattice._memo.get("irr")
    if cached is not None:
        return cached
    members = [p for p in _nonbottom(lattice) if not is_decomposable(lattice, p)]
    res = is_building_set(lattice, members)
    if not res:
        raise AssertionError(f"Irr(L) failed the building-set check at {res.witness!r}")
    g = BuildingSet(lattice, frozenset(members))
    lattice._memo["irr"] = g
    return g


def full_building_set(lattice: Poset) -> BuildingSet:
    return BuildingSet(lattice, frozenset(_nonbottom(lattice)))


# -- nested sets ------------------------------------------------------------------

def _antichains_with(lattice: Poset, face: Sequence[int], x: int) -> Iterable[list[int]]:
    inc = [y for y in face
           if not (lattice._down[x] >> y & 1) and not (lattice._down[y] >> x & 1)]
    for r in range(1, len(inc) + 1):
        for combo in itertools.combinations(inc, r):
            if all(not (lattice._down[a] >> b & 1) and not (lattice._down[b] >> a & 1)
                   for a, b in itertools.combinations(combo, 2)):
                yield [*combo, x]


def is_nested(g: BuildingSet, s: Iterable) -> bool:
    """Every antichain T of size >= 2 in ``s`` has a join, and it lies outside G."""
    lat = g.lattice
    idx = sorted(lat.index(x) for x in s)
    if any(lat._elems[i] not in g.members for i in idx):
        return False
    for k, x in enumerate(idx):
        for t in _antichains_with(lat, idx[:k], x):
            j = lat._join_idx(t)
            if j is None or g.mask >> j & 1:
                return False
    return True


def _face_key(lat: Poset, face: frozenset) -> tuple:
    return (len(face), sorted(lat.index(x) for x in face))


@dataclass(frozen=True, eq=False)
class NestedComplex:
    building_set: BuildingSet
    faces: tuple[frozenset, ...]

    @cached_property
    def face_set(self) -> frozenset:
        return frozenset(self.faces)

    def __contains__(self, s) -> bool:
        return frozenset(s) in self.face_set

    def __len__(self) -> int:
        return len(self.faces)

    @cached_property
    def facets(self) -> tuple[frozenset, ...]:
        fs = self.face_set
        members = self.building_set.members
        return tuple(f for f in self.faces if not any(f | {x} in fs for x in members - f))

    def supersets(self, s) -> list[frozenset]:
        s = frozenset(s)
        return [t for t in self.faces if s <= t]

    def face_poset(self) -> Poset:
        lat = self.building_set.lattice
        labels = {f: "{" + ",".join(lat.label(x) for x in sorted(f, key=lat.index)) + "}"
                  for f in self.faces}
        relation = [(f, f | {x}) for f in self.faces
                    for x in self.building_set.members - f if f | {x} in self.face_set]
        return Poset(self.faces, relation, labels)

    def to_json(self) -> dict:
        lat = self.building_set.lattice
        return {
            "building_set": self.building_set.labels(),
            "facets": sorted(sorted(lat.label(x) for x in f) for f in self.facets),
        }


def nested_complex(g: BuildingSet) -> NestedComplex:
    """All nested subsets of G by downward-closed depth-first search."""
    lat = g.lattice
    members = sorted(lat.index(x) for x in g.members)
    faces: list[tuple[int, ...]] = []

    def grow(face: tuple[int, ...], start: int):
        faces.append(face)
        for k in range(start, len(members)):
            x = members[k]
            ok = True
            for t in _antichains_with(lat, face, x):
                j = lat._join_idx(t)
                if j is None or g.mask >> j & 1:
                    ok = False
                    break
            if ok:
                grow(face + (x,), k + 1)

    grow((), 0)
    out = [frozenset(lat._elems[i] for i in f) for f in faces]
    out.sort(key=lambda f: _face_key(lat, f))
    return NestedComplex(g, tuple(out))


# -- combinatorial blowups -------------------------------------------------------------

def combinatorial_blowup(lattice: Poset, p) -> Poset:
    """Bl_p L: keep ``x`` with ``x >= p`` false; add ``Blown(p, x)`` when ``x v p`` exists.

    Order: old elements as in L; ``[p,x] >= [p,y]`` iff ``x >= y``;
    ``[p,x] >= y`` iff ``x >= y``; no old element lies above a new one.
    """
    if p not in lattice:
        raise InputError(f"{p!r} is not an element", p)
    if p == lattice.bottom:
        raise InputError("cannot blow up the bottom element", p)
    old = [x for x in lattice.elements if not lattice.leq(p, x)]
    new = [Blown(p, x) for x in old if lattice.join2(p, x) is not None]
    rel = []
    for x in old:
        for y in lattice.lower_covers(x):
            rel.append((y, x))
    old_set = set(old)
    for bx in new:
        rel.append((bx.base, bx))
        for y in lattice.lower_covers(bx.base):
            if y in old_set and lattice.join2(p, y) is not None:
                rel.append((Blown(p, y), bx))
    labels = {x: lattice.label(x) for x in old}
    labels.update({bx: f"[{lattice.label(p)},{lattice.label(bx.base)}]" for bx in new})
    out = Poset(old + new, rel, labels)
    if not out.is_meet_semilattice():
        raise AssertionError(f"blowup at {p!r} is not a meet-semilattice")
    return out


def is_reverse_refinement(g: BuildingSet, order: Sequence) -> bool:
    if len(order) != len(g.members) or set(order) != g.members:
        return False
    lat = g.lattice
    return not any(lat.lt(order[i], order[j])
                   for i in range(len(order)) for j in range(i + 1, len(order)))


def reverse_refinements(g: BuildingSet, count: int = 2, seed: int = 0) -> list[list]:
    """Up to ``count`` distinct linear refinements of the reverse order on G."""
    lat = g.lattice
    rng = random.Random(seed)
    out: list[list] = []
    base = sorted(g.members, key=lambda x: -lat.index(x))
    out.append(base)
    seen = {tuple(base)}
    for _ in range(50 * count):
        if len(out) >= count:
            break
        remaining = set(g.members)
        order = []
        while remaining:
            ready = [x for x in remaining if not any(lat.lt(x, y) for y in remaining)]
            x = rng.choice(sorted(ready, key=lat.index))
            order.append(x)
            remaining.remove(x)
        if tuple(order) not in seen:
            seen.add(tuple(order))
            out.append(order)
    return out


def iterated_blowup(lattice: Poset, g: BuildingSet, refinement: Sequence | None = None,
                    check: bool = False) -> Poset:
    """Blow up the members of G, largest first.

    With ``check=True`` the result is compared against the face poset of
    N(G) and an AssertionError is raised if they are not isomorphic.
    """
    order = list(refinement) if refinement is not None else reverse_refinements(g, 1)[0]
    if not is_reverse_refinement(g, order):
        raise InputError("refinement is not a linear extension of the reverse order on G")
    current = lattice
    for b in order:
        if b not in current:
            raise AssertionError(f"{b!r} vanished before its blowup")
        current = combinatorial_blowup(current, b)
    if check:
        res = is_isomorphic(current, nested_complex(g).face_poset())
        if not res:
            raise AssertionError(f"iterated blowup is not isomorphic to N(G): {res.reason}")
    return current


# -- building set extensions -------------------------------------------------------

@dataclass(frozen=True)
class Extension:
    smaller: BuildingSet
    larger: BuildingSet
    added: Hashable
    factors: frozenset          # F_{G1}(b)

    @cached_property
    def predicted_faces(self) -> frozenset:
        """N(G1 + b) from the three-condition characterisation in terms of N(G1)."""
        n1 = nested_complex(self.smaller)
        f = self.factors
        out = set()
        for s in n1.faces:
            if f <= s:
                continue
            out.add(s)
            if s | f in n1.face_set:
                out.add(s | {self.added})
        return frozenset(out)


def extend_building_set(g: BuildingSet, b) -> Extension:
    if b in g.members:
        raise InputError(f"{b!r} is already in the building set", b)
    larger = building_set(g.lattice, g.members | {b})
    return Extension(g, larger, b, frozenset(g.factors(b)))


def building_set_chain(lattice: Poset, g: BuildingSet) -> list[BuildingSet]:
    """Irr(L) = G0 < G1 < ... < Gn = G, each step adding one element."""
    res = is_building_set(lattice, g.members)
    if not res:
        raise InputError(f"not a building set (fails at {res.witness!r})", res.witness)
    irr = irreducibles(lattice).members
    if not irr <= g.members:
        raise InputError("building set does not contain Irr(L)")
    chain = [BuildingSet(lattice, g.members)]
    current = set(g.members)
    while current - irr:
        extra = current - irr
        b = min(lattice.minimal(extra), key=lattice.index)
        current.remove(b)
        step = BuildingSet(lattice, frozenset(current))
        check = is_building_set(lattice, step.members)
        if not check:
            raise AssertionError(f"deleting minimal {b!r} broke the building set")
        chain.append(step)
    return chain[::-1]


def enumerate_building_sets(lattice: Poset, cap: int = 1 << 14) -> list[BuildingSet]:
    """Every building set, by filtering supersets of Irr(L)."""
    irr = irreducibles(lattice).members
    rest = [x for x in _nonbottom(lattice) if x not in irr]
    if 2 ** len(rest) > cap:
        raise ResourceError(f"{2 ** len(rest)} candidate subsets exceed the cap {cap}")
    out = []
    for r in range(len(rest) + 1):
        for extra in itertools.combinations(rest, r):
            members = irr | frozenset(extra)
            if is_building_set(lattice, members):
                out.append(BuildingSet(lattice, members))
    return out


def single_extensions(sets: Sequence[BuildingSet]) -> list[tuple[BuildingSet, Hashable]]:
    """Pairs ``(G, b)`` with both G and G + b in ``sets``."""
    by_members = {g.members: g for g in sets}
    out = []
    for g in sets:
        for b in sorted(set().union(*(h.members for h in sets)) - g.members,
                        key=g.lattice.index):
            if g.members | {b} in by_members:
                out.append((g, b))
    return out
