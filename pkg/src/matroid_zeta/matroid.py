"""Matroids given by bases, named families, lattices of flats and direct sums."""

from __future__ import annotations

import hashlib
import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .errors import InputError, UnsupportedInputError
from .poset import Poset, RankedLattice, validate_ranked_atomic_lattice

EXCHANGE_CHECK_LIMIT = 12


@dataclass(frozen=True)
class Matroid:
    ground: tuple[str, ...]
    bases: frozenset[frozenset[str]]
    rank: int
    name: str = field(default="", compare=False)

    @cached_property
    def _pos(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.ground)}

    @cached_property
    def _basis_masks(self) -> tuple[int, ...]:
        return tuple(self.to_mask(b) for b in self.bases)

    def to_mask(self, xs: Iterable[str]) -> int:
        m = 0
        for x in xs:
            m |= 1 << self._pos[x]
        return m

    def from_mask(self, mask: int) -> frozenset[str]:
        return frozenset(e for i, e in enumerate(self.ground) if mask >> i & 1)

    def rank_of_mask(self, mask: int) -> int:
        return max((mask & b).bit_count() for b in self._basis_masks)

    def rank_of(self, xs: Iterable[str]) -> int:
        return self.rank_of_mask(self.to_mask(xs))

    def closure_mask(self, mask: int) -> int:
        r = self.rank_of_mask(mask)
        for i in range(len(self.ground)):
            if not mask >> i & 1 and self.rank_of_mask(mask | 1 << i) == r:
                mask |= 1 << i
        return mask

    def closure(self, xs: Iterable[str]) -> frozenset[str]:
        return self.from_mask(self.closure_mask(self.to_mask(xs)))

    @cached_property
    def loops(self) -> tuple[str, ...]:
        covered = 0
        for b in self._basis_masks:
            covered |= b
        return tuple(e for i, e in enumerate(self.ground) if not covered >> i & 1)

    @cached_property
    def circuits(self) -> tuple[frozenset[str], ...]:
        """Minimal dependent sets, by subset enumeration (small ground sets only)."""
        n = len(self.ground)
        found: list[int] = []
        for size in range(1, self.rank + 2):
            for combo in itertools.combinations(range(n), size):
                mask = sum(1 << i for i in combo)
                if any(c & mask == c for c in found):
                    continue
                if self.rank_of_mask(mask) < size:
                    found.append(mask)
        return tuple(self.from_mask(c) for c in found)

    def components_of(self, xs: Iterable[str]) -> list[frozenset[str]]:
        """Connected components of the restriction to ``xs``."""
        xs = frozenset(xs)
        parent = {x: x for x in xs}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in self.circuits:
            if c <= xs:
                first, *rest = sorted(c)
                for y in rest:
                    parent[find(y)] = find(first)
        groups: dict[str, set[str]] = {}
        for x in xs:
            groups.setdefault(find(x), set()).add(x)
        return sorted((frozenset(g) for g in groups.values()), key=sorted)

    def canonical_hash(self) -> str:
        """SHA-256 of the bases renamed to ground-set indices, sorted."""
        payload = {
            "n": len(self.ground),
            "bases": sorted(sorted(self._pos[e] for e in b) for b in self.bases),
        }
        blob = json.dumps(payload, separators=(",", ":"), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()


def matroid_from_bases(ground: Sequence[Any], bases: Iterable[Iterable[Any]],
                       name: str = "", check: bool = True) -> Matroid:
    """Validated matroid from its bases.

    The exchange axiom is checked for ground sets up to
    ``EXCHANGE_CHECK_LIMIT`` elements; larger inputs are trusted.
    """
    ground_t = tuple(str(e) for e in ground)
    if len(set(ground_t)) != len(ground_t):
        raise InputError("ground set has repeated names", ground_t)
    gset = set(ground_t)
    bs = frozenset(frozenset(str(e) for e in b) for b in bases)
    if not bs:
        raise InputError("a matroid needs at least one basis")
    for b in bs:
        if not b <= gset:
            raise InputError(f"basis {sorted(b)} is not a subset of the ground set",
                             sorted(b - gset))
    sizes = {len(b) for b in bs}
    if len(sizes) != 1:
        raise InputError(f"bases have different sizes {sorted(sizes)}", sorted(sizes))
    if check and len(ground_t) <= EXCHANGE_CHECK_LIMIT:
        for b1 in bs:
            for b2 in bs:
                for x in b1 - b2:
                    if not any((b1 - {x}) | {y} in bs for y in b2 - b1):
                        w = {"basis": sorted(b1), "other": sorted(b2), "removed": x}
                        raise InputError(
                            f"basis exchange fails: removing {x} from {sorted(b1)} "
                            f"cannot be repaired from {sorted(b2)}", w)
    return Matroid(ground_t, bs, sizes.pop(), name)


def uniform_matroid(r: int, n: int) -> Matroid:
    if not 0 <= r <= n:
        raise InputError(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
    ground = [str(i) for i in range(n)]
    return matroid_from_bases(ground, itertools.combinations(ground, r),
                              name=f"U({r},{n})", check=False)


def boolean_matroid(n: int) -> Matroid:
    """Direct sum of ``n`` coloops."""
    m = uniform_matroid(n, n)
    return Matroid(m.ground, m.bases, m.rank, f"boolean({n})")


FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5))


def _plane_matroid(lines: Sequence[tuple[int, ...]], name: str) -> Matroid:
    ground = [str(i) for i in range(7)]
    dependent = {frozenset(map(str, line)) for line in lines}
    bases = [b for b in itertools.combinations(ground, 3) if frozenset(b) not in dependent]
    return matroid_from_bases(ground, bases, name=name)


def fano_matroid() -> Matroid:
    return _plane_matroid(FANO_LINES, "fano")


def nonfano_matroid() -> Matroid:
    # Fano plane with the line {2,4,5} relaxed to a basis.
    return _plane_matroid(FANO_LINES[:-1], "nonfano")


def graphic_matroid(vertices: int, edges: Sequence[Sequence[int]], name: str = "") -> Matroid:
    """Cycle matroid of a multigraph; edges are named ``u-v`` (``u-v#k`` for repeats)."""
    if vertices < 0:
        raise InputError("vertex count must be non-negative")
    names: list[str] = []
    ends: list[tuple[int, int]] = []
    seen: Counter = Counter()
    for k, e in enumerate(edges):
        if len(e) != 2:
            raise InputError(f"edge {k} must have two endpoints", e)
        try:
            u, v = int(e[0]), int(e[1])
        except (TypeError, ValueError):
            raise InputError(f"edge {k} has non-integer endpoints", e) from None
        if not (0 <= u < vertices and 0 <= v < vertices):
            raise InputError(f"edge {k} endpoint out of range", e)
        u, v = min(u, v), max(u, v)
        base = f"{u}-{v}"
        names.append(base if not seen[base] else f"{base}#{seen[base]}")
        seen[base] += 1
        ends.append((u, v))

    def acyclic(idx: Sequence[int]) -> bool:
        parent = list(range(vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in idx:
            a, b = map(find, ends[i])
            if a == b:
                return False
            parent[a] = b
        return True

    # rank = |V| - #components
    parent = list(range(vertices))
    comps = vertices
    for u, v in ends:
        while parent[u] != u:
            u = parent[u]
        while parent[v] != v:
            v = parent[v]
        if u != v:
            parent[u] = v
            comps -= 1
    r = vertices - comps
    bases = [[names[i] for i in c] for c in itertools.combinations(range(len(names)), r)
             if acyclic(c)]
    return matroid_from_bases(names, bases, name=name or f"graphic({vertices},{len(names)})",
                              check=False)


def complete_graph_edges(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def empty_matroid() -> Matroid:
    return Matroid((), frozenset([frozenset()]), 0, "empty")


def named_matroid(name: str | Mapping[str, Any]) -> Matroid:
    """Standard matroid from a family descriptor.

    String forms: ``uniform:r:n``, ``boolean:n``, ``fano``, ``nonfano``,
    ``empty``, ``graphic:K<n>`` (complete graph) and ``graphic:0-1,1-2,...``.
    A mapping ``{"vertices": n, "edges": [[u, v], ...]}`` is read as a graph.
    """
    if isinstance(name, Mapping):
        try:
            return graphic_matroid(int(name["vertices"]), name["edges"])
        except KeyError as exc:
            raise InputError(f"graphic descriptor is missing {exc}") from None
    parts = str(name).strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "uniform" and len(parts) == 3:
            return uniform_matroid(int(parts[1]), int(parts[2]))
        if kind == "boolean" and len(parts) == 2:
            return boolean_matroid(int(parts[1]))
        if kind == "fano" and len(parts) == 1:
            return fano_matroid()
        if kind == "nonfano" and len(parts) == 1:
            return nonfano_matroid()
        if kind == "empty" and len(parts) == 1:
            return empty_matroid()
        if kind == "graphic" and len(parts) == 2:
            spec = parts[1]
            if spec.upper().startswith("K"):
                n = int(spec[1:])
                return graphic_matroid(n, complete_graph_edges(n), name=f"graphic(K{n})")
            edges = [tuple(int(v) for v in e.split("-")) for e in spec.split(",") if e]
            nv = 1 + max((max(e) for e in edges), default=-1)
            return graphic_matroid(nv, edges)
    except ValueError:
        pass
    raise InputError(f"unrecognised matroid descriptor {name!r}", name)


def lattice_of_flats(m: Matroid) -> RankedLattice:
    """Closed sets ordered by inclusion.  Loops are rejected, not deleted."""
    if m.loops:
        raise UnsupportedInputError(
            f"loops unsupported: {list(m.loops)} make the lattice of flats non-atomic",
            list(m.loops))
    start = m.closure_mask(0)
    flats = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for f in frontier:
            for i in range(len(m.ground)):
                if not f >> i & 1:
                    g = m.closure_mask(f | 1 << i)
                    if g not in flats:
                        flats.add(g)
                        nxt.append(g)
        frontier = nxt
    rank = {f: m.rank_of_mask(f) for f in flats}
    ordered = sorted(flats, key=lambda f: (rank[f], sorted(m._pos[e] for e in m.from_mask(f))))
    elems = [m.from_mask(f) for f in ordered]
    relation = []
    by_rank: dict[int, list[int]] = {}
    for f in ordered:
        by_rank.setdefault(rank[f], []).append(f)
    for f in ordered:
        for g in by_rank.get(rank[f] + 1, ()):
            if f & g == f:
                relation.append((m.from_mask(f), m.from_mask(g)))
    labels = {x: _flat_label(m, x) for x in elems}
    return validate_ranked_atomic_lattice(Poset(elems, relation, labels))


def _flat_label(m: Matroid, flat: frozenset[str]) -> str:
    return "{" + ",".join(sorted(flat, key=m._pos.__getitem__)) + "}"


def direct_sum(m1: Matroid, m2: Matroid, rename: bool = False) -> Matroid:
    """Bases are unions of one basis from each summand.

    With ``rename=True`` colliding names get ``a.``/``b.`` prefixes; otherwise
    a collision is an input error.
    """
    g1, g2 = m1.ground, m2.ground
    if set(g1) & set(g2):
        if not rename:
            raise InputError(f"ground sets overlap: {sorted(set(g1) & set(g2))}",
                             sorted(set(g1) & set(g2)))
        r1 = {e: f"a.{e}" for e in g1}
        r2 = {e: f"b.{e}" for e in g2}
    else:
        r1 = {e: e for e in g1}
        r2 = {e: e for e in g2}
    ground = [r1[e] for e in g1] + [r2[e] for e in g2]
    bases = [frozenset(r1[e] for e in b1) | frozenset(r2[e] for e in b2)
             for b1 in m1.bases for b2 in m2.bases]
    name = f"{m1.name or 'M1'}+{m2.name or 'M2'}"
    return matroid_from_bases(ground, bases, name=name, check=False)


def atom_count_below(lattice: RankedLattice, x) -> int:
    """Number of atoms of the lattice weakly below ``x``."""
    return lattice.atom_count(x)


def connected_flats(m: Matroid, lattice: RankedLattice | None = None) -> frozenset:
    """Non-empty flats whose restriction is connected.

    For a lattice of flats these are exactly the irreducible elements; this is
    the matroid fast path for :func:`matroid_zeta.buildset.irreducibles`.
    """
    lattice = lattice or lattice_of_flats(m)
    return frozenset(f for f in lattice.elements if f and len(m.components_of(f)) == 1)


def rank_census(lattice: RankedLattice, r: int) -> dict[int, int]:
    """``{m: #rank-r elements with exactly m atoms below}``."""
    return dict(sorted(Counter(lattice.atom_count(x) for x in lattice.rank_level(r)).items()))


def size_diagnostic(m: Matroid, lattice: RankedLattice) -> dict:
    """Ground-set size versus atom count; they differ when parallel elements exist."""
    atoms = len(lattice.atoms)
    return {"ground_size": len(m.ground), "atom_count": atoms, "simple": atoms == len(m.ground)}
