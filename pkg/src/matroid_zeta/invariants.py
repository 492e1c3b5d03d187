"""N-functions, B-functions and the atom-count combinatorics behind chi^arr.

``chi_arr`` is the rank of the graded algebra D(L, G, S), counted through its
monomial basis: for every ``H`` with ``S | H`` nested, monomials with exponents
``1 <= m_A < d(S, H_<A, A)`` on support ``H``.  ``H`` is allowed to meet ``S``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .buildset import (
    BuildingSet,
    NestedComplex,
    enumerate_building_sets,
    extend_building_set,
    irreducibles,
    nested_complex,
    single_extensions,
)
from .errors import InputError, Report
from .poset import Poset, RankedLattice, validate_ranked_atomic_lattice
from .ratfunc import RatFunc

Face = frozenset


def _strictly_below(lat: Poset, xs: Iterable, b) -> list:
    return [x for x in xs if x != b and lat.leq(x, b)]


def _base_join(lat: Poset, s_face, h, b):
    pool = list(h) + _strictly_below(lat, s_face, b)
    for x in h:
        if not lat.lt(x, b):
            raise InputError(f"H element {x!r} is not strictly below {b!r}", x)
    j = lat.join(pool)
    if j is None:
        raise AssertionError("join of elements below b must exist")
    return j


def atoms_to_reach(lat: RankedLattice, j, b) -> int:
    """Fewest atoms whose join with ``j`` is ``b`` (brute force, memoised)."""
    key = ("d", j, b)
    memo = lat._memo
    if key in memo:
        return memo[key]
    if j == b:
        memo[key] = 0
        return 0
    jm = lat._down[lat.index(j)]
    cands = [lat.index(a) for a in lat.atoms_below(b) if not jm >> lat.index(a) & 1]
    ji, bi = lat.index(j), lat.index(b)
    for m in range(1, len(cands) + 1):
        for combo in itertools.combinations(cands, m):
            if lat._join_idx((ji, *combo)) == bi:
                memo[key] = m
                return m
    raise AssertionError(f"{b!r} is not reachable from {j!r} by atoms; lattice not atomic?")


def d_value(lat: RankedLattice, g: BuildingSet | None, s_face: Iterable, h: Iterable, b) -> int:
    """Minimal number of atoms A_1..A_m with b = join(H, S_<b, A_1, ..., A_m)."""
    if g is not None and b not in g.members:
        raise InputError(f"{b!r} is not in the building set", b)
    return atoms_to_reach(lat, _base_join(lat, s_face, h, b), b)


def d_value_geometric(lat: RankedLattice, g: BuildingSet | None, s_face: Iterable,
                      h: Iterable, b) -> int:
    """Rank-difference fast path; only valid in geometric lattices."""
    if not lat.is_geometric:
        raise InputError("d_value_geometric needs a geometric (semimodular) lattice")
    if g is not None and b not in g.members:
        raise InputError(f"{b!r} is not in the building set", b)
    return lat.rank[b] - lat.rank[_base_join(lat, s_face, h, b)]


def c_coeff(lat: RankedLattice, g: BuildingSet, s_face: Iterable, h: Iterable,
            complex_: NestedComplex | None = None) -> int:
    """C_H^S = prod over A in H of (d(S, H_<A, A) - 1)."""
    s_face, h = frozenset(s_face), frozenset(h)
    nc = complex_ or nested_complex(g)
    if s_face | h not in nc:
        raise InputError("S | H is not nested")
    out = 1
    for a in h:
        out *= d_value(lat, None, s_face, _strictly_below(lat, h, a), a) - 1
        if out == 0:
            break
    return out


def _require_ranked(lat: Poset) -> RankedLattice:
    return validate_ranked_atomic_lattice(lat)


def chi_arr(lat: RankedLattice, g: BuildingSet, s_face: Iterable,
            complex_: NestedComplex | None = None) -> int:
    """Rank of D(L, G, S) from the monomial basis."""
    lat = _require_ranked(lat)
    nc = complex_ or nested_complex(g)
    s = frozenset(s_face)
    if s not in nc:
        raise InputError("S is not a nested set")
    total = 0
    s_list = sorted(s, key=lat.index)
    for t in nc.supersets(s):
        new = t - s
        for r in range(len(s_list) + 1):
            for k in itertools.combinations(s_list, r):
                total += c_coeff(lat, g, s, new | frozenset(k), nc)
    return total


def chi_arr_disjoint(lat: RankedLattice, g: BuildingSet, s_face: Iterable) -> int:
    """The reading with H disjoint from S.  It undercounts; kept as a regression pin."""
    nc = nested_complex(g)
    s = frozenset(s_face)
    return sum(c_coeff(lat, g, s, t - s, nc) for t in nc.supersets(s))


def chi_tor(g: BuildingSet, s_face: Iterable, complex_: NestedComplex | None = None) -> int:
    """Number of facets of N(G) containing ``s_face``."""
    nc = complex_ or nested_complex(g)
    s = frozenset(s_face)
    if s not in nc:
        raise InputError("S is not a nested set")
    return sum(1 for f in nc.facets if s <= f)


@dataclass
class NFunctionTable:
    complex: NestedComplex
    values: dict = field(default_factory=dict)

    @property
    def building_set(self) -> BuildingSet:
        return self.complex.building_set

    def __getitem__(self, face) -> int:
        return self.values[frozenset(face)]

    def __add__(self, other: "NFunctionTable") -> "NFunctionTable":
        if other.complex.face_set != self.complex.face_set:
            raise InputError("tables live on different complexes")
        return NFunctionTable(self.complex, {f: v + other.values[f] for f, v in self.values.items()})

    def to_json(self) -> dict:
        lat = self.building_set.lattice
        rows = [{"face": sorted(lat.label(x) for x in f), "value": self.values[f]}
                for f in self.complex.faces]
        return {"building_set": self.building_set.labels(), "values": rows}


def chi_arr_table(lat: RankedLattice, g: BuildingSet) -> NFunctionTable:
    nc = nested_complex(g)
    return NFunctionTable(nc, {f: chi_arr(lat, g, f, nc) for f in nc.faces})


def chi_tor_table(lat: Poset, g: BuildingSet) -> NFunctionTable:
    nc = nested_complex(g)
    return NFunctionTable(nc, {f: chi_tor(g, f, nc) for f in nc.faces})


def delta_table(g: BuildingSet, face) -> NFunctionTable:
    nc = nested_complex(g)
    face = frozenset(face)
    return NFunctionTable(nc, {f: int(f == face) for f in nc.faces})


def blowup_transform(table: NFunctionTable, b) -> NFunctionTable:
    """Bl_b f on N(G + b), by the three-case rule with F = F_G(b)."""
    g1 = table.building_set
    ext = extend_building_set(g1, b)
    n1 = table.complex
    n2 = nested_complex(ext.larger)
    f = ext.factors
    out = {}
    for s in n2.faces:
        if b in s:
            base = (s - {b}) | f
            out[s] = table.values[base] * len(f - s)
        elif s | f in n1.face_set:
            out[s] = table.values[s] + table.values[s | f] * (len(f - s) - 1)
        else:
            out[s] = table.values[s]
    return NFunctionTable(n2, out)


NFamily = Callable[[Poset, BuildingSet], NFunctionTable]


def verify_n_function(family: NFamily, lat: Poset,
                      corpus: Sequence[tuple[BuildingSet, Hashable]] | None = None) -> Report:
    """Direct evaluation on G + b against the blowup transform of the evaluation on G."""
    if corpus is None:
        corpus = single_extensions(enumerate_building_sets(lat))
    report = Report("n-function")
    tables: dict = {}

    def table(g: BuildingSet) -> NFunctionTable:
        if g.members not in tables:
            tables[g.members] = family(lat, g)
        return tables[g.members]

    for g1, b in corpus:
        g2 = BuildingSet(lat, g1.members | {b})
        predicted = blowup_transform(table(g1), b)
        direct = table(g2)
        for face in predicted.complex.faces:
            report.checked += 1
            if direct.values.get(face) != predicted.values[face]:
                report.mismatches.append({
                    "G": g1.labels(),
                    "b": lat.label(b),
                    "face": sorted(lat.label(x) for x in face),
                    "direct": direct.values.get(face),
                    "blowup": predicted.values[face],
                })
    return report


# -- B-functions --------------------------------------------------------------------

@dataclass(frozen=True)
class BFunctionSpec:
    """A function on L minus bottom plus how it combines over F_G(p).

    ``combine`` is ``"sum"`` for additive kinds and ``"product"`` for the
    cardinality kind, whose logarithm is the additive function.
    """

    kind: str
    evaluate: Callable[[Hashable], object]
    combine: str = "sum"


def atom_count_spec(lat: RankedLattice) -> BFunctionSpec:
    return BFunctionSpec("atom-count", lat.atom_count)


def rank_spec(lat: RankedLattice) -> BFunctionSpec:
    return BFunctionSpec("rank", lambda p: lat.rank[p])


def irr_count_spec(lat: Poset) -> BFunctionSpec:
    irr = irreducibles(lat).members
    return BFunctionSpec("irr-count", lambda p: sum(1 for x in lat.down_set(p) if x in irr))


def cardinality_spec(lat: Poset) -> BFunctionSpec:
    return BFunctionSpec("cardinality", lambda p: len(lat.down_set(p)), combine="product")


def affine_alpha_spec(lat: RankedLattice) -> BFunctionSpec:
    """alpha(p) = n_p * s + k_p with n_p the atoms below p and k_p its rank."""
    return BFunctionSpec(
        "affine-alpha",
        lambda p: RatFunc.polynomial((lat.rank[p], lat.atom_count(p))),
    )


STANDARD_SPECS = {
    "atom-count": atom_count_spec,
    "rank": rank_spec,
    "irr-count": irr_count_spec,
    "cardinality": cardinality_spec,
    "affine-alpha": affine_alpha_spec,
}


def verify_b_function(spec: BFunctionSpec, lat: Poset,
                      building_sets: Sequence[BuildingSet] | None = None) -> Report:
    if building_sets is None:
        building_sets = enumerate_building_sets(lat)
    report = Report(f"b-function:{spec.kind}")
    bottom = lat.bottom
    for g in building_sets:
        for p in lat.elements:
            if p == bottom:
                continue
            parts = [spec.evaluate(f) for f in g.factors(p)]
            if spec.combine == "product":
                combined = 1
                for v in parts:
                    combined = combined * v
            else:
                combined = parts[0]
                for v in parts[1:]:
                    combined = combined + v
            report.checked += 1
            value = spec.evaluate(p)
            if value != combined:
                report.mismatches.append({
                    "G": g.labels(), "p": lat.label(p),
                    "value": str(value), "combined": str(combined),
                })
    return report
