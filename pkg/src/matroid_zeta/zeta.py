"""The combinatorial zeta function and its executable identities."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Hashable, Mapping, Sequence

from .buildset import (
    BuildingSet,
    building_set_chain,
    full_building_set,
    irreducibles,
)
from .errors import InputError, Report
from .invariants import (
    BFunctionSpec,
    NFamily,
    NFunctionTable,
    affine_alpha_spec,
    blowup_transform,
    chi_arr_table,
)
from .matroid import Matroid, direct_sum, lattice_of_flats, rank_census
from .poset import Poset, RankedLattice
from .ratfunc import RatFunc

AlphaLike = BFunctionSpec | Callable[[Hashable], RatFunc]


def _alpha_fn(alpha: AlphaLike) -> Callable[[Hashable], RatFunc]:
    fn = alpha.evaluate if isinstance(alpha, BFunctionSpec) else alpha

    def value(x):
        v = fn(x)
        return v if isinstance(v, RatFunc) else RatFunc(v)

    return value


def _inverse(v: RatFunc, x) -> RatFunc:
    try:
        return v.inverse()
    except (ZeroDivisionError, ValueError) as exc:
        raise InputError(f"alpha is not invertible at {x!r}: {exc}", x) from None


def chi_circle(table: NFunctionTable, u) -> int:
    """Alternating sum of chi over the faces containing ``u``."""
    u = frozenset(u)
    if u not in table.complex:
        raise InputError("U is not a face of N(G)")
    return sum((-1) ** (len(t) - len(u)) * table.values[t] for t in table.complex.supersets(u))


def zeta_by_definition(lat: Poset, g: BuildingSet, chi: NFunctionTable,
                       alpha: AlphaLike) -> RatFunc:
    alpha_of = _alpha_fn(alpha)
    inv = {x: _inverse(alpha_of(x), x) for x in g.members}
    total = RatFunc(0)
    for u in chi.complex.faces:
        c = chi_circle(chi, u)
        if not c:
            continue
        term = RatFunc(c)
        for a in u:
            term = term * inv[a]
        total = total + term
    return total


def zeta_by_lemma(lat: Poset, g: BuildingSet, chi: NFunctionTable, alpha: AlphaLike) -> RatFunc:
    """Sum of chi(U) (-1)^|U| prod (alpha - 1) / prod alpha."""
    alpha_of = _alpha_fn(alpha)
    factor = {}
    for x in g.members:
        a = alpha_of(x)
        factor[x] = (a - 1) * _inverse(a, x)
    total = RatFunc(0)
    for u in chi.complex.faces:
        c = chi.values[u]
        if not c:
            continue
        term = RatFunc((-1) ** len(u) * c)
        for a in u:
            term = term * factor[a]
        total = total + term
    return total


def zeta(lat: RankedLattice, g: BuildingSet | None = None,
         family: NFamily = chi_arr_table, alpha: AlphaLike | None = None) -> RatFunc:
    """Z with chi^arr and the standard alpha on Irr(L) unless told otherwise."""
    g = g or irreducibles(lat)
    alpha = alpha or affine_alpha_spec(lat)
    return zeta_by_definition(lat, g, family(lat, g), alpha)


def verify_independence(lat: RankedLattice, family: NFamily = chi_arr_table,
                        alpha: AlphaLike | None = None,
                        building_sets: Sequence[BuildingSet] | None = None) -> Report:
    """Z agrees on every supplied building set, and the single-step law holds on chains."""
    alpha = alpha or affine_alpha_spec(lat)
    if building_sets is None:
        building_sets = [irreducibles(lat), full_building_set(lat)]
    report = Report("independence")
    values: dict = {}
    tables: dict = {}

    def table(g):
        if g.members not in tables:
            tables[g.members] = family(lat, g)
        return tables[g.members]

    def z(g):
        if g.members not in values:
            values[g.members] = zeta_by_definition(lat, g, table(g), alpha)
        return values[g.members]

    chains = [building_set_chain(lat, g) for g in building_sets]
    every = {g.members: g for chain in chains for g in chain}
    for g in building_sets:
        every.setdefault(g.members, g)
    reference = z(irreducibles(lat))
    for members, g in sorted(every.items(), key=lambda kv: len(kv[0])):
        report.checked += 1
        if z(g) != reference:
            report.mismatches.append({"G": g.labels(), "zeta": str(z(g)), "expected": str(reference)})
    for chain in chains:
        for g1, g2 in zip(chain, chain[1:]):
            (b,) = g2.members - g1.members
            stepped = zeta_by_definition(lat, g2, blowup_transform(table(g1), b), alpha)
            report.checked += 1
            if stepped != z(g1):
                report.mismatches.append({"G": g1.labels(), "b": lat.label(b),
                                          "step": str(stepped), "expected": str(z(g1))})
    report.notes["zeta"] = str(reference)
    report.notes["building_sets"] = len(every)
    return report


@dataclass(frozen=True)
class PoleReport:
    candidates: frozenset       # -k_A/n_A over A in Irr(L)
    actual: dict                # pole -> multiplicity, read off Z

    def to_json(self) -> dict:
        return {
            "candidates": sorted(str(c) for c in self.candidates),
            "actual": {str(p): m for p, m in sorted(self.actual.items())},
            "cancelled": sorted(str(c) for c in self.candidates - set(self.actual)),
        }


def candidate_poles(lat: RankedLattice, z: RatFunc | None = None) -> PoleReport:
    irr = irreducibles(lat)
    cands = frozenset(Fraction(-lat.rank[a], lat.atom_count(a)) for a in irr.members)
    z = z if z is not None else zeta(lat, irr)
    return PoleReport(cands, z.poles())


def rank2_closed_form(n: int) -> RatFunc:
    """(2 - n + n/(s+1)) / (n s + 2) for a rank-2 lattice with n atoms."""
    if n < 2:
        raise InputError("a rank-2 atomic lattice has at least two atoms")
    inner = RatFunc(2 - n) + n * RatFunc.linear_inverse(1, 1)
    return inner * RatFunc.linear_inverse(n, 2)


def rank3_closed_form(n_atoms: int, census: Mapping[int, int]) -> RatFunc:
    """Rank-3 formula with alpha(atom) = s+1, alpha(b_m) = m s + 2, alpha(top) = n s + 3.

    ``census`` maps m to the number of rank-2 elements with exactly m atoms.
    """
    pairs = sum(cnt * comb(m, 2) for m, cnt in census.items())
    if pairs != comb(n_atoms, 2):
        warnings.warn(f"census covers {pairs} atom pairs, expected {comb(n_atoms, 2)}",
                      stacklevel=2)
    inv_a = RatFunc.linear_inverse(1, 1)
    total = RatFunc(3 - 2 * n_atoms + sum(cnt * (m - 1) for m, cnt in census.items()))
    total = total + (2 * n_atoms - sum(cnt * m for m, cnt in census.items())) * inv_a
    for m, cnt in census.items():
        total = total + cnt * RatFunc.linear_inverse(m, 2) * (RatFunc(2 - m) + m * inv_a)
    return total * RatFunc.linear_inverse(n_atoms, 3)


def closed_form_for(lat: RankedLattice) -> RatFunc | None:
    """The small-rank closed form matching ``lat``, or None above rank 3."""
    h = lat.height
    if h == 1:
        return RatFunc.linear_inverse(lat.atom_count(lat.top), 1)
    if h == 2:
        return rank2_closed_form(len(lat.atoms))
    if h == 3:
        return rank3_closed_form(len(lat.atoms), rank_census(lat, 2))
    return None


def matroid_zeta(m: Matroid, g: str = "minimal") -> RatFunc:
    lat = lattice_of_flats(m)
    bs = irreducibles(lat) if g == "minimal" else full_building_set(lat)
    return zeta(lat, bs)


def multiplicativity_check(m1: Matroid, m2: Matroid) -> Report:
    report = Report("multiplicativity")
    total = direct_sum(m1, m2, rename=True)
    lhs = matroid_zeta(total)
    rhs = matroid_zeta(m1) * matroid_zeta(m2)
    report.checked = 1
    report.notes = {"sum": str(lhs), "product": str(rhs)}
    if lhs != rhs:
        report.mismatches.append({"M1": m1.name, "M2": m2.name, "sum": str(lhs), "product": str(rhs)})
    return report


@dataclass(frozen=True)
class TaylorReport:
    z_at_0: Fraction
    dz_at_0: Fraction
    ground_size: int
    atom_count: int

    @property
    def z0_is_one(self) -> bool:
        return self.z_at_0 == 1

    @property
    def matches_ground(self) -> bool:
        return abs(self.dz_at_0) == self.ground_size

    @property
    def matches_atoms(self) -> bool:
        return abs(self.dz_at_0) == self.atom_count

    def to_json(self) -> dict:
        return {
            "z_at_0": str(self.z_at_0),
            "dz_at_0": str(self.dz_at_0),
            "ground_size": self.ground_size,
            "atom_count": self.atom_count,
            "z0_is_one": self.z0_is_one,
            "dz_matches_ground": self.matches_ground,
            "dz_matches_atoms": self.matches_atoms,
        }


def taylor_report(lat: RankedLattice, z: RatFunc | None = None,
                  ground_size: int | None = None) -> TaylorReport:
    """Exact Z(0) and Z'(0).  ``ground_size`` defaults to the atom count."""
    z = z if z is not None else zeta(lat)
    atoms = len(lat.atoms)
    return TaylorReport(z(0), z.derivative_at(0),
                        atoms if ground_size is None else ground_size, atoms)


def matroid_taylor_report(m: Matroid) -> TaylorReport:
    lat = lattice_of_flats(m)
    return taylor_report(lat, zeta(lat), ground_size=len(m.ground))
