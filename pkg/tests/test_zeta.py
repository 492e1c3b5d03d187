from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from matroid_zeta.buildset import enumerate_building_sets, full_building_set, irreducibles, nested_complex
from matroid_zeta.errors import InputError
from matroid_zeta.invariants import (
    BFunctionSpec,
    NFunctionTable,
    affine_alpha_spec,
    chi_arr_table,
    chi_tor_table,
    delta_table,
)
from matroid_zeta.matroid import (
    empty_matroid,
    lattice_of_flats,
    matroid_from_bases,
    named_matroid,
    rank_census,
    uniform_matroid,
)
from matroid_zeta.ratfunc import RatFunc
from matroid_zeta.zeta import (
    candidate_poles,
    chi_circle,
    closed_form_for,
    matroid_taylor_report,
    matroid_zeta,
    multiplicativity_check,
    rank2_closed_form,
    rank3_closed_form,
    taylor_report,
    verify_independence,
    zeta,
    zeta_by_definition,
    zeta_by_lemma,
)

from conftest import flats

s = RatFunc.s()
inv = RatFunc.linear_inverse
U23 = RatFunc(1, (2, -1), {(1, 1): 1, (3, 2): 1})
U34 = RatFunc(1, (3, -2, 1), {(4, 3): 1, (1, 1): 2})
FANO = RatFunc(1, (6, -13, 9), {(7, 3): 1, (3, 2): 1, (1, 1): 1})
CORPUS = ["uniform:1:1", "uniform:2:3", "uniform:2:4", "boolean:2", "boolean:3", "uniform:3:4",
          "uniform:3:5", "fano", "nonfano", "graphic:K4"]


# -- chi circle ------------------------------------------------------------------------------

def test_chi_circle_on_u23(u23):
    table = chi_arr_table(u23, irreducibles(u23))
    assert chi_circle(table, [u23.top]) == -1
    assert chi_circle(table, []) == 0
    for f in table.complex.facets:
        assert chi_circle(table, f) == table.values[f]


def test_chi_circle_needs_face(u23):
    table = chi_arr_table(u23, irreducibles(u23))
    with pytest.raises(InputError):
        chi_circle(table, u23.atoms[:2])


# -- Z by definition and by lemma -------------------------------------------------------------------

def test_u11():
    lat = flats("uniform:1:1")
    assert zeta(lat) == inv(1, 1)


def test_u23(u23):
    assert zeta(u23) == U23


def test_boolean2_both_building_sets(b2):
    for g in (irreducibles(b2), full_building_set(b2)):
        assert zeta(b2, g) == inv(1, 1) ** 2


def test_lemma_terms_on_u23(u23):
    by_hand = (RatFunc(2) - 3 * s * inv(1, 1) - 2 * (3 * s + 1) * inv(3, 2)
               + 3 * s * (3 * s + 1) * inv(1, 1) * inv(3, 2))
    assert by_hand == U23
    g = irreducibles(u23)
    assert zeta_by_lemma(u23, g, chi_arr_table(u23, g), affine_alpha_spec(u23)) == U23


@pytest.mark.parametrize("desc", ["uniform:2:3", "boolean:3", "graphic:K4"])
def test_delta_tables(desc):
    lat = flats(desc)
    g = full_building_set(lat)
    alpha = affine_alpha_spec(lat)
    for face in nested_complex(g).faces[:25]:
        expected = RatFunc((-1) ** len(face))
        for a in face:
            v = alpha.evaluate(a)
            expected = expected * (v - 1) * v.inverse()
        table = delta_table(g, face)
        assert zeta_by_definition(lat, g, table, alpha) == expected
        assert zeta_by_lemma(lat, g, table, alpha) == expected


def test_zero_table(u23):
    g = irreducibles(u23)
    t = chi_arr_table(u23, g)
    zero = NFunctionTable(t.complex, {f: 0 for f in t.complex.faces})
    assert zeta_by_definition(u23, g, zero, affine_alpha_spec(u23)) == 0


@pytest.mark.parametrize("desc", CORPUS)
def test_definition_equals_lemma_and_linearity(desc):
    lat = flats(desc)
    alpha = affine_alpha_spec(lat)
    for g in (irreducibles(lat), full_building_set(lat)):
        a, t = chi_arr_table(lat, g), chi_tor_table(lat, g)
        for table in (a, t):
            assert zeta_by_definition(lat, g, table, alpha) == zeta_by_lemma(lat, g, table, alpha)
        assert zeta_by_definition(lat, g, a + t, alpha) == (
            zeta_by_definition(lat, g, a, alpha) + zeta_by_definition(lat, g, t, alpha))


def test_non_invertible_alpha(u23):
    g = irreducibles(u23)
    bad = BFunctionSpec("square", lambda p: RatFunc.polynomial((1, 0, 1)))
    with pytest.raises(InputError):
        zeta_by_definition(u23, g, chi_arr_table(u23, g), bad)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["boolean:3", "graphic:K4", "uniform:3:4"]), st.data())
def test_zeta_independent_of_random_building_set(desc, data):
    lat = flats(desc)
    g = data.draw(st.sampled_from(enumerate_building_sets(lat)))
    assert zeta(lat, g) == zeta(lat)
    assert zeta(lat, g, family=chi_tor_table) == zeta(lat, family=chi_tor_table)


# -- independence harness ----------------------------------------------------------------------------

def test_boolean3_on_all_building_sets(b3):
    rep = verify_independence(b3, building_sets=enumerate_building_sets(b3))
    assert rep.ok and rep.notes["zeta"] == str(inv(1, 1) ** 3)


@pytest.mark.parametrize("desc", ["graphic:K4", "fano"])
def test_irr_and_full_agree(desc):
    lat = flats(desc)
    assert verify_independence(lat).ok
    assert zeta(lat, full_building_set(lat)) == zeta(lat)


def test_independence_catches_bad_family(b3):
    def bent(lat, g):
        t = chi_arr_table(lat, g)
        vals = dict(t.values)
        vals[frozenset()] += len(g.members)
        return NFunctionTable(t.complex, vals)

    assert not verify_independence(b3, family=bent, building_sets=enumerate_building_sets(b3)).ok


# -- poles ----------------------------------------------------------------------------------------------

def test_poles_u23(u23):
    rep = candidate_poles(u23)
    assert rep.candidates == {Fraction(-1), Fraction(-2, 3)}
    assert set(rep.actual) == rep.candidates


def test_poles_boolean2(b2):
    assert candidate_poles(b2).candidates == {Fraction(-1)}


def test_poles_u34():
    rep = candidate_poles(flats("uniform:3:4"))
    assert rep.candidates == {Fraction(-1), Fraction(-3, 4)}
    assert rep.actual == {Fraction(-1): 2, Fraction(-3, 4): 1}


@pytest.mark.parametrize("desc", CORPUS)
def test_candidates_cover_actual_poles(desc):
    rep = candidate_poles(flats(desc))
    assert set(rep.actual) <= rep.candidates
    assert set(rep.to_json()) == {"candidates", "actual", "cancelled"}


# -- closed forms ------------------------------------------------------------------------------------------

def test_rank2_examples():
    assert rank2_closed_form(3) == U23
    assert rank2_closed_form(2) == inv(1, 1) ** 2
    assert rank2_closed_form(4) == RatFunc(1, (1, -1), {(1, 1): 1, (2, 1): 1})
    with pytest.raises(InputError):
        rank2_closed_form(1)


@pytest.mark.parametrize("n", range(2, 7))
def test_rank2_matches_uniform(n):
    assert zeta(lattice_of_flats(uniform_matroid(2, n))) == rank2_closed_form(n)


def test_rank3_examples():
    assert rank3_closed_form(4, {2: 6}) == U34
    assert rank3_closed_form(7, {3: 7}) == FANO
    k4 = rank3_closed_form(6, {3: 4, 2: 3})
    assert k4(0) == 1 and k4.derivative_at(0) == -6


def test_rank3_census_warning():
    with pytest.warns(UserWarning):
        rank3_closed_form(4, {2: 5})


@pytest.mark.parametrize("desc", ["uniform:3:4", "uniform:3:5", "fano", "nonfano", "graphic:K4"])
def test_rank3_matches_definition(desc):
    lat = flats(desc)
    assert zeta(lat) == rank3_closed_form(len(lat.atoms), rank_census(lat, 2))
    assert closed_form_for(lat) == zeta(lat)


def test_no_closed_form_above_rank3():
    assert closed_form_for(flats("uniform:4:5")) is None


# -- multiplicativity ---------------------------------------------------------------------------------------

def test_coloops_multiply():
    u11 = uniform_matroid(1, 1)
    assert multiplicativity_check(u11, u11).ok
    assert matroid_zeta(named_matroid("boolean:2")) == inv(1, 1) ** 2


@pytest.mark.parametrize("pair", [("uniform:2:3", "uniform:1:1"), ("uniform:2:3", "uniform:2:3"),
                                  ("fano", "uniform:1:1")])
def test_direct_sums_multiply(pair):
    rep = multiplicativity_check(named_matroid(pair[0]), named_matroid(pair[1]))
    assert rep.ok, rep.notes


def test_empty_summand():
    rep = multiplicativity_check(uniform_matroid(2, 3), empty_matroid())
    assert rep.ok
    assert matroid_zeta(empty_matroid()) == 1


# -- Taylor ----------------------------------------------------------------------------------------------------

@pytest.mark.parametrize("desc,size", [("uniform:2:3", 3), ("uniform:3:4", 4), ("fano", 7),
                                       ("graphic:K4", 6), ("nonfano", 7), ("uniform:3:5", 5)])
def test_taylor(desc, size):
    rep = matroid_taylor_report(named_matroid(desc))
    assert rep.z_at_0 == 1 and rep.dz_at_0 == -size
    assert rep.z0_is_one and rep.matches_ground and rep.matches_atoms


def test_taylor_reports_both_sizes_for_parallel_elements():
    m = matroid_from_bases(["a", "b", "c"], [["a", "c"], ["b", "c"]])
    rep = matroid_taylor_report(m)
    assert (rep.ground_size, rep.atom_count) == (3, 2)
    assert rep.z0_is_one and rep.dz_at_0 == -2
    assert rep.matches_atoms and not rep.matches_ground


def test_taylor_defaults_to_atoms(u23):
    assert taylor_report(u23).ground_size == 3
