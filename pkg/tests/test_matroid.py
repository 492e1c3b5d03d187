import itertools
from math import comb

import pytest

from matroid_zeta.errors import InputError, UnsupportedInputError
from matroid_zeta.io import load_input, matroid_from_json, matroid_to_json
from matroid_zeta.matroid import (
    atom_count_below,
    boolean_matroid,
    complete_graph_edges,
    connected_flats,
    direct_sum,
    empty_matroid,
    fano_matroid,
    graphic_matroid,
    lattice_of_flats,
    matroid_from_bases,
    named_matroid,
    rank_census,
    size_diagnostic,
    uniform_matroid,
)
from matroid_zeta.buildset import irreducibles
from matroid_zeta.poset import is_isomorphic, meet_all, product

from conftest import chain, flats

NAMED = ["uniform:1:1", "uniform:2:3", "uniform:2:4", "uniform:3:4", "uniform:3:5",
         "boolean:3", "fano", "nonfano", "graphic:K4"]


def test_all_two_subsets_is_u23():
    m = matroid_from_bases([1, 2, 3], [[1, 2], [1, 3], [2, 3]])
    assert m.rank == 2 and len(m.bases) == 3
    assert m.canonical_hash() == uniform_matroid(2, 3).canonical_hash()


def test_single_coloop():
    m = matroid_from_bases([1], [[1]])
    assert m.rank == 1 and m.canonical_hash() == uniform_matroid(1, 1).canonical_hash()


def test_exchange_failure_has_witness():
    with pytest.raises(InputError) as exc:
        matroid_from_bases([1, 2, 3, 4], [[1, 2], [3, 4]])
    assert exc.value.witness is not None


def test_unequal_bases_rejected():
    with pytest.raises(InputError):
        matroid_from_bases([1, 2, 3], [[1], [2, 3]])


def test_fano_counts():
    m = named_matroid("fano")
    assert (len(m.ground), m.rank, len(m.bases)) == (7, 3, 28)


def test_k4_counts():
    m = named_matroid("graphic:K4")
    assert (len(m.ground), m.rank, len(m.bases)) == (6, 3, 16)


def test_named_uniform():
    assert named_matroid("uniform:2:3").canonical_hash() == uniform_matroid(2, 3).canonical_hash()


@pytest.mark.parametrize("bad", ["uniform:4:2", "nothing", "graphic:0-0x", "uniform:a:b"])
def test_bad_descriptors(bad):
    with pytest.raises(InputError):
        named_matroid(bad)


def test_rank_function_is_submodular():
    m = fano_matroid()
    subsets = [frozenset(c) for r in range(4) for c in itertools.combinations(m.ground, r)]
    for a in subsets[:40]:
        for b in subsets[::7]:
            assert m.rank_of(a | b) + m.rank_of(a & b) <= m.rank_of(a) + m.rank_of(b)


# -- flats ----------------------------------------------------------------------------------

def test_u23_flats():
    lat = flats("uniform:2:3")
    assert len(lat) == 5
    assert rank_census(lat, 1) == {1: 3}


def test_fano_flats_by_rank():
    lat = flats("fano")
    assert [len(lat.rank_level(r)) for r in range(4)] == [1, 7, 7, 1]


def test_k4_rank_two_level():
    lat = flats("graphic:K4")
    assert rank_census(lat, 2) == {3: 4, 2: 3}


@pytest.mark.parametrize("r,n", [(r, n) for r in (1, 2, 3) for n in range(r, 7)])
def test_uniform_flat_counts(r, n):
    lat = lattice_of_flats(uniform_matroid(r, n))
    for k in range(r):
        assert len(lat.rank_level(k)) == comb(n, k)
    assert len(lat.rank_level(r)) == 1


@pytest.mark.parametrize("desc", NAMED)
def test_flats_are_semimodular(desc):
    lat = flats(desc)
    rk = lat.rank
    for x, y in itertools.combinations(lat.elements, 2):
        assert rk[lat.join2(x, y)] + rk[meet_all(lat, [x, y])] <= rk[x] + rk[y]
    assert lat.is_geometric


def test_loops_rejected():
    m = matroid_from_bases(["a", "b"], [["a"]])
    with pytest.raises(UnsupportedInputError) as exc:
        lattice_of_flats(m)
    assert "loops unsupported" in str(exc.value)


def test_parallel_elements_diagnostic():
    m = matroid_from_bases(["a", "b", "c"], [["a", "c"], ["b", "c"]])
    lat = lattice_of_flats(m)
    diag = size_diagnostic(m, lat)
    assert diag["ground_size"] == 3 and diag["atom_count"] == 2


# -- atom counts ------------------------------------------------------------------------------

def test_atom_count_top_of_u23():
    lat = flats("uniform:2:3")
    assert atom_count_below(lat, lat.top) == 3


def test_atom_count_of_atoms_and_fano_lines():
    lat = flats("fano")
    assert all(atom_count_below(lat, a) == 1 for a in lat.atoms)
    assert all(atom_count_below(lat, x) == 3 for x in lat.rank_level(2))


# -- direct sums --------------------------------------------------------------------------------

def test_coloops_sum_to_boolean():
    s = direct_sum(uniform_matroid(1, 1), uniform_matroid(1, 1), rename=True)
    assert s.canonical_hash() == boolean_matroid(2).canonical_hash()


def test_sum_lattice_is_product():
    s = direct_sum(uniform_matroid(2, 3), uniform_matroid(1, 1), rename=True)
    assert s.rank == 3
    assert is_isomorphic(lattice_of_flats(s), product(flats("uniform:2:3"), chain(2))).ok


def test_sum_with_empty_matroid():
    m = fano_matroid()
    assert direct_sum(m, empty_matroid()).canonical_hash() == m.canonical_hash()


def test_sum_needs_disjoint_grounds():
    with pytest.raises(InputError):
        direct_sum(uniform_matroid(1, 1), uniform_matroid(1, 1))


# -- components ------------------------------------------------------------------------------------

@pytest.mark.parametrize("desc", NAMED)
def test_connected_flats_match_irreducibles(desc):
    m = named_matroid(desc)
    lat = flats(desc)
    assert connected_flats(m, lat) == irreducibles(lat).members


def test_components_of_boolean():
    m = boolean_matroid(3)
    assert len(m.components_of(m.ground)) == 3


# -- JSON ------------------------------------------------------------------------------------------

def test_json_forms(tmp_path):
    m = graphic_matroid(4, complete_graph_edges(4))
    assert matroid_from_json(matroid_to_json(m)).canonical_hash() == m.canonical_hash()
    g = matroid_from_json({"graphic": {"vertices": 4, "edges": [list(e) for e in complete_graph_edges(4)]}})
    assert g.canonical_hash() == m.canonical_hash()
    assert matroid_from_json({"named": "fano"}).canonical_hash() == fano_matroid().canonical_hash()


def test_hash_ignores_names_and_order():
    a = matroid_from_bases(["x", "y", "z"], [["x", "y"], ["y", "z"], ["x", "z"]])
    b = matroid_from_bases(["p", "q", "r"], [["r", "q"], ["p", "q"], ["r", "p"]])
    assert a.canonical_hash() == b.canonical_hash()


def test_load_input_diagnostics(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ground": ["a",\n "b"], "bases": [["a"]\n')
    with pytest.raises(InputError) as exc:
        load_input(bad)
    assert "line" in str(exc.value)
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"ground": "ab", "bases": []}')
    with pytest.raises(InputError, match="ground"):
        load_input(wrong)
