"""Acceptance criteria, one test each, with their time budgets.

Each test appends a PASS/FAIL line to ``conftest.ACCEPTANCE``; the lines are
printed in the terminal summary.  ``python tests/test_acceptance.py`` runs the
same checks without pytest.
"""

from __future__ import annotations

import functools
import itertools
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE, flats  # noqa: E402

from matroid_zeta.buildset import (  # noqa: E402
    enumerate_building_sets,
    extend_building_set,
    full_building_set,
    irreducibles,
    iterated_blowup,
    nested_complex,
    reverse_refinements,
    single_extensions,
)
from matroid_zeta.invariants import (  # noqa: E402
    STANDARD_SPECS,
    affine_alpha_spec,
    chi_arr_table,
    chi_tor_table,
    d_value,
    d_value_geometric,
    verify_b_function,
    verify_n_function,
)
from matroid_zeta.matroid import lattice_of_flats, named_matroid, rank_census, uniform_matroid  # noqa: E402
from matroid_zeta.poset import is_isomorphic  # noqa: E402
from matroid_zeta.ratfunc import RatFunc  # noqa: E402
from matroid_zeta.records import scan_catalog, write_catalog  # noqa: E402
from matroid_zeta.zeta import (  # noqa: E402
    multiplicativity_check,
    rank2_closed_form,
    rank3_closed_form,
    verify_independence,
    zeta,
    zeta_by_definition,
    zeta_by_lemma,
)

inv = RatFunc.linear_inverse


def criterion(number: int, title: str):
    """Record a PASS/FAIL line for the wrapped check, whatever the outcome."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                took = time.perf_counter() - start
                ACCEPTANCE.append(f"FAIL  criterion {number:>2}: {title} ({took:.2f}s) {exc!r:.200}")
                raise
            took = time.perf_counter() - start
            ACCEPTANCE.append(f"PASS  criterion {number:>2}: {title} ({took:.2f}s)"
                              + (f" {detail}" if detail else ""))

        return run

    return wrap


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


def matroid_lattice(desc):
    return lattice_of_flats(named_matroid(desc))


# corpus of criteria 4-6
EXTENSION_CORPUS = ["boolean:3", "graphic:K4"]


@criterion(1, "exact rank <= 2 zeta values")
def test_exact_zeta_values():
    z, took = timed(lambda: zeta(matroid_lattice("uniform:1:1")))
    assert z == inv(1, 1) and took < 1
    for n in range(2, 7):
        z, took = timed(lambda: zeta(lattice_of_flats(uniform_matroid(2, n))))
        assert z == rank2_closed_form(n), n
        assert took < 1, (n, took)
    z, took = timed(lambda: zeta(matroid_lattice("uniform:2:3")))
    assert z == RatFunc(1, (2, -1), {(1, 1): 1, (3, 2): 1}) and took < 1
    return "U11, U2n n=2..6, U23"


@criterion(2, "rank-3 closed form")
def test_rank3_closed_form():
    expected = {
        "uniform:3:4": RatFunc(1, (3, -2, 1), {(4, 3): 1, (1, 1): 2}),
        "fano": RatFunc(1, (6, -13, 9), {(7, 3): 1, (3, 2): 1, (1, 1): 1}),
        "graphic:K4": rank3_closed_form(6, {3: 4, 2: 3}),
    }
    for desc, target in expected.items():
        def run():
            lat = matroid_lattice(desc)
            g = irreducibles(lat)
            z = zeta_by_definition(lat, g, chi_arr_table(lat, g), affine_alpha_spec(lat))
            return z, rank3_closed_form(len(lat.atoms), rank_census(lat, 2))

        (z, closed), took = timed(run)
        assert z == closed == target, desc
        assert took < 10, (desc, took)
    return "U34, fano, K4"


@criterion(3, "building-set independence and step law")
def test_independence():
    start = time.perf_counter()
    total = 0
    for desc in ["boolean:3", "graphic:K4", "fano", "uniform:3:4"]:
        lat = matroid_lattice(desc)
        rep = verify_independence(lat, chi_arr_table, affine_alpha_spec(lat),
                                  [irreducibles(lat), full_building_set(lat)])
        assert rep.ok, (desc, rep.mismatches[:2])
        total += rep.checked
    assert time.perf_counter() - start < 120
    return f"{total} checks"


@criterion(4, "N-function axioms for chi^arr and chi^tor")
def test_n_functions():
    start = time.perf_counter()
    total = 0
    for desc in EXTENSION_CORPUS:
        lat = matroid_lattice(desc)
        corpus = single_extensions(enumerate_building_sets(lat))
        assert corpus
        for family in (chi_arr_table, chi_tor_table):
            rep = verify_n_function(family, lat, corpus)
            assert rep.ok, (desc, family.__name__, rep.mismatches[:2])
            total += rep.checked
    assert time.perf_counter() - start < 120
    return f"{total} face checks"


@criterion(5, "nested-set complex of a one-element extension")
def test_extension_faces():
    count = 0
    for desc in EXTENSION_CORPUS:
        lat = matroid_lattice(desc)
        for g, b in single_extensions(enumerate_building_sets(lat)):
            ext = extend_building_set(g, b)
            assert ext.predicted_faces == nested_complex(ext.larger).face_set, (desc, lat.label(b))
            count += 1
    return f"{count} extensions"


@criterion(6, "iterated blowup is the face poset of N(G)")
def test_iterated_blowups():
    count = 0
    for desc in EXTENSION_CORPUS:
        lat = matroid_lattice(desc)
        for g in enumerate_building_sets(lat):
            refs = reverse_refinements(g, 2)
            assert len({tuple(r) for r in refs}) >= 2, g.labels()
            faces = nested_complex(g).face_poset()
            for ref in refs:
                blown = iterated_blowup(lat, g, ref)
                check = is_isomorphic(blown, faces)
                assert check.ok, (g.labels(), check.reason)
                f = check.witness
                assert len(set(f.values())) == len(faces)
                assert all(blown.leq(x, y) == faces.leq(f[x], f[y])
                           for x in blown.elements for y in blown.elements)
                count += 1
    return f"{count} isomorphisms with witness"


@criterion(7, "B-functions")
def test_b_functions():
    total = 0
    for desc in ["boolean:3", "uniform:2:4"]:
        lat = matroid_lattice(desc)
        sets = enumerate_building_sets(lat)
        for kind, make in STANDARD_SPECS.items():
            rep = verify_b_function(make(lat), lat, sets)
            assert rep.ok, (desc, kind, rep.mismatches[:2])
            total += rep.checked
    return f"{len(STANDARD_SPECS)} kinds, {total} checks"


@criterion(8, "multiplicativity over direct sums")
def test_multiplicativity():
    start = time.perf_counter()
    for a, b in [("uniform:1:1", "uniform:1:1"), ("uniform:2:3", "uniform:1:1"),
                 ("uniform:2:3", "uniform:2:3")]:
        rep = multiplicativity_check(named_matroid(a), named_matroid(b))
        assert rep.ok, (a, b, rep.notes)
    assert time.perf_counter() - start < 30


@criterion(9, "Taylor scan of the reference catalog")
def test_taylor_scan(tmp_path):
    write_catalog(tmp_path)
    result = scan_catalog(tmp_path)
    rows = {r["file"]: r for r in result.rows}
    assert len(rows) == 11 and all(r["status"] == "ok" for r in rows.values())
    for r in rows.values():
        assert r["z_at_0"] == "1", r["file"]
        assert int(r["dz_at_0"]) == -r["ground_size"], r["file"]
    assert rows["fano.json"]["dz_at_0"] == "-7" and rows["K4.json"]["dz_at_0"] == "-6"
    assert result.summary["findings"] == []
    return "11 matroids"


@criterion(10, "oracle equivalence")
def test_oracle_equivalence():
    d_checks = 0
    for desc in ["uniform:1:1", "uniform:2:3", "uniform:2:4", "uniform:2:5", "boolean:2", "boolean:3",
                 "uniform:3:4", "fano", "graphic:K4"]:
        lat = flats(desc)
        assert lat.is_geometric and len(lat) <= 16
        for g in (irreducibles(lat), full_building_set(lat)):
            nc = nested_complex(g)
            for s in nc.faces:
                for b in g.members:
                    below = [x for x in g.members if lat.lt(x, b)]
                    for r in range(len(below) + 1):
                        for h in itertools.combinations(below, r):
                            if frozenset(h) | s not in nc:
                                continue
                            assert d_value(lat, g, s, h, b) == d_value_geometric(lat, g, s, h, b)
                            d_checks += 1
    z_checks = 0
    for desc in ["uniform:1:1", "uniform:2:3", "uniform:2:4", "boolean:2", "boolean:3", "uniform:3:4",
                 "uniform:3:5", "fano", "nonfano", "graphic:K4"]:
        lat = flats(desc)
        alpha = affine_alpha_spec(lat)
        for g in enumerate_building_sets(lat):
            for family in (chi_arr_table, chi_tor_table):
                t = family(lat, g)
                assert zeta_by_definition(lat, g, t, alpha) == zeta_by_lemma(lat, g, t, alpha)
                z_checks += 1
    return f"{d_checks} d-values, {z_checks} zeta pairs"


if __name__ == "__main__":
    import tempfile

    failures = 0
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for fn in sorted(tests, key=lambda f: f.__wrapped__.__code__.co_firstlineno):
        try:
            if fn is test_taylor_scan:
                with tempfile.TemporaryDirectory() as tmp:
                    fn(Path(tmp))
            else:
                fn()
        except Exception:
            failures += 1
    print("\n".join(ACCEPTANCE))
    sys.exit(1 if failures else 0)
