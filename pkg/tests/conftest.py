import functools

import pytest

from matroid_zeta.matroid import lattice_of_flats, named_matroid
from matroid_zeta.poset import Poset, validate_ranked_atomic_lattice


@functools.lru_cache(maxsize=None)
def flats(desc: str):
    """Lattice of flats of a named matroid, shared across tests (lattices are immutable)."""
    return lattice_of_flats(named_matroid(desc))


def chain(n: int) -> Poset:
    names = [str(i) for i in range(n)]
    return Poset(names, list(zip(names, names[1:])))


def ranked_chain(n: int):
    return validate_ranked_atomic_lattice(chain(n))


def by_label(lat, label: str):
    for x in lat.elements:
        if lat.label(x) == label:
            return x
    raise KeyError(label)


@pytest.fixture
def u23():
    return flats("uniform:2:3")


@pytest.fixture
def b2():
    return flats("boolean:2")


@pytest.fixture
def b3():
    return flats("boolean:3")


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
