"""Exact combinatorial zeta functions of matroids and ranked atomic lattices."""

__version__ = "0.1.0"

from .errors import InputError, LatticeError, ResourceError, UnsupportedInputError  # noqa: E402
from .poset import Poset, RankedLattice, validate_ranked_atomic_lattice, is_isomorphic  # noqa: E402
from .matroid import Matroid, lattice_of_flats, named_matroid, matroid_from_bases  # noqa: E402
from .buildset import (  # noqa: E402
    BuildingSet,
    building_set,
    irreducibles,
    full_building_set,
    nested_complex,
    combinatorial_blowup,
    iterated_blowup,
)
from .ratfunc import RatFunc  # noqa: E402
from .invariants import chi_arr, chi_tor, chi_arr_table, chi_tor_table  # noqa: E402
from .zeta import zeta, zeta_by_definition, zeta_by_lemma, taylor_report  # noqa: E402

__all__ = [
    "__version__", "InputError", "LatticeError", "ResourceError", "UnsupportedInputError",
    "Poset", "RankedLattice", "validate_ranked_atomic_lattice", "is_isomorphic",
    "Matroid", "lattice_of_flats", "named_matroid", "matroid_from_bases",
    "BuildingSet", "building_set", "irreducibles", "full_building_set", "nested_complex",
    "combinatorial_blowup", "iterated_blowup", "RatFunc", "chi_arr", "chi_tor",
    "chi_arr_table", "chi_tor_table", "zeta", "zeta_by_definition", "zeta_by_lemma",
    "taylor_report",
]
