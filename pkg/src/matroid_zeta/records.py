"""Computation records, the on-disk cache, verification suites and catalog scans.

Everything the CLI does is reachable from here.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Sequence

from . import __version__
from .buildset import (
    BuildingSet,
    building_set,
    enumerate_building_sets,
    full_building_set,
    irreducibles,
    iterated_blowup,
    reverse_refinements,
    single_extensions,
    extend_building_set,
    nested_complex,
)
from .errors import InputError, Report, ResourceError
from .invariants import (
    NFunctionTable,
    STANDARD_SPECS,
    affine_alpha_spec,
    chi_arr_table,
    chi_tor_table,
    verify_b_function,
    verify_n_function,
)
from .io import load_input, matroid_to_json, read_json
from .matroid import (
    Matroid,
    fano_matroid,
    graphic_matroid,
    complete_graph_edges,
    lattice_of_flats,
    named_matroid,
    uniform_matroid,
    boolean_matroid,
)
from .poset import Poset, RankedLattice, dumps_poset, product, validate_ranked_atomic_lattice
from .ratfunc import RatFunc
from .zeta import (
    candidate_poles,
    closed_form_for,
    taylor_report,
    verify_independence,
    zeta_by_definition,
    zeta_by_lemma,
)

log = logging.getLogger(__name__)

CACHE_ENV = "MATROID_ZETA_CACHE"
ENUMERATION_CAP = 1 << 12


@dataclass
class Subject:
    """A resolved input: the lattice, plus the matroid when there is one."""

    lattice: RankedLattice
    descriptor: Any
    digest: str
    matroid: Matroid | None = None
    name: str = ""

    @property
    def ground_size(self) -> int:
        return len(self.matroid.ground) if self.matroid else len(self.lattice.atoms)


def subject_from_matroid(m: Matroid, descriptor: Any = None) -> Subject:
    return Subject(lattice_of_flats(m), descriptor or matroid_to_json(m),
                   m.canonical_hash(), m, m.name)


def subject_from_poset(p: Poset, descriptor: Any = None, name: str = "") -> Subject:
    lat = validate_ranked_atomic_lattice(p)
    blob = dumps_poset(lat)
    return Subject(lat, descriptor or json.loads(blob),
                   hashlib.sha256(blob.encode()).hexdigest(), None, name)


def resolve_subject(named: str | None = None, file: str | Path | None = None) -> Subject:
    if (named is None) == (file is None):
        raise InputError("give exactly one of a named matroid or an input file")
    if named is not None:
        return subject_from_matroid(named_matroid(named), {"named": named})
    obj = load_input(file)
    if isinstance(obj, Matroid):
        return subject_from_matroid(obj)
    return subject_from_poset(obj, name=Path(file).stem)


def select_building_set(lat: RankedLattice, choice: str | Sequence[str]) -> tuple[str, BuildingSet]:
    """``minimal``, ``full``, ``@path`` (JSON list of labels) or a list of labels."""
    if isinstance(choice, str) and choice == "minimal":
        return "minimal", irreducibles(lat)
    if isinstance(choice, str) and choice == "full":
        return "full", full_building_set(lat)
    if isinstance(choice, str) and choice.startswith("@"):
        labels = read_json(choice[1:])
        if not isinstance(labels, list):
            raise InputError(f"{choice[1:]}: building set file must hold a JSON list of labels")
    elif isinstance(choice, str):
        raise InputError(f"unknown building set choice {choice!r}")
    else:
        labels = list(choice)
    by_label = {lat.label(x): x for x in lat.elements}
    missing = [lab for lab in labels if lab not in by_label]
    if missing:
        raise InputError(f"unknown lattice elements {missing}", missing)
    return "explicit", building_set(lat, [by_label[lab] for lab in labels])


# -- records --------------------------------------------------------------------------

@dataclass
class ComputationRecord:
    data: dict
    timestamp: str = ""

    def to_json(self) -> dict:
        return {**self.data, "timestamp": self.timestamp}

    @classmethod
    def from_json(cls, payload: dict) -> "ComputationRecord":
        payload = dict(payload)
        ts = payload.pop("timestamp", "")
        return cls(payload, ts)

    @property
    def zeta(self) -> RatFunc:
        return RatFunc.from_json(self.data["zeta"])

    def same_as(self, other: "ComputationRecord") -> bool:
        """Field-wise equality ignoring the timestamp."""
        return self.data == other.data


def latex_snippet(name: str, z: RatFunc) -> str:
    label = name.replace("_", r"\_") or "L"
    return f"\\[ Z_{{\\mathrm{{{label}}}}}(s) = {z.to_latex()} \\]\n"


def record_key(subject: Subject, choice: str, members: Sequence[str], include_chi: bool) -> str:
    payload = {"input": subject.digest, "building_set": sorted(members),
               "choice": choice, "chi": include_chi}
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    """``<root>/<first two hex digits>/<key>.json``."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> ComputationRecord | None:
        p = self.path(key)
        if not p.exists():
            return None
        try:
            return ComputationRecord.from_json(json.loads(p.read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", p, exc)
            return None

    def put(self, key: str, record: ComputationRecord) -> None:
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(".tmp")
        tmp.write_text(json.dumps(record.to_json(), indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(p)


def compute_record(subject: Subject, choice: str | Sequence[str] = "minimal",
                   include_chi: bool = False, assert_blowup: bool = False,
                   cache: ResultCache | None = None) -> tuple[ComputationRecord, bool]:
    """Compute (or fetch) the record; the flag says whether it came from the cache."""
    lat = subject.lattice
    label, g = select_building_set(lat, choice)
    key = record_key(subject, label, g.labels(), include_chi)
    if cache is not None and not assert_blowup:
        hit = cache.get(key)
        if hit is not None:
            return hit, True

    alpha = affine_alpha_spec(lat)
    table = chi_arr_table(lat, g)
    z = zeta_by_definition(lat, g, table, alpha)
    checks: dict[str, Any] = {
        "definition_equals_lemma": z == zeta_by_lemma(lat, g, table, alpha),
    }
    other = full_building_set(lat) if label != "full" else irreducibles(lat)
    checks["building_set_independent"] = (
        z == zeta_by_definition(lat, other, chi_arr_table(lat, other), alpha))
    closed = closed_form_for(lat)
    checks["closed_form"] = None if closed is None else closed == z
    if assert_blowup:
        ok = True
        for ref in reverse_refinements(g, 2):
            try:
                iterated_blowup(lat, g, ref, check=True)
            except AssertionError:
                ok = False
        checks["iterated_blowup"] = ok
    taylor = taylor_report(lat, z, ground_size=subject.ground_size)
    data = {
        "matroid_hash": subject.digest,
        "input": subject.descriptor,
        "name": subject.name,
        "lattice": {"elements": len(lat), "rank": lat.height, "atoms": len(lat.atoms)},
        "building_set": {"choice": label, "members": g.labels()},
        "zeta": z.to_json(),
        "zeta_text": str(z),
        "latex": latex_snippet(subject.name, z),
        "poles": candidate_poles(lat, z).to_json(),
        "taylor": taylor.to_json(),
        "verification": {"checks": checks,
                         "passed": all(v is not False for v in checks.values())},
        "tool_version": __version__,
    }
    if include_chi:
        data["chi_tables"] = {"arr": table.to_json(), "tor": chi_tor_table(lat, g).to_json()}
    record = ComputationRecord(data, datetime.now(timezone.utc).isoformat(timespec="seconds"))
    if cache is not None:
        cache.put(key, record)
    return record, False


# -- verification suites ---------------------------------------------------------

SUITES = ("independence", "nfunction", "bfunction", "multiplicativity", "closed-forms")


def corrupted(family):
    """Shift chi(empty face) by 1 + |G| so no two building sets agree; a negative control."""

    def wrapped(lat, g):
        t = family(lat, g)
        values = dict(t.values)
        values[frozenset()] += 1 + len(g.members)
        return NFunctionTable(t.complex, values)

    wrapped.__name__ = f"corrupted_{getattr(family, '__name__', 'family')}"
    return wrapped


def _building_sets_for(lat: RankedLattice, notes: dict) -> list[BuildingSet]:
    try:
        return enumerate_building_sets(lat, cap=ENUMERATION_CAP)
    except ResourceError as exc:
        notes["enumeration"] = f"capped ({exc}); using minimal and full only"
        return [irreducibles(lat), full_building_set(lat)]


def run_suite(subject: Subject, suite: str, corrupt: bool = False) -> Report:
    lat = subject.lattice
    arr = corrupted(chi_arr_table) if corrupt else chi_arr_table
    tor = corrupted(chi_tor_table) if corrupt else chi_tor_table
    notes: dict = {}
    if suite == "independence":
        sets = _building_sets_for(lat, notes)
        rep = verify_independence(lat, arr, building_sets=sets)
        tor_rep = verify_independence(lat, tor, building_sets=sets)
        rep.merge(tor_rep)
    elif suite == "nfunction":
        sets = _building_sets_for(lat, notes)
        corpus = single_extensions(sets)
        rep = verify_n_function(arr, lat, corpus)
        rep.merge(verify_n_function(tor, lat, corpus))
        for g, b in corpus:
            ext = extend_building_set(g, b)
            rep.checked += 1
            if ext.predicted_faces != nested_complex(ext.larger).face_set:
                rep.mismatches.append({"G": g.labels(), "b": lat.label(b),
                                       "check": "nested-set extension"})
        notes["extensions"] = len(corpus)
    elif suite == "bfunction":
        sets = _building_sets_for(lat, notes)
        rep = Report("bfunction")
        for make in STANDARD_SPECS.values():
            rep.merge(verify_b_function(make(lat), lat, sets))
    elif suite == "multiplicativity":
        rep = Report("multiplicativity")
        chain = validate_ranked_atomic_lattice(Poset(["0", "1"], [("0", "1")]))
        prod = validate_ranked_atomic_lattice(product(lat, chain))
        z_l = zeta_by_definition(lat, irreducibles(lat), arr(lat, irreducibles(lat)),
                                 affine_alpha_spec(lat))
        g_p = irreducibles(prod)
        z_p = zeta_by_definition(prod, g_p, arr(prod, g_p), affine_alpha_spec(prod))
        rep.checked = 1
        expected = z_l * RatFunc.linear_inverse(1, 1)
        if z_p != expected:
            rep.mismatches.append({"factor": "boolean(1)", "sum": str(z_p), "product": str(expected)})
    elif suite == "closed-forms":
        rep = Report("closed-forms")
        closed = closed_form_for(lat)
        if closed is None:
            notes["skipped"] = f"no closed form at rank {lat.height}"
        else:
            g = irreducibles(lat)
            z = zeta_by_definition(lat, g, arr(lat, g), affine_alpha_spec(lat))
            rep.checked = 1
            if z != closed:
                rep.mismatches.append({"zeta": str(z), "closed_form": str(closed)})
    elif suite == "iterated-blowup":
        rep = Report("iterated-blowup")
        for g in (irreducibles(lat), full_building_set(lat)):
            for ref in reverse_refinements(g, 2):
                rep.checked += 1
                try:
                    iterated_blowup(lat, g, ref, check=True)
                except AssertionError as exc:
                    rep.mismatches.append({"G": g.labels(), "refinement": [lat.label(x) for x in ref],
                                           "error": str(exc)})
    else:
        raise InputError(f"unknown suite {suite!r}")
    rep.name = suite
    rep.notes.update(notes)
    return rep


def run_verification(subject: Subject, suites: Iterable[str], corrupt: bool = False,
                     assert_blowup: bool = False) -> dict:
    names = list(SUITES) if "all" in suites else list(dict.fromkeys(suites))
    if assert_blowup and "iterated-blowup" not in names:
        names.append("iterated-blowup")
    reports = [run_suite(subject, s, corrupt) for s in names]
    return {
        "matroid_hash": subject.digest,
        "input": subject.descriptor,
        "ok": all(r.ok for r in reports),
        "suites": {r.name: r.to_dict() for r in reports},
        "tool_version": __version__,
    }


# -- catalog scans ------------------------------------------------------------------

SCAN_FIELDS = ["file", "name", "hash", "status", "reason", "ground_size", "atom_count",
               "z_at_0", "dz_at_0", "z0_is_one", "dz_matches_ground", "dz_matches_atoms", "zeta"]


def scan_entry(path: str) -> dict:
    row: dict = {"file": Path(path).name}
    try:
        obj = load_input(path)
        subject = subject_from_matroid(obj) if isinstance(obj, Matroid) else \
            subject_from_poset(obj, name=Path(path).stem)
        lat = subject.lattice
        g = irreducibles(lat)
        z = zeta_by_definition(lat, g, chi_arr_table(lat, g), affine_alpha_spec(lat))
        t = taylor_report(lat, z, ground_size=subject.ground_size)
    except (InputError, ResourceError) as exc:
        row.update(status="skipped", reason=str(exc))
        return row
    row.update(name=subject.name, hash=subject.digest, status="ok", reason="",
               zeta=str(z), **t.to_json())
    return row


@dataclass
class ScanResult:
    rows: list[dict] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        done = [r for r in self.rows if r["status"] == "ok"]
        return {
            "entries": len(self.rows),
            "computed": len(done),
            "skipped": len(self.rows) - len(done),
            "z0_is_one": sum(r["z0_is_one"] for r in done),
            "z0_fails": sum(not r["z0_is_one"] for r in done),
            "dz_matches_ground": sum(r["dz_matches_ground"] for r in done),
            "dz_matches_atoms": sum(r["dz_matches_atoms"] for r in done),
            "findings": [r["file"] for r in done
                         if not r["z0_is_one"] or not r["dz_matches_ground"]],
        }

    def to_json(self) -> dict:
        return {"summary": self.summary, "rows": self.rows, "tool_version": __version__}

    def write(self, out: str | Path) -> tuple[Path, Path]:
        out = Path(out)
        stem = out.with_suffix("") if out.suffix in (".json", ".csv") else out
        jpath, cpath = stem.with_suffix(".json"), stem.with_suffix(".csv")
        jpath.parent.mkdir(parents=True, exist_ok=True)
        jpath.write_text(json.dumps(self.to_json(), indent=2, sort_keys=True), encoding="utf-8")
        with cpath.open("w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=SCAN_FIELDS, extrasaction="ignore")
            w.writeheader()
            for r in self.rows:
                w.writerow(r)
        return jpath, cpath


def scan_catalog(directory: str | Path, jobs: int = 1) -> ScanResult:
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"{directory} is not a directory")
    paths = [str(p) for p in sorted(directory.glob("*.json"))]
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(scan_entry, paths))
    else:
        rows = [scan_entry(p) for p in paths]
    for r in rows:
        if r["status"] == "skipped":
            log.warning("skipped %s: %s", r["file"], r["reason"])
    rows.sort(key=lambda r: (r["status"] != "ok", r.get("hash", ""), r["file"]))
    return ScanResult(rows)


def standard_catalog() -> dict[str, Matroid]:
    """The reference catalog: U(1,1), U(2,n) n<=5, boolean<=3, U(3,4), Fano, K4."""
    out = {"U11": uniform_matroid(1, 1)}
    for n in range(2, 6):
        out[f"U2{n}"] = uniform_matroid(2, n)
    for n in range(1, 4):
        out[f"boolean{n}"] = boolean_matroid(n)
    out["U34"] = uniform_matroid(3, 4)
    out["fano"] = fano_matroid()
    out["K4"] = graphic_matroid(4, complete_graph_edges(4), name="graphic(K4)")
    return out


def write_catalog(directory: str | Path, matroids: dict[str, Matroid] | None = None) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for stem, m in (matroids or standard_catalog()).items():
        p = directory / f"{stem}.json"
        p.write_text(json.dumps(matroid_to_json(m), indent=1), encoding="utf-8")
        written.append(p)
    return written
