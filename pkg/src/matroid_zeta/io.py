"""JSON readers and writers for matroids, posets and input files."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .errors import InputError
from .matroid import Matroid, graphic_matroid, matroid_from_bases, named_matroid
from .poset import Poset, poset_from_json


def matroid_from_json(data: Any) -> Matroid:
    """Accepts ``{"ground", "bases"}``, ``{"named": ...}`` or ``{"graphic": {...}}``."""
    if not isinstance(data, Mapping):
        raise InputError("matroid JSON must be an object")
    name = data.get("name", "")
    if "named" in data:
        m = named_matroid(data["named"])
    elif "graphic" in data:
        gr = data["graphic"]
        if not isinstance(gr, Mapping) or "vertices" not in gr or "edges" not in gr:
            raise InputError("field 'graphic' needs 'vertices' and 'edges'")
        m = graphic_matroid(int(gr["vertices"]), gr["edges"], name=name)
    elif "ground" in data and "bases" in data:
        if not isinstance(data["ground"], list):
            raise InputError("field 'ground' must be a list")
        if not isinstance(data["bases"], list) or not all(isinstance(b, list) for b in data["bases"]):
            raise InputError("field 'bases' must be a list of lists")
        m = matroid_from_bases(data["ground"], data["bases"], name=name)
    else:
        raise InputError("matroid JSON needs 'ground'+'bases', 'named' or 'graphic'")
    if name and m.name != name:
        m = Matroid(m.ground, m.bases, m.rank, name)
    return m


def matroid_to_json(m: Matroid) -> dict:
    pos = {e: i for i, e in enumerate(m.ground)}
    out = {
        "ground": list(m.ground),
        "bases": sorted((sorted(b, key=pos.__getitem__) for b in m.bases),
                        key=lambda b: [pos[e] for e in b]),
    }
    if m.name:
        out["name"] = m.name
    return out


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from None


def load_input(path: str | Path) -> Matroid | Poset:
    """A matroid file, or a poset file (recognised by its ``elements`` field)."""
    data = read_json(path)
    if isinstance(data, Mapping) and "elements" in data:
        return poset_from_json(data)
    try:
        return matroid_from_json(data)
    except InputError as exc:
        raise InputError(f"{path}: {exc}", exc.witness) from None
