"""JSON encodings of matrices, complexes, chain maps and instance files.

Scalars travel as ``"p/q"`` strings (``"p"`` when integral); integer
literals are accepted on input.  Degrees are JSON object keys, hence
strings.  A differential in degree k is a ``dim C_{k−1} × dim C_k`` list of
rows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .complexes import ChainMap, Complex
from .errors import EngineError, SchemaError
from .linalg import Matrix, as_rational, format_rational

SCHEMA_VERSION = "1"


def matrix_to_json(M: Matrix) -> list[list[str]]:
    return [[format_rational(e) for e in row] for row in M.tolist()]


def matrix_from_json(data: Any, rows: int, cols: int, where: str = "matrix") -> Matrix:
    if not isinstance(data, list) or len(data) != rows:
        raise SchemaError(f"{where}: expected {rows} rows")
    flat = []
    for r in data:
        if not isinstance(r, list) or len(r) != cols:
            raise SchemaError(f"{where}: expected rows of length {cols}")
        for e in r:
            if isinstance(e, bool) or not isinstance(e, (int, str)):
                raise SchemaError(f"{where}: scalar {e!r} must be an integer or a 'p/q' string")
            try:
                flat.append(as_rational(e))
            except (ValueError, ZeroDivisionError) as exc:
                raise SchemaError(f"{where}: bad scalar {e!r}") from exc
    return Matrix(rows, cols, flat)


def _degree(key: Any, where: str) -> int:
    try:
        return int(key)
    except (TypeError, ValueError):
        raise SchemaError(f"{where}: degree {key!r} is not an integer") from None


def dims_to_json(dims: Mapping[int, int]) -> dict[str, int]:
    return {str(k): v for k, v in sorted(dims.items())}


def complex_to_json(C: Complex) -> dict:
    return {
        "degrees": dims_to_json(C.dims),
        "differentials": {str(k): matrix_to_json(M) for k, M in C.differentials.items()},
    }


def complex_from_json(data: Any, where: str = "complex") -> Complex:
    if not isinstance(data, dict) or "degrees" not in data:
        raise SchemaError(f"{where}: a complex needs a 'degrees' object")
    extra = set(data) - {"degrees", "differentials"}
    if extra:
        raise SchemaError(f"{where}: unknown fields {sorted(extra)}")
    degrees = data["degrees"]
    if not isinstance(degrees, dict):
        raise SchemaError(f"{where}: 'degrees' must be an object")
    dims = {}
    for k, v in degrees.items():
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise SchemaError(f"{where}: dimension of degree {k} must be a non-negative integer")
        dims[_degree(k, where)] = v
    diffs = {}
    raw = data.get("differentials", {})
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}: 'differentials' must be an object")
    for k, M in raw.items():
        k = _degree(k, where)
        diffs[k] = matrix_from_json(M, dims.get(k - 1, 0), dims.get(k, 0), f"{where}.differentials[{k}]")
    try:
        return Complex(dims, diffs)
    except EngineError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def chain_map_to_json(f: ChainMap, source: Any = None, target: Any = None) -> dict:
    return {
        "source": source if source is not None else complex_to_json(f.source),
        "target": target if target is not None else complex_to_json(f.target),
        "blocks": {str(k): matrix_to_json(M) for k, M in f.blocks.items()},
    }


def _resolve(ref: Any, objects: Mapping[str, Complex], where: str) -> Complex:
    if isinstance(ref, str):
        if ref not in objects:
            raise SchemaError(f"{where}: unknown object {ref!r}")
        return objects[ref]
    return complex_from_json(ref, where)


def chain_map_from_json(data: Any, objects: Mapping[str, Complex] | None = None, where: str = "map") -> ChainMap:
    objects = objects or {}
    if not isinstance(data, dict) or not {"source", "target", "blocks"} <= set(data):
        raise SchemaError(f"{where}: a map needs 'source', 'target' and 'blocks'")
    S = _resolve(data["source"], objects, f"{where}.source")
    T = _resolve(data["target"], objects, f"{where}.target")
    if not isinstance(data["blocks"], dict):
        raise SchemaError(f"{where}: 'blocks' must be an object")
    blocks = {}
    for k, M in data["blocks"].items():
        k = _degree(k, where)
        blocks[k] = matrix_from_json(M, T.dim(k), S.dim(k), f"{where}.blocks[{k}]")
    try:
        return ChainMap(S, T, blocks)
    except EngineError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


@dataclass
class Instance:
    version: str
    objects: dict[str, Complex] = field(default_factory=dict)
    maps: dict[str, ChainMap] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)

    def object(self, name: str) -> Complex:
        if name not in self.objects:
            raise SchemaError(f"no object named {name!r}")
        return self.objects[name]

    def map(self, name: str) -> ChainMap:
        if name not in self.maps:
            raise SchemaError(f"no map named {name!r}")
        return self.maps[name]

    def task(self, name: str) -> dict:
        for t in self.tasks:
            if t.get("name") == name:
                return t
        raise SchemaError(f"no task named {name!r}")


def instance_from_json(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise SchemaError("instance must be a JSON object")
    extra = set(data) - {"version", "objects", "maps", "tasks"}
    if extra:
        raise SchemaError(f"unknown top-level fields {sorted(extra)}")
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported instance version {version!r}")
    raw_objects = data.get("objects", {})
    raw_maps = data.get("maps", {})
    tasks = data.get("tasks", [])
    if not isinstance(raw_objects, dict) or not isinstance(raw_maps, dict) or not isinstance(tasks, list):
        raise SchemaError("'objects' and 'maps' must be objects, 'tasks' a list")
    objects = {name: complex_from_json(c, f"objects.{name}") for name, c in raw_objects.items()}
    maps = {}
    for name, m in raw_maps.items():
        if not isinstance(m, dict) or not isinstance(m.get("source"), str) or not isinstance(m.get("target"), str):
            raise SchemaError(f"maps.{name}: source and target must name declared objects")
        maps[name] = chain_map_from_json(m, objects, f"maps.{name}")
    names = set(objects) | set(maps)
    for t in tasks:
        if not isinstance(t, dict) or not isinstance(t.get("name"), str) or not isinstance(t.get("command"), str):
            raise SchemaError("every task needs string 'name' and 'command' fields")
        for key, val in t.items():
            if key in ("object", "map", "a", "b", "c", "d") and val not in names:
                raise SchemaError(f"task {t['name']!r}: unknown reference {val!r}")
    return Instance(version, objects, maps, tasks)


def load_instance(path: str | Path) -> Instance:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return instance_from_json(data)


def dump(obj: Any) -> str:
    """Canonical machine-readable form: sorted keys, two-space indent."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
