"""JSON documents for algebras, functions and relations (0-based values)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .config import DomainError
from .core import Algebra, Domain, OperationTable, Relation


class InputError(DomainError):
    """Malformed input document; the message names the offending location."""


def _require(doc: dict, key: str, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{where}: missing key {key!r}")
    return doc[key]


def _infer_size(length: int, arity: int, where: str) -> int:
    t = round(length ** (1 / arity)) if length else 0
    for cand in (t - 1, t, t + 1):
        if cand >= 1 and cand**arity == length:
            return cand
    raise InputError(f"{where}: {length} values is not t^{arity} for any t")


def op_from_json(doc: dict, t: int | None = None, where: str = "operation") -> OperationTable:
    arity = _require(doc, "arity", where)
    values = _require(doc, "values", where)
    if not isinstance(arity, int) or not isinstance(values, list):
        raise InputError(f"{where}: arity must be an int and values a list")
    size = doc.get("domain_size", t)
    if size is None:
        size = _infer_size(len(values), arity, where)
    try:
        return OperationTable(size, arity, tuple(values), str(doc.get("name", "")))
    except DomainError as exc:
        raise InputError(f"{where}: {exc}") from exc


def op_to_json(f: OperationTable) -> dict:
    out = {"arity": f.arity, "values": list(f.values)}
    if f.name:
        out = {"name": f.name, **out}
    return out


def algebra_from_json(doc: dict, where: str = "algebra") -> Algebra:
    t = _require(doc, "domain_size", where)
    ops = _require(doc, "operations", where)
    if not isinstance(ops, list):
        raise InputError(f"{where}: operations must be a list")
    try:
        dom = Domain(t)
    except DomainError as exc:
        raise InputError(f"{where}: {exc}") from exc
    return Algebra(dom, tuple(op_from_json(o, t, f"{where}.operations[{i}]") for i, o in enumerate(ops)))


def algebra_to_json(alg: Algebra) -> dict:
    return {"domain_size": alg.size, "operations": [op_to_json(f) for f in alg.basic_ops]}


def relation_from_json(doc: dict, where: str = "relation") -> Relation:
    t = _require(doc, "domain_size", where)
    arity = _require(doc, "arity", where)
    tuples = _require(doc, "tuples", where)
    try:
        return Relation(t, arity, frozenset(tuple(x) for x in tuples))
    except (DomainError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def relation_to_json(rel: Relation) -> dict:
    return {"domain_size": rel.size, "arity": rel.arity, "tuples": [list(x) for x in rel.sorted()]}


def ops_from_json(doc: Any, where: str = "operations") -> tuple[int | None, tuple[OperationTable, ...]]:
    """Accepts an algebra document, a single function, or a list of functions."""
    if isinstance(doc, dict) and "operations" in doc:
        alg = algebra_from_json(doc, where)
        return alg.size, alg.basic_ops
    if isinstance(doc, dict):
        f = op_from_json(doc, where=where)
        return f.size, (f,)
    if isinstance(doc, list):
        ops = tuple(op_from_json(d, where=f"{where}[{i}]") for i, d in enumerate(doc))
        sizes = {f.size for f in ops}
        if len(sizes) > 1:
            raise InputError(f"{where}: functions over different domains")
        return (sizes.pop() if sizes else None), ops
    raise InputError(f"{where}: expected an object or a list")


def load(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def dumps(doc: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
