"""Clone layers, special terms, the phi/lambda encodings and term membership."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from . import words as W
from .config import DEFAULT, Config, ContractError, DomainError, ResourceLimitError, check_cap, pmap
from .core import (
    OperationTable,
    Relation,
    check_table_size,
    encode_tuple,
    ops_share_domain,
    projection,
    tuple_grid,
)


@dataclass(frozen=True)
class CloneLayer:
    size: int
    arity: int
    tables: np.ndarray = field(compare=False, repr=False)
    generated_from: tuple[OperationTable, ...] = ()

    def __len__(self):
        return len(self.tables)

    @cached_property
    def keys(self) -> frozenset[bytes]:
        return frozenset(row.tobytes() for row in self.tables)

    @cached_property
    def ops(self) -> tuple[OperationTable, ...]:
        return tuple(OperationTable(self.size, self.arity, tuple(row.tolist())) for row in self.tables)

    def __contains__(self, f: OperationTable) -> bool:
        if f.size != self.size or f.arity != self.arity:
            return False
        return np.asarray(f.values, dtype=np.uint8).tobytes() in self.keys

    def __iter__(self):
        return iter(self.ops)


def _canonical(rows: Iterable[bytes], width: int) -> np.ndarray:
    keys = sorted(set(rows))
    if not keys:
        return np.zeros((0, width), dtype=np.uint8)
    return np.frombuffer(b"".join(keys), dtype=np.uint8).reshape(len(keys), width)


def _compositions(f: np.ndarray, k: int, t: int, pools: list[np.ndarray]) -> Iterable[np.ndarray]:
    """Rows ``f(g_1, ..., g_k)`` for g_i ranging over pools[i], chunked on the first pool."""
    rest = pools[1:]
    # index contribution of positions 2..k, flattened over all combinations
    tail = np.zeros((1, pools[0].shape[1]), dtype=np.int64)
    for pool in rest:
        tail = (tail[:, None, :] * t + pool[None, :, :].astype(np.int64)).reshape(-1, pool.shape[1])
    weight = t ** (k - 1)
    for g in pools[0]:
        yield f[g.astype(np.int64)[None, :] * weight + tail]


@lru_cache(maxsize=256)
def _layer_cached(gens: tuple[OperationTable, ...], t: int, n: int, max_layer_size: int) -> np.ndarray:
    width = t**n
    grid = tuple_grid(t, n)
    start = {grid[:, i].astype(np.uint8).tobytes() for i in range(n)}
    members = _canonical(start, width)
    seen = set(start)
    new = members
    while len(new):
        old = members[: len(members) - len(new)]
        fresh: set[bytes] = set()
        for g in gens:
            k = g.arity
            for first_new in range(k):
                pools = [old] * first_new + [new] + [members] * (k - first_new - 1)
                if any(len(p) == 0 for p in pools):
                    continue
                for block in _compositions(g.array, k, t, pools):
                    block = np.unique(block.astype(np.uint8), axis=0)
                    for row in block:
                        key = row.tobytes()
                        if key not in seen:
                            seen.add(key)
                            fresh.add(key)
                    if len(seen) > max_layer_size:
                        raise ResourceLimitError(
                            f"clone layer of arity {n} exceeds max_layer_size={max_layer_size}"
                        )
        new = _canonical(fresh, width)
        members = np.concatenate([members, new]) if len(new) else members
    return _canonical(seen, width)


def clone_layer(gens: Sequence[OperationTable], n: int, t: int | None = None, config: Config = DEFAULT) -> CloneLayer:
    """All n-ary members of the clone generated by ``gens``, sorted by value table."""
    gens = tuple(gens)
    size = ops_share_domain(gens)
    if size is None:
        if t is None:
            raise DomainError("domain size needed when there are no generators")
        size = t
    elif t is not None and t != size:
        raise ContractError(f"generators live on a domain of size {size}, not {t}")
    if n < 1:
        raise DomainError("layer arity must be positive")
    check_table_size(size, n, config)
    key = tuple(sorted(set(gens), key=lambda f: (f.arity, f.values)))
    tables = _layer_cached(key, size, n, config.max_layer_size)
    return CloneLayer(size, n, tables, gens)


# --- special terms -------------------------------------------------------


def _rows_satisfy(tables: np.ndarray, t: int, identities: list[tuple[list[np.ndarray], np.ndarray]]) -> np.ndarray:
    ok = np.ones(len(tables), dtype=bool)
    for args, expected in identities:
        idx = np.zeros_like(expected)
        for col in args:
            idx = idx * t + col
        ok &= (tables[:, idx] == expected[None, :]).all(axis=1)
    return ok


def _xy(t: int) -> tuple[np.ndarray, np.ndarray]:
    grid = tuple_grid(t, 2)
    return grid[:, 0], grid[:, 1]


def edge_identities(t: int, k: int):
    x, y = _xy(t)
    ids = [([y, y] + [x] * (k - 1), x), ([y, x, y] + [x] * (k - 2), x)]
    for i in range(4, k + 2):
        args = [x] * (k + 1)
        args[i - 1] = y
        ids.append((args, x))
    return ids


def malcev_identities(t: int):
    x, y = _xy(t)
    return [([x, y, y], x), ([y, y, x], x)]


def nu_identities(t: int, k: int):
    x, y = _xy(t)
    ids = []
    for i in range(k):
        args = [x] * k
        args[i] = y
        ids.append((args, x))
    return ids


def _satisfies(f: OperationTable, identities) -> bool:
    return bool(_rows_satisfy(f.array[None, :], f.size, identities)[0])


def is_edge_op(f: OperationTable, k: int) -> bool:
    if k < 2:
        raise DomainError("edge operations need k >= 2")
    if f.arity != k + 1:
        raise DomainError(f"a {k}-edge operation has arity {k + 1}, got {f.arity}")
    return _satisfies(f, edge_identities(f.size, k))


def is_malcev(f: OperationTable) -> bool:
    if f.arity != 3:
        raise DomainError("Malcev operations are ternary")
    return _satisfies(f, malcev_identities(f.size))


def is_nu(f: OperationTable) -> bool:
    if f.arity < 3:
        raise DomainError("near-unanimity operations need arity at least 3")
    return _satisfies(f, nu_identities(f.size, f.arity))


def _first_hit(layer: CloneLayer, identities) -> Optional[OperationTable]:
    ok = _rows_satisfy(layer.tables.astype(np.int64), layer.size, identities)
    hits = np.flatnonzero(ok)
    if not len(hits):
        return None
    return OperationTable(layer.size, layer.arity, tuple(layer.tables[hits[0]].tolist()))


def find_malcev(gens, t: int | None = None, config: Config = DEFAULT) -> Optional[OperationTable]:
    layer = clone_layer(gens, 3, t, config)
    return _first_hit(layer, malcev_identities(layer.size))


def find_edge(gens, k: int, t: int | None = None, config: Config = DEFAULT) -> Optional[OperationTable]:
    if k < 2:
        raise DomainError("edge terms need k >= 2")
    layer = clone_layer(gens, k + 1, t, config)
    return _first_hit(layer, edge_identities(layer.size, k))


def find_nu(gens, k: int, t: int | None = None, config: Config = DEFAULT) -> Optional[OperationTable]:
    if k < 3:
        raise DomainError("near-unanimity terms need k > 2")
    layer = clone_layer(gens, k, t, config)
    return _first_hit(layer, nu_identities(layer.size, k))


# --- phi and lambda -------------------------------------------------------


def phi(layer: CloneLayer, a: Sequence[int]) -> frozenset[tuple[int, int]]:
    """Value pairs at ``a`` of layer members that agree on every tuple lex-below ``a``."""
    a = tuple(a)
    if len(a) != layer.arity:
        raise DomainError(f"word of length {len(a)} against a layer of arity {layer.arity}")
    idx = encode_tuple(a, layer.size)
    blocks: dict[bytes, set[int]] = {}
    for row in layer.tables:
        blocks.setdefault(row[:idx].tobytes(), set()).add(int(row[idx]))
    return frozenset((u, v) for vals in blocks.values() for u in vals for v in vals)


def lambda_member(gens, pair: tuple[int, int], a: Sequence[int], t: int | None = None, config: Config = DEFAULT) -> bool:
    a = tuple(a)
    layer = clone_layer(gens, len(a), t, config)
    c, d = pair
    if not (0 <= c < layer.size and 0 <= d < layer.size):
        raise DomainError(f"pair {pair} not over a domain of size {layer.size}")
    W.check_word(a, layer.size)
    return (c, d) not in phi(layer, a)


@dataclass
class MReport:
    size: int
    max_len: int
    minimals: dict[tuple[int, int], list[tuple[int, ...]]]
    frontier_closed: dict[tuple[int, int], bool]
    m: int

    @property
    def all_closed(self) -> bool:
        return all(self.frontier_closed.values())

    def to_dict(self) -> dict:
        pairs = sorted(self.minimals)
        return {
            "domain_size": self.size,
            "max_len": self.max_len,
            "m": self.m,
            "m_is_lower_bound": not self.all_closed,
            "pairs": [
                {
                    "pair": list(p),
                    "minimals": [list(w) for w in self.minimals[p]],
                    "frontier_closed": self.frontier_closed[p],
                }
                for p in pairs
            ],
        }


def compute_m(gens, max_len: int, t: int | None = None, config: Config = DEFAULT) -> MReport:
    """Bounded search for the supremum of minimal-word lengths over all lambda sets."""
    if max_len < 1:
        raise DomainError("max_len must be at least 1")
    check_cap("max_len", max_len, config.max_word_len)
    size = ops_share_domain(tuple(gens)) or t
    if size is None:
        raise DomainError("domain size needed when there are no generators")
    phis: dict[tuple[int, ...], frozenset] = {}
    for n in range(1, max_len + 1):
        layer = clone_layer(gens, n, size, config)
        ws = list(W.words(size, n))
        for w, p in zip(ws, pmap(lambda w: phi(layer, w), ws, config.thread_count)):
            phis[w] = p
    minimals, closed = {}, {}
    for pair in itertools.product(range(size), repeat=2):
        mins, ok = W.minimal_elements(lambda w: pair not in phis[w], size, max_len)
        minimals[pair], closed[pair] = mins, ok
    lengths = [len(w) for ws in minimals.values() for w in ws]
    return MReport(size, max_len, minimals, closed, max(lengths, default=1))


def layer_as_relation(layer: CloneLayer, config: Config = DEFAULT) -> Relation:
    check_cap("relation arity t^n", layer.size**layer.arity, config.max_table_entries)
    return Relation(layer.size, layer.size**layer.arity, frozenset(tuple(r.tolist()) for r in layer.tables))


# --- term membership ----------------------------------------------------------


def is_term_function(
    gens,
    f: OperationTable,
    mode: str = "exhaustive",
    relations: Sequence[Relation] = (),
    config: Config = DEFAULT,
) -> bool:
    """Is ``f`` in the clone generated by ``gens``?

    ``exhaustive`` builds the clone layer at f's arity; ``relations`` only
    checks that f preserves the supplied relations, which is correct exactly
    when they determine the clone at that arity.
    """
    from .galois import preserves

    if mode == "exhaustive":
        return f in clone_layer(gens, f.arity, f.size, config)
    if mode in ("relations", "via_relations"):
        for r in relations:
            if r.size != f.size:
                raise ContractError("relation and function over different domains")
        return all(preserves(f, r) for r in relations)
    raise DomainError(f"unknown membership mode {mode!r}")


def all_operations(t: int, n: int, config: Config = DEFAULT) -> Iterable[OperationTable]:
    """Every n-ary table on a t-element set, in lex order of values."""
    check_cap(f"number of {n}-ary operations on {t} elements", t ** (t**n), config.max_bruteforce_functions)
    for values in itertools.product(range(t), repeat=t**n):
        yield OperationTable(t, n, values)


def projections(t: int, n: int) -> list[OperationTable]:
    return [projection(t, n, i) for i in range(1, n + 1)]
