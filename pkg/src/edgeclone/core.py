"""Domains, operation tables, relations and subpower closure.

Elements are the integers ``0 .. t-1``.  An n-ary operation is stored as the
flat tuple of its values on ``A^n`` listed in lexicographic order, so the value
on ``x`` sits at index ``encode_tuple(x, t)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .config import DEFAULT, Config, ContractError, DomainError, check_cap

Tuple = tuple[int, ...]


@dataclass(frozen=True)
class Domain:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise DomainError(f"domain size must be a positive integer, got {self.size!r}")

    def __iter__(self):
        return iter(range(self.size))

    def check(self, x: Iterable[int]) -> None:
        for v in x:
            if not 0 <= v < self.size:
                raise DomainError(f"element {v} not in domain of size {self.size}")


DomainLike = Union[Domain, int]


def _size(domain: DomainLike) -> int:
    if isinstance(domain, Domain):
        return domain.size
    return Domain(domain).size


def encode_tuple(x: Sequence[int], domain: DomainLike) -> int:
    t = _size(domain)
    index = 0
    for v in x:
        if not 0 <= v < t:
            raise DomainError(f"entry {v} not in domain of size {t}")
        index = index * t + v
    return index


def decode_tuple(i: int, domain: DomainLike, n: int) -> Tuple:
    t = _size(domain)
    if n < 0 or not 0 <= i < t**n:
        raise DomainError(f"tuple index {i} out of range for t={t}, n={n}")
    out = [0] * n
    for pos in range(n - 1, -1, -1):
        i, out[pos] = divmod(i, t)
    return tuple(out)


def all_tuples(domain: DomainLike, n: int) -> Iterable[Tuple]:
    """All of ``A^n`` in lexicographic (= index) order."""
    return itertools.product(range(_size(domain)), repeat=n)


def tuple_grid(t: int, n: int) -> np.ndarray:
    """Array of shape (t**n, n); row i is ``decode_tuple(i, t, n)``."""
    idx = np.arange(t**n)
    cols = [(idx // t ** (n - 1 - p)) % t for p in range(n)]
    return np.stack(cols, axis=1).astype(np.int64) if n else np.zeros((1, 0), dtype=np.int64)


@dataclass(frozen=True)
class OperationTable:
    size: int
    arity: int
    values: Tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError(f"operations have positive arity, got {self.arity}")
        values = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if len(values) != self.size**self.arity:
            raise DomainError(
                f"table for t={self.size}, n={self.arity} needs {self.size**self.arity} values, got {len(values)}"
            )
        Domain(self.size).check(values)

    @property
    def domain(self) -> Domain:
        return Domain(self.size)

    @cached_property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    def __call__(self, *x: int) -> int:
        return apply(self, x)

    def __repr__(self):
        label = f"{self.name}:" if self.name else ""
        return f"Op({label}t={self.size},n={self.arity},{list(self.values)})"

    @classmethod
    def from_function(cls, t: int, n: int, fn, name: str = "") -> "OperationTable":
        return cls(t, n, tuple(fn(*x) for x in all_tuples(t, n)), name)


@dataclass(frozen=True)
class Algebra:
    domain: Domain
    basic_ops: tuple[OperationTable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basic_ops", tuple(self.basic_ops))
        for f in self.basic_ops:
            if f.size != self.domain.size:
                raise DomainError(f"operation {f!r} is not over a domain of size {self.domain.size}")

    @property
    def size(self) -> int:
        return self.domain.size


@dataclass(frozen=True)
class Relation:
    size: int
    arity: int
    tuples: frozenset

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError(f"relations have positive arity, got {self.arity}")
        tuples = frozenset(tuple(int(v) for v in x) for x in self.tuples)
        dom = Domain(self.size)
        for x in tuples:
            if len(x) != self.arity:
                raise DomainError(f"tuple {x} does not have arity {self.arity}")
            dom.check(x)
        object.__setattr__(self, "tuples", tuples)

    @property
    def domain(self) -> Domain:
        return Domain(self.size)

    def sorted(self) -> list[Tuple]:
        return sorted(self.tuples)

    def __len__(self):
        return len(self.tuples)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, x) -> bool:
        return tuple(x) in self.tuples

    def __le__(self, other: "Relation") -> bool:
        return self.tuples <= other.tuples

    def __repr__(self):
        return f"Relation(t={self.size},r={self.arity},{self.sorted()})"

    @classmethod
    def full(cls, t: int, arity: int) -> "Relation":
        return cls(t, arity, frozenset(all_tuples(t, arity)))


def projection(domain: DomainLike, n: int, i: int) -> OperationTable:
    """The projection onto the i-th of n arguments (i counted from 1)."""
    t = _size(domain)
    if not 1 <= i <= n:
        raise DomainError(f"projection index {i} not in 1..{n}")
    return OperationTable(t, n, tuple(x[i - 1] for x in all_tuples(t, n)), f"e{i}^{n}")


def apply(f: OperationTable, x: Sequence[int]) -> int:
    if len(x) != f.arity:
        raise DomainError(f"operation of arity {f.arity} applied to {len(x)} arguments")
    return f.values[encode_tuple(x, f.size)]


def compose(f: OperationTable, gs: Sequence[OperationTable]) -> OperationTable:
    """``x -> f(g_1(x), ..., g_k(x))``."""
    if len(gs) != f.arity:
        raise DomainError(f"need {f.arity} inner operations, got {len(gs)}")
    if not gs:
        raise DomainError("composition needs at least one inner operation")
    n = gs[0].arity
    for g in gs:
        if g.arity != n or g.size != f.size:
            raise DomainError("inner operations must share arity and domain with the outer one")
    t = f.size
    index = np.zeros(t**n, dtype=np.int64)
    for g in gs:
        index = index * t + g.array
    return OperationTable(t, n, tuple(f.array[index].tolist()))


def apply_coordinatewise(f: OperationTable, rows: Sequence[Tuple]) -> Tuple:
    """Apply f to the columns of ``rows`` (f.arity tuples of equal length)."""
    return tuple(apply(f, col) for col in zip(*rows))


def subpower_closure(alg: Algebra, n: int, generators: Iterable[Sequence[int]]) -> Relation:
    """Smallest subset of ``A^n`` containing ``generators`` and closed under the basic operations."""
    t = alg.size
    members: set[Tuple] = set()
    new = []
    for g in generators:
        g = tuple(g)
        if len(g) != n:
            raise DomainError(f"generator {g} does not have length {n}")
        alg.domain.check(g)
        if g not in members:
            members.add(g)
            new.append(g)
    order = list(new)
    while new:
        old_count = len(order) - len(new)
        fresh = []
        for f in alg.basic_ops:
            k = f.arity
            # tuples with at least one argument from the latest round
            for first_new in range(k):
                pools = [order[:old_count]] * first_new + [new] + [order] * (k - first_new - 1)
                for args in itertools.product(*pools):
                    y = apply_coordinatewise(f, args)
                    if y not in members:
                        members.add(y)
                        fresh.append(y)
        order.extend(fresh)
        new = fresh
    return Relation(t, n, frozenset(members))


def is_subuniverse(alg: Algebra, rel: Relation) -> bool:
    return subpower_closure(alg, rel.arity, rel.tuples).tuples == rel.tuples


def ops_share_domain(ops: Sequence[OperationTable]) -> int | None:
    sizes = {f.size for f in ops}
    if len(sizes) > 1:
        raise ContractError(f"operations over different domains: sizes {sorted(sizes)}")
    return sizes.pop() if sizes else None


def check_table_size(t: int, n: int, config: Config = DEFAULT) -> None:
    check_cap(f"table length t^n for t={t}, n={n}", t**n, config.max_table_entries)
