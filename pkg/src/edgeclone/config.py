"""Resource limits, error types and the small thread-pool helper."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

CONFIG_ENV = "EDGECLONE_CONFIG"


class EdgeCloneError(Exception):
    pass


class DomainError(EdgeCloneError, ValueError):
    """An element, arity or position is outside its allowed range."""


class ContractError(EdgeCloneError, ValueError):
    """A caller-side precondition failed (bad witness, not a subgroup, ...)."""


class ResourceLimitError(EdgeCloneError):
    """A configured cap would be exceeded; raised instead of truncating."""


@dataclass(frozen=True)
class Config:
    max_layer_size: int = 10**6
    max_table_entries: int = 2**20
    max_bruteforce_functions: int = 2**20
    max_word_len: int = 8
    thread_count: int = 1
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "seed":
                continue
            if not isinstance(value, int) or value < 1:
                raise DomainError(f"config field {f.name} must be a positive integer, got {value!r}")

    def with_(self, **changes) -> "Config":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_env(cls) -> "Config":
        path = os.environ.get(CONFIG_ENV)
        if not path:
            return cls()
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


DEFAULT = Config()


def check_cap(what: str, size: int, cap: int) -> None:
    if size > cap:
        raise ResourceLimitError(f"{what} = {size} exceeds the configured limit {cap}")


def pmap(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Ordered map; with threads > 1 the work fans out but results keep input order."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
