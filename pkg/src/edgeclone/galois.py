"""Preservation, Pol layers, subpower families and the representation check.

Relation coordinates are 0-based throughout this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .clone import all_operations, clone_layer, find_edge, layer_as_relation
from .config import DEFAULT, Config, ContractError, DomainError, EdgeCloneError, check_cap, pmap
from .core import Algebra, Domain, OperationTable, Relation, is_subuniverse, subpower_closure


class CounterexampleError(EdgeCloneError, AssertionError):
    """A proven implication failed on concrete data."""


def _encode_rows(rows: np.ndarray, t: int) -> np.ndarray:
    out = np.zeros(len(rows), dtype=np.int64)
    for col in rows.T:
        out = out * t + col
    return out


def preserves(f: OperationTable, rel: Relation) -> bool:
    """Does ``f`` applied coordinatewise map ``rel^arity(f)`` into ``rel``?"""
    if f.size != rel.size:
        raise DomainError("function and relation over different domains")
    if not rel.tuples:
        return True
    t, k = f.size, f.arity
    rows = np.array(rel.sorted(), dtype=np.int64)
    members = np.unique(_encode_rows(rows, t))
    # all (k-1)-fold combinations of rows, as partial indices into f's table
    tail = np.zeros((1, rel.arity), dtype=np.int64)
    for _ in range(k - 1):
        tail = (tail[:, None, :] * t + rows[None, :, :]).reshape(-1, rel.arity)
    weight = t ** (k - 1)
    fa = f.array
    for first in rows:
        images = fa[first[None, :] * weight + tail]
        if not np.isin(_encode_rows(images, t), members, assume_unique=False).all():
            return False
    return True


def pol_layer(relations: Sequence[Relation], n: int, t: int | None = None, config: Config = DEFAULT) -> list[OperationTable]:
    """Every n-ary operation preserving all ``relations``, by brute force."""
    relations = list(relations)
    sizes = {r.size for r in relations}
    if t is not None:
        sizes.add(t)
    if len(sizes) != 1:
        raise DomainError("pol_layer needs exactly one domain size")
    t = sizes.pop()
    candidates = list(all_operations(t, n, config))
    keep = pmap(lambda f: all(preserves(f, r) for r in relations), candidates, config.thread_count)
    return [f for f, ok in zip(candidates, keep) if ok]


@dataclass(frozen=True)
class SubpowerFamily:
    size: int
    power: int
    members: tuple[Relation, ...]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _powerset(items: Sequence) -> Iterable[tuple]:
    return itertools.chain.from_iterable(itertools.combinations(items, r) for r in range(len(items) + 1))


def subuniverses(alg: Algebra, j: int, config: Config = DEFAULT) -> SubpowerFamily:
    """All subuniverses of ``alg^j`` (empty set included), found by closing every subset."""
    t = alg.size
    points = list(itertools.product(range(t), repeat=j))
    check_cap(f"subsets of A^{j}", 2 ** len(points), config.max_bruteforce_functions)
    found: set[frozenset] = set()
    for subset in _powerset(points):
        found.add(subpower_closure(alg, j, subset).tuples)
    members = sorted(found, key=lambda s: (len(s), sorted(s)))
    return SubpowerFamily(t, j, tuple(Relation(t, j, s) for s in members))


def proj_T(rel: Relation, positions: Iterable[int]) -> Relation:
    positions = sorted(set(positions))
    if not positions:
        raise DomainError("projection needs a nonempty set of positions")
    if positions[0] < 0 or positions[-1] >= rel.arity:
        raise DomainError(f"positions {positions} out of range for arity {rel.arity}")
    return Relation(rel.size, len(positions), frozenset(tuple(x[p] for p in positions) for x in rel.tuples))


def fork(rel: Relation, i: int) -> frozenset[tuple[int, int]]:
    """Pairs of i-th entries of tuples that agree on all earlier entries."""
    if not 0 <= i < rel.arity:
        raise DomainError(f"position {i} out of range for arity {rel.arity}")
    blocks: dict[tuple, set[int]] = {}
    for x in rel.tuples:
        blocks.setdefault(x[:i], set()).add(x[i])
    return frozenset((u, v) for vals in blocks.values() for u in vals for v in vals)


@dataclass(frozen=True)
class RepVerdict:
    hypotheses_hold: bool
    conclusion_holds: bool
    has_edge_term: bool
    projections_agree: bool
    forks_contained: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _projections_agree(F: Relation, G: Relation, k: int) -> bool:
    # the empty index set compares emptiness
    if bool(F.tuples) != bool(G.tuples):
        return False
    for size in range(1, min(k - 1, F.arity) + 1):
        for T in itertools.combinations(range(F.arity), size):
            if proj_T(F, T) != proj_T(G, T):
                return False
    return True


def rep_check(F: Relation, G: Relation, alg: Algebra, k: int, config: Config = DEFAULT) -> RepVerdict:
    """Evaluate the hypotheses of the representation lemma for F inside G."""
    if k < 2:
        raise DomainError("k must be at least 2")
    if F.arity != G.arity or F.size != G.size or F.size != alg.size:
        raise ContractError("F and G must be relations of one arity over the algebra's domain")
    if not F.tuples <= G.tuples:
        raise ContractError("F is not contained in G")
    for name, rel in (("F", F), ("G", G)):
        if not is_subuniverse(alg, rel):
            raise ContractError(f"{name} is not a subuniverse")
    has_edge = find_edge(alg.basic_ops, k, alg.size, config) is not None
    proj_ok = _projections_agree(F, G, k)
    forks_ok = all(fork(G, i) <= fork(F, i) for i in range(F.arity))
    verdict = RepVerdict(proj_ok and forks_ok, F.tuples == G.tuples, has_edge, proj_ok, forks_ok)
    if has_edge and verdict.hypotheses_hold and not verdict.conclusion_holds:
        raise CounterexampleError(f"hypotheses hold but F != G: F={F}, G={G}")
    return verdict


def combine_relations(relations: Sequence[Relation]) -> Relation:
    """One relation with the same polymorphisms: the product of the nonempty inputs."""
    relations = list(relations)
    if not relations:
        raise DomainError("combine_relations needs at least one relation")
    sizes = {r.size for r in relations}
    if len(sizes) != 1:
        raise DomainError("relations over different domains")
    t = sizes.pop()
    factors = [r for r in relations if r.tuples]
    if not factors:
        return Relation.full(t, 1)
    tuples = frozenset(sum(parts, ()) for parts in itertools.product(*(r.sorted() for r in factors)))
    return Relation(t, sum(r.arity for r in factors), tuples)


def verify_determination(gens, relations: Sequence[Relation], n: int, t: int | None = None, config: Config = DEFAULT) -> bool:
    """Do the relations cut out exactly the n-ary part of the clone of ``gens``?"""
    relations = list(relations)
    if t is None:
        t = next((g.size for g in gens), None) or next((r.size for r in relations), None)
    if t is None:
        raise DomainError("domain size needed")
    pol = {f.values for f in pol_layer(relations, n, t, config)}
    layer = {f.values for f in clone_layer(gens, n, t, config)}
    return pol == layer


def determining_relations(gens, m: int, k: int, t: int | None = None, config: Config = DEFAULT) -> list[Relation]:
    """The n-ary layer at arity m as one relation, plus every subuniverse of the (k-1)-th power."""
    layer = clone_layer(gens, m, t, config)
    alg = Algebra(Domain(layer.size), tuple(gens))
    out = [layer_as_relation(layer, config)]
    if k > 1:
        out.extend(subuniverses(alg, k - 1, config).members)
    return out

