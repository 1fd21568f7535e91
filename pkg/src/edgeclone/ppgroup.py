"""Primitive-positive definitions of subgroups of G^n over a single relation H.

A subgroup S with generators s_1..s_e is the image of the e-ary term layer
at (s_1, ..., s_e).  The e-ary layer is cut out of all e-ary functions by a
few constraints ``f(r_1, ..., r_e) in H``; writing the function's values as
existential variables turns that into a pp-formula.  Variable indices are
0-based here; ``render`` prints them 1-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .clone import clone_layer
from .config import DEFAULT, Config, ContractError, DomainError, EdgeCloneError, check_cap
from .core import Algebra, Domain, OperationTable, Relation, encode_tuple, subpower_closure, tuple_grid


class InsufficientRelationError(EdgeCloneError):
    """The relation H cannot cut the full function space down to the term layer."""


@dataclass(frozen=True)
class GroupTable:
    mul: OperationTable
    inv: OperationTable
    identity: int

    def __post_init__(self):
        t = self.mul.size
        if self.mul.arity != 2 or self.inv.arity != 1 or self.inv.size != t:
            raise ContractError("a group needs a binary mul and unary inv on one domain")
        if not 0 <= self.identity < t:
            raise DomainError("identity not in the domain")
        m, i, e = self.mul, self.inv, self.identity
        for x in range(t):
            if m(e, x) != x or m(x, e) != x:
                raise ContractError(f"{e} is not an identity")
            if m(x, i(x)) != e or m(i(x), x) != e:
                raise ContractError(f"inv({x}) is not an inverse")
            for y, z in itertools.product(range(t), repeat=2):
                if m(m(x, y), z) != m(x, m(y, z)):
                    raise ContractError(f"mul is not associative at {(x, y, z)}")

    @property
    def size(self) -> int:
        return self.mul.size

    @property
    def ops(self) -> tuple[OperationTable, OperationTable]:
        return (self.mul, self.inv)

    @property
    def algebra(self) -> Algebra:
        return Algebra(Domain(self.size), self.ops)

    @classmethod
    def cyclic(cls, t: int) -> "GroupTable":
        mul = OperationTable.from_function(t, 2, lambda x, y: (x + y) % t, "mul")
        inv = OperationTable.from_function(t, 1, lambda x: (-x) % t, "inv")
        return cls(mul, inv, 0)

    @classmethod
    def from_ops(cls, mul: OperationTable, inv: OperationTable) -> "GroupTable":
        for e in range(mul.size):
            if all(mul(e, x) == x for x in range(mul.size)):
                return cls(mul, inv, e)
        raise ContractError("mul has no left identity")

    def graph(self) -> Relation:
        """``{(x, y, z) : x*y = z}``, the default choice of H."""
        t = self.size
        return Relation(t, 3, frozenset((x, y, self.mul(x, y)) for x in range(t) for y in range(t)))

    def identity_tuple(self, n: int) -> tuple[int, ...]:
        return (self.identity,) * n


def _check_subgroup(G: GroupTable, S: Relation) -> None:
    if S.size != G.size:
        raise ContractError("S is not over the group's domain")
    if G.identity_tuple(S.arity) not in S.tuples:
        raise ContractError("S does not contain the identity tuple")
    if subpower_closure(G.algebra, S.arity, S.tuples).tuples != S.tuples:
        raise ContractError("S is not closed under the group operations")


def small_generators(G: GroupTable, S: Relation) -> list[tuple[int, ...]]:
    """Greedy generating chain; each step at least doubles the generated subgroup."""
    _check_subgroup(G, S)
    n = S.arity
    gens: list[tuple[int, ...]] = []
    current = {G.identity_tuple(n)}
    for s in S.sorted():
        if s in current:
            continue
        gens.append(s)
        current = set(subpower_closure(G.algebra, n, [G.identity_tuple(n), *gens]).tuples)
        if current == S.tuples:
            break
    return gens


@dataclass(frozen=True)
class ConstraintSelection:
    e: int
    constraints: tuple[tuple[tuple[int, ...], ...], ...]  # each: e tuples of H
    layer_size: int
    function_count: int


def select_M(G: GroupTable, e: int, H: Relation, config: Config = DEFAULT) -> ConstraintSelection:
    """Greedy choice of ``r in H^e`` whose constraints leave exactly the e-ary term layer."""
    if e < 1:
        raise DomainError("select_M needs e >= 1")
    if H.size != G.size:
        raise ContractError("H is not over the group's domain")
    t = G.size
    width = t**e
    check_cap(f"functions G^(G^{e})", t**width, config.max_bruteforce_functions)
    functions = tuple_grid(t, width)
    keys = {row.tobytes() for row in clone_layer(G.ops, e, t, config).tables.astype(np.int64)}
    target = np.array([row.tobytes() in keys for row in functions])

    h_rows = H.sorted()
    h_codes = np.array(sorted(encode_tuple(x, t) for x in h_rows), dtype=np.int64)
    candidates = []
    for r in itertools.product(h_rows, repeat=e):
        # column j of the k x e array r, read as a point of G^e
        idx = [encode_tuple(tuple(r[p][j] for p in range(e)), t) for j in range(H.arity)]
        codes = np.zeros(len(functions), dtype=np.int64)
        for j in idx:
            codes = codes * t + functions[:, j]
        ok = np.isin(codes, h_codes)
        if ok[target].all():
            candidates.append((r, ok))

    alive = np.ones(len(functions), dtype=bool)
    chosen = []
    while (alive != target).any():
        best, best_gain = None, 0
        for r, ok in candidates:
            gain = int((alive & ~ok).sum())
            if gain > best_gain:
                best, best_gain = (r, ok), gain
        if best is None:
            raise InsufficientRelationError(
                f"H cannot cut {int(alive.sum())} functions down to the {int(target.sum())} term functions at arity {e}"
            )
        chosen.append(best[0])
        alive &= best[1]
    return ConstraintSelection(e, tuple(chosen), int(target.sum()), len(functions))


@dataclass(frozen=True)
class PPFormula:
    l: int
    k: int
    sigma: tuple[tuple[int, ...], ...]
    tau: tuple[int, ...]
    H: Relation
    group_size: int
    e: int = 0
    pinned: Optional[tuple[int, ...]] = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        n = len(self.tau)
        if self.l < 1 or any(not 0 <= v < self.l for row in self.sigma for v in row):
            raise ContractError("sigma refers to a missing variable")
        if any(not 0 <= v < self.l for v in self.tau):
            raise ContractError("tau refers to a missing variable")
        if any(len(row) != self.k for row in self.sigma) or self.k != self.H.arity:
            raise ContractError("every conjunct must have the arity of H")
        ok, msg = self.bounds_hold(n)
        if not ok:
            raise ContractError(msg)

    @property
    def m_count(self) -> int:
        return len(self.sigma)

    def bounds_hold(self, n: int) -> tuple[bool, str]:
        lg = math.log2(self.group_size)
        l_cap = self.group_size ** (n * lg)
        m_cap = self.l * lg
        eps = 1e-9
        if self.l > l_cap * (1 + eps):
            return False, f"l={self.l} exceeds |G|^(n log2|G|)={l_cap:g}"
        if self.m_count > m_cap * (1 + eps):
            return False, f"m={self.m_count} exceeds l log2|G|={m_cap:g}"
        return True, ""

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "m": self.m_count,
            "k": self.k,
            "e": self.e,
            "sigma": [list(r) for r in self.sigma],
            "tau": list(self.tau),
            "H": {"domain_size": self.H.size, "arity": self.H.arity, "tuples": [list(x) for x in self.H.sorted()]},
            "pinned": list(self.pinned) if self.pinned is not None else None,
            "notes": list(self.notes),
        }

    def render(self) -> str:
        n = len(self.tau)
        head = ", ".join(f"g{i + 1}" for i in range(n))
        exists = ", ".join(f"a{i + 1}" for i in range(self.l))
        atoms = [f"H({', '.join(f'a{v + 1}' for v in row)})" for row in self.sigma]
        atoms += [f"g{i + 1} = a{v + 1}" for i, v in enumerate(self.tau)]
        if self.pinned is not None:
            atoms += [f"a{v + 1} = {c + 1}" for v, c in zip(self.tau, self.pinned)]
        return f"S = {{ ({head}) : exists {exists} : {' and '.join(atoms) or 'true'} }}"


def build_pp_formula(G: GroupTable, H: Relation, S: Relation, config: Config = DEFAULT) -> PPFormula:
    gens = small_generators(G, S)
    e = len(gens)
    n = S.arity
    t = G.size
    if e == 0:
        return _trivial_formula(G, H, n)
    sel = select_M(G, e, H, config)
    sigma = tuple(
        tuple(encode_tuple(tuple(r[p][j] for p in range(e)), t) for j in range(H.arity)) for r in sel.constraints
    )
    tau = tuple(encode_tuple(tuple(s[i] for s in gens), t) for i in range(n))
    return PPFormula(t**e, H.arity, sigma, tau, H, t, e)


def _trivial_formula(G: GroupTable, H: Relation, n: int) -> PPFormula:
    # one variable; try the conjunct H(a1, ..., a1) to force the identity
    forced = {g for g in range(G.size) if (g,) * H.arity in H.tuples}
    if forced == {G.identity}:
        return PPFormula(1, H.arity, ((0,) * H.arity,), (0,) * n, H, G.size, 0, notes=("trivial subgroup",))
    return PPFormula(
        1, H.arity, (), (0,) * n, H, G.size, 0,
        pinned=G.identity_tuple(n), notes=("trivial subgroup", "H cannot force the identity; exact singleton"),
    )


def eval_pp_formula(formula: PPFormula, G: GroupTable | int, n: int | None = None, config: Config = DEFAULT) -> Relation:
    """The set defined by the formula, by enumerating every assignment of the variables."""
    t = G.size if isinstance(G, GroupTable) else G
    if n is None:
        n = len(formula.tau)
    if n != len(formula.tau):
        raise DomainError(f"formula has {len(formula.tau)} free variables, not {n}")
    check_cap("assignments |G|^l", t**formula.l, config.max_bruteforce_functions)
    assignments = tuple_grid(t, formula.l)
    ok = np.ones(len(assignments), dtype=bool)
    h_codes = np.array(sorted(encode_tuple(x, t) for x in formula.H.tuples), dtype=np.int64)
    for row in formula.sigma:
        codes = np.zeros(len(assignments), dtype=np.int64)
        for v in row:
            codes = codes * t + assignments[:, v]
        ok &= np.isin(codes, h_codes)
    if formula.pinned is not None:
        for v, c in zip(formula.tau, formula.pinned):
            ok &= assignments[:, v] == c
    images = assignments[ok][:, list(formula.tau)] if n else np.zeros((int(ok.sum()), 0), dtype=np.int64)
    return Relation(t, n, frozenset(tuple(x) for x in images.tolist()))


def subgroups(G: GroupTable, n: int, config: Config = DEFAULT) -> list[Relation]:
    """Subgroups of G^n: the nonempty subuniverses of the group algebra."""
    from .galois import subuniverses

    return [S for S in subuniverses(G.algebra, n, config) if S.tuples]
