"""Relation coordinates are 0-based in these tests."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeclone.clone import clone_layer, compute_m
from edgeclone.config import Config, ContractError, DomainError, ResourceLimitError
from edgeclone.core import Algebra, Domain, Relation
from edgeclone.galois import (
    CounterexampleError,
    combine_relations,
    determining_relations,
    fork,
    pol_layer,
    preserves,
    proj_T,
    rep_check,
    subuniverses,
    verify_determination,
)
from edgeclone.ppgroup import GroupTable

from conftest import AND, C0, C1, LEQ, MAJ, NOT, ONE, OR, XOR, ZERO


def closed_subsets(alg, j):
    """Subsets of A^j closed under every operation, found by filtering all subsets."""
    points = list(itertools.product(range(alg.size), repeat=j))
    out = []
    for r in range(len(points) + 1):
        for subset in itertools.combinations(points, r):
            s = set(subset)
            if all(
                tuple(f(*col) for col in zip(*args)) in s
                for f in alg.basic_ops
                for args in itertools.product(subset, repeat=f.arity)
            ):
                out.append(frozenset(s))
    return set(out)


def test_preserves_examples():
    assert preserves(AND, LEQ)
    assert not preserves(NOT, LEQ)
    full = Relation.full(2, 3)
    assert preserves(MAJ, full) and preserves(NOT, full)
    assert preserves(NOT, Relation(2, 2, frozenset()))


def test_preserves_matches_definition():
    rels = [LEQ, ZERO, ONE, Relation(2, 2, {(0, 1), (1, 0)}), Relation(2, 3, {(0, 0, 1), (1, 1, 0), (0, 1, 1)})]
    for f in [AND, OR, XOR, NOT, MAJ, C0, C1]:
        for r in rels:
            direct = all(
                tuple(f(*col) for col in zip(*rows)) in r.tuples
                for rows in itertools.product(r.sorted(), repeat=f.arity)
            )
            assert preserves(f, r) == direct


def test_pol_layer_examples():
    unary = pol_layer([LEQ], 1)
    assert {f.values for f in unary} == {(0, 1), (0, 0), (1, 1)}
    binary = pol_layer([LEQ], 2)
    assert len(binary) == 6
    assert all(f(0, 0) <= f(0, 1) <= f(1, 1) and f(0, 0) <= f(1, 0) <= f(1, 1) for f in binary)
    assert len(pol_layer([], 1, t=2)) == 4
    with pytest.raises(ResourceLimitError):
        pol_layer([LEQ], 4, config=Config(max_bruteforce_functions=1000))


def test_subuniverses_examples(z2):
    fam = subuniverses(z2.algebra, 1)
    assert [r.tuples for r in fam] == [frozenset(), {(0,)}, {(0,), (1,)}]
    bare = Algebra(Domain(2), ())
    assert len(subuniverses(bare, 1)) == 4
    fam2 = subuniverses(z2.algebra, 2)
    assert {r.tuples for r in fam2} == closed_subsets(z2.algebra, 2)
    assert len(fam2) == 6


def test_subuniverses_z3_square(z3):
    fam = subuniverses(z3.algebra, 2)
    assert {r.tuples for r in fam} == closed_subsets(z3.algebra, 2)
    # empty set, trivial group, four lines, whole plane
    assert len(fam) == 7


def test_subuniverses_cap():
    with pytest.raises(ResourceLimitError):
        subuniverses(Algebra(Domain(3), ()), 3)


def test_proj_T_examples():
    assert proj_T(Relation(2, 2, {(0, 1), (1, 0)}), [1]).tuples == {(1,), (0,)}
    diag = Relation(2, 2, {(0, 0), (1, 1)})
    assert proj_T(diag, [0, 1]) == diag
    assert proj_T(Relation(2, 3, {(0, 0, 1), (0, 1, 1)}), [0, 2]).tuples == {(0, 1)}
    with pytest.raises(DomainError):
        proj_T(diag, [])
    with pytest.raises(DomainError):
        proj_T(diag, [2])


def naive_fork(rel, i):
    return {(a[i], b[i]) for a in rel.tuples for b in rel.tuples if a[:i] == b[:i]}


def test_fork_examples():
    r = Relation(2, 2, {(0, 0), (0, 1)})
    assert fork(r, 1) == set(itertools.product(range(2), repeat=2))
    assert fork(r, 0) == {(0, 0)}
    assert fork(Relation(3, 3, {(2, 0, 1)}), 2) == {(1, 1)}
    with pytest.raises(DomainError):
        fork(r, 2)


relations3 = st.integers(1, 3).flatmap(
    lambda r: st.sets(st.tuples(*[st.integers(0, 2)] * r), max_size=10).map(lambda s: Relation(3, r, frozenset(s)))
)


@given(relations3, st.data())
def test_fork_and_projection_monotone(G, data):
    F = Relation(3, G.arity, frozenset(data.draw(st.sets(st.sampled_from(G.sorted()))) if G.tuples else frozenset()))
    for i in range(G.arity):
        assert fork(F, i) <= fork(G, i)
        assert fork(G, i) == naive_fork(G, i)
    for size in range(1, G.arity + 1):
        for T in itertools.combinations(range(G.arity), size):
            assert proj_T(F, T) <= proj_T(G, T)


def test_rep_check_examples(z2):
    alg = z2.algebra
    full = Relation.full(2, 2)
    v = rep_check(full, full, alg, 2)
    assert v.hypotheses_hold and v.conclusion_holds and v.has_edge_term
    diag = Relation(2, 2, {(0, 0), (1, 1)})
    v = rep_check(diag, full, alg, 2)
    assert v.projections_agree and not v.forks_contained
    assert not v.hypotheses_hold and not v.conclusion_holds


def test_rep_check_preconditions(z2):
    full = Relation.full(2, 2)
    diag = Relation(2, 2, {(0, 0), (1, 1)})
    with pytest.raises(ContractError):
        rep_check(full, diag, z2.algebra, 2)
    with pytest.raises(ContractError):
        rep_check(Relation(2, 2, {(1, 1)}), full, z2.algebra, 2)


@pytest.mark.parametrize("t", [2, 3])
def test_rep_sweep(t):
    G = GroupTable.cyclic(t)
    fam = subuniverses(G.algebra, 2).members
    for F, H in itertools.product(fam, repeat=2):
        if F.tuples <= H.tuples:
            v = rep_check(F, H, G.algebra, 2)
            if v.hypotheses_hold:
                assert F == H


def test_rep_check_without_edge_term_reports_only():
    # a semilattice has no 2-edge term; the check still evaluates the hypotheses
    alg = Algebra(Domain(2), (AND,))
    full = Relation.full(2, 2)
    F = Relation(2, 2, {(0, 0), (0, 1), (1, 0), (1, 1)})
    v = rep_check(F, full, alg, 2)
    assert not v.has_edge_term and v.conclusion_holds


def test_counterexample_error_is_raised(monkeypatch):
    import edgeclone.galois as g

    full = Relation.full(2, 2)
    diag = Relation(2, 2, {(0, 0), (1, 1)})
    monkeypatch.setattr(g, "fork", lambda rel, i: frozenset())
    with pytest.raises(CounterexampleError):
        g.rep_check(diag, full, GroupTable.cyclic(2).algebra, 2)


def test_combine_examples():
    assert combine_relations([LEQ]) == LEQ
    r = combine_relations([LEQ, ZERO])
    assert r.arity == 3 and len(r) == 3
    empty = Relation(2, 2, frozenset())
    assert combine_relations([empty]) == Relation.full(2, 1)
    assert combine_relations([LEQ, empty]) == LEQ


@pytest.mark.parametrize("n", [1, 2, 3])
def test_combine_keeps_pol(n):
    S = [LEQ, ZERO, ONE]
    a = {f.values for f in pol_layer(S, n)}
    b = {f.values for f in pol_layer([combine_relations(S)], n)}
    assert a == b


@pytest.mark.parametrize("n", [1, 2])
def test_combine_keeps_pol_with_empty_member(n):
    S = [LEQ, Relation(2, 3, frozenset()), Relation(2, 2, {(0, 1), (1, 0)})]
    a = {f.values for f in pol_layer(S, n)}
    assert a == {f.values for f in pol_layer([combine_relations(S)], n)}


def test_verify_determination_examples(z2):
    m = compute_m([XOR], 4).m
    rels = determining_relations([XOR], m, 2)
    assert len(rels) == 1 + len(subuniverses(Algebra(Domain(2), (XOR,)), 1))
    for n in (1, 2, 3):
        assert verify_determination([XOR], rels, n)
    assert not verify_determination([], [], 1, t=2)
    assert verify_determination([AND, OR, C0, C1], [LEQ], 2)


def test_layer_relation_alone_is_not_enough_below_m():
    # C^[1] together with the unary subuniverses allows every 0-preserving map
    rels = determining_relations([XOR], 1, 2)
    assert not verify_determination([XOR], rels, 2)


@settings(max_examples=40)
@given(st.sets(st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1)), min_size=1))
def test_clone_members_inherit_preservation(tuples):
    R = Relation(2, 3, frozenset(tuples))
    gens = [f for f in (AND, OR, XOR, MAJ, NOT) if preserves(f, R)]
    for n in (1, 2):
        for f in clone_layer(gens, n, t=2):
            assert preserves(f, R)


@pytest.mark.parametrize("gens", [[XOR], [AND, OR], [MAJ], [NOT]])
def test_clone_preserves_its_subuniverses(gens):
    alg = Algebra(Domain(2), tuple(gens))
    for j in (1, 2):
        fam = subuniverses(alg, j)
        for n in (1, 2, 3):
            for f in clone_layer(gens, n):
                assert all(preserves(f, r) for r in fam)
