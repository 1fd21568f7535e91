import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeclone.config import DomainError
from edgeclone.core import (
    Algebra,
    Domain,
    OperationTable,
    Relation,
    apply,
    compose,
    decode_tuple,
    encode_tuple,
    is_subuniverse,
    projection,
    subpower_closure,
)

from conftest import XOR, op


@pytest.mark.parametrize(
    "x, t, expected",
    [((0, 0), 2, 0), ((1, 0, 1), 2, 5), ((2, 2), 3, 8)],
)
def test_encode_examples(x, t, expected):
    assert encode_tuple(x, t) == expected


def test_encode_matches_lex_enumeration():
    # 8 binary tuples of length 3 listed in lex order
    listed = sorted(itertools.product(range(2), repeat=3))
    assert listed.index((1, 0, 1)) == 5 == encode_tuple((1, 0, 1), Domain(2))


@pytest.mark.parametrize(
    "i, t, n, expected",
    [(0, 2, 2, (0, 0)), (5, 2, 3, (1, 0, 1)), (2, 3, 1, (2,))],
)
def test_decode_examples(i, t, n, expected):
    assert decode_tuple(i, t, n) == expected


def test_encode_rejects_out_of_domain():
    with pytest.raises(DomainError):
        encode_tuple((0, 2), 2)
    with pytest.raises(DomainError):
        decode_tuple(4, 2, 2)


@pytest.mark.parametrize("t", [1, 2, 3, 4])
@pytest.mark.parametrize("n", range(0, 7))
def test_encode_decode_bijection(t, n):
    seen = set()
    for i in range(t**n):
        x = decode_tuple(i, t, n)
        assert encode_tuple(x, t) == i
        seen.add(x)
    assert len(seen) == t**n


@pytest.mark.parametrize("t", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_index_order_is_lex_order(t, n):
    tuples = list(itertools.product(range(t), repeat=n))
    assert [encode_tuple(x, t) for x in sorted(tuples)] == list(range(t**n))


def test_projection_examples():
    assert projection(2, 1, 1).values == (0, 1)
    assert projection(2, 2, 2).values == (0, 1, 0, 1)
    assert projection(3, 2, 1).values == (0, 0, 0, 1, 1, 1, 2, 2, 2)
    with pytest.raises(DomainError):
        projection(2, 2, 3)


def test_apply_examples():
    assert apply(XOR, (1, 1)) == 0
    assert apply(XOR, (0, 1)) == 1
    assert apply(projection(2, 3, 2), (0, 1, 0)) == 1
    with pytest.raises(DomainError):
        apply(XOR, (0,))


def test_table_validation():
    with pytest.raises(DomainError):
        OperationTable(2, 2, (0, 1, 0))
    with pytest.raises(DomainError):
        OperationTable(2, 1, (0, 2))
    # names do not take part in equality
    assert OperationTable(2, 1, (0, 1), "id") == OperationTable(2, 1, (0, 1))


def test_compose_examples():
    g, h = op(2, 2, lambda x, y: x & y), op(2, 2, lambda x, y: x | y)
    assert compose(projection(2, 2, 1), [g, h]) == g
    e1 = projection(2, 2, 1)
    assert compose(XOR, [e1, e1]).values == (0, 0, 0, 0)
    tern = compose(XOR, [projection(2, 3, 1), projection(2, 3, 2)])
    assert tern == op(2, 3, lambda x, y, z: x ^ y)
    with pytest.raises(DomainError):
        compose(XOR, [e1])


tables = st.integers(1, 3).flatmap(
    lambda t: st.integers(1, 3).flatmap(
        lambda n: st.tuples(
            st.just(t),
            st.lists(st.lists(st.integers(0, t - 1), min_size=t**n, max_size=t**n), min_size=1, max_size=3),
            st.just(n),
        )
    )
)


@given(tables, st.data())
def test_projection_absorbs_composition(case, data):
    t, rows, n = case
    gs = [OperationTable(t, n, tuple(r)) for r in rows]
    i = data.draw(st.integers(1, len(gs)))
    assert compose(projection(t, len(gs), i), gs) == gs[i - 1]


def z2_group():
    return Algebra(Domain(2), (XOR, op(2, 1, lambda x: x)))


def test_subpower_closure_examples():
    alg = z2_group()
    assert subpower_closure(alg, 2, [(1, 1)]).tuples == {(1, 1), (0, 0)}
    assert subpower_closure(alg, 2, [(0, 1)]).tuples == {(0, 1), (0, 0)}
    full = set(itertools.product(range(2), repeat=2))
    assert subpower_closure(alg, 2, full).tuples == full
    assert subpower_closure(alg, 2, []).tuples == frozenset()


def algebras():
    def build(t, specs):
        return Algebra(Domain(t), tuple(OperationTable(t, n, tuple(v)) for n, v in specs))

    return st.integers(1, 3).flatmap(
        lambda t: st.lists(
            st.integers(1, 2).flatmap(
                lambda n: st.tuples(st.just(n), st.lists(st.integers(0, t - 1), min_size=t**n, max_size=t**n))
            ),
            max_size=2,
        ).map(lambda specs: build(t, specs))
    )


@settings(max_examples=60)
@given(algebras(), st.integers(1, 2), st.data())
def test_closure_is_idempotent_subuniverse(alg, n, data):
    points = list(itertools.product(range(alg.size), repeat=n))
    gens = data.draw(st.lists(st.sampled_from(points), max_size=3))
    closed = subpower_closure(alg, n, gens)
    assert set(gens) <= closed.tuples
    assert subpower_closure(alg, n, closed.tuples) == closed
    # every basic operation maps the closure into itself
    for f in alg.basic_ops:
        for args in itertools.product(closed.sorted(), repeat=f.arity):
            assert tuple(f(*col) for col in zip(*args)) in closed
    assert is_subuniverse(alg, closed)


def test_relation_validation_and_order():
    r = Relation(2, 2, {(1, 0), (0, 1)})
    assert r.sorted() == [(0, 1), (1, 0)]
    assert (0, 1) in r
    with pytest.raises(DomainError):
        Relation(2, 2, {(0, 1, 1)})
    with pytest.raises(DomainError):
        Relation(2, 1, {(2,)})
