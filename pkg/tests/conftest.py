import itertools

import pytest

from edgeclone.core import OperationTable, Relation, compose, projection


def op(t, n, fn, name=""):
    return OperationTable.from_function(t, n, fn, name)


XOR = op(2, 2, lambda x, y: x ^ y, "xor")
AND = op(2, 2, lambda x, y: x & y, "and")
OR = op(2, 2, lambda x, y: x | y, "or")
NOT = op(2, 1, lambda x: 1 - x, "not")
NAND = op(2, 2, lambda x, y: 1 - (x & y), "nand")
MAJ = op(2, 3, lambda x, y, z: int(x + y + z >= 2), "maj")
C0 = op(2, 1, lambda x: 0, "c0")
C1 = op(2, 1, lambda x: 1, "c1")
LEQ = Relation(2, 2, frozenset({(0, 0), (0, 1), (1, 1)}))
ZERO = Relation(2, 1, frozenset({(0,)}))
ONE = Relation(2, 1, frozenset({(1,)}))


def naive_layer(gens, t, n):
    """Reference closure: repeated composition of whole tables until nothing new appears."""
    members = {projection(t, n, i) for i in range(1, n + 1)}
    while True:
        new = set()
        for f in gens:
            for gs in itertools.product(sorted(members, key=lambda g: g.values), repeat=f.arity):
                h = compose(f, list(gs))
                if h not in members:
                    new.add(h)
        if not new:
            return {f.values for f in members}
        members |= new


def naive_phi(tables, t, a):
    """phi straight from its definition: pairs (f(a), g(a)) with f = g below a."""
    tuples = list(itertools.product(range(t), repeat=len(a)))
    pos = tuples.index(tuple(a))
    out = set()
    for f in tables:
        for g in tables:
            if all(f[i] == g[i] for i in range(pos)):
                out.add((f[pos], g[pos]))
    return out


def naive_embeds(a, b):
    """Every witness of a <=_E b, by checking each increasing map against the definition."""
    fa = {c: a.index(c) for c in set(a)}
    fb = {c: b.index(c) for c in set(b)}
    found = []
    for h in itertools.combinations(range(len(b)), len(a)):
        if any(a[i] != b[h[i]] for i in range(len(a))):
            continue
        if set(a) != set(b):
            continue
        if any(h[fa[c]] != fb[c] for c in fa):
            continue
        found.append(h)
    return found


@pytest.fixture
def z2():
    from edgeclone.ppgroup import GroupTable

    return GroupTable.cyclic(2)


@pytest.fixture
def z3():
    from edgeclone.ppgroup import GroupTable

    return GroupTable.cyclic(3)
