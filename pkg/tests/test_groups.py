import itertools

import pytest

from tgbredon.errors import ValidationError
from tgbredon.groups import FiniteGroup, catalog, cyclic, dihedral, direct_product, quaternion, symmetric

from oracles import group_axioms_hold


def test_catalog_orders_and_axioms():
    names = [n for n, _ in catalog()]
    assert names == ["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8",
                     "Z2xZ2", "S3", "Z2xZ4", "Z2^3", "D4", "Q8"]
    for name, K in catalog():
        assert group_axioms_hold(K.names, K.mul), name


def test_catalog_pairwise_non_isomorphic_by_element_orders():
    def profile(K):
        orders = []
        for g in range(K.order):
            x, k = g, 1
            while x != K.identity:
                x, k = K.mul[x][g], k + 1
            orders.append(k)
        return K.order, tuple(sorted(orders))
    profiles = [profile(K) for _, K in catalog()]
    # D4 and Z2xZ4 differ; Q8 has a single involution
    assert len(set(profiles)) == len(profiles)


def test_symmetric_and_dihedral():
    assert symmetric(3).order == 6 and dihedral(4).order == 8
    S3 = symmetric(3)
    assert any(S3.mul[a][b] != S3.mul[b][a] for a in range(6) for b in range(6))
    Q = quaternion()
    minus = Q.index("-1")
    assert all(Q.mul[g][g] == minus for g in map(Q.index, ["i", "j", "k"]))


def test_conj_and_closure():
    K = symmetric(3)
    for g, h in itertools.product(range(6), repeat=2):
        assert K.conj(g, h) == K.mul[K.mul[g][h]][K.inverse[g]]
    assert K.closure([]) == frozenset([K.identity])
    assert len(K.closure(range(6))) == 6


def test_bad_tables_rejected():
    with pytest.raises(ValidationError) as exc:
        FiniteGroup(["a", "b"], [[0, 1], [1, 1]])
    assert "inverse" in exc.value.kinds() or "associativity" in exc.value.kinds()
    with pytest.raises(ValidationError) as exc:
        FiniteGroup(["a", "a"], [[0, 1], [1, 0]])
    assert "duplicate_name" in exc.value.kinds()


def test_json_round_trip_and_relabel():
    K = direct_product(cyclic(2), cyclic(4))
    d = K.to_json()
    assert FiniteGroup.from_triples(d["elements"], d["compose"]) == K
    perm = list(reversed(range(K.order)))
    R = K.relabel(perm)
    for a in range(K.order):
        for b in range(K.order):
            assert R.mul[perm[a]][perm[b]] == perm[K.mul[a][b]]
