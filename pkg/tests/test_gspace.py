import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tgbredon.errors import ValidationError
from tgbredon.fixtures import BASE, skeleton0, skeleton1
from tgbredon.groupoid import NONE, isotropy
from tgbredon.gspace import (EquivariantMap, FiniteGSpace, GroupSet, classify_trivial_action,
                             coset_space, count_equivariant_maps, disjoint_union,
                             enumerate_equivariant_maps, enumerate_group_maps, extend_map,
                             fibrewise_product, find_isomorphism, induce_space, object_space, product,
                             pushout, quotient, restrict_map, restrict_to_fibre, target_fibre_space,
                             trivial_action_report, validate_gspace, verify_formY,
                             verify_rest_bijection)
from tgbredon.randomgen import random_groupoid, random_space

from oracles import brute_force_maps, brute_force_set_maps

seeds = st.integers(0, 2 ** 32 - 1)


@pytest.fixture(scope="module")
def X0(flip):
    return skeleton0(flip)


@pytest.fixture(scope="module")
def Gb(flip):
    return target_fibre_space(flip, BASE)


def _swapped_identity_fixed(K, n):
    return GroupSet(K, [f"z{i}" for i in range(n)], [[i] * K.order for i in range(n)])


# -- construction and validation -----------------------------------------------------

def test_skeleton0_valid(X0, flip):
    assert X0.points == ("sq_a", "sq_b", "tri_a", "tri_b")
    assert X0.act[X0.pt("sq_b")][flip.arr("x")] == X0.pt("sq_a")
    assert validate_gspace(flip, X0.to_json()).act == X0.act


def test_object_space_anchor_is_identity(flip):
    O = object_space(flip)
    assert [flip.objects[a] for a in O.anchor] == list(O.points)
    assert O.act[O.pt("b")][flip.arr("x")] == O.pt("a")


def test_corrupted_action_rejected(flip, X0):
    raw = X0.to_json()
    for t in raw["action"]:
        if t[:2] == ["sq_b", "t"]:
            t[2] = "tri_b"
    with pytest.raises(ValidationError) as exc:
        validate_gspace(flip, raw)
    assert "associativity" in exc.value.kinds()


def test_wrong_anchor_rejected(flip, X0):
    raw = X0.to_json()
    raw["anchor"]["sq_a"] = "b"
    with pytest.raises(ValidationError):
        validate_gspace(flip, raw)


# -- fibres and induction -------------------------------------------------------------

def test_fibre_of_skeleton0(X0):
    F = restrict_to_fibre(X0, BASE)
    assert F.names == ["sq_b", "tri_b"] and F.gset.is_trivial()


def test_fibre_of_target_space(flip, Gb):
    F = restrict_to_fibre(Gb, BASE)
    assert sorted(F.names) == ["t", "v"] and not F.gset.is_trivial()


def test_induce_trivial_pair_gives_skeleton0(flip, X0):
    K = isotropy(flip, BASE).group
    Y = induce_space(flip, BASE, _swapped_identity_fixed(K, 2))
    assert len(Y) == 4 and find_isomorphism(Y, X0) is not None


def test_induce_point_and_free_orbit(flip, Gb):
    K = isotropy(flip, BASE).group
    assert find_isomorphism(induce_space(flip, BASE, _swapped_identity_fixed(K, 1)), object_space(flip))
    assert find_isomorphism(induce_space(flip, BASE, coset_space(K, [K.identity])), Gb)


@given(seeds)
def test_induce_then_restrict_recovers_set(seed):
    rng = random.Random(seed)
    G, b = random_groupoid(rng, 3, 4)       # brute force is |Z|^|Z|
    K = isotropy(G, b).group
    Z = coset_space(K, rng.choice([[K.identity], list(range(K.order))]))
    F = restrict_to_fibre(induce_space(G, b, Z), b).gset
    assert len(F) == len(Z)
    assert len(enumerate_group_maps(Z, F)) == len(brute_force_set_maps(Z, F))


# -- equivariant maps -----------------------------------------------------------------

def test_map_counts(flip, Gb, X0):
    O = object_space(flip)
    assert len(enumerate_equivariant_maps(Gb, Gb)) == 2 == len(brute_force_maps(Gb, Gb))
    assert len(enumerate_equivariant_maps(O, O)) == 1
    # each G/G orbit has one place to go inside the object space
    want = len(brute_force_maps(X0, O))
    assert want == 1
    assert count_equivariant_maps(X0, O) == want


def test_extend_identity_and_swap(flip, X0):
    ident = extend_map((0, 1), X0, X0, BASE)
    assert ident.mapping == tuple(range(4))
    swap = extend_map((1, 0), X0, X0, BASE)
    assert swap.named() == {"sq_a": "tri_a", "sq_b": "tri_b", "tri_a": "sq_a", "tri_b": "sq_b"}


def test_extend_rejects_non_equivariant(flip, Gb, X0):
    # a fibre map from the free orbit that is not constant cannot land in fixed points
    with pytest.raises(ValidationError):
        extend_map((0, 1), Gb, X0, BASE)


def test_rest_bijection_examples(flip, Gb):
    cert = verify_rest_bijection(Gb, Gb, BASE)
    assert cert and cert.data["global_maps"] == cert.data["fibre_maps"] == 2
    O = object_space(flip)
    cert = verify_rest_bijection(O, O, BASE)
    assert cert and cert.data["global_maps"] == 1


@given(seeds)
def test_enumeration_matches_brute_force(seed):
    rng = random.Random(seed)
    G, b = random_groupoid(rng, 3, 4)
    Y, X = random_space(rng, G, b, 6), random_space(rng, G, b, 6)
    got = sorted(phi.mapping for phi in enumerate_equivariant_maps(Y, X))
    assert got == sorted(brute_force_maps(Y, X))
    for phi in enumerate_equivariant_maps(Y, X):
        assert extend_map(restrict_map(phi, b), Y, X, b).mapping == phi.mapping


# -- structure theorems on examples --------------------------------------------------

def test_formY_examples(flip, X0):
    assert verify_formY(X0, BASE)
    assert verify_formY(object_space(flip), "a")


def test_quotient_examples(X0, Gb):
    q = quotient(X0, BASE)
    assert q.classes == [["sq_a", "sq_b"], ["tri_a", "tri_b"]] and q.certificate
    assert len(quotient(Gb, BASE).classes) == 1


def test_trivial_action_examples(X0, Gb):
    assert classify_trivial_action(X0, BASE) is True
    assert classify_trivial_action(Gb, BASE) is False
    assert trivial_action_report(X0, "a").data["verdicts"] == {"1": True, "2": True, "3": True, "4": True}


# -- products and pushouts --------------------------------------------------------------

def test_product_examples(flip, Gb, X0):
    P = product(Gb, Gb)
    assert len(P) == 8 and len(P.orbits()) == 2
    assert find_isomorphism(product(X0, object_space(flip)), X0)


def test_product_with_trivial_fibre_space_is_fibrewise(flip, Gb):
    pair = induce_space(flip, BASE, _swapped_identity_fixed(isotropy(flip, BASE).group, 2))
    assert find_isomorphism(product(Gb, pair), fibrewise_product(Gb, ["p", "q"]))


def test_pushout_identity(X0):
    idm = EquivariantMap(X0, X0, tuple(range(4)))
    assert pushout(idm, idm).space.points == X0.points


def test_pushout_of_empty_is_disjoint_union(flip, X0, Gb):
    E = FiniteGSpace(flip, [], [], [])
    po = pushout(EquivariantMap(E, X0, ()), EquivariantMap(E, Gb, ()))
    assert find_isomorphism(po.space, disjoint_union(X0, Gb))


def test_one_skeleton(flip):
    po = skeleton1(flip)
    S = po.space
    assert S.points == ("sq_a", "sq_b", "tri_a", "tri_b", "(v,0)", "(x,0)", "(y,0)", "(t,0)")
    assert len(S.orbits()) == 3
    # the end -1 of every edge lands on a square point
    assert set(po.from_left) == {0, 1, 2, 3}


def test_maps_with_wrong_domain_rejected(flip, X0, Gb):
    with pytest.raises(ValidationError):
        EquivariantMap(X0, Gb, (0, 0, 0, 0))
    assert all(a != NONE for a in X0.anchor)
