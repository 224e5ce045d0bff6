import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tgbredon.bredon import (CONTRAVARIANT, COVARIANT, bredon_chain_complex, bredon_cochain_complex,
                             bredon_cohomology, bredon_homology, concentrated_system, constant_system,
                             coend_tensor, nat_group, validate_coefficient_system)
from tgbredon.errors import ValidationError
from tgbredon.fixtures import coefficients_A, coefficients_B
from tgbredon.gcw import chain_functor, fixed_subcomplex, point_complex, quotient_complex
from tgbredon.groups import catalog, cyclic
from tgbredon.orbitcat import build_orbit_category
from tgbredon.randomgen import random_gcw
from tgbredon.zlinalg import FgAbelianGroup

from oracles import cohomology_oracle, homology_oracle

Z = FgAbelianGroup(1)
SMALL = [K for _, K in catalog(6)]
seeds = st.integers(0, 2 ** 32 - 1)


def _pairs(groups):
    return [(g.free_rank, g.torsion) for g in groups]


def _oracle_ok(F):
    return max(F.sizes) <= 6      # minors oracle is exponential


# -- coefficient systems ---------------------------------------------------------------

def test_example_systems_are_valid(circle_oc):
    A, B = coefficients_A(circle_oc), coefficients_B(circle_oc)
    assert A.values() == {"e": FgAbelianGroup(), "G": Z}
    assert B.values() == {"e": Z, "G": Z}
    assert validate_coefficient_system(circle_oc, A.to_json()).maps == A.maps


def test_constant_torsion_system(circle_oc):
    C = constant_system(circle_oc, FgAbelianGroup(0, (3,)), COVARIANT)
    assert C.values()["e"] == FgAbelianGroup(0, (3,))


def test_non_functorial_system_rejected(circle_oc):
    raw = coefficients_B(circle_oc).to_json()
    raw["maps"]["e->e:t"] = [[2]]
    with pytest.raises(ValidationError) as exc:
        validate_coefficient_system(circle_oc, raw)
    assert "functoriality" in exc.value.kinds()


def test_sign_action_is_functorial_but_not_a_constant(circle_oc):
    raw = coefficients_B(circle_oc).to_json()
    raw["maps"]["e->e:t"] = [[-1]]
    # t acts by -1 on M(e) but M(e->G) . M(G->G) must agree with M(e->e:t) . M(e->G)
    with pytest.raises(ValidationError) as exc:
        validate_coefficient_system(circle_oc, raw)
    assert "functoriality" in exc.value.kinds()


def test_relations_respected_modulo(circle_oc):
    raw = {"variance": "contravariant",
           "values": {"e": {"generators": 1, "relations": [[2]]}, "G": {"generators": 1, "relations": [[2]]}},
           "maps": {"e->e:t": [[3]], "e->G:v": [[1]]}}
    # 3 = 1 mod 2, so t acts as the identity on Z/2
    C = validate_coefficient_system(circle_oc, raw)
    assert C.values()["e"] == FgAbelianGroup(0, (2,))


def test_missing_map_is_reported(circle_oc):
    raw = {"variance": "contravariant", "values": {"e": {"free_rank": 1}, "G": {"free_rank": 1}}, "maps": {}}
    with pytest.raises(ValidationError) as exc:
        validate_coefficient_system(circle_oc, raw)
    assert exc.value.kinds() == {"missing_map"}


def test_bad_variance_and_unknown_names(circle_oc):
    with pytest.raises(ValidationError) as exc:
        validate_coefficient_system(circle_oc, {"variance": "sideways"})
    assert exc.value.kinds() == {"variance"}
    raw = coefficients_B(circle_oc).to_json()
    raw["maps"]["e->H:v"] = [[1]]
    with pytest.raises(ValidationError) as exc:
        validate_coefficient_system(circle_oc, raw)
    assert exc.value.kinds() == {"unknown_morphism"}


def test_group_mismatch(circle_oc):
    raw = coefficients_B(circle_oc).to_json()
    raw["group"] = cyclic(3).to_json()
    with pytest.raises(ValidationError) as exc:
        validate_coefficient_system(circle_oc, raw)
    assert exc.value.kinds() == {"group_mismatch"}


# -- the flip circle ----------------------------------------------------------------

def test_nat_groups_of_flip_circle(circle, circle_oc):
    A, B = coefficients_A(circle_oc), coefficients_B(circle_oc)
    C0, C1 = chain_functor(circle, circle_oc, 0), chain_functor(circle, circle_oc, 1)
    assert nat_group(C0, A).group == FgAbelianGroup(2)
    assert nat_group(C1, A).group == FgAbelianGroup()
    assert nat_group(C0, B).group == FgAbelianGroup(2)
    assert nat_group(C1, B).group == FgAbelianGroup(1)


def test_flip_circle_cohomology(circle, circle_oc):
    cxA = bredon_cochain_complex(circle, coefficients_A(circle_oc))
    assert cxA.ranks() == [2, 0] and cxA.homology() == [FgAbelianGroup(2), FgAbelianGroup()]
    cxB = bredon_cochain_complex(circle, coefficients_B(circle_oc))
    assert cxB.ranks() == [2, 1] and cxB.is_surjective(0)
    assert cxB.homology() == [Z, FgAbelianGroup()]


def test_flip_circle_matches_fixed_set_and_quotient(circle, circle_oc):
    fixed = fixed_subcomplex(circle, circle_oc.objects[-1])
    assert bredon_cohomology(circle, coefficients_A(circle_oc)) == fixed.cohomology()
    assert bredon_cohomology(circle, coefficients_B(circle_oc)) == quotient_complex(circle).cohomology()


def test_flip_circle_homology(circle, circle_oc):
    N = constant_system(circle_oc, Z, COVARIANT)
    cx = bredon_chain_complex(circle, N)
    assert cx.ranks() == [2, 1] and cx.homology() == [Z, FgAbelianGroup()]
    N = concentrated_system(circle_oc, "G", Z, COVARIANT)
    assert bredon_homology(circle, N) == [FgAbelianGroup(2), FgAbelianGroup()]


def test_variance_mismatch_is_rejected_by_orbitcat_group(circle):
    other = build_orbit_category(cyclic(3))
    with pytest.raises(ValidationError):
        bredon_cohomology(circle, constant_system(other, Z, CONTRAVARIANT))


@pytest.mark.parametrize("K", SMALL, ids=[n for n, _ in catalog(6)])
def test_point_complex(K):
    X = point_complex(K)
    OC = build_orbit_category(K)
    assert bredon_cohomology(X, constant_system(OC, Z, CONTRAVARIANT)) == [Z]
    assert bredon_homology(X, constant_system(OC, FgAbelianGroup(0, (3,)), COVARIANT)) == [FgAbelianGroup(0, (3,))]


# -- random complexes against fixed-set and quotient oracles ----------------------------

@given(seeds)
def test_constant_Z_is_quotient(seed):
    rng = random.Random(seed)
    K = rng.choice(SMALL)
    X = random_gcw(rng, K)
    OC = build_orbit_category(K)
    Q = quotient_complex(X)
    co = bredon_cohomology(X, constant_system(OC, Z, CONTRAVARIANT))
    ho = bredon_homology(X, constant_system(OC, Z, COVARIANT))
    if _oracle_ok(Q):
        bd = [B.tolist() for B in Q.boundary]
        assert _pairs(co) == cohomology_oracle(bd, Q.sizes)
        assert _pairs(ho) == homology_oracle(bd, Q.sizes)
    else:
        assert co == Q.cohomology() and ho == Q.homology()


@given(seeds)
def test_concentrated_at_whole_group_is_fixed_set(seed):
    rng = random.Random(seed)
    K = rng.choice(SMALL)
    X = random_gcw(rng, K)
    OC = build_orbit_category(K)
    F = fixed_subcomplex(X, OC.objects[-1])
    co = bredon_cohomology(X, concentrated_system(OC, OC.names[-1], Z, CONTRAVARIANT))
    ho = bredon_homology(X, concentrated_system(OC, OC.names[-1], Z, COVARIANT))
    if _oracle_ok(F):
        bd = [B.tolist() for B in F.boundary]
        assert _pairs(co) == cohomology_oracle(bd, F.sizes)
        assert _pairs(ho) == homology_oracle(bd, F.sizes)
    else:
        assert co == F.cohomology() and ho == F.homology()


def _mod_p_cohomology(boundaries, sizes, p):
    """Universal coefficients: H^n(C; Z/p) = Hom(H_n, Z/p) + Ext(H_{n-1}, Z/p), p prime."""
    H = homology_oracle(boundaries, sizes)
    out = []
    for n, (free, tors) in enumerate(H):
        k = free + sum(1 for d in tors if gcd(d, p) == p)
        if n >= 1:
            k += sum(1 for d in H[n - 1][1] if gcd(d, p) == p)
        out.append((0, (p,) * k))
    return out


@given(seeds)
def test_constant_torsion_coefficients(seed):
    rng = random.Random(seed)
    K = rng.choice(SMALL)
    X = random_gcw(rng, K)
    Q = quotient_complex(X)
    if not _oracle_ok(Q):
        return
    OC = build_orbit_category(K)
    co = bredon_cohomology(X, constant_system(OC, FgAbelianGroup(0, (3,)), CONTRAVARIANT))
    assert _pairs(co) == _mod_p_cohomology([B.tolist() for B in Q.boundary], Q.sizes, 3)


@given(seeds)
def test_nat_and_coend_ranks_count_cell_orbits(seed):
    rng = random.Random(seed)
    K = rng.choice(SMALL)
    X = random_gcw(rng, K)
    OC = build_orbit_category(K)
    for n in range(X.dim + 1):
        F = chain_functor(X, OC, n)
        orbits = len(X.cell_orbits(n))
        assert nat_group(F, constant_system(OC, Z, CONTRAVARIANT)).group == FgAbelianGroup(orbits)
        assert coend_tensor(F, constant_system(OC, Z, COVARIANT)).group == FgAbelianGroup(orbits)


@given(seeds)
def test_complexes_square_to_zero(seed):
    rng = random.Random(seed)
    K = rng.choice(SMALL)
    X = random_gcw(rng, K)
    OC = build_orbit_category(K)
    assert bredon_cochain_complex(X, constant_system(OC, Z, CONTRAVARIANT)).check_square_zero()
    assert bredon_chain_complex(X, constant_system(OC, Z, COVARIANT)).check_square_zero()
