"""Seeded random instances: groupoids, spaces, bundles and complexes.

Everything takes a ``random.Random`` so a seed fixes the output.
"""

from __future__ import annotations

import random

from .bundles import GroupBundle, PrincipalBundle, extend_bundle, free_group_bundle
from .gcw import GCWComplex, assemble_from_cells
from .groupoid import FiniteGroupoid, isotropy, reorder_arrows, transitive_groupoid
from .groups import FiniteGroup, catalog
from .gspace import FiniteGSpace, GroupSet, coset_space, disjoint_union_sets, induce_space
from .orbitcat import subgroups
from .zlinalg import IntMatrix, kernel_basis

OBJECT_NAMES = "abcdefgh"


def random_group(rng: random.Random, max_order: int = 8) -> FiniteGroup:
    return rng.choice(catalog(max_order))[1]


def random_groupoid(rng: random.Random, max_objects: int = 4, max_group: int = 8) -> tuple[FiniteGroupoid, int]:
    """A transitive groupoid (objects x group x objects) with shuffled arrows, and a base object."""
    K = random_group(rng, max_group)
    n = rng.randint(1, max_objects)
    objects = [OBJECT_NAMES[i] for i in range(n)]
    rng.shuffle(objects)
    G = transitive_groupoid(objects, K)
    order = list(G.arrows)
    rng.shuffle(order)
    G = reorder_arrows(G, order)
    return G, rng.randrange(n)


def shuffle_space(rng: random.Random, Y: FiniteGSpace) -> FiniteGSpace:
    """Same space with points listed in a random order."""
    n = len(Y)
    perm = list(range(n))
    rng.shuffle(perm)          # old index -> new index
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p] = i
    act = [[perm[q] if q >= 0 else q for q in Y.act[inv[k]]] for k in range(n)]
    return FiniteGSpace(Y.groupoid, [Y.points[inv[k]] for k in range(n)],
                        [Y.anchor[inv[k]] for k in range(n)], act)


def random_space(rng: random.Random, G: FiniteGroupoid, b: int, max_points: int = 20,
                 trivial: bool | None = None) -> FiniteGSpace:
    """Induce a random K-set (a union of coset spaces K/H); ``trivial`` forces H = K."""
    K = isotropy(G, b).group
    subs = subgroups(K)
    per_point = len(G.objects)   # each point of a fibre orbit spreads over all objects
    budget = max(max_points // per_point, 1)
    parts = []
    used = 0
    for _ in range(rng.randint(1, 4)):
        if trivial:
            H = subs[-1]
        elif trivial is False and not parts:
            H = rng.choice(subs[:-1]) if len(subs) > 1 else subs[-1]
        else:
            H = rng.choice(subs)
        size = K.order // len(H)
        if used + size > budget and parts:
            break
        if used + size > budget:
            H, size = subs[-1], 1
        parts.append(coset_space(K, H))
        used += size
    Z = disjoint_union_sets(parts, [f"o{i}" for i in range(len(parts))])
    return shuffle_space(rng, induce_space(G, b, Z))


def random_group_bundle(rng: random.Random, K: FiniteGroup, max_base: int = 3) -> GroupBundle:
    m = rng.randint(1, max_base)
    base = [f"m{i}" for i in range(m)]
    B = free_group_bundle(K, base)
    # relabel each copy by a random element so the sections are not all the identity
    S = B.gset
    n = len(S)
    perm = list(range(n))
    rng.shuffle(perm)
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p] = i
    act = [[perm[q] for q in S.act[inv[k]]] for k in range(n)]
    gset = GroupSet(K, [S.points[inv[k]] for k in range(n)], act)
    return GroupBundle(gset, base, [B.projection[inv[k]] for k in range(n)])


def random_bundle(rng: random.Random, max_objects: int = 3, max_group: int = 4,
                  max_points: int = 16) -> tuple[FiniteGroupoid, int, GroupBundle, PrincipalBundle]:
    """A random group bundle Bb and a shuffled copy of its extension."""
    while True:
        G, b = random_groupoid(rng, max_objects, max_group)
        K = isotropy(G, b).group
        if len(G.objects) * K.order <= max_points:
            break
    max_base = max(1, max_points // (len(G.objects) * K.order))
    Bb = random_group_bundle(rng, K, min(max_base, 3))
    E = extend_bundle(G, b, Bb)
    Y = shuffle_space(rng, E.space)
    pos = {p: i for i, p in enumerate(E.space.points)}
    proj = [E.projection[pos[p]] for p in Y.points]
    return G, b, Bb, PrincipalBundle(Y, E.base, proj)


def random_gcw(rng: random.Random, K: FiniteGroup, max_dim: int = 2) -> GCWComplex:
    """Random cell orbits: vertices of random type, edges between fixed vertices,
    and 2-cells glued along integer cycles of fixed edges."""
    subs = subgroups(K)

    def names_of(H):
        return [K.names[h] for h in sorted(H)]

    layers = []
    for i in range(rng.randint(1, 3)):
        layers.append({"name": f"v{i}", "dim": 0, "type": names_of(rng.choice(subs))})
    X = assemble_from_cells(K, layers)
    if max_dim >= 1:
        for i in range(rng.randint(0, 3)):
            H = rng.choice(subs)
            fixed = X.fixed_cells(0, H)
            while not fixed:
                H = subs[0]
                fixed = X.fixed_cells(0, H)
            a, c = rng.choice(fixed), rng.choice(fixed)
            bd = [[X.cells[0][a], -1], [X.cells[0][c], 1]] if a != c else []
            layers.append({"name": f"e{i}", "dim": 1, "type": names_of(H), "boundary": bd})
        X = assemble_from_cells(K, layers)
    if max_dim >= 2 and X.dim >= 1:
        for i in range(rng.randint(0, 2)):
            H = rng.choice(subs)
            edges = X.fixed_cells(1, H)
            if not edges:
                continue
            D = X.boundary[0].select_columns(edges)
            Z = kernel_basis(D)
            if Z.cols == 0:
                continue
            coeffs = [rng.randint(-2, 2) for _ in range(Z.cols)]
            if not any(coeffs):
                coeffs[0] = 1
            chain = Z @ IntMatrix.from_columns([coeffs], Z.cols)
            bd = [[X.cells[1][edges[r]], chain[r, 0]] for r in range(len(edges)) if chain[r, 0]]
            layers.append({"name": f"f{i}", "dim": 2, "type": names_of(H), "boundary": bd})
        X = assemble_from_cells(K, layers)
    return X
