"""Subgroups, canonical orbits and the orbit category of the isotropy group.

A morphism H -> K of the orbit category is a right coset K.a with
a H a^-1 contained in K; on coset spaces it is H.g |-> K.a.g.  Composition:
(L.c) after (K.a) = L.(c a).  This is the inverse-image form of the
left-coset description gK with g^-1 H g in K (send g to g^-1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import Certificate, ValidationError, Violation, fail
from .groupoid import NONE, FiniteGroupoid, _require_transitive, isotropy, target_fibre
from .groups import FiniteGroup
from .gspace import (FiniteGSpace, FibreSpace, enumerate_equivariant_maps, map_violations,
                     restrict_to_fibre)

Subgroup = frozenset


def subgroups(K: FiniteGroup) -> list[Subgroup]:
    """All subgroups, sorted by order and then by sorted element indices."""
    found = {frozenset([K.identity])}
    frontier = list(found)
    while frontier:
        nxt = []
        for S in frontier:
            for g in range(K.order):
                if g not in S:
                    T = K.closure(list(S) + [g])
                    if T not in found:
                        found.add(T)
                        nxt.append(T)
        frontier = nxt
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def conjugate(K: FiniteGroup, g: int, S: Iterable[int]) -> Subgroup:
    return frozenset(K.conj(g, s) for s in S)


def conjugacy_classes_of_subgroups(K: FiniteGroup) -> list[list[Subgroup]]:
    """Classes in the order of their first member in ``subgroups``."""
    out: list[list[Subgroup]] = []
    seen = set()
    for S in subgroups(K):
        if S in seen:
            continue
        cls = sorted({conjugate(K, g, S) for g in range(K.order)}, key=lambda T: sorted(T))
        seen.update(cls)
        out.append(cls)
    return out


def subgroup_name(K: FiniteGroup, S: Subgroup) -> str:
    """'e', 'G', or <gens> with a lexicographically least minimal generating set."""
    if len(S) == 1:
        return "e"
    if len(S) == K.order:
        return "G"
    elems = sorted(S)
    for r in range(1, len(elems) + 1):
        for gens in itertools.combinations(elems, r):
            if K.closure(gens) == S:
                return "<" + ",".join(K.names[g] for g in gens) + ">"
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class Morphism:
    source: int     # object index
    target: int
    rep: int        # least element of the coset target.rep
    name: str


class OrbitCategory:
    """One object per conjugacy class of subgroups; morphisms are explicit cosets."""

    def __init__(self, group: FiniteGroup):
        K = group
        self.group = K
        self.objects: list[Subgroup] = [cls[0] for cls in conjugacy_classes_of_subgroups(K)]
        self.names = [subgroup_name(K, S) for S in self.objects]
        self._obj = {n: i for i, n in enumerate(self.names)}
        self.morphisms: list[Morphism] = []
        self._hom: dict[tuple[int, int], list[int]] = {}
        self._index: dict[tuple[int, int, int], int] = {}
        for i, H in enumerate(self.objects):
            for j, L in enumerate(self.objects):
                ids = []
                for a in range(K.order):
                    coset = [K.mul[l][a] for l in L]
                    if min(coset) != a:
                        continue
                    if all(K.conj(a, h) in L for h in H):
                        m = len(self.morphisms)
                        self.morphisms.append(Morphism(i, j, a, f"{self.names[i]}->{self.names[j]}:{K.names[a]}"))
                        self._index[(i, j, a)] = m
                        ids.append(m)
                self._hom[(i, j)] = ids
        self._mname = {m.name: k for k, m in enumerate(self.morphisms)}
        n = len(self.morphisms)
        self.comp = [[NONE] * n for _ in range(n)]
        for k2, m2 in enumerate(self.morphisms):
            for k1, m1 in enumerate(self.morphisms):
                if m1.target == m2.source:
                    self.comp[k2][k1] = self._lookup(m1.source, m2.target, K.mul[m2.rep][m1.rep])
        self.identity = [self._lookup(i, i, K.identity) for i in range(len(self.objects))]

    def _lookup(self, i: int, j: int, a: int) -> int:
        L = self.objects[j]
        rep = min(self.group.mul[l][a] for l in L)
        return self._index[(i, j, rep)]

    def __repr__(self) -> str:
        return f"OrbitCategory(objects={self.names}, morphisms={len(self.morphisms)})"

    def obj(self, name: str) -> int:
        try:
            return self._obj[name]
        except KeyError:
            raise KeyError(f"unknown orbit-category object {name!r}; have {self.names}") from None

    def morphism(self, name: str) -> int:
        try:
            return self._mname[name]
        except KeyError:
            raise KeyError(f"unknown morphism {name!r}") from None

    def hom(self, i: int, j: int) -> list[int]:
        return self._hom[(i, j)]

    def hom_sizes(self) -> dict[str, int]:
        return {f"{self.names[i]}->{self.names[j]}": len(self.hom(i, j))
                for i in range(len(self.objects)) for j in range(len(self.objects))}

    def composition_triples(self) -> list[list[str]]:
        M = self.morphisms
        return [[M[a].name, M[b].name, M[self.comp[a][b]].name]
                for a in range(len(M)) for b in range(len(M)) if self.comp[a][b] != NONE]

    def check_axioms(self) -> Certificate:
        n = len(self.morphisms)
        M = self.morphisms
        for k, m in enumerate(M):
            if self.comp[k][self.identity[m.source]] != k or self.comp[self.identity[m.target]][k] != k:
                return fail("orbitcat_axioms", "identity law fails", morphism=m.name)
        for a, b, c in itertools.product(range(n), repeat=3):
            if M[c].target == M[b].source and M[b].target == M[a].source:
                if self.comp[self.comp[a][b]][c] != self.comp[a][self.comp[b][c]]:
                    return fail("orbitcat_axioms", "associativity fails",
                                triple=[M[a].name, M[b].name, M[c].name])
        return Certificate("orbitcat_axioms", True)

    def to_json(self) -> dict:
        K = self.group
        return {
            "objects": [{"name": self.names[i], "order": len(S), "elements": [K.names[g] for g in sorted(S)]}
                        for i, S in enumerate(self.objects)],
            "morphisms": [m.name for m in self.morphisms],
            "hom_sizes": self.hom_sizes(),
            "compose": self.composition_triples(),
        }


def build_orbit_category(K: FiniteGroup) -> OrbitCategory:
    return OrbitCategory(K)


# -- canonical orbits -------------------------------------------------------------

def canonical_orbit(G: FiniteGroupoid, b, H: Iterable[int]) -> FiniteGSpace:
    """G^b / H: classes H.f of the target fibre (H given by isotropy-local indices).

    Point 0 is the class of i(b); other classes are named by their first arrow.
    """
    _require_transitive(G)
    b = G.obj(b) if isinstance(b, str) else b
    iso = isotropy(G, b)
    H = frozenset(H)
    if not iso.group.is_subgroup(H):
        raise ValidationError("subgroup", [Violation("subgroup", "not a subgroup of the isotropy group",
                                                     sorted(iso.group.names[h] for h in H))])
    harrows = [iso.arrows[h] for h in sorted(H)]
    where: dict[int, int] = {}
    reps = []
    # the class of i(b) comes first, so point 0 is the base point
    fib = target_fibre(G, b).arrows
    for f in [G.ident[b]] + [f for f in fib if f != G.ident[b]]:
        if f in where:
            continue
        for h in harrows:
            where[G.mul[h][f]] = len(reps)
        reps.append(f)
    act = [[where[G.mul[f][g]] if G.mul[f][g] != NONE else NONE for g in range(len(G.arrows))]
           for f in reps]
    return FiniteGSpace(G, [f"[{G.arrows[f]}]" for f in reps], [G.source[f] for f in reps], act)


def decompose_transitive(X: FiniteGSpace, x: int = 0) -> Certificate:
    """For a transitive space, [f] |-> x.f is an isomorphism from G^b/H, H the stabilizer of x."""
    G = X.groupoid
    if len(X.orbits()) != 1:
        return fail("transitive_decomposition", "space is not transitive", orbits=len(X.orbits()))
    b = X.anchor[x]
    iso = isotropy(G, b)
    H = [k for k, h in enumerate(iso.arrows) if X.act[x][h] == x]
    O = canonical_orbit(G, b, H)
    phi = []
    for name in O.points:
        f = G.arr(name[1:-1])
        phi.append(X.act[x][f])
    if sorted(phi) != list(range(len(X))):
        return fail("transitive_decomposition", "not a bijection", image=phi)
    bad = map_violations(O, X, phi)
    if bad:
        return fail("transitive_decomposition", "not equivariant", violation=bad[0].to_json())
    return Certificate("transitive_decomposition", True, data={"stabilizer": [iso.group.names[h] for h in H],
                                                 "map": {O.points[i]: X.points[p] for i, p in enumerate(phi)}})


def fixed_points(X, H: Iterable[int]) -> list[int]:
    """H-fixed points of a fibre (FibreSpace) or of a GroupSet, as local indices."""
    S = X.gset if isinstance(X, FibreSpace) else X
    H = list(H)
    return [p for p in range(len(S)) if all(S.act[p][h] == p for h in H)]


def verify_c2(X: FiniteGSpace, b, subgroup_list: Optional[Sequence[Subgroup]] = None) -> Certificate:
    """|Map_G(G^b/H, X)| = |X_b^H| for every subgroup H, via evaluation at the class of i(b)."""
    G = X.groupoid
    _require_transitive(G)
    b = G.obj(b) if isinstance(b, str) else b
    iso = isotropy(G, b)
    fib = restrict_to_fibre(X, b)
    counts = {}
    for H in subgroup_list if subgroup_list is not None else subgroups(iso.group):
        O = canonical_orbit(G, b, H)
        maps = enumerate_equivariant_maps(O, X)
        values = sorted(m.mapping[0] for m in maps)
        fixed = sorted(fib.points[p] for p in fixed_points(fib, H))
        name = subgroup_name(iso.group, H)
        if values != fixed:
            return fail("c2", "evaluation is not a bijection onto the fixed points", subgroup=name,
                        maps=len(maps), fixed=len(fixed))
        counts[name] = len(fixed)
    return Certificate("c2", True, data={"counts": counts})


def verify_orbitcat_iso(G: FiniteGroupoid, b) -> Certificate:
    """Equivariant maps between canonical orbits match the coset morphisms, compatibly with composition."""
    _require_transitive(G)
    b = G.obj(b) if isinstance(b, str) else b
    iso = isotropy(G, b)
    K = iso.group
    OC = build_orbit_category(K)
    ax = OC.check_axioms()
    if not ax:
        return ax
    spaces = [canonical_orbit(G, b, H) for H in OC.objects]
    realized: dict[int, tuple] = {}
    for i, j in itertools.product(range(len(OC.objects)), repeat=2):
        Oi, Oj = spaces[i], spaces[j]
        maps = {m.mapping for m in enumerate_equivariant_maps(Oi, Oj)}
        mine = set()
        for k in OC.hom(i, j):
            a = iso.arrows[OC.morphisms[k].rep]
            m = tuple(_class_of(G, Oj, G.mul[a][G.arr(p[1:-1])]) for p in Oi.points)
            realized[k] = m
            mine.add(m)
        if len(mine) != len(OC.hom(i, j)) or mine != maps:
            return fail("orbitcat", "hom-set mismatch", source=OC.names[i], target=OC.names[j],
                        cosets=len(OC.hom(i, j)), maps=len(maps))
    for k2, k1 in itertools.product(range(len(OC.morphisms)), repeat=2):
        k = OC.comp[k2][k1]
        if k == NONE:
            continue
        m1, m2 = realized[k1], realized[k2]
        if tuple(m2[q] for q in m1) != realized[k]:
            return fail("orbitcat", "composition not preserved",
                        pair=[OC.morphisms[k2].name, OC.morphisms[k1].name])
    return Certificate("orbitcat", True, data={"objects": OC.names, "hom_sizes": OC.hom_sizes()})


def _class_of(G: FiniteGroupoid, O: FiniteGSpace, f: int) -> int:
    """Point of a canonical orbit containing the arrow f (point 0 is the class of i(b))."""
    return O.act[0][f]
