"""Finite groupoids as validated composition tables.

Convention: ``compose(f, g)`` is f after g and needs ``source(f) == target(g)``.
Object and arrow names are strings; internally everything is a dense index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .errors import Certificate, ValidationError, Violation, fail
from .groups import FiniteGroup

NONE = -1


class FiniteGroupoid:
    """Objects, arrows and the structure maps, all as index tables.

    ``mul[f][g]`` is the index of f after g, or ``NONE`` when not composable.
    Construction runs every axiom check and raises ``ValidationError``.
    """

    def __init__(self, objects: Sequence[str], arrows: Sequence[str], source: Sequence[int],
                 target: Sequence[int], ident: Sequence[int], inv: Sequence[int],
                 mul: Sequence[Sequence[int]]):
        self.objects = tuple(objects)
        self.arrows = tuple(arrows)
        self.source = tuple(source)
        self.target = tuple(target)
        self.ident = tuple(ident)
        self.inv = tuple(inv)
        self.mul = tuple(tuple(r) for r in mul)
        self._obj = {n: i for i, n in enumerate(self.objects)}
        self._arr = {n: i for i, n in enumerate(self.arrows)}
        self.by_target = tuple(tuple(f for f in range(len(self.arrows)) if self.target[f] == x)
                               for x in range(len(self.objects)))
        self.by_source = tuple(tuple(f for f in range(len(self.arrows)) if self.source[f] == x)
                               for x in range(len(self.objects)))
        problems = _axiom_violations(self)
        if problems:
            raise ValidationError("groupoid", problems)

    # -- construction from names ------------------------------------------------
    @classmethod
    def from_tables(cls, objects: Sequence[str], arrows: Sequence[Sequence[str]],
                    identity: Mapping[str, str], inverse: Optional[Mapping[str, str]],
                    compose: Iterable[Sequence[str]]) -> "FiniteGroupoid":
        """``arrows`` are (name, source, target); ``compose`` holds (f, g, f after g).

        If ``inverse`` is None it is read off the composition table.
        """
        bad: list[Violation] = []
        objects = list(objects)
        obj = {n: i for i, n in enumerate(objects)}
        if len(obj) != len(objects):
            bad.append(Violation("duplicate_name", "duplicate object names"))
        names = [a[0] for a in arrows]
        arr = {n: i for i, n in enumerate(names)}
        if len(arr) != len(names):
            bad.append(Violation("duplicate_name", "duplicate arrow names"))
        src, tgt = [], []
        for name, s, t in arrows:
            if s not in obj or t not in obj:
                bad.append(Violation("unknown_object", f"arrow {name} has unknown endpoint",
                                     [name, s, t]))
            src.append(obj.get(s, 0))
            tgt.append(obj.get(t, 0))
        ident = []
        for x in objects:
            i = identity.get(x)
            if i not in arr:
                bad.append(Violation("identity", f"object {x} has no identity arrow", [x, i]))
                ident.append(NONE)
            else:
                ident.append(arr[i])
        for x in identity:
            if x not in obj:
                bad.append(Violation("unknown_object", f"identity given for unknown object {x}", [x]))
        n = len(names)
        mul = [[NONE] * n for _ in range(n)]
        for f, g, fg in compose:
            if f not in arr or g not in arr or fg not in arr:
                bad.append(Violation("unknown_arrow", f"composite {fg} = {f}.{g} names an unknown arrow",
                                     [f, g, fg]))
                continue
            i, j, k = arr[f], arr[g], arr[fg]
            if src[i] != tgt[j]:
                bad.append(Violation("composite_type", f"{f}.{g} given but s({f}) != t({g})", [f, g, fg]))
                continue
            if mul[i][j] != NONE and mul[i][j] != k:
                bad.append(Violation("duplicate_composite", f"{f}.{g} given twice with different values",
                                     [f, g, names[mul[i][j]], fg]))
                continue
            mul[i][j] = k
        if bad:
            raise ValidationError("groupoid", bad)
        if inverse is None:
            inv = []
            for f in range(n):
                cands = [h for h in range(n) if mul[f][h] == ident[src[h]] != NONE
                         and src[f] == tgt[h] and mul[h][f] == ident[src[f]]]
                inv.append(cands[0] if cands else NONE)
        else:
            inv = []
            for f in names:
                h = inverse.get(f)
                if h not in arr:
                    bad.append(Violation("inverse", f"arrow {f} has no inverse", [f, h]))
                    inv.append(NONE)
                else:
                    inv.append(arr[h])
            if bad:
                raise ValidationError("groupoid", bad)
        return cls(objects, names, src, tgt, ident, inv, mul)

    # -- queries ---------------------------------------------------------------
    def __repr__(self) -> str:
        return f"FiniteGroupoid(objects={len(self.objects)}, arrows={len(self.arrows)})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteGroupoid) and self.objects == other.objects
                and self.arrows == other.arrows and self.source == other.source
                and self.target == other.target and self.mul == other.mul)

    def __hash__(self) -> int:
        return hash((self.objects, self.arrows, self.mul))

    def obj(self, name: str) -> int:
        try:
            return self._obj[name]
        except KeyError:
            raise KeyError(f"unknown object {name!r}") from None

    def arr(self, name: str) -> int:
        try:
            return self._arr[name]
        except KeyError:
            raise KeyError(f"unknown arrow {name!r}") from None

    def compose(self, f: int, g: int) -> int:
        h = self.mul[f][g]
        if h == NONE:
            raise ValueError(f"{self.arrows[f]} and {self.arrows[g]} are not composable")
        return h

    def hom(self, x: int, y: int) -> list[int]:
        """Arrows x -> y."""
        return [f for f in self.by_source[x] if self.target[f] == y]

    def compose_names(self, f: str, g: str) -> str:
        return self.arrows[self.compose(self.arr(f), self.arr(g))]

    def triples(self) -> list[list[str]]:
        A = self.arrows
        return [[A[f], A[g], A[self.mul[f][g]]] for f in range(len(A)) for g in range(len(A))
                if self.mul[f][g] != NONE]

    def to_json(self) -> dict:
        O, A = self.objects, self.arrows
        return {
            "kind": "groupoid",
            "version": 1,
            "objects": list(O),
            "arrows": [[A[f], O[self.source[f]], O[self.target[f]]] for f in range(len(A))],
            "identity": {O[x]: A[self.ident[x]] for x in range(len(O))},
            "inverse": {A[f]: A[self.inv[f]] for f in range(len(A))},
            "compose": self.triples(),
        }


def _axiom_violations(G: FiniteGroupoid) -> list[Violation]:
    A = G.arrows
    na, no = len(A), len(G.objects)
    out: list[Violation] = []
    if len(G.source) != na or len(G.target) != na or len(G.inv) != na or len(G.mul) != na:
        return [Violation("table_shape", "arrow tables have inconsistent lengths")]
    if len(G.ident) != no:
        return [Violation("table_shape", "identity table length != number of objects")]
    if len(G._obj) != no or len(G._arr) != na:
        out.append(Violation("duplicate_name", "duplicate object or arrow names"))
    for x in range(no):
        i = G.ident[x]
        if not 0 <= i < na or G.source[i] != x or G.target[i] != x:
            out.append(Violation("identity", f"i({G.objects[x]}) is not a loop at {G.objects[x]}",
                                 [G.objects[x]]))
    if out:
        return out
    for f in range(na):
        for g in range(na):
            h = G.mul[f][g]
            if G.source[f] == G.target[g]:
                if h == NONE:
                    out.append(Violation("missing_composite", f"{A[f]}.{A[g]} is undefined", [A[f], A[g]]))
                elif G.source[h] != G.source[g] or G.target[h] != G.target[f]:
                    out.append(Violation("composite_type", f"{A[f]}.{A[g]} = {A[h]} has the wrong "
                                         "source or target", [A[f], A[g], A[h]]))
            elif h != NONE:
                out.append(Violation("composite_type", f"{A[f]}.{A[g]} defined but not composable",
                                     [A[f], A[g], A[h]]))
    for f in range(na):
        if G.mul[f][G.ident[G.source[f]]] != f or G.mul[G.ident[G.target[f]]][f] != f:
            out.append(Violation("unit", f"identity laws fail for {A[f]}", [A[f]]))
    mul = G.mul
    for f in range(na):
        for g in G.by_target[G.source[f]]:
            fg = mul[f][g]
            for h in G.by_target[G.source[g]]:
                gh = mul[g][h]
                left = mul[fg][h] if fg != NONE else NONE
                right = mul[f][gh] if gh != NONE else NONE
                if left == NONE or left != right:
                    out.append(Violation("associativity", f"({A[f]}.{A[g]}).{A[h]} != "
                                         f"{A[f]}.({A[g]}.{A[h]})", [A[f], A[g], A[h]]))
    for f in range(na):
        h = G.inv[f]
        ok = (0 <= h < na and G.source[h] == G.target[f] and G.target[h] == G.source[f]
              and mul[f][h] == G.ident[G.target[f]] and mul[h][f] == G.ident[G.source[f]])
        if not ok:
            out.append(Violation("inverse", f"{A[f]} has no valid inverse",
                                 [A[f], A[h] if 0 <= h < na else None]))
    return out


def validate_groupoid(raw: Mapping) -> FiniteGroupoid:
    """Build a groupoid from its interchange dict (see ``to_json``)."""
    try:
        objects = list(raw["objects"])
        arrows = [tuple(a) for a in raw["arrows"]]
        identity = dict(raw["identity"])
        compose = [tuple(c) for c in raw["compose"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError("groupoid", [Violation("schema", f"missing or malformed field: {exc}")])
    if any(len(a) != 3 for a in arrows) or any(len(c) != 3 for c in compose):
        raise ValidationError("groupoid", [Violation("schema", "arrows and compose entries are triples")])
    inverse = raw.get("inverse")
    return FiniteGroupoid.from_tables(objects, arrows, identity,
                                      dict(inverse) if inverse is not None else None, compose)


# -- orbits and transitivity ----------------------------------------------------

def orbit_space_objects(G: FiniteGroupoid) -> list[list[str]]:
    """Connected components of the object set, each sorted by object index."""
    parent = list(range(len(G.objects)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in range(len(G.arrows)):
        a, b = find(G.source[f]), find(G.target[f])
        if a != b:
            parent[max(a, b)] = min(a, b)
    classes: dict[int, list[str]] = {}
    for x in range(len(G.objects)):
        classes.setdefault(find(x), []).append(G.objects[x])
    return [classes[k] for k in sorted(classes)]


def is_transitive(G: FiniteGroupoid) -> bool:
    return len(orbit_space_objects(G)) == 1


def _require_transitive(G: FiniteGroupoid) -> None:
    if not is_transitive(G):
        raise ValidationError("groupoid", [Violation("not_transitive", "groupoid is not transitive",
                                                     orbit_space_objects(G))])


def _base(G: FiniteGroupoid, b) -> int:
    if isinstance(b, str):
        return G.obj(b)
    if not 0 <= b < len(G.objects):
        raise KeyError(f"unknown object index {b}")
    return b


# -- isotropy and target fibre --------------------------------------------------

@dataclass(frozen=True)
class IsotropyGroup:
    """Self-arrows at ``base``; ``group`` element k is arrow ``arrows[k]``."""

    groupoid: FiniteGroupoid
    base: int
    arrows: tuple
    group: FiniteGroup

    def local(self, arrow: int) -> int:
        return self.arrows.index(arrow)

    @property
    def names(self) -> tuple:
        return self.group.names


def isotropy(G: FiniteGroupoid, b) -> IsotropyGroup:
    b = _base(G, b)
    loops = tuple(G.hom(b, b))
    pos = {f: k for k, f in enumerate(loops)}
    mul = [[pos[G.mul[f][g]] for g in loops] for f in loops]
    # FiniteGroup re-checks closure, identity, inverses and associativity
    grp = FiniteGroup([G.arrows[f] for f in loops], mul)
    if loops[grp.identity] != G.ident[b]:
        raise ValidationError("groupoid", [Violation("identity", "isotropy identity is not i(b)")])
    return IsotropyGroup(G, b, loops, grp)


@dataclass(frozen=True)
class TargetFibre:
    """Arrows with target ``base``.

    Left isotropy action ``h . f = h after f`` and right groupoid action
    ``f . g = f after g`` (defined when s(f) = t(g)).
    """

    groupoid: FiniteGroupoid
    base: int
    arrows: tuple

    def left(self, h: int, f: int) -> int:
        return self.groupoid.compose(h, f)

    def right(self, f: int, g: int) -> int:
        return self.groupoid.compose(f, g)

    @property
    def names(self) -> list[str]:
        return [self.groupoid.arrows[f] for f in self.arrows]


def target_fibre(G: FiniteGroupoid, b) -> TargetFibre:
    b = _base(G, b)
    return TargetFibre(G, b, tuple(G.by_target[b]))


def check_cosets_match_objects(G: FiniteGroupoid, b) -> Certificate:
    """Isotropy cosets of the target fibre correspond to objects via the source map."""
    _require_transitive(G)
    b = _base(G, b)
    K = isotropy(G, b)
    fib = target_fibre(G, b)
    classes: dict[frozenset, int] = {}
    for f in fib.arrows:
        cls = frozenset(G.mul[h][f] for h in K.arrows)
        classes.setdefault(cls, G.source[f])
    cls_list = sorted(classes, key=lambda c: min(c))
    # well defined on classes, bijective onto objects
    for c in cls_list:
        srcs = {G.source[f] for f in c}
        if len(srcs) != 1:
            return fail("cosets_objects", "source not constant on an isotropy coset",
                        coset=sorted(G.arrows[f] for f in c))
    image = [classes[c] for c in cls_list]
    if sorted(image) != list(range(len(G.objects))):
        return fail("cosets_objects", "source map on cosets is not a bijection onto objects",
                    image=[G.objects[x] for x in image])
    # equivariance: [f].g = [f g] maps to s(g) = (s f).g in the object space
    for c in cls_list:
        f = min(c)
        for g in G.by_target[G.source[f]]:
            fg = G.mul[f][g]
            if G.source[fg] != G.source[g]:
                return fail("cosets_objects", "not equivariant", pair=[G.arrows[f], G.arrows[g]])
    mapping = {"[" + ",".join(sorted(G.arrows[f] for f in c)) + "]": G.objects[classes[c]]
               for c in cls_list}
    return Certificate("cosets_objects", True, data={"map": mapping})


def conjugation_isomorphism(G: FiniteGroupoid, g: int) -> Certificate:
    """For g: b -> b', check h |-> g h g^-1 is an isomorphism of isotropy groups."""
    b, b2 = G.source[g], G.target[g]
    K1, K2 = isotropy(G, b), isotropy(G, b2)
    gi = G.inv[g]
    phi = {h: G.mul[G.mul[g][h]][gi] for h in K1.arrows}
    if sorted(phi.values()) != sorted(K2.arrows):
        return fail("conjugation", "not a bijection", arrow=G.arrows[g])
    for h1, h2 in itertools.product(K1.arrows, repeat=2):
        if phi[G.mul[h1][h2]] != G.mul[phi[h1]][phi[h2]]:
            return fail("conjugation", "not a homomorphism", pair=[G.arrows[h1], G.arrows[h2]])
    return Certificate("conjugation", True,
                       data={"map": {G.arrows[h]: G.arrows[phi[h]] for h in K1.arrows}})


# -- constructors ---------------------------------------------------------------

def _from_closed_form(objects, arrow_keys, name, source, target, compose_key, inverse_key,
                      identity_key) -> FiniteGroupoid:
    idx = {k: i for i, k in enumerate(arrow_keys)}
    obj = {o: i for i, o in enumerate(objects)}
    src = [obj[source(k)] for k in arrow_keys]
    tgt = [obj[target(k)] for k in arrow_keys]
    n = len(arrow_keys)
    mul = [[NONE] * n for _ in range(n)]
    for i, f in enumerate(arrow_keys):
        for j, g in enumerate(arrow_keys):
            if src[i] == tgt[j]:
                mul[i][j] = idx[compose_key(f, g)]
    ident = [idx[identity_key(o)] for o in objects]
    inv = [idx[inverse_key(k)] for k in arrow_keys]
    return FiniteGroupoid([str(o) for o in objects], [name(k) for k in arrow_keys], src, tgt,
                          ident, inv, mul)


def pair_groupoid(objects: Sequence[str]) -> FiniteGroupoid:
    """One arrow (p, q): q -> p for every ordered pair."""
    keys = [(p, q) for p in objects for q in objects]
    return _from_closed_form(list(objects), keys, lambda k: f"({k[0]},{k[1]})",
                             lambda k: k[1], lambda k: k[0],
                             lambda f, g: (f[0], g[1]), lambda k: (k[1], k[0]),
                             lambda o: (o, o))


def group_as_groupoid(K: FiniteGroup, obj: str = "*") -> FiniteGroupoid:
    return FiniteGroupoid([obj], list(K.names), [0] * K.order, [0] * K.order,
                          [K.identity], list(K.inverse), K.mul)


def transitive_groupoid(objects: Sequence[str], K: FiniteGroup,
                        names: Optional[Mapping] = None) -> FiniteGroupoid:
    """Arrows (p, q, k): q -> p with (p,q,g).(q,r,h) = (p,r,gh).

    Every finite transitive groupoid is isomorphic to one of these.
    ``names`` optionally maps (p, q, k) to an arrow name.
    """
    objects = list(objects)
    keys = [(p, q, k) for p in objects for q in objects for k in range(K.order)]
    if names is None:
        single = len(objects) == 1

        def name(key):
            p, q, k = key
            return K.names[k] if single else f"{p}<{q}:{K.names[k]}"
    else:
        def name(key):
            return names[key]
    return _from_closed_form(objects, keys, name, lambda a: a[1], lambda a: a[0],
                             lambda f, g: (f[0], g[1], K.mul[f[2]][g[2]]),
                             lambda a: (a[1], a[0], K.inverse[a[2]]),
                             lambda o: (o, o, K.identity))


def action_groupoid(K: FiniteGroup, points: Sequence[str], act: Sequence[Sequence[int]]) -> FiniteGroupoid:
    """Left action groupoid: arrow (g, x): x -> g.x, with ``act[g][x]`` the index of g.x."""
    points = list(points)
    keys = [(g, x) for g in range(K.order) for x in range(len(points))]
    for g in range(K.order):
        for h in range(K.order):
            for x in range(len(points)):
                if act[K.mul[g][h]][x] != act[g][act[h][x]]:
                    raise ValidationError("groupoid", [Violation("action", "not a left action",
                                                                 [K.names[g], K.names[h], points[x]])])
    return _from_closed_form(points, keys, lambda k: f"({K.names[k[0]]},{points[k[1]]})",
                             lambda k: points[k[1]], lambda k: points[act[k[0]][k[1]]],
                             lambda f, g: (K.mul[f[0]][g[0]], g[1]),
                             lambda k: (K.inverse[k[0]], act[k[0]][k[1]]),
                             lambda o: (K.identity, points.index(o)))


def disjoint_union(G: FiniteGroupoid, H: FiniteGroupoid, tags=("1", "2")) -> FiniteGroupoid:
    no, na = len(G.objects), len(G.arrows)
    objects = [f"{o}.{tags[0]}" for o in G.objects] + [f"{o}.{tags[1]}" for o in H.objects]
    arrows = [f"{a}.{tags[0]}" for a in G.arrows] + [f"{a}.{tags[1]}" for a in H.arrows]
    src = list(G.source) + [s + no for s in H.source]
    tgt = list(G.target) + [t + no for t in H.target]
    ident = list(G.ident) + [i + na for i in H.ident]
    inv = list(G.inv) + [i + na for i in H.inv]
    n = len(arrows)
    mul = [[NONE] * n for _ in range(n)]
    for f in range(na):
        for g in range(na):
            mul[f][g] = G.mul[f][g]
    for f in range(len(H.arrows)):
        for g in range(len(H.arrows)):
            h = H.mul[f][g]
            mul[f + na][g + na] = h + na if h != NONE else NONE
    return FiniteGroupoid(objects, arrows, src, tgt, ident, inv, mul)


def double_flip() -> FiniteGroupoid:
    """Two objects a, b, each with a Z/2 of loops, and two arrows x, y: a -> b.

    s = y^-1 x and t = y x^-1 are the non-identity loops, s^2 = u and t^2 = v.
    """
    from .groups import cyclic
    names = {
        ("a", "a", 0): "u", ("a", "a", 1): "s",
        ("b", "b", 0): "v", ("b", "b", 1): "t",
        ("b", "a", 0): "x", ("b", "a", 1): "y",
        ("a", "b", 0): "x^-1", ("a", "b", 1): "y^-1",
    }
    G = transitive_groupoid(["a", "b"], cyclic(2), names)
    return reorder_arrows(G, ["u", "v", "x", "y", "x^-1", "y^-1", "s", "t"])


def reorder_arrows(G: FiniteGroupoid, order: Sequence[str]) -> FiniteGroupoid:
    """Same groupoid with arrows listed in ``order`` (a permutation of the names)."""
    perm = [G.arr(a) for a in order]
    if sorted(perm) != list(range(len(G.arrows))):
        raise ValueError("order must list every arrow exactly once")
    pos = {old: new for new, old in enumerate(perm)}
    mul = [[pos[G.mul[f][g]] if G.mul[f][g] != NONE else NONE for g in perm] for f in perm]
    return FiniteGroupoid(G.objects, list(order), [G.source[f] for f in perm],
                          [G.target[f] for f in perm], [pos[i] for i in G.ident],
                          [pos[G.inv[f]] for f in perm], mul)
