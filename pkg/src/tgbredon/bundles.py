"""Principal bundles over finite discrete bases.

A bundle is a right G-space P with a projection to a finite set M.  Over a
discrete base, local sections amount to surjectivity of the projection, and
the shear map (p, g) |-> (p, p.g) must be a bijection onto P x_M P.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .errors import Certificate, InvariantBreach, ValidationError, Violation
from .groupoid import FiniteGroupoid, NONE, _require_transitive, isotropy
from .groups import FiniteGroup
from .gspace import (FiniteGSpace, GroupSet, _induce, find_isomorphism, restrict_to_fibre,
                     validate_gspace)


def _shear_violations(n, base_names, proj, names, arrows_for, act, arrow_name) -> list[Violation]:
    """Shared checks for groupoid and group bundles.

    ``arrows_for(p)`` lists the arrow indices that may act on p; ``act(p, g)``
    gives p.g.
    """
    out = []
    hit = set(proj)
    for m, name in enumerate(base_names):
        if m not in hit:
            out.append(Violation("not_surjective", f"nothing projects to {name}", [name]))
    for p in range(n):
        for g in arrows_for(p):
            q = act(p, g)
            if proj[q] != proj[p]:
                out.append(Violation("not_invariant", f"{names[p]}.{arrow_name(g)} leaves the projection fibre",
                                     [names[p], arrow_name(g)]))
    if out:
        return out
    for p in range(n):
        seen = {}
        for g in arrows_for(p):
            q = act(p, g)
            if q in seen:
                out.append(Violation("shear_not_injective",
                                     f"({names[p]}, {arrow_name(seen[q])}) and ({names[p]}, {arrow_name(g)}) "
                                     f"both go to ({names[p]}, {names[q]})",
                                     [[names[p], arrow_name(seen[q])], [names[p], arrow_name(g)]]))
            else:
                seen[q] = g
        for q in range(n):
            if proj[q] == proj[p] and q not in seen:
                out.append(Violation("shear_not_surjective",
                                     f"({names[p]}, {names[q]}) is not of the form (p, p.g)",
                                     [names[p], names[q]]))
    return out


class PrincipalBundle:
    """A principal bundle for a finite groupoid: space, base names, projection (point -> base index)."""

    def __init__(self, space: FiniteGSpace, base: Sequence[str], projection: Sequence[int]):
        self.space = space
        self.base = tuple(base)
        self.projection = tuple(projection)
        problems = bundle_violations(self)
        if problems:
            raise ValidationError("bundle", problems)

    @property
    def groupoid(self) -> FiniteGroupoid:
        return self.space.groupoid

    def __len__(self) -> int:
        return len(self.space)

    def fibre_over(self, m: int) -> list[int]:
        return [p for p, q in enumerate(self.projection) if q == m]

    def to_json(self) -> dict:
        Y = self.space
        d = Y.to_json(with_groupoid=True)
        d["kind"] = "bundle"
        d["base"] = list(self.base)
        d["projection"] = {Y.points[p]: self.base[m] for p, m in enumerate(self.projection)}
        return d


def bundle_violations(B: PrincipalBundle) -> list[Violation]:
    Y, G = B.space, B.space.groupoid
    if len(B.projection) != len(Y) or any(not 0 <= m < len(B.base) for m in B.projection):
        return [Violation("table_shape", "projection must send every point to a base point")]
    return _shear_violations(len(Y), B.base, B.projection, Y.points,
                             lambda p: G.by_target[Y.anchor[p]],
                             lambda p, g: Y.act[p][g],
                             lambda g: G.arrows[g])


def fibre_report(B: PrincipalBundle) -> Certificate:
    """Each projection fibre is one orbit with free isotropy; should agree with the shear check."""
    Y, G = B.space, B.space.groupoid
    orbit_of = {}
    for i, orb in enumerate(Y.orbits()):
        for p in orb:
            orbit_of[p] = i
    for m, name in enumerate(B.base):
        fib = B.fibre_over(m)
        if len({orbit_of[p] for p in fib}) != 1:
            return Certificate("fibres", False, [name], {"reason": "fibre meets several orbits"})
        for p in fib:
            loops = [g for g in G.by_target[Y.anchor[p]] if G.source[g] == Y.anchor[p]]
            fixed = [G.arrows[g] for g in loops if Y.act[p][g] == p]
            if len(fixed) != 1:
                return Certificate("fibres", False, [Y.points[p], fixed], {"reason": "isotropy does not act freely"})
    return Certificate("fibres", True)


@dataclass(frozen=True)
class GroupBundle:
    """A principal K-bundle: free right K-set whose projection fibres are single orbits."""

    gset: GroupSet
    base: tuple
    projection: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        object.__setattr__(self, "projection", tuple(self.projection))
        problems = group_bundle_violations(self)
        if problems:
            raise ValidationError("group bundle", problems)

    @property
    def group(self) -> FiniteGroup:
        return self.gset.group

    def __len__(self) -> int:
        return len(self.gset)


def group_bundle_violations(B: GroupBundle) -> list[Violation]:
    S, K = B.gset, B.gset.group
    if len(B.projection) != len(S) or any(not 0 <= m < len(B.base) for m in B.projection):
        return [Violation("table_shape", "projection must send every point to a base point")]
    return _shear_violations(len(S), B.base, B.projection, S.points,
                             lambda p: range(K.order),
                             lambda p, k: S.act[p][k],
                             lambda k: K.names[k])


def _parse_base(raw, points):
    base = raw.get("base")
    proj = raw.get("projection")
    if not isinstance(base, list) or not isinstance(proj, Mapping):
        raise ValidationError("bundle", [Violation("schema", "need 'base' (list) and 'projection' (object)")])
    pos = {m: i for i, m in enumerate(base)}
    bad = []
    out = []
    for p in points:
        m = proj.get(p)
        if m not in pos:
            bad.append(Violation("projection", f"point {p} projects to unknown base point {m!r}", [p, m]))
            out.append(0)
        else:
            out.append(pos[m])
    if bad:
        raise ValidationError("bundle", bad)
    return base, out


def validate_bundle(G: FiniteGroupoid, raw: Mapping) -> PrincipalBundle:
    """Read a bundle: the space fields of a G-space file plus 'base' and 'projection'."""
    Y = validate_gspace(G, raw)
    base, proj = _parse_base(raw, Y.points)
    return PrincipalBundle(Y, base, proj)


def unit_bundle(G: FiniteGroupoid) -> PrincipalBundle:
    """All arrows, acting by composition on the right, over the objects via the target."""
    n = len(G.arrows)
    act = [[G.mul[f][g] if G.source[f] == G.target[g] else NONE for g in range(n)] for f in range(n)]
    Y = FiniteGSpace(G, G.arrows, G.source, act)
    return PrincipalBundle(Y, G.objects, G.target)


# -- restriction and extension -------------------------------------------------------

def restrict_bundle(B: PrincipalBundle, b) -> GroupBundle:
    """Points over b with the isotropy action and the same projection."""
    _require_transitive(B.groupoid)
    F = restrict_to_fibre(B.space, b)
    proj = [B.projection[p] for p in F.points]
    return GroupBundle(F.gset, B.base, proj)


def extend_bundle(G: FiniteGroupoid, b, Bb: GroupBundle) -> PrincipalBundle:
    """Induced space over G with projection [p, f] |-> pi(p)."""
    space, cls = _induce(G, b, Bb.gset)
    proj = [0] * len(space)
    for (z, _f), c in cls.items():
        proj[c] = Bb.projection[z]
    return PrincipalBundle(space, Bb.base, proj)


def _same_base(P, Q) -> Optional[Callable[[int, int], bool]]:
    if list(P.base) != list(Q.base):
        return None
    return lambda x, y: P.projection[x] == Q.projection[y]


def bundle_isomorphism(P: PrincipalBundle, Q: PrincipalBundle) -> Optional[tuple]:
    """An equivariant bijection over the identity of the base, or None."""
    allowed = _same_base(P, Q)
    if allowed is None or P.groupoid is not Q.groupoid:
        return None
    return find_isomorphism(P.space, Q.space, allowed)


def group_bundle_isomorphism(P: GroupBundle, Q: GroupBundle) -> Optional[tuple]:
    """Backtracking over orbit images; a free orbit is fixed by where its representative goes."""
    if P.group != Q.group or len(P) != len(Q):
        return None
    allowed = _same_base(P, Q)
    if allowed is None:
        return None
    S, T, K = P.gset, Q.gset, P.group
    orbits = S.orbits()
    m = [NONE] * len(S)
    used = [False] * len(T)

    def images(orb):
        r = orb[0]
        for t in range(len(T)):
            img = {}
            ok = True
            for k in range(K.order):
                p, q = S.act[r][k], T.act[t][k]
                if img.setdefault(p, q) != q or not allowed(p, q) or used[q]:
                    ok = False
                    break
            if ok and len(set(img.values())) == len(img):
                yield img

    def go(i):
        if i == len(orbits):
            return True
        for img in images(orbits[i]):
            for p, q in img.items():
                m[p] = q
                used[q] = True
            if go(i + 1):
                return True
            for p, q in img.items():
                m[p] = NONE
                used[q] = False
        return False

    return tuple(m) if go(0) else None


def verify_round_trip(G: FiniteGroupoid, b, B: Optional[PrincipalBundle] = None,
                      Bb: Optional[GroupBundle] = None) -> Certificate:
    """Restrict-then-extend gives back B, and extend-then-restrict gives back Bb."""
    b = G.obj(b) if isinstance(b, str) else b
    data = {}
    if B is not None:
        back = extend_bundle(G, b, restrict_bundle(B, b))
        iso = bundle_isomorphism(B, back)
        data["extend_restrict"] = iso is not None
        if iso is None:
            return Certificate("bundle", False, {"bundle": B.space.points, "step": "extend(restrict(B))"}, data)
    if Bb is not None:
        back = restrict_bundle(extend_bundle(G, b, Bb), b)
        iso = group_bundle_isomorphism(Bb, back)
        data["restrict_extend"] = iso is not None
        if iso is None:
            return Certificate("bundle", False, {"bundle": Bb.gset.points, "step": "restrict(extend(Bb))"}, data)
    if B is None and Bb is None:
        raise InvariantBreach("nothing to check")
    return Certificate("bundle", True, None, data)


def free_group_bundle(K: FiniteGroup, base: Sequence[str], tags: Optional[Sequence[str]] = None) -> GroupBundle:
    """One copy of K (acting on itself on the right) over each base point."""
    names, act, proj = [], [], []
    for m, name in enumerate(base):
        off = len(names)
        tag = tags[m] if tags else name
        names += [f"{tag}.{K.names[g]}" for g in range(K.order)]
        act += [[off + K.mul[g][k] for k in range(K.order)] for g in range(K.order)]
        proj += [m] * K.order
    return GroupBundle(GroupSet(K, names, act), base, proj)
