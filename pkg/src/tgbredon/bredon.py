"""Coefficient systems and Bredon (co)homology.

Every value of a coefficient system is presented as Z^k / span(R).  For a
morphism m: H -> K the matrix acts on generators:
  contravariant (cohomology): shape k_H x k_K, M(K) -> M(H)
  covariant (homology):       shape k_K x k_H, N(H) -> N(K)
Laws only need to hold modulo the relation lattices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .errors import InvariantBreach, ValidationError, Violation
from .gcw import ChainFunctor, GCWComplex, chain_differential, chain_functor
from .groups import FiniteGroup
from .orbitcat import OrbitCategory, build_orbit_category
from .zlinalg import (FgAbelianGroup, IntMatrix, cokernel, image_basis, in_image, kernel_basis,
                      presented_homology, solve_matrix)

CONTRAVARIANT = "contravariant"
COVARIANT = "covariant"


def _diag_relations(value: FgAbelianGroup) -> tuple[int, IntMatrix]:
    k = value.free_rank + len(value.torsion)
    cols = []
    for i, t in enumerate(value.torsion):
        col = [0] * k
        col[value.free_rank + i] = t
        cols.append(col)
    return k, IntMatrix.from_columns(cols, k)


class CoefficientSystem:
    def __init__(self, orbitcat: OrbitCategory, variance: str, generators: Sequence[int],
                 relations: Sequence[IntMatrix], maps: Sequence[IntMatrix]):
        if variance not in (CONTRAVARIANT, COVARIANT):
            raise ValidationError("coefficients", [Violation("variance", f"unknown variance {variance!r}")])
        self.orbitcat = orbitcat
        self.variance = variance
        self.generators = tuple(generators)
        self.relations = tuple(relations)
        self.maps = tuple(maps)
        problems = _coefficient_violations(self)
        if problems:
            raise ValidationError("coefficients", problems)

    def value(self, i: int) -> FgAbelianGroup:
        return cokernel(self.relations[i])

    def values(self) -> dict[str, FgAbelianGroup]:
        return {n: self.value(i) for i, n in enumerate(self.orbitcat.names)}

    def to_json(self) -> dict:
        OC = self.orbitcat
        return {
            "kind": "coefficients",
            "version": 1,
            "variance": self.variance,
            "group": OC.group.to_json(),
            "values": {OC.names[i]: {"generators": self.generators[i],
                                     "relations": [list(c) for c in self.relations[i].columns()]}
                       for i in range(len(OC.objects))},
            "maps": {m.name: self.maps[k].tolist() for k, m in enumerate(OC.morphisms)},
        }


def _mod(A: IntMatrix, R: IntMatrix) -> bool:
    """Every column of A lies in span(R)."""
    return A.is_zero() or (R.cols > 0 and in_image(R, A))


def _coefficient_violations(C: CoefficientSystem) -> list[Violation]:
    OC = C.orbitcat
    out = []
    n_obj = len(OC.objects)
    if len(C.generators) != n_obj or len(C.relations) != n_obj or len(C.maps) != len(OC.morphisms):
        return [Violation("table_shape", "need one value per object and one matrix per morphism")]
    for i in range(n_obj):
        if C.relations[i].rows != C.generators[i]:
            out.append(Violation("table_shape", f"relations at {OC.names[i]} have the wrong row count",
                                 [OC.names[i]]))
    co = C.variance == CONTRAVARIANT
    for k, m in enumerate(OC.morphisms):
        h, t = m.source, m.target
        want = (C.generators[h], C.generators[t]) if co else (C.generators[t], C.generators[h])
        if C.maps[k].shape != want:
            out.append(Violation("table_shape", f"matrix for {m.name} has shape {C.maps[k].shape}, "
                                 f"expected {want}", [m.name]))
    if out:
        return out
    for k, m in enumerate(OC.morphisms):
        h, t = m.source, m.target
        if co:
            ok = _mod(C.maps[k] @ C.relations[t], C.relations[h])
        else:
            ok = _mod(C.maps[k] @ C.relations[h], C.relations[t])
        if not ok:
            out.append(Violation("relations", f"matrix for {m.name} does not respect relations", [m.name]))
    for i in range(n_obj):
        k = OC.identity[i]
        if not _mod(C.maps[k] - IntMatrix.identity(C.generators[i]), C.relations[i]):
            out.append(Violation("identity", f"identity of {OC.names[i]} is not sent to the identity",
                                 [OC.morphisms[k].name]))
    for k2, m2 in enumerate(OC.morphisms):
        for k1, m1 in enumerate(OC.morphisms):
            k = OC.comp[k2][k1]
            if k == -1:
                continue
            if co:
                diff = C.maps[k] - C.maps[k1] @ C.maps[k2]
                R = C.relations[m1.source]
            else:
                diff = C.maps[k] - C.maps[k2] @ C.maps[k1]
                R = C.relations[m2.target]
            if not _mod(diff, R):
                out.append(Violation("functoriality", f"composite {m2.name} after {m1.name} is not respected",
                                     [m2.name, m1.name]))
    return out


def _parse_value(obj) -> tuple[int, IntMatrix]:
    if "generators" in obj:
        k = obj["generators"]
        rel = obj.get("relations", [])
        if not isinstance(k, int) or k < 0 or any(len(c) != k for c in rel):
            raise ValueError("relations must be columns of length 'generators'")
        return k, IntMatrix.from_columns(rel, k)
    return _diag_relations(FgAbelianGroup.from_json(obj))


def validate_coefficient_system(OC: OrbitCategory, raw: Mapping) -> CoefficientSystem:
    """Read a coefficient system for ``OC``.

    Unlisted morphisms are filled in when that is forced: identities get the
    identity, morphisms touching a zero-generator value get the empty matrix,
    and composites of known morphisms get the product.
    """
    bad = []
    variance = raw.get("variance")
    if variance not in (CONTRAVARIANT, COVARIANT):
        raise ValidationError("coefficients", [Violation("variance", "variance must be 'contravariant' "
                                                         "or 'covariant'", variance)])
    if "group" in raw:
        try:
            g = FiniteGroup.from_triples(raw["group"]["elements"], raw["group"]["compose"])
        except (KeyError, TypeError) as exc:
            raise ValidationError("coefficients", [Violation("schema", f"malformed group: {exc}")])
        if g != OC.group:
            raise ValidationError("coefficients", [Violation("group_mismatch",
                                                             "coefficient system is for a different group")])
    values = raw.get("values", {})
    gens, rels = [], []
    for name in OC.names:
        if name not in values:
            bad.append(Violation("missing_value", f"no value at {name}", [name]))
            gens.append(0)
            rels.append(IntMatrix.zeros(0, 0))
            continue
        try:
            k, R = _parse_value(values[name])
        except (ValueError, KeyError, TypeError) as exc:
            bad.append(Violation("schema", f"bad value at {name}: {exc}", [name]))
            gens.append(0)
            rels.append(IntMatrix.zeros(0, 0))
            continue
        gens.append(k)
        rels.append(R)
    for name in values:
        if name not in OC._obj:
            bad.append(Violation("unknown_object", f"value given for {name}, not an object {OC.names}", [name]))
    if bad:
        raise ValidationError("coefficients", bad)
    co = variance == CONTRAVARIANT
    n = len(OC.morphisms)
    maps: list[Optional[IntMatrix]] = [None] * n
    for name, mat in raw.get("maps", {}).items():
        try:
            k = OC.morphism(name)
        except KeyError:
            bad.append(Violation("unknown_morphism", f"unknown morphism {name}; have "
                                 f"{[m.name for m in OC.morphisms]}", [name]))
            continue
        m = OC.morphisms[k]
        shape = (gens[m.source], gens[m.target]) if co else (gens[m.target], gens[m.source])
        try:
            maps[k] = IntMatrix(mat, *shape)
        except (ValueError, TypeError) as exc:
            bad.append(Violation("table_shape", f"matrix for {name}: {exc}", [name]))
    if bad:
        raise ValidationError("coefficients", bad)
    for i in range(len(OC.objects)):
        k = OC.identity[i]
        if maps[k] is None:
            maps[k] = IntMatrix.identity(gens[i])
    for k, m in enumerate(OC.morphisms):
        if maps[k] is None and (gens[m.source] == 0 or gens[m.target] == 0):
            shape = (gens[m.source], gens[m.target]) if co else (gens[m.target], gens[m.source])
            maps[k] = IntMatrix.zeros(*shape)
    changed = True
    while changed:
        changed = False
        for k2 in range(n):
            for k1 in range(n):
                k = OC.comp[k2][k1]
                if k == -1 or maps[k] is not None or maps[k1] is None or maps[k2] is None:
                    continue
                maps[k] = maps[k1] @ maps[k2] if co else maps[k2] @ maps[k1]
                changed = True
    missing = [OC.morphisms[k].name for k in range(n) if maps[k] is None]
    if missing:
        raise ValidationError("coefficients", [Violation("missing_map", f"no matrix for {name} and none is "
                                                         "forced", [name]) for name in missing])
    return CoefficientSystem(OC, variance, gens, rels, maps)


def constant_system(OC: OrbitCategory, value: FgAbelianGroup, variance: str) -> CoefficientSystem:
    k, R = _diag_relations(value)
    return CoefficientSystem(OC, variance, [k] * len(OC.objects), [R] * len(OC.objects),
                             [IntMatrix.identity(k)] * len(OC.morphisms))


def concentrated_system(OC: OrbitCategory, obj: str, value: FgAbelianGroup, variance: str) -> CoefficientSystem:
    """``value`` at one object, zero elsewhere; endomorphisms of that object act trivially."""
    i0 = OC.obj(obj)
    k, R = _diag_relations(value)
    gens = [k if i == i0 else 0 for i in range(len(OC.objects))]
    rels = [R if i == i0 else IntMatrix.zeros(0, 0) for i in range(len(OC.objects))]
    maps = []
    for m in OC.morphisms:
        if m.source == i0 and m.target == i0:
            maps.append(IntMatrix.identity(k))
        else:
            a, b = (gens[m.source], gens[m.target]) if variance == CONTRAVARIANT else (gens[m.target], gens[m.source])
            maps.append(IntMatrix.zeros(a, b))
    return CoefficientSystem(OC, variance, gens, rels, maps)


# -- natural transformations ------------------------------------------------------

@dataclass(frozen=True)
class NatGroup:
    """Hom(F, M) as span(S) / span(T) in the coordinates of the block unknowns.

    ``offsets[i]`` locates the block X_i (k_i x c_i, row-major) in the ambient
    vector; ``basis`` columns are a basis of the naturality lattice S and
    ``relations`` are the generators of T written in that basis.
    """

    group: FgAbelianGroup
    offsets: tuple
    shapes: tuple
    basis: IntMatrix
    relations: IntMatrix

    @property
    def ambient(self) -> int:
        return self.basis.rows


def _layout(shapes):
    offs, n = [], 0
    for r, c in shapes:
        offs.append(n)
        n += r * c
    return offs, n


def nat_group(F: ChainFunctor, M: CoefficientSystem) -> NatGroup:
    """Natural transformations F -> M for a contravariant M.

    Unknowns are the blocks X_H; each morphism f: H -> K gives the condition
    X_H F(f) - M(f) X_K in span(R_H), column by column.
    """
    OC = F.orbitcat
    if M.orbitcat is not OC and M.orbitcat.group != OC.group:
        raise ValidationError("coefficients", [Violation("group_mismatch", "orbit categories differ")])
    if M.variance != CONTRAVARIANT:
        raise ValidationError("coefficients", [Violation("variance", "cohomology needs a contravariant system")])
    shapes = tuple((M.generators[i], F.rank(i)) for i in range(len(OC.objects)))
    offs, N = _layout(shapes)
    rows = []
    aux_cols = []  # (row block start, R) pairs
    for k, m in enumerate(OC.morphisms):
        i, j = m.source, m.target
        ki, ci = shapes[i]
        kj, cj = shapes[j]
        Fm, Mm = F.matrices[k], M.maps[k]
        if ki == 0 or cj == 0:
            continue
        R = M.relations[i]
        for col in range(cj):
            start = len(rows)
            for r in range(ki):
                row = [0] * N
                for c in range(ci):
                    v = Fm[c, col]
                    if v:
                        row[offs[i] + r * ci + c] += v
                for s in range(kj):
                    v = Mm[r, s]
                    if v:
                        row[offs[j] + s * cj + col] -= v
                rows.append(row)
            if R.cols:
                aux_cols.append((start, R))
    T_cols = []
    for i, (ki, ci) in enumerate(shapes):
        R = M.relations[i]
        for c in range(ci):
            for rc in R.columns():
                v = [0] * N
                for r in range(ki):
                    v[offs[i] + r * ci + c] = rc[r]
                T_cols.append(v)
    T = IntMatrix.from_columns(T_cols, N)
    if not rows:
        basis = IntMatrix.identity(N)
    else:
        n_aux = sum(R.cols for _, R in aux_cols)
        big = []
        for row in rows:
            big.append(row + [0] * n_aux)
        off = N
        for start, R in aux_cols:
            for a in range(R.cols):
                for r in range(R.rows):
                    big[start + r][off + a] = -R[r, a]
            off += R.cols
        Kb = kernel_basis(IntMatrix(big, len(big), N + n_aux))
        basis = image_basis(Kb.select_rows(range(N)))
    coords = solve_matrix(basis, T)
    if coords is None:
        raise InvariantBreach("relation lattice escapes the naturality lattice")
    return NatGroup(cokernel(coords), tuple(offs), shapes, basis, coords)


def _cochain_map(src: NatGroup, dst: NatGroup, d: Sequence[IntMatrix]) -> IntMatrix:
    """Precomposition X_H |-> X_H d_H, written in the bases of src and dst."""
    cols = []
    for v in src.basis.columns():
        w = [0] * dst.ambient
        for i, (k, c) in enumerate(src.shapes):
            c2 = dst.shapes[i][1]
            D = d[i]
            for r in range(k):
                for cc in range(c2):
                    s = 0
                    for c1 in range(c):
                        x = v[src.offsets[i] + r * c + c1]
                        if x:
                            s += x * D[c1, cc]
                    w[dst.offsets[i] + r * c2 + cc] = s
        cols.append(w)
    image = IntMatrix.from_columns(cols, dst.ambient)
    if image.cols == 0 or dst.basis.cols == 0:
        if not image.is_zero():
            raise InvariantBreach("precomposition leaves the naturality lattice")
        return IntMatrix.zeros(dst.basis.cols, src.basis.cols)
    out = solve_matrix(dst.basis, image)
    if out is None:
        raise InvariantBreach("precomposition leaves the naturality lattice")
    return out


# -- coends ---------------------------------------------------------------------

@dataclass(frozen=True)
class CoendGroup:
    """(sum over H of F(H) (x) N(H)) / relations, in ambient coordinates (H, cell, generator)."""

    group: FgAbelianGroup
    offsets: tuple
    shapes: tuple        # (cells, generators) per object
    relations: IntMatrix

    @property
    def ambient(self) -> int:
        return self.relations.rows


def coend_tensor(F: ChainFunctor, N: CoefficientSystem) -> CoendGroup:
    """F tensored over the orbit category with a covariant N.

    Relations: F(f)(x) (x) n  ~  x (x) N(f)(n) for every f: H -> K, x in F(K),
    n in N(H); plus x (x) r for r in the relations of N(H).
    """
    OC = F.orbitcat
    if N.orbitcat is not OC and N.orbitcat.group != OC.group:
        raise ValidationError("coefficients", [Violation("group_mismatch", "orbit categories differ")])
    if N.variance != COVARIANT:
        raise ValidationError("coefficients", [Violation("variance", "homology needs a covariant system")])
    shapes = tuple((F.rank(i), N.generators[i]) for i in range(len(OC.objects)))
    offs, total = _layout(shapes)
    rels = []
    for i, (c, g) in enumerate(shapes):
        R = N.relations[i]
        for j in range(c):
            for rc in R.columns():
                v = [0] * total
                for a in range(g):
                    v[offs[i] + j * g + a] = rc[a]
                rels.append(v)
    for k, m in enumerate(OC.morphisms):
        i, t = m.source, m.target
        ci, gi = shapes[i]
        ct, gt = shapes[t]
        Fm, Nm = F.matrices[k], N.maps[k]
        for y in range(ct):
            for a in range(gi):
                v = [0] * total
                for x in range(ci):
                    if Fm[x, y]:
                        v[offs[i] + x * gi + a] += Fm[x, y]
                for b in range(gt):
                    if Nm[b, a]:
                        v[offs[t] + y * gt + b] -= Nm[b, a]
                if any(v):
                    rels.append(v)
    R = IntMatrix.from_columns(rels, total)
    return CoendGroup(cokernel(R), tuple(offs), shapes, R)


def _chain_map(src: CoendGroup, dst: CoendGroup, d: Sequence[IntMatrix]) -> IntMatrix:
    """x (x) n |-> d(x) (x) n in ambient coordinates."""
    M = [[0] * src.ambient for _ in range(dst.ambient)]
    for i, (c, g) in enumerate(src.shapes):
        c2 = dst.shapes[i][0]
        D = d[i]
        for j in range(c):
            for r in range(c2):
                v = D[r, j]
                if v:
                    for a in range(g):
                        M[dst.offsets[i] + r * g + a][src.offsets[i] + j * g + a] = v
    return IntMatrix(M, dst.ambient, src.ambient)


# -- complexes -----------------------------------------------------------------

@dataclass
class BredonComplex:
    """Chain or cochain complex of presented groups.

    Degree n has ``sizes[n]`` coordinates modulo the columns of
    ``relations[n]``.  For cochains ``maps[n]`` is delta: C^n -> C^{n+1};
    for chains it is the boundary C_{n+1} -> C_n.
    """

    direction: str
    groups: list
    sizes: list
    relations: list
    maps: list
    labels: list = field(default_factory=list)

    def homology(self) -> list[FgAbelianGroup]:
        out = []
        top = len(self.sizes) - 1
        for n in range(top + 1):
            if self.direction == "cochain":
                d_in = self.maps[n - 1] if n >= 1 else IntMatrix.zeros(self.sizes[0], 0)
                d_out = self.maps[n] if n < top else IntMatrix.zeros(0, self.sizes[n])
                rel_out = self.relations[n + 1] if n < top else None
            else:
                d_in = self.maps[n] if n < top else IntMatrix.zeros(self.sizes[n], 0)
                d_out = self.maps[n - 1] if n >= 1 else IntMatrix.zeros(0, self.sizes[0])
                rel_out = self.relations[n - 1] if n >= 1 else None
            out.append(presented_homology(d_in, d_out, self.relations[n], rel_out))
        return out

    def ranks(self) -> list[int]:
        return [g.free_rank for g in self.groups]

    def is_surjective(self, n: int) -> bool:
        """Cochain map out of degree n (or boundary into degree n) is onto modulo relations."""
        target = n + 1 if self.direction == "cochain" else n
        D = self.maps[n]
        return cokernel(IntMatrix.hstack(D, self.relations[target])).is_trivial

    def check_square_zero(self) -> bool:
        for n in range(len(self.maps) - 1):
            if self.direction == "cochain":
                comp, R = self.maps[n + 1] @ self.maps[n], self.relations[n + 2]
            else:
                comp, R = self.maps[n] @ self.maps[n + 1], self.relations[n]
            if not _mod(comp, R):
                return False
        return True


def _check_compat(X: GCWComplex, C: CoefficientSystem) -> OrbitCategory:
    if C.orbitcat.group != X.group:
        raise ValidationError("coefficients", [Violation("group_mismatch",
                                                         "coefficient system and complex use different groups")])
    return C.orbitcat


def bredon_cochain_complex(X: GCWComplex, M: CoefficientSystem) -> BredonComplex:
    OC = _check_compat(X, M)
    top = X.dim
    nats = [nat_group(chain_functor(X, OC, n), M) for n in range(top + 1)]
    maps = []
    for n in range(top):
        d = chain_differential(X, OC, n + 1).components
        maps.append(_cochain_map(nats[n], nats[n + 1], d))
    cx = BredonComplex("cochain", [g.group for g in nats], [g.basis.cols for g in nats],
                       [g.relations for g in nats], maps)
    if not cx.check_square_zero():
        raise InvariantBreach("delta squared is not zero")
    return cx


def bredon_chain_complex(X: GCWComplex, N: CoefficientSystem) -> BredonComplex:
    OC = _check_compat(X, N)
    top = X.dim
    groups = [coend_tensor(chain_functor(X, OC, n), N) for n in range(top + 1)]
    maps = []
    for n in range(top):
        d = chain_differential(X, OC, n + 1).components
        maps.append(_chain_map(groups[n + 1], groups[n], d))
    cx = BredonComplex("chain", [g.group for g in groups], [g.ambient for g in groups],
                       [g.relations for g in groups], maps)
    if not cx.check_square_zero():
        raise InvariantBreach("boundary squared is not zero")
    return cx


def bredon_cohomology(X: GCWComplex, M: CoefficientSystem) -> list[FgAbelianGroup]:
    return bredon_cochain_complex(X, M).homology()


def bredon_homology(X: GCWComplex, N: CoefficientSystem) -> list[FgAbelianGroup]:
    return bredon_chain_complex(X, N).homology()


def orbit_category_for(X: GCWComplex) -> OrbitCategory:
    return build_orbit_category(X.group)
