"""Equivariant CW complexes, stored as the fibre complex with its isotropy action.

``boundary[n-1]`` is the cellular boundary C_n -> C_{n-1}, rows indexed by
(n-1)-cells and columns by n-cells.  ``perm[n][g][c]`` is the cell c.g; the
action is on the right, so c.(g h) = (c.g).h, and carries no signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import InvariantBreach, ValidationError, Violation
from .groups import FiniteGroup
from .orbitcat import OrbitCategory, Subgroup, subgroup_name
from .zlinalg import FgAbelianGroup, IntMatrix, chain_cohomology, chain_homology


@dataclass(frozen=True)
class CellComplex:
    """A plain finite chain complex of cells (no group)."""

    cells: tuple                      # per dimension, tuple of names
    boundary: tuple                   # boundary[n-1]: C_n -> C_{n-1}

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def homology(self) -> list[FgAbelianGroup]:
        return chain_homology(self.boundary, self.sizes)

    def cohomology(self) -> list[FgAbelianGroup]:
        return chain_cohomology(self.boundary, self.sizes)

    def check_square_zero(self) -> bool:
        return all((self.boundary[n - 1] @ self.boundary[n]).is_zero() for n in range(1, len(self.boundary)))


class GCWComplex:
    def __init__(self, group: FiniteGroup, cells: Sequence[Sequence[str]], boundary: Sequence[IntMatrix],
                 perm: Sequence[Sequence[Sequence[int]]], orbit_types: Optional[Sequence[Sequence]] = None):
        self.group = group
        self.cells = tuple(tuple(c) for c in cells)
        self.boundary = tuple(boundary)
        self.perm = tuple(tuple(tuple(p) for p in per_dim) for per_dim in perm)
        problems = _gcw_violations(self, orbit_types)
        if problems:
            raise ValidationError("gcw", problems)
        K = group
        self.stabilizer = tuple(
            tuple(frozenset(g for g in range(K.order) if self.perm[n][g][c] == c) for c in range(len(self.cells[n])))
            for n in range(len(self.cells)))

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.cells]

    def __repr__(self) -> str:
        return f"GCWComplex(sizes={self.sizes}, group_order={self.group.order})"

    def cell_index(self, n: int, name: str) -> int:
        try:
            return self.cells[n].index(name)
        except ValueError:
            raise KeyError(f"no {n}-cell named {name!r}") from None

    def underlying(self) -> CellComplex:
        return CellComplex(self.cells, self.boundary)

    def fixed_cells(self, n: int, H) -> list[int]:
        H = frozenset(H)
        return [c for c in range(len(self.cells[n])) if H <= self.stabilizer[n][c]]

    def cell_orbits(self, n: int) -> list[list[int]]:
        seen = set()
        out = []
        for c in range(len(self.cells[n])):
            if c not in seen:
                orb = sorted({self.perm[n][g][c] for g in range(self.group.order)})
                seen.update(orb)
                out.append(orb)
        return out

    def to_json(self) -> dict:
        K = self.group
        bd = {}
        for n in range(1, len(self.cells)):
            B = self.boundary[n - 1]
            for j, name in enumerate(self.cells[n]):
                bd[name] = [[self.cells[n - 1][i], B[i, j]] for i in range(B.rows) if B[i, j]]
        return {
            "kind": "gcw",
            "version": 1,
            "group": K.to_json(),
            "cells": [list(c) for c in self.cells],
            "boundary": bd,
            "action": {K.names[g]: [[self.cells[n][self.perm[n][g][c]] for c in range(len(self.cells[n]))]
                                    for n in range(len(self.cells))]
                       for g in range(K.order) if g != K.identity},
            "orbit_types": {self.cells[n][c]: [K.names[g] for g in sorted(self.stabilizer[n][c])]
                            for n in range(len(self.cells)) for c in range(len(self.cells[n]))},
        }


def _gcw_violations(X: GCWComplex, orbit_types) -> list[Violation]:
    K = X.group
    out = []
    sizes = [len(c) for c in X.cells]
    names = [n for c in X.cells for n in c]
    if len(set(names)) != len(names):
        out.append(Violation("duplicate_name", "cell names must be distinct"))
    if len(X.boundary) != max(len(sizes) - 1, 0):
        return out + [Violation("table_shape", "need one boundary matrix per positive dimension")]
    for n in range(1, len(sizes)):
        if X.boundary[n - 1].shape != (sizes[n - 1], sizes[n]):
            out.append(Violation("table_shape", f"boundary in degree {n} has shape "
                                 f"{X.boundary[n - 1].shape}, expected {(sizes[n - 1], sizes[n])}", [n]))
    if len(X.perm) != len(sizes) or any(len(X.perm[n]) != K.order for n in range(len(sizes))):
        out.append(Violation("table_shape", "need a permutation per group element and dimension"))
    if out:
        return out
    for n in range(len(sizes)):
        for g in range(K.order):
            if sorted(X.perm[n][g]) != list(range(sizes[n])):
                out.append(Violation("not_permutation", f"{K.names[g]} does not permute the {n}-cells",
                                     [K.names[g], n]))
    if out:
        return out
    for n in range(len(sizes)):
        P = X.perm[n]
        for c in range(sizes[n]):
            if P[K.identity][c] != c:
                out.append(Violation("action", "identity moves a cell", [X.cells[n][c]]))
            for g in range(K.order):
                for h in range(K.order):
                    if P[h][P[g][c]] != P[K.mul[g][h]][c]:
                        out.append(Violation("action", "cell action is not a right action",
                                             [X.cells[n][c], K.names[g], K.names[h]]))
    for n in range(2, len(sizes)):
        if not (X.boundary[n - 2] @ X.boundary[n - 1]).is_zero():
            out.append(Violation("boundary_squared", f"boundary squared is nonzero in degree {n}", [n]))
    for n in range(1, len(sizes)):
        B, Pn, Pl = X.boundary[n - 1], X.perm[n], X.perm[n - 1]
        for g in range(K.order):
            for c in range(sizes[n]):
                for t in range(sizes[n - 1]):
                    if B[Pl[g][t], Pn[g][c]] != B[t, c]:
                        out.append(Violation("equivariance", f"{K.names[g]} does not commute with the boundary "
                                             f"of {X.cells[n][c]}", [K.names[g], X.cells[n][c], X.cells[n - 1][t]]))
                        break
    if out:
        return out
    for n in range(1, len(sizes)):
        B, Pn, Pl = X.boundary[n - 1], X.perm[n], X.perm[n - 1]
        for c in range(sizes[n]):
            for g in range(K.order):
                if Pn[g][c] != c:
                    continue
                for t in range(sizes[n - 1]):
                    if B[t, c] and Pl[g][t] != t:
                        out.append(Violation("admissibility", f"{K.names[g]} fixes {X.cells[n][c]} but moves "
                                             f"{X.cells[n - 1][t]} in its boundary",
                                             [K.names[g], X.cells[n][c], X.cells[n - 1][t]]))
    if orbit_types is not None:
        for n in range(len(sizes)):
            for c in range(sizes[n]):
                given = orbit_types[n][c]
                if given is None:
                    continue
                stab = frozenset(g for g in range(K.order) if X.perm[n][g][c] == c)
                if frozenset(given) != stab:
                    out.append(Violation("orbit_type", f"orbit type of {X.cells[n][c]} is "
                                         f"{sorted(K.names[g] for g in stab)}",
                                         [X.cells[n][c], sorted(K.names[g] for g in given)]))
    return out


def validate_gcw(raw: Mapping) -> GCWComplex:
    """Build a complex from its interchange dict (see ``GCWComplex.to_json``)."""
    try:
        graw = raw["group"]
        group = FiniteGroup.from_triples(list(graw["elements"]), [tuple(t) for t in graw["compose"]])
        cells = [list(c) for c in raw["cells"]]
        bd = raw.get("boundary", {})
        action = raw.get("action", {})
    except (KeyError, TypeError) as exc:
        raise ValidationError("gcw", [Violation("schema", f"missing or malformed field: {exc}")])
    where = {}
    for n, cs in enumerate(cells):
        for i, c in enumerate(cs):
            where.setdefault(c, (n, i))
    bad = []
    boundary = []
    for n in range(1, len(cells)):
        cols = []
        for c in cells[n]:
            col = [0] * len(cells[n - 1])
            for entry in bd.get(c, []):
                t, k = entry
                if t not in where or where[t][0] != n - 1:
                    bad.append(Violation("boundary_cell", f"boundary of {c} names {t}, not an "
                                         f"({n - 1})-cell", [c, t]))
                    continue
                if not isinstance(k, int) or isinstance(k, bool):
                    bad.append(Violation("schema", f"coefficient of {t} in the boundary of {c} is not an integer",
                                         [c, t, k]))
                    continue
                col[where[t][1]] += k
            cols.append(col)
        boundary.append(IntMatrix.from_columns(cols, len(cells[n - 1])))
    for c in bd:
        if c not in where or where[c][0] == 0:
            bad.append(Violation("boundary_cell", f"boundary given for {c}, not a positive-dimensional cell", [c]))
    perm = [[None] * group.order for _ in cells]
    for n in range(len(cells)):
        perm[n][group.identity] = list(range(len(cells[n])))
    for gname, per_dim in action.items():
        if gname not in group._index:
            bad.append(Violation("unknown_element", f"action given for unknown element {gname}", [gname]))
            continue
        g = group.index(gname)
        if len(per_dim) != len(cells):
            bad.append(Violation("schema", f"action of {gname} must list every dimension", [gname]))
            continue
        for n, images in enumerate(per_dim):
            row = []
            for img in images:
                if isinstance(img, str) and img.startswith("-") and img[1:] in where:
                    bad.append(Violation("signed_action", f"signed cell image {img} is not supported",
                                         [gname, img]))
                    row.append(0)
                elif img not in where or where[img][0] != n:
                    bad.append(Violation("unknown_cell", f"{gname} sends a {n}-cell to {img}", [gname, img]))
                    row.append(0)
                else:
                    row.append(where[img][1])
            if len(row) != len(cells[n]):
                bad.append(Violation("schema", f"action of {gname} in degree {n} has the wrong length",
                                     [gname, n]))
            perm[n][g] = row
    for g in range(group.order):
        if perm[0][g] is None:
            bad.append(Violation("missing_action", f"no action given for {group.names[g]}", [group.names[g]]))
    orbit_types = None
    if "orbit_types" in raw:
        orbit_types = [[None] * len(c) for c in cells]
        for c, elems in raw["orbit_types"].items():
            if c not in where or any(e not in group._index for e in elems):
                bad.append(Violation("orbit_type", f"orbit type for {c} names unknown data", [c]))
                continue
            n, i = where[c]
            orbit_types[n][i] = [group.index(e) for e in elems]
    if bad:
        raise ValidationError("gcw", bad)
    return GCWComplex(group, cells, boundary, perm, orbit_types)


# -- derived complexes -----------------------------------------------------------

def fixed_subcomplex(X: GCWComplex, H) -> CellComplex:
    """Cells whose stabilizer contains H, with the restricted boundary."""
    keep = [X.fixed_cells(n, H) for n in range(len(X.cells))]
    boundary = []
    for n in range(1, len(X.cells)):
        B = X.boundary[n - 1]
        kept = set(keep[n - 1])
        for c in keep[n]:
            for t in range(B.rows):
                if B[t, c] and t not in kept:
                    raise InvariantBreach("fixed cells are not closed under the boundary",
                                          [X.cells[n][c], X.cells[n - 1][t]])
        boundary.append(B.select_rows(keep[n - 1]).select_columns(keep[n]))
    return CellComplex(tuple(tuple(X.cells[n][c] for c in keep[n]) for n in range(len(X.cells))),
                       tuple(boundary))


def quotient_complex(X: GCWComplex) -> CellComplex:
    """One cell per cell orbit; the boundary of an orbit is read off its least cell."""
    orbits = [X.cell_orbits(n) for n in range(len(X.cells))]
    boundary = []
    for n in range(1, len(X.cells)):
        B = X.boundary[n - 1]
        cols = []
        for orb in orbits[n]:
            r = orb[0]
            cols.append([sum(B[t, r] for t in low) for low in orbits[n - 1]])
        boundary.append(IntMatrix.from_columns(cols, len(orbits[n - 1])))
    return CellComplex(tuple(tuple(X.cells[n][o[0]] for o in orbits[n]) for n in range(len(X.cells))),
                       tuple(boundary))


# -- the chain functor -----------------------------------------------------------

@dataclass(frozen=True)
class ChainFunctor:
    """Free abelian on H-fixed n-cells at each object H; contravariant on morphisms.

    For a morphism m: H -> K with coset rep a, ``matrices[m]`` sends the
    K-fixed cell y to y.a (rows: H-fixed cells, columns: K-fixed cells).
    """

    degree: int
    orbitcat: OrbitCategory
    basis: tuple          # per object, the fixed cell indices
    matrices: tuple       # per morphism

    def rank(self, i: int) -> int:
        return len(self.basis[i])

    def is_zero(self) -> bool:
        return all(not b for b in self.basis)

    def check_functorial(self) -> bool:
        OC = self.orbitcat
        for i in range(len(OC.objects)):
            k = self.rank(i)
            if self.matrices[OC.identity[i]] != IntMatrix.identity(k):
                return False
        for k2, m2 in enumerate(OC.morphisms):
            for k1, m1 in enumerate(OC.morphisms):
                k = OC.comp[k2][k1]
                if k != -1 and self.matrices[k] != self.matrices[k1] @ self.matrices[k2]:
                    return False
        return True


def chain_functor(X: GCWComplex, OC: OrbitCategory, n: int) -> ChainFunctor:
    if OC.group != X.group:
        raise ValidationError("chain functor", [Violation("group_mismatch",
                                                          "orbit category is for a different group")])
    if n < 0 or n > X.dim:
        basis = tuple(() for _ in OC.objects)
        mats = tuple(IntMatrix.zeros(0, 0) for _ in OC.morphisms)
        return ChainFunctor(n, OC, basis, mats)
    basis = tuple(tuple(X.fixed_cells(n, H)) for H in OC.objects)
    mats = []
    for m in OC.morphisms:
        rows, cols = basis[m.source], basis[m.target]
        pos = {c: i for i, c in enumerate(rows)}
        M = [[0] * len(cols) for _ in rows]
        for j, y in enumerate(cols):
            M[pos[X.perm[n][m.rep][y]]][j] = 1
        mats.append(IntMatrix(M, len(rows), len(cols)))
    return ChainFunctor(n, OC, basis, tuple(mats))


@dataclass(frozen=True)
class ChainDifferential:
    """d: C_n -> C_{n-1}, one matrix per orbit-category object."""

    degree: int
    components: tuple


def chain_differential(X: GCWComplex, OC: OrbitCategory, n: int) -> ChainDifferential:
    """Restriction of the boundary to H-fixed cells, with naturality and d.d = 0 checked."""
    if n < 1:
        raise ValueError("the differential starts in degree 1")
    F, L = chain_functor(X, OC, n), chain_functor(X, OC, n - 1)
    comps = []
    for i in range(len(OC.objects)):
        if n > X.dim:
            comps.append(IntMatrix.zeros(L.rank(i), F.rank(i)))
        else:
            comps.append(X.boundary[n - 1].select_rows(L.basis[i]).select_columns(F.basis[i]))
    for k, m in enumerate(OC.morphisms):
        if comps[m.source] @ F.matrices[k] != L.matrices[k] @ comps[m.target]:
            raise InvariantBreach("differential is not natural", m.name)
    if 2 <= n <= X.dim:
        for i in range(len(OC.objects)):
            prev = X.boundary[n - 2].select_rows(chain_functor(X, OC, n - 2).basis[i]).select_columns(L.basis[i])
            if not (prev @ comps[i]).is_zero():
                raise InvariantBreach("d.d != 0 on fixed cells", OC.names[i])
    return ChainDifferential(n, tuple(comps))


# -- assembling from cell orbits ------------------------------------------------

def assemble_from_cells(group: FiniteGroup, layers: Sequence[Mapping]) -> GCWComplex:
    """Build a complex from cell orbits.

    Each layer entry has ``name``, ``dim``, ``type`` (element names of the
    stabilizer H of the representative cell) and, for dim > 0, ``boundary``:
    a list of (cell name, coefficient) for the representative.  Every cell in
    that chain must be H-fixed.  Cells of the orbit are the cosets H.g; they are
    named ``name`` when the orbit is a single cell and ``name.g`` otherwise,
    with g the least coset representative.
    """
    K = group
    cells: list[list[str]] = []
    perm: list[list[list[int]]] = []
    cols: list[list[dict]] = []
    where: dict[str, tuple[int, int]] = {}
    stab: list[list[Subgroup]] = []
    bad = []
    for entry in sorted(layers, key=lambda e: e["dim"]):
        n = entry["dim"]
        while len(cells) <= n:
            cells.append([])
            perm.append([[] for _ in range(K.order)])
            cols.append([])
            stab.append([])
        try:
            H = frozenset(K.index(e) for e in entry.get("type", []))
        except KeyError as exc:
            raise ValidationError("gcw", [Violation("unknown_element", str(exc), [entry["name"]])])
        H = H | {K.identity}
        if not K.is_subgroup(H):
            bad.append(Violation("orbit_type", f"type of {entry['name']} is not a subgroup", [entry["name"]]))
            continue
        chain = {}
        for t, k in entry.get("boundary", []):
            if t not in where or where[t][0] != n - 1:
                bad.append(Violation("boundary_cell", f"{entry['name']} attaches to {t}, not an existing "
                                     f"{n - 1}-cell", [entry["name"], t]))
                continue
            tn, ti = where[t]
            if not H <= stab[tn][ti]:
                bad.append(Violation("containment", f"{entry['name']} has type {subgroup_name(K, H)} but attaches "
                                     f"to {t} of type {subgroup_name(K, stab[tn][ti])}", [entry["name"], t]))
                continue
            chain[ti] = chain.get(ti, 0) + k
        # right cosets H.g
        reps = []
        seen = set()
        for g in range(K.order):
            if g not in seen:
                coset = {K.mul[h][g] for h in H}
                seen |= coset
                reps.append(g)
        base = len(cells[n])
        single = len(reps) == 1
        coset_of = {}
        for i, g in enumerate(reps):
            for h in H:
                coset_of[K.mul[h][g]] = i
            name = entry["name"] if single else f"{entry['name']}.{K.names[g]}"
            where[name] = (n, base + i)
            cells[n].append(name)
            stab[n].append(frozenset(K.conj(K.inverse[g], h) for h in H))
            # boundary of H.g is (boundary of the representative) . g
            cols[n].append({perm[n - 1][g][t] if n > 0 else t: k for t, k in chain.items()} if n > 0 else {})
        for k in range(K.order):
            for i, g in enumerate(reps):
                perm[n][k].append(base + coset_of[K.mul[g][k]])
    if bad:
        raise ValidationError("gcw", bad)
    if any(not c for c in cells):
        raise ValidationError("gcw", [Violation("empty_dimension", "a dimension below the top has no cells")])
    boundary = []
    for n in range(1, len(cells)):
        boundary.append(IntMatrix.from_columns([[col.get(t, 0) for t in range(len(cells[n - 1]))]
                                                for col in cols[n]], len(cells[n - 1])))
    return GCWComplex(K, cells, boundary, perm)


def point_complex(group: FiniteGroup) -> GCWComplex:
    return assemble_from_cells(group, [{"name": "pt", "dim": 0, "type": list(group.names)}])
