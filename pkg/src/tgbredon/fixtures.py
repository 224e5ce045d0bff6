"""The double-flip example: groupoid, its 0- and 1-skeleton spaces, the flip
circle as a complex over the isotropy group, and two coefficient systems."""

from __future__ import annotations

import json
from pathlib import Path

from .bredon import CONTRAVARIANT, CoefficientSystem, concentrated_system, constant_system
from .gcw import GCWComplex, assemble_from_cells
from .groupoid import FiniteGroupoid, double_flip, isotropy
from .gspace import (EquivariantMap, FiniteGSpace, Pushout, fibrewise_product, pushout,
                     target_fibre_space, trivial_model)
from .orbitcat import OrbitCategory, build_orbit_category
from .zlinalg import FgAbelianGroup

BASE = "b"


def double_flip_groupoid() -> FiniteGroupoid:
    return double_flip()


def skeleton0(G: FiniteGroupoid | None = None) -> FiniteGSpace:
    """Two trivial orbits: points sq_a, sq_b, tri_a, tri_b."""
    G = G or double_flip()
    model = trivial_model(G, ["sq", "tri"])
    names = [f"{lab}_{o}" for lab in ("sq", "tri") for o in G.objects]
    return FiniteGSpace(G, names, model.anchor, model.act)


def skeleton1(G: FiniteGroupoid | None = None) -> Pushout:
    """Attach one free 1-cell orbit: the ends of (f, -1) go to sq, of (f, +1) to tri.

    The interval is sampled at -1, 0, +1; interior points survive as (f,0).
    """
    G = G or double_flip()
    X0 = skeleton0(G)
    Gb = target_fibre_space(G, BASE)
    ends = fibrewise_product(Gb, ["-1", "+1"])
    cell = fibrewise_product(Gb, ["-1", "0", "+1"])
    incl = [cell.pt(p) for p in ends.points]
    attach = []
    for p in ends.points:
        f = G.arr(p[1:p.rindex(",")])
        lab = "sq" if p.endswith(",-1)") else "tri"
        attach.append(X0.act[X0.pt(f"{lab}_{BASE}")][f])
    return pushout(EquivariantMap(ends, X0, tuple(attach)), EquivariantMap(ends, cell, tuple(incl)))


def isotropy_group(G: FiniteGroupoid | None = None):
    return isotropy(G or double_flip(), BASE).group


def flip_circle(G: FiniteGroupoid | None = None) -> GCWComplex:
    """The fibre over b: two fixed vertices joined by a pair of swapped edges."""
    K = isotropy_group(G)
    every = list(K.names)
    return assemble_from_cells(K, [
        {"name": "sq", "dim": 0, "type": every},
        {"name": "tri", "dim": 0, "type": every},
        {"name": "e", "dim": 1, "type": [], "boundary": [["sq", -1], ["tri", 1]]},
    ])


def coefficients_A(OC: OrbitCategory) -> CoefficientSystem:
    """Z at the full-group orbit, zero at the free orbit."""
    return concentrated_system(OC, OC.names[-1], FgAbelianGroup(1), CONTRAVARIANT)


def coefficients_B(OC: OrbitCategory) -> CoefficientSystem:
    """Z everywhere with identity maps."""
    return constant_system(OC, FgAbelianGroup(1), CONTRAVARIANT)


def example_files(name: str) -> dict[str, dict]:
    """File name -> JSON document for a named example set."""
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; available: {', '.join(sorted(EXAMPLES))}")
    return EXAMPLES[name]()


def _double_flip_files() -> dict[str, dict]:
    G = double_flip()
    X = flip_circle(G)
    OC = build_orbit_category(X.group)
    return {
        "double_flip.groupoid.json": G.to_json(),
        "skeleton0.gspace.json": skeleton0(G).to_json(),
        "flip_circle.gcw.json": X.to_json(),
        "A.coefficients.json": coefficients_A(OC).to_json(),
        "B.coefficients.json": coefficients_B(OC).to_json(),
    }


EXAMPLES = {"double-flip": _double_flip_files}


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_example(name: str, out: Path) -> list[Path]:
    files = example_files(name)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, doc in files.items():
        path = out / fname
        path.write_text(dump_json(doc), encoding="utf-8")
        written.append(path)
    return written
