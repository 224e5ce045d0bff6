"""Finite groups as multiplication tables, plus a small catalog (order <= 8)."""

from __future__ import annotations

import itertools
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .errors import ValidationError, Violation


class FiniteGroup:
    """A finite group on dense indices; ``mul[g][h]`` is the product g*h (g after h).

    Right actions in this package satisfy ``x.(g*h) = (x.g).h``.
    """

    __slots__ = ("names", "mul", "identity", "inverse", "_index")

    def __init__(self, names: Sequence[str], mul: Sequence[Sequence[int]]):
        self.names = tuple(names)
        self.mul = tuple(tuple(row) for row in mul)
        self._index = {n: i for i, n in enumerate(self.names)}
        problems = _group_violations(self.names, self.mul, self._index)
        if problems:
            raise ValidationError("group", problems)
        n = len(self.names)
        self.identity = next(e for e in range(n) if all(self.mul[e][g] == g for g in range(n)))
        self.inverse = tuple(next(h for h in range(n) if self.mul[g][h] == self.identity)
                             for g in range(n))

    @classmethod
    def from_elements(cls, elements: Sequence[Hashable], op: Callable, names=None) -> "FiniteGroup":
        index = {x: i for i, x in enumerate(elements)}
        mul = [[index[op(a, b)] for b in elements] for a in elements]
        return cls(names or [str(x) for x in elements], mul)

    @classmethod
    def from_triples(cls, names: Sequence[str], triples: Iterable[Sequence[str]]) -> "FiniteGroup":
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            raise ValidationError("group", [Violation("duplicate_name", "duplicate element names")])
        mul = [[-1] * len(names) for _ in names]
        bad = []
        for g, h, gh in triples:
            try:
                mul[index[g]][index[h]] = index[gh]
            except KeyError as exc:
                bad.append(Violation("unknown_element", f"unknown element {exc.args[0]!r}",
                                     [g, h, gh]))
        if bad:
            raise ValidationError("group", bad)
        return cls(names, mul)

    @property
    def order(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, elements={list(self.names)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.names == other.names and self.mul == other.mul

    def __hash__(self) -> int:
        return hash((self.names, self.mul))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown group element {name!r}") from None

    def conj(self, g: int, h: int) -> int:
        """g h g^-1."""
        return self.mul[self.mul[g][h]][self.inverse[g]]

    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def is_subgroup(self, elems: Iterable[int]) -> bool:
        s = set(elems)
        return (self.identity in s and all(self.inverse[a] in s for a in s)
                and all(self.mul[a][b] in s for a in s for b in s))

    def triples(self) -> list[list[str]]:
        n = self.names
        return [[n[g], n[h], n[self.mul[g][h]]] for g in range(self.order) for h in range(self.order)]

    def to_json(self) -> dict:
        return {"elements": list(self.names), "compose": self.triples()}

    def relabel(self, perm: Sequence[int], names: Optional[Sequence[str]] = None) -> "FiniteGroup":
        """Same group with element ``i`` moved to position ``perm[i]``."""
        n = self.order
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        new_names = list(names) if names is not None else [self.names[inv[k]] for k in range(n)]
        mul = [[perm[self.mul[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
        return FiniteGroup(new_names, mul)


def _group_violations(names, mul, index) -> list[Violation]:
    n = len(names)
    out = []
    if len(index) != n:
        out.append(Violation("duplicate_name", "duplicate element names"))
    if n == 0:
        return out + [Violation("empty", "a group needs at least one element")]
    if len(mul) != n or any(len(r) != n for r in mul):
        return out + [Violation("table_shape", "multiplication table is not n x n")]
    for g in range(n):
        for h in range(n):
            if not 0 <= mul[g][h] < n:
                out.append(Violation("missing_product", f"{names[g]}*{names[h]} undefined",
                                     [names[g], names[h]]))
    if out:
        return out
    ids = [e for e in range(n) if all(mul[e][g] == g and mul[g][e] == g for g in range(n))]
    if not ids:
        out.append(Violation("identity", "no two-sided identity"))
    for a in range(n):
        for b in range(n):
            ab = mul[a][b]
            for c in range(n):
                if mul[ab][c] != mul[a][mul[b][c]]:
                    out.append(Violation("associativity", f"({names[a]}{names[b]}){names[c]} != "
                                         f"{names[a]}({names[b]}{names[c]})",
                                         [names[a], names[b], names[c]]))
    if ids:
        e = ids[0]
        for g in range(n):
            if not any(mul[g][h] == e and mul[h][g] == e for h in range(n)):
                out.append(Violation("inverse", f"{names[g]} has no inverse", [names[g]]))
    return out


def _perm_group(gens: Sequence[tuple[int, ...]], prefix: str) -> FiniteGroup:
    def op(p, q):  # p after q
        return tuple(p[i] for i in q)

    e = tuple(range(len(gens[0])))
    elems = [e]
    seen = {e}
    i = 0
    while i < len(elems):
        for g in gens:
            y = op(elems[i], g)
            if y not in seen:
                seen.add(y)
                elems.append(y)
        i += 1
    names = ["e"] + [f"{prefix}{k}" for k in range(1, len(elems))]
    return FiniteGroup.from_elements(elems, op, names)


def trivial_group() -> FiniteGroup:
    return FiniteGroup(["e"], [[0]])


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([str(k) for k in range(n)], [[(a + b) % n for b in range(n)] for a in range(n)])


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    pairs = list(itertools.product(range(A.order), range(B.order)))
    index = {p: i for i, p in enumerate(pairs)}
    mul = [[index[(A.mul[a][c], B.mul[b][d])] for (c, d) in pairs] for (a, b) in pairs]
    return FiniteGroup([f"({A.names[a]},{B.names[b]})" for a, b in pairs], mul)


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return trivial_group()
    cycle = tuple(list(range(1, n)) + [0])
    swap = tuple([1, 0] + list(range(2, n)))
    return _perm_group([cycle, swap], "s")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return _perm_group([rot, ref], "d")


def quaternion() -> FiniteGroup:
    """Q8 via its regular representation on itself."""
    # elements (sign, unit) with unit in 1, i, j, k
    table = {("1", u): (1, u) for u in "1ijk"}
    table.update({(u, "1"): (1, u) for u in "1ijk"})
    table.update({("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
                  ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                  ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]

    def op(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    names = [("" if s == 1 else "-") + u for s, u in elems]
    return FiniteGroup.from_elements(elems, op, names)


def catalog(max_order: int = 8) -> list[tuple[str, FiniteGroup]]:
    """Every group of order <= max_order (up to isomorphism, max_order <= 8)."""
    out = [(f"Z{n}", cyclic(n)) for n in range(1, max_order + 1)]
    if max_order >= 4:
        out.append(("Z2xZ2", direct_product(cyclic(2), cyclic(2))))
    if max_order >= 6:
        out.append(("S3", symmetric(3)))
    if max_order >= 8:
        out.append(("Z2xZ4", direct_product(cyclic(2), cyclic(4))))
        out.append(("Z2^3", direct_product(cyclic(2), direct_product(cyclic(2), cyclic(2)))))
        out.append(("D4", dihedral(4)))
        out.append(("Q8", quaternion()))
    return out
