"""Independent reference computations used only by the tests.

Nothing here calls the package's elimination code: determinants by cofactor
expansion, invariant factors by gcds of minors, maps by brute force.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


def det(M):
    """Fraction-free Bareiss elimination; exact for integer matrices."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]) if B else 0)]
            for i in range(len(A))]


def rational_rank(M):
    rows = [[Fraction(v) for v in r] for r in M]
    if not rows:
        return 0
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def invariant_factors(M):
    """Nonzero invariant factors via determinantal divisors d_k = gcd of k x k minors."""
    m = len(M)
    n = len(M[0]) if M else 0
    out = []
    prev = 1
    for k in range(1, rational_rank(M) + 1 if m and n else 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, det([[M[i][j] for j in cs] for i in rs]))
                if g == prev:
                    break       # d_{k-1} divides d_k, so it cannot get smaller
            if g == prev:
                break
        out.append(g // prev)
        prev = g
    return out


def cokernel_oracle(M, rows):
    """(free rank, torsion) of Z^rows / column span of M."""
    if not M or not M[0]:
        return rows, ()
    f = invariant_factors(M)
    return rows - len(f), tuple(d for d in f if d != 1)


def homology_oracle(boundaries, sizes):
    """Homology of a free chain complex; boundaries[n-1]: C_n -> C_{n-1} as lists of rows.

    H_n = Z^(c_n - rank d_n - rank d_{n+1}) + torsion of coker d_{n+1}.
    """
    out = []
    for n, c in enumerate(sizes):
        d_out = boundaries[n - 1] if n >= 1 else None
        d_in = boundaries[n] if n < len(boundaries) else None
        r_out = rational_rank(d_out) if d_out and d_out[0] else 0
        r_in = rational_rank(d_in) if d_in and d_in[0] else 0
        tors = ()
        if d_in and d_in[0]:
            tors = tuple(d for d in invariant_factors(d_in) if d != 1)
        out.append((c - r_out - r_in, tors))
    return out


def cohomology_oracle(boundaries, sizes):
    """Cohomology via the transposed complex: H^n = Z^(c_n - ranks) + torsion of coker d_n^T."""
    out = []
    for n, c in enumerate(sizes):
        d_in = boundaries[n - 1] if n >= 1 else None       # C_n -> C_{n-1}; transposed goes into C^n
        d_out = boundaries[n] if n < len(boundaries) else None
        r_in = rational_rank(d_in) if d_in and d_in[0] else 0
        r_out = rational_rank(d_out) if d_out and d_out[0] else 0
        tors = ()
        if d_in and d_in[0]:
            tors = tuple(d for d in invariant_factors([list(col) for col in zip(*d_in)]) if d != 1)
        out.append((c - r_in - r_out, tors))
    return out


def brute_force_maps(Y, X):
    """Every equivariant map Y -> X by trying all anchor-respecting functions."""
    choices = [[q for q in range(len(X)) if X.anchor[q] == Y.anchor[p]] for p in range(len(Y))]
    G = Y.groupoid
    found = []
    for m in itertools.product(*choices):
        ok = True
        for p in range(len(Y)):
            for f in G.by_target[Y.anchor[p]]:
                if m[Y.act[p][f]] != X.act[m[p]][f]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(tuple(m))
    return found


def brute_force_set_maps(S, T):
    """Every K-map between right K-sets."""
    K = S.group
    return [m for m in itertools.product(range(len(T)), repeat=len(S))
            if all(m[S.act[p][k]] == T.act[m[p]][k] for p in range(len(S)) for k in range(K.order))]


def right_cosets(K, H):
    seen, out = set(), []
    for g in range(K.order):
        if g not in seen:
            c = frozenset(K.mul[h][g] for h in H)
            seen |= c
            out.append(c)
    return out


def coset_hom_count(K, H, L):
    """|(K/L)^H| counted on right cosets L.g: H-fixed means L.g.h = L.g for h in H."""
    count = 0
    for c in right_cosets(K, L):
        g = min(c)
        if all(K.mul[g][h] in c for h in H):
            count += 1
    return count


def group_axioms_hold(names, mul):
    n = len(names)
    e = [x for x in range(n) if all(mul[x][g] == g and mul[g][x] == g for g in range(n))]
    if len(e) != 1:
        return False
    e = e[0]
    assoc = all(mul[mul[a][b]][c] == mul[a][mul[b][c]] for a in range(n) for b in range(n) for c in range(n))
    inv = all(any(mul[a][b] == e for b in range(n)) for a in range(n))
    return assoc and inv
