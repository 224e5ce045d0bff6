"""Pure-Python elimination kernels on lists of Python ints.

These are the reference implementations.  ``_kernels.pyx`` mirrors them
step for step on int64 buffers, so both backends return identical output
whenever the compiled one does not overflow.
"""


def _nearest(v, p):
    # quotient with the remainder of least absolute value (ties toward floor)
    q, r = divmod(v, p)
    if 2 * abs(r) > abs(p):
        q += 1
    return q


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def snf(a, m, n):
    """Smith normal form ``U * A * V = D`` of the m x n matrix ``a``.

    Pivot = smallest nonzero absolute value in the trailing block, ties
    broken row-major.  Returns ``(U, D, V)`` as lists of lists.
    """
    D = [list(row) for row in a]
    U = identity(m)
    V = identity(n)
    for t in range(min(m, n)):
        while True:
            best = 0
            pi = pj = -1
            for i in range(t, m):
                row = D[i]
                for j in range(t, n):
                    v = row[j]
                    if v:
                        av = v if v > 0 else -v
                        if best == 0 or av < best:
                            best, pi, pj = av, i, j
            if pi < 0:
                return U, D, V
            if pi != t:
                D[t], D[pi] = D[pi], D[t]
                U[t], U[pi] = U[pi], U[t]
            if pj != t:
                for row in D:
                    row[t], row[pj] = row[pj], row[t]
                for row in V:
                    row[t], row[pj] = row[pj], row[t]
            rt = D[t]
            p = rt[t]
            clean = True
            for i in range(t + 1, m):
                ri = D[i]
                v = ri[t]
                if v:
                    q = _nearest(v, p)
                    if q:
                        for j in range(t, n):
                            ri[j] -= q * rt[j]
                        ui, ut = U[i], U[t]
                        for j in range(m):
                            ui[j] -= q * ut[j]
                    if ri[t]:
                        clean = False
            for j in range(t + 1, n):
                v = rt[j]
                if v:
                    q = _nearest(v, p)
                    if q:
                        for i in range(t, m):
                            ri = D[i]
                            ri[j] -= q * ri[t]
                        for row in V:
                            row[j] -= q * row[t]
                    if rt[j]:
                        clean = False
            if not clean:
                continue
            bad = -1
            for i in range(t + 1, m):
                ri = D[i]
                for j in range(t + 1, n):
                    if ri[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad >= 0:
                rb, ub, ut = D[bad], U[bad], U[t]
                for j in range(t, n):
                    rt[j] += rb[j]
                for j in range(m):
                    ut[j] += ub[j]
                continue
            if p < 0:
                for j in range(t, n):
                    rt[j] = -rt[j]
                ut = U[t]
                for j in range(m):
                    ut[j] = -ut[j]
            break
    return U, D, V


def column_echelon(a, m, n):
    """Unimodular column reduction ``A * V = E``.

    Rows are taken in pivot order rather than top to bottom: each step picks,
    over the unfinished rows and the trailing columns, the entry of least
    absolute value, then least Markowitz cost (r-1)*(c-1), then row-major.
    That row is Euclid-reduced to a single nonzero, moved to column ``r``.

    Returns ``(E, V, r, pivots)``.  Column k < r of E has a positive entry
    at row ``pivots[k]`` and row ``pivots[k]`` is zero right of column k, so
    the first r columns are a basis of the column lattice; columns r.. of E
    are zero and ``V[:, r:]`` is a basis of the integer kernel.
    """
    E = [list(row) for row in a]
    V = identity(n)
    r = 0
    pivots = []
    done = [False] * m
    while r < n:
        cnt = [0] * n
        for i in range(m):
            if not done[i]:
                row = E[i]
                for j in range(r, n):
                    if row[j]:
                        cnt[j] += 1
        best = None
        pi = pj = -1
        for i in range(m):
            if done[i]:
                continue
            row = E[i]
            rn = 0
            for j in range(r, n):
                if row[j]:
                    rn += 1
            for j in range(r, n):
                v = row[j]
                if v:
                    key = (v if v > 0 else -v, (rn - 1) * (cnt[j] - 1))
                    if best is None or key < best:
                        best, pi, pj = key, i, j
        if pi < 0:
            break
        ri = E[pi]
        while True:
            if pj != r:
                for row in E:
                    row[r], row[pj] = row[pj], row[r]
                for row in V:
                    row[r], row[pj] = row[pj], row[r]
            p = ri[r]
            clean = True
            for j in range(r + 1, n):
                v = ri[j]
                if v:
                    q = _nearest(v, p)
                    for row in E:
                        row[j] -= q * row[r]
                    for row in V:
                        row[j] -= q * row[r]
                    if ri[j]:
                        clean = False
            if clean:
                break
            best = 0
            pj = -1
            for j in range(r, n):
                v = ri[j]
                if v:
                    av = v if v > 0 else -v
                    if best == 0 or av < best:
                        best, pj = av, j
        if ri[r] < 0:
            for row in E:
                row[r] = -row[r]
            for row in V:
                row[r] = -row[r]
        done[pi] = True
        pivots.append(pi)
        r += 1
    return E, V, r, pivots
