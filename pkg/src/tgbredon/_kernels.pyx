# cython: language_level=3, boundscheck=False, wraparound=False, overflowcheck=True, cdivision=False
"""int64 mirror of ``_kernels_py``.

Same pivoting and the same operation order, so results are identical.
Every add/sub/mul is overflow-checked; on overflow an ``OverflowError``
is raised and the caller falls back to the arbitrary-precision kernel.
"""

from libc.stdlib cimport malloc, free

cdef extern from "<limits.h>":
    long long LLONG_MIN


cdef inline long long _abs(long long v) except? -1:
    if v == LLONG_MIN:
        raise OverflowError("int64 overflow")
    return v if v >= 0 else -v


cdef inline long long _neg(long long v) except? -1:
    if v == LLONG_MIN:
        raise OverflowError("int64 overflow")
    return -v


cdef inline long long _nearest(long long v, long long p) except? -1:
    # quotient with the remainder of least absolute value (ties toward floor)
    cdef long long q = v // p
    cdef long long r = v - q * p
    if 2 * _abs(r) > _abs(p):
        q += 1
    return q


cdef long long* _load(object a, Py_ssize_t m, Py_ssize_t n) except NULL:
    cdef long long* buf = <long long*> malloc((m * n + 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    try:
        for i in range(m):
            row = a[i]
            for j in range(n):
                buf[i * n + j] = row[j]
    except BaseException:
        free(buf)
        raise
    return buf


cdef long long* _eye(Py_ssize_t n) except NULL:
    cdef long long* buf = <long long*> malloc((n * n + 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n * n):
        buf[i] = 0
    for i in range(n):
        buf[i * n + i] = 1
    return buf


cdef list _dump(long long* buf, Py_ssize_t m, Py_ssize_t n):
    cdef Py_ssize_t i, j
    return [[buf[i * n + j] for j in range(n)] for i in range(m)]


cdef inline void _swap_rows(long long* A, Py_ssize_t n, Py_ssize_t r1, Py_ssize_t r2):
    cdef Py_ssize_t j
    cdef long long tmp
    for j in range(n):
        tmp = A[r1 * n + j]
        A[r1 * n + j] = A[r2 * n + j]
        A[r2 * n + j] = tmp


cdef inline void _swap_cols(long long* A, Py_ssize_t m, Py_ssize_t n,
                            Py_ssize_t c1, Py_ssize_t c2, Py_ssize_t start):
    cdef Py_ssize_t i
    cdef long long tmp
    for i in range(start, m):
        tmp = A[i * n + c1]
        A[i * n + c1] = A[i * n + c2]
        A[i * n + c2] = tmp


cdef int _snf_loop(long long* D, long long* U, long long* V,
                   Py_ssize_t m, Py_ssize_t n) except -1:
    cdef Py_ssize_t t, i, j, pi, pj, bad
    cdef long long best, v, av, p, q
    cdef bint clean
    cdef Py_ssize_t k = m if m < n else n
    for t in range(k):
        while True:
            best = 0
            pi = -1
            pj = -1
            for i in range(t, m):
                for j in range(t, n):
                    v = D[i * n + j]
                    if v != 0:
                        av = _abs(v)
                        if best == 0 or av < best:
                            best = av
                            pi = i
                            pj = j
            if pi < 0:
                return 0
            if pi != t:
                _swap_rows(D, n, t, pi)
                _swap_rows(U, m, t, pi)
            if pj != t:
                _swap_cols(D, m, n, t, pj, 0)
                _swap_cols(V, n, n, t, pj, 0)
            p = D[t * n + t]
            clean = True
            for i in range(t + 1, m):
                v = D[i * n + t]
                if v != 0:
                    q = _nearest(v, p)
                    if q != 0:
                        for j in range(t, n):
                            D[i * n + j] = D[i * n + j] - q * D[t * n + j]
                        for j in range(m):
                            U[i * m + j] = U[i * m + j] - q * U[t * m + j]
                    if D[i * n + t] != 0:
                        clean = False
            for j in range(t + 1, n):
                v = D[t * n + j]
                if v != 0:
                    q = _nearest(v, p)
                    if q != 0:
                        for i in range(t, m):
                            D[i * n + j] = D[i * n + j] - q * D[i * n + t]
                        for i in range(n):
                            V[i * n + j] = V[i * n + j] - q * V[i * n + t]
                    if D[t * n + j] != 0:
                        clean = False
            if not clean:
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i * n + j] % p != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad >= 0:
                for j in range(t, n):
                    D[t * n + j] = D[t * n + j] + D[bad * n + j]
                for j in range(m):
                    U[t * m + j] = U[t * m + j] + U[bad * m + j]
                continue
            if p < 0:
                for j in range(t, n):
                    D[t * n + j] = _neg(D[t * n + j])
                for j in range(m):
                    U[t * m + j] = _neg(U[t * m + j])
            break
    return 0


def snf(a, Py_ssize_t m, Py_ssize_t n):
    cdef long long* D = _load(a, m, n)
    cdef long long* U = NULL
    cdef long long* V = NULL
    try:
        U = _eye(m)
        V = _eye(n)
        _snf_loop(D, U, V, m, n)
        return _dump(U, m, m), _dump(D, m, n), _dump(V, n, n)
    finally:
        free(D)
        if U != NULL:
            free(U)
        if V != NULL:
            free(V)


cdef Py_ssize_t _echelon_loop(long long* E, long long* V, Py_ssize_t m, Py_ssize_t n,
                              Py_ssize_t* cnt, char* done, list pivots) except -1:
    cdef Py_ssize_t i, j, k, pi, pj, rn, cost, best_cost
    cdef Py_ssize_t r = 0
    cdef long long best, v, av, p, q
    cdef bint clean, found
    for i in range(m):
        done[i] = 0
    while r < n:
        for j in range(n):
            cnt[j] = 0
        for i in range(m):
            if not done[i]:
                for j in range(r, n):
                    if E[i * n + j] != 0:
                        cnt[j] += 1
        found = False
        best = 0
        best_cost = 0
        pi = -1
        pj = -1
        for i in range(m):
            if done[i]:
                continue
            rn = 0
            for j in range(r, n):
                if E[i * n + j] != 0:
                    rn += 1
            for j in range(r, n):
                v = E[i * n + j]
                if v != 0:
                    av = _abs(v)
                    cost = (rn - 1) * (cnt[j] - 1)
                    if not found or av < best or (av == best and cost < best_cost):
                        found = True
                        best = av
                        best_cost = cost
                        pi = i
                        pj = j
        if pi < 0:
            break
        while True:
            if pj != r:
                _swap_cols(E, m, n, r, pj, 0)
                _swap_cols(V, n, n, r, pj, 0)
            p = E[pi * n + r]
            clean = True
            for j in range(r + 1, n):
                v = E[pi * n + j]
                if v != 0:
                    q = _nearest(v, p)
                    for k in range(m):
                        E[k * n + j] = E[k * n + j] - q * E[k * n + r]
                    for k in range(n):
                        V[k * n + j] = V[k * n + j] - q * V[k * n + r]
                    if E[pi * n + j] != 0:
                        clean = False
            if clean:
                break
            best = 0
            pj = -1
            for j in range(r, n):
                v = E[pi * n + j]
                if v != 0:
                    av = _abs(v)
                    if best == 0 or av < best:
                        best = av
                        pj = j
        if E[pi * n + r] < 0:
            for k in range(m):
                E[k * n + r] = _neg(E[k * n + r])
            for k in range(n):
                V[k * n + r] = _neg(V[k * n + r])
        done[pi] = 1
        pivots.append(pi)
        r += 1
    return r


def column_echelon(a, Py_ssize_t m, Py_ssize_t n):
    cdef long long* E = _load(a, m, n)
    cdef long long* V = NULL
    cdef Py_ssize_t* cnt = NULL
    cdef char* done = NULL
    cdef Py_ssize_t r
    cdef list pivots = []
    try:
        V = _eye(n)
        cnt = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
        done = <char*> malloc(m + 1)
        if cnt == NULL or done == NULL:
            raise MemoryError()
        r = _echelon_loop(E, V, m, n, cnt, done, pivots)
        return _dump(E, m, n), _dump(V, n, n), r, pivots
    finally:
        free(E)
        if V != NULL:
            free(V)
        if cnt != NULL:
            free(cnt)
        if done != NULL:
            free(done)
