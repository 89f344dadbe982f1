# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled pairwise root-set kernels.

Same signatures and results as ``grskit._pykernels``.  Integer vectors are
packed into int64 keys with a balanced-digit encoding so that
``key(a + b) == key(a) + key(b)``; lookups are binary searches over the
sorted keys.  Inputs whose magnitudes could overflow int64 are delegated to
the pure-Python implementation.
"""

from array import array

from libc.stdlib cimport free, malloc, qsort

from grskit import _pykernels

ctypedef long long i64

cdef struct KeyIdx:
    i64 key
    int idx

cdef i64 LIMIT = (<i64>1) << 62

NEG_SUM, POS_DIFF, ZERO_IFF = 1, 2, 3


cdef int _cmp(const void* a, const void* b) noexcept nogil:
    cdef i64 ka = (<KeyIdx*>a).key
    cdef i64 kb = (<KeyIdx*>b).key
    return (ka > kb) - (ka < kb)


cdef inline int _find(KeyIdx* tab, int n, i64 key) noexcept nogil:
    cdef int lo = 0, hi = n - 1, mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if tab[mid].key < key:
            lo = mid + 1
        elif tab[mid].key > key:
            hi = mid - 1
        else:
            return tab[mid].idx
    return -1


def _keys(vecs):
    """Python-int keys, or None when the encoding would overflow."""
    if not vecs:
        return []
    r = len(vecs[0])
    m = max(max(abs(x) for x in v) for v in vecs) if r else 0
    base = 4 * m + 1
    if base ** r >= LIMIT:
        return None
    keys = []
    for v in vecs:
        k = 0
        p = 1
        for x in v:
            k += x * p
            p *= base
        keys.append(k)
    return keys


def sum_diff_tables(vecs):
    keys = _keys(vecs)
    if keys is None:
        return _pykernels.sum_diff_tables(vecs)
    cdef int n = len(vecs)
    sums = array("i", [-1]) * (n * n)
    diffs = array("i", [-1]) * (n * n)
    if n == 0:
        return sums, diffs
    cdef int[:] s = sums
    cdef int[:] d = diffs
    cdef KeyIdx* tab = <KeyIdx*>malloc(n * sizeof(KeyIdx))
    cdef i64* k = <i64*>malloc(n * sizeof(i64))
    cdef int i, j
    try:
        for i in range(n):
            k[i] = keys[i]
            tab[i].key = k[i]
            tab[i].idx = i
        with nogil:
            qsort(tab, n, sizeof(KeyIdx), _cmp)
            for i in range(n):
                for j in range(n):
                    s[i * n + j] = _find(tab, n, k[i] + k[j])
                    d[i * n + j] = _find(tab, n, k[i] - k[j])
    finally:
        free(tab)
        free(k)
    return sums, diffs


def sign_table(vecs, gram):
    cdef int n = len(vecs)
    out = array("b", [0]) * (n * n)
    if n == 0:
        return out
    cdef int r = len(vecs[0])
    mv = max(max(abs(x) for x in v) for v in vecs) if r else 0
    mg = max(max(abs(x) for x in row) for row in gram) if r else 0
    if mv * mv * mg * r * r >= LIMIT:
        return _pykernels.sign_table(vecs, gram)
    cdef signed char[:] o = out
    cdef i64* v = <i64*>malloc(n * r * sizeof(i64))
    cdef i64* c = <i64*>malloc(n * r * sizeof(i64))
    cdef i64* g = <i64*>malloc(r * r * sizeof(i64))
    cdef int i, j, a, b
    cdef i64 acc
    try:
        for i in range(n):
            for a in range(r):
                v[i * r + a] = vecs[i][a]
        for a in range(r):
            for b in range(r):
                g[a * r + b] = gram[a][b]
        with nogil:
            for i in range(n):
                for a in range(r):
                    acc = 0
                    for b in range(r):
                        acc += g[a * r + b] * v[i * r + b]
                    c[i * r + a] = acc
            for i in range(n):
                for j in range(n):
                    acc = 0
                    for a in range(r):
                        acc += v[i * r + a] * c[j * r + a]
                    o[i * n + j] = (acc > 0) - (acc < 0)
    finally:
        free(v)
        free(c)
        free(g)
    return out


def axiom_violations(signed char[:] signs, int[:] sums, int[:] diffs, int n):
    bad = []
    cdef int i, j, k
    cdef signed char sg
    cdef bint hs, hd
    for i in range(n):
        for j in range(n):
            k = i * n + j
            sg = signs[k]
            hs = sums[k] >= 0
            hd = diffs[k] >= 0
            if sg < 0:
                if not hs:
                    bad.append((i, j, NEG_SUM))
            elif sg > 0:
                if not hd:
                    bad.append((i, j, POS_DIFF))
            elif hs != hd:
                bad.append((i, j, ZERO_IFF))
    return bad


def forced_pairs(int[:] sums, int[:] diffs, int n):
    out = []
    cdef int i, j
    for i in range(n):
        for j in range(i + 1, n):
            if sums[i * n + j] < 0 and diffs[i * n + j] < 0:
                out.append((i, j))
    return out


def sums_hit(int[:] sums, int n, members):
    cdef int m = len(members)
    if m == 0:
        return set()
    cdef int* mem = <int*>malloc(m * sizeof(int))
    cdef char* mark = <char*>malloc(n * sizeof(char))
    cdef int a, b, i, k
    try:
        for a in range(m):
            mem[a] = members[a]
        for i in range(n):
            mark[i] = 0
        with nogil:
            for a in range(m):
                i = mem[a]
                for b in range(a, m):
                    k = sums[i * n + mem[b]]
                    if k >= 0:
                        mark[k] = 1
        return {i for i in range(n) if mark[i]}
    finally:
        free(mem)
        free(mark)


def zero_rows(vecs, functionals):
    cdef int n = len(vecs)
    cdef int f = len(functionals)
    if n == 0:
        return []
    if f == 0:
        return list(range(n))
    cdef int r = len(vecs[0])
    mv = max(max(abs(x) for x in v) for v in vecs) if r else 0
    mf = max(max(abs(x) for x in row) for row in functionals) if r else 0
    if mv * mf * r >= LIMIT:
        return _pykernels.zero_rows(vecs, functionals)
    cdef i64* v = <i64*>malloc(n * r * sizeof(i64))
    cdef i64* fn = <i64*>malloc(f * r * sizeof(i64))
    cdef char* ok = <char*>malloc(n * sizeof(char))
    cdef int i, a, q
    cdef i64 acc
    try:
        for i in range(n):
            for a in range(r):
                v[i * r + a] = vecs[i][a]
        for q in range(f):
            for a in range(r):
                fn[q * r + a] = functionals[q][a]
        with nogil:
            for i in range(n):
                ok[i] = 1
                for q in range(f):
                    acc = 0
                    for a in range(r):
                        acc += fn[q * r + a] * v[i * r + a]
                    if acc != 0:
                        ok[i] = 0
                        break
        return [i for i in range(n) if ok[i]]
    finally:
        free(v)
        free(fn)
        free(ok)
