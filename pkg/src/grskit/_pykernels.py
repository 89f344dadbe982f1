"""Pure-Python implementations of the pairwise root-set kernels.

Tables are flat ``array('i')`` of length ``n*n``; entry ``i*n + j`` refers to
the ordered pair ``(vecs[i], vecs[j])``.  The compiled twin in
``_kernels.pyx`` has identical signatures and results.
"""

from __future__ import annotations

from array import array

NEG_SUM, POS_DIFF, ZERO_IFF = 1, 2, 3


def sum_diff_tables(vecs):
    n = len(vecs)
    index = {v: i for i, v in enumerate(vecs)}
    sums = array("i", [-1]) * (n * n)
    diffs = array("i", [-1]) * (n * n)
    get = index.get
    for i, a in enumerate(vecs):
        base = i * n
        for j, b in enumerate(vecs):
            sums[base + j] = get(tuple(x + y for x, y in zip(a, b)), -1)
            diffs[base + j] = get(tuple(x - y for x, y in zip(a, b)), -1)
    return sums, diffs


def sign_table(vecs, gram):
    n = len(vecs)
    cov = [tuple(sum(g[k] * v[k] for k in range(len(v))) for g in gram) for v in vecs]
    out = array("b", [0]) * (n * n)
    for i, a in enumerate(vecs):
        base = i * n
        for j, c in enumerate(cov):
            s = sum(x * y for x, y in zip(a, c))
            out[base + j] = (s > 0) - (s < 0)
    return out


def axiom_violations(signs, sums, diffs, n):
    bad = []
    for i in range(n):
        base = i * n
        for j in range(n):
            k = base + j
            s = signs[k]
            has_sum = sums[k] >= 0
            has_diff = diffs[k] >= 0
            if s < 0:
                if not has_sum:
                    bad.append((i, j, NEG_SUM))
            elif s > 0:
                if not has_diff:
                    bad.append((i, j, POS_DIFF))
            elif has_sum != has_diff:
                bad.append((i, j, ZERO_IFF))
    return bad


def forced_pairs(sums, diffs, n):
    out = []
    for i in range(n):
        base = i * n
        for j in range(i + 1, n):
            if sums[base + j] < 0 and diffs[base + j] < 0:
                out.append((i, j))
    return out


def sums_hit(sums, n, members):
    """Indices ``sums[i, j]`` over unordered pairs drawn from ``members``."""
    hit = set()
    m = list(members)
    for a, i in enumerate(m):
        base = i * n
        for j in m[a:]:
            k = sums[base + j]
            if k >= 0:
                hit.add(k)
    return hit


def zero_rows(vecs, functionals):
    """Indices of vectors annihilated by every functional."""
    return [i for i, v in enumerate(vecs)
            if all(sum(a * b for a, b in zip(f, v)) == 0 for f in functionals)]
