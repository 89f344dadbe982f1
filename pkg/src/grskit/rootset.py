"""Generalized root systems: axioms, primitives, chambers, equivalence.

A :class:`RootSet` is a finite set of exact vectors that always contains the
zero vector.  A :class:`GRS` pairs it with a positive definite
:class:`~grskit.linalg.SymForm`.

Chambers are computed from a *covector* ``w``: the positive roots are those
with ``alpha . w > 0``, and the base is the set of positive roots that are
not a sum of two positive roots.  With a form ``G`` and interior point
``zeta`` the covector is ``G zeta``; form-free routines (equivalence) use a
covector directly, which is legitimate because every linear functional is
``(., zeta)`` for some ``zeta``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from grskit import kernels
from grskit.linalg import (SymForm, Vec, annihilator, dot, integerize, inverse, is_positive_definite,
                           mat_mul, mat_vec, nullspace, norm_scalar, primitive_int, rank,
                           solve_square, transpose, vec, zero_vec)

CLAUSES = {kernels.NEG_SUM: "neg-sum", kernels.POS_DIFF: "pos-diff",
           kernels.ZERO_IFF: "zero-iff"}


class RootSet:
    """Finite set of vectors of a fixed length, zero vector included."""

    __slots__ = ("rank", "roots", "_cache")

    def __init__(self, rank: int, roots: Iterable[Sequence]):
        vs = {vec(v) for v in roots}
        if not vs:
            raise ValueError("no roots")
        if rank < 1:
            raise ValueError("rank must be positive")
        for v in vs:
            if len(v) != rank:
                raise ValueError(f"root {v} does not have length {rank}")
        vs.add(zero_vec(rank))
        self.rank = rank
        self.roots = frozenset(vs)
        self._cache = {}

    def __contains__(self, v) -> bool:
        return tuple(v) in self.roots

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.ordered())

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSet) and self.rank == other.rank and self.roots == other.roots

    def __hash__(self) -> int:
        return hash((self.rank, self.roots))

    def __repr__(self) -> str:
        return f"RootSet(rank={self.rank}, size={len(self.roots)})"

    def ordered(self) -> list[Vec]:
        """Zero first, then the nonzero roots in sorted order."""
        if "ordered" not in self._cache:
            z = zero_vec(self.rank)
            self._cache["ordered"] = [z] + sorted(v for v in self.roots if v != z)
        return self._cache["ordered"]

    def nonzero(self) -> list[Vec]:
        return self.ordered()[1:]

    @property
    def half_count(self):
        """``(|R| - 1) / 2``, the Table-1 style root count."""
        return Fraction(len(self.roots) - 1, 2) if (len(self.roots) - 1) % 2 else (len(self.roots) - 1) // 2

    def span_rank(self) -> int:
        return rank(self.nonzero()) if len(self.roots) > 1 else 0

    def is_negation_closed(self) -> bool:
        return all(tuple(-x for x in v) in self.roots for v in self.roots)

    def image(self, m) -> "RootSet":
        return RootSet(len(m), (mat_vec(m, v) for v in self.roots))

    # cached machinery -----------------------------------------------------

    def integer_vectors(self) -> list[tuple[int, ...]]:
        """``ordered()`` scaled to integers by a common positive factor."""
        if "ivs" not in self._cache:
            self._cache["ivs"] = integerize(self.ordered())[0]
        return self._cache["ivs"]

    def index(self) -> dict:
        if "index" not in self._cache:
            self._cache["index"] = {v: i for i, v in enumerate(self.ordered())}
        return self._cache["index"]

    def tables(self):
        """Flat sum/difference index tables over ``ordered()``."""
        if "tables" not in self._cache:
            self._cache["tables"] = kernels.sum_diff_tables(self.integer_vectors())
        return self._cache["tables"]

    def rays(self) -> dict:
        """Map each nonzero root index to ``(ray id, scalar)`` along its ray."""
        if "rays" not in self._cache:
            ivs = self.integer_vectors()
            rays: dict = {}
            info = {}
            for i, v in enumerate(ivs):
                if i == 0:
                    continue
                p = primitive_int(v)
                g = next(x for x in v if x) // next(x for x in p if x)
                rays.setdefault(p, []).append(i)
                info[i] = (p, g)
            self._cache["rays"] = info
        return self._cache["rays"]


@dataclass(frozen=True)
class GRS:
    roots: RootSet
    form: SymForm

    def __post_init__(self):
        if self.form.rank != self.roots.rank:
            raise ValueError("form and roots have different ranks")
        if not is_positive_definite(self.form):
            raise ValueError("form is not positive definite")

    @property
    def rank(self) -> int:
        return self.roots.rank


@dataclass
class AxiomReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        lines = [f"{len(self.violations)} violation(s)"]
        for a, b, clause in self.violations[:20]:
            lines.append(f"  {clause}: alpha={fmt_vec(a)} beta={fmt_vec(b)}")
        return "\n".join(lines)


def fmt_vec(v) -> str:
    if v is None:
        return "-"
    return "(" + ",".join(str(norm_scalar(x)) for x in v) + ")"


def _int_form(form: SymForm) -> list[tuple[int, ...]]:
    return integerize(form.entries)[0]


def sign_table(roots: RootSet, form: SymForm):
    key = ("signs", form.entries)
    if key not in roots._cache:
        roots._cache[key] = kernels.sign_table(roots.integer_vectors(), _int_form(form))
    return roots._cache[key]


def check_grs_axioms(roots: RootSet, form: SymForm) -> AxiomReport:
    """Check both defining conditions for every ordered pair of roots."""
    if form.rank != roots.rank:
        raise ValueError("form and roots have different ranks")
    if not is_positive_definite(form):
        raise ValueError("form is not positive definite")
    report = AxiomReport()
    if roots.span_rank() != roots.rank:
        report.violations.append((None, None, "span"))
    vs = roots.ordered()
    n = len(vs)
    sums, diffs = roots.tables()
    for i, j, code in kernels.axiom_violations(sign_table(roots, form), sums, diffs, n):
        report.violations.append((vs[i], vs[j], CLAUSES[code]))
    return report


# -- primitives and multipliers ---------------------------------------------

def _primitive_indices(roots: RootSet) -> list[int]:
    if "prim" not in roots._cache:
        info = roots.rays()
        by_ray: dict = {}
        for i, (p, g) in info.items():
            by_ray.setdefault(p, []).append((g, i))
        prim = []
        for members in by_ray.values():
            scalars = [g for g, _ in members]
            for g, i in members:
                if not any(h < g and g % h == 0 for h in scalars):
                    prim.append(i)
        roots._cache["prim"] = sorted(prim)
    return roots._cache["prim"]


def primitive_roots(roots: RootSet) -> frozenset:
    """Nonzero roots that are not ``k * beta`` for a root ``beta`` and ``k >= 2``."""
    vs = roots.ordered()
    return frozenset(vs[i] for i in _primitive_indices(roots))


def multiplier(roots: RootSet, alpha: Sequence) -> int:
    """Largest ``k`` with ``alpha, 2 alpha, ..., k alpha`` all roots."""
    alpha = vec(alpha)
    if alpha not in roots.roots or alpha not in primitive_roots(roots):
        raise ValueError(f"{fmt_vec(alpha)} is not a primitive root")
    k = 1
    while vec((k + 1) * x for x in alpha) in roots.roots:
        k += 1
    return k


def multipliers(roots: RootSet) -> dict:
    return {a: multiplier(roots, a) for a in sorted(primitive_roots(roots))}


# -- chambers ----------------------------------------------------------------

@dataclass(frozen=True)
class Chamber:
    """A base, its positive system, and a point of the open chamber."""

    simple_roots: tuple
    positive_roots: frozenset
    interior_point: Vec

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def walls(self) -> int:
        return len(self.simple_roots)

    def coordinates(self, v: Sequence) -> Vec:
        return coordinates(self, v)


def _covector_values(roots: RootSet, w: Sequence) -> list:
    return [dot(v, w) for v in roots.ordered()]


def generic_point(roots: RootSet, form: SymForm | None = None) -> Vec:
    """Deterministic point off every root hyperplane.

    The functional ``(., zeta)`` is taken to be ``(1, t, ..., t^(r-1))`` for
    the first ``t = M, M+1, ...`` vanishing on no nonzero root, where ``M``
    is one more than the largest absolute root coordinate.  Root data given
    in base coordinates thus keeps its listed positive system.  Without a
    form the covector itself is returned.
    """
    r = roots.rank
    big = max((abs(x) for v in roots.roots for x in v), default=0)
    t = int(Fraction(big).__ceil__()) + 1
    nz = roots.nonzero()
    while True:
        w = tuple(t ** i for i in range(r))
        if all(dot(v, w) != 0 for v in nz):
            break
        t += 1
    if form is None:
        return vec(w)
    return solve_square(form.entries, w)


def _simple_from_positive(roots: RootSet, pos: Sequence[int]) -> list[int]:
    sums, _ = roots.tables()
    hit = kernels.sums_hit(sums, len(roots.ordered()), sorted(pos))
    return [i for i in pos if i not in hit]


def _order_simple(roots: RootSet, simple: Sequence[int]) -> tuple[int, ...]:
    vs = roots.ordered()
    return tuple(sorted(simple, key=lambda i: vs[i], reverse=True))


def _chamber_interior(simple: Sequence[Vec], form: SymForm | None) -> Vec:
    """Point ``zeta`` with ``(alpha_i, zeta) = 1`` on every simple root."""
    r = len(simple)
    if form is None:
        return solve_square(simple, (1,) * r)
    rows = [form.covector(a) for a in simple]
    return solve_square(rows, (1,) * r)


def _make_chamber(roots: RootSet, pos: frozenset, simple: Sequence[int],
                  form: SymForm | None, interior=None) -> Chamber:
    vs = roots.ordered()
    simple_vecs = tuple(vs[i] for i in simple)
    if interior is None:
        interior = _chamber_interior(simple_vecs, form)
    return Chamber(simple_vecs, frozenset(vs[i] for i in pos), vec(interior))


def _positive_from_covector(roots: RootSet, w: Sequence, offending: bool = True) -> frozenset:
    vs = roots.ordered()
    pos = []
    for i, val in enumerate(_covector_values(roots, w)):
        if i == 0:
            continue
        if val == 0:
            raise ValueError(f"point lies on the hyperplane of root {fmt_vec(vs[i])}")
        if val > 0:
            pos.append(i)
    return frozenset(pos)


def _check_simplicial(roots: RootSet, simple: Sequence[int]) -> None:
    if len(simple) != roots.rank:
        raise ValueError(f"chamber has {len(simple)} walls, expected {roots.rank}: "
                         "the root set is not a generalized root system")


def find_base(grs: GRS, interior_point: Sequence | None = None) -> Chamber:
    """Base and positive system of the chamber containing ``interior_point``."""
    roots, form = grs.roots, grs.form
    zeta = vec(interior_point) if interior_point is not None else generic_point(roots, form)
    pos = _positive_from_covector(roots, form.covector(zeta))
    simple = _order_simple(roots, _simple_from_positive(roots, pos))
    _check_simplicial(roots, simple)
    return _make_chamber(roots, pos, simple, form, zeta)


def base_from_covector(roots: RootSet, w: Sequence | None = None) -> Chamber:
    """Form-free variant of :func:`find_base`; the interior point is a covector."""
    if w is None:
        w = generic_point(roots)
    pos = _positive_from_covector(roots, w)
    simple = _order_simple(roots, _simple_from_positive(roots, pos))
    _check_simplicial(roots, simple)
    return _make_chamber(roots, pos, simple, None, vec(w))


def _neg_index(roots: RootSet) -> list[int]:
    if "neg" not in roots._cache:
        idx = roots.index()
        roots._cache["neg"] = [idx.get(tuple(-x for x in v), -1) for v in roots.ordered()]
    return roots._cache["neg"]


def _ray_members(roots: RootSet) -> dict:
    """Map each nonzero root index to the indices on its open ray."""
    if "raymem" not in roots._cache:
        info = roots.rays()
        by_ray: dict = {}
        for i, (p, _) in info.items():
            by_ray.setdefault(p, []).append(i)
        roots._cache["raymem"] = {i: by_ray[p] for i, (p, _) in info.items()}
    return roots._cache["raymem"]


def walk(roots: RootSet, start: frozenset, limit: int | None = None):
    """Breadth-first wall-crossing walk over positive systems.

    Yields ``(positive index set, ordered simple indices)``; chambers are
    deduplicated by their positive systems.
    """
    neg = _neg_index(roots)
    members = _ray_members(roots)
    if any(neg[i] < 0 for i in start):
        raise ValueError("root set is not closed under negation")
    seen = {start}
    queue = deque([start])
    count = 0
    while queue:
        pos = queue.popleft()
        simple = _order_simple(roots, _simple_from_positive(roots, pos))
        _check_simplicial(roots, simple)
        yield pos, simple
        count += 1
        if limit is not None and count >= limit:
            return
        for s in simple:
            flip = members[s]
            new = (pos - set(flip)) | {neg[i] for i in flip}
            new = frozenset(new)
            if new not in seen:
                seen.add(new)
                queue.append(new)


def enumerate_chambers(grs: GRS) -> list[Chamber]:
    start = find_base(grs)
    idx = grs.roots.index()
    pos0 = frozenset(idx[v] for v in start.positive_roots)
    out = [start]
    for pos, simple in walk(grs.roots, pos0):
        if pos == pos0:
            continue
        out.append(_make_chamber(grs.roots, pos, simple, grs.form))
    return out


def count_chambers(roots: RootSet, limit: int | None = None) -> int:
    start = base_from_covector(roots)
    idx = roots.index()
    pos0 = frozenset(idx[v] for v in start.positive_roots)
    return sum(1 for _ in walk(roots, pos0, limit))


def _base_inverse(simple: Sequence[Vec]):
    return inverse(transpose(simple))


def coordinates(chamber: Chamber, v: Sequence) -> Vec:
    """Coordinates of ``v`` with respect to the ordered base of ``chamber``."""
    inv = _base_inverse(chamber.simple_roots)
    return mat_vec(inv, vec(v))


def is_crystallographic(grs, limit: int | None = None) -> bool:
    """Integer coordinates of every primitive root in every chamber; takes a GRS or a RootSet."""
    roots = grs if isinstance(grs, RootSet) else grs.roots
    vs = roots.ordered()
    prim = _primitive_indices(roots)
    try:
        start = base_from_covector(roots) if isinstance(grs, RootSet) else find_base(grs)
    except ValueError:
        return False
    idx = roots.index()
    pos0 = frozenset(idx[v] for v in start.positive_roots)
    try:
        for pos, simple in walk(roots, pos0, limit):
            inv = _base_inverse([vs[i] for i in simple])
            for i in prim:
                if any(Fraction(x).denominator != 1 for x in mat_vec(inv, vs[i])):
                    return False
    except ValueError:
        return False
    return True


# -- re-expression in base coordinates --------------------------------------

def rebase(vectors: Iterable[Sequence], form: SymForm) -> tuple[GRS, tuple]:
    """Express a root set spanning a subspace in coordinates of one of its bases.

    ``form`` is the ambient form.  Returns the full-rank GRS (roots in base
    coordinates, Gram matrix of the base) and the base vectors in ambient
    coordinates.
    """
    vs = sorted({vec(v) for v in vectors})
    r = form.rank
    ambient = RootSet(r, vs)
    zeta = generic_point(ambient, form)
    pos = _positive_from_covector(ambient, form.covector(zeta))
    simple = _order_simple(ambient, _simple_from_positive(ambient, pos))
    base = tuple(ambient.ordered()[i] for i in simple)
    k = len(base)
    if rank(base) != k or k != ambient.span_rank():
        raise ValueError("root set does not have a simplicial base")
    # coordinates through k independent coordinate rows of the base matrix
    bt = transpose(base)  # r x k
    rows = []
    for i in range(r):
        if rank([bt[j] for j in rows] + [bt[i]]) > len(rows):
            rows.append(i)
        if len(rows) == k:
            break
    sq_inv = inverse([bt[i] for i in rows])
    coords = []
    for v in ambient.ordered():
        c = mat_vec(sq_inv, [v[i] for i in rows])
        coords.append(c)
    return GRS(RootSet(k, coords), form.restricted(base)), base


# -- parabolic subsets -------------------------------------------------------

def _annihilator_int(vectors: Sequence[Vec], r: int) -> list[tuple[int, ...]]:
    return annihilator(vectors, r)


def extend_annihilator(funcs: list[tuple[int, ...]], v: Sequence[int]):
    """Functionals vanishing on ``span(old) + <v>``; ``None`` if ``v`` is in the span."""
    vals = [sum(a * b for a, b in zip(f, v)) for f in funcs]
    p = next((q for q, x in enumerate(vals) if x), None)
    if p is None:
        return None
    fp, vp = funcs[p], vals[p]
    out = []
    for q, f in enumerate(funcs):
        if q == p:
            continue
        vq = vals[q]
        if vq == 0:
            out.append(f)
            continue
        g = tuple(vp * a - vq * b for a, b in zip(f, fp))
        out.append(primitive_int(g) if any(g) else g)
    return out


def closure_indices(roots: RootSet, generators: Sequence[Vec]) -> list[int]:
    """Indices (into ``ordered()``) of roots in ``span(generators)``."""
    funcs = _annihilator_int([vec(g) for g in generators], roots.rank)
    ivs = roots.integer_vectors()
    return kernels.zero_rows(ivs, funcs)


def parabolic_closure(roots: RootSet, generators: Iterable[Sequence]) -> RootSet:
    """``R`` intersected with the span of ``generators`` (ambient coordinates)."""
    gens = [vec(g) for g in generators]
    vs = roots.ordered()
    return RootSet(roots.rank, [vs[i] for i in closure_indices(roots, gens)])


def parabolic_grs(grs: GRS, generators: Iterable[Sequence]) -> GRS:
    """The parabolic subsystem as a full-rank GRS in coordinates of its own base."""
    sub = parabolic_closure(grs.roots, generators)
    return rebase(sub.roots, grs.form)[0]


def lines(roots: RootSet) -> list[int]:
    """One index per root line: the primitive root positive under ``generic_point``."""
    if "lines" not in roots._cache:
        w = generic_point(roots)
        vs = roots.ordered()
        out = [i for i in _primitive_indices(roots) if dot(vs[i], w) > 0]
        roots._cache["lines"] = out
    return roots._cache["lines"]


def rank2_flats(roots: RootSet, through: Sequence | None = None) -> list[frozenset]:
    """Rank-2 flats as sets of root-line indices, optionally containing ``through``."""
    if roots.rank < 2:
        raise ValueError("ambient rank must be at least 2")
    ivs = roots.integer_vectors()
    ln = lines(roots)
    line_vecs = [ivs[i] for i in ln]
    r = roots.rank
    if through is not None:
        t = [Fraction(x) for x in vec(through)]
        anchors = [k for k, i in enumerate(ln)
                   if rank([roots.ordered()[i], t]) == 1]
        if not anchors:
            raise ValueError(f"{fmt_vec(through)} is not a root")
        starts = anchors[:1]
    else:
        starts = range(len(ln))
    flats: list[frozenset] = []
    seen_pairs = set()
    for a in starts:
        base = _annihilator_int([line_vecs[a]], r)
        for b in range(len(ln)):
            if b == a or (min(a, b), max(a, b)) in seen_pairs:
                continue
            funcs = extend_annihilator(base, line_vecs[b])
            if funcs is None:
                continue
            members = frozenset(kernels.zero_rows(line_vecs, funcs)) if funcs else frozenset(range(len(ln)))
            for x in members:
                for y in members:
                    if x < y:
                        seen_pairs.add((x, y))
            flats.append(members)
    return flats


def _lines_to_rootset(roots: RootSet, line_ids) -> RootSet:
    ln = lines(roots)
    members = _ray_members(roots)
    neg = _neg_index(roots)
    vs = roots.ordered()
    out = []
    for k in line_ids:
        for i in members[ln[k]]:
            out.append(vs[i])
            if neg[i] >= 0:
                out.append(vs[neg[i]])
    return RootSet(roots.rank, out)


def rank2_parabolics_containing(roots: RootSet, alpha: Sequence) -> list[RootSet]:
    """Every rank-2 parabolic subset whose span contains ``alpha``."""
    flats = rank2_flats(roots, through=alpha)
    out = [_lines_to_rootset(roots, f) for f in flats]
    out.sort(key=lambda p: (len(primitive_roots(p)), p.ordered()))
    return out


def rank2_profile(roots: RootSet) -> tuple:
    """Sorted ``(primitive count, nonzero count)`` over all rank-2 parabolics."""
    if "profile" not in roots._cache:
        ln = lines(roots)
        members = _ray_members(roots)
        prof = []
        if roots.rank >= 2:
            for f in rank2_flats(roots):
                prof.append((2 * len(f), 2 * sum(len(members[ln[k]]) for k in f)))
        roots._cache["profile"] = tuple(sorted(prof))
    return roots._cache["profile"]


def is_irreducible(roots: RootSet, form: SymForm) -> bool:
    """Connectivity of the non-orthogonality graph on primitive roots."""
    prim = _primitive_indices(roots)
    if not prim:
        return False
    signs = sign_table(roots, form)
    n = len(roots.ordered())
    seen = {prim[0]}
    stack = [prim[0]]
    while stack:
        i = stack.pop()
        for j in prim:
            if j not in seen and signs[i * n + j] != 0:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(prim)


# -- equivalence -------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceMap:
    matrix: tuple

    def __call__(self, v: Sequence) -> Vec:
        return mat_vec(self.matrix, vec(v))

    def inverse(self) -> "EquivalenceMap":
        return EquivalenceMap(inverse(self.matrix))


def fingerprint(roots: RootSet) -> tuple:
    """Invariants preserved by every equivalence."""
    if "fingerprint" not in roots._cache:
        mults = tuple(sorted(multipliers(roots).values()))
        roots._cache["fingerprint"] = (roots.rank, len(roots.roots), mults, rank2_profile(roots))
    return roots._cache["fingerprint"]


def _int_inverse(simple_int: Sequence[Sequence[int]]):
    """Inverse of the base matrix as (integer rows, common denominator ``d > 0``).

    Fraction-free Gauss-Jordan elimination on ``[A | I]`` with ``A`` the
    matrix whose columns are the simple roots.
    """
    r = len(simple_int)
    a = [[simple_int[j][i] for j in range(r)] + [1 if k == i else 0 for k in range(r)]
         for i in range(r)]
    for c in range(r):
        p = next(i for i in range(c, r) if a[i][c])
        a[c], a[p] = a[p], a[c]
        pr = a[c]
        for i in range(r):
            if i != c and a[i][c]:
                f, g = a[i][c], pr[c]
                row = [g * x - f * y for x, y in zip(a[i], pr)]
                h = 0
                for x in row:
                    h = gcd(h, x)
                a[i] = [x // h for x in row] if h > 1 else row
    # row i now reads (a_ii e_i | M_i) with M_i = a_ii * (row i of the inverse)
    d = 1
    for i in range(r):
        d = d * abs(a[i][i]) // gcd(d, abs(a[i][i]))
    rows = [tuple(x * (d // a[i][i]) for x in a[i][r:]) for i in range(r)]
    return rows, d


def _chamber_coords(roots: RootSet, pos: Iterable[int], simple: Sequence[int]) -> list[tuple]:
    ivs = roots.integer_vectors()
    adj, d = _int_inverse([ivs[i] for i in simple])
    out = []
    for i in pos:
        v = ivs[i]
        c = tuple(sum(a * b for a, b in zip(row, v)) for row in adj)
        if d != 1:
            c = tuple(Fraction(x, d) for x in c)
        out.append(c)
    return out


def _column_colors(coords: list[tuple], r: int) -> list:
    base = [tuple(sorted(c[i] for c in coords)) for i in range(r)]
    col_id = {c: k for k, c in enumerate(sorted(set(base)))}
    c0 = [col_id[b] for b in base]
    refined = []
    for i in range(r):
        refined.append((c0[i], tuple(sorted(
            (c[i], tuple(sorted((c0[j], c[j]) for j in range(r) if j != i))) for c in coords))))
    ids = {c: k for k, c in enumerate(sorted(set(refined)))}
    return [ids[x] for x in refined]


def canonical_chamber_key(coords: list[tuple], r: int) -> tuple[tuple, tuple]:
    """Permutation-canonical form of a chamber's positive-root coordinates.

    Columns are grouped by relabeling-invariant colors; inside each group all
    orders are tried and the lexicographically least sorted coordinate list
    wins.  Returns the key and the column order producing it.
    """
    colors = _column_colors(coords, r)
    groups = [[i for i in range(r) if colors[i] == c] for c in sorted(set(colors))]
    best = None
    best_perm = None
    for parts in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = tuple(i for part in parts for i in part)
        key = tuple(sorted(tuple(c[p] for p in perm) for c in coords))
        if best is None or key < best:
            best, best_perm = key, perm
    return best, best_perm


def _start_positive(roots: RootSet) -> frozenset:
    return _positive_from_covector(roots, generic_point(roots))


def _key_entries(roots: RootSet):
    for pos, simple in walk(roots, _start_positive(roots)):
        key, perm = canonical_chamber_key(_chamber_coords(roots, sorted(pos), simple), roots.rank)
        yield key, (simple, perm)


def _lookup_key(roots: RootSet, key):
    """Find ``key`` among the chamber keys, walking lazily and memoizing what was seen."""
    cache = roots._cache
    table = cache.setdefault("keytable", {})
    if key in table:
        return table[key]
    it = cache.get("keywalk")
    if it is None:
        if cache.get("keydone"):
            return None
        it = cache["keywalk"] = _key_entries(roots)
    for k, entry in it:
        table.setdefault(k, entry)
        if k == key:
            return table[k]
    cache["keywalk"] = None
    cache["keydone"] = True
    return None


def chamber_key_table(roots: RootSet) -> dict:
    """Canonical key of every chamber mapped to ``(simple indices, column order)``."""
    _lookup_key(roots, None)
    return roots._cache["keytable"]


def _one_chamber_key(roots: RootSet):
    if "onekey" not in roots._cache:
        pos = _start_positive(roots)
        simple = _order_simple(roots, _simple_from_positive(roots, pos))
        _check_simplicial(roots, simple)
        key, perm = canonical_chamber_key(_chamber_coords(roots, sorted(pos), simple), roots.rank)
        roots._cache["onekey"] = (key, simple, perm)
    return roots._cache["onekey"]


def equivalence(source: RootSet, target: RootSet) -> EquivalenceMap | None:
    """A linear isomorphism mapping ``source`` onto ``target``, if one exists.

    Any equivalence sends a base of ``source`` to a base of ``target``, so
    it suffices to fix one chamber of ``source`` and compare its canonical
    coordinate key with the keys of all chambers of ``target``.
    """
    if source.rank != target.rank:
        raise ValueError("root sets have different ranks")
    if fingerprint(source) != fingerprint(target):
        return None
    key, s_simple, s_perm = _one_chamber_key(source)
    hit = _lookup_key(target, key)
    if hit is None:
        return None
    t_simple, t_perm = hit
    sv, tv = source.ordered(), target.ordered()
    s_cols = [sv[s_simple[p]] for p in s_perm]
    t_cols = [tv[t_simple[p]] for p in t_perm]
    m = mat_mul(transpose(t_cols), inverse(transpose(s_cols)))
    emap = EquivalenceMap(m)
    if source.image(m) != target:
        raise AssertionError("equivalence map failed verification")
    return emap
