"""Deciding which multiplier choices on abstract root data admit a form.

Given positive primitive roots in base coordinates (no form), every choice
of multipliers expands to a candidate root set ``R``.  The axioms turn
membership in ``R`` into conditions on an unknown Gram matrix ``G``:

* ``a + b`` and ``a - b`` both missing forces ``(a, b) = 0``;
* exactly one of them present forces a strict sign.

Equalities cut out a linear space of symmetric matrices.  A root whose
norm vanishes on that whole space is a contradiction (it would be
isotropic), as is a strict constraint that vanishes identically.  Otherwise
a certificate is searched: bundled matrices first, then a small rational
grid.  Anything left over is reported as undecided.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from grskit import kernels
from grskit.catalog import RootDataFile, bundled_certificates, format_rational
from grskit.linalg import (SymForm, integerize, is_positive_definite, nullspace, primitive_int,
                           rank, solve_linear, transpose, vec)
from grskit.rootset import (RootSet, check_grs_axioms, equivalence, fingerprint, fmt_vec, multiplier,
                            primitive_roots, rank2_parabolics_containing, rebase)

CEILING = 4


# -- data types ------------------------------------------------------------

@dataclass(frozen=True)
class AbstractRootData:
    """Positive primitive roots in base coordinates, without a form."""

    rank: int
    roots: tuple
    label: str = ""

    def __post_init__(self):
        roots = tuple(tuple(int(x) for x in v) for v in self.roots)
        object.__setattr__(self, "roots", roots)
        if not roots:
            raise ValueError("no roots")
        seen = set()
        for v in roots:
            if len(v) != self.rank:
                raise ValueError(f"root {v} does not have length {self.rank}")
            if not any(v):
                raise ValueError("zero vector listed as a root")
            p = primitive_int(v)
            key = p if next(x for x in p if x) > 0 else tuple(-x for x in p)
            if key in seen:
                raise ValueError(f"roots are not pairwise non-proportional at {fmt_vec(v)}")
            seen.add(key)
        for i in range(self.rank):
            e = tuple(1 if j == i else 0 for j in range(self.rank))
            if e not in roots:
                raise ValueError(f"unit vector {fmt_vec(e)} missing: roots must be given in base coordinates")

    @classmethod
    def from_file(cls, data: RootDataFile) -> "AbstractRootData":
        return cls(data.rank, data.roots, data.label)

    def index(self, v) -> int:
        return self.roots.index(tuple(v))


@dataclass(frozen=True)
class MultiplierMap:
    """Multiplier per positive primitive root, aligned with ``data.roots``."""

    assignment: tuple

    @classmethod
    def ones(cls, data: AbstractRootData) -> "MultiplierMap":
        return cls((1,) * len(data.roots))

    @classmethod
    def from_dict(cls, data: AbstractRootData, values: dict) -> "MultiplierMap":
        for v in values:
            data.index(v)
        return cls(tuple(values.get(v, 1) for v in data.roots))

    def of(self, data: AbstractRootData, v) -> int:
        return self.assignment[data.index(v)]

    def __str__(self) -> str:
        return ",".join(str(k) for k in self.assignment)


@dataclass(frozen=True)
class GramSpace:
    """Symmetric matrices satisfying the forced equalities: ``span(basis)``."""

    rank: int
    basis: tuple  # parameter vectors over the upper-triangle unknowns
    particular: tuple | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def forms(self) -> list[SymForm]:
        return [params_to_form(self.rank, b) for b in self.basis]

    def member(self, coeffs: Sequence) -> SymForm:
        return params_to_form(self.rank, combine(self.basis, coeffs))

    def contains(self, form: SymForm) -> bool:
        p = form_to_params(form)
        return rank(list(self.basis) + [p]) == len(self.basis) if self.basis else not any(p)


@dataclass(frozen=True)
class Witness:
    kind: str  # "isotropy", "sign" or "rank2"
    root: tuple
    orthogonal: tuple = ()
    partner: tuple | None = None

    def __str__(self) -> str:
        if self.kind == "isotropy":
            return f"{fmt_vec(self.root)} _|_ " + ",".join(fmt_vec(b) for b in self.orthogonal)
        if self.kind == "rank2":
            return "no compatible form (exact rank-2 analysis)"
        return f"sign({fmt_vec(self.root)},{fmt_vec(self.partner)}) vanishes identically"


@dataclass(frozen=True)
class FeasibilityVerdict:
    label: str
    assignment: MultiplierMap
    outcome: str  # "certified", "contradiction" or "undecided"
    form: SymForm | None = None
    witness: Witness | None = None
    source: str = ""  # where a certificate came from

    def line(self) -> str:
        if self.outcome == "certified":
            detail = format_matrix(self.form)
        elif self.outcome == "contradiction":
            detail = str(self.witness)
        else:
            detail = "-"
        return f"{self.label}; {self.assignment}; {self.outcome}; {detail}"


def format_matrix(form: SymForm) -> str:
    return "[" + ",".join("[" + ",".join(format_rational(x) for x in row) + "]"
                          for row in form.entries) + "]"


# -- symmetric parameter vectors -------------------------------------------

def sym_index(r: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(r) for j in range(i, r)]


def params_to_form(r: int, p: Sequence) -> SymForm:
    m = [[0] * r for _ in range(r)]
    for (i, j), x in zip(sym_index(r), p):
        m[i][j] = m[j][i] = x
    return SymForm(tuple(tuple(row) for row in m))


def form_to_params(form: SymForm) -> tuple:
    return tuple(form.entries[i][j] for i, j in sym_index(form.rank))


def pair_row(a: Sequence, b: Sequence) -> tuple:
    """Coefficients of ``a^T G b`` in the upper-triangle unknowns of ``G``."""
    r = len(a)
    return tuple(a[i] * b[j] + a[j] * b[i] if i != j else a[i] * b[i] for i, j in sym_index(r))


def combine(basis: Sequence[Sequence], coeffs: Sequence) -> tuple:
    n = len(basis[0])
    out = [0] * n
    for c, b in zip(coeffs, basis):
        if c:
            for i, x in enumerate(b):
                out[i] += c * x
    return vec(out)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _norm_row(row) -> tuple:
    p = primitive_int(row)
    return p


def _norm_eq(row) -> tuple:
    p = primitive_int(row)
    first = next((x for x in p if x), 0)
    return tuple(-x for x in p) if first < 0 else p


# -- expansion and constraints -----------------------------------------------

def expand(data: AbstractRootData, m: MultiplierMap) -> RootSet:
    if len(m.assignment) != len(data.roots):
        raise ValueError("assignment length differs from root count")
    out = []
    for v, k in zip(data.roots, m.assignment):
        if k < 1:
            raise ValueError("multipliers must be positive")
        for j in range(1, k + 1):
            w = tuple(j * x for x in v)
            out += [w, tuple(-x for x in w)]
    return RootSet(data.rank, out)


def _pair_classes(roots: RootSet):
    """Index pairs ``i < j`` of nonzero roots: forced equal, forced negative, forced positive."""
    vs = roots.ordered()
    n = len(vs)
    sums, diffs = roots.tables()
    zero, neg, pos = [], [], []
    for i in range(1, n):
        base = i * n
        for j in range(i + 1, n):
            hs = sums[base + j] >= 0
            hd = diffs[base + j] >= 0
            if not hs and not hd:
                zero.append((i, j))
            elif hs and not hd:
                neg.append((i, j))
            elif hd and not hs:
                pos.append((i, j))
    return zero, neg, pos


def forced_orthogonality(data: AbstractRootData, m: MultiplierMap) -> list[tuple]:
    """Unordered pairs of the expanded set with neither sum nor difference a root."""
    roots = expand(data, m)
    vs = roots.ordered()
    sums, diffs = roots.tables()
    return [(vs[i], vs[j]) for i, j in kernels.forced_pairs(sums, diffs, len(vs)) if i and j]


def strict_constraints(roots: RootSet) -> list[tuple]:
    """Rows ``s`` (upper-triangle coefficients) with ``s . G > 0`` required, and their pairs."""
    vs = roots.ordered()
    _, neg, pos = _pair_classes(roots)
    seen = {}
    for (i, j), sgn in itertools.chain(((p, -1) for p in neg), ((p, 1) for p in pos)):
        row = _norm_row(tuple(sgn * x for x in pair_row(vs[i], vs[j])))
        seen.setdefault(row, (vs[i], vs[j]))
    return [(row, pair) for row, pair in seen.items()]


def _space_from_rows(r: int, rows: Iterable[tuple]) -> GramSpace:
    rows = sorted({_norm_eq(x) for x in rows if any(x)})
    n = r * (r + 1) // 2
    if not rows:
        basis = tuple(tuple(1 if k == i else 0 for k in range(n)) for i in range(n))
    else:
        basis = tuple(_int_vec(b) for b in nullspace(rows, n))
    return GramSpace(r, basis)


def _int_vec(v) -> tuple:
    iv, _ = integerize([v])
    return primitive_int(iv[0])


def gram_equality_space(data: AbstractRootData, pairs: Iterable[tuple]) -> GramSpace:
    """Exact space of symmetric ``G`` with ``a^T G b = 0`` on every pair."""
    r = data.rank
    rows = []
    for a, b in pairs:
        iv, _ = integerize([vec(a), vec(b)])
        rows.append(pair_row(iv[0], iv[1]))
    return _space_from_rows(r, rows)


def _positive_primitive(v) -> tuple:
    iv, _ = integerize([vec(v)])
    p = primitive_int(iv[0])
    return p if next(x for x in p if x) > 0 else tuple(-x for x in p)


def _vanishes(space: GramSpace, row) -> bool:
    return all(_dot(row, b) == 0 for b in space.basis)


def _spanning_subset(vectors: Sequence, r: int) -> tuple | None:
    chosen = []
    for v in vectors:
        if rank(chosen + [v]) > len(chosen):
            chosen.append(v)
            if len(chosen) == r:
                return tuple(chosen)
    return None


def isotropy_witnesses(data: AbstractRootData, m: MultiplierMap, space: GramSpace,
                       pairs: Sequence[tuple] | None = None) -> list[Witness]:
    """Every positive primitive root whose norm vanishes on the whole space.

    Witnesses whose directly forced partners already span come first, each
    group in data order.  The orthogonal set is the first spanning subset of
    partners in data order.
    """
    if pairs is None:
        pairs = forced_orthogonality(data, m)
    r = data.rank
    order = {v: k for k, v in enumerate(data.roots)}
    direct: dict = {}
    for a, b in pairs:
        pa, pb = _positive_primitive(a), _positive_primitive(b)
        direct.setdefault(pa, set()).add(pb)
        direct.setdefault(pb, set()).add(pa)
    first, second = [], []
    for alpha in data.roots:
        if not _vanishes(space, pair_row(alpha, alpha)):
            continue
        partners = sorted(direct.get(alpha, ()), key=lambda v: order.get(v, len(order)))
        span = _spanning_subset(partners, r)
        if span is not None:
            first.append(Witness("isotropy", alpha, span))
            continue
        implied = [b for b in data.roots if _vanishes(space, pair_row(alpha, b))]
        span = _spanning_subset(implied, r)
        second.append(Witness("isotropy", alpha, span if span is not None else tuple(implied)))
    return first + second


def expected_witness_holds(data: AbstractRootData, space: GramSpace, pairs: Sequence[tuple],
                           alpha, orthogonal: Sequence) -> bool:
    """Is ``alpha`` forced isotropic, with every listed vector a directly forced partner spanning V?"""
    alpha = tuple(alpha)
    if not _vanishes(space, pair_row(alpha, alpha)):
        return False
    direct = set()
    for a, b in pairs:
        pa, pb = _positive_primitive(a), _positive_primitive(b)
        if pa == alpha:
            direct.add(pb)
        if pb == alpha:
            direct.add(pa)
    orth = [tuple(v) for v in orthogonal]
    return all(v in direct for v in orth) and rank(orth) == data.rank


def forced_isotropy(data: AbstractRootData, m: MultiplierMap, space: GramSpace,
                    pairs: Sequence[tuple] | None = None, expected=None) -> Witness | None:
    """First isotropy witness; ``expected = (alpha, orthogonal)`` is preferred when it holds."""
    if pairs is None:
        pairs = forced_orthogonality(data, m)
    if expected is not None and expected_witness_holds(data, space, pairs, *expected):
        return Witness("isotropy", tuple(expected[0]), tuple(tuple(v) for v in expected[1]))
    ws = isotropy_witnesses(data, m, space, pairs)
    return ws[0] if ws else None


def sign_contradiction(roots: RootSet, space: GramSpace) -> Witness | None:
    """A strict constraint that is identically zero on the space, if any."""
    for row, (a, b) in strict_constraints(roots):
        if _vanishes(space, row):
            return Witness("sign", _positive_primitive(a), (), vec(b))
    return None


def verify_witness(data: AbstractRootData, m: MultiplierMap, witness: Witness) -> bool:
    """Re-derive a witness from scratch: forced partners span and the norm vanishes."""
    space = gram_equality_space(data, forced_orthogonality(data, m))
    if witness.kind == "sign":
        return sign_contradiction(expand(data, m), space) is not None
    if not _vanishes(space, pair_row(witness.root, witness.root)):
        return False
    if rank(list(witness.orthogonal)) != data.rank:
        return False
    return all(_vanishes(space, pair_row(witness.root, b)) for b in witness.orthogonal)


# -- certificates ----------------------------------------------------------------

def verify_certificate(data: AbstractRootData, m: MultiplierMap, form: SymForm) -> bool:
    """Positive definite, the expanded set satisfies the axioms, multipliers match."""
    if form.rank != data.rank:
        raise ValueError(f"form has size {form.rank}, data has rank {data.rank}")
    if not is_positive_definite(form):
        return False
    roots = expand(data, m)
    if not check_grs_axioms(roots, form).valid:
        return False
    return all(multiplier(roots, v) == k for v, k in zip(data.roots, m.assignment))


GRID_SCALES = (1, 2, 3)


def grid_values(scale: int | None = None) -> list[Fraction]:
    """``k/s`` for ``|k| <= 3``; by absolute value, positives first.

    Without ``scale`` every ``s`` in 1, 2, 3 is pooled.
    """
    scales = GRID_SCALES if scale is None else (scale,)
    vals = {Fraction(k, s) for k in range(-3, 4) for s in scales}
    return sorted(vals, key=lambda x: (abs(x), -x))


GRID_DEN = 6  # common denominator of every grid value


def _grid(dim: int):
    """Scale 1 first, then 1/2, then 1/3; inside a scale by the largest value index.

    A point already offered at an earlier scale is skipped.  Points are
    yielded as integer numerators over ``GRID_DEN``.
    """
    earlier: list[set] = []
    for s in GRID_SCALES:
        vals = [int(v * GRID_DEN) for v in grid_values(s)]
        rank_of = {v: i for i, v in enumerate(vals)}
        for top in range(len(vals)):
            for combo in itertools.product(vals[:top + 1], repeat=dim):
                if max(rank_of[c] for c in combo) != top:
                    continue
                if any(all(c in e for c in combo) for e in earlier):
                    continue
                yield combo
        earlier.append(set(vals))


def search_certificate(data: AbstractRootData, m: MultiplierMap, space: GramSpace,
                       limit: int | None = 200000, roots: RootSet | None = None) -> SymForm | None:
    """First grid point of the space passing every strict constraint and PD, verified."""
    if space.dim == 0:
        return None
    roots = roots if roots is not None else expand(data, m)
    strict = [row for row, _ in strict_constraints(roots)]
    # strict rows in space coordinates, cleared of denominators (signs are kept)
    coeff_rows = [integerize([tuple(_dot(row, b) for b in space.basis)])[0][0] for row in strict]
    if any(not any(c) for c in coeff_rows):
        return None
    coeff_rows = sorted(set(coeff_rows))
    tried = 0
    for combo in _grid(space.dim):
        tried += 1
        if limit is not None and tried > limit:
            return None
        if any(sum(a * b for a, b in zip(c, combo)) <= 0 for c in coeff_rows):
            continue
        form = space.member([Fraction(x, GRID_DEN) for x in combo])
        if not is_positive_definite(form):
            continue
        if verify_certificate(data, m, form):
            return form
    return None


def _cert_key(rank_: int, roots: Iterable, mults: Iterable) -> tuple:
    return rank_, frozenset(zip((tuple(v) for v in roots), mults))


_BUNDLED: dict | None = None


def bundled_certificate(data: AbstractRootData, m: MultiplierMap) -> tuple[SymForm, str] | None:
    global _BUNDLED
    if _BUNDLED is None:
        _BUNDLED = {}
        for c in bundled_certificates():
            key = _cert_key(c.rank, c.roots, c.multipliers or (1,) * len(c.roots))
            _BUNDLED[key] = (c.form, c.label)
    return _BUNDLED.get(_cert_key(data.rank, data.roots, m.assignment))


# -- rank two ---------------------------------------------------------------

def _rank2_constraints(roots: RootSet):
    vs = roots.ordered()
    zero, neg, pos = _pair_classes(roots)
    iv = roots.integer_vectors()
    eq = sorted({_norm_eq(pair_row(iv[i], iv[j])) for i, j in zero})
    strict = set()
    for (i, j) in neg:
        strict.add(_norm_row(tuple(-x for x in pair_row(iv[i], iv[j]))))
    for (i, j) in pos:
        strict.add(_norm_row(pair_row(iv[i], iv[j])))
    return eq, sorted(strict)


def _nudge(f, best, lo, hi):
    """A point strictly inside ``(lo, hi)`` near ``best`` where ``f > 0``."""
    if (lo is None or best > lo) and (hi is None or best < hi):
        return best
    for k in range(1, 200):
        step = Fraction(1, 2 ** k)
        if lo is not None and hi is not None:
            t = best + (hi - lo) * step if best <= lo else best - (hi - lo) * step
        elif lo is not None:
            t = best + step
        else:
            t = best - step
        if (lo is None or t > lo) and (hi is None or t < hi) and f(t) > 0:
            return t
    raise AssertionError("no interior point found")


def _interval(rows):
    """Open interval of ``t`` with ``r0 + r1 t > 0`` for every ``(r0, r1)``; ``None`` if empty."""
    lo = hi = None
    for r0, r1 in rows:
        if r1 == 0:
            if r0 <= 0:
                return None
            continue
        t = Fraction(-r0) / r1
        if r1 > 0:
            lo = t if lo is None else max(lo, t)
        else:
            hi = t if hi is None else min(hi, t)
    if lo is not None and hi is not None and lo >= hi:
        return None
    return lo, hi


def _rank2_point(eq: Sequence, strict: Sequence) -> tuple | None:
    """A point ``(a, b, c)`` with ``a = 1``, all constraints and ``c > b^2``; else ``None``."""
    A = [list(r) for r in eq] + [[1, 0, 0]]
    sol = solve_linear(A, [0] * len(eq) + [1])
    if sol is None:
        return None
    p = sol.particular
    d = sol.dim

    def ok(x):
        return all(_dot(s, x) > 0 for s in strict) and x[2] - x[1] ** 2 > 0

    if d == 0:
        return p if ok(p) else None
    if d == 1:
        u = sol.basis[0]
        iv = _interval([(_dot(s, p), _dot(s, u)) for s in strict])
        if iv is None:
            return None
        lo, hi = iv

        def q(t):
            return (p[2] + t * u[2]) - (p[1] + t * u[1]) ** 2

        if u[1] != 0:
            best = Fraction(u[2] - 2 * p[1] * u[1], 2 * u[1] ** 2)
            if lo is not None:
                best = max(best, lo)
            if hi is not None:
                best = min(best, hi)
        else:
            if (u[2] > 0 and hi is None) or (u[2] < 0 and lo is None):
                base = lo if lo is not None else (hi if hi is not None else Fraction(0))
                t = base
                while not ((lo is None or t > lo) and (hi is None or t < hi) and q(t) > 0):
                    t = t + (1 if u[2] > 0 else -1) * max(1, abs(t))
                x = tuple(a + t * b for a, b in zip(p, u))
                return x if ok(x) else None
            cands = [t for t in (lo, hi) if t is not None] or [Fraction(0)]
            best = max(cands, key=q)
        if q(best) <= 0:
            return None
        t = _nudge(q, best, lo, hi)
        x = tuple(a + t * b for a, b in zip(p, u))
        return x if ok(x) else None
    # d == 2: b and c are free, x = (1, b, c)
    lowers, uppers, brows = [], [], []
    for s0, s1, s2 in strict:
        if s2 > 0:
            lowers.append((Fraction(-s0, s2), Fraction(-s1, s2)))  # c > l0 + l1 b
        elif s2 < 0:
            uppers.append((Fraction(-s0, s2), Fraction(-s1, s2)))  # c < u0 + u1 b
        else:
            brows.append((s0, s1))
    for l0, l1 in lowers:
        for u0, u1 in uppers:
            brows.append((u0 - l0, u1 - l1))
    iv = _interval(brows)
    if iv is None:
        return None
    lo, hi = iv

    def upper(b):
        return min(u0 + u1 * b for u0, u1 in uppers) if uppers else None

    def lower(b):
        return max([l0 + l1 * b for l0, l1 in lowers] + [b * b])

    if not uppers:
        b = _nudge(lambda t: 1, lo if lo is not None else (hi if hi is not None else Fraction(0)), lo, hi) \
            if lo is not None or hi is not None else Fraction(0)
        c = lower(b) + 1
        x = (Fraction(1), b, c)
        return x if ok(x) else None

    def phi(b):
        return upper(b) - b * b

    cands = [Fraction(u1, 2) for _, u1 in uppers]
    for (u0, u1), (w0, w1) in itertools.combinations(uppers, 2):
        if u1 != w1:
            cands.append(Fraction(w0 - u0, u1 - w1))
    cands += [t for t in (lo, hi) if t is not None]
    cands = [t for t in cands if (lo is None or t >= lo) and (hi is None or t <= hi)]
    if not cands:
        return None
    best = max(cands, key=phi)
    if phi(best) <= 0:
        return None
    b = _nudge(phi, best, lo, hi)
    lw, up = lower(b), upper(b)
    if lw >= up:
        return None
    x = (Fraction(1), b, (lw + up) / 2)
    return x if ok(x) else None


def rank2_form(roots: RootSet) -> SymForm | None:
    """A form making a rank-2 root set a GRS, or ``None`` if none exists."""
    if roots.rank != 2:
        raise ValueError("rank must be 2")
    if roots.span_rank() != 2:
        return None
    eq, strict = _rank2_constraints(roots)
    x = _rank2_point(eq, strict)
    if x is None:
        return None
    return params_to_form(2, x)


def rank2_feasibility(data: AbstractRootData, m: MultiplierMap) -> bool:
    """Exact decision: does the expanded rank-2 set admit a compatible form?"""
    if data.rank != 2:
        raise ValueError("rank must be 2")
    return rank2_form(expand(data, m)) is not None


# -- multiplier caps -------------------------------------------------------------

def _signed(data: AbstractRootData) -> RootSet:
    return RootSet(data.rank, [v for a in data.roots for v in (a, tuple(-x for x in a))])


def _positive_in(vectors) -> list[tuple]:
    return sorted(v for v in vectors if any(v) and next(x for x in v if x) > 0)


def parabolic_data(sub: RootSet, label: str = "") -> tuple[AbstractRootData, dict]:
    """Rank-2 (or any) parabolic re-expressed in its own base coordinates.

    Returns the data and a map from each ambient primitive to its new
    coordinates.
    """
    prim = sorted(primitive_roots(sub))
    grs, base = rebase(prim, SymForm.standard(sub.rank))
    bt = transpose(base)
    mapping = {}
    for v in prim:
        sol = solve_linear(bt, v)
        mapping[v] = tuple(int(x) for x in sol.particular) if sol.particular is not None else (0,) * len(base)
    pos = {v: w for v, w in mapping.items() if all(x >= 0 for x in w)}
    data = AbstractRootData(len(base), tuple(sorted(pos.values())), label)
    return data, pos


def _rank2_max(sub: RootSet, alpha: tuple, ceiling: int) -> int:
    data, mp = parabolic_data(sub)
    a2 = mp.get(alpha) or mp[tuple(-x for x in alpha)]
    best = 0
    for k in range(1, ceiling + 1):
        m = MultiplierMap.from_dict(data, {a2: k})
        if rank2_feasibility(data, m):
            best = k
    return best


def _parabolics(data: AbstractRootData, alpha) -> list[RootSet]:
    return rank2_parabolics_containing(_signed(data), alpha)


def check_parabolic8_structure(data: AbstractRootData, alpha) -> bool:
    """Does an 8-root rank-2 parabolic of ``alpha`` have positives ``alpha, g, g - alpha, g + alpha``?"""
    alpha = tuple(alpha)
    eights = [P for P in _parabolics(data, alpha) if len(primitive_roots(P)) == 8]
    if not eights:
        raise ValueError(f"{fmt_vec(alpha)} lies in no rank-2 parabolic with 8 primitive roots")
    for P in eights:
        prim = primitive_roots(P)
        for g in prim:
            want = {alpha, g, tuple(x - y for x, y in zip(g, alpha)), tuple(x + y for x, y in zip(g, alpha))}
            full = want | {tuple(-x for x in v) for v in want}
            if full == set(prim):
                return True
    return False


def multiplier_caps(data: AbstractRootData, ceiling: int = CEILING, strict: bool = False) -> dict:
    """Upper bound on the multiplier of each positive primitive root.

    A root in a rank-2 parabolic with 6 primitives gets 1, one in a rank-2
    parabolic with 8 primitives gets 2, and every other root gets the
    ceiling.  With ``strict`` the bound is sharpened by the rank-2 engine:
    the cap is the minimum over all rank-2 parabolics of the largest
    multiplier the engine accepts there (other roots at 1), and 8-root
    parabolics without the ``alpha, g, g -+ alpha`` shape force 1.
    """
    caps = {}
    for alpha in data.roots:
        pars = _parabolics(data, alpha)
        sizes = [len(primitive_roots(P)) for P in pars]
        if 6 in sizes:
            caps[alpha] = 1
        elif strict:
            if 8 in sizes and not check_parabolic8_structure(data, alpha):
                caps[alpha] = 1
            else:
                top = 2 if 8 in sizes else ceiling
                caps[alpha] = max(1, min([_rank2_max(P, alpha, top) for P in pars] or [top]))
        elif 8 in sizes:
            caps[alpha] = min(2, ceiling)
        else:
            caps[alpha] = ceiling
    return caps


# -- assignment-independent forcing ----------------------------------------------

def forced_minimums(data: AbstractRootData, caps: dict) -> dict:
    """Roots whose cap-2 choice cannot be 1, from assignment-independent reasoning.

    With the tested root at multiplier 1, a vector is surely absent if it is
    no multiple ``j g`` (``j <= cap``) of a primitive ``g``, and surely
    present if it is a signed primitive.  Pairs of surely present vectors
    whose sum and difference are surely absent must be orthogonal; an
    isotropic root under those equalities rules multiplier 1 out.
    """
    out = {}
    r = data.rank
    signed = [v for a in data.roots for v in (a, tuple(-x for x in a))]
    for rho in data.roots:
        if caps[rho] != 2:
            continue
        maybe = set()
        for g in data.roots:
            top = 1 if g == rho else caps[g]
            for j in range(1, top + 1):
                w = tuple(j * x for x in g)
                maybe.add(w)
                maybe.add(tuple(-x for x in w))
        maybe.add((0,) * r)
        pairs = []
        for a, b in itertools.combinations(signed, 2):
            s = tuple(x + y for x, y in zip(a, b))
            d = tuple(x - y for x, y in zip(a, b))
            if s not in maybe and d not in maybe:
                pairs.append((a, b))
        space = gram_equality_space(data, pairs)
        m1 = MultiplierMap.ones(data)
        if forced_isotropy(data, m1, space, pairs) is not None:
            out[rho] = 2
    return out


# -- pipeline ----------------------------------------------------------------------

def decide(data: AbstractRootData, m: MultiplierMap, use_bundled: bool = True,
           grid_limit: int | None = 200000, expected=None) -> FeasibilityVerdict:
    """Run the full pipeline on one assignment."""
    label = data.label
    roots = expand(data, m)
    pairs = forced_orthogonality(data, m)
    space = gram_equality_space(data, pairs)
    w = forced_isotropy(data, m, space, pairs, expected)
    if w is not None:
        return FeasibilityVerdict(label, m, "contradiction", witness=w)
    w = sign_contradiction(roots, space)
    if w is not None:
        return FeasibilityVerdict(label, m, "contradiction", witness=w)
    if use_bundled:
        hit = bundled_certificate(data, m)
        if hit is not None and verify_certificate(data, m, hit[0]):
            return FeasibilityVerdict(label, m, "certified", form=hit[0], source=hit[1])
    if data.rank == 2:
        form = rank2_form(roots)
        if form is not None and verify_certificate(data, m, form):
            return FeasibilityVerdict(label, m, "certified", form=form, source="rank-2 engine")
        if form is None:
            return FeasibilityVerdict(label, m, "contradiction", witness=Witness("rank2", data.roots[0]))
    form = search_certificate(data, m, space, grid_limit, roots)
    if form is not None:
        return FeasibilityVerdict(label, m, "certified", form=form, source="grid")
    return FeasibilityVerdict(label, m, "undecided")


@dataclass
class Classification:
    label: str
    caps: dict
    forced: dict
    verdicts: list = field(default_factory=list)
    classes: list = field(default_factory=list)  # one certified verdict per equivalence class

    @property
    def assignment_count(self) -> int:
        return len(self.verdicts)

    @property
    def certified(self) -> list:
        return [v for v in self.verdicts if v.outcome == "certified"]

    @property
    def contradicted(self) -> list:
        return [v for v in self.verdicts if v.outcome == "contradiction"]

    @property
    def undecided(self) -> list:
        return [v for v in self.verdicts if v.outcome == "undecided"]

    def summary(self) -> str:
        if not self.certified:
            if self.undecided:
                return f"undecided: {len(self.undecided)} assignment(s) neither certified nor contradicted"
            w = self.contradicted[0].witness if self.verdicts else None
            return f"no GRS: witness {fmt_vec(w.root)}" if w else "no GRS"
        s = f"{len(self.classes)} class(es) of GRS from {len(self.certified)} certified assignment(s)"
        if self.undecided:
            s += f"; {len(self.undecided)} undecided"
        return s

    def lines(self) -> list[str]:
        return [v.line() for v in self.verdicts]


def _decide_job(args):
    return decide(*args)


def assignments(data: AbstractRootData, caps: dict, forced: dict | None = None):
    """All assignments within caps, respecting forced minimums, in product order."""
    forced = forced or {}
    ranges = [range(forced.get(v, 1), caps[v] + 1) for v in data.roots]
    for combo in itertools.product(*ranges):
        yield MultiplierMap(combo)


def expected_witness_for(label: str):
    """Bundled ``(alpha, orthogonal)`` expectation for a label, if tabulated."""
    from grskit.catalog import parse_label, table2_expected
    try:
        key = parse_label(label)
    except ValueError:
        return None
    for row in table2_expected():
        if (row.rank, row.index) == key:
            return row.alpha, row.witnesses
    return None


def classify_groupoid(data: AbstractRootData, caps: dict | None = None, strict_caps: bool = False,
                      use_bundled: bool = True, jobs: int = 1, grid_limit: int | None = 200000,
                      expected="auto", progress=None) -> Classification:
    """Every admissible multiplier assignment, its verdict, and the certified classes.

    ``expected`` is an ``(alpha, orthogonal)`` witness to report when it
    holds; ``"auto"`` looks it up in the bundled table of discarded cases.
    """
    if caps is None:
        caps = multiplier_caps(data, strict=strict_caps)
    forced = forced_minimums(data, caps)
    ms = list(assignments(data, caps, forced))
    if progress:
        progress(f"{data.label}: {len(ms)} assignment(s) after forcing")
    if expected == "auto":
        expected = expected_witness_for(data.label)
    work = [(data, m, use_bundled, grid_limit, expected) for m in ms]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            verdicts = list(ex.map(_decide_job, work))
    else:
        verdicts = [_decide_job(w) for w in work]
    result = Classification(data.label, caps, forced, verdicts)
    reps: list[RootSet] = []  # kept so each class's chamber table is built once
    for v in result.certified:
        rs = expand(data, v.assignment)
        fp = fingerprint(rs)
        if not any(fingerprint(t) == fp and equivalence(rs, t) is not None for t in reps):
            result.classes.append(v)
            reps.append(rs)
    return result
