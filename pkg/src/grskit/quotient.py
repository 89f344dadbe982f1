"""Flats of the root arrangement and restriction (quotient) along them.

A flat is a subspace ``Y`` spanned by roots.  Restricting along ``Y``
projects every root onto ``X = Y^perp``; the image set is again a GRS under
the restricted form.  Quotients are re-expressed in coordinates of one of
their bases so they carry integer vectors.
"""

from __future__ import annotations

import itertools
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from grskit import kernels
from grskit.catalog import RootDataFile, build_classic, root_data_from_grs, save_root_data
from grskit.linalg import mat_vec, orthogonal_projection, rref, vec
from grskit.rootset import (GRS, EquivalenceMap, _annihilator_int, _lines_to_rootset, equivalence,
                            extend_annihilator, find_base, fingerprint, is_irreducible, lines,
                            primitive_roots, rebase)

FULL_SCAN_AMBIENTS = ("F4", "E6")


@dataclass(frozen=True)
class Flat:
    """Root-spanned subspace ``Y`` with its closed root set and canonical basis."""

    spanning_roots: frozenset
    basis: tuple
    line_ids: frozenset = field(default=frozenset(), compare=False, repr=False)

    @property
    def corank(self) -> int:
        """Codimension of ``X = Y^perp``, i.e. ``dim Y``."""
        return len(self.basis)


@dataclass(frozen=True)
class QuotientResult:
    flat: Flat
    quotient: GRS
    ambient_label: str = ""

    @property
    def counts(self) -> tuple[int, int]:
        """``(|W(R)|/2, (|R|-1)/2)`` of the quotient."""
        r = self.quotient.roots
        return len(primitive_roots(r)) // 2, (len(r) - 1) // 2


def _canonical_basis(vectors: Sequence) -> tuple:
    red, _ = rref(vectors)
    return tuple(vec(row) for row in red)


def _make_flat(grs: GRS, line_ids: Iterable[int]) -> Flat:
    roots = grs.roots
    ids = frozenset(line_ids)
    sub = _lines_to_rootset(roots, ids)
    ln = lines(roots)
    vs = roots.ordered()
    basis = _canonical_basis([vs[ln[k]] for k in sorted(ids)])
    return Flat(frozenset(v for v in sub.roots if any(v)), basis, ids)


def flat_from_roots(grs: GRS, generators: Iterable[Sequence]) -> Flat:
    """The flat ``span(generators)``, closed under ``R intersect span``."""
    roots = grs.roots
    gens = [vec(g) for g in generators]
    if not gens:
        raise ValueError("a flat needs at least one generator")
    funcs = _annihilator_int(gens, roots.rank)
    ivs = roots.integer_vectors()
    ln = lines(roots)
    members = kernels.zero_rows([ivs[i] for i in ln], funcs) if funcs else range(len(ln))
    flat = _make_flat(grs, members)
    if len(flat.basis) != len(_canonical_basis(gens)):
        raise ValueError("generators do not span a root-spanned subspace")
    return flat


def _levels(grs: GRS, max_dim: int, progress=None):
    """Flats by dimension as ``{frozenset(line ids): functionals}``, levels 1..max_dim."""
    roots = grs.roots
    ivs = roots.integer_vectors()
    ln = lines(roots)
    line_vecs = [ivs[i] for i in ln]
    r = roots.rank
    level = {}
    for k, v in enumerate(line_vecs):
        funcs = _annihilator_int([v], r)
        members = frozenset(kernels.zero_rows(line_vecs, funcs)) if funcs else frozenset(range(len(ln)))
        level.setdefault(members, funcs)
    out = [level]
    for d in range(2, max_dim + 1):
        nxt = {}
        for members, funcs in out[-1].items():
            covered = set(members)
            for k in range(len(ln)):
                if k in covered:
                    continue
                new_funcs = extend_annihilator(funcs, line_vecs[k])
                closed = frozenset(kernels.zero_rows(line_vecs, new_funcs)) if new_funcs else frozenset(range(len(ln)))
                covered |= closed
                if closed not in nxt:
                    nxt[closed] = new_funcs
        out.append(nxt)
        if progress:
            progress(f"flats of dimension {d}: {len(nxt)}")
    return out


def enumerate_flats(grs: GRS, max_corank: int, progress=None) -> list[Flat]:
    """All flats with ``1 <= dim Y <= max_corank``, by dimension then basis."""
    if not 1 <= max_corank <= grs.rank:
        raise ValueError(f"max_corank must lie in 1..{grs.rank}")
    out = []
    for level in _levels(grs, max_corank, progress):
        flats = [_make_flat(grs, ids) for ids in level]
        flats.sort(key=lambda f: f.basis)
        out += flats
    return out


def flats_of_dimension(grs: GRS, dim: int, progress=None) -> list[Flat]:
    if not 1 <= dim <= grs.rank:
        raise ValueError(f"dimension must lie in 1..{grs.rank}")
    level = _levels(grs, dim, progress)[-1]
    return sorted((_make_flat(grs, ids) for ids in level), key=lambda f: f.basis)


def standard_flats(grs: GRS, dim: int) -> list[Flat]:
    """Flats spanned by ``dim`` simple roots of one base.

    For the root system of a Weyl group every flat is conjugate under the
    Weyl group to one of these, and conjugate flats give isometric
    quotients.
    """
    base = find_base(grs).simple_roots
    seen = {}
    for subset in itertools.combinations(base, dim):
        f = flat_from_roots(grs, subset)
        seen.setdefault(f.basis, f)
    return [seen[k] for k in sorted(seen)]


def restrict(grs: GRS, flat: Flat, label: str = "") -> QuotientResult:
    """Project every root onto ``Y^perp`` and rebase the image set."""
    if flat.corank >= grs.rank:
        raise ValueError("cannot restrict along the whole space")
    p = orthogonal_projection(grs.form, flat.basis)
    images = {mat_vec(p, v) for v in grs.roots.roots}
    quotient, _ = rebase(images, grs.form)
    return QuotientResult(flat, quotient, label)


def _restrict_job(args):
    grs, flat, label = args
    return restrict(grs, flat, label)


@dataclass
class ScanClass:
    """One equivalence class of quotients found by a scan."""

    representative: QuotientResult
    flats: int = 1

    @property
    def counts(self):
        return self.representative.counts


_SCAN_CACHE: dict = {}


def quotient_scan(ambient: str, target_rank: int, method: str = "auto", jobs: int = 1,
                  progress=None) -> list[ScanClass]:
    """Irreducible rank-``target_rank`` quotients of ``ambient`` up to equivalence.

    ``method`` is ``"all"`` (every flat of the intersection lattice),
    ``"standard"`` (flats spanned by simple roots) or ``"auto"`` (all flats
    for F4, E6 and ambients of rank at most 4, standard otherwise).
    """
    grs = build_classic(ambient)
    if not 1 <= target_rank < grs.rank:
        raise ValueError(f"target rank must lie in 1..{grs.rank - 1} for {ambient}")
    if method == "auto":
        method = "all" if ambient in FULL_SCAN_AMBIENTS or grs.rank <= 4 else "standard"
    if method not in ("all", "standard"):
        raise ValueError(f"unknown scan method {method!r}")
    key = (ambient, target_rank, method)
    if key in _SCAN_CACHE:
        return _SCAN_CACHE[key]
    dim = grs.rank - target_rank
    flats = standard_flats(grs, dim) if method == "standard" else flats_of_dimension(grs, dim, progress)
    if progress:
        progress(f"{ambient}: restricting along {len(flats)} flats of dimension {dim}")
    work = [(grs, f, f"{ambient}-corank{dim}") for f in flats]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_restrict_job, work, chunksize=16))
    else:
        results = [_restrict_job(w) for w in work]
    classes: list[ScanClass] = []
    by_fp: dict = {}
    for res in results:
        q = res.quotient
        if not is_irreducible(q.roots, q.form):
            continue
        fp = fingerprint(q.roots)
        bucket = by_fp.setdefault(fp, [])
        for c in bucket:
            if equivalence(q.roots, c.representative.quotient.roots) is not None:
                c.flats += 1
                break
        else:
            c = ScanClass(res)
            bucket.append(c)
            classes.append(c)
    classes.sort(key=lambda c: (c.counts, fingerprint(c.representative.quotient.roots)))
    for i, c in enumerate(classes, 1):
        rep = c.representative
        c.representative = QuotientResult(rep.flat, rep.quotient, f"{ambient}-corank{dim}-{i:02d}")
    _SCAN_CACHE[key] = classes
    if progress:
        progress(f"{ambient}: {len(classes)} classes of irreducible rank-{target_rank} quotients")
    return classes


def match_to_quotient(candidate: GRS, ambients: Sequence[str] = ("F4", "E6", "E7", "E8"),
                      method: str = "auto", progress=None):
    """First ``(ambient, QuotientResult, EquivalenceMap)`` matching ``candidate``, else ``None``.

    The map sends the candidate's roots onto the quotient's roots.
    """
    fp = fingerprint(candidate.roots)
    for amb in ambients:
        grs = build_classic(amb)
        if candidate.rank >= grs.rank:
            continue
        for cls in quotient_scan(amb, candidate.rank, method=method, progress=progress):
            q = cls.representative.quotient
            if fingerprint(q.roots) != fp:
                continue
            emap = equivalence(candidate.roots, q.roots)
            if emap is not None:
                return amb, cls.representative, emap
    return None


def matching_ambients(candidate: GRS, ambients: Sequence[str] = ("F4", "E6", "E7", "E8"),
                      method: str = "auto") -> list[str]:
    """Every ambient among ``ambients`` with a quotient equivalent to ``candidate``."""
    out = []
    for amb in ambients:
        if match_to_quotient(candidate, (amb,), method=method) is not None:
            out.append(amb)
    return out


def export_scan(classes: Sequence[ScanClass], outdir) -> list[Path]:
    """Write one root-data file per class, named after its label."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for c in classes:
        rep = c.representative
        data = root_data_from_grs(rep.quotient, rep.ambient_label)
        path = outdir / f"{rep.ambient_label}.roots"
        save_root_data(data, path)
        paths.append(path)
    return paths


def stderr_progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)
