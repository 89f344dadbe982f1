"""End-to-end reports: the sporadic overview table, the series, quotient matching."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from grskit.catalog import (SeriesSpec, all_series, build_series, bundled_fixtures, fixtures_in,
                            parse_label, table1_expected)
from grskit.feasibility import AbstractRootData, Classification, classify_groupoid, expand
from grskit.linalg import SymForm
from grskit.quotient import match_to_quotient
from grskit.rootset import GRS, check_grs_axioms, primitive_roots, rebase

SPORADIC_AMBIENTS = ("F4", "E6", "E7", "E8")
THEOREM_AMBIENTS = SPORADIC_AMBIENTS + tuple(f"{t}{n}" for t in "BCD" for n in range(3, 9))


@dataclass
class Table1Row:
    label: tuple
    primitive_half_count: int
    root_half_count: int | None
    grs_exists: bool
    mechanism: str
    matched_ambient: tuple = ()
    status: str = ""

    def cells(self) -> list[str]:
        h = "-" if self.root_half_count is None else str(self.root_half_count)
        amb = ",".join(self.matched_ambient) or "-"
        return [f"({self.label[0]},{self.label[1]})", str(self.primitive_half_count), h,
                "+" if self.grs_exists else "-", self.mechanism, amb, self.status]


TABLE1_HEADER = ["label", "|W|/2", "(|R|-1)/2", "GRS", "mechanism", "ambients", "status"]


def load_fixtures(extra_dir=None) -> dict:
    """Bundled fixtures plus any ingested files from ``extra_dir`` or ``GRS_KIT_DATA``."""
    data = dict(bundled_fixtures())
    extra_dir = extra_dir or os.environ.get("GRS_KIT_DATA")
    if extra_dir and Path(extra_dir).is_dir():
        for label, d in fixtures_in(extra_dir).items():
            data.setdefault(label, d)
    return data


def mechanism_of(result: Classification) -> str:
    if not result.classes:
        return "isotropic"
    return "quotient-unique" if result.assignment_count == 1 else "special-case"


def certified_grs(data: AbstractRootData, result: Classification) -> list[GRS]:
    return [GRS(expand(data, v.assignment), v.form) for v in result.classes]


def rows_for(data: AbstractRootData, result: Classification, ambients: Sequence[str] = (),
             method: str = "auto") -> list[Table1Row]:
    key = parse_label(data.label)
    w_half = len(data.roots)
    mech = mechanism_of(result)
    if not result.classes:
        return [Table1Row(key, w_half, None, False, mech)]
    rows = []
    for grs in certified_grs(data, result):
        matched = tuple(a for a in ambients
                        if match_to_quotient(grs, (a,), method=method) is not None)
        rows.append(Table1Row(key, w_half, (len(grs.roots) - 1) // 2, True, mech, matched))
    return rows


def table1_report(fixtures: dict | None = None, match: bool = True, method: str = "auto",
                  progress=None) -> list[Table1Row]:
    """One row per expected overview row; computed where data exists, else skipped.

    ``status`` is ``ok``, ``MISMATCH: ...`` or ``skipped: data not ingested``.
    Extra computed rows without an expected counterpart are appended as
    mismatches.
    """
    fixtures = load_fixtures() if fixtures is None else fixtures
    by_key = {}
    for label, d in fixtures.items():
        try:
            by_key[parse_label(label)] = d
        except ValueError:
            continue
    expected = table1_expected()
    computed: dict = {}
    for key, d in sorted(by_key.items()):
        data = d if isinstance(d, AbstractRootData) else AbstractRootData.from_file(d)
        if progress:
            progress(f"classifying ({key[0]},{key[1]})")
        res = classify_groupoid(data)
        amb = SPORADIC_AMBIENTS if match else ()
        computed[key] = rows_for(data, res, amb, method)
    out = []
    for e in expected:
        key = (e.rank, e.index)
        if key not in computed:
            out.append(Table1Row(key, e.primitive_half, e.root_half, e.grs, e.mechanism,
                                 (), "skipped: data not ingested"))
            continue
        cands = computed[key]
        row = next((r for r in cands if r.root_half_count == e.root_half), None)
        if row is None:
            got = ",".join(str(r.root_half_count) for r in cands)
            out.append(Table1Row(key, e.primitive_half, e.root_half, e.grs, e.mechanism, (),
                                 f"MISMATCH: computed (|R|-1)/2 in {{{got}}}"))
            continue
        cands.remove(row)
        problems = []
        if row.primitive_half_count != e.primitive_half:
            problems.append(f"|W|/2 {row.primitive_half_count}")
        if row.grs_exists != e.grs:
            problems.append("GRS flag")
        if row.mechanism != e.mechanism:
            problems.append(f"mechanism {row.mechanism}")
        if match and e.ambients:
            want = tuple(a for a in SPORADIC_AMBIENTS if a in e.ambients)
            if row.matched_ambient != want:
                problems.append(f"ambients {','.join(row.matched_ambient) or '-'}")
        row.status = "MISMATCH: " + "; ".join(problems) if problems else "ok"
        out.append(row)
    for key, rest in sorted(computed.items()):
        for row in rest:
            row.status = "MISMATCH: not in the expected table"
            out.append(row)
    return out


def format_table(rows: Sequence[Sequence[str]], header: Sequence[str], sep: str | None = None) -> str:
    if sep is not None:
        return "\n".join(sep.join(r) for r in [list(header)] + [list(r) for r in rows]) + "\n"
    cols = [list(header)] + [list(r) for r in rows]
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cols) + "\n"


# -- series ------------------------------------------------------------------

def series_data(spec: SeriesSpec) -> AbstractRootData:
    """Primitive roots of a series member in coordinates of a base."""
    grs = build_series(spec)
    prim = sorted(primitive_roots(grs.roots))
    based, _ = rebase(prim, grs.form)
    pos = sorted(v for v in based.roots.nonzero() if all(x >= 0 for x in v))
    return AbstractRootData(based.rank, tuple(tuple(int(x) for x in v) for v in pos), spec.name)


@dataclass
class SeriesReport:
    lines: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def add(self, ok: bool, text: str):
        self.lines.append(("ok    " if ok else "FAIL  ") + text)
        if not ok:
            self.failures.append(text)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        return "\n".join(self.lines) + "\n"


def series_check(n_max: int, progress=None) -> SeriesReport:
    """Axioms for every series member, ``W(BC_n^J) = B_n``, and multiplier classification.

    Axioms are checked under the default series form (the dot product where
    it works).  The dot-product verdict is reported alongside for the
    families whose default form differs.
    """
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    rep = SeriesReport()
    for n in range(3, n_max + 1):
        if progress:
            progress(f"series n={n}")
        b_prim = primitive_roots(build_series(SeriesSpec("B", n)).roots)
        for spec in all_series(n):
            grs = build_series(spec)
            ok = check_grs_axioms(grs.roots, grs.form).valid
            text = f"{spec.name}: axioms"
            if spec.family in ("DC", "BC") and grs.form != SymForm.standard(grs.rank):
                dot = check_grs_axioms(grs.roots, SymForm.standard(grs.rank)).valid
                text += f" (dot product: {'valid' if dot else 'violated'})"
            rep.add(ok, text)
            if spec.family == "BC":
                rep.add(primitive_roots(grs.roots) == b_prim, f"{spec.name}: W = B_{n}")
        # multiplier classification over reduced root sets
        b = classify_groupoid(series_data(SeriesSpec("B", n)))
        rep.add(len(b.certified) == 2 ** n and not b.undecided,
                f"B_{n} data: {len(b.certified)} certified assignments (expected {2 ** n}), "
                f"{len(b.classes)} classes")
        for spec in [SeriesSpec("A", n)] + [s for s in all_series(n) if s.family == "DC"]:
            res = classify_groupoid(series_data(spec))
            only_ones = [v for v in res.certified if set(v.assignment.assignment) == {1}]
            rep.add(len(res.certified) == 1 and len(only_ones) == 1 and not res.undecided,
                    f"{spec.name} data: only the all-1 assignment certified "
                    f"({len(res.certified)} certified, {len(res.undecided)} undecided)")
    return rep


# -- main theorem ------------------------------------------------------------------

@dataclass
class MatchLine:
    label: str
    ambient: str | None
    quotient_label: str = ""

    def __str__(self) -> str:
        if self.ambient is None:
            return f"{self.label}: unmatched"
        return f"{self.label}: matched in {self.ambient} ({self.quotient_label})"


def main_theorem_check(candidates: Sequence[tuple[str, GRS]],
                       ambients: Sequence[str] = THEOREM_AMBIENTS, method: str = "auto",
                       progress=None) -> list[MatchLine]:
    out = []
    for label, grs in candidates:
        hit = match_to_quotient(grs, ambients, method=method, progress=progress)
        if hit is None:
            out.append(MatchLine(label, None))
        else:
            out.append(MatchLine(label, hit[0], hit[1].ambient_label))
    return out


def bundled_certified_grs() -> list[tuple[str, GRS]]:
    """Certified sporadic GRS found by the pipeline on the bundled data."""
    out = []
    for label, d in sorted(bundled_fixtures().items(), key=lambda kv: parse_label(kv[0])):
        data = AbstractRootData.from_file(d)
        res = classify_groupoid(data)
        for k, grs in enumerate(certified_grs(data, res), 1):
            tag = label if len(res.classes) == 1 else f"{label}#{k}"
            out.append((tag, grs))
    return out
