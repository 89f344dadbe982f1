"""Classic root systems, the infinite series, and the root-data file format.

File format (UTF-8, line oriented; ``#`` starts a comment, blank lines are
ignored)::

    rank 3
    label (3,8)
    form                # optional: r rows of r rationals p/q or integers
    3 0 -1
    0 2 -1
    -1 -1 1
    multipliers         # optional: one positive integer per root line
    2
    1
    ...
    roots               # one positive root per line, r integers
    0 0 1
    0 1 0
    ...

Only positive roots are stored; loading closes the set under negation.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from math import gcd
from pathlib import Path

from grskit.linalg import SymForm, norm_scalar
from grskit.rootset import GRS, RootSet, parabolic_closure, rebase

SERIES_FAMILIES = ("A", "B", "C", "D", "DC", "BC")
EXCEPTIONAL_TYPES = ("E6", "E7", "E8", "F4", "G2")


# -- series --------------------------------------------------------------

@dataclass(frozen=True)
class SeriesSpec:
    family: str
    n: int
    J: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "J", frozenset(self.J))
        if self.family not in SERIES_FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.family == "A" and self.n < 2:
            raise ValueError("A_{n-1} needs n >= 2")
        if not self.J <= frozenset(range(1, self.n + 1)):
            raise ValueError(f"J must be a subset of 1..{self.n}")
        if self.J and self.family in ("A", "B", "C", "D"):
            raise ValueError(f"family {self.family} takes no J")

    @property
    def name(self) -> str:
        if self.family in ("DC", "BC"):
            js = ",".join(str(j) for j in sorted(self.J))
            return f"{self.family}_{self.n}^{{{js}}}"
        if self.family == "A":
            return f"A_{self.n - 1}"
        return f"{self.family}_{self.n}"


def _unit(n, i, c=1):
    v = [0] * n
    v[i] = c
    return tuple(v)


def _d_roots(n):
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for ei, ej in itertools.product((1, -1), repeat=2):
            v = [0] * n
            v[i], v[j] = ei, ej
            out.append(tuple(v))
    return out


def series_vectors(spec: SeriesSpec) -> list[tuple]:
    """Nonzero vectors of the series member, in the coordinates used by :func:`build_series`."""
    n = spec.n
    if spec.family == "A":
        # base coordinates: b_i - b_j = e_i + ... + e_{j-1}
        out = []
        for i, j in itertools.combinations(range(n), 2):
            v = tuple(1 if i <= k < j else 0 for k in range(n - 1))
            out += [v, tuple(-x for x in v)]
        return out
    out = _d_roots(n)
    if spec.family in ("B", "BC"):
        out += [_unit(n, i, e) for i in range(n) for e in (1, -1)]
    J = set(range(1, n + 1)) if spec.family == "C" else spec.J
    out += [_unit(n, j - 1, 2 * e) for j in sorted(J) for e in (1, -1)]
    return out


def series_form(spec: SeriesSpec) -> SymForm:
    """Default form: a diagonal form keeping every series member a GRS.

    For type A this is the restriction of the dot product to the base.  For
    the other families ``b_j`` has squared length 1 for ``j`` in ``J`` and 2
    otherwise (plain dot product when ``J`` is empty or everything).
    """
    n = spec.n
    if spec.family == "A":
        return SymForm(tuple(tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0)
                                   for j in range(n - 1)) for i in range(n - 1)))
    J = spec.J
    if spec.family in ("DC", "BC") and J and len(J) < n:
        return SymForm(tuple(tuple((1 if i + 1 in J else 2) if i == j else 0
                                   for j in range(n)) for i in range(n)))
    return SymForm.standard(n)


def build_series(spec: SeriesSpec) -> GRS:
    rank = spec.n - 1 if spec.family == "A" else spec.n
    return GRS(RootSet(rank, series_vectors(spec)), series_form(spec))


def all_series(n: int) -> list[SeriesSpec]:
    """Every A/B/C/D member and every DC/BC member for all ``J`` at this ``n``."""
    out = [SeriesSpec("A", n), SeriesSpec("B", n), SeriesSpec("C", n), SeriesSpec("D", n)]
    for k in range(n + 1):
        for J in itertools.combinations(range(1, n + 1), k):
            out.append(SeriesSpec("DC", n, frozenset(J)))
            out.append(SeriesSpec("BC", n, frozenset(J)))
    return out


# -- exceptional types ---------------------------------------------------

H = Fraction(1, 2)


def _e8_vectors() -> list[tuple]:
    out = _d_roots(8)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            out.append(tuple(H * s for s in signs))
    return out


def _e8_simple() -> list[tuple]:
    a1 = (H, -H, -H, -H, -H, -H, -H, H)
    a2 = _add(_unit(8, 0), _unit(8, 1))
    rest = [_add(_unit(8, i), _unit(8, i - 1, -1)) for i in range(1, 7)]
    return [a1, a2] + rest  # alpha_1, alpha_2, alpha_3..alpha_8


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _f4_vectors() -> list[tuple]:
    out = _d_roots(4) + [_unit(4, i, e) for i in range(4) for e in (1, -1)]
    out += [tuple(H * s for s in signs) for signs in itertools.product((1, -1), repeat=4)]
    return out


def _g2_vectors() -> list[tuple]:
    short = [(1, -1, 0), (1, 0, -1), (0, 1, -1)]
    long_ = [(2, -1, -1), (-1, 2, -1), (-1, -1, 2)]
    out = []
    for v in short + long_:
        out += [v, tuple(-x for x in v)]
    return out


_EXC_CACHE: dict = {}


def build_exceptional(kind: str) -> GRS:
    """Standard models of E6, E7, E8, F4 and G2 (72, 126, 240, 48, 12 roots).

    E8 and F4 use their usual (half-)integer coordinates with the dot
    product.  E7 and E6 are the parabolic subsystems of E8 spanned by the
    first seven and six simple roots, and G2 lives in the sum-zero plane of
    a 3-space; these three are re-expressed in coordinates of a base.
    """
    if kind not in EXCEPTIONAL_TYPES:
        raise ValueError(f"unknown exceptional type {kind!r}")
    if kind in _EXC_CACHE:
        return _EXC_CACHE[kind]
    if kind == "E8":
        grs = GRS(RootSet(8, _e8_vectors()), SymForm.standard(8))
    elif kind == "F4":
        grs = GRS(RootSet(4, _f4_vectors()), SymForm.standard(4))
    elif kind in ("E7", "E6"):
        k = 7 if kind == "E7" else 6
        e8 = RootSet(8, _e8_vectors())
        sub = parabolic_closure(e8, _e8_simple()[:k])
        grs = rebase(sub.roots, SymForm.standard(8))[0]
    else:
        grs = rebase(_g2_vectors(), SymForm.standard(3))[0]
    _EXC_CACHE[kind] = grs
    return grs


def build_classic(name: str) -> GRS:
    """Ambient by name: ``E6``..``G2`` or ``A3``, ``B4``, ``C3``, ``D5`` (Lie rank)."""
    if name in EXCEPTIONAL_TYPES:
        return build_exceptional(name)
    m = re.fullmatch(r"([ABCD])(\d+)", name)
    if not m:
        raise ValueError(f"unknown classic type {name!r}")
    fam, k = m.group(1), int(m.group(2))
    if k < 1 or (fam == "D" and k < 2):
        raise ValueError(f"bad rank in {name!r}")
    return build_series(SeriesSpec(fam, k + 1 if fam == "A" else k))


# -- root-data files -----------------------------------------------------

class RootDataError(ValueError):
    """Parse or validation error, with the offending line number when known."""

    def __init__(self, message: str, line: int | None = None, path=None):
        self.message = message
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)


@dataclass(frozen=True)
class RootDataFile:
    rank: int
    label: str
    roots: tuple
    form: SymForm | None = None
    multipliers: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(tuple(int(x) for x in v) for v in self.roots))
        if self.multipliers is not None:
            object.__setattr__(self, "multipliers", tuple(int(k) for k in self.multipliers))
            if len(self.multipliers) != len(self.roots):
                raise RootDataError("multiplier count differs from root count")
        if not self.roots:
            raise RootDataError("no roots")

    def root_set(self) -> RootSet:
        """Negation closure, with each root multiplied out to its multiplier."""
        out = []
        mults = self.multipliers or (1,) * len(self.roots)
        for v, k in zip(self.roots, mults):
            for j in range(1, k + 1):
                w = tuple(j * x for x in v)
                out += [w, tuple(-x for x in w)]
        return RootSet(self.rank, out)

    def grs(self) -> GRS:
        if self.form is None:
            raise ValueError(f"{self.label}: no form stored")
        return GRS(self.root_set(), self.form)


_RAT = re.compile(r"^[+-]?\d+(/\d+)?$")
_INT = re.compile(r"^[+-]?\d+$")


def parse_rational(tok: str, line: int | None = None) -> Fraction:
    if not _RAT.match(tok):
        raise RootDataError(f"malformed rational {tok!r}", line)
    if "/" in tok:
        p, q = tok.split("/")
        p, q = int(p), int(q)
        if q == 0:
            raise RootDataError(f"zero denominator in {tok!r}", line)
        if gcd(p, q) != 1 or q == 1:
            raise RootDataError(f"non-reduced rational {tok!r}", line)
        return Fraction(p, q)
    return Fraction(int(tok))


def format_rational(x) -> str:
    return str(norm_scalar(x))


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_root_data(text: str, path=None) -> RootDataFile:
    rank = None
    label = None
    form_rows: list = []
    mults: list | None = None
    roots: list = []
    seen: dict = {}
    section = None
    form_seen = False
    for num, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        try:
            head, _, rest = line.partition(" ")
            if rank is None:
                if head != "rank" or not _INT.match(rest.strip()) or int(rest) < 1:
                    raise RootDataError("expected 'rank <r>' as the first line", num)
                rank = int(rest)
                continue
            if label is None:
                if head != "label" or not rest.strip():
                    raise RootDataError("expected 'label <text>' after the rank line", num)
                label = rest.strip()
                continue
            if line in ("form", "multipliers", "roots"):
                if line == "form":
                    if form_seen:
                        raise RootDataError("duplicate form section", num)
                    form_seen = True
                elif line == "multipliers":
                    if mults is not None:
                        raise RootDataError("duplicate multipliers section", num)
                    mults = []
                elif section == "roots" or roots:
                    raise RootDataError("duplicate roots section", num)
                section = line
                continue
            toks = line.split()
            if section == "form":
                if len(form_rows) == rank:
                    raise RootDataError("form has more than r rows", num)
                if len(toks) != rank:
                    raise RootDataError(f"form row needs {rank} entries, got {len(toks)}", num)
                form_rows.append(tuple(parse_rational(t, num) for t in toks))
            elif section == "multipliers":
                for t in toks:
                    if not _INT.match(t) or int(t) < 1:
                        raise RootDataError(f"malformed multiplier {t!r}", num)
                    mults.append(int(t))
            elif section == "roots":
                if any(not _INT.match(t) for t in toks):
                    bad = next(t for t in toks if not _INT.match(t))
                    raise RootDataError(f"malformed root entry {bad!r}", num)
                if len(toks) != rank:
                    raise RootDataError(f"rank mismatch: root has {len(toks)} entries, rank is {rank}", num)
                v = tuple(int(t) for t in toks)
                if not any(v):
                    raise RootDataError("zero vector listed as a root", num)
                nv = tuple(-x for x in v)
                if v in seen or nv in seen:
                    first = seen.get(v, seen.get(nv))
                    raise RootDataError(f"duplicate root {line} (first on line {first})", num)
                seen[v] = num
                roots.append(v)
            else:
                raise RootDataError(f"malformed line {line!r}", num)
        except RootDataError as e:
            if e.path is None and path is not None:
                raise RootDataError(e.message, e.line, path) from None
            raise
    if rank is None:
        raise RootDataError("no roots", path=path)
    if form_seen and len(form_rows) != rank:
        raise RootDataError(f"form has {len(form_rows)} rows, expected {rank}", path=path)
    if not roots:
        raise RootDataError("no roots", path=path)
    if mults is not None and len(mults) != len(roots):
        raise RootDataError(f"{len(mults)} multipliers for {len(roots)} roots", path=path)
    form = None
    if form_seen:
        try:
            form = SymForm(tuple(form_rows))
        except ValueError as e:
            raise RootDataError(str(e), path=path) from None
    return RootDataFile(rank, label, tuple(roots), form, tuple(mults) if mults is not None else None)


def format_root_data(data: RootDataFile) -> str:
    lines = [f"rank {data.rank}", f"label {data.label}"]
    if data.form is not None:
        lines.append("form")
        lines += [" ".join(format_rational(x) for x in row) for row in data.form.entries]
    if data.multipliers is not None:
        lines.append("multipliers")
        lines += [str(k) for k in data.multipliers]
    lines.append("roots")
    lines += [" ".join(str(x) for x in v) for v in data.roots]
    return "\n".join(lines) + "\n"


def load_root_data(path) -> RootDataFile:
    path = Path(path)
    return parse_root_data(path.read_text(encoding="utf-8"), path=path)


def save_root_data(data: RootDataFile, path) -> None:
    Path(path).write_text(format_root_data(data), encoding="utf-8")


def parse_form(text: str, rank: int | None = None, path=None) -> SymForm:
    """A bare form file: optional ``form`` line, then r rows of r rationals."""
    rows = []
    for num, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line or line == "form":
            continue
        try:
            rows.append(tuple(parse_rational(t, num) for t in line.split()))
        except RootDataError as e:
            raise RootDataError(e.message, e.line, path) from None
    if not rows:
        raise RootDataError("empty form", path=path)
    if any(len(r) != len(rows) for r in rows):
        raise RootDataError("form is not square", path=path)
    if rank is not None and len(rows) != rank:
        raise RootDataError(f"form has size {len(rows)}, rank is {rank}", path=path)
    try:
        return SymForm(tuple(rows))
    except ValueError as e:
        raise RootDataError(str(e), path=path) from None


def load_form(path, rank: int | None = None) -> SymForm:
    path = Path(path)
    return parse_form(path.read_text(encoding="utf-8"), rank, path)


def format_form(form: SymForm) -> str:
    return "".join(" ".join(format_rational(x) for x in row) + "\n" for row in form.entries)


def positive_part(roots: RootSet) -> tuple[tuple, tuple]:
    """Positive primitive roots (under the first nonzero coordinate) and multipliers."""
    from grskit.rootset import multipliers
    prim = []
    mults = []
    for a, k in multipliers(roots).items():
        if next(x for x in a if x) > 0:
            prim.append(a)
            mults.append(k)
    return tuple(prim), tuple(mults)


def root_data_from_grs(grs: GRS, label: str) -> RootDataFile:
    prim, mults = positive_part(grs.roots)
    if any(Fraction(x).denominator != 1 for v in prim for x in v):
        raise ValueError("root coordinates must be integers to be stored")
    return RootDataFile(grs.rank, label, prim, grs.form,
                        mults if any(k > 1 for k in mults) else None)


# -- bundled data ----------------------------------------------------------

def data_dir() -> Path:
    return Path(str(resources.files("grskit") / "data"))


def fixture_dir() -> Path:
    return data_dir() / "fixtures"


def _load(paths) -> dict:
    out = {}
    for p in paths:
        data = load_root_data(p)
        if data.label in out:
            raise RootDataError(f"label {data.label!r} is not unique", path=p)
        out[data.label] = data
    return out


def fixtures_in(d) -> dict:
    """Abstract root data files (``*.roots`` except ``*_certified``) in a directory."""
    return _load(p for p in sorted(Path(d).glob("*.roots")) if not p.stem.endswith("_certified"))


def certificates_in(d) -> list[RootDataFile]:
    return list(_load(sorted(Path(d).glob("*_certified.roots"))).values())


def bundled_fixtures() -> dict:
    """Abstract root data (positive primitive roots, no form) keyed by label."""
    return fixtures_in(fixture_dir())


def bundled_certificates() -> list[RootDataFile]:
    """Certified data: roots, multipliers and a form."""
    return certificates_in(fixture_dir())


def fixture(label: str) -> RootDataFile:
    data = bundled_fixtures()
    if label not in data:
        raise KeyError(f"no bundled fixture {label!r}")
    return data[label]


def parse_label(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\(?\s*(\d+)\s*,\s*(\d+)\s*\)?", text.strip())
    if not m:
        raise ValueError(f"bad label {text!r}")
    return int(m.group(1)), int(m.group(2))


@dataclass(frozen=True)
class Table1Expected:
    rank: int
    index: int
    primitive_half: int
    root_half: int | None
    grs: bool
    mechanism: str
    df23: str
    ambients: tuple


def _read_tsv(name: str) -> list[list[str]]:
    rows = []
    for raw in (data_dir() / name).read_text(encoding="utf-8").splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        rows.append(raw.split("\t"))
    return rows[1:]  # header


def table1_expected() -> list[Table1Expected]:
    out = []
    for r, i, w, h, g, mech, df, amb in _read_tsv("table1.tsv"):
        out.append(Table1Expected(int(r), int(i), int(w), None if h == "-" else int(h),
                                  g == "+", mech, df, tuple(a for a in amb.split(",") if a and a != "-")))
    return out


@dataclass(frozen=True)
class Table2Row:
    rank: int
    index: int
    alpha: tuple
    witnesses: tuple


def _parse_vec(s: str) -> tuple:
    return tuple(int(x) for x in s.strip().strip("()").split(","))


def table2_expected() -> list[Table2Row]:
    out = []
    for r, i, a, w in _read_tsv("table2.tsv"):
        ws = tuple(_parse_vec(x) for x in re.findall(r"\([^)]*\)", w))
        out.append(Table2Row(int(r), int(i), _parse_vec(a), ws))
    return out
