"""Command-line interface: ``grskit <subcommand> ...``.

Exit codes: 0 success or verdict as expected, 1 verification failure,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from grskit import catalog
from grskit.catalog import (RootDataError, build_classic, format_root_data, load_form, load_root_data,
                            parse_label, root_data_from_grs, table1_expected)
from grskit.feasibility import AbstractRootData, classify_groupoid
from grskit.linalg import SymForm, rat, vec
from grskit.rootset import (GRS, base_from_covector, check_grs_axioms, count_chambers, equivalence,
                            find_base, fmt_vec, is_crystallographic)

FILE_FORMAT = catalog.__doc__.split("\n", 2)[2].replace("``", "").replace("::", ":").rstrip() + "\n"


class UsageError(Exception):
    pass


def _progress(enabled: bool):
    if not enabled:
        return None
    return lambda msg: print(msg, file=sys.stderr, flush=True)


def _load(path, form_path=None):
    data = load_root_data(path)
    form = data.form
    if form_path:
        form = load_form(form_path, data.rank)
    return data, form


def _parse_vectors(text: str) -> list[tuple]:
    out = []
    for part in text.split(";"):
        part = part.strip().strip("()")
        if not part:
            continue
        try:
            out.append(vec(rat(x) for x in part.replace(",", " ").split()))
        except (ValueError, ZeroDivisionError) as err:
            raise UsageError(f"bad vector {part!r}: {err}") from None
    if not out:
        raise UsageError("no vectors given")
    return out


# -- subcommands ---------------------------------------------------------------

def cmd_check(args) -> int:
    data, form = _load(args.file, args.form)
    form = form or SymForm.standard(data.rank)
    roots = data.root_set()
    report = check_grs_axioms(roots, form)
    if report.valid:
        print("valid")
        return 0
    print(f"invalid: {len(report.violations)} violation(s)")
    for v in report.violations[: args.max_violations]:
        print(f"  {v}")
    return 1


def cmd_base(args) -> int:
    data, form = _load(args.file, args.form)
    roots = data.root_set()
    ch = find_base(GRS(roots, form)) if form is not None else base_from_covector(roots)
    for v in ch.simple_roots:
        print(fmt_vec(v))
    print(f"# {len(ch.positive_roots)} positive roots")
    return 0


def cmd_chambers(args) -> int:
    data, _ = _load(args.file)
    roots = data.root_set()
    n = count_chambers(roots, limit=args.limit)
    print(f"chambers {n}")
    if args.crystallographic:
        ok = is_crystallographic(roots, limit=args.limit)
        print("crystallographic" if ok else "not crystallographic")
        return 0 if ok else 1
    return 0


def cmd_quotient(args) -> int:
    from grskit.quotient import flat_from_roots, restrict

    grs = build_classic(args.ambient)
    gens = _parse_vectors(args.flat_roots)
    if any(len(g) != grs.rank for g in gens):
        raise UsageError(f"flat roots must have {grs.rank} coordinates for {args.ambient}")
    try:
        flat = flat_from_roots(grs, gens)
    except ValueError as err:
        raise UsageError(str(err)) from None
    res = restrict(grs, flat, f"{args.ambient}-quotient")
    w, h = res.counts
    print(f"# rank {res.quotient.rank}, |W|/2 = {w}, (|R|-1)/2 = {h}")
    text = format_root_data(root_data_from_grs(res.quotient, res.ambient_label))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_scan(args) -> int:
    from grskit.quotient import export_scan, quotient_scan

    try:
        classes = quotient_scan(args.ambient, args.target_rank, method=args.method, jobs=args.jobs,
                                progress=_progress(not args.quiet))
    except ValueError as err:
        raise UsageError(str(err)) from None
    for c in classes:
        w, h = c.counts
        print(f"{c.representative.ambient_label}\t{w}\t{h}\tflats={c.flats}")
    if args.out:
        export_scan(classes, args.out)
    return 0


def cmd_feasibility(args) -> int:
    data, _ = _load(args.file)
    abstract = AbstractRootData.from_file(data)
    res = classify_groupoid(abstract, strict_caps=args.strict_caps, jobs=args.jobs,
                            grid_limit=args.grid_limit, use_bundled=not args.no_bundled,
                            progress=_progress(args.verbose))
    print(res.summary())
    if args.verbose:
        for line in res.lines():
            print(f"  {line}")
    if res.undecided:
        return 1
    try:
        key = parse_label(data.label)
    except ValueError:
        return 0
    expected = {(e.rank, e.index): e.grs for e in table1_expected()}
    if key in expected and expected[key] != bool(res.classes):
        print("unexpected verdict for this label", file=sys.stderr)
        return 1
    return 0


def cmd_classify(args) -> int:
    from grskit.classify import TABLE1_HEADER, format_table, load_fixtures, table1_report

    if args.fixtures and not Path(args.fixtures).is_dir():
        raise UsageError(f"not a directory: {args.fixtures}")
    fixtures = load_fixtures(args.fixtures)
    rows = table1_report(fixtures, match=not args.no_match, method=args.method,
                         progress=_progress(not args.quiet))
    cells = [r.cells() for r in rows if args.all or not r.status.startswith("skipped")]
    sys.stdout.write(format_table(cells, TABLE1_HEADER))
    if args.out:
        Path(args.out).write_text(format_table([r.cells() for r in rows], TABLE1_HEADER, sep="\t"),
                                  encoding="utf-8")
    return 1 if any(r.status.startswith("MISMATCH") for r in rows) else 0


def cmd_equiv(args) -> int:
    a, _ = _load(args.file1)
    b, _ = _load(args.file2)
    try:
        emap = equivalence(a.root_set(), b.root_set())
    except ValueError as err:
        raise UsageError(str(err)) from None
    if emap is None:
        print("not equivalent")
        return 1
    print(_fmt_map(emap.matrix))
    return 0


def _fmt_map(m) -> str:
    return "[" + ",".join("[" + ",".join(str(x) for x in row) + "]" for row in m) + "]"


def cmd_series(args) -> int:
    from grskit.classify import series_check

    if args.n_max < 3:
        raise UsageError("--n-max must be at least 3")
    rep = series_check(args.n_max, progress=_progress(not args.quiet))
    sys.stdout.write(str(rep))
    return 0 if rep.passed else 1


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    epilog = "root-data file format:\n" + FILE_FORMAT
    p = argparse.ArgumentParser(prog="grskit", description="Generalized root system toolkit.",
                                formatter_class=fmt, epilog=epilog)
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_, epilog=epilog, formatter_class=fmt)
        sp.set_defaults(func=func)
        return sp

    sp = add("check", cmd_check, "Check the GRS axioms for a root-data file.")
    sp.add_argument("file")
    sp.add_argument("--form", help="form file (r rows of r rationals); overrides a stored form")
    sp.add_argument("--max-violations", type=int, default=10)

    sp = add("base", cmd_base, "Print the deterministic base of a root set.")
    sp.add_argument("file")
    sp.add_argument("--form")

    sp = add("chambers", cmd_chambers, "Count chambers by wall crossing.")
    sp.add_argument("file")
    sp.add_argument("--limit", type=int, default=100000)
    sp.add_argument("--crystallographic", action="store_true",
                    help="also check integrality of coordinates in every chamber")

    sp = add("quotient", cmd_quotient, "Restrict a classic root system along a flat.")
    sp.add_argument("ambient", help="E6, E7, E8, F4, G2, An, Bn, Cn or Dn")
    sp.add_argument("--flat-roots", required=True,
                    help='generators of the flat in ambient coordinates, e.g. "1 -1 0 0;0 0 0 1"')
    sp.add_argument("--out", help="write the quotient as a root-data file")

    sp = add("scan", cmd_scan, "Enumerate irreducible quotients of a given rank up to equivalence.")
    sp.add_argument("ambient")
    sp.add_argument("--target-rank", type=int, required=True)
    sp.add_argument("--method", choices=("auto", "all", "standard"), default="auto")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="directory for one root-data file per class")
    sp.add_argument("--quiet", action="store_true", help="no progress on stderr")

    sp = add("feasibility", cmd_feasibility, "Classify multiplier assignments for abstract root data.")
    sp.add_argument("file")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--strict-caps", action="store_true")
    sp.add_argument("--grid-limit", type=int, default=200000)
    sp.add_argument("--no-bundled", action="store_true", help="ignore bundled certificates")
    sp.add_argument("--verbose", action="store_true", help="one line per assignment")

    sp = add("classify", cmd_classify, "Report the sporadic overview table against bundled expectations.")
    sp.add_argument("--fixtures", help="extra directory of root-data files (also GRS_KIT_DATA)")
    sp.add_argument("--method", choices=("auto", "all", "standard"), default="auto")
    sp.add_argument("--no-match", action="store_true", help="skip quotient matching")
    sp.add_argument("--all", action="store_true", help="also print skipped rows")
    sp.add_argument("--out", help="write the full report as tab-separated values")
    sp.add_argument("--quiet", action="store_true")

    sp = add("equiv", cmd_equiv, "Search for a linear map carrying one root set onto another.")
    sp.add_argument("file1")
    sp.add_argument("file2")

    sp = add("series", cmd_series, "Check the infinite series up to a given n.")
    sp.add_argument("--n-max", type=int, default=4)
    sp.add_argument("--quiet", action="store_true")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (RootDataError, UsageError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
