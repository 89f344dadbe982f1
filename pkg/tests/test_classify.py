import pytest

from grskit.catalog import SeriesSpec, build_series, format_root_data
from grskit.classify import (TABLE1_HEADER, bundled_certified_grs, format_table, load_fixtures,
                             main_theorem_check, series_check, series_data, table1_report)
from grskit.rootset import check_grs_axioms, equivalence


@pytest.fixture(scope="module")
def report():
    return table1_report(match=False)


def by_label(rows, key):
    return [r for r in rows if r.label == key]


def test_table1_rows_without_matching(report):
    assert all(not r.status.startswith("MISMATCH") for r in report)
    six = by_label(report, (3, 6))
    assert sorted(r.root_half_count for r in six) == [13, 14]
    assert all(r.status == "ok" for r in six)
    assert by_label(report, (3, 10))[0].mechanism == "isotropic"
    assert by_label(report, (3, 1))[0].mechanism == "quotient-unique"


def test_table1_skipped_rows(report):
    r2 = by_label(report, (3, 2))[0]
    assert r2.status == "skipped: data not ingested"
    assert (r2.primitive_half_count, r2.root_half_count, r2.grs_exists, r2.mechanism) == \
        (10, 10, True, "quotient-unique")
    r11 = by_label(report, (3, 11))[0]
    assert (r11.primitive_half_count, r11.root_half_count, r11.mechanism) == (15, None, "isotropic")
    assert len(report) == 75


def test_table1_invariant(report):
    for r in report:
        assert r.grs_exists == (r.root_half_count is not None)


def test_report_is_deterministic(report):
    again = table1_report(match=False)
    assert format_table([r.cells() for r in report], TABLE1_HEADER) == \
        format_table([r.cells() for r in again], TABLE1_HEADER)


def test_ingested_data_is_compared(tmp_path, fixtures, monkeypatch):
    # (3,4) roots filed under another label must show up as a mismatch
    from dataclasses import replace
    fake = replace(fixtures["(3,4)"], label="(3,2)")
    (tmp_path / "x.roots").write_text(format_root_data(fake))
    monkeypatch.setenv("GRS_KIT_DATA", str(tmp_path))
    data = load_fixtures()
    assert "(3,2)" in data
    rows = by_label(table1_report(data, match=False), (3, 2))
    assert rows[0].status.startswith("MISMATCH")


def test_series_check_n3():
    rep = series_check(3)
    assert rep.passed, rep.failures
    assert any("B_3 data: 8 certified" in line for line in rep.lines)
    with pytest.raises(ValueError):
        series_check(2)


def test_series_data_in_base_coordinates():
    d = series_data(SeriesSpec("B", 3))
    assert len(d.roots) == 9
    assert all(min(v) >= 0 for v in d.roots)


def test_bc4_j_equivalence():
    a = build_series(SeriesSpec("BC", 4, {1, 3}))
    b = build_series(SeriesSpec("BC", 4, {2, 4}))
    assert check_grs_axioms(a.roots, a.form).valid
    m = equivalence(a.roots, b.roots)
    assert m is not None and a.roots.image(m.matrix) == b.roots


def test_main_theorem_examples(certificates):
    c = [("(3,8)", certificates["(3,8)-certified"].grs()),
         ("(3,9)", certificates["(3,9)-certified"].grs()),
         ("BC_3^{1}", build_series(SeriesSpec("BC", 3, {1})))]
    lines = main_theorem_check(c, ambients=("F4", "B4"))
    assert [str(x).split(" (")[0] for x in lines] == [
        "(3,8): matched in F4", "(3,9): matched in F4", "BC_3^{1}: matched in B4"]


def test_bundled_certified_grs_labels():
    labels = [label for label, _ in bundled_certified_grs()]
    assert labels == ["(3,1)", "(3,6)#1", "(3,6)#2", "(3,8)", "(3,9)", "(3,13)", "(3,20)"]


def test_format_table_tsv():
    text = format_table([["a", "b"]], ["x", "y"], sep="\t")
    assert text == "x\ty\na\tb\n"
