"""Randomized invariants over small root systems, fixtures and their quotients."""

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from grskit import RootSet, check_grs_axioms, multiplier, primitive_roots
from grskit.catalog import (RootDataFile, SeriesSpec, build_classic, build_series, format_root_data,
                            parse_root_data)
from grskit.feasibility import AbstractRootData, MultiplierMap, expand
from grskit.quotient import flat_from_roots, restrict
from grskit.rootset import enumerate_chambers, is_crystallographic, parabolic_closure

N = 1000
PROFILE = settings(max_examples=N, deadline=None, suppress_health_check=[HealthCheck.too_slow])

AMBIENTS = ["A3", "A4", "B3", "B4", "C3", "C4", "D4", "F4", "G2"]
SERIES = [SeriesSpec("BC", 3, {1}), SeriesSpec("BC", 3, {1, 3}), SeriesSpec("DC", 3, {2}),
          SeriesSpec("BC", 4, {2}), SeriesSpec("DC", 4, {1, 4})]

_built = {}


def ambient(key):
    if key not in _built:
        _built[key] = build_classic(key) if isinstance(key, str) else build_series(key)
    return _built[key]


systems = st.sampled_from(AMBIENTS + SERIES).map(ambient)


@st.composite
def system_and_roots(draw, max_count=3):
    g = draw(systems)
    roots = g.roots.nonzero()
    k = draw(st.integers(1, min(max_count, g.rank)))
    gens = draw(st.lists(st.sampled_from(roots), min_size=1, max_size=k))
    return g, gens


@st.composite
def abstract_with_multipliers(draw):
    from grskit.catalog import bundled_fixtures
    fx = list(bundled_fixtures().values())
    d = AbstractRootData.from_file(draw(st.sampled_from(fx)))
    ks = draw(st.lists(st.integers(1, 3), min_size=len(d.roots), max_size=len(d.roots)))
    return d, MultiplierMap(tuple(ks))


@PROFILE
@given(st.integers(1, 3).flatmap(lambda r: st.tuples(
    st.just(r), st.lists(st.tuples(*[st.integers(-3, 3)] * r).filter(any), min_size=1, max_size=10))))
def test_loaded_sets_are_symmetric_with_zero(args):
    r, vs = args
    uniq = []
    for v in vs:
        if v not in uniq and tuple(-x for x in v) not in uniq:
            uniq.append(v)
    rs = parse_root_data(format_root_data(RootDataFile(r, "p", tuple(uniq)))).root_set()
    assert (0,) * r in rs
    assert rs.is_negation_closed()


@PROFILE
@given(systems, st.data())
def test_valid_subsets_are_symmetric(g, data):
    # arbitrary subsets: whenever the axioms hold, R = -R follows
    vs = g.roots.nonzero()
    sub = data.draw(st.lists(st.sampled_from(vs), min_size=1, max_size=len(vs), unique=True))
    rs = RootSet(g.rank, sub)
    rep = check_grs_axioms(rs, g.form)
    if all(c == "span" for _, _, c in rep.violations):
        assert rs.is_negation_closed()


@PROFILE
@given(abstract_with_multipliers())
def test_multiplier_is_symmetric(args):
    d, m = args
    rs = expand(d, m)
    for a in primitive_roots(rs):
        assert multiplier(rs, a) == multiplier(rs, tuple(-x for x in a))
    for v, k in zip(d.roots, m.assignment):
        assert multiplier(rs, v) == k


@PROFILE
@given(system_and_roots())
def test_quotients_pass_axioms(args):
    g, gens = args
    flat = flat_from_roots(g, gens)
    if flat.corank >= g.rank:
        return
    q = restrict(g, flat).quotient
    assert check_grs_axioms(q.roots, q.form).valid


@PROFILE
@given(system_and_roots(max_count=4))
def test_parabolic_closures(args):
    g, gens = args
    sub = parabolic_closure(g.roots, gens)
    rep = check_grs_axioms(sub, g.form)
    # pairwise clauses hold; the span clause is relative to the ambient space
    assert all(c == "span" for _, _, c in rep.violations)
    assert primitive_roots(sub) == primitive_roots(g.roots) & sub.roots


def _fixture_systems():
    from grskit.catalog import bundled_certificates
    out = [(c.label, c.grs()) for c in bundled_certificates()]
    out += [(name, build_classic(name)) for name in ("B3", "F4", "G2")]
    return out


@pytest.mark.parametrize("label, grs", _fixture_systems(), ids=lambda x: x if isinstance(x, str) else "")
def test_chambers_simplicial_and_integral(label, grs):
    chambers = enumerate_chambers(grs)
    r = grs.rank
    for ch in chambers:
        assert ch.walls == r
        for v in ch.positive_roots:
            c = ch.coordinates(v)
            assert all(x == int(x) and x >= 0 for x in c)
    assert is_crystallographic(grs)
    # chambers of an arrangement come in antipodal pairs
    assert len(chambers) % 2 == 0
