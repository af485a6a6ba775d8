"""Functor kernel: enumeration, mapping, support, liftings, minimal witnesses."""

import random

import pytest
from hypothesis import given, strategies as st

from nablamu import (
    IDENTITY,
    MONOTONE,
    POWERSET,
    CapExceeded,
    FunctorDescriptor,
    Relation,
    base,
    canon_key,
    check_lax_axioms,
    check_support_restriction,
    compose,
    constant,
    coproduct,
    enumerate_t,
    functor_tag,
    lift_member,
    minimal_witnesses,
    parse_functor,
    parse_telem,
    product,
    random_telem,
    render_telem,
    t_map,
)
from nablamu.parsing import Cursor, ParseError

from helpers import (
    CARRIER,
    SHAPES,
    brute_least_support,
    brute_minimal_witnesses,
    relation_strategy,
    subsets,
    telem_strategy,
)

fs = frozenset


def sample_telems(F, xs, n, seed=0):
    rng = random.Random(seed)
    return [random_telem(F, xs, rng) for _ in range(n)]


# --------------------------------------------------------------------------
# Frozen values


def test_enumerate_monotone_singleton():
    got = set(enumerate_t(MONOTONE, {"x"}))
    assert got == {fs(), fs({fs()}), fs({fs({"x"})})}


def test_enumerate_counts():
    assert len(enumerate_t(POWERSET, set())) == 1
    assert len(enumerate_t(POWERSET, {"x", "y"})) == 4
    assert len(enumerate_t(POWERSET, {"x", "y", "z"})) == 8
    # antichain counts over an n-element carrier: the Dedekind numbers
    assert len(enumerate_t(MONOTONE, set())) == 2
    assert len(enumerate_t(MONOTONE, {"x", "y"})) == 6
    assert len(enumerate_t(MONOTONE, {"x", "y", "z"})) == 20
    assert len(enumerate_t(IDENTITY, {"x", "y"})) == 2
    assert len(enumerate_t(constant(["a", "b"]), {"x"})) == 2
    assert len(enumerate_t(product(POWERSET, POWERSET), {"x", "y"})) == 16
    assert len(enumerate_t(coproduct(POWERSET, IDENTITY), {"x", "y"})) == 6
    assert len(enumerate_t(compose(POWERSET, IDENTITY), {"x", "y"})) == 4


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        enumerate_t(POWERSET, set(range(10)), cap=100)
    with pytest.raises(CapExceeded):
        enumerate_t(MONOTONE, {"x", "y", "z"}, cap=10)


def test_enumerate_deterministic():
    for F in SHAPES.values():
        a = enumerate_t(F, {"y", "x"})
        b = enumerate_t(F, {"x", "y"})
        assert a == b
        assert list(a) == sorted(a, key=canon_key)


def test_tmap_monotone_merges_generators():
    t = fs({fs({"x"}), fs({"y"})})
    assert t_map(MONOTONE, {"x": "u", "y": "u"}, t) == fs({fs({"u"})})


def test_base_values():
    assert base(MONOTONE, fs({fs({"x"}), fs({"y"})})) == {"x", "y"}
    assert base(POWERSET, fs({"x"})) == {"x"}
    assert base(constant(["a", "b"]), "a") == fs()
    assert base(IDENTITY, "x") == {"x"}
    F = compose(POWERSET, POWERSET)
    assert base(F, fs({fs({"x"}), fs({"y", "z"})})) == {"x", "y", "z"}


def test_lift_powerset_example():
    R = {("x", "y"), ("x", "z")}
    assert lift_member(POWERSET, R, fs({"x"}), fs({"y", "z"}))
    assert not lift_member(POWERSET, R, fs({"x"}), fs())
    assert not lift_member(POWERSET, {}, fs({"x"}), fs({"y"}))
    assert lift_member(POWERSET, {}, fs(), fs())


def test_minimal_witnesses_values():
    ws = minimal_witnesses(POWERSET, fs({"x"}), fs({"a", "b"}))
    assert [w.pairs for w in ws] == [fs({("x", "a"), ("x", "b")})]
    ws = minimal_witnesses(POWERSET, fs(), fs())
    assert [w.pairs for w in ws] == [fs()]
    assert minimal_witnesses(POWERSET, fs(), fs({"a"})) == ()


# --------------------------------------------------------------------------
# Oracle comparisons


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_base_is_least_support(name):
    F = SHAPES[name]
    for t in sample_telems(F, CARRIER, 25, seed=hash(name) & 0xFFFF):
        b = base(F, t)
        least = brute_least_support(F, t, CARRIER)
        assert b == least
        assert t in enumerate_t(F, b)


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_minimal_witnesses_against_full_search(name):
    F = SHAPES[name]
    xs = ("x", "y")
    elems = enumerate_t(F, xs)
    if len(elems) <= 8:
        pairs = [(t1, t2) for t1 in elems for t2 in elems]
    else:
        rng = random.Random(7)
        pairs = [(rng.choice(elems), rng.choice(elems)) for _ in range(40)]
    for t1, t2 in pairs:
        got = {w.pairs for w in minimal_witnesses(F, t1, t2)}
        want = brute_minimal_witnesses(F, t1, t2)
        assert got == want, (render_telem(F, t1), render_telem(F, t2))


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_witnesses_lift_and_nothing_smaller_does(name):
    F = SHAPES[name]
    for t1 in sample_telems(F, ("x", "y"), 10, seed=3):
        for t2 in sample_telems(F, ("x", "y"), 10, seed=4):
            for w in minimal_witnesses(F, t1, t2):
                assert lift_member(F, w, t1, t2)
                for p in w.pairs:
                    assert not lift_member(F, w.pairs - {p}, t1, t2)


# --------------------------------------------------------------------------
# Properties


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_tmap_functoriality(name):
    F = SHAPES[name]
    rng = random.Random(11)
    xs, ys, zs = ("x", "y", "z"), ("u", "v"), ("p", "q", "r")
    for _ in range(30):
        f = {x: rng.choice(ys) for x in xs}
        g = {y: rng.choice(zs) for y in ys}
        t = random_telem(F, xs, rng)
        gf = {x: g[f[x]] for x in xs}
        assert t_map(F, gf, t) == t_map(F, g, t_map(F, f, t))
        assert t_map(F, {x: x for x in xs}, t) == t


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_lift_converse(name):
    F = SHAPES[name]
    rng = random.Random(13)
    xs, ys = ("x", "y"), ("u", "v")
    for _ in range(40):
        R = fs(
            (x, y) for x in xs for y in ys if rng.random() < 0.5
        )
        Rc = fs((y, x) for x, y in R)
        t1 = random_telem(F, xs, rng)
        t2 = random_telem(F, ys, rng)
        assert lift_member(F, R, t1, t2) == lift_member(F, Rc, t2, t1)


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_lift_contains_graph_of_tmap(name):
    F = SHAPES[name]
    rng = random.Random(17)
    xs, ys = ("x", "y", "z"), ("u", "v")
    for _ in range(30):
        f = {x: rng.choice(ys) for x in xs}
        t = random_telem(F, xs, rng)
        assert lift_member(F, fs(f.items()), t, t_map(F, f, t))


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_lift_diagonal_reflexive(name):
    F = SHAPES[name]
    diag = fs((x, x) for x in CARRIER)
    for t in sample_telems(F, CARRIER, 25, seed=19):
        assert lift_member(F, diag, t, t)


@given(
    R=relation_strategy(("x", "y"), ("u", "v")),
    S=relation_strategy(("x", "y"), ("u", "v")),
    t1=telem_strategy(POWERSET, ("x", "y")),
    t2=telem_strategy(POWERSET, ("u", "v")),
)
def test_lift_monotone_in_relation_powerset(R, S, t1, t2):
    if R <= S and lift_member(POWERSET, R, t1, t2):
        assert lift_member(POWERSET, S, t1, t2)


@given(
    R=relation_strategy(("x", "y"), ("u", "v")),
    S=relation_strategy(("x", "y"), ("u", "v")),
    t1=telem_strategy(MONOTONE, ("x", "y")),
    t2=telem_strategy(MONOTONE, ("u", "v")),
)
def test_lift_monotone_in_relation_monotone(R, S, t1, t2):
    if R <= S and lift_member(MONOTONE, R, t1, t2):
        assert lift_member(MONOTONE, S, t1, t2)


# --------------------------------------------------------------------------
# Relations


def test_relation_ops():
    R = Relation.of({("x", "u"), ("y", "v")}, domain={"x", "y"}, codomain={"u", "v"})
    assert ("x", "u") in R
    assert ("x", "v") not in R
    assert R.converse().pairs == {("u", "x"), ("v", "y")}
    S = Relation.of({("u", "1"), ("v", "2")})
    assert R.compose(S).pairs == {("x", "1"), ("y", "2")}
    assert R.restrict({"x"}, {"u", "v"}).pairs == {("x", "u")}
    assert Relation.diagonal({"a", "b"}).pairs == {("a", "a"), ("b", "b")}
    g = Relation.graph({"x": "u", "y": "u"}, codomain={"u", "v"})
    assert g.pairs == {("x", "u"), ("y", "u")}
    assert g.codomain == {"u", "v"}


def test_relation_validates_pairs():
    with pytest.raises(ValueError):
        Relation(fs({"x"}), fs({"u"}), fs({("x", "z")}))


# --------------------------------------------------------------------------
# Descriptors and text formats


def test_compose_rejects_nonfunctorial_inner():
    with pytest.raises(ValueError):
        compose(POWERSET, MONOTONE)
    with pytest.raises(ValueError):
        compose(POWERSET, product(MONOTONE, POWERSET))
    # monotone may sit outermost
    compose(MONOTONE, POWERSET)


def test_descriptor_validation():
    with pytest.raises(ValueError):
        FunctorDescriptor("nonsense")
    with pytest.raises(ValueError):
        constant([])
    with pytest.raises(ValueError):
        FunctorDescriptor("powerset", values=fs({"a"}))
    with pytest.raises(ValueError):
        FunctorDescriptor("product", parts=(POWERSET,))


def test_functor_tag_round_trip():
    shapes = list(SHAPES.values()) + [
        product(coproduct(IDENTITY, constant(["ok"])), compose(POWERSET, POWERSET)),
    ]
    for F in shapes:
        assert parse_functor(functor_tag(F)) == F
    with pytest.raises(ParseError):
        parse_functor("powerset(")
    with pytest.raises(ParseError):
        parse_functor("galaxy")
    with pytest.raises(ParseError):
        parse_functor("comp(powerset,monotone)")


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_telem_text_round_trip(name):
    F = SHAPES[name]
    for t in sample_telems(F, CARRIER, 40, seed=23):
        s = render_telem(F, t)
        cur = Cursor(s)
        t2 = parse_telem(cur, F, lambda c: c.ident("element"))
        cur.expect_end()
        assert t2 == t, s


def test_monotone_text_canonicalizes_to_antichain():
    cur = Cursor("{{x}, {x, y}}")
    t = parse_telem(cur, MONOTONE, lambda c: c.ident("element"))
    assert t == fs({fs({"x"})})


# --------------------------------------------------------------------------
# Axiom sweeps (small bounds; the full-depth sweeps live in the acceptance suite)


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_lax_axioms_small(name):
    report = check_lax_axioms(SHAPES[name], carrier_bound=2)
    assert report.ok, str(report)


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_support_restriction_small(name):
    report = check_support_restriction(SHAPES[name], carrier_bound=2)
    assert report.ok, str(report)


def test_canon_key_orders_mixed_payloads():
    items = [fs(), fs({"x"}), ("inl", "x"), "plain", fs({fs({"x"})})]
    ordered = sorted(items, key=canon_key)
    assert sorted(ordered, key=canon_key) == ordered
    with pytest.raises(TypeError):
        canon_key(object())
