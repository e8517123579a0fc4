from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leafclass.errors import NonzeroBasePoint, NotRegular, OrderMismatch, TruncationExceeded, ZeroScalar
from leafclass.jets import (Jet, compositions, extend_morphism, extension_closed_form,
                            extension_context, faa_di_bruno_table, gl1_act, jet_compose,
                            jet_compose_series, jet_invert, normalize_jet)
from leafclass.symbolics import Context

ORDER = 8
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
units = rationals.filter(lambda q: q != 0)


@st.composite
def jets(draw, order=ORDER, base_zero=True):
    x0 = Fraction(0) if base_zero else draw(rationals)
    return Jet([x0, draw(units)] + [draw(rationals) for _ in range(order - 1)])


def test_compositions_count():
    from math import comb

    for n in range(1, 9):
        for k in range(1, n + 1):
            assert len(compositions(n, k)) == comb(n - 1, k - 1)


def test_faa_di_bruno_bell_sums():
    from sympy.functions.combinatorial.numbers import bell

    for n in range(1, 9):
        assert sum(c for _, c, _ in faa_di_bruno_table(n)) == bell(n)


@settings(max_examples=30, deadline=None)
@given(jets(base_zero=False), jets(base_zero=False))
def test_compose_matches_series(g, f):
    assert jet_compose(g, f) == jet_compose_series(g, f)


@settings(max_examples=20, deadline=None)
@given(jets(), jets(), jets())
def test_group_laws(a, b, c):
    assert jet_compose(jet_compose(a, b), c) == jet_compose(a, jet_compose(b, c))
    ident = Jet.identity(ORDER)
    assert jet_compose(a, ident) == a == jet_compose(ident, a)
    inv = jet_invert(a)
    assert jet_compose(a, inv) == ident == jet_compose(inv, a)


@settings(max_examples=20, deadline=None)
@given(jets(base_zero=False), units)
def test_normalization_is_gl1_invariant(s, lam):
    assert normalize_jet(gl1_act(lam, s)) == normalize_jet(s)


def test_errors():
    with pytest.raises(OrderMismatch):
        jet_compose(Jet.identity(3), Jet.identity(4))
    with pytest.raises(NotRegular):
        jet_invert(Jet([0, 0, 1]))
    with pytest.raises(NonzeroBasePoint):
        jet_invert(Jet([1, 1, 0]))
    with pytest.raises(ZeroScalar):
        gl1_act(0, Jet.identity(2))
    with pytest.raises(NotRegular):
        normalize_jet(Jet([1, 0, 2]))
    with pytest.raises(KeyError):
        normalize_jet(Jet([1, 2, 3]))[1]
    with pytest.raises(TruncationExceeded):
        extend_morphism(4, ctx=extension_context(4, slack=-1))


@pytest.mark.parametrize("order", range(2, 9))
def test_extension_equals_closed_form(order):
    ext, closed = extend_morphism(order), extension_closed_form(order)
    assert all(ext[n] == closed[n] for n in [0] + list(range(2, order + 1)))


def test_extension_low_orders():
    ctx = extension_context(3)
    ext = extend_morphism(3, ctx=ctx)
    f = [ctx[f"f_{k}"] for k in range(4)]
    assert ext[0] == -f[0]
    assert ext[2] == -(f[1] * ctx["y_2"] + f[2]) / f[1] ** 2
    with pytest.raises(KeyError):
        ext[1]
    assert set(ext.as_images("alpha")) == {"alpha_0", "alpha_2", "alpha_3"}


def test_slice_choice_is_immaterial():
    # a representative with free x_1 normalizes to the same image as the slice x_1 = 1
    order = 4
    names = ["y_0", "x_1"] + [f"y_{p}" for p in range(2, order + 1)]
    from leafclass.symbolics import Chain

    ctx = Context(names, chains=[Chain("f", "y_0", order + 2)])
    x1 = ctx["x_1"]
    rep = [ctx["y_0"], x1] + [ctx[f"y_{p}"] * x1 ** p for p in range(2, order + 1)]
    g = Jet([-ctx[f"f_{k}"] for k in range(order + 1)])
    free = normalize_jet(jet_compose(g, Jet(rep)))
    sliced = extend_morphism(order, ctx=ctx)
    assert all(a == b for a, b in zip(free.entries, sliced.components))
