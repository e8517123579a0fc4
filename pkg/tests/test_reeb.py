from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leafclass import taylor
from leafclass.errors import ParseError, PrecisionInsufficient
from leafclass.parsing import parse
from leafclass.reeb import (check_limit_conditions, check_profile_conditions, default_profile,
                            golden_values, profile_from_text, reeb_presentation, resolve_profile,
                            tail_point)
from leafclass.jets import extend_morphism


def _series(text, point, order):
    with mpmath.workprec(200):
        x = mpmath.mpf(point.numerator) / point.denominator
        return taylor.evaluate(parse(text), "t", x, order).derivatives()


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2), max_denominator=20),
       st.sampled_from(["exp(1/(1-t^2))", "sin(t)*cos(2*t)", "log(2+t)/(1+t^2)", "sqrt(3+t)", "(1+t)^3/(2-t)"]))
def test_series_matches_mpmath_diff(point, text):
    func = {
        "exp(1/(1-t^2))": lambda t: mpmath.exp(1 / (1 - t ** 2)),
        "sin(t)*cos(2*t)": lambda t: mpmath.sin(t) * mpmath.cos(2 * t),
        "log(2+t)/(1+t^2)": lambda t: mpmath.log(2 + t) / (1 + t ** 2),
        "sqrt(3+t)": lambda t: mpmath.sqrt(3 + t),
        "(1+t)^3/(2-t)": lambda t: (1 + t) ** 3 / (2 - t),
    }[text]
    got = _series(text, point, 4)
    with mpmath.workdps(40):
        x = mpmath.mpf(point.numerator) / point.denominator
        for k in range(5):
            want = mpmath.diff(func, x, k)
            assert abs(got[k] - want) <= mpmath.mpf(10) ** -25 * max(1, abs(want))


def test_reciprocal_of_zero_series():
    with pytest.raises(PrecisionInsufficient):
        taylor.Series.constant(0, 3).reciprocal()


def test_default_profile_value():
    f = default_profile()
    with mpmath.workprec(256):
        assert abs(f.jet(Fraction(1, 2), 0)[0] - (mpmath.exp(mpmath.mpf(4) / 3) - mpmath.e)) < mpmath.mpf(2) ** -240
    with pytest.raises(ValueError):
        f.jet(1, 2)


def test_default_profile_conditions():
    checks = check_profile_conditions(default_profile())
    assert checks.passed, [c.name for c in checks if not c.passed]


def test_square_profile_fails_boundary_conditions():
    checks = check_profile_conditions(profile_from_text("t^2"))
    failed = {c.name for c in checks if not c.passed}
    assert {"f(0)=0", "even", "nonnegative"}.isdisjoint(failed)
    assert "diverges[f^(0)]" in failed and "decays[(1/f')^(0)]" in failed


def test_odd_profile_is_not_even():
    checks = check_profile_conditions(profile_from_text("t^3 + t^2"))
    assert not checks["even"].passed


def test_limits_match_golden_values():
    gold = golden_values()
    report = check_limit_conditions(default_profile(), 5, 4, 256)
    assert report.passed
    with mpmath.workprec(256):
        for n, row in gold["ratio"].items():
            for k, value in row.items():
                want = mpmath.mpf(value)
                assert abs(report.ratio(int(n), int(k)) - want) <= abs(want) * mpmath.mpf(10) ** -40
        for k, value in gold["f2_over_f1"].items():
            want = mpmath.mpf(value)
            assert abs(report.f2_over_f1[int(k) - 1] - want) <= abs(want) * mpmath.mpf(10) ** -40
        assert tail_point(2) == 1 - mpmath.mpf(1) / 100


def test_limit_report_serialization():
    report = check_limit_conditions(default_profile(), 3, 2, 128)
    rows = report.csv_rows()
    assert rows[0][0] == "n" and len(rows) == 1 + 2 * 2
    d = report.to_dict()
    assert d["n_max"] == 3 and len(d["f2_over_f1"]) == 2


def test_resolve_profile():
    assert resolve_profile("default").name == "default"
    assert resolve_profile("expr:t^4").description == "t^4"
    with pytest.raises(ParseError):
        resolve_profile("t^4")
    with pytest.raises(ParseError):
        profile_from_text("t^2 + q")


def test_presentation_uses_extension(reeb4):
    phi = reeb4.word("phi")
    ctx = reeb4.chart("Ct").ctx
    ext = extend_morphism(4, ctx=ctx, chain="f")
    for n in (0, 2, 3, 4):
        assert phi.images[f"alpha_{n}"] == ext[n]
    assert reeb4.compose(reeb4.word("T"), reeb4.word("Tinv")) == reeb4.identity("Calpha")


def test_extended_coordinates_vanish_numerically_at_boundary(reeb4):
    # beta_n(t_0, 0, ..., 0) = f^(n)/(f')^n up to sign tends to 0
    f = default_profile()
    phi = reeb4.word("phi")
    chain = reeb4.chart("Ct").ctx.chains[0]
    values = []
    with mpmath.workprec(256):
        for k in (1, 2, 3):
            t0 = tail_point(k)
            jet = f.jet(t0, chain.order)
            point = {v: mpmath.mpf(0) for v in reeb4.chart("Ct").ctx.variables}
            point["t_0"] = t0
            point.update({chain.symbol(j): d for j, d in enumerate(jet)})
            values.append(abs(phi.images["alpha_3"].evaluate(point)))
    assert values[0] > values[1] > values[2]
