import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leafclass.atlas import AtlasPresentation, Chart, CString, Generator, composable_strings
from leafclass.cech import (CechCochain, cech_delta, chern_cochain, chern_form, de_rham,
                            first_nonzero, random_cochain, total_differential, total_first_nonzero,
                            verify_pullback_identity)
from leafclass.config import load_config, presentation_from_config
from leafclass.errors import MalformedPresentation, MissingString, TruncationExceeded
from leafclass.symbolics import Context, Form, wedge


def test_words_and_strings(reeb3):
    assert sorted(w.label for w in reeb3.words(1)) == sorted(["id_Calpha", "id_Ct", "T", "Tinv", "phi"])
    assert len(reeb3.words(2)) == 9
    assert len(composable_strings(reeb3, 0, 2)) == 2
    assert len(composable_strings(reeb3, 2, 2)) == 44
    for s in composable_strings(reeb3, 2, 2):
        assert s.words[0].target == s.words[1].source


def test_semantic_word_equality(reeb3):
    T, Tinv = reeb3.word("T"), reeb3.word("Tinv")
    assert reeb3.word("T", "Tinv") == reeb3.identity("Calpha")
    assert reeb3.compose(T, T) != T
    assert reeb3.word("phi", "T").label == "T.phi"


def test_config_presentation_matches_builtin(reeb3):
    P = presentation_from_config(load_config(None))
    assert {w.fingerprint() for w in P.words(2)} == {w.fingerprint() for w in reeb3.words(2)}


def test_malformed_presentations(reeb3):
    data = load_config(None)
    bad = dict(data, relations=[[["T"], []]])
    with pytest.raises(MalformedPresentation):
        presentation_from_config(bad)
    bad = dict(data, generators=[{"name": "g", "source": "Nowhere", "target": "Ct"}])
    with pytest.raises(MalformedPresentation):
        presentation_from_config(bad)
    with pytest.raises(MalformedPresentation):
        reeb3.compose(reeb3.word("T"), reeb3.word("phi"))


def test_delta_on_zero_cochains(reeb3):
    ctx = {c.name: c.ctx for c in reeb3.charts}
    w = CechCochain(0, 0, {CString("Calpha"): Form.scalar(ctx["Calpha"]["alpha_2"]),
                           CString("Ct"): Form.scalar(ctx["Ct"]["t_2"])})
    phi = reeb3.word("phi")
    value = cech_delta(w, reeb3)[CString("Ct", (phi,))]
    expected = Form.scalar(phi.images["alpha_2"]) - Form.scalar(ctx["Ct"]["t_2"])
    assert value == expected
    with pytest.raises(MissingString):
        w[CString("Cbeta")]
    with pytest.raises(ValueError):
        w[CString("Ct", (phi,))]


def test_constant_cochain_is_delta_closed():
    ctx = Context(["x_0", "x_2"])
    chart = Chart("U", ctx, "x")
    P = AtlasPresentation([chart], [Generator("g", "U", "U", {"x_0": ctx["x_0"] + 1, "x_2": ctx["x_2"]})])
    one = CechCochain(0, 0, {CString("U"): Form.scalar(ctx.one())})
    delta = cech_delta(one, P)
    assert first_nonzero(delta, composable_strings(P, 1, 2)) is None


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 1), st.integers(0, 1))
def test_delta_and_D_square_to_zero(reeb3, seed, k, l):
    w = random_cochain(reeb3, k, l, seed)
    assert first_nonzero(cech_delta(cech_delta(w, reeb3), reeb3), composable_strings(reeb3, k + 2, 2)) is None
    DD = total_differential(total_differential(w, reeb3), reeb3)
    assert total_first_nonzero(DD, reeb3, 2) is None
    assert first_nonzero(de_rham(de_rham(w)), composable_strings(reeb3, k, 2)) is None


def test_random_cochain_is_deterministic(reeb3):
    s = composable_strings(reeb3, 1, 1)[3]
    assert random_cochain(reeb3, 1, 1, 4)[s] == random_cochain(reeb3, 1, 1, 4)[s]


def test_chern_cochain_closed_only_with_consistent_orientation(reeb3):
    assert total_first_nonzero(total_differential(chern_cochain(reeb3), reeb3), reeb3, 2) is None
    hit = total_first_nonzero(total_differential(chern_cochain(reeb3, "literal"), reeb3), reeb3, 2)
    assert hit is not None and hit[0] == (1, 2)


def test_pullback_identity(reeb4):
    assert verify_pullback_identity(reeb4, 2, "phi")
    assert not verify_pullback_identity(reeb4, 2, "phi", "literal")
    assert verify_pullback_identity(reeb4, 2, reeb4.identity("Ct"))
    assert verify_pullback_identity(reeb4, 2, "T")
    mutated = dict(reeb4.word("phi").images)
    mutated["alpha_2"] = mutated["alpha_2"] * 2
    assert not verify_pullback_identity(reeb4.with_generator("phi", mutated), 2, "phi")
    with pytest.raises(ValueError):
        chern_form(reeb4, "Ct", "sideways")


def test_pullback_identity_needs_second_coordinate():
    ctx = Context(["x_0", "x_1"])
    P = AtlasPresentation([Chart("U", ctx, "x")], [Generator("g", "U", "U", {"x_0": ctx["x_0"], "x_1": ctx["x_1"]})])
    with pytest.raises(TruncationExceeded):
        verify_pullback_identity(P, 2, "g")
