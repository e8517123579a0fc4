import pytest

from leafclass.errors import MalformedSite
from leafclass.site import FiniteSite, Morphism, mutate_site, reeb_site, trivial_site, verify_site_axioms


@pytest.mark.parametrize("period", [1, 2, 3, 4])
def test_reeb_site_axioms(period):
    assert verify_site_axioms(reeb_site(period)).passed


def test_trivial_site():
    assert verify_site_axioms(trivial_site()).passed


def test_mutations_fail_with_witness():
    site = reeb_site()
    expected = {1: "Calpha", 2: "phi", 3: []}
    for axiom in (1, 2, 3):
        checks = verify_site_axioms(mutate_site(site, axiom))
        target = checks.checks[axiom - 1]
        assert not target.passed
        assert target.witness is not None
        assert str(expected[axiom]) in str(target.witness)
    with pytest.raises(ValueError):
        mutate_site(site, 4)


def test_sieves():
    site = reeb_site()
    assert site.is_sieve("Calpha", site.maximal_sieve("Calpha"))
    assert not site.is_sieve("Calpha", frozenset({"T"}))
    assert site.restrict("T", frozenset({"phi", "T.phi", "T^2.phi"})) == frozenset({"phi", "T.phi", "T^2.phi"})
    assert site.restrict("phi", frozenset({"T.phi"})) == frozenset()
    assert frozenset() in site.sieves("Ct")


def test_malformed_tables():
    m = [Morphism("id", "U", "U"), Morphism("g", "U", "U")]
    with pytest.raises(MalformedSite):
        FiniteSite(["U"], m, {("id", "id"): "id"}, {"U": "id"}, {"U": []})
    with pytest.raises(MalformedSite):
        FiniteSite(["U"], [Morphism("id", "U", "U")], {("id", "id"): "id"}, {"U": "id"}, {"U": [frozenset({"x"})]})
