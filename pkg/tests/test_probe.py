import pytest

from leafclass.errors import CandidateNotClosed, CandidateNotPeriodic
from leafclass.probe import Candidate, default_candidates, nontriviality_probe
from leafclass.reeb import profile_from_text


@pytest.mark.parametrize("cand", default_candidates(), ids=lambda c: c.name)
def test_contradiction_evidence(reeb4, cand):
    rep = nontriviality_probe(reeb4, cand)
    assert rep.decomposition_exact
    assert rep.divergent and rep.corrections_bounded and rep.contradiction
    assert len(rep.points) == 4
    d = rep.to_dict()
    assert d["contradiction_evidence"] and "finite-grid" in d["note"]


def test_zero_candidate_terms(reeb4):
    rep = nontriviality_probe(reeb4, Candidate("zero"))
    assert [t.name for t in rep.terms] == ["f''/f'", "y_2", "-lambda_0(phi) f'"]
    growth = rep.terms[0].values
    assert growth[-1] > 1e5 * growth[0]


def test_rejects_non_closed(reeb4):
    with pytest.raises(CandidateNotClosed):
        nontriviality_probe(reeb4, Candidate("bad", (("alpha_2", "alpha_0"),)))


def test_rejects_non_periodic(reeb4):
    with pytest.raises(CandidateNotPeriodic):
        nontriviality_probe(reeb4, Candidate("bad", potential="alpha_0^2"))


def test_flat_free_profile_shows_no_divergence(reeb4):
    # a profile without boundary blow-up gives no evidence
    rep = nontriviality_probe(reeb4, Candidate("zero"), f=profile_from_text("t^2"), ks=(1, 2, 3))
    assert not rep.divergent and not rep.contradiction


def test_candidate_descriptions():
    c = Candidate("x", (("alpha_2", "3/2"),))
    assert c.describe() == "(3/2)*dalpha_2"
    assert Candidate("zero").describe() == "0"
    assert Candidate("p", potential="alpha_3*C").describe() == "d(alpha_3*C)"
