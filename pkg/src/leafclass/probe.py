"""Finite-evidence probe for the nontriviality of the first Chern class.

Given a closed, period-1 candidate 1-form ``lambda`` on the alpha chart,
``gamma = alpha_2 d alpha_0 + lambda`` is pulled back along ``phi`` and the
``dt_0`` coefficient ``A_0`` is split into the profile term ``f''/f'`` and
correction terms.  Along ``t_0 = 1 - 10^-k`` (other jet coordinates zero)
the profile term should blow up while every correction stays bounded, so
``A_0`` cannot extend smoothly to the boundary.  This is evidence on a
finite grid, not a proof.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .atlas import AtlasPresentation
from .errors import CandidateNotClosed, CandidateNotPeriodic, PrecisionInsufficient
from .reeb import ALPHA_CHART, T_CHART, ReebProfile, tail_point
from .report import format_mpf
from .symbolics import Expr, Form, differential, exterior_derivative, substitute

BOUND_FACTOR = 10
GROWTH_FACTOR = 100


@dataclass(frozen=True)
class Candidate:
    """``lambda = sum components[v] dv`` or ``d(potential)`` on the alpha chart."""

    name: str
    components: tuple[tuple[str, str], ...] = ()
    potential: str | None = None

    def form(self, P: AtlasPresentation) -> Form:
        ctx = P.chart(ALPHA_CHART).ctx
        if self.potential is not None:
            return differential(ctx.parse(self.potential))
        out = Form.zero(ctx, 1)
        for var, text in self.components:
            out = out + ctx.d(var) * ctx.parse(text)
        return out

    def describe(self) -> str:
        if self.potential is not None:
            return f"d({self.potential})"
        if not self.components:
            return "0"
        return " + ".join(f"({t})*d{v}" for v, t in self.components)


def default_candidates() -> list[Candidate]:
    return [
        Candidate("zero"),
        Candidate("const*dbeta_2", (("alpha_2", "3/2"),)),
        Candidate("d(beta_2^2 sin)", potential="alpha_2^2*S"),
        Candidate("d(beta_3 cos)", potential="alpha_3*C"),
        Candidate("d(beta_2 beta_3)", potential="alpha_2*alpha_3"),
    ]


@dataclass
class ProbeTerm:
    name: str
    expr: Expr
    values: list
    verdict: str

    def to_dict(self) -> dict:
        return {"name": self.name, "expr": str(self.expr),
                "values": [format_mpf(v) for v in self.values], "verdict": self.verdict}


@dataclass
class ProbeReport:
    candidate: str
    closed: bool
    periodic: bool
    A0: Expr
    decomposition_exact: bool
    points: list
    precision: int
    terms: list[ProbeTerm] = field(default_factory=list)

    @property
    def divergent(self) -> bool:
        return self.terms[0].verdict == "divergent"

    @property
    def corrections_bounded(self) -> bool:
        return all(t.verdict == "bounded" for t in self.terms[1:])

    @property
    def contradiction(self) -> bool:
        """Evidence that ``phi^* gamma`` cannot extend across ``t_0 = 1``."""
        return self.decomposition_exact and self.divergent and self.corrections_bounded

    def to_dict(self) -> dict:
        return {
            "candidate": self.candidate,
            "closed": self.closed,
            "periodic": self.periodic,
            "A0": str(self.A0),
            "decomposition_exact": self.decomposition_exact,
            "points": [format_mpf(p) for p in self.points],
            "precision": self.precision,
            "terms": [t.to_dict() for t in self.terms],
            "divergent_profile_term": self.divergent,
            "corrections_bounded": self.corrections_bounded,
            "contradiction_evidence": self.contradiction,
            "note": "finite-grid evidence only; no limit is proved",
        }


def _divergent(values) -> bool:
    v = [abs(x) for x in values]
    return all(b > a for a, b in zip(v, v[1:])) and v[0] > 0 and v[-1] >= GROWTH_FACTOR * v[0]


def _bounded(values) -> bool:
    v = [abs(x) for x in values]
    return max(v) <= BOUND_FACTOR * max(1, v[0])


def _numeric_point(P: AtlasPresentation, f: ReebProfile, k: int, prec: int) -> tuple[dict, int]:
    ctx = P.chart(T_CHART).ctx
    chain = ctx.chains[0]
    with mpmath.workprec(prec):
        t0 = tail_point(k)
        rough = f.jet(t0, 0, 64)[0]
    # sin/cos of 2 pi f(t_0) need f to absolute (not relative) accuracy
    wp = prec + max(0, int(mpmath.mag(rough))) + 32
    with mpmath.workprec(wp):
        t0 = tail_point(k)
        jet = f.jet(t0, chain.order, wp)
        if jet[1] == 0:
            raise PrecisionInsufficient(f"f' vanishes at t_0 = {mpmath.nstr(t0, 10)}")
        values = {v: mpmath.mpf(0) for v in ctx.variables}
        values["t_0"] = t0
        for j, d in enumerate(jet):
            values[chain.symbol(j)] = d
        values["tau"] = 2 * mpmath.pi
        arg = -2 * mpmath.pi * jet[0]
        values["Sphi"], values["Cphi"] = mpmath.sin(arg), mpmath.cos(arg)
    return values, wp


def nontriviality_probe(
    P: AtlasPresentation,
    candidate: Candidate,
    f: ReebProfile | None = None,
    ks=(1, 2, 3, 4),
    prec: int = 256,
) -> ProbeReport:
    f = f or P.profiles["phi"]
    lam = candidate.form(P)
    if not exterior_derivative(lam).is_zero():
        raise CandidateNotClosed(f"d lambda = {exterior_derivative(lam)}")
    shift = P.word("T")
    if P.pullback(shift, lam) != lam:
        raise CandidateNotPeriodic(f"T^* lambda != lambda for {candidate.describe()}")

    actx = P.chart(ALPHA_CHART).ctx
    tctx = P.chart(T_CHART).ctx
    phi = P.word("phi")
    gamma = actx.d("alpha_0") * actx["alpha_2"] + lam
    A0 = P.pullback(phi, gamma).coefficient("t_0")

    f1, f2 = tctx["f_1"], tctx["f_2"]
    terms = [("f''/f'", f2 / f1), ("y_2", tctx["t_2"])]
    lam0 = substitute(lam.coefficient("alpha_0"), phi.images, tctx)
    terms.append(("-lambda_0(phi) f'", -lam0 * f1))
    for var in actx.variables[1:]:
        lam_n = lam.coefficient(var)
        if lam_n.is_zero():
            continue
        n = var.split("_")[1]
        beta_n = phi.images[var]
        terms.append((f"lambda_{n}(phi) d beta_{n}/dy_0",
                       substitute(lam_n, phi.images, tctx) * beta_n.derivative("t_0")))
    exact = sum((e for _, e in terms), tctx.zero()) == A0

    points, columns = [], [[] for _ in terms]
    for k in ks:
        values, wp = _numeric_point(P, f, k, prec)
        with mpmath.workprec(wp):
            points.append(values["t_0"])
            for col, (_, e) in zip(columns, terms):
                col.append(+e.evaluate(values))
    with mpmath.workprec(prec):
        points = [+p for p in points]
        columns = [[+v for v in col] for col in columns]
        out = []
        for i, ((name, e), col) in enumerate(zip(terms, columns)):
            if i == 0:
                verdict = "divergent" if _divergent(col) else "not divergent"
            else:
                verdict = "bounded" if _bounded(col) else "unbounded"
            out.append(ProbeTerm(name, e, col, verdict))
    return ProbeReport(candidate.describe(), True, True, A0, exact, points, prec, out)
