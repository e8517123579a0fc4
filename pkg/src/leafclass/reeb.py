"""Transversal data of the Reeb foliation.

A profile ``f`` on ``|t| < 1`` is given by an expression in ``t``; its
derivative tower is obtained by truncated Taylor arithmetic.  The checks
here produce finite monotone-trend evidence on fixed grids, never proofs
of limits.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import mpmath

from . import parsing, taylor
from .atlas import AtlasPresentation, Chart, Generator
from .errors import ParseError, PrecisionInsufficient
from .jets import extend_morphism, jet_variables
from .report import CheckList
from .symbolics import Chain, Context, Dependent

DEFAULT_TEXT = "exp(1/(1-t^2)) - e"
DEFAULT_GRID = (Fraction(0), Fraction(1, 4), Fraction(-1, 4), Fraction(1, 2),
                Fraction(-1, 2), Fraction(3, 4), Fraction(-3, 4))
DEFAULT_PRECISION = 256


def _mp(t):
    if isinstance(t, Fraction):
        return mpmath.mpf(t.numerator) / t.denominator
    return mpmath.mpf(t)


def tail_point(k: int):
    """``t_k = 1 - 10^-k`` at the current working precision."""
    return 1 - mpmath.mpf(10) ** (-k)


@dataclass(frozen=True)
class ReebProfile:
    """Profile function ``f(t)`` given by an expression in ``t``."""

    description: str
    tree: object = field(compare=False, repr=False)
    name: str = "custom"

    def series(self, t, order: int, prec: int = DEFAULT_PRECISION) -> taylor.Series:
        with mpmath.workprec(prec):
            return taylor.evaluate(self.tree, "t", _mp(t), order)

    def jet(self, t, order: int, prec: int = DEFAULT_PRECISION) -> list:
        """``[f(t), f'(t), ..., f^(order)(t)]``."""
        if not abs(_mp(t)) < 1:
            raise ValueError("profiles live on |t| < 1")
        with mpmath.workprec(prec):
            return self.series(t, order, prec).derivatives()

    def reciprocal_derivative_jet(self, t, order: int, prec: int = DEFAULT_PRECISION) -> list:
        """Derivatives ``(1/f')^(p)(t)`` for ``p = 0..order``."""
        with mpmath.workprec(prec):
            s = self.series(t, order + 1, prec).differentiate()
            return s.reciprocal().derivatives()


def profile_from_text(text: str, name: str = "custom") -> ReebProfile:
    tree = parsing.parse(text)
    # evaluate once so unknown names or functions fail early
    with mpmath.workprec(64):
        taylor.evaluate(tree, "t", mpmath.mpf("0.5"), 1)
    return ReebProfile(text, tree, name)


def default_profile() -> ReebProfile:
    return profile_from_text(DEFAULT_TEXT, "default")


def resolve_profile(spec: str) -> ReebProfile:
    """``default`` or ``expr:<text>``."""
    if spec == "default":
        return default_profile()
    if spec.startswith("expr:"):
        return profile_from_text(spec[5:])
    raise ParseError(f"profile must be 'default' or 'expr:<text>', got {spec!r}")


def _strict(seq, increasing: bool) -> bool:
    pairs = zip(seq, seq[1:])
    return all(b > a for a, b in pairs) if increasing else all(b < a for a, b in pairs)


def check_profile_conditions(
    f: ReebProfile,
    grid=DEFAULT_GRID,
    max_order: int = 3,
    tail: int = 4,
    prec: int = DEFAULT_PRECISION,
    growth: int = 10,
) -> CheckList:
    """Verdicts for the basic conditions and for boundary blow-up / decay.

    The blow-up and decay checks look at ``t_k = 1 - 10^-k`` for
    ``k = 1..tail``: ``|f^(p)|`` must rise strictly with total growth at least
    ``growth`` and ``|(1/f')^(p)|`` must fall strictly by the same factor.
    """
    if max_order < 2:
        raise ValueError("max_order must be >= 2")
    if any(not -1 < Fraction(t) < 1 for t in grid):
        raise ValueError("grid points must lie in (-1, 1)")
    out = CheckList()
    with mpmath.workprec(prec):
        eps = mpmath.mpf(2) ** (16 - prec)
        f0 = f.jet(0, 0, prec)[0]
        out.add("f(0)=0", abs(f0) <= eps, values={"f(0)": f0})

        bad_even, bad_sign, samples = [], [], {}
        for t in grid:
            v = f.jet(t, 0, prec)[0]
            samples[str(t)] = v
            w = f.jet(-Fraction(t), 0, prec)[0]
            if abs(v - w) > eps * max(1, abs(v)):
                bad_even.append(str(t))
            if v < -eps:
                bad_sign.append(str(t))
        out.add("even", not bad_even, witness=bad_even[0] if bad_even else None)
        out.add("nonnegative", not bad_sign, witness=bad_sign[0] if bad_sign else None, values=samples)

        points = [tail_point(k) for k in range(1, tail + 1)]
        jets = [f.jet(t, max_order, prec) for t in points]
        recips = []
        for t in points:
            try:
                recips.append(f.reciprocal_derivative_jet(t, max_order, prec))
            except PrecisionInsufficient as exc:
                raise PrecisionInsufficient(f"f'({mpmath.nstr(t, 10)}) vanishes: {exc}") from None
        for p in range(max_order + 1):
            seq = [abs(j[p]) for j in jets]
            ok = _strict(seq, True) and seq[0] > 0 and seq[-1] >= growth * seq[0]
            out.add(f"diverges[f^({p})]", ok, witness=None if ok else f"p={p}", values=seq)
        for p in range(max_order + 1):
            seq = [abs(r[p]) for r in recips]
            ok = _strict(seq, False) and seq[-1] * growth <= seq[0]
            out.add(f"decays[(1/f')^({p})]", ok, witness=None if ok else f"p={p}", values=seq)
    return out


@dataclass
class LimitRow:
    n: int
    k: int
    t: object
    ratio: object
    ratio_derivative: object
    precision: int

    def to_dict(self) -> dict:
        from .report import jsonable

        return jsonable({"n": self.n, "k": self.k, "t": self.t, "ratio": self.ratio,
                         "ratio_derivative": self.ratio_derivative, "precision": self.precision})


@dataclass
class LimitReport:
    """Values of ``f^(n)/(f')^n``, its t-derivative and ``f''/f'`` on ``t_k``."""

    profile: str
    precision: int
    n_max: int
    k_max: int
    rows: list[LimitRow]
    f2_over_f1: list
    checks: CheckList

    @property
    def passed(self) -> bool:
        return self.checks.passed

    def ratio(self, n: int, k: int):
        for r in self.rows:
            if r.n == n and r.k == k:
                return r.ratio
        raise KeyError((n, k))

    def to_dict(self) -> dict:
        from .report import jsonable

        return {
            "profile": self.profile,
            "precision": self.precision,
            "n_max": self.n_max,
            "k_max": self.k_max,
            "rows": [r.to_dict() for r in self.rows],
            "f2_over_f1": [
                {"k": k, "value": jsonable(v), "precision": self.precision}
                for k, v in enumerate(self.f2_over_f1, start=1)
            ],
            "checks": self.checks.to_list(),
        }

    def csv_rows(self) -> list[list[str]]:
        from .report import format_mpf

        out = [["n", "k", "t", "ratio", "ratio_derivative", "f2_over_f1", "precision"]]
        for r in self.rows:
            out.append([str(r.n), str(r.k), format_mpf(r.t), format_mpf(r.ratio),
                        format_mpf(r.ratio_derivative), format_mpf(self.f2_over_f1[r.k - 1]),
                        str(r.precision)])
        return out


@lru_cache(maxsize=None)
def golden_values() -> dict:
    """Oracle values for the default profile, computed independently ahead of time."""
    text = resources.files("leafclass").joinpath("data/reeb_golden.json").read_text()
    return json.loads(text)


def limit_quantities(f: ReebProfile, t, n_max: int, prec: int):
    """``(ratios, ratio_derivatives, f''/f')`` at one point, indexed by n = 2..n_max."""
    with mpmath.workprec(prec):
        d = f.jet(t, n_max + 1, prec)
        f1 = d[1]
        if f1 == 0:
            raise PrecisionInsufficient(f"f' vanishes at t = {mpmath.nstr(t, 10)}")
        ratios, derivs = {}, {}
        for n in range(2, n_max + 1):
            ratios[n] = d[n] / f1 ** n
            derivs[n] = d[n + 1] / f1 ** n - n * d[n] * d[2] / f1 ** (n + 1)
        return ratios, derivs, d[2] / f1


def check_limit_conditions(
    f: ReebProfile, n_max: int = 5, k_max: int = 4, prec: int = DEFAULT_PRECISION
) -> LimitReport:
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    rows, growth = [], []
    per_n: dict[int, list] = {n: [] for n in range(2, n_max + 1)}
    per_n_deriv: dict[int, list] = {n: [] for n in range(2, n_max + 1)}
    with mpmath.workprec(prec):
        for k in range(1, k_max + 1):
            t = tail_point(k)
            ratios, derivs, g = limit_quantities(f, t, n_max, prec)
            for n in range(2, n_max + 1):
                rows.append(LimitRow(n, k, t, ratios[n], derivs[n], prec))
                per_n[n].append(abs(ratios[n]))
                per_n_deriv[n].append(abs(derivs[n]))
            growth.append(g)

    checks = CheckList()
    for n in range(2, n_max + 1):
        seq = per_n[n]
        bad = next((k + 2 for k in range(len(seq) - 1) if not seq[k + 1] < seq[k]), None)
        checks.add(f"decreasing[n={n}]", bad is None,
                   witness=None if bad is None else {"n": n, "k": bad})
        seq = per_n_deriv[n]
        bad = next((k + 2 for k in range(len(seq) - 1) if not seq[k + 1] < seq[k]), None)
        checks.add(f"derivative_decreasing[n={n}]", bad is None,
                   witness=None if bad is None else {"n": n, "k": bad})
    bad = next((k + 2 for k in range(len(growth) - 1) if not growth[k + 1] > growth[k]), None)
    checks.add("f2_over_f1_increasing", bad is None, witness=None if bad is None else {"k": bad})

    if f.name == "default":
        gold = golden_values()["thresholds"]
        key = str(k_max)
        with mpmath.workprec(prec):
            for n in range(2, n_max + 1):
                limit = gold["ratio"].get(str(n), {}).get(key)
                if limit is None:
                    continue
                final = per_n[n][-1]
                checks.add(f"below_threshold[n={n}]", final <= mpmath.mpf(limit),
                           witness=None if final <= mpmath.mpf(limit) else {"n": n, "k": k_max},
                           values={"final": final, "threshold": limit})
            limit = gold["f2_over_f1"].get(key)
            if limit is not None:
                ok = growth[-1] >= mpmath.mpf(limit)
                checks.add("f2_over_f1_above_threshold", ok,
                           witness=None if ok else {"k": k_max},
                           values={"final": growth[-1], "threshold": limit})
    return LimitReport(f.description, prec, n_max, k_max, rows, growth, checks)


# ---------------------------------------------------------------------------
# transversal charts and the morphism alpha = -f(t)
# ---------------------------------------------------------------------------

ALPHA_CHART = "Calpha"
T_CHART = "Ct"


def alpha_context(order: int) -> Context:
    """Coordinates ``alpha_0, alpha_2..alpha_N`` with ``S, C = sin, cos(tau alpha_0)``."""
    return Context(
        jet_variables("alpha", order),
        constants=["tau"],
        dependents=[
            Dependent("S", (("alpha_0", "tau*C"),)),
            Dependent("C", (("alpha_0", "-tau*S"),)),
        ],
    )


def t_context(order: int, slack: int = 2) -> Context:
    """Coordinates ``t_0, t_2..t_N``, the profile chain ``f`` and the pulled-back trig symbols."""
    return Context(
        jet_variables("t", order),
        chains=[Chain("f", "t_0", order + slack)],
        constants=["tau"],
        dependents=[
            Dependent("Sphi", (("t_0", "-tau*f_1*Cphi"),)),
            Dependent("Cphi", (("t_0", "tau*f_1*Sphi"),)),
        ],
    )


def reeb_presentation(f: ReebProfile | None = None, order: int = 4) -> AtlasPresentation:
    """Charts ``Calpha`` (with the period shift T) and ``Ct`` (``|t| < 1``) and ``phi: Ct -> Calpha``."""
    if order < 2:
        raise ValueError("order must be >= 2")
    actx, tctx = alpha_context(order), t_context(order)
    calpha = Chart(ALPHA_CHART, actx, "alpha", "alpha in R, S = sin(tau alpha_0), C = cos(tau alpha_0)")
    ct = Chart(T_CHART, tctx, "t", "|t| < 1")
    shift = {}
    for step, name in ((1, "T"), (-1, "Tinv")):
        images = {v: actx[v] for v in actx.variables}
        images["alpha_0"] = actx["alpha_0"] + step
        images["S"], images["C"] = actx["S"], actx["C"]
        shift[name] = Generator(name, ALPHA_CHART, ALPHA_CHART, images)
    ext = extend_morphism(order, ctx=tctx, chain="f")
    phi_images = ext.as_images("alpha")
    phi_images["S"], phi_images["C"] = tctx["Sphi"], tctx["Cphi"]
    phi = Generator("phi", T_CHART, ALPHA_CHART, phi_images)
    return AtlasPresentation(
        [calpha, ct],
        [phi, shift["T"], shift["Tinv"]],
        relations=[(("T", "Tinv"), ()), (("Tinv", "T"), ())],
        profiles={"phi": f or default_profile()},
    )
