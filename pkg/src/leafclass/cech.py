"""Cech-de Rham cochains on a finite atlas presentation.

A (k, l) cochain assigns an l-form on ``U_0`` to every composable string
``U_0 -g_1-> U_1 -> ... -g_k-> U_k``.  Values are either stored or produced
on demand by a rule, so differentials can be chained without enumerating
the (unbounded) set of strings they might need.
"""
from __future__ import annotations

import random
from typing import Callable, Iterable

from .atlas import AtlasPresentation, CString, Word, composable_strings
from .errors import MissingString, TruncationExceeded
from .symbolics import Form, exterior_derivative, wedge


class CechCochain:
    def __init__(
        self,
        k: int,
        l: int,
        values: dict[CString, Form] | None = None,
        rule: Callable[[CString], Form] | None = None,
    ):
        self.k = k
        self.l = l
        self._values = dict(values or {})
        self._rule = rule
        for s in self._values:
            if s.length != k:
                raise ValueError(f"string {s.label} has length {s.length}, expected {k}")

    def __getitem__(self, s: CString) -> Form:
        if s.length != self.k:
            raise ValueError(f"string {s.label} has length {s.length}, expected {self.k}")
        if s in self._values:
            return self._values[s]
        if self._rule is None:
            raise MissingString(f"cochain has no value on {s.label}")
        value = self._rule(s)
        self._values[s] = value
        return value

    def __contains__(self, s: CString) -> bool:
        return s in self._values or self._rule is not None

    def defined_on(self) -> list[CString]:
        """Strings with a stored (or already computed) value."""
        return list(self._values)

    def _combine(self, other: "CechCochain", sign: int) -> "CechCochain":
        if (self.k, self.l) != (other.k, other.l):
            raise ValueError("bidegrees differ")
        return CechCochain(self.k, self.l, rule=lambda s: self[s] + other[s] * sign)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c) -> "CechCochain":
        return CechCochain(self.k, self.l, rule=lambda s: self[s] * c)


def _delta_value(w: CechCochain, P: AtlasPresentation, s: CString) -> Form:
    g = s.words
    p = w.k
    total = P.pullback(g[0], w[CString(g[0].target, g[1:])])
    for i in range(1, p + 1):
        merged = P.compose(g[i - 1], g[i])
        face = CString(s.start, g[: i - 1] + (merged,) + g[i + 1:])
        term = w[face]
        total = total + term if i % 2 == 0 else total - term
    last = w[CString(s.start, g[:p])]
    return total + last if (p + 1) % 2 == 0 else total - last


def cech_delta(w: CechCochain, P: AtlasPresentation) -> CechCochain:
    """``(dw)(g_1..g_{p+1}) = g_1^* w(g_2..) + sum (-1)^i w(.., g_{i+1} g_i, ..) + (-1)^{p+1} w(g_1..g_p)``."""
    return CechCochain(w.k + 1, w.l, rule=lambda s: _delta_value(w, P, s))


def de_rham(w: CechCochain) -> CechCochain:
    return CechCochain(w.k, w.l + 1, rule=lambda s: exterior_derivative(w[s]))


class TotalCochain:
    """Element of the total complex: a sum of cochains of distinct bidegrees."""

    def __init__(self, parts: Iterable[CechCochain] = ()):
        self.parts: dict[tuple[int, int], CechCochain] = {}
        for c in parts:
            self._add(c)

    def _add(self, c: CechCochain) -> None:
        key = (c.k, c.l)
        self.parts[key] = self.parts[key] + c if key in self.parts else c

    def __add__(self, other: "TotalCochain") -> "TotalCochain":
        out = TotalCochain(self.parts.values())
        for c in other.parts.values():
            out._add(c)
        return out

    def __getitem__(self, bidegree: tuple[int, int]) -> CechCochain:
        return self.parts[bidegree]

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted(self.parts)


def total_differential(w: CechCochain | TotalCochain, P: AtlasPresentation) -> TotalCochain:
    """``D = delta + (-1)^k d`` on ``C^{k,l}``."""
    if isinstance(w, TotalCochain):
        out = TotalCochain()
        for part in w.parts.values():
            out = out + total_differential(part, P)
        return out
    d = de_rham(w)
    return TotalCochain([cech_delta(w, P), d if w.k % 2 == 0 else -d])


def first_nonzero(c: CechCochain, strings: Iterable[CString]) -> CString | None:
    """First string on which ``c`` is nonzero, or None."""
    for s in strings:
        if not c[s].is_zero():
            return s
    return None


def total_first_nonzero(c: TotalCochain, P: AtlasPresentation, word_bound: int):
    """``(bidegree, string)`` of the first nonzero value, or None."""
    for key in c.bidegrees():
        hit = first_nonzero(c[key], composable_strings(P, key[0], word_bound))
        if hit is not None:
            return key, hit
    return None


# ---------------------------------------------------------------------------
# random cochains for property checks
# ---------------------------------------------------------------------------

def _symbol_pool(P: AtlasPresentation, chart: str) -> list[str]:
    ctx = P.chart(chart).ctx
    pool = list(ctx.variables) + [d.name for d in ctx.dependents]
    for ch in ctx.chains:
        pool += [ch.symbol(0), ch.symbol(1)]
    return pool


def _random_form(P: AtlasPresentation, chart: str, degree: int, rng: random.Random, terms: int) -> Form:
    ctx = P.chart(chart).ctx
    pool = _symbol_pool(P, chart)
    nvars = len(ctx.variables)
    out = Form.zero(ctx, degree)
    for _ in range(terms):
        coeff = ctx.const(rng.randint(-3, 3))
        for _ in range(rng.randint(0, 2)):
            coeff = coeff * ctx[rng.choice(pool)]
        key = tuple(sorted(rng.sample(range(nvars), degree)))
        basis = Form(ctx, 0, {(): ctx.one()})
        for i in key:
            basis = wedge(basis, ctx.d(ctx.variables[i]))
        out = out + basis * coeff
    return out


def random_cochain(P: AtlasPresentation, k: int, l: int, seed: int, terms: int = 2) -> CechCochain:
    """Polynomial-coefficient cochain whose value on each string is derived from ``(seed, string)``."""

    def rule(s: CString) -> Form:
        rng = random.Random(f"{seed}:{k}:{l}:{s.fingerprint()}")
        return _random_form(P, s.start, l, rng, terms)

    return CechCochain(k, l, rule=rule)


# ---------------------------------------------------------------------------
# first Chern class representative
# ---------------------------------------------------------------------------

def chern_form(P: AtlasPresentation, chart: str, orientation: str = "consistent") -> Form:
    """The 2-form ``d x_2 ^ d x_0`` on a chart with coordinate ``x``.

    ``orientation="literal"`` uses ``d alpha_0 ^ d alpha_2`` on the alpha chart
    and ``d x_2 ^ d x_0`` elsewhere.
    """
    c = P.chart(chart)
    ctx = c.ctx
    x0, x2 = c.variable(0), c.variable(2)
    if x2 not in ctx.var_index:
        raise TruncationExceeded(f"chart {chart} has no coordinate {x2}")
    if orientation not in ("consistent", "literal"):
        raise ValueError(f"unknown orientation {orientation!r}")
    if orientation == "literal" and c.coordinate == "alpha":
        return wedge(ctx.d(x0), ctx.d(x2))
    return wedge(ctx.d(x2), ctx.d(x0))


def chern_cochain(P: AtlasPresentation, orientation: str = "consistent") -> CechCochain:
    """The (0, 2) cochain with value ``c_1`` on every chart."""
    return CechCochain(0, 2, {CString(c.name): chern_form(P, c.name, orientation) for c in P.charts})


def verify_pullback_identity(
    P: AtlasPresentation,
    N: int = 2,
    morphism: str | Word = "phi",
    orientation: str = "consistent",
) -> bool:
    """Whether ``g^* c_1(target) == c_1(source)`` exactly for the given morphism."""
    word = P.word(morphism) if isinstance(morphism, str) else morphism
    for name in (word.source, word.target):
        c = P.chart(name)
        if c.variable(max(N, 2)) not in c.ctx.var_index:
            raise TruncationExceeded(f"chart {name} is truncated below order {max(N, 2)}")
    lhs = P.pullback(word, chern_form(P, word.target, orientation))
    return lhs == chern_form(P, word.source, orientation)
