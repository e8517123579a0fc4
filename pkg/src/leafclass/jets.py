"""Truncated jets of maps of the line.

A jet of order N stores derivatives ``(x_0, x_1, ..., x_N)`` with
``x_p = d^p k / dt^p (0)`` (derivatives, not Taylor coefficients).  Entries
may be exact :class:`~leafclass.symbolics.Expr` values, ints/Fractions, or
mpmath numbers; all arithmetic is generic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import NonzeroBasePoint, NotRegular, OrderMismatch, TruncationExceeded, ZeroScalar
from .symbolics import Chain, Context, Expr

DEFAULT_ORDER = 8


def _exact(value):
    return Fraction(value) if isinstance(value, int) else value


def _is_zero(value) -> bool:
    if isinstance(value, Expr):
        return value.is_zero()
    return value == 0


@dataclass(frozen=True)
class Jet:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if len(self.entries) < 2:
            raise ValueError("a jet needs at least x_0 and x_1")

    @property
    def order(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, p: int):
        return self.entries[p]

    def __len__(self):
        return len(self.entries)

    def is_regular(self) -> bool:
        return not _is_zero(self.entries[1])

    def __eq__(self, other):
        if not isinstance(other, Jet) or other.order != self.order:
            return NotImplemented if not isinstance(other, Jet) else False
        return all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash(self.entries)

    @classmethod
    def identity(cls, order: int, one=1, zero=0) -> "Jet":
        return cls((zero, one) + (zero,) * (order - 1))


@dataclass(frozen=True)
class NormalizedJet:
    """GL(1)-orbit representative ``(y_0, y_2, ..., y_N)``; ``y_1 = 1`` is implicit."""

    entries: tuple

    @property
    def order(self) -> int:
        return len(self.entries)

    def __getitem__(self, p: int):
        if p == 0:
            return self.entries[0]
        if p == 1:
            raise KeyError("y_1 is identically 1 and not stored")
        return self.entries[p - 1]

    def __eq__(self, other):
        if not isinstance(other, NormalizedJet):
            return NotImplemented
        return len(self.entries) == len(other.entries) and all(
            a == b for a, b in zip(self.entries, other.entries)
        )

    def __hash__(self):
        return hash(self.entries)


@lru_cache(maxsize=None)
def compositions(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Ordered tuples of ``k`` positive integers summing to ``n``."""
    if k == 1:
        return ((n,),)
    out = []
    for first in range(1, n - k + 2):
        out.extend((first,) + rest for rest in compositions(n - first, k - 1))
    return tuple(out)


@lru_cache(maxsize=None)
def faa_di_bruno_table(n: int) -> tuple:
    """Terms of the n-th derivative of a composite ``g(f(t))``.

    Returns tuples ``(k, coeff, parts)`` where ``parts`` is a tuple of
    ``(i, multiplicity)``; the term reads ``coeff * g_k * prod f_i^multiplicity``.
    Coefficients collect ``n!/k! * prod 1/i_j!`` over all ordered compositions.
    """
    terms = []
    for k in range(1, n + 1):
        acc: dict[tuple, Fraction] = {}
        for comp in compositions(n, k):
            weight = Fraction(factorial(n), factorial(k))
            for i in comp:
                weight /= factorial(i)
            key = tuple(sorted((i, comp.count(i)) for i in set(comp)))
            acc[key] = acc.get(key, Fraction(0)) + weight
        for parts, coeff in sorted(acc.items()):
            assert coeff.denominator == 1
            terms.append((k, int(coeff), parts))
    return tuple(terms)


def _power(x, m):
    out = x
    for _ in range(m - 1):
        out = out * x
    return out


def _composite_entry(g: Jet, f: Jet, n: int):
    total = None
    for k, coeff, parts in faa_di_bruno_table(n):
        term = g[k] * coeff
        for i, m in parts:
            term = term * _power(f[i], m)
        total = term if total is None else total + term
    return total


def jet_compose(g: Jet, f: Jet) -> Jet:
    """Jet of ``g o f``; ``g`` holds derivatives of g at the point ``f_0``."""
    if g.order != f.order:
        raise OrderMismatch(f"orders {g.order} and {f.order} differ")
    return Jet((g[0],) + tuple(_composite_entry(g, f, n) for n in range(1, f.order + 1)))


def jet_compose_series(g: Jet, f: Jet) -> Jet:
    """Reference composite by truncated power-series substitution.

    Computes ``sum_k g_k/k! (f(t) - f_0)^k`` on Taylor coefficients and converts
    back to derivatives.  Slower than :func:`jet_compose` and independent of
    the Faa di Bruno table; used as a cross-check.
    """
    if g.order != f.order:
        raise OrderMismatch(f"orders {g.order} and {f.order} differ")
    N = f.order
    zero = f[0] * 0
    shift = [zero] + [_exact(f[p]) / factorial(p) for p in range(1, N + 1)]
    power = [zero + 1] + [zero] * N
    total = [zero] * (N + 1)
    for k in range(N + 1):
        c = _exact(g[k]) / factorial(k)
        total = [a + c * b for a, b in zip(total, power)]
        power = [sum((power[i] * shift[n - i] for i in range(n)), zero) for n in range(N + 1)]
    return Jet(tuple(total[n] * factorial(n) for n in range(N + 1)))


def jet_invert(f: Jet) -> Jet:
    """Compositional inverse of a regular jet based at the origin."""
    if not f.is_regular():
        raise NotRegular("x_1 vanishes")
    if not _is_zero(f[0]):
        raise NonzeroBasePoint("jet_invert needs x_0 = 0; shift the base point first")
    f = Jet(tuple(_exact(x) for x in f.entries))
    zero = f[0] * 0
    g = [zero, 1 / f[1]]
    f1n = f[1]
    for n in range(2, f.order + 1):
        f1n = f1n * f[1]
        # h_n = g_n f_1^n + (terms with g_k, k < n) must vanish
        rest = None
        for k, coeff, parts in faa_di_bruno_table(n):
            if k == n:
                continue
            term = g[k] * coeff
            for i, m in parts:
                term = term * _power(f[i], m)
            rest = term if rest is None else rest + term
        g.append(-rest / f1n)
    return Jet(g)


def gl1_act(scalar, s: Jet) -> Jet:
    """``lambda . s = (lambda^p x_p)``."""
    if scalar == 0:
        raise ZeroScalar("the GL(1) scalar must be nonzero")
    out = []
    power = 1
    for x in s.entries:
        out.append(x * power)
        power = power * scalar
    return Jet(out)


def normalize_jet(s: Jet) -> NormalizedJet:
    """Quotient coordinates ``y_0 = x_0``, ``y_p = x_p / x_1^p`` (p >= 2)."""
    if not s.is_regular():
        raise NotRegular("x_1 vanishes")
    s = Jet(tuple(_exact(x) for x in s.entries))
    out = [s[0]]
    x1p = s[1]
    for p in range(2, s.order + 1):
        x1p = x1p * s[1]
        out.append(s[p] / x1p)
    return NormalizedJet(tuple(out))


# ---------------------------------------------------------------------------
# jet extension of a chart morphism  alpha = -f(t)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JetMapExpr:
    """Components ``beta_0, beta_2, ..., beta_N`` of an extended morphism."""

    ctx: Context
    components: tuple

    @property
    def order(self) -> int:
        return len(self.components)

    def __getitem__(self, n: int) -> Expr:
        if n == 1:
            raise KeyError("beta_1 is normalized away")
        return self.components[0] if n == 0 else self.components[n - 1]

    def as_images(self, prefix: str) -> dict[str, Expr]:
        """Map ``prefix_n -> beta_n`` for use with pullback."""
        out = {f"{prefix}_0": self.components[0]}
        for n in range(2, self.order + 1):
            out[f"{prefix}_{n}"] = self[n]
        return out


def jet_variables(prefix: str, order: int) -> list[str]:
    """Quotient coordinate names ``prefix_0, prefix_2, ..., prefix_order``."""
    return [f"{prefix}_0"] + [f"{prefix}_{p}" for p in range(2, order + 1)]


def extension_context(order: int, prefix: str = "y", chain: str = "f", slack: int = 2) -> Context:
    """Context with quotient coordinates and a chain of order ``order + slack``."""
    return Context(jet_variables(prefix, order), chains=[Chain(chain, f"{prefix}_0", order + slack)])


def _chain_of(ctx: Context, chain: str) -> Chain:
    for ch in ctx.chains:
        if ch.name == chain:
            return ch
    raise KeyError(f"no chain named {chain!r} in {ctx!r}")


def extend_morphism(order: int = DEFAULT_ORDER, ctx: Context | None = None, chain: str = "f") -> JetMapExpr:
    """Extension of ``alpha = -f(t)`` to normalized jets, built generically.

    The source jet is the slice representative ``(y_0, 1, y_2, ..., y_N)``;
    it is composed with the jet of ``-f`` by Faa di Bruno and normalized.
    Normalization is GL(1)-invariant, so the slice choice is harmless.
    """
    ctx = ctx or extension_context(order)
    ch = _chain_of(ctx, chain)
    prefix = ch.base.rsplit("_", 1)[0]
    if ch.order < order:
        raise TruncationExceeded(f"chain {chain} has order {ch.order} < {order}")
    g = Jet(tuple(-ctx[ch.symbol(k)] for k in range(order + 1)))
    src = [ctx[f"{prefix}_0"], ctx.one()] + [ctx[f"{prefix}_{p}"] for p in range(2, order + 1)]
    h = jet_compose(g, Jet(src))
    return JetMapExpr(ctx, normalize_jet(h).entries)


def extension_closed_form(order: int = DEFAULT_ORDER, ctx: Context | None = None, chain: str = "f") -> JetMapExpr:
    """Closed-form extension of ``alpha = -f(t)``, summed literally over compositions."""
    ctx = ctx or extension_context(order)
    ch = _chain_of(ctx, chain)
    prefix = ch.base.rsplit("_", 1)[0]

    def y(i):
        return ctx.one() if i == 1 else ctx[f"{prefix}_{i}"]

    F = [ctx[ch.symbol(k)] for k in range(order + 1)]
    comps = [-F[0]]
    for n in range(2, order + 1):
        f1n = F[1] ** n
        inner = ctx.zero()
        for k in range(1, n):
            s = ctx.zero()
            for comp in compositions(n, k):
                term = ctx.one()
                for i in comp:
                    term = term * y(i) / factorial(i)
                s = s + term
            inner = inner + F[k] / f1n * s / factorial(k)
        comps.append((-1) ** (n - 1) * (factorial(n) * inner + F[n] / f1n))
    return JetMapExpr(ctx, tuple(comps))
