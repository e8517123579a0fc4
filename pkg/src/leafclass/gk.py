"""Gelfand-Kazhdan form on truncated frames of infinite order of a 1-manifold.

Coordinates on the order-N truncation are the derivatives
``x_0, x_1, ..., x_N`` of a regular germ ``k`` at 0.  The W_1-valued form
``omega(tau) = -j_0 d/du (k_0^{-1} o k_u)(0)`` is derived by pushing a
symbolic curve ``x_p + u v_p`` through jet inversion and composition, then
reading off the coefficient of ``v_p`` in the u-derivative at ``u = 0``.
Component ``omega_p`` is the p-th derivative slot of the vector field.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import NotBasic, TruncationExceeded
from .jets import Jet, jet_compose, jet_invert, jet_variables
from .symbolics import (
    Context,
    Form,
    exterior_derivative,
    interior,
    lie_derivative,
    pullback,
    substitute,
    wedge,
)
from .wn import WCochain, chern_cocycle, gen


@dataclass(frozen=True)
class GKChart:
    """Order-N truncation of S(M_1) with its GL(1) quotient coordinates."""

    order: int
    ctx: Context
    quotient: Context

    def x(self, p: int):
        return self.ctx[f"x_{p}"]


@lru_cache(maxsize=None)
def gk_chart(order: int) -> GKChart:
    if order < 2:
        raise ValueError("the chart needs order >= 2")
    ctx = Context([f"x_{p}" for p in range(order + 1)])
    quotient = Context(jet_variables("y", order))
    return GKChart(order, ctx, quotient)


@lru_cache(maxsize=None)
def gk_form_components(order: int) -> tuple[Form, ...]:
    """``(omega_0, ..., omega_{N-1})`` as 1-forms on the order-N chart."""
    chart = gk_chart(order)
    N = order
    work = Context(
        [f"x_{p}" for p in range(N + 1)] + [f"v_{p}" for p in range(N + 1)] + ["u"]
    )
    x = [work[f"x_{p}"] for p in range(N + 1)]
    v = [work[f"v_{p}"] for p in range(N + 1)]
    u = work["u"]
    inv = jet_invert(Jet([work.zero()] + x[1:]))
    # k_0^{-1} is evaluated at k_u(0) = x_0 + u v_0; first order in u suffices
    shifted = [u * v[0] * inv[1]] + [inv[k] + u * v[0] * inv[k + 1] for k in range(1, N)]
    curve = [x[p] + u * v[p] for p in range(N)]
    h = jet_compose(Jet(shifted), Jet(curve))
    to_chart = {f"x_{p}": chart.x(p) for p in range(N + 1)}
    out = []
    for n in range(N):
        rate = substitute(h[n].derivative("u"), {"u": 0})
        terms = {}
        for p in range(N + 1):
            coeff = rate.derivative(f"v_{p}")
            if coeff:
                terms[(p,)] = -substitute(coeff, to_chart, chart.ctx)
        out.append(Form(chart.ctx, 1, terms))
    return tuple(out)


def omega(order: int, p: int) -> Form:
    comps = gk_form_components(order)
    if p >= len(comps):
        raise TruncationExceeded(f"omega_{p} needs truncation order > {order}")
    return comps[p]


def alpha(c: WCochain, order: int) -> Form:
    """Image of a W_1 cochain: each ``c^1_{1..1}`` (r ones) becomes ``omega_r``."""
    chart = gk_chart(order)
    total = Form.zero(chart.ctx, c.degree)
    for key, coeff in c.terms.items():
        piece = Form(chart.ctx, 0, {(): chart.ctx.const(coeff)})
        for g in key:
            if g.upper != 1 or any(j != 1 for j in g.lower):
                raise ValueError(f"{g} is not a generator of C*(W_1)")
            piece = wedge(piece, omega(order, len(g.lower)))
        total = total + piece
    return total


def chain_map_defects(order: int, max_r: int = 3) -> list[dict]:
    """Generators ``c^1_{1^r}`` (r <= max_r) where alpha(dc) != d alpha(c)."""
    from .wn import generator_differential

    bad = []
    for r in range(max_r + 1):
        g = gen(1, *([1] * r))
        lhs = alpha(generator_differential(g, 1), order)
        rhs = exterior_derivative(alpha(WCochain.generator(g), order))
        if lhs != rhs:
            bad.append({"generator": str(g), "alpha_dc": str(lhs), "d_alpha_c": str(rhs)})
    return bad


def connection_and_curvature(order: int) -> tuple[Form, Form]:
    """``beta = -alpha(c^1_1)`` and ``R = d beta + beta ^ beta``."""
    if order < 3:
        raise TruncationExceeded("the curvature needs omega_2, i.e. order >= 3")
    beta = -alpha(WCochain.generator(gen(1, 1)), order)
    R = exterior_derivative(beta) + wedge(beta, beta)
    return beta, R


def euler_field(order: int) -> dict:
    """Fundamental field ``sum p x_p d/dx_p`` of the GL(1) action ``x_p -> l^p x_p``."""
    chart = gk_chart(order)
    return {f"x_{p}": p * chart.x(p) for p in range(1, order + 1)}


def reduce_to_quotient(w: Form, order: int) -> Form:
    """Descend a GL(1)-basic form to the quotient coordinates ``y_0, y_2, ...``.

    Raises :class:`NotBasic` naming the failed check (horizontal, invariant,
    or descent).
    """
    chart = gk_chart(order)
    E = euler_field(order)
    if w.degree > 0 and not interior(E, w).is_zero():
        raise NotBasic("horizontal", f"(i_E w = {interior(E, w)})")
    if not lie_derivative(E, w).is_zero():
        raise NotBasic("invariant")
    q = chart.quotient
    slice_map = {"x_0": q["y_0"], "x_1": q.one()}
    slice_map.update({f"x_{p}": q[f"y_{p}"] for p in range(2, order + 1)})
    reduced = pullback(slice_map, w, q)
    x = chart.x
    projection = {"y_0": x(0)}
    projection.update({f"y_{p}": x(p) / x(1) ** p for p in range(2, order + 1)})
    if pullback(projection, reduced, chart.ctx) != w:
        raise NotBasic("descent")
    return reduced


def first_chern_quotient_form(order: int) -> Form:
    """``c_{1,y} = dy_2 ^ dy_0`` on the quotient chart."""
    q = gk_chart(order).quotient
    return wedge(q.d("y_2"), q.d("y_0"))


def chern_sign_constant(order: int) -> int:
    """The constant c with ``reduce(alpha(Psi_1)) = c dy_2 ^ dy_0``."""
    reduced = reduce_to_quotient(alpha(chern_cocycle(1, 1), order), order)
    ref = first_chern_quotient_form(order)
    if reduced == ref:
        return 1
    if reduced == -ref:
        return -1
    raise ValueError(f"reduced form {reduced} is not proportional to dy_2^dy_0")
