"""Exact differential field of rational functions and its exterior algebra.

An :class:`Expr` is a rational function over Q in the symbols of a
:class:`Context`.  Symbols come in four kinds:

* *variables* -- coordinates; each has a differential ``d<name>``;
* *chain symbols* ``f_0, f_1, ..., f_M`` of a formal function ``f`` of one
  base variable, with ``d f_k / d base = f_{k+1}``; differentiating ``f_M``
  raises :class:`TruncationExceeded`;
* *dependent symbols* with user-given partial derivatives (used for
  ``sin``/``cos`` of a coordinate and for compositions such as ``sin(-2 pi f)``);
* *constants* with zero derivative.

Rational functions are backed by sympy's sparse fraction field over QQ,
which keeps numerator and denominator coprime.  Equality is decided by
cross-multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import mpmath
from sympy import QQ, Symbol
from sympy.polys.fields import FracField

from . import parsing
from .errors import (
    ContextMismatch,
    MissingComponent,
    ParseError,
    TruncationExceeded,
    UnknownSymbol,
)

Scalar = Union[int, Fraction]

_TRUNCATED = object()


@dataclass(frozen=True)
class Chain:
    """Formal function ``name`` of ``base`` with derivatives up to ``order``."""

    name: str
    base: str
    order: int

    def symbol(self, k: int) -> str:
        return f"{self.name}_{k}"


@dataclass(frozen=True)
class Dependent:
    """Symbol with prescribed partial derivatives.

    ``rules`` maps variable names to derivative expressions written in the
    expression grammar of :mod:`leafclass.parsing`.  Variables not listed
    have zero partial derivative.
    """

    name: str
    rules: tuple[tuple[str, str], ...] = ()


class Context:
    """Ordered symbol table of a differential field.  Immutable."""

    def __init__(
        self,
        variables: Iterable[str],
        chains: Iterable[Chain] = (),
        constants: Iterable[str] = (),
        dependents: Iterable[Dependent] = (),
    ):
        self.variables = tuple(variables)
        self.chains = tuple(chains)
        self.constants = tuple(constants)
        self.dependents = tuple(dependents)
        names = list(self.variables)
        for ch in self.chains:
            if ch.base not in self.variables:
                raise UnknownSymbol(f"chain {ch.name} has unknown base {ch.base}")
            names.extend(ch.symbol(k) for k in range(ch.order + 1))
        names.extend(dep.name for dep in self.dependents)
        names.extend(self.constants)
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate symbol names: {dupes}")
        self.symbols = tuple(names)
        self.index = {name: i for i, name in enumerate(names)}
        self.var_index = {name: i for i, name in enumerate(self.variables)}
        self.field = FracField([Symbol(n) for n in names], QQ)
        self.ring = self.field.ring
        self._gens = self.field.gens
        self._signature = (self.variables, self.chains, self.constants, self.dependents)
        self._build_rules()

    # rules[s] maps variable index -> FracElement or _TRUNCATED; missing means 0
    def _build_rules(self) -> None:
        rules: dict[int, dict[int, object]] = {}
        for v in self.variables:
            rules[self.index[v]] = {self.var_index[v]: self.field.one}
        for ch in self.chains:
            b = self.var_index[ch.base]
            for k in range(ch.order):
                rules[self.index[ch.symbol(k)]] = {b: self._gens[self.index[ch.symbol(k + 1)]]}
            rules[self.index[ch.symbol(ch.order)]] = {b: _TRUNCATED}
        for dep in self.dependents:
            table = {}
            for var, text in dep.rules:
                if var not in self.var_index:
                    raise UnknownSymbol(f"dependent {dep.name}: {var} is not a variable")
                table[self.var_index[var]] = self.parse(text).frac
            rules[self.index[dep.name]] = table
        self._rules = rules
        depends: dict[int, frozenset] = {}
        for s, table in rules.items():
            depends[s] = frozenset(table)
        self._depends = depends

    def __eq__(self, other):
        return isinstance(other, Context) and self._signature == other._signature

    def __hash__(self):
        return hash(self._signature)

    def __repr__(self):
        return f"Context({', '.join(self.symbols)})"

    # -- constructors -------------------------------------------------
    def symbol(self, name: str) -> "Expr":
        try:
            return Expr(self, self._gens[self.index[name]])
        except KeyError:
            raise UnknownSymbol(name) from None

    def __getitem__(self, name: str) -> "Expr":
        return self.symbol(name)

    def const(self, value: Scalar) -> "Expr":
        return Expr(self, self._coerce(value))

    def zero(self) -> "Expr":
        return Expr(self, self.field.zero)

    def one(self) -> "Expr":
        return Expr(self, self.field.one)

    def d(self, name: str) -> "Form":
        """The coordinate 1-form ``d name``."""
        if name not in self.var_index:
            raise UnknownSymbol(f"{name} is not a variable of {self!r}")
        return Form(self, 1, {(self.var_index[name],): self.field.one})

    def parse(self, text: str) -> "Expr":
        """Build an Expr from the expression grammar.

        Identifiers resolve to symbols; ``f(x)`` with ``f`` a chain whose base
        is ``x`` resolves to ``f_0``.
        """
        return Expr(self, self._build(parsing.parse(text)))

    def _build(self, node):
        if isinstance(node, parsing.Num):
            return self._coerce(node.value)
        if isinstance(node, parsing.Name):
            if node.name not in self.index:
                raise UnknownSymbol(node.name)
            return self._gens[self.index[node.name]]
        if isinstance(node, parsing.Neg):
            return -self._build(node.operand)
        if isinstance(node, parsing.Call):
            for ch in self.chains:
                if (
                    ch.name == node.func
                    and len(node.args) == 1
                    and node.args[0] == parsing.Name(ch.base)
                ):
                    return self._gens[self.index[ch.symbol(0)]]
            raise ParseError(f"function {node.func!r} is not available in exact expressions")
        if isinstance(node, parsing.BinOp):
            if node.op == "^":
                k = parsing.integer_exponent(node.right)
                base = self._build(node.left)
                if k < 0 and not base:
                    raise ZeroDivisionError("negative power of zero")
                return self.field.one if k == 0 else base ** k
            a, b = self._build(node.left), self._build(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if b == 0:
                raise ZeroDivisionError("division by zero in expression")
            return a / b
        raise ParseError(f"cannot interpret {node!r}")

    def _coerce(self, value):
        if isinstance(value, Expr):
            if value.ctx != self:
                raise ContextMismatch(f"{value.ctx!r} vs {self!r}")
            return value.frac
        if isinstance(value, Fraction):
            return self.field.ground_new(QQ(value.numerator, value.denominator))
        if isinstance(value, int):
            return self.field.ground_new(QQ(value))
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def derivative_rule(self, symbol: str, variable: str):
        """Partial derivative of ``symbol`` along ``variable`` (None if truncated)."""
        rule = self._rules.get(self.index[symbol], {}).get(self.var_index[variable])
        if rule is _TRUNCATED:
            return None
        return Expr(self, rule if rule is not None else self.field.zero)


def _free_indices(frac) -> set[int]:
    out: set[int] = set()
    for poly in (frac.numer, frac.denom):
        for monom in poly.itermonoms():
            out.update(i for i, e in enumerate(monom) if e)
    return out


def _derive(ctx: Context, frac, v: int):
    total = ctx.field.zero
    for s in _free_indices(frac):
        rule = ctx._rules.get(s, {}).get(v)
        if rule is None:
            continue
        if rule is _TRUNCATED:
            raise TruncationExceeded(
                f"d/d{ctx.variables[v]} of {ctx.symbols[s]} exceeds the chain truncation order"
            )
        partial = frac.diff(ctx._gens[s])
        if partial:
            total += partial * rule
    return total


class Expr:
    """Element of the exact differential field of a context."""

    __slots__ = ("ctx", "frac")

    def __init__(self, ctx: Context, frac):
        self.ctx = ctx
        self.frac = frac

    def _other(self, other):
        if isinstance(other, Expr):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{other.ctx!r} vs {self.ctx!r}")
            return other.frac
        return self.ctx._coerce(other)

    def __add__(self, other):
        return Expr(self.ctx, self.frac + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Expr(self.ctx, self.frac - self._other(other))

    def __rsub__(self, other):
        return Expr(self.ctx, self._other(other) - self.frac)

    def __mul__(self, other):
        if isinstance(other, Form):
            return NotImplemented
        return Expr(self.ctx, self.frac * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if not o:
            raise ZeroDivisionError("division by the zero expression")
        return Expr(self.ctx, self.frac / o)

    def __rtruediv__(self, other):
        if not self.frac:
            raise ZeroDivisionError("division by the zero expression")
        return Expr(self.ctx, self._other(other) / self.frac)

    def __neg__(self):
        return Expr(self.ctx, -self.frac)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0 and not self.frac:
            raise ZeroDivisionError("negative power of zero")
        if k == 0:
            return self.ctx.one()
        return Expr(self.ctx, self.frac ** k)

    def __eq__(self, other):
        if isinstance(other, (Expr, int, Fraction)):
            return expr_equal(self, other)
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __bool__(self):
        return bool(self.frac)

    def is_zero(self) -> bool:
        return not self.frac

    def key(self):
        """Canonical hashable form: coprime pair with monic denominator."""
        num, den = self.frac.numer, self.frac.denom
        lc = den.LC
        if lc != 1:
            num, den = num.quo_ground(lc), den.quo_ground(lc)
        return (tuple(sorted(num.terms())), tuple(sorted(den.terms())))

    @property
    def numerator(self) -> "Expr":
        return Expr(self.ctx, self.ctx.field.new(self.frac.numer))

    @property
    def denominator(self) -> "Expr":
        return Expr(self.ctx, self.ctx.field.new(self.frac.denom))

    def free_symbols(self) -> set[str]:
        return {self.ctx.symbols[i] for i in _free_indices(self.frac)}

    def is_constant(self) -> bool:
        return not _free_indices(self.frac)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        num = self.frac.numer.LC if self.frac.numer else QQ(0)
        val = num / self.frac.denom.LC
        return Fraction(int(val.numerator), int(val.denominator))

    def derivative(self, variable: str) -> "Expr":
        return expr_derivative(self, variable)

    def subs(self, images: Mapping[str, "Expr"], target: Context | None = None) -> "Expr":
        return substitute(self, images, target)

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value with symbols replaced by mpmath numbers."""
        num = _eval_poly(self.ctx, self.frac.numer, values)
        den = _eval_poly(self.ctx, self.frac.denom, values)
        return num / den

    def __str__(self):
        return str(self.frac.as_expr()).replace("**", "^")

    def __repr__(self):
        return f"Expr({self})"


def _eval_poly(ctx: Context, poly, values):
    total = mpmath.mpf(0)
    cache: dict[tuple[int, int], object] = {}
    for monom, coeff in poly.terms():
        term = mpmath.mpf(int(coeff.numerator)) / int(coeff.denominator)
        for i, e in enumerate(monom):
            if not e:
                continue
            name = ctx.symbols[i]
            if name not in values:
                raise MissingComponent(f"no numeric value for {name}")
            key = (i, e)
            if key not in cache:
                cache[key] = mpmath.mpmathify(values[name]) ** e
            term *= cache[key]
        total += term
    return total


def expr_derivative(e: Expr, variable: str) -> Expr:
    """Exact partial derivative, applying chain and dependent-symbol rules."""
    ctx = e.ctx
    if variable not in ctx.var_index:
        raise UnknownSymbol(f"{variable} is not a variable of {ctx!r}")
    return Expr(ctx, _derive(ctx, e.frac, ctx.var_index[variable]))


def expr_equal(a: Expr, b) -> bool:
    """Decide ``a == b`` by cross-multiplying numerators and denominators."""
    if isinstance(b, Expr):
        if b.ctx != a.ctx:
            raise ContextMismatch(f"{a.ctx!r} vs {b.ctx!r}")
        fb = b.frac
    else:
        fb = a.ctx._coerce(b)
    fa = a.frac
    return fa.numer * fb.denom - fb.numer * fa.denom == 0


def _images_for(frac, source: Context, images: Mapping[str, Expr], target: Context):
    out = {}
    for i in _free_indices(frac):
        name = source.symbols[i]
        if name in images:
            img = images[name]
            if isinstance(img, Expr):
                if img.ctx != target:
                    raise ContextMismatch(f"image of {name} lives in {img.ctx!r}, not {target!r}")
                out[i] = img.frac
            else:
                out[i] = target._coerce(img)
        elif name in source.constants and name in target.constants:
            out[i] = target._gens[target.index[name]]
        else:
            raise MissingComponent(f"no image given for symbol {name}")
    return out


def _compose_frac(frac, source: Context, imgs: dict, target: Context):
    degs: dict[int, int] = {}
    for poly in (frac.numer, frac.denom):
        for monom in poly.itermonoms():
            for i, e in enumerate(monom):
                if e > degs.get(i, 0):
                    degs[i] = e
    ring = target.ring
    num_pows: dict[tuple[int, int], object] = {}
    den_pows: dict[tuple[int, int], object] = {}

    def pw(table, i, k, base):
        key = (i, k)
        if key not in table:
            table[key] = base ** k
        return table[key]

    def image_poly(poly):
        total = ring.zero
        for monom, coeff in poly.terms():
            term = ring.ground_new(coeff)
            for i, big in degs.items():
                k = monom[i]
                p, q = imgs[i].numer, imgs[i].denom
                if k:
                    term = term * pw(num_pows, i, k, p)
                if big - k:
                    term = term * pw(den_pows, i, big - k, q)
            total += term
        return total

    return target.field.new(image_poly(frac.numer), image_poly(frac.denom))


def substitute(e: Expr, images: Mapping[str, Expr], target: Context | None = None) -> Expr:
    """Replace symbols of ``e`` by Exprs of ``target`` (defaults to ``e.ctx``).

    Symbols of ``e`` without an image must be constants shared by both
    contexts, or, when ``target`` is ``e.ctx``, are left untouched.
    """
    target = target or e.ctx
    if target == e.ctx:
        images = dict(images)
        for i in _free_indices(e.frac):
            images.setdefault(e.ctx.symbols[i], Expr(e.ctx, e.ctx._gens[i]))
    imgs = _images_for(e.frac, e.ctx, images, target)
    return Expr(target, _compose_frac(e.frac, e.ctx, imgs, target))


# ---------------------------------------------------------------------------
# differential forms
# ---------------------------------------------------------------------------

def _merge(a: tuple, b: tuple):
    """Sign and sorted key of dx_a ^ dx_b; sign 0 if an index repeats."""
    if set(a) & set(b):
        return 0, ()
    seq = list(a) + list(b)
    inversions = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inversions += 1
    return (-1 if inversions % 2 else 1), tuple(sorted(seq))


class Form:
    """Exterior form with Expr coefficients over the differentials of the variables.

    Keys are strictly increasing tuples of variable indices; zero
    coefficients are never stored.
    """

    __slots__ = ("ctx", "degree", "terms")

    def __init__(self, ctx: Context, degree: int, terms: Mapping | None = None):
        self.ctx = ctx
        self.degree = degree
        clean = {}
        for key, coeff in (terms or {}).items():
            if isinstance(coeff, Expr):
                coeff = ctx._coerce(coeff)
            elif not hasattr(coeff, "numer"):
                coeff = ctx._coerce(coeff)
            if len(key) != degree or any(key[i] >= key[i + 1] for i in range(len(key) - 1)):
                raise ValueError(f"bad form key {key} for degree {degree}")
            if coeff:
                clean[key] = coeff
        self.terms = clean

    @classmethod
    def scalar(cls, value) -> "Form":
        if not isinstance(value, Expr):
            raise TypeError("Form.scalar needs an Expr")
        return cls(value.ctx, 0, {(): value.frac})

    @classmethod
    def zero(cls, ctx: Context, degree: int) -> "Form":
        return cls(ctx, degree, {})

    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{other.ctx!r} vs {self.ctx!r}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        if other.degree != self.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, self.ctx.field.zero) + c
        return Form(self.ctx, self.degree, terms)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.ctx, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Form):
            return NotImplemented
        c = self.ctx._coerce(other)
        return Form(self.ctx, self.degree, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if other.ctx != self.ctx or other.degree != self.degree:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(
            self.terms[k].numer * other.terms[k].denom == other.terms[k].numer * self.terms[k].denom
            for k in self.terms
        )

    def __hash__(self):
        return hash((self.degree, tuple(sorted((k, Expr(self.ctx, c).key()) for k, c in self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, *names: str) -> Expr:
        """Coefficient of ``d names[0] ^ ... ^ d names[-1]`` (sign-adjusted)."""
        idx = [self.ctx.var_index[n] for n in names]
        sign, key = 1, ()
        for i in idx:
            s, key = _merge(key, (i,))
            sign *= s
        if sign == 0:
            return self.ctx.zero()
        return Expr(self.ctx, self.terms.get(key, self.ctx.field.zero) * sign)

    def items(self):
        for key, c in sorted(self.terms.items()):
            yield tuple(self.ctx.variables[i] for i in key), Expr(self.ctx, c)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for names, c in self.items():
            basis = "^".join("d" + n for n in names)
            parts.append(f"({c})" + (f"*{basis}" if basis else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"Form[{self.degree}]({self})"


def wedge(a: Form, b: Form) -> Form:
    a._check(b)
    terms: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            sign, key = _merge(ka, kb)
            if not sign:
                continue
            val = ca * cb if sign > 0 else -(ca * cb)
            terms[key] = terms[key] + val if key in terms else val
    return Form(a.ctx, a.degree + b.degree, terms)


def _relevant_variables(ctx: Context, frac) -> set[int]:
    out: set[int] = set()
    for s in _free_indices(frac):
        out |= ctx._depends.get(s, frozenset())
    return out


def exterior_derivative(w: Form) -> Form:
    ctx = w.ctx
    terms: dict = {}
    for key, c in w.terms.items():
        for v in _relevant_variables(ctx, c):
            if v in key:
                continue
            dc = _derive(ctx, c, v)
            if not dc:
                continue
            sign, new_key = _merge((v,), key)
            val = dc if sign > 0 else -dc
            terms[new_key] = terms[new_key] + val if new_key in terms else val
    return Form(ctx, w.degree + 1, terms)


def differential(e: Expr) -> Form:
    """The 1-form ``d e``."""
    return exterior_derivative(Form.scalar(e))


def pullback(images: Mapping[str, Expr], w: Form, source: Context, dcache: dict | None = None) -> Form:
    """Pull ``w`` back along the map whose target-symbol images are ``images``.

    ``images`` gives, for every symbol of ``w.ctx`` that occurs (other than
    shared constants), an Expr of ``source``.  Coordinate differentials are
    expanded through the exact derivatives of the images; pass a dict as
    ``dcache`` to reuse them across calls with the same map.
    """
    target = w.ctx
    dcache = {} if dcache is None else dcache

    def d_image(i: int) -> Form:
        if i not in dcache:
            name = target.variables[i]
            if name not in images:
                raise MissingComponent(f"no image given for variable {name}")
            img = images[name]
            img = img if isinstance(img, Expr) else source.const(img)
            dcache[i] = differential(img)
        return dcache[i]

    result = Form.zero(source, w.degree)
    for key, c in w.terms.items():
        imgs = _images_for(c, target, images, source)
        coeff = Form(source, 0, {(): _compose_frac(c, target, imgs, source)})
        piece = coeff
        for i in key:
            piece = wedge(piece, d_image(i))
        result = result + piece
    return result


def interior(field: Mapping[str, Expr], w: Form) -> Form:
    """Contraction of ``w`` with the vector field ``sum field[v] d/dv``."""
    ctx = w.ctx
    comps = {ctx.var_index[v]: ctx._coerce(e) for v, e in field.items()}
    terms: dict = {}
    if w.degree == 0:
        return Form.zero(ctx, 0)
    for key, c in w.terms.items():
        for pos, i in enumerate(key):
            if i not in comps:
                continue
            val = c * comps[i]
            if pos % 2:
                val = -val
            rest = key[:pos] + key[pos + 1:]
            terms[rest] = terms[rest] + val if rest in terms else val
    return Form(ctx, w.degree - 1, terms)


def lie_derivative(field: Mapping[str, Expr], w: Form) -> Form:
    """Cartan formula ``L_X = i_X d + d i_X``."""
    out = interior(field, exterior_derivative(w))
    if w.degree > 0:
        out = out + exterior_derivative(interior(field, w))
    return out
