"""Truncated Taylor-series arithmetic over mpmath floats.

Used to get exact-to-working-precision derivative towers of explicit
functions (no finite differences).  A series stores Taylor coefficients
``c_k`` so that the k-th derivative is ``k! c_k``.
"""
from __future__ import annotations

from math import factorial

import mpmath

from . import parsing
from .errors import ParseError, PrecisionInsufficient


class Series:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @classmethod
    def constant(cls, value, order: int) -> "Series":
        return cls([mpmath.mpf(value)] + [mpmath.mpf(0)] * order)

    @classmethod
    def variable(cls, point, order: int) -> "Series":
        c = [mpmath.mpf(point)] + [mpmath.mpf(0)] * order
        if order >= 1:
            c[1] = mpmath.mpf(1)
        return cls(c)

    def derivatives(self) -> list:
        return [self.c[k] * factorial(k) for k in range(len(self.c))]

    def differentiate(self) -> "Series":
        """Series of the derivative, one order shorter."""
        return Series([k * self.c[k] for k in range(1, len(self.c))])

    def _lift(self, other):
        if isinstance(other, Series):
            return other
        return Series.constant(other, self.order)

    def __add__(self, other):
        o = self._lift(other)
        return Series([a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return Series([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        n = len(self.c)
        return Series([mpmath.fsum(self.c[i] * o.c[k - i] for i in range(k + 1)) for k in range(n)])

    __rmul__ = __mul__

    def reciprocal(self) -> "Series":
        a = self.c
        if a[0] == 0:
            raise PrecisionInsufficient("division by a series with zero constant term")
        out = [1 / a[0]]
        for k in range(1, len(a)):
            out.append(-mpmath.fsum(a[i] * out[k - i] for i in range(1, k + 1)) / a[0])
        return Series(out)

    def __truediv__(self, other):
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, k: int):
        if k < 0:
            return (self ** (-k)).reciprocal()
        out = Series.constant(1, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def exp(self) -> "Series":
        a = self.c
        out = [mpmath.exp(a[0])]
        for k in range(1, len(a)):
            out.append(mpmath.fsum(j * a[j] * out[k - j] for j in range(1, k + 1)) / k)
        return Series(out)

    def log(self) -> "Series":
        a = self.c
        if a[0] <= 0:
            raise ValueError("log of a series with non-positive constant term")
        out = [mpmath.log(a[0])]
        for k in range(1, len(a)):
            s = mpmath.fsum(j * out[j] * a[k - j] for j in range(1, k))
            out.append((a[k] - s / k) / a[0])
        return Series(out)

    def sincos(self) -> tuple["Series", "Series"]:
        a = self.c
        s = [mpmath.sin(a[0])]
        c = [mpmath.cos(a[0])]
        for k in range(1, len(a)):
            s.append(mpmath.fsum(j * a[j] * c[k - j] for j in range(1, k + 1)) / k)
            c.append(-mpmath.fsum(j * a[j] * s[k - j] for j in range(1, k + 1)) / k)
        return Series(s), Series(c)

    def sqrt(self) -> "Series":
        return (self.log() * mpmath.mpf(0.5)).exp()


_CONSTANTS = {"e": mpmath.e, "pi": mpmath.pi}


def evaluate(tree, variable: str, point, order: int) -> Series:
    """Taylor series of an expression tree in ``variable`` about ``point``."""

    def ev(node):
        if isinstance(node, parsing.Num):
            return Series.constant(mpmath.mpf(node.value.numerator) / node.value.denominator, order)
        if isinstance(node, parsing.Name):
            if node.name == variable:
                return Series.variable(point, order)
            if node.name in _CONSTANTS:
                return Series.constant(+_CONSTANTS[node.name], order)
            raise ParseError(f"unknown name {node.name!r} in numeric expression")
        if isinstance(node, parsing.Neg):
            return -ev(node.operand)
        if isinstance(node, parsing.BinOp):
            if node.op == "^":
                try:
                    k = parsing.integer_exponent(node.right)
                except ParseError:
                    return (ev(node.right) * ev(node.left).log()).exp()
                return ev(node.left) ** k
            a, b = ev(node.left), ev(node.right)
            return {"+": a.__add__, "-": a.__sub__, "*": a.__mul__, "/": a.__truediv__}[node.op](b)
        if isinstance(node, parsing.Call):
            if len(node.args) != 1:
                raise ParseError(f"{node.func} takes one argument")
            x = ev(node.args[0])
            if node.func == "exp":
                return x.exp()
            if node.func == "log":
                return x.log()
            if node.func == "sqrt":
                return x.sqrt()
            if node.func == "sin":
                return x.sincos()[0]
            if node.func == "cos":
                return x.sincos()[1]
            raise ParseError(f"unknown function {node.func!r}")
        raise ParseError(f"cannot evaluate {node!r}")

    return ev(tree)
