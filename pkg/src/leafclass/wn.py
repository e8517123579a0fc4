"""Cochain complex of formal vector fields C*(W_n).

C*(W_n) is the free graded-commutative algebra on degree-1 generators
``c^i_{j_1...j_r}`` (the r-th partial derivative of the i-th component at
the origin).  Lower indices are symmetric, so generators store them sorted.
The differential on generators sums over subsets of *positions* of the
lower multi-index, which is where multiplicities of repeated indices come
from.  Every generator has weight ``r - 1`` and the differential preserves
weight, so each weight piece is a finite complex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from . import linalg
from .errors import IndexOutOfRange, ResourceBudgetExceeded


@dataclass(frozen=True, order=True)
class WGenerator:
    """``c^upper_{lower}``.  Ordering is by weight, then upper, then lower."""

    weight: int
    upper: int
    lower: tuple

    def __str__(self):
        sub = "".join(str(j) for j in self.lower)
        return f"c^{self.upper}" + (f"_{sub}" if sub else "")


def gen(upper: int, *lower: int) -> WGenerator:
    return WGenerator(len(lower) - 1, upper, tuple(sorted(lower)))


def _sign_sort(seq):
    """Sort distinct items; return (sign, tuple), sign 0 on a repeat."""
    if len(set(seq)) != len(seq):
        return 0, ()
    items = list(seq)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(items)


class WCochain:
    """Sparse element of C*(W_n): map from sorted generator tuples to rationals."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms=None):
        self.degree = degree
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def scalar(cls, value=1) -> "WCochain":
        return cls(0, {(): value})

    @classmethod
    def generator(cls, g: WGenerator) -> "WCochain":
        return cls(1, {(g,): 1})

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if other.degree != self.degree and self.terms and other.terms:
            raise ValueError("cannot add cochains of different degree")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return WCochain(self.degree if self.terms else other.degree, terms)

    __radd__ = __add__

    def __neg__(self):
        return WCochain(self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return WCochain(self.degree, {k: v * scalar for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, WCochain):
            return NotImplemented
        return self.terms == other.terms and (self.degree == other.degree or not self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def weights(self) -> set[int]:
        return {sum(g.weight for g in key) for key in self.terms}

    def generators(self) -> set[WGenerator]:
        return {g for key in self.terms for g in key}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, v in sorted(self.terms.items()):
            mono = "^".join(str(g) for g in key) or "1"
            parts.append(f"{v}*{mono}" if v != 1 else mono)
        return " + ".join(parts)

    def __repr__(self):
        return f"WCochain[{self.degree}]({self})"


def wedge(a: WCochain, b: WCochain) -> WCochain:
    terms: dict = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            sign, key = _sign_sort(ka + kb)
            if sign:
                terms[key] = terms.get(key, 0) + sign * va * vb
    return WCochain(a.degree + b.degree, terms)


def wedge_all(*factors: WCochain) -> WCochain:
    out = WCochain.scalar(1)
    for f in factors:
        out = wedge(out, f)
    return out


def enumerate_generators(n: int, max_weight: int) -> list[WGenerator]:
    """All ``c^i_J`` with ``|J| - 1 <= max_weight``, in the canonical order."""
    out = []
    for r in range(0, max_weight + 2):
        for i in range(1, n + 1):
            for lower in _multisets(n, r):
                out.append(WGenerator(r - 1, i, lower))
    return sorted(out)


def _multisets(n: int, r: int):
    if r == 0:
        return [()]
    out = []

    def rec(start, left, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        for j in range(start, n + 1):
            rec(j, left - 1, acc + [j])

    rec(1, r, [])
    return out


@lru_cache(maxsize=None)
def _d_generator(g: WGenerator, n: int) -> tuple:
    lower = g.lower
    r = len(lower)
    acc: dict = {}
    for k in range(r + 1):
        for chosen in combinations(range(r), k):
            picked = tuple(lower[s] for s in chosen)
            rest = tuple(lower[s] for s in range(r) if s not in chosen)
            for l in range(1, n + 1):
                a = gen(g.upper, l, *rest)
                b = gen(l, *picked)
                sign, key = _sign_sort((a, b))
                if sign:
                    acc[key] = acc.get(key, 0) + sign
    return tuple((k, v) for k, v in sorted(acc.items()) if v)


def generator_differential(g: WGenerator, n: int) -> WCochain:
    return WCochain(2, dict(_d_generator(g, n)))


def differential(c: WCochain, n: int) -> WCochain:
    """Antiderivation extending the generator formula by the graded Leibniz rule."""
    terms: dict = {}
    for key, v in c.terms.items():
        for pos, g in enumerate(key):
            sign0 = -v if pos % 2 else v
            for dkey, dv in _d_generator(g, n):
                sign, new = _sign_sort(key[:pos] + dkey + key[pos + 1:])
                if sign:
                    terms[new] = terms.get(new, 0) + sign * sign0 * dv
    return WCochain(c.degree + 1, terms)


def psi_matrix(n: int) -> list[list[WCochain]]:
    """``Psi^i_j = sum_k c^i_{jk} ^ c^k`` (rows i, columns j, 1-based shifted to 0)."""
    return [
        [
            sum(
                (wedge(WCochain.generator(gen(i, j, k)), WCochain.generator(gen(k))) for k in range(1, n + 1)),
                WCochain(2),
            )
            for j in range(1, n + 1)
        ]
        for i in range(1, n + 1)
    ]


def gamma_matrix(n: int) -> list[list[WCochain]]:
    """``gamma = (c^i_j)``."""
    return [[WCochain.generator(gen(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]


def chern_cocycle(p: int, n: int) -> WCochain:
    """Formal Chern cocycle ``Psi_p = tr(Psi ^ ... ^ Psi)`` (p factors)."""
    if p < 1 or p > n:
        raise IndexOutOfRange(f"Psi_p is defined for 1 <= p <= n, got p={p}, n={n}")
    psi = psi_matrix(n)
    total = WCochain(2 * p)
    for idx in product(range(n), repeat=p):
        factors = [psi[idx[a]][idx[(a + 1) % p]] for a in range(p)]
        total = total + wedge_all(*factors)
    return total


# ---------------------------------------------------------------------------
# gl_n action
# ---------------------------------------------------------------------------

def interior_linear(c: WCochain, i: int, j: int) -> WCochain:
    """Contraction with the linear field ``x^j d/dx^i``; only ``c^i_j`` pairs to 1."""
    target = gen(i, j)
    terms: dict = {}
    for key, v in c.terms.items():
        for pos, g in enumerate(key):
            if g == target:
                new = key[:pos] + key[pos + 1:]
                terms[new] = terms.get(new, 0) + (-v if pos % 2 else v)
    return WCochain(max(c.degree - 1, 0), terms)


@lru_cache(maxsize=None)
def _lie_generator(g: WGenerator, i: int, j: int) -> tuple:
    # L c^a_B = -sum_{p: B_p = j} c^a_{i, B without p} + delta^a_i c^j_B
    acc: dict = {}
    for p, b in enumerate(g.lower):
        if b == j:
            rest = g.lower[:p] + g.lower[p + 1:]
            h = gen(g.upper, i, *rest)
            acc[h] = acc.get(h, 0) - 1
    if g.upper == i:
        h = WGenerator(g.weight, j, g.lower)
        acc[h] = acc.get(h, 0) + 1
    return tuple((h, v) for h, v in sorted(acc.items()) if v)


def lie_linear(c: WCochain, i: int, j: int) -> WCochain:
    """Coadjoint (Lie derivative) action of ``x^j d/dx^i``, a degree-0 derivation."""
    terms: dict = {}
    for key, v in c.terms.items():
        for pos, g in enumerate(key):
            for h, hv in _lie_generator(g, i, j):
                sign, new = _sign_sort(key[:pos] + (h,) + key[pos + 1:])
                if sign:
                    terms[new] = terms.get(new, 0) + sign * v * hv
    return WCochain(c.degree, terms)


def relativity_defects(c: WCochain, n: int) -> list[dict]:
    """Every (i, j, check) where horizontality or invariance fails."""
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if not interior_linear(c, i, j).is_zero():
                out.append({"field": f"x^{j} d/dx^{i}", "check": "horizontal"})
            if not lie_linear(c, i, j).is_zero():
                out.append({"field": f"x^{j} d/dx^{i}", "check": "invariant"})
    return out


def is_relative(c: WCochain, n: int) -> bool:
    """True iff ``c`` lies in the relative subcomplex C*(W_n, GL(n, R))."""
    return not relativity_defects(c, n)


# ---------------------------------------------------------------------------
# weight-graded truncations and their cohomology
# ---------------------------------------------------------------------------

def monomial_basis(n: int, weight: int, degree: int, budget: int = 50_000) -> list[tuple]:
    """Sorted generator tuples of the given degree and total weight."""
    if degree == 0:
        return [()] if weight == 0 else []
    gens = enumerate_generators(n, weight + n)
    out: list[tuple] = []

    def rec(start, left, partial, acc):
        if left == 0:
            if partial == weight:
                out.append(tuple(acc))
                if len(out) > budget:
                    raise ResourceBudgetExceeded(f"more than {budget} monomials")
            return
        for idx in range(start, len(gens)):
            g = gens[idx]
            # remaining generators have weight >= g.weight
            if partial + left * g.weight > weight:
                break
            rec(idx + 1, left - 1, partial + g.weight, acc + [g])

    rec(0, degree, 0, [])
    return out


def _matrix(images: list[WCochain], basis: list[tuple]) -> list[list[Fraction]]:
    """Columns are coordinate vectors of ``images`` in ``basis``."""
    pos = {k: i for i, k in enumerate(basis)}
    rows = [[Fraction(0)] * len(images) for _ in basis]
    for col, img in enumerate(images):
        for k, v in img.terms.items():
            rows[pos[k]][col] = v
    return rows


@dataclass
class CohomologyRow:
    degree: int
    dim: int
    rank: int
    betti: int
    modular_ranks: dict = field(default_factory=dict)


@dataclass
class CohomologyTable:
    n: int
    weight: int
    relative: bool
    rows: list
    euler_dims: int
    euler_betti: int
    top_rank: int

    @property
    def ranks_agree(self) -> bool:
        return all(all(v == r.rank for v in r.modular_ranks.values()) for r in self.rows)

    @property
    def euler_consistent(self) -> bool:
        # sum (-1)^q b^q = sum (-1)^q dim C^q - (-1)^Q rank d^Q over the window 0..Q
        q_top = self.rows[-1].degree
        return self.euler_betti == self.euler_dims - (-1) ** q_top * self.top_rank


class WeightPiece:
    """Degree-q pieces of one weight of C*(W_n) or of the relative subcomplex."""

    def __init__(self, n: int, weight: int, relative: bool = False, budget: int = 50_000):
        self.n, self.weight, self.relative, self.budget = n, weight, relative, budget
        self._basis: dict[int, list] = {}
        self._sub: dict[int, list] = {}

    def basis(self, q: int) -> list[tuple]:
        if q not in self._basis:
            self._basis[q] = monomial_basis(self.n, self.weight, q, self.budget) if q >= 0 else []
        return self._basis[q]

    def subspace(self, q: int) -> list[list[Fraction]]:
        """Coordinate vectors (in :meth:`basis`) spanning the piece."""
        if q in self._sub:
            return self._sub[q]
        basis = self.basis(q)
        if not self.relative:
            vecs = [[Fraction(int(a == b)) for a in range(len(basis))] for b in range(len(basis))]
        elif not basis:
            vecs = []
        else:
            constraints: list[list[Fraction]] = []
            for i in range(1, self.n + 1):
                for j in range(1, self.n + 1):
                    mono = [WCochain(q, {k: 1}) for k in basis]
                    contracted = [interior_linear(m, i, j) for m in mono]
                    constraints += _matrix(contracted, self.basis(q - 1)) if q >= 1 else []
                    constraints += _matrix([lie_linear(m, i, j) for m in mono], basis)
            vecs = linalg.nullspace(constraints, len(basis))
        self._sub[q] = vecs
        return vecs

    def cochain(self, q: int, vec) -> WCochain:
        return WCochain(q, {k: v for k, v in zip(self.basis(q), vec) if v})

    def coordinates(self, c: WCochain, q: int) -> list[Fraction]:
        pos = {k: i for i, k in enumerate(self.basis(q))}
        vec = [Fraction(0)] * len(pos)
        for k, v in c.terms.items():
            if k not in pos:
                raise ValueError(f"monomial {k} is outside weight {self.weight} degree {q}")
            vec[pos[k]] = v
        return vec

    def d_matrix(self, q: int) -> list[list[Fraction]]:
        """Matrix of d restricted to the piece, in ambient coordinates of degree q+1."""
        images = [differential(self.cochain(q, v), self.n) for v in self.subspace(q)]
        return _matrix(images, self.basis(q + 1))


def cohomology_ranks(
    n: int,
    weight: int,
    max_degree: int,
    relative: bool = False,
    budget: int = 50_000,
    primes=linalg.PRIMES,
) -> CohomologyTable:
    """Exact dims, ranks and Betti numbers of one weight piece in degrees 0..max_degree."""
    piece = WeightPiece(n, weight, relative, budget)
    ranks = {-1: 0}
    mod = {-1: {p: 0 for p in primes}}
    for q in range(0, max_degree + 1):
        m = piece.d_matrix(q)
        ranks[q] = linalg.rank_exact(m) if m and m[0] else 0
        mod[q] = {p: (linalg.rank_mod(m, p) if m and m[0] else 0) for p in primes}
    rows = []
    for q in range(0, max_degree + 1):
        dim = len(piece.subspace(q))
        rows.append(CohomologyRow(q, dim, ranks[q], dim - ranks[q] - ranks[q - 1], mod[q]))
    euler_dims = sum((-1) ** r.degree * r.dim for r in rows)
    euler_betti = sum((-1) ** r.degree * r.betti for r in rows)
    return CohomologyTable(n, weight, relative, rows, euler_dims, euler_betti, ranks[max_degree])


def is_cocycle(c: WCochain, n: int) -> bool:
    return differential(c, n).is_zero()


def is_coboundary(c: WCochain, n: int, relative: bool = False) -> bool:
    """Whether a homogeneous cochain is ``d`` of a (relative) cochain of its weight."""
    if c.is_zero():
        return True
    weights = c.weights()
    if len(weights) != 1:
        raise ValueError("is_coboundary needs a cochain of a single weight")
    piece = WeightPiece(n, weights.pop(), relative)
    q = c.degree
    if q == 0:
        return False
    m = piece.d_matrix(q - 1)
    target = piece.coordinates(c, q)
    if not m or not m[0]:
        return False
    augmented = [row + [t] for row, t in zip(m, target)]
    return linalg.rank_exact(augmented) == linalg.rank_exact(m)
