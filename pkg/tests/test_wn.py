import itertools
import random

import pytest
import sympy

from leafclass.errors import IndexOutOfRange, ResourceBudgetExceeded
from leafclass.wn import (WCochain, chern_cocycle, cohomology_ranks, differential,
                          enumerate_generators, gen, interior_linear, is_coboundary, is_cocycle,
                          is_relative, lie_linear, monomial_basis, relativity_defects, wedge)


# Oracle: cochains evaluated on explicit polynomial vector fields.
def _field(n, rng, deg=4):
    xs = sympy.symbols(f"x1:{n + 1}")
    comps = []
    for _ in range(n):
        e = 0
        for mono in itertools.product(range(deg + 1), repeat=n):
            if sum(mono) <= deg:
                e += rng.randint(-3, 3) * sympy.prod([x ** m for x, m in zip(xs, mono)])
        comps.append(e)
    return xs, comps


def _eval1(g, xs, Y):
    e = Y[g.upper - 1]
    for j in g.lower:
        e = sympy.diff(e, xs[j - 1])
    return e.subs({x: 0 for x in xs})


def _eval(c, xs, fields):
    total = 0
    for key, v in c.terms.items():
        for perm in itertools.permutations(range(len(key))):
            sign = sympy.combinatorics.Permutation(list(perm)).signature()
            total += v * sign * sympy.prod([_eval1(g, xs, fields[p]) for g, p in zip(key, perm)])
    return total


def _bracket(xs, X, Y):
    n = len(xs)
    return [sum(X[b] * sympy.diff(Y[a], xs[b]) - Y[b] * sympy.diff(X[a], xs[b]) for b in range(n))
            for a in range(n)]


@pytest.mark.parametrize("n", [1, 2])
def test_differential_is_chevalley_eilenberg(n):
    rng = random.Random(n)
    for g in enumerate_generators(n, 2):
        xs, X = _field(n, rng)
        _, Y = _field(n, rng)
        lhs = _eval(differential(WCochain.generator(g), n), xs, [X, Y])
        assert lhs == -_eval1(g, xs, _bracket(xs, X, Y)), str(g)


@pytest.mark.parametrize("n", [1, 2])
def test_lie_action_is_coadjoint(n):
    rng = random.Random(10 + n)
    xs = sympy.symbols(f"x1:{n + 1}")
    for g in enumerate_generators(n, 2):
        for i, j in itertools.product(range(1, n + 1), repeat=2):
            X = [xs[j - 1] if a == i - 1 else 0 for a in range(n)]
            _, Y = _field(n, rng)
            lhs = _eval(lie_linear(WCochain.generator(g), i, j), xs, [Y])
            assert lhs == -_eval1(g, xs, _bracket(xs, X, Y))


@pytest.mark.parametrize("n", [1, 2])
def test_cartan_formula(n):
    gens = [WCochain.generator(g) for g in enumerate_generators(n, 1)]
    samples = gens + [wedge(a, b) for a, b in itertools.combinations(gens[:6], 2)]
    for c in samples:
        for i, j in itertools.product(range(1, n + 1), repeat=2):
            cartan = interior_linear(differential(c, n), i, j) + differential(interior_linear(c, i, j), n)
            assert lie_linear(c, i, j) == cartan


@pytest.mark.parametrize("n", [1, 2])
def test_d_squared_on_products(n):
    gens = [WCochain.generator(g) for g in enumerate_generators(n, 2)]
    for a, b in itertools.combinations(gens[:8], 2):
        c = wedge(a, b)
        assert differential(differential(c, n), n).is_zero()


def test_generator_shape():
    g = gen(1, 2, 1)
    assert g.lower == (1, 2) and g.weight == 1 and str(g) == "c^1_12"
    assert len(enumerate_generators(1, 3)) == 5
    assert wedge(WCochain.generator(g), WCochain.generator(g)).is_zero()


def test_chern_cocycles():
    psi = chern_cocycle(1, 1)
    assert psi == wedge(WCochain.generator(gen(1, 1, 1)), WCochain.generator(gen(1)))
    for n, p in ((1, 1), (2, 1), (2, 2)):
        c = chern_cocycle(p, n)
        assert c.degree == 2 * p and is_cocycle(c, n) and is_relative(c, n)
    with pytest.raises(IndexOutOfRange):
        chern_cocycle(3, 2)
    with pytest.raises(IndexOutOfRange):
        chern_cocycle(0, 1)


def test_relativity_of_linear_generator():
    c11 = WCochain.generator(gen(1, 1))
    assert not is_relative(c11, 1)
    assert {d["check"] for d in relativity_defects(c11, 1)} == {"horizontal"}
    c1 = WCochain.generator(gen(1))
    assert [d["check"] for d in relativity_defects(c1, 1)] == ["invariant"]


def test_weight_zero_cohomology_of_w1():
    table = cohomology_ranks(1, 0, 5)
    assert [r.betti for r in table.rows] == [1, 0, 0, 1, 0, 0]
    assert table.ranks_agree and table.euler_consistent


def test_relative_cohomology_and_psi1():
    table = cohomology_ranks(1, 0, 4, relative=True)
    assert [r.betti for r in table.rows] == [1, 0, 1, 0, 0]
    psi = chern_cocycle(1, 1)
    assert not is_coboundary(psi, 1, relative=True)
    assert is_coboundary(psi, 1)


def test_w2_weight_zero_betti():
    table = cohomology_ranks(2, 0, 4)
    assert table.rows[0].betti == 1
    assert table.ranks_agree and table.euler_consistent


def test_budget():
    with pytest.raises(ResourceBudgetExceeded):
        monomial_basis(2, 2, 4, budget=10)
