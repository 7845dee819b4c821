import random
from fractions import Fraction

import pytest

from cohdiff import polymap as pm
from cohdiff.objects import Ground, d_space, product, web

F = Fraction

ONE = Ground("one", ("*",), ((F(1),),))
N = Ground("N", ("0", "1", "2"), ((F(1), F(1), F(1)),))


def monomial_map(space, out_atom, power, coeff=F(1)):
    return pm.PolyMap(space, space, {((out_atom,) * power, out_atom): coeff})


def test_identity_eval():
    ident = pm.identity(N)
    x = {"0": F(1, 3), "2": F(1, 5)}
    assert ident.eval(x) == x


def test_square_eval():
    sq = monomial_map(ONE, "*", 2)
    assert sq.eval({"*": F(1, 2)}) == {"*": F(1, 4)}


def test_compose_monomials():
    sq = monomial_map(ONE, "*", 2)
    cube = monomial_map(ONE, "*", 3)
    assert pm.compose(sq, cube) == monomial_map(ONE, "*", 6)


def test_compose_identity_laws():
    f = pm.PolyMap(
        N, ONE, {(("0", "1"), "*"): F(1, 2), (("2",), "*"): F(1, 3)}
    )
    assert pm.compose(f, pm.identity(N)) == f
    assert pm.compose(pm.identity(ONE), f) == f


def test_compose_matches_evaluation_oracle():
    # Exact check of g(f(x)) against the composed matrix at random points.
    rng = random.Random(4)
    f = pm.PolyMap(
        N,
        N,
        {
            (("0",), "0"): F(1, 2),
            (("1", "1"), "0"): F(1, 4),
            (("2",), "1"): F(1, 3),
            ((), "2"): F(1, 8),
        },
    )
    g = pm.PolyMap(
        N, ONE, {(("0", "1"), "*"): F(2, 3), (("2", "2"), "*"): F(1, 5)}
    )
    gf = pm.compose(g, f)
    for _ in range(10):
        x = {
            a: F(rng.randint(0, 3), rng.randint(3, 9))
            for a in web(N)
            if rng.random() < 0.8
        }
        assert gf.eval(x) == g.eval(f.eval(x))


def test_differential_functorial():
    sq = monomial_map(ONE, "*", 2)
    cube = monomial_map(ONE, "*", 3)
    assert pm.differential(pm.identity(N)) == pm.identity(d_space(N))
    lhs = pm.differential(pm.compose(sq, cube))
    rhs = pm.compose(pm.differential(sq), pm.differential(cube))
    assert lhs == rhs


def test_differential_of_square():
    # f(x) = x^2 has derivative part 2 x u.
    sq = monomial_map(ONE, "*", 2)
    dsq = pm.differential(sq)
    key = (pm.mono([("0", "*"), ("1", "*")]), ("1", "*"))
    assert dsq.entries[key] == F(2)


def test_differential_of_truncated_exponential():
    # f(x) = sum_{n<=4} c_n x^n gives derivative sum n c_n x^(n-1) u.
    coeffs = [F(1), F(1), F(1, 2), F(1, 6), F(1, 24)]
    f = pm.PolyMap(
        ONE, ONE, {(("*",) * n, "*"): c for n, c in enumerate(coeffs)}
    )
    df = pm.differential(f)
    for n, c in enumerate(coeffs):
        if n == 0:
            continue
        key = (
            pm.mono([("0", "*")] * (n - 1) + [("1", "*")]),
            ("1", "*"),
        )
        assert df.entries[key] == n * c


def test_degree_cap():
    big = monomial_map(ONE, "*", 5)
    with pytest.raises(pm.DegreeCapError):
        pm.compose(big, big, cap=16)


def test_shape_errors():
    f = pm.identity(N)
    g = pm.identity(ONE)
    with pytest.raises(pm.ShapeError):
        pm.compose(g, f)
    with pytest.raises(pm.ShapeError):
        pm.add(f, g)


def test_projections_and_sigma():
    sigma = pm.sigma(ONE)
    assert sigma.entries == {
        ((("0", "*"),), "*"): F(1),
        ((("1", "*"),), "*"): F(1),
    }
    for i in (0, 1):
        p = pm.proj(i, ONE)
        z = {("0", "*"): F(1, 3), ("1", "*"): F(1, 5)}
        assert p.eval(z) == {"*": z[(str(i), "*")]}


def test_witness_roundtrip():
    f0 = monomial_map(ONE, "*", 1, F(1, 3))
    f1 = monomial_map(ONE, "*", 2, F(1, 5))
    w = pm.pair_witness_matrix(f0, f1)
    back0, back1 = pm.witness_components(w)
    assert back0 == f0 and back1 == f1
    # Joint monicity on the representation: equal components force equality.
    w2 = pm.pair_witness_matrix(f0, f1)
    assert w == w2


def test_with_map_and_prod_pair():
    f = monomial_map(ONE, "*", 1, F(1, 2))
    g = monomial_map(ONE, "*", 2, F(1, 3))
    both = pm.with_map(f, g)
    x = {("L", "*"): F(1, 2), ("R", "*"): F(1, 2)}
    assert both.eval(x) == {("L", "*"): F(1, 4), ("R", "*"): F(1, 12)}
    paired = pm.prod_pair(f, g)
    y = {"*": F(1, 2)}
    assert paired.eval(y) == {("L", "*"): F(1, 4), ("R", "*"): F(1, 12)}


def test_d_tags_push_under_product_tags():
    # D(X & Y) and DX & DY are the same space with the same web.
    both = product(ONE, N)
    assert d_space(both) == product(d_space(ONE), d_space(N))
    assert web(d_space(both)) == web(product(d_space(ONE), d_space(N)))


def test_zero_absorbs_composition_on_the_left():
    f = pm.PolyMap(N, ONE, {(("0",), "*"): F(1, 2)})
    assert pm.compose(pm.zero(ONE, N), f) == pm.zero(N, N)
