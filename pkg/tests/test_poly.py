import random
from fractions import Fraction

import pytest

from cohdiff import polymap as pm
from cohdiff.objects import product, web
from cohdiff.poly import (
    PolyInstance,
    d_combinator,
    directional_oracle,
    is_additive,
    is_linear,
    parse_poly,
    poly_ground,
    poly_map,
)

F = Fraction


@pytest.fixture
def inst():
    return PolyInstance()


X1 = poly_ground("X", 1)
X2 = poly_ground("Y", 2)


def lit(dom, cod, *literals):
    return poly_map(dom, cod, list(literals))


def test_parse_poly_literal():
    p = parse_poly("2*x0^2*x1 + 1/3*x2 - 1", poly_ground("Z", 3))
    assert p[pm.mono(["x0", "x0", "x1"])] == F(2)
    assert p[pm.mono(["x2"])] == F(1, 3)
    assert p[()] == F(-1)


def test_d_combinator_of_square(inst):
    sq = lit(X1, X1, "x0^2")
    d = d_combinator(inst, sq)
    # d f (x, u) = 2 x u: base point in the left factor.
    key = (pm.mono([("L", "x0"), ("R", "x0")]), "x0")
    assert d.entries == {key: F(2)}


def test_d_combinator_of_projection_is_axiom_one(inst):
    pr0 = inst.prod_proj(0, X1, X2)
    lhs = d_combinator(inst, pr0)
    dom = product(X1, X2)
    rhs = inst.compose(pr0, inst.prod_proj(1, dom, dom))
    assert lhs == rhs
    pr1 = inst.prod_proj(1, X1, X2)
    assert d_combinator(inst, pr1) == inst.compose(
        pr1, inst.prod_proj(1, dom, dom)
    )


def test_d_combinator_of_constant_is_zero(inst):
    const = lit(X1, X1, "3/4")
    assert d_combinator(inst, const) == pm.zero(product(X1, X1), X1)


def random_poly_map(rng, dom, cod, max_degree=3):
    entries = {}
    for _ in range(rng.randint(1, 5)):
        degree = rng.randint(0, max_degree)
        m = pm.mono([rng.choice(web(dom)) for _ in range(degree)])
        b = rng.choice(web(cod))
        c = F(rng.randint(-4, 4), rng.randint(1, 5))
        if c:
            entries[(m, b)] = entries.get((m, b), F(0)) + c
    return pm.PolyMap(dom, cod, entries)


def test_six_cdc_axioms_symbolically(inst):
    rng = random.Random(9)
    spaces = [X1, X2]
    for _ in range(25):
        dom = rng.choice(spaces)
        mid = rng.choice(spaces)
        cod = rng.choice(spaces)
        f = random_poly_map(rng, dom, mid, max_degree=2)
        g = random_poly_map(rng, mid, cod, max_degree=2)

        dd = product(dom, dom)
        pr0 = inst.prod_proj(0, dom, dom)
        pr1 = inst.prod_proj(1, dom, dom)

        # (2) d is additive in the map.
        f2 = random_poly_map(rng, dom, mid, max_degree=2)
        assert d_combinator(inst, pm.add(f, f2)) == pm.add(
            d_combinator(inst, f), d_combinator(inst, f2)
        )
        assert d_combinator(inst, pm.zero(dom, mid)) == pm.zero(dd, mid)

        # (3) d id = pr1 and the chain rule.
        assert d_combinator(inst, inst.identity(dom)) == pr1
        chain = d_combinator(inst, inst.compose(g, f))
        expected = inst.compose(
            d_combinator(inst, g),
            inst.prod_pair(inst.compose(f, pr0), d_combinator(inst, f)),
        )
        assert chain == expected

        # (4) additivity in the direction argument, symbolically: compose
        # with <<x, 0>> and <<x, u + v>> built from projections off dom^3.
        triple = product(product(dom, dom), dom)
        x = inst.compose(pr0, inst.prod_proj(0, product(dom, dom), dom))
        u = inst.compose(pr1, inst.prod_proj(0, product(dom, dom), dom))
        v = inst.prod_proj(1, product(dom, dom), dom)
        df = d_combinator(inst, f)
        zero_dir = inst.compose(df, inst.prod_pair(x, pm.zero(triple, dom)))
        assert zero_dir == pm.zero(triple, mid)
        both = inst.compose(df, inst.prod_pair(x, pm.add(u, v)))
        split = pm.add(
            inst.compose(df, inst.prod_pair(x, u)),
            inst.compose(df, inst.prod_pair(x, v)),
        )
        assert both == split

        # (5) and (6) via generic projections off (dom & dom) & (dom & dom).
        quad = product(dd, dd)
        q_outer = [inst.prod_proj(i, dd, dd) for i in (0, 1)]
        coords = [
            inst.compose(inst.prod_proj(i, dom, dom), q_outer[j])
            for j in (0, 1)
            for i in (0, 1)
        ]
        xq, uq, vq, wq = coords
        ddf = d_combinator(inst, df)
        lin = inst.compose(
            ddf,
            inst.prod_pair(
                inst.prod_pair(xq, pm.zero(quad, dom)),
                inst.prod_pair(pm.zero(quad, dom), uq),
            ),
        )
        assert lin == inst.compose(df, inst.prod_pair(xq, uq))
        sym_l = inst.compose(
            ddf, inst.prod_pair(inst.prod_pair(xq, uq), inst.prod_pair(vq, wq))
        )
        sym_r = inst.compose(
            ddf, inst.prod_pair(inst.prod_pair(xq, vq), inst.prod_pair(uq, wq))
        )
        assert sym_l == sym_r


def test_totality_of_summability(inst):
    rng = random.Random(20)
    for _ in range(100):
        f = random_poly_map(rng, X2, X1)
        g = random_poly_map(rng, X2, X1)
        w = inst.pair_witness(f, g)
        assert w is not None
        assert inst.compose(inst.sigma(X1), w) == pm.add(f, g)


def test_additive_versus_linear_gap(inst):
    sq = lit(X1, X1, "x0^2")
    affine = lit(X1, X1, "x0 + 1")
    triple = lit(X1, X1, "3*x0")
    assert not is_additive(inst, sq)
    assert not is_linear(inst, sq)
    assert not is_additive(inst, affine)  # fails h . 0 = 0
    assert not is_linear(inst, affine)
    assert is_additive(inst, triple)
    assert is_linear(inst, triple)


def test_directional_oracle_matches_d_combinator(inst):
    # Independent divided-difference oracle: coefficient of eps in f(x+eps u).
    rng = random.Random(31)
    for _ in range(30):
        f = random_poly_map(rng, X2, X2, max_degree=3)
        d = d_combinator(inst, f)
        x = {a: F(rng.randint(-3, 3), rng.randint(1, 4)) for a in web(X2)}
        u = {a: F(rng.randint(-3, 3), rng.randint(1, 4)) for a in web(X2)}
        point = {("L", a): c for a, c in x.items()}
        point.update({("R", a): c for a, c in u.items()})
        assert d.eval(point) == directional_oracle(f, x, u)


def test_d_combinator_bridges_to_differential(inst):
    # Df = <f . pi0, d f> up to the D-tag/product-tag relabelling.
    rng = random.Random(7)
    f = random_poly_map(rng, X2, X1)
    df = inst.d_morphism(f)
    first, second = pm.witness_components(df)
    assert first == inst.compose(f, inst.proj(0, X2))
    d = d_combinator(inst, f)
    retagged = {
        (pm.mono([("L" if a[0] == "0" else "R", a[1]) for a in m]), b): c
        for (m, b), c in second.entries.items()
    }
    assert retagged == d.entries
