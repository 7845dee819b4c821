"""Abstract contract of a cartesian coherent differential category.

An Instance supplies composition, the D functor on objects and maps, the two
projections pi_0, pi_1 : DX -> X, their sum sigma, the cartesian structure,
and a partial pairing pair_witness.  Everything else (injections, the monad
sum theta, the lift l, the swap c, strengths, partial derivatives, n-ary
sums) is derived here, and check_axioms verifies the axioms and the derived
theorems on any instance by exact morphism equality.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import polymap as pm
from .objects import Ground, Prod, Space, d_space, prodn, product, space_str
from .polymap import PolyMap

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class StructureError(Exception):
    """A summability required by the structure itself failed to certify."""


class Instance:
    """A concrete category with candidate coherent differential structure."""

    name = "abstract"

    def __init__(self, degree_cap: int = pm.DEGREE_CAP):
        self.degree_cap = degree_cap
        self._derived: dict = {}

    # -- object structure ------------------------------------------------

    def terminal(self) -> Space:
        return Ground("top", (), ())

    def product(self, x: Space, y: Space) -> Space:
        return product(x, y)

    def d_object(self, x: Space) -> Space:
        return d_space(x)

    # -- morphism structure ----------------------------------------------

    def identity(self, x: Space) -> PolyMap:
        return pm.identity(x)

    def zero(self, dom: Space, cod: Space) -> PolyMap:
        return pm.zero(dom, cod)

    def compose(self, g: PolyMap, f: PolyMap) -> PolyMap:
        return pm.compose(g, f, self.degree_cap)

    def compose_all(self, *maps: PolyMap) -> PolyMap:
        """Compose right to left: compose_all(h, g, f) = h . g . f."""
        acc = maps[-1]
        for g in reversed(maps[:-1]):
            acc = self.compose(g, acc)
        return acc

    def d_morphism(self, f: PolyMap) -> PolyMap:
        return pm.differential(f)

    def d_morphism_n(self, f: PolyMap, n: int) -> PolyMap:
        for _ in range(n):
            f = pm.differential(f)
        return f

    def proj(self, i: int, x: Space) -> PolyMap:
        return pm.proj(i, x)

    def sigma(self, x: Space) -> PolyMap:
        return pm.sigma(x)

    def prod_proj(self, i: int, x: Space, y: Space) -> PolyMap:
        return pm.prod_proj(i, x, y)

    def prod_pair(self, f0: PolyMap, f1: PolyMap) -> PolyMap:
        return pm.prod_pair(f0, f1)

    def with_map(self, f0: PolyMap, f1: PolyMap) -> PolyMap:
        return pm.with_map(f0, f1)

    def terminal_map(self, x: Space) -> PolyMap:
        return pm.zero(x, self.terminal())

    # -- summability -------------------------------------------------------

    def pair_witness(
        self, f0: PolyMap, f1: PolyMap, expected_sum: Optional[PolyMap] = None
    ) -> Optional[PolyMap]:
        raise NotImplementedError

    def summable(self, f0: PolyMap, f1: PolyMap) -> bool:
        return self.pair_witness(f0, f1) is not None

    def sum2(self, f0: PolyMap, f1: PolyMap) -> Optional[PolyMap]:
        """The defined sum sigma . <f0, f1>, absent when not summable."""
        w = self.pair_witness(f0, f1)
        if w is None:
            return None
        return self.compose(self.sigma(f0.cod), w)

    def family_sum(
        self,
        maps: Sequence[PolyMap],
        dom: Space,
        cod: Space,
        expected: Optional[PolyMap] = None,
    ) -> Optional[PolyMap]:
        """n-ary sum; the empty family sums to zero."""
        raise NotImplementedError

    # -- derived morphisms --------------------------------------------------

    def _cache(self, key, build: Callable[[], PolyMap]) -> PolyMap:
        if key not in self._derived:
            self._derived[key] = build()
        return self._derived[key]

    def _require(self, w: Optional[PolyMap], what: str) -> PolyMap:
        if w is None:
            raise StructureError(f"required summability failed: {what}")
        return w

    def inj(self, i: int, x: Space) -> PolyMap:
        """iota_i = <id, 0> (resp. <0, id>), from the D-zero axiom."""

        def build() -> PolyMap:
            one = self.identity(x)
            nil = self.zero(x, x)
            pair = (one, nil) if i == 0 else (nil, one)
            return self._require(self.pair_witness(*pair), f"iota_{i}")

        return self._cache(("inj", i, x), build)

    def theta(self, x: Space) -> PolyMap:
        """theta = <pi0 pi0, pi1 pi0 + pi0 pi1> : D^2 X -> DX."""

        def build() -> PolyMap:
            dx = self.d_object(x)
            p0, p1 = self.proj(0, x), self.proj(1, x)
            q0, q1 = self.proj(0, dx), self.proj(1, dx)
            inner = self.sum2(self.compose(p1, q0), self.compose(p0, q1))
            inner = self._require(inner, "theta inner sum")
            return self._require(
                self.pair_witness(self.compose(p0, q0), inner), "theta"
            )

        return self._cache(("theta", x), build)

    def theta_pow(self, x: Space, n: int) -> PolyMap:
        """theta^n : D^(n+1) X -> DX, the n-fold monad sum."""

        def build() -> PolyMap:
            acc = self.identity(self.d_object(x))
            level = x
            for _ in range(n):
                acc = self.compose(acc, self.theta(level))
                level = self.d_object(level)
            return acc

        return self._cache(("theta_pow", x, n), build)

    def proj_pow(self, i: int, x: Space, k: int) -> PolyMap:
        acc = self.identity(x)
        level = x
        for _ in range(k):
            acc = self.compose(acc, self.proj(i, level))
            level = self.d_object(level)
        return acc

    def lift(self, x: Space) -> PolyMap:
        """l = <<pi0, 0>, <0, pi1>> : DX -> D^2 X."""

        def build() -> PolyMap:
            p0, p1 = self.proj(0, x), self.proj(1, x)
            nil = self.zero(self.d_object(x), x)
            left = self._require(self.pair_witness(p0, nil), "lift left")
            right = self._require(self.pair_witness(nil, p1), "lift right")
            return self._require(self.pair_witness(left, right), "lift")

        return self._cache(("lift", x), build)

    def swap(self, x: Space) -> PolyMap:
        """c = <<pi0 pi0, pi0 pi1>, <pi1 pi0, pi1 pi1>> : D^2 X -> D^2 X."""

        def build() -> PolyMap:
            dx = self.d_object(x)
            p0, p1 = self.proj(0, x), self.proj(1, x)
            q0, q1 = self.proj(0, dx), self.proj(1, dx)
            top = self._require(
                self.pair_witness(
                    self.compose(p0, q0), self.compose(p0, q1)
                ),
                "swap top",
            )
            bot = self._require(
                self.pair_witness(
                    self.compose(p1, q0), self.compose(p1, q1)
                ),
                "swap bottom",
            )
            return self._require(self.pair_witness(top, bot), "swap")

        return self._cache(("swap", x), build)

    def derived_morphisms(self, x: Space) -> dict:
        return {
            "theta": self.theta(x),
            "lift": self.lift(x),
            "swap": self.swap(x),
            "inj0": self.inj(0, x),
            "inj1": self.inj(1, x),
        }

    # -- cartesian compatibility ---------------------------------------------

    def c_with(self, x: Space, y: Space) -> PolyMap:
        """<D pr0, D pr1> : D(X & Y) -> DX & DY."""
        return self.prod_pair(
            self.d_morphism(self.prod_proj(0, x, y)),
            self.d_morphism(self.prod_proj(1, x, y)),
        )

    def c_with_inv(self, x: Space, y: Space) -> PolyMap:
        """<pi0 & pi0, pi1 & pi1>, the inverse of c_with."""
        def build() -> PolyMap:
            p = [self.proj(i, x) for i in (0, 1)]
            q = [self.proj(i, y) for i in (0, 1)]
            return self._require(
                self.pair_witness(
                    self.with_map(p[0], q[0]), self.with_map(p[1], q[1])
                ),
                "c_with inverse",
            )

        return self._cache(("c_with_inv", x, y), build)

    def single_app(
        self, slots: Sequence[Space], i: int, g: PolyMap, fill: str = "id"
    ) -> PolyMap:
        """g at slot i, identities (or endo-zeros) elsewhere, as a with-map."""
        maps = []
        for j, s in enumerate(slots):
            if j == i:
                maps.append(g)
            elif fill == "id":
                maps.append(self.identity(s))
            else:
                maps.append(self.zero(s, s))
        acc = maps[0]
        for m in maps[1:]:
            acc = self.with_map(acc, m)
        return acc

    def prod_pair_n(self, maps: Sequence[PolyMap]) -> PolyMap:
        acc = maps[0]
        for m in maps[1:]:
            acc = self.prod_pair(acc, m)
        return acc

    def var_proj(self, slots: Sequence[Space], i: int) -> PolyMap:
        """Projection from the left-associated product onto slot i."""
        n = len(slots) - 1
        if n == 0:
            return self.identity(slots[0])
        prefix = prodn(list(slots[:-1]))
        if i == n:
            return self.prod_proj(1, prefix, slots[n])
        inner = self.var_proj(slots[:-1], i)
        return self.compose(inner, self.prod_proj(0, prefix, slots[n]))

    def strength(self, slots: Sequence[Space], i: int) -> PolyMap:
        """phi_i = <(id ... pi0 at i ... id), (0 ... pi1 at i ... 0)>."""
        dslots = list(slots)
        dslots[i] = self.d_object(slots[i])
        first = self.single_app(dslots, i, self.proj(0, slots[i]), fill="id")
        second = self.single_app(dslots, i, self.proj(1, slots[i]), fill="zero")
        return pm.pair_witness_matrix(first, second)

    def partial_derivative(
        self, f: PolyMap, slots: Sequence[Space], i: int
    ) -> PolyMap:
        """D_i f = D f . phi_i for f out of the product of the slots."""
        if not 0 <= i < len(slots):
            raise IndexError(f"slot {i} out of range for {len(slots)} slots")
        if prodn(list(slots)) != f.dom:
            raise pm.ShapeError(
                f"slots do not assemble to the domain {space_str(f.dom)}"
            )
        return self.compose(self.d_morphism(f), self.strength(slots, i))

    def partial_derivative_word(
        self, f: PolyMap, slots: Sequence[Space], word: Sequence[int]
    ) -> PolyMap:
        """Iterated partials D_w f, applying the first letter first."""
        slots = list(slots)
        for letter in word:
            f = self.partial_derivative(f, slots, letter)
            slots[letter] = self.d_object(slots[letter])
        return f

    def c_n_inv(self, slots: Sequence[Space]) -> PolyMap:
        """<pi0 & ... & pi0, pi1 & ... & pi1> : DX0 & ... & DXn -> D(prod)."""
        halves = []
        for i in (0, 1):
            acc = self.proj(i, slots[0])
            for s in slots[1:]:
                acc = self.with_map(acc, self.proj(i, s))
            halves.append(acc)
        return self._require(
            self.pair_witness(halves[0], halves[1]), "c_n inverse"
        )


class TotalInstance(Instance):
    """Sums always defined: the carrier of a cartesian differential category."""

    name = "poly"

    def pair_witness(self, f0, f1, expected_sum=None):
        if f0.dom != f1.dom or f0.cod != f1.cod:
            raise pm.ShapeError("pair_witness needs parallel morphisms")
        return pm.pair_witness_matrix(f0, f1)

    def family_sum(self, maps, dom, cod, expected=None):
        total = pm.zero(dom, cod)
        for f in maps:
            total = pm.add(total, f)
        return total


# ---------------------------------------------------------------------------
# Law checking


@dataclass
class LawResult:
    name: str
    passed: bool
    cases: int
    counterexample: Optional[str] = None


@dataclass
class LawReport:
    instance: str
    results: list[LawResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> LawResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def render_lines(self) -> list[str]:
        lines = []
        for r in self.results:
            verdict = "PASS" if r.passed else "FAIL"
            lines.append(f"LAW {r.name} {verdict} cases={r.cases}")
            if r.counterexample:
                for cl in r.counterexample.splitlines():
                    lines.append(f"  {cl}")
        return lines


@dataclass
class LawConfig:
    seed: int = 0
    cases: int = 100
    closure_depth: int = 2


@dataclass
class LawEnv:
    """Sampling context shared by all law cases."""

    inst: Instance
    objects: list[Space]
    morphisms: list[PolyMap]
    multilinear: list[tuple[PolyMap, tuple[Space, ...]]]
    rng: random.Random

    def pick_object(self) -> Space:
        return self.rng.choice(self.objects)

    def pick_map(self, pred: Optional[Callable[[PolyMap], bool]] = None) -> PolyMap:
        pool = self.morphisms
        if pred is not None:
            pool = [f for f in pool if pred(f)]
        if not pool:
            raise StructureError("no morphism in pool matches the predicate")
        return self.rng.choice(pool)

    def pick_parallel(self) -> tuple[PolyMap, PolyMap]:
        f = self.pick_map()
        g = self.pick_map(lambda h: h.dom == f.dom and h.cod == f.cod)
        return f, g

    def pick_composable(self, max_degree_product: int = 12) -> tuple[PolyMap, PolyMap]:
        """(g, f) with g . f defined and bounded composite degree."""
        for _ in range(200):
            f = self.pick_map()
            candidates = [
                g
                for g in self.morphisms
                if g.dom == f.cod
                and max(1, g.max_degree()) * max(1, f.max_degree())
                <= max_degree_product
            ]
            if candidates:
                return self.rng.choice(candidates), f
        raise StructureError("no composable pair in pool")

    def summable_pair(self) -> tuple[PolyMap, PolyMap]:
        """A pair summable by construction (half-scaled morphisms)."""
        f, g = self.pick_parallel()
        return pm.scale(f, HALF), pm.scale(g, HALF)

    def summable_quadruple(self) -> tuple[PolyMap, ...]:
        f, g = self.pick_parallel()
        h = self.pick_map(lambda h: h.dom == f.dom and h.cod == f.cod)
        k = self.pick_map(lambda h: h.dom == f.dom and h.cod == f.cod)
        return tuple(pm.scale(m, QUARTER) for m in (f, g, h, k))

    def pick_product_map(self) -> tuple[PolyMap, tuple[Space, Space]]:
        f = self.pick_map(lambda h: isinstance(h.dom, Prod))
        assert isinstance(f.dom, Prod)
        return f, (f.dom.left, f.dom.right)


Law = Callable[[LawEnv], Optional[str]]


def _neq(name: str, lhs: PolyMap, rhs: PolyMap) -> Optional[str]:
    if lhs == rhs:
        return None
    return (
        f"{name}: sides differ\n"
        f"lhs {lhs.render(limit=8)}\n"
        f"rhs {rhs.render(limit=8)}"
    )


def _law_d_com(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    w = inst.pair_witness(inst.proj(1, x), inst.proj(0, x))
    if w is None:
        return f"pi1, pi0 not summable on {space_str(x)}"
    total = inst.compose(inst.sigma(x), w)
    err = _neq("pi1 + pi0 = sigma", total, inst.sigma(x))
    if err:
        return err
    f0, f1 = env.summable_pair()
    s = inst.sum2(f0, f1)
    s_rev = inst.sum2(f1, f0)
    if s is None or s_rev is None:
        return "constructed summable pair failed to certify"
    return _neq("f0 + f1 = f1 + f0", s, s_rev)


def _law_d_zero(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    one = inst.identity(x)
    nil = inst.zero(x, x)
    for pair, label in (((one, nil), "id + 0"), ((nil, one), "0 + id")):
        w = inst.pair_witness(*pair)
        if w is None:
            return f"{label} not summable on {space_str(x)}"
        total = inst.compose(inst.sigma(x), w)
        err = _neq(f"{label} = id", total, one)
        if err:
            return err
    f = env.pick_map()
    s = inst.sum2(f, inst.zero(f.dom, f.cod))
    if s is None:
        return "f + 0 failed to certify"
    return _neq("f + 0 = f", s, f)


def _law_d_witness(env: LawEnv) -> Optional[str]:
    inst = env.inst
    a, b, c, d = env.summable_quadruple()
    f = inst.pair_witness(a, b)
    g = inst.pair_witness(c, d)
    if f is None or g is None:
        return "quarter-scaled witnesses failed to certify"
    sf, sg = inst.sum2(a, b), inst.sum2(c, d)
    if sf is None or sg is None or inst.pair_witness(sf, sg) is None:
        return "sigma-composites of witnesses not summable"
    if inst.pair_witness(f, g) is None:
        return "witnesses not summable although their sums are"
    return None


def _law_dproj_lin(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    dx = inst.d_object(x)
    for i in (0, 1):
        p = inst.proj(i, x)
        expected = pm.pair_witness_matrix(
            inst.compose(p, inst.proj(0, dx)), inst.compose(p, inst.proj(1, dx))
        )
        err = _neq(f"D pi{i} linear", inst.d_morphism(p), expected)
        if err:
            return err
    return None


def _law_dsum_lin(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    dx = inst.d_object(x)
    s = inst.sigma(x)
    expected = pm.pair_witness_matrix(
        inst.compose(s, inst.proj(0, dx)), inst.compose(s, inst.proj(1, dx))
    )
    err = _neq("D sigma linear", inst.d_morphism(s), expected)
    if err:
        return err
    y = env.pick_object()
    z = inst.zero(x, y)
    return _neq(
        "D 0 = 0",
        inst.d_morphism(z),
        inst.zero(inst.d_object(x), inst.d_object(y)),
    )


def _law_d_chain(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    err = _neq(
        "D id = id",
        inst.d_morphism(inst.identity(x)),
        inst.identity(inst.d_object(x)),
    )
    if err:
        return err
    g, f = env.pick_composable()
    return _neq(
        "D(g . f) = Dg . Df",
        inst.d_morphism(inst.compose(g, f)),
        inst.compose(inst.d_morphism(g), inst.d_morphism(f)),
    )


def _law_d_add(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f = env.pick_map()
    df = inst.d_morphism(f)
    err = _neq(
        "Df . iota0 = iota0 . f",
        inst.compose(df, inst.inj(0, f.dom)),
        inst.compose(inst.inj(0, f.cod), f),
    )
    if err:
        return err
    return _neq(
        "Df . theta = theta . D^2 f",
        inst.compose(df, inst.theta(f.dom)),
        inst.compose(inst.theta(f.cod), inst.d_morphism(df)),
    )


def _law_d_lin(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f = env.pick_map()
    df = inst.d_morphism(f)
    return _neq(
        "D^2 f . l = l . Df",
        inst.compose(inst.d_morphism(df), inst.lift(f.dom)),
        inst.compose(inst.lift(f.cod), df),
    )


def _law_d_schwarz(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f = env.pick_map()
    ddf = inst.d_morphism_n(f, 2)
    return _neq(
        "D^2 f . c = c . D^2 f",
        inst.compose(ddf, inst.swap(f.dom)),
        inst.compose(inst.swap(f.cod), ddf),
    )


def _law_monad_unit(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    dx = inst.d_object(x)
    ident = inst.identity(dx)
    err = _neq(
        "theta . D iota0 = id",
        inst.compose(inst.theta(x), inst.d_morphism(inst.inj(0, x))),
        ident,
    )
    if err:
        return err
    return _neq(
        "theta . iota0 = id",
        inst.compose(inst.theta(x), inst.inj(0, dx)),
        ident,
    )


def _law_monad_assoc(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    return _neq(
        "theta . D theta = theta . theta",
        inst.compose(inst.theta(x), inst.d_morphism(inst.theta(x))),
        inst.compose(inst.theta(x), inst.theta(inst.d_object(x))),
    )


def _law_c_with_iso(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x, y = env.pick_object(), env.pick_object()
    fwd = inst.c_with(x, y)
    inv = inst.c_with_inv(x, y)
    err = _neq(
        "c_with . inv = id",
        inst.compose(fwd, inv),
        inst.identity(inv.dom),
    )
    if err:
        return err
    return _neq(
        "inv . c_with = id",
        inst.compose(inv, fwd),
        inst.identity(fwd.dom),
    )


def _law_strength_comm(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x, y = env.pick_object(), env.pick_object()
    dx, dy = inst.d_object(x), inst.d_object(y)
    # Both paths start at DX & DY and land in D^2 (X & Y).
    via_left = inst.compose(
        inst.d_morphism(inst.strength([x, y], 1)), inst.strength([x, dy], 0)
    )
    via_right = inst.compose(
        inst.d_morphism(inst.strength([x, y], 0)), inst.strength([dx, y], 1)
    )
    err = _neq(
        "c . (D phi1 . phi0) = D phi0 . phi1",
        inst.compose(inst.swap(inst.product(x, y)), via_left),
        via_right,
    )
    if err:
        return err
    p = inst.product(x, y)
    inv = inst.c_with_inv(x, y)
    err = _neq(
        "theta . D phi0 . phi1 = c_with_inv",
        inst.compose(inst.theta(p), via_right),
        inv,
    )
    if err:
        return err
    return _neq(
        "theta . D phi1 . phi0 = c_with_inv",
        inst.compose(inst.theta(p), via_left),
        inv,
    )


def _law_leibniz(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f, (x, y) = env.pick_product_map()
    inv = inst.c_with_inv(x, y)
    lhs = inst.compose(inst.d_morphism(f), inv)
    d0d1 = inst.partial_derivative_word(f, [x, y], (1, 0))
    d1d0 = inst.partial_derivative_word(f, [x, y], (0, 1))
    theta = inst.theta(f.cod)
    err = _neq("Df . c^-1 = theta . D0 D1 f", lhs, inst.compose(theta, d0d1))
    if err:
        return err
    return _neq("Df . c^-1 = theta . D1 D0 f", lhs, inst.compose(theta, d1d0))


def _law_schwarz_partial(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f, (x, y) = env.pick_product_map()
    d0d1 = inst.partial_derivative_word(f, [x, y], (1, 0))
    d1d0 = inst.partial_derivative_word(f, [x, y], (0, 1))
    return _neq(
        "D0 D1 f = c . D1 D0 f",
        d0d1,
        inst.compose(inst.swap(f.cod), d1d0),
    )


def _law_partial_proj0(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f, (x, y) = env.pick_product_map()
    slots = [x, y]
    for i in (0, 1):
        di = inst.partial_derivative(f, slots, i)
        lhs = inst.compose(inst.proj(0, f.cod), di)
        rhs = inst.compose(
            f, inst.single_app([inst.d_object(slots[i]) if j == i else slots[j] for j in range(2)], i, inst.proj(0, slots[i]))
        )
        err = _neq(f"pi0 . D{i} f = f . (pi0 at {i})", lhs, rhs)
        if err:
            return err
    return None


def _derivative(inst: Instance, f: PolyMap) -> PolyMap:
    return inst.compose(inst.proj(1, f.cod), inst.d_morphism(f))


def _law_d_chain_partial(env: LawEnv) -> Optional[str]:
    inst = env.inst
    g, f = env.pick_composable()
    lhs = _derivative(inst, inst.compose(g, f))
    witness = pm.pair_witness_matrix(
        inst.compose(f, inst.proj(0, f.dom)), _derivative(inst, f)
    )
    return _neq(
        "d(g . f) = dg . <f pi0, df>",
        lhs,
        inst.compose(_derivative(inst, g), witness),
    )


def _law_d_inj0_zero(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f = env.pick_map()
    return _neq(
        "df . iota0 = 0",
        inst.compose(_derivative(inst, f), inst.inj(0, f.dom)),
        inst.zero(f.dom, f.cod),
    )


def _law_d_lift(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f = env.pick_map()
    ddf = _derivative(inst, _derivative(inst, f))
    return _neq(
        "dd f . l = d f",
        inst.compose(ddf, inst.lift(f.dom)),
        _derivative(inst, f),
    )


def _law_d_swap(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f = env.pick_map()
    ddf = _derivative(inst, _derivative(inst, f))
    return _neq("dd f . c = dd f", inst.compose(ddf, inst.swap(f.dom)), ddf)


def _law_pair_derivative(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f0, f1 = env.summable_pair()
    w = inst.pair_witness(f0, f1)
    if w is None:
        return "constructed summable pair failed to certify"
    lhs = pm.pair_witness_matrix(inst.d_morphism(f0), inst.d_morphism(f1))
    return _neq(
        "<D f0, D f1> = c . D <f0, f1>",
        lhs,
        inst.compose(inst.swap(f0.cod), inst.d_morphism(w)),
    )


def _law_left_compat(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f0, f1 = env.summable_pair()
    candidates = [g for g in env.morphisms if g.cod == f0.dom and g.max_degree() * max(1, f0.max_degree()) <= 12]
    if not candidates:
        return None
    g = env.rng.choice(candidates)
    w = inst.pair_witness(f0, f1)
    s = inst.sum2(f0, f1)
    if w is None or s is None:
        return "constructed summable pair failed to certify"
    err = _neq(
        "<f0, f1> . g = <f0 g, f1 g>",
        inst.compose(w, g),
        pm.pair_witness_matrix(inst.compose(f0, g), inst.compose(f1, g)),
    )
    if err:
        return err
    s_composed = inst.sum2(inst.compose(f0, g), inst.compose(f1, g))
    if s_composed is None:
        return "composed pair lost summability"
    return _neq("(f0 + f1) g = f0 g + f1 g", inst.compose(s, g), s_composed)


def _law_proj_sum(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    w = inst.pair_witness(inst.proj(0, x), inst.proj(1, x))
    if w is None:
        return "pi0, pi1 not summable"
    err = _neq("<pi0, pi1> = id", w, inst.identity(inst.d_object(x)))
    if err:
        return err
    s = inst.sum2(inst.proj(0, x), inst.proj(1, x))
    return _neq("pi0 + pi1 = sigma", s, inst.sigma(x))


def _law_family_on_pairs(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x, u, v, w = env.summable_quadruple()
    cod = x.cod
    inner0 = inst.pair_witness(x, u)
    inner1 = inst.pair_witness(v, w)
    if inner0 is None or inner1 is None:
        return "inner witnesses failed"
    outer = inst.pair_witness(inner0, inner1)
    if outer is None:
        return "outer witness failed"
    s = inst.sum2(u, v)
    if s is None:
        return "u + v failed"
    err = _neq(
        "theta . <<x,u>,<v,w>> = <x, u+v>",
        inst.compose(inst.theta(cod), outer),
        pm.pair_witness_matrix(x, s),
    )
    if err:
        return err
    err = _neq(
        "c . <<x,u>,<v,w>> = <<x,v>,<u,w>>",
        inst.compose(inst.swap(cod), outer),
        pm.pair_witness_matrix(
            pm.pair_witness_matrix(x, v), pm.pair_witness_matrix(u, w)
        ),
    )
    if err:
        return err
    pair = inst.pair_witness(x, u)
    nil = inst.zero(x.dom, cod)
    return _neq(
        "l . <x,u> = <<x,0>,<0,u>>",
        inst.compose(inst.lift(cod), pair),
        pm.pair_witness_matrix(
            pm.pair_witness_matrix(x, nil), pm.pair_witness_matrix(nil, u)
        ),
    )


def _law_additive_char(env: LawEnv) -> Optional[str]:
    # Additivity characterization: h . 0 = 0 and (h pi0) + (h pi1) = h sigma
    # together imply h distributes over every summable pair.
    inst = env.inst
    h = env.pick_map()
    if inst.compose(h, inst.zero(h.dom, h.dom)) != inst.zero(h.dom, h.cod):
        return None
    s = inst.sum2(
        inst.compose(h, inst.proj(0, h.dom)), inst.compose(h, inst.proj(1, h.dom))
    )
    if s is None or s != inst.compose(h, inst.sigma(h.dom)):
        return None
    candidates = [g for g in env.morphisms if g.cod == h.dom]
    if not candidates:
        return None
    first = env.rng.choice(candidates)
    parallel = [g for g in candidates if g.dom == first.dom]
    f0 = pm.scale(first, HALF)
    f1 = pm.scale(env.rng.choice(parallel), HALF)
    total = inst.sum2(f0, f1)
    lhs = inst.sum2(inst.compose(h, f0), inst.compose(h, f1))
    if total is None or lhs is None:
        return "additive h failed to distribute over a summable pair"
    return _neq("h (f0 + f1) = h f0 + h f1", inst.compose(h, total), lhs)


def _law_linear_char(env: LawEnv) -> Optional[str]:
    inst = env.inst
    h = env.pick_map()
    if _derivative(inst, h) != inst.compose(h, inst.proj(1, h.dom)):
        return None
    # The derivative equation alone must imply the other two diagrams.
    err = _neq(
        "sigma . Dh = h . sigma",
        inst.compose(inst.sigma(h.cod), inst.d_morphism(h)),
        inst.compose(h, inst.sigma(h.dom)),
    )
    if err:
        return err
    w = env.pick_object()
    return _neq(
        "h . 0 = 0",
        inst.compose(h, inst.zero(w, h.dom)),
        inst.zero(w, h.cod),
    )


def _is_dlinear(inst: Instance, h: PolyMap) -> bool:
    return _derivative(inst, h) == inst.compose(h, inst.proj(1, h.dom))


def _law_linear_closure(env: LawEnv) -> Optional[str]:
    inst = env.inst
    x = env.pick_object()
    dx = inst.d_object(x)
    y = env.pick_object()
    structural = [
        inst.proj(0, x),
        inst.proj(1, x),
        inst.sigma(x),
        inst.inj(0, x),
        inst.inj(1, x),
        inst.theta(x),
        inst.lift(x),
        inst.swap(x),
        inst.prod_proj(0, x, y),
        inst.prod_proj(1, x, y),
    ]
    for m in structural:
        if not _is_dlinear(inst, m):
            return f"structural morphism not D-linear: {m!r}"
    # Closure under composition: two linear maps of matching type.
    comp = inst.compose(inst.proj(0, x), inst.theta(x))
    if not _is_dlinear(inst, comp):
        return f"composite of linear maps not linear: {comp!r}"
    # Closure under witness pairing and sum, on a scaled linear pair.
    f0 = pm.scale(inst.proj(0, x), HALF)
    f1 = pm.scale(inst.proj(1, x), HALF)
    w = inst.pair_witness(f0, f1)
    s = inst.sum2(f0, f1)
    if w is None or s is None:
        return "scaled projections failed to certify"
    if not _is_dlinear(inst, w):
        return "witness pairing of linear maps not linear"
    if not _is_dlinear(inst, s):
        return "sum of linear maps not linear"
    return None


def _multilinear_equation(
    inst: Instance, f: PolyMap, slots: Sequence[Space]
) -> Optional[int]:
    """First slot violating pi1 . D_i f = f . (pi1 at i), or None."""
    for i in range(len(slots)):
        di = inst.partial_derivative(f, slots, i)
        lhs = inst.compose(inst.proj(1, f.cod), di)
        dslots = list(slots)
        dslots[i] = inst.d_object(slots[i])
        rhs = inst.compose(f, inst.single_app(dslots, i, inst.proj(1, slots[i])))
        if lhs != rhs:
            return i
    return None


def _law_multilinear_partial(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f, slots = env.rng.choice(env.multilinear)
    i = env.rng.randrange(len(slots))
    di = inst.partial_derivative(f, list(slots), i)
    new_slots = list(slots)
    new_slots[i] = inst.d_object(slots[i])
    bad = _multilinear_equation(inst, di, new_slots)
    if bad is not None:
        return f"D_{i} f lost linearity in slot {bad}"
    return None


def _law_multilinear_compose(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f, slots = env.rng.choice(env.multilinear)
    h = inst.inj(env.rng.randrange(2), f.cod)
    composed = inst.compose(h, f)
    bad = _multilinear_equation(inst, composed, slots)
    if bad is not None:
        return f"h . f lost linearity in slot {bad}"
    return None


def _law_proj_commute(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f, slots = env.rng.choice(env.multilinear)
    rng = env.rng
    n = len(slots)
    d = rng.randrange(3)
    i = rng.randrange(n)
    tail = [rng.randrange(n) for _ in range(d)]
    lhs_inner = inst.partial_derivative_word(f, list(slots), [i] + tail)
    h = sum(1 for letter in tail if letter == i)
    for k in (0, 1):
        pk = inst.proj(k, f.cod)
        lhs = inst.compose(inst.d_morphism_n(pk, d), lhs_inner)
        rhs_inner = inst.partial_derivative_word(f, list(slots), tail)
        # Slot i of the left side's domain carries h + 1 D's; the right side
        # composes with D^h pi_k at that slot.
        rhs_slots = list(slots)
        for letter in tail:
            rhs_slots[letter] = inst.d_object(rhs_slots[letter])
        arg_slots = list(rhs_slots)
        arg_slots[i] = inst.d_object(arg_slots[i])
        level = slots[i]
        for _ in range(h):
            level = inst.d_object(level)
        pk_h = inst.d_morphism_n(inst.proj(k, slots[i]), h)
        rhs = inst.compose(rhs_inner, inst.single_app(arg_slots, i, pk_h))
        if lhs != rhs:
            return (
                f"projection commutation failed: k={k} d={d} i={i} tail={tail}"
            )
    return None


def _law_leibniz_n(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f, slots = env.rng.choice(env.multilinear)
    n = len(slots) - 1
    if n < 1:
        return None
    alpha = list(range(n + 1))
    env.rng.shuffle(alpha)
    lhs = inst.compose(inst.d_morphism(f), inst.c_n_inv(list(slots)))
    rhs = inst.compose(
        inst.theta_pow(f.cod, n),
        inst.partial_derivative_word(f, list(slots), alpha),
    )
    return _neq(f"Df . c^-1 = theta^{n} . D_alpha f (alpha={alpha})", lhs, rhs)


def _law_bilinear_expansion(env: LawEnv) -> Optional[str]:
    inst = env.inst
    candidates = [(f, s) for f, s in env.multilinear if len(s) == 2]
    if not candidates:
        return None
    f, (x, y) = env.rng.choice(candidates)
    lhs = inst.compose(
        inst.proj(1, f.cod),
        inst.compose(inst.d_morphism(f), inst.c_with_inv(x, y)),
    )
    term0 = inst.compose(f, inst.with_map(inst.proj(1, x), inst.proj(0, y)))
    term1 = inst.compose(f, inst.with_map(inst.proj(0, x), inst.proj(1, y)))
    return _neq(
        "bilinear derivative expands to Phi(x,v) + Phi(u,y)",
        lhs,
        pm.add(term0, term1),
    )


def _law_n_ary_sum(env: LawEnv) -> Optional[str]:
    inst = env.inst
    f, g = env.pick_parallel()
    h = env.pick_map(lambda m: m.dom == f.dom and m.cod == f.cod)
    family = [pm.scale(f, QUARTER), pm.scale(g, QUARTER), pm.scale(h, QUARTER)]
    total = inst.family_sum(family, f.dom, f.cod)
    if total is None:
        return "quarter-scaled family failed to sum"
    for perm in ((0, 1, 2), (2, 0, 1), (1, 2, 0)):
        alt = inst.family_sum([family[i] for i in perm], f.dom, f.cod)
        if alt != total:
            return f"sum depends on insertion order {perm}"
    # Partition {{0}, {1, 2}} must agree with the flat sum.
    tail = inst.family_sum(family[1:], f.dom, f.cod)
    if tail is None:
        return "sub-family failed to sum"
    grouped = inst.sum2(family[0], tail)
    if grouped is None or grouped != total:
        return "partition grouping changed the sum"
    empty = inst.family_sum([], f.dom, f.cod)
    if empty != inst.zero(f.dom, f.cod):
        return "empty family must sum to zero"
    single = inst.family_sum([f], f.dom, f.cod)
    if single != f:
        return "singleton family must sum to its member"
    return None


ALL_LAWS: list[tuple[str, Law]] = [
    ("D-com", _law_d_com),
    ("D-zero", _law_d_zero),
    ("D-witness", _law_d_witness),
    ("Dproj-lin", _law_dproj_lin),
    ("Dsum-lin", _law_dsum_lin),
    ("D-chain", _law_d_chain),
    ("D-add", _law_d_add),
    ("D-lin", _law_d_lin),
    ("D-Schwarz", _law_d_schwarz),
    ("monad-unit", _law_monad_unit),
    ("monad-assoc", _law_monad_assoc),
    ("c-with-iso", _law_c_with_iso),
    ("strength-comm", _law_strength_comm),
    ("Leibniz", _law_leibniz),
    ("Schwarz-partial", _law_schwarz_partial),
    ("partial-proj0", _law_partial_proj0),
    ("d-chain-partial", _law_d_chain_partial),
    ("d-inj0-zero", _law_d_inj0_zero),
    ("d-lift", _law_d_lift),
    ("d-swap", _law_d_swap),
    ("pair-derivative", _law_pair_derivative),
    ("left-compat", _law_left_compat),
    ("proj-sum", _law_proj_sum),
    ("family-on-pairs", _law_family_on_pairs),
    ("additive-char", _law_additive_char),
    ("linear-char", _law_linear_char),
    ("linear-closure", _law_linear_closure),
    ("multilinear-partial", _law_multilinear_partial),
    ("multilinear-compose", _law_multilinear_compose),
    ("proj-commute", _law_proj_commute),
    ("Leibniz-n", _law_leibniz_n),
    ("bilinear-expansion", _law_bilinear_expansion),
    ("n-ary-sum", _law_n_ary_sum),
]


def close_generators(
    inst: Instance,
    generators: Sequence[PolyMap],
    rng: random.Random,
    depth: int = 2,
    max_pool: int = 160,
    max_degree: int = 4,
) -> list[PolyMap]:
    """Close a generator set under composition, pairing and D, boundedly."""
    pool = list(generators)
    for _ in range(depth):
        fresh: list[PolyMap] = []
        attempts = 0
        while len(fresh) < 24 and attempts < 400:
            attempts += 1
            choice = rng.randrange(3)
            f = rng.choice(pool)
            if choice == 0:
                candidates = [
                    g
                    for g in pool
                    if g.dom == f.cod
                    and max(1, g.max_degree()) * max(1, f.max_degree())
                    <= max_degree
                ]
                if candidates:
                    fresh.append(inst.compose(rng.choice(candidates), f))
            elif choice == 1:
                candidates = [g for g in pool if g.dom == f.dom]
                if candidates:
                    fresh.append(inst.prod_pair(f, rng.choice(candidates)))
            else:
                if f.max_degree() <= max_degree:
                    fresh.append(inst.d_morphism(f))
        pool.extend(fresh)
        if len(pool) > max_pool:
            pool = pool[:max_pool]
    return pool


def check_axioms(
    inst: Instance,
    generators: Sequence[PolyMap],
    multilinear: Sequence[tuple[PolyMap, tuple[Space, ...]]],
    objects: Sequence[Space],
    config: Optional[LawConfig] = None,
    laws: Optional[Sequence[tuple[str, Law]]] = None,
) -> LawReport:
    """Run every law against sampled cases; failures carry counterexamples."""
    config = config or LawConfig()
    rng = random.Random(config.seed)
    pool = close_generators(inst, generators, rng, depth=config.closure_depth)
    report = LawReport(inst.name)
    for name, law in laws or ALL_LAWS:
        env = LawEnv(
            inst=inst,
            objects=list(objects),
            morphisms=pool,
            multilinear=list(multilinear),
            rng=random.Random(f"{config.seed}|{name}"),
        )
        counterexample = None
        cases = 0
        for _ in range(config.cases):
            cases += 1
            try:
                counterexample = law(env)
            except (StructureError, pm.ShapeError, pm.DegreeCapError) as exc:
                counterexample = f"structural failure: {exc}"
            if counterexample is not None:
                break
        report.results.append(
            LawResult(name, counterexample is None, cases, counterexample)
        )
    return report
