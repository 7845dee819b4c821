"""Sparse power-series matrices between coordinate spaces.

A map f : X -> Y is stored as a dictionary from (monomial, output atom) to a
nonzero exact rational, where a monomial is a finite multiset over the atoms
of X (a sorted tuple).  Evaluation reads the entry (m, b) as the coefficient
of x^m in the power series for coordinate b.  Composition is formal
substitution of series, exact over Fraction.

The probabilistic backend restricts coefficients to be positive; the
polynomial backend allows any nonzero rational.  Both use the same engine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .objects import (
    Atom,
    DPair,
    Prod,
    Space,
    atom_key,
    atom_str,
    d_space,
    product,
    space_str,
    tag_d,
    tag_prod,
    untag_d,
    web,
)

Mono = tuple  # sorted tuple of atoms, multiplicity by repetition
Entries = dict  # {(Mono, Atom): Fraction}

DEGREE_CAP = 16

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DegreeCapError(Exception):
    """Composition produced a monomial above the configured degree cap."""


class ShapeError(Exception):
    """Domain/codomain mismatch or an atom outside its web."""


def mono(atoms: Iterable[Atom]) -> Mono:
    return tuple(sorted(atoms, key=atom_key))


def mono_mul(m1: Mono, m2: Mono) -> Mono:
    return tuple(sorted(m1 + m2, key=atom_key))


def mono_str(m: Mono) -> str:
    return "[" + ", ".join(atom_str(a) for a in m) + "]"


class PolyMap:
    """An exact sparse power-series map between two spaces."""

    __slots__ = ("dom", "cod", "entries")

    def __init__(self, dom: Space, cod: Space, entries: Entries):
        self.dom = dom
        self.cod = cod
        self.entries = {k: v for k, v in entries.items() if v != 0}

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return (
            self.dom == other.dom
            and self.cod == other.cod
            and self.entries == other.entries
        )

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __repr__(self) -> str:
        return f"PolyMap({space_str(self.dom)} -> {space_str(self.cod)}, {len(self.entries)} entries)"

    def max_degree(self) -> int:
        return max((len(m) for m, _ in self.entries), default=0)

    def check_webs(self) -> None:
        dom_web = set(web(self.dom))
        cod_web = set(web(self.cod))
        for (m, b), _ in self.entries.items():
            if b not in cod_web:
                raise ShapeError(f"output atom {atom_str(b)} outside codomain web")
            for a in m:
                if a not in dom_web:
                    raise ShapeError(f"input atom {atom_str(a)} outside domain web")

    def eval(self, x: dict) -> dict:
        """Evaluate the power series at a point (sparse atom -> Fraction)."""
        out: dict = {}
        for (m, b), c in self.entries.items():
            val = c
            for a in m:
                xa = x.get(a, _ZERO)
                if xa == 0:
                    val = _ZERO
                    break
                val *= xa
            if val != 0:
                out[b] = out.get(b, _ZERO) + val
        return {b: v for b, v in out.items() if v != 0}

    def coordinate_polys(self) -> dict:
        """Group entries by output atom: {b: {mono: coeff}}."""
        polys: dict = {}
        for (m, b), c in self.entries.items():
            polys.setdefault(b, {})[m] = c
        return polys

    def render(self, limit: Optional[int] = None) -> str:
        lines = [f"map {space_str(self.dom)} -> {space_str(self.cod)}"]
        keys = sorted(
            self.entries,
            key=lambda k: (atom_key(k[1]), tuple(atom_key(a) for a in k[0])),
        )
        if limit is not None:
            keys = keys[:limit]
        for m, b in keys:
            args = ", ".join(atom_str(a) for a in m)
            lines.append(f"  entry ({args}) -> {atom_str(b)} : {self.entries[(m, b)]}")
        return "\n".join(lines)


def identity(x: Space) -> PolyMap:
    return PolyMap(x, x, {((a,), a): _ONE for a in web(x)})


def zero(dom: Space, cod: Space) -> PolyMap:
    return PolyMap(dom, cod, {})


def add(f: PolyMap, g: PolyMap) -> PolyMap:
    if f.dom != g.dom or f.cod != g.cod:
        raise ShapeError("pointwise sum needs parallel maps")
    entries = dict(f.entries)
    for k, c in g.entries.items():
        entries[k] = entries.get(k, _ZERO) + c
    return PolyMap(f.dom, f.cod, entries)


def scale(f: PolyMap, factor: Fraction) -> PolyMap:
    return PolyMap(f.dom, f.cod, {k: c * factor for k, c in f.entries.items()})


def _poly_mul(p: dict, q: dict, cap: int) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            if len(m1) + len(m2) > cap:
                raise DegreeCapError(
                    f"monomial degree {len(m1) + len(m2)} exceeds cap {cap}"
                )
            m = mono_mul(m1, m2)
            out[m] = out.get(m, _ZERO) + c1 * c2
    return {m: c for m, c in out.items() if c != 0}


def compose(g: PolyMap, f: PolyMap, cap: int = DEGREE_CAP) -> PolyMap:
    """Formal substitution: (g . f)(x) = g(f(x)), exact on coefficients."""
    if f.cod != g.dom:
        raise ShapeError(
            f"cannot compose: {space_str(g.dom)} expected, got {space_str(f.cod)}"
        )
    f_polys = f.coordinate_polys()
    entries: Entries = {}
    # Cache powers of each coordinate series of f as they are needed.
    pow_cache: dict = {}

    def coord_pow(b: Atom, k: int) -> dict:
        key = (b, k)
        if key in pow_cache:
            return pow_cache[key]
        if k == 1:
            result = f_polys.get(b, {})
        else:
            result = _poly_mul(coord_pow(b, k - 1), f_polys.get(b, {}), cap)
        pow_cache[key] = result
        return result

    for (p, c_out), coeff in g.entries.items():
        acc = {(): coeff}
        counts: dict = {}
        for b in p:
            counts[b] = counts.get(b, 0) + 1
        for b, k in counts.items():
            acc = _poly_mul(acc, coord_pow(b, k), cap)
            if not acc:
                break
        for m, c in acc.items():
            key = (m, c_out)
            entries[key] = entries.get(key, _ZERO) + c
    return PolyMap(f.dom, g.cod, entries)


def differential(f: PolyMap) -> PolyMap:
    """D on maps: Df = (f(x), sum_a m(a) x^(m-[a]) u_a) over the D-tagged webs."""
    dd = d_space(f.dom)
    dc = d_space(f.cod)
    entries: Entries = {}
    for (m, b), c in f.entries.items():
        base = mono(tag_d(0, a) for a in m)
        key = (base, tag_d(0, b))
        entries[key] = entries.get(key, _ZERO) + c
        seen = set()
        for idx, a in enumerate(m):
            if a in seen:
                continue
            seen.add(a)
            mult = m.count(a)
            rest = list(m)
            rest.remove(a)
            mm = mono([tag_d(0, r) for r in rest] + [tag_d(1, a)])
            key = (mm, tag_d(1, b))
            entries[key] = entries.get(key, _ZERO) + c * mult
    return PolyMap(dd, dc, entries)


def proj(i: int, x: Space) -> PolyMap:
    """pi_i : DX -> X."""
    return PolyMap(d_space(x), x, {((tag_d(i, a),), a): _ONE for a in web(x)})


def sigma(x: Space) -> PolyMap:
    """sigma : DX -> X, the sum of the two projections."""
    entries: Entries = {}
    for a in web(x):
        entries[((tag_d(0, a),), a)] = _ONE
        entries[((tag_d(1, a),), a)] = _ONE
    return PolyMap(d_space(x), x, entries)


def injection(i: int, x: Space) -> PolyMap:
    """iota_i : X -> DX, pairing with zero on the other side."""
    return PolyMap(x, d_space(x), {((a,), tag_d(i, a)): _ONE for a in web(x)})


def prod_proj(i: int, left: Space, right: Space) -> PolyMap:
    src = product(left, right)
    out = left if i == 0 else right
    return PolyMap(src, out, {((tag_prod(i, a),), a): _ONE for a in web(out)})


def prod_pair(f0: PolyMap, f1: PolyMap) -> PolyMap:
    if f0.dom != f1.dom:
        raise ShapeError("pairing needs a common domain")
    entries: Entries = {}
    for (m, b), c in f0.entries.items():
        entries[(m, ("L", b))] = c
    for (m, b), c in f1.entries.items():
        entries[(m, ("R", b))] = c
    return PolyMap(f0.dom, product(f0.cod, f1.cod), entries)


def with_map(f0: PolyMap, f1: PolyMap) -> PolyMap:
    """f0 & f1 acting componentwise on a binary product."""
    entries: Entries = {}
    for (m, b), c in f0.entries.items():
        entries[(mono(("L", a) for a in m), ("L", b))] = c
    for (m, b), c in f1.entries.items():
        entries[(mono(("R", a) for a in m), ("R", b))] = c
    return PolyMap(
        product(f0.dom, f1.dom), product(f0.cod, f1.cod), entries
    )


def pair_witness_matrix(f0: PolyMap, f1: PolyMap) -> PolyMap:
    """The unique candidate witness <f0, f1> : X -> D(cod)."""
    if f0.dom != f1.dom or f0.cod != f1.cod:
        raise ShapeError("witness needs parallel maps")
    entries: Entries = {}
    for (m, b), c in f0.entries.items():
        entries[(m, tag_d(0, b))] = c
    for (m, b), c in f1.entries.items():
        entries[(m, tag_d(1, b))] = c
    return PolyMap(f0.dom, d_space(f0.cod), entries)


def witness_components(h: PolyMap) -> tuple[PolyMap, PolyMap]:
    """Split h : X -> DY into (pi_0 . h, pi_1 . h) without composing."""
    inner = strip_d_space(h.cod)
    parts: tuple[Entries, Entries] = ({}, {})
    for (m, b), c in h.entries.items():
        i, base = untag_d(b)
        parts[i][(m, base)] = c
    return (
        PolyMap(h.dom, inner, parts[0]),
        PolyMap(h.dom, inner, parts[1]),
    )


def strip_d_space(space: Space) -> Space:
    if isinstance(space, DPair):
        return space.inner
    if isinstance(space, Prod):
        return Prod(strip_d_space(space.left), strip_d_space(space.right))
    raise ShapeError(f"{space_str(space)} is not a D-space")
