"""Coordinate spaces shared by both backends.

A space is a finite labelled coordinate system: a ground space carries its
atoms directly (plus, for the probabilistic backend, a finite predual), and
composite spaces arise from the binary product and from the summable-pair
construction D.  Atoms are token trees: a ground atom is a plain string, a
product tags with "L"/"R", and D tags with "0"/"1".

D tags are pushed inside product tags, so that d_space(X & Y) and
d_space(X) & d_space(Y) are the same space with the same atoms.  Both
backends rely on this: the swap mediating D(X & Y) and DX & DY is literally
the identity matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Atom = Union[str, tuple]  # str | (tag, Atom) with tag in {"L", "R", "0", "1"}

_D_TAGS = ("0", "1")
_PROD_TAGS = ("L", "R")


@dataclass(frozen=True)
class Ground:
    """A named finite web; predual rows align with the web tuple order."""

    name: str
    web: tuple[str, ...]
    predual: tuple[tuple[Fraction, ...], ...] = ()


@dataclass(frozen=True)
class Prod:
    left: "Space"
    right: "Space"


@dataclass(frozen=True)
class DPair:
    """Space of pairs (x, u) with x + u in the inner space."""

    inner: "Space"


Space = Union[Ground, Prod, DPair]


def d_space(x: Space) -> Space:
    """D on objects; distributes over products so atoms stay canonical."""
    if isinstance(x, Prod):
        return Prod(d_space(x.left), d_space(x.right))
    return DPair(x)


def product(left: Space, right: Space) -> Space:
    return Prod(left, right)


def prodn(spaces: list[Space]) -> Space:
    """Left-associated n-ary product; requires at least one factor."""
    if not spaces:
        raise ValueError("empty product has no canonical space here; use terminal")
    acc = spaces[0]
    for s in spaces[1:]:
        acc = Prod(acc, s)
    return acc


def peel_product(space: Space, arity: int) -> list[Space]:
    """Inverse of prodn for a known arity (left-associated)."""
    if arity < 1:
        raise ValueError("arity must be >= 1")
    slots: list[Space] = []
    for _ in range(arity - 1):
        if not isinstance(space, Prod):
            raise ValueError(f"space is not a {arity}-fold product")
        slots.append(space.right)
        space = space.left
    slots.append(space)
    slots.reverse()
    return slots


def atom_key(a: Atom):
    """Total order on atoms; ground strings sort before tagged atoms."""
    if isinstance(a, str):
        return (0, a)
    tag, inner = a
    return (1, tag, atom_key(inner))


def tag_d(i: int, a: Atom) -> Atom:
    """Prefix a D tag, pushing it under any product tags."""
    if isinstance(a, tuple) and a[0] in _PROD_TAGS:
        return (a[0], tag_d(i, a[1]))
    return (_D_TAGS[i], a)


def untag_d(a: Atom) -> tuple[int, Atom]:
    """Strip the outermost D tag (under product tags); inverse of tag_d."""
    if isinstance(a, tuple) and a[0] in _PROD_TAGS:
        i, inner = untag_d(a[1])
        return i, (a[0], inner)
    if isinstance(a, tuple) and a[0] in _D_TAGS:
        return _D_TAGS.index(a[0]), a[1]
    raise ValueError(f"atom {a!r} carries no D tag")


def tag_prod(side: int, a: Atom) -> Atom:
    return (_PROD_TAGS[side], a)


@lru_cache(maxsize=None)
def web(space: Space) -> tuple[Atom, ...]:
    """All atoms of a space, sorted canonically."""
    if isinstance(space, Ground):
        atoms: list[Atom] = list(space.web)
    elif isinstance(space, Prod):
        atoms = [("L", a) for a in web(space.left)]
        atoms += [("R", a) for a in web(space.right)]
    else:
        atoms = [tag_d(i, a) for i in (0, 1) for a in web(space.inner)]
    return tuple(sorted(atoms, key=atom_key))


def dim(space: Space) -> int:
    return len(web(space))


def atom_str(a: Atom) -> str:
    """Dotted rendering, e.g. L.0.e2 for a product-then-D tagged atom."""
    if isinstance(a, str):
        return a
    return f"{a[0]}.{atom_str(a[1])}"


def atom_from_str(text: str) -> Atom:
    head, dot, rest = text.partition(".")
    if not dot:
        return head
    if head not in _PROD_TAGS and head not in _D_TAGS:
        raise ValueError(f"unknown atom tag {head!r} in {text!r}")
    return (head, atom_from_str(rest))


def space_str(space: Space) -> str:
    if isinstance(space, Ground):
        return space.name
    if isinstance(space, Prod):
        left = space_str(space.left)
        right = space_str(space.right)
        if isinstance(space.right, Prod):
            right = f"({right})"
        return f"{left} & {right}"
    inner = space_str(space.inner)
    if isinstance(space.inner, Prod):
        inner = f"({inner})"
    return f"D {inner}"


def fingerprint(space: Space) -> str:
    """Stable textual identity, independent of PYTHONHASHSEED."""
    if isinstance(space, Ground):
        rows = ";".join(",".join(str(c) for c in row) for row in space.predual)
        return f"G[{space.name}|{','.join(space.web)}|{rows}]"
    if isinstance(space, Prod):
        return f"P[{fingerprint(space.left)}|{fingerprint(space.right)}]"
    return f"D[{fingerprint(space.inner)}]"
