"""Finite probabilistic coherence spaces and analytic morphisms.

A finite PCS is a ground space with a finite predual of non-negative
rational vectors; membership of a point x is sup over the predual of
<x, x'> <= 1.  Composite spaces test membership recursively: a product
componentwise, and a D-space via pi0(z) + pi1(z).  Analytic morphisms are
the shared sparse matrices with positive coefficients, evaluated as power
series.

Whether an arbitrary non-negative matrix is a morphism is a sup of a
posynomial over a polytope and is not decided here.  Certification is exact
when the candidate equals a compositionally known morphism, and otherwise a
documented semi-decision: evaluate at a deterministic probe set (zero, the
per-coordinate suprema, seeded boundary and interior rationals) and check
membership of each result.  A probe failure refutes exactly; survival
certifies.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from typing import Optional, Sequence

from . import polymap as pm
from .ccdc import Instance
from .objects import (
    Atom,
    Ground,
    Prod,
    Space,
    atom_from_str,
    fingerprint,
    peel_product,
    tag_prod,
    untag_d,
    web,
)
from .polymap import PolyMap

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ModelError(Exception):
    """A PCS object or interpretation failed validation."""


def validate_space(space: Space) -> None:
    """Enforce the finite-PCS invariants on every ground leaf."""
    if isinstance(space, Ground):
        if not space.predual:
            raise ModelError(f"ground space {space.name!r} has an empty predual")
        for row in space.predual:
            if len(row) != len(space.web):
                raise ModelError(
                    f"predual row of {space.name!r} has wrong length"
                )
            if any(c < 0 for c in row):
                raise ModelError(f"negative predual entry in {space.name!r}")
        for idx, a in enumerate(space.web):
            if max((row[idx] for row in space.predual), default=_ZERO) <= 0:
                raise ModelError(
                    f"coordinate {a!r} of {space.name!r} is unbounded "
                    "(no predual vector is positive there)"
                )
        if len(set(space.web)) != len(space.web):
            raise ModelError(f"duplicate atoms in web of {space.name!r}")
        return
    if isinstance(space, Prod):
        validate_space(space.left)
        validate_space(space.right)
        return
    validate_space(space.inner)


def _split_prod(vec: dict) -> tuple[dict, dict]:
    left: dict = {}
    right: dict = {}
    for a, c in vec.items():
        side, inner = a
        (left if side == "L" else right)[inner] = c
    return left, right


def _fold_d(vec: dict) -> dict:
    """pi0(z) + pi1(z) on a D-space vector."""
    out: dict = {}
    for a, c in vec.items():
        _, inner = untag_d(a)
        out[inner] = out.get(inner, _ZERO) + c
    return out


def sup_norm(space: Space, vec: dict) -> Fraction:
    """sup over the (structural) predual of <vec, x'>; membership is <= 1."""
    if isinstance(space, Ground):
        index = {a: i for i, a in enumerate(space.web)}
        best = _ZERO
        for row in space.predual:
            val = sum((row[index[a]] * c for a, c in vec.items()), _ZERO)
            if val > best:
                best = val
        return best
    if isinstance(space, Prod):
        left, right = _split_prod(vec)
        return max(sup_norm(space.left, left), sup_norm(space.right, right))
    return sup_norm(space.inner, _fold_d(vec))


def membership(space: Space, vec: dict) -> bool:
    """Exact test that a non-negative vector lies in the space."""
    known = set(web(space))
    for a, c in vec.items():
        if a not in known:
            raise ModelError(f"atom {a!r} outside the web")
        if c < 0:
            raise ModelError(f"negative coordinate at {a!r}")
    return sup_norm(space, vec) <= 1


def coord_sup(space: Space, atom: Atom) -> Fraction:
    """sup of a single coordinate over the space (finite by validation)."""
    if isinstance(space, Ground):
        idx = space.web.index(atom)
        best = max(row[idx] for row in space.predual)
        return _ONE / best
    if isinstance(space, Prod):
        side, inner = atom
        return coord_sup(space.left if side == "L" else space.right, inner)
    _, inner = untag_d(atom)
    return coord_sup(space.inner, inner)


def probe_points(space: Space, seed: int = 0, count: int = 6) -> list[dict]:
    """Deterministic probe set: zero, coordinate suprema, seeded rationals."""
    points: list[dict] = [{}]
    for a in web(space):
        points.append({a: coord_sup(space, a)})
    digest = hashlib.sha256(f"{seed}|{fingerprint(space)}".encode()).digest()
    rng = random.Random(int.from_bytes(digest[:8], "big"))
    atoms = web(space)
    for _ in range(count):
        raw = {
            a: Fraction(rng.randint(0, 4), rng.randint(1, 5))
            for a in atoms
            if rng.random() < 0.7
        }
        raw = {a: c for a, c in raw.items() if c > 0}
        if not raw:
            continue
        norm = sup_norm(space, raw)
        if norm > 0:
            points.append({a: c / norm for a, c in raw.items()})
            points.append({a: c / (2 * norm) for a, c in raw.items()})
    return points


class PcsInstance(Instance):
    """Analytic morphisms between finite PCSs, with partial sums."""

    name = "pcs"

    def __init__(self, degree_cap: int = pm.DEGREE_CAP, probe_seed: int = 0,
                 probe_count: int = 6):
        super().__init__(degree_cap)
        self.probe_seed = probe_seed
        self.probe_count = probe_count
        self._probes: dict = {}

    def terminal(self) -> Space:
        return Ground("top", (), ((),))

    def probes(self, space: Space) -> list[dict]:
        if space not in self._probes:
            self._probes[space] = probe_points(
                space, self.probe_seed, self.probe_count
            )
        return self._probes[space]

    def certify(self, candidate: PolyMap,
                expected: Optional[PolyMap] = None) -> bool:
        """Exact when compared against a known morphism, else probe-based."""
        if expected is not None and candidate == expected:
            return True
        if any(c < 0 for c in candidate.entries.values()):
            return False
        for x in self.probes(candidate.dom):
            if not membership(candidate.cod, candidate.eval(x)):
                return False
        return True

    def pair_witness(self, f0: PolyMap, f1: PolyMap,
                     expected_sum: Optional[PolyMap] = None) -> Optional[PolyMap]:
        if f0.dom != f1.dom or f0.cod != f1.cod:
            raise pm.ShapeError("pair_witness needs parallel morphisms")
        total = pm.add(f0, f1)
        if not self.certify(total, expected_sum):
            return None
        return pm.pair_witness_matrix(f0, f1)

    def family_sum(self, maps: Sequence[PolyMap], dom: Space, cod: Space,
                   expected: Optional[PolyMap] = None) -> Optional[PolyMap]:
        """Coefficients are non-negative, so a family is summable exactly
        when its pointwise total is a morphism; partial sums are dominated."""
        total = pm.zero(dom, cod)
        for f in maps:
            total = pm.add(total, f)
        if not self.certify(total, expected):
            return None
        return total


def is_linear(f: PolyMap) -> bool:
    """Support shape: every monomial is a single atom."""
    return all(len(m) == 1 for m, _ in f.entries)


def _slot_of(atom: Atom, arity: int) -> int:
    """Which factor of a left-associated product an atom belongs to.

    Slot i > 0 is embedded under L^(arity-1-i) followed by R, slot 0 under
    L^(arity-1); a first R at depth >= arity-1 is internal to slot 0.
    """
    depth = 0
    a = atom
    while isinstance(a, tuple) and a[0] in ("L", "R"):
        if a[0] == "R":
            return max(0, arity - 1 - depth)
        depth += 1
        a = a[1]
    return 0


def is_multilinear(f: PolyMap, arity: int) -> bool:
    """One atom from each argument slot in every monomial."""
    peel_product(f.dom, arity)  # raises if the domain is not such a product
    for m, _ in f.entries:
        if len(m) != arity:
            return False
        slots = sorted(_slot_of(a, arity) for a in m)
        if slots != list(range(arity)):
            return False
    return True


def corrupted_sigma_instance(**kwargs) -> PcsInstance:
    """Negative control: sigma replaced by the first projection."""

    class CorruptedInstance(PcsInstance):
        name = "pcs-corrupt-sigma"

        def sigma(self, x: Space) -> PolyMap:
            return pm.proj(0, x)

    return CorruptedInstance(**kwargs)


# ---------------------------------------------------------------------------
# Model files


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"bad rational {text!r}: {exc}") from None


class PcsModelFile:
    """Parsed model file: named ground spaces and symbol matrices."""

    def __init__(self):
        self.spaces: dict[str, Ground] = {}
        self.interps: dict[str, list[tuple[tuple[str, ...], str, Fraction]]] = {}


def parse_model_file(text: str) -> PcsModelFile:
    """Parse object and interp blocks.

    object N { web = [e0, e1]; predual = [[1, 1]]; }
    interp f { entry (a0, ..., an) -> b : p/q; ... }

    Entry atoms are dotted paths (L./R. for products, 0./1. for D tags)
    ending in a web atom, one per argument slot.
    """
    import re

    model = PcsModelFile()
    text = re.sub(r"#[^\n]*", "", text)
    pos = 0
    block_re = re.compile(
        r"\s*(object|interp)\s+([A-Za-z_][A-Za-z0-9_]*)\s*\{([^}]*)\}", re.S
    )
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = block_re.match(text, pos)
        if m is None:
            raise ModelError(f"unreadable model text near {text[pos:pos + 30]!r}")
        kind, name, body = m.group(1), m.group(2), m.group(3)
        if kind == "object":
            model.spaces[name] = _parse_object_body(name, body)
        else:
            model.interps[name] = _parse_interp_body(name, body)
        pos = m.end()
    return model


def _parse_object_body(name: str, body: str) -> Ground:
    import re

    web_m = re.search(r"web\s*=\s*\[([^\]]*)\]\s*;", body)
    if web_m is None:
        raise ModelError(f"object {name!r} lacks a web")
    atoms = tuple(a.strip() for a in web_m.group(1).split(",") if a.strip())
    pred_m = re.search(r"predual\s*=\s*\[(.*)\]\s*;", body, re.S)
    if pred_m is None:
        raise ModelError(f"object {name!r} lacks a predual")
    rows = re.findall(r"\[([^\]]*)\]", pred_m.group(1))
    predual = tuple(
        tuple(_parse_rational(c) for c in row.split(",") if c.strip())
        for row in rows
    )
    space = Ground(name, atoms, predual)
    validate_space(space)
    return space


def _parse_interp_body(name: str, body: str):
    import re

    entries = []
    entry_re = re.compile(
        r"entry\s*\(([^)]*)\)\s*->\s*([A-Za-z0-9_.]+)\s*:\s*([0-9/ ]+);"
    )
    rest = body
    for m in entry_re.finditer(body):
        slot_atoms = tuple(a.strip() for a in m.group(1).split(",") if a.strip())
        entries.append((slot_atoms, m.group(2).strip(), _parse_rational(m.group(3))))
        rest = rest.replace(m.group(0), "", 1)
    if rest.strip():
        raise ModelError(f"interp {name!r}: unreadable text {rest.strip()[:40]!r}")
    if not entries:
        raise ModelError(f"interp {name!r} has no entries")
    return entries


def build_symbol_matrix(
    inst: PcsInstance,
    slots: list[Space],
    cod: Space,
    entries: list[tuple[tuple[str, ...], str, Fraction]],
    name: str,
) -> PolyMap:
    """Assemble a multilinear matrix from per-slot entries and validate it."""
    arity = len(slots)
    if arity == 0:
        dom: Space = inst.terminal()
    else:
        from .objects import prodn

        dom = prodn(slots)
    matrix: dict = {}
    slot_webs = [set(web(s)) for s in slots]
    cod_web = set(web(cod))
    for slot_atoms, out_text, coeff in entries:
        if len(slot_atoms) != arity:
            raise ModelError(
                f"interp {name!r}: entry has {len(slot_atoms)} atoms, "
                f"expected {arity}"
            )
        if coeff <= 0:
            raise ModelError(f"interp {name!r}: coefficients must be positive")
        out_atom = atom_from_str(out_text)
        if out_atom not in cod_web:
            raise ModelError(f"interp {name!r}: {out_text!r} not in codomain web")
        mono_atoms = []
        for i, text in enumerate(slot_atoms):
            atom = atom_from_str(text)
            if atom not in slot_webs[i]:
                raise ModelError(
                    f"interp {name!r}: atom {text!r} not in slot {i} web"
                )
            # Embed into the left-associated product: an R tag first for any
            # slot but the leftmost, then L tags out to the root.
            embedded = atom
            if i > 0:
                embedded = tag_prod(1, embedded)
            for _ in range(arity - 1 - i):
                embedded = tag_prod(0, embedded)
            mono_atoms.append(embedded)
        key = (pm.mono(mono_atoms), out_atom)
        if key in matrix:
            raise ModelError(f"interp {name!r}: duplicate entry {key}")
        matrix[key] = coeff
    result = PolyMap(dom, cod, matrix)
    if arity > 0 and not is_multilinear(result, arity):
        raise ModelError(f"interp {name!r} is not multilinear")
    if not inst.certify(result):
        raise ModelError(f"interp {name!r} escapes the codomain on a probe")
    return result
