"""Interpretation of the term language into a concrete instance.

Ground symbols go to objects, user function symbols to multilinear
morphisms, and a decorated application f^w(...) to the iterated partial
derivative D_w of the symbol's interpretation composed with the pairing of
the argument interpretations.  The two executable theorems live here: the
syntactic differential matches the model's partial derivative, and the
interpretation of a term is invariant along reduction, with every multiset
along the way summable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ccdc import Instance
from .objects import Space, prodn
from .pcs import is_multilinear
from .polymap import PolyMap
from .rewrite import (
    DEFAULT_FUEL,
    FuelExhausted,
    TermMultiset,
    normalize,
)
from .syntax import (
    App,
    Context,
    DInj,
    DProj,
    GroundType,
    Pair,
    ProdProj,
    ProductType,
    Signature,
    Term,
    Theta,
    Type,
    TypeCheckError,
    UserFn,
    Var,
    check_context,
    d_type,
    differentiate,
    term_str,
    try_strip_d_n,
    type_str,
    typecheck,
)


class ModelValidationError(Exception):
    pass


@dataclass
class Model:
    """An instance with ground-object and symbol assignments."""

    inst: Instance
    grounds: dict[str, Space]
    sig: Signature
    symbols: dict[str, PolyMap]
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for name, ftype in self.sig.decls.items():
            if name not in self.symbols:
                raise ModelValidationError(f"symbol {name!r} has no matrix")
            matrix = self.symbols[name]
            slots = [interp_type(self, a) for a in ftype.args]
            expected_dom = prodn(slots) if slots else self.inst.terminal()
            if matrix.dom != expected_dom:
                raise ModelValidationError(
                    f"symbol {name!r}: domain does not match its type"
                )
            if matrix.cod != interp_type(self, ftype.result):
                raise ModelValidationError(
                    f"symbol {name!r}: codomain does not match its type"
                )
            if slots and not is_multilinear(matrix, len(slots)):
                raise ModelValidationError(
                    f"symbol {name!r} must be interpreted multilinearly"
                )


def interp_type(model: Model, a: Type) -> Space:
    if isinstance(a, GroundType):
        if a.symbol not in model.grounds:
            raise ModelValidationError(f"ground symbol {a.symbol!r} unassigned")
        space = model.grounds[a.symbol]
        for _ in range(a.depth):
            space = model.inst.d_object(space)
        return space
    return model.inst.product(
        interp_type(model, a.left), interp_type(model, a.right)
    )


def interp_ctx(model: Model, ctx: Context) -> Space:
    if not ctx:
        return model.inst.terminal()
    return prodn([interp_type(model, ty) for _, ty in ctx])


def _ctx_slots(model: Model, ctx: Context) -> list[Space]:
    return [interp_type(model, ty) for _, ty in ctx]


def interp_term(model: Model, ctx: Context, t: Term) -> PolyMap:
    """The morphism interp(ctx) -> interp(type of t)."""
    check_context(ctx)
    key = (ctx, t)
    if key in model._cache:
        return model._cache[key]
    result = _interp(model, ctx, t)
    model._cache[key] = result
    return result


def _interp(model: Model, ctx: Context, t: Term) -> PolyMap:
    inst = model.inst
    if isinstance(t, Var):
        slots = _ctx_slots(model, ctx)
        for i, (name, _) in enumerate(ctx):
            if name == t.name:
                return inst.var_proj(slots, i)
        raise TypeCheckError(f"unbound variable {t.name!r}")
    if isinstance(t, Pair):
        return inst.prod_pair(
            interp_term(model, ctx, t.t0), interp_term(model, ctx, t.t1)
        )
    return _interp_app(model, ctx, t)


def _strip_or_fail(ty: Type, n: int, what: str) -> Type:
    stripped = try_strip_d_n(ty, n)
    if stripped is None:
        raise TypeCheckError(f"{what}: cannot strip D^{n} from {type_str(ty)}")
    return stripped


def _interp_app(model: Model, ctx: Context, t: App) -> PolyMap:
    inst = model.inst
    f = t.fn
    arg_maps = [interp_term(model, ctx, a) for a in t.args]
    arg_types = [typecheck(model.sig, ctx, a) for a in t.args]
    d = len(t.word)

    if isinstance(f, UserFn):
        base = model.symbols.get(f.name)
        if base is None:
            raise ModelValidationError(f"symbol {f.name!r} unassigned")
        if not t.args:
            return inst.compose(base, inst.terminal_map(interp_ctx(model, ctx)))
        ftype = model.sig.lookup(f.name)
        slots = [interp_type(model, a) for a in ftype.args]
        lifted = inst.partial_derivative_word(base, slots, t.word)
        return inst.compose(lifted, inst.prod_pair_n(arg_maps))

    # Built-ins: infer the object parameter from the argument type, then
    # lift with D^d, which is D_w for an arity-1 symbol with |w| = d.
    ti = arg_types[0]
    if isinstance(f, DProj):
        a = _strip_or_fail(ti, d + 1, "pi")
        base = inst.proj(f.i, interp_type(model, a))
    elif isinstance(f, DInj):
        a = _strip_or_fail(ti, d, "iota")
        base = inst.inj(f.i, interp_type(model, a))
    elif isinstance(f, Theta):
        a = _strip_or_fail(ti, d + f.n + 1, "theta")
        base = inst.theta_pow(interp_type(model, a), f.n)
    elif isinstance(f, ProdProj):
        if not isinstance(ti, ProductType):
            raise TypeCheckError(f"pr applied to non-product {type_str(ti)}")
        a = _strip_or_fail(ti.left, d, "pr")
        b = _strip_or_fail(ti.right, d, "pr")
        base = inst.prod_proj(
            f.i, interp_type(model, a), interp_type(model, b)
        )
    else:
        raise TypeCheckError(f"not a function: {f!r}")
    return inst.compose(inst.d_morphism_n(base, d), arg_maps[0])


def interp_multiset(
    model: Model,
    ctx: Context,
    ms: TermMultiset,
    ty: Type,
    expected: Optional[PolyMap] = None,
) -> Optional[PolyMap]:
    """Sum of member interpretations when summable; None otherwise."""
    for member in ms.terms():
        actual = typecheck(model.sig, ctx, member)
        if actual != ty:
            raise TypeCheckError(
                f"multiset member {term_str(member)} has type "
                f"{type_str(actual)}, expected {type_str(ty)}"
            )
    maps = [interp_term(model, ctx, member) for member in ms.terms()]
    return model.inst.family_sum(
        maps, interp_ctx(model, ctx), interp_type(model, ty), expected
    )


@dataclass
class TheoremVerdict:
    name: str
    holds: bool
    term: str
    detail: str = ""

    def render(self) -> str:
        verdict = "HOLDS" if self.holds else "VIOLATED"
        line = f"THEOREM {self.name} {verdict} term={self.term}"
        if self.detail and not self.holds:
            line += f"\n  {self.detail}"
        return line


def check_diff_theorem(model: Model, ctx: Context, t: Term, x: str) -> TheoremVerdict:
    """interp(dt/dx) must equal the partial derivative at x's slot."""
    name = "differential"
    printed = term_str(t)
    slot = next((i for i, (v, _) in enumerate(ctx) if v == x), None)
    if slot is None:
        raise TypeCheckError(f"variable {x!r} not in context")
    typecheck(model.sig, ctx, t)
    dctx = tuple(
        (v, d_type(ty) if v == x else ty) for v, ty in ctx
    )
    lhs = interp_term(model, dctx, differentiate(t, x))
    base = interp_term(model, ctx, t)
    slots = _ctx_slots(model, ctx)
    rhs = model.inst.partial_derivative(base, slots, slot)
    if lhs == rhs:
        return TheoremVerdict(name, True, printed)
    return TheoremVerdict(
        name,
        False,
        printed,
        f"lhs {lhs.render(limit=8)}\nrhs {rhs.render(limit=8)}",
    )


@dataclass
class InvarianceVerdict:
    name: str
    holds: bool
    term: str
    steps: int
    fuel_exhausted: bool = False
    detail: str = ""

    def render(self) -> str:
        verdict = "HOLDS" if self.holds else "VIOLATED"
        line = f"THEOREM {self.name} {verdict} term={self.term}"
        if self.fuel_exhausted:
            line += " (fuel exhausted)"
        if self.detail and not self.holds:
            line += f"\n  {self.detail}"
        return line


def check_invariance(
    model: Model, ctx: Context, t: Term, max_steps: int = DEFAULT_FUEL
) -> InvarianceVerdict:
    """Along the whole trace every multiset is summable with interp(t)."""
    name = "semantic-invariance"
    printed = term_str(t)
    ty = typecheck(model.sig, ctx, t)
    base = interp_term(model, ctx, t)
    fuel_exhausted = False
    try:
        _, trace = normalize(t, max_steps)
        snapshots = [ms for _, _, ms in trace.steps]
    except FuelExhausted as exc:
        fuel_exhausted = True
        snapshots = [ms for _, _, ms in exc.trace.steps]
    for k, ms in enumerate(snapshots, start=1):
        total = interp_multiset(model, ctx, ms, ty, expected=base)
        if total is None:
            return InvarianceVerdict(
                name, False, printed, k, fuel_exhausted,
                f"step {k}: multiset {ms.render()} is not summable",
            )
        if total != base:
            return InvarianceVerdict(
                name, False, printed, k, fuel_exhausted,
                f"step {k}: interpretation changed at {ms.render()}",
            )
    return InvarianceVerdict(name, True, printed, len(snapshots), fuel_exhausted)
