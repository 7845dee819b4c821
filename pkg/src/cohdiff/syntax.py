"""Syntax and typing of the first-order differential term language.

Types are kept canonical: the D constructor lives on ground leaves only, so
D(A & B) is stored as DA & DB and type equality is structural.  Terms are
variables, pairs, and applications f^w(t0, ..., tn) of a function symbol
decorated with a word w over the argument positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union


class TypeCheckError(Exception):
    pass


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class GroundType:
    """D^depth applied to a ground symbol."""

    depth: int
    symbol: str


@dataclass(frozen=True)
class ProductType:
    left: "Type"
    right: "Type"


Type = Union[GroundType, ProductType]


def ground(symbol: str, depth: int = 0) -> GroundType:
    return GroundType(depth, symbol)


def d_type(a: Type) -> Type:
    """D on types; raises ground depths, distributes over products."""
    if isinstance(a, GroundType):
        return GroundType(a.depth + 1, a.symbol)
    return ProductType(d_type(a.left), d_type(a.right))


def d_type_n(a: Type, n: int) -> Type:
    for _ in range(n):
        a = d_type(a)
    return a


def try_strip_d(a: Type) -> Optional[Type]:
    """Inverse of d_type when every ground leaf has positive depth."""
    if isinstance(a, GroundType):
        return GroundType(a.depth - 1, a.symbol) if a.depth >= 1 else None
    left = try_strip_d(a.left)
    right = try_strip_d(a.right)
    if left is None or right is None:
        return None
    return ProductType(left, right)


def try_strip_d_n(a: Type, n: int) -> Optional[Type]:
    for _ in range(n):
        stripped = try_strip_d(a)
        if stripped is None:
            return None
        a = stripped
    return a


def strip_depth(a: Type) -> int:
    """How many times d_type can be undone."""
    if isinstance(a, GroundType):
        return a.depth
    return min(strip_depth(a.left), strip_depth(a.right))


def type_str(a: Type) -> str:
    if isinstance(a, GroundType):
        return "D " * a.depth + a.symbol
    left = type_str(a.left)
    right = type_str(a.right)
    if isinstance(a.right, ProductType):
        right = f"({right})"
    return f"{left} & {right}"


# ---------------------------------------------------------------------------
# Functions and signatures


@dataclass(frozen=True)
class FunctionType:
    args: tuple[Type, ...]
    result: Type

    def __str__(self) -> str:
        args = ", ".join(type_str(a) for a in self.args)
        return f"({args}) -> {type_str(self.result)}"


@dataclass(frozen=True)
class UserFn:
    name: str


@dataclass(frozen=True)
class DProj:
    """pi_i : DA -> A; the type annotation is optional and inferable."""

    i: int
    ann: Optional[Type] = None


@dataclass(frozen=True)
class ProdProj:
    """pr_i : A & B -> A (resp. B); arity 1, not 2."""

    i: int
    ann: Optional[tuple[Type, Type]] = None


@dataclass(frozen=True)
class DInj:
    """iota_i : A -> DA."""

    i: int
    ann: Optional[Type] = None


@dataclass(frozen=True)
class Theta:
    """theta_n : D^(n+1) A -> DA, the n-fold monad sum."""

    n: int
    ann: Optional[Type] = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("theta requires n >= 0")


Function = Union[UserFn, DProj, ProdProj, DInj, Theta]


class Signature:
    """Function-type assignment for user symbols."""

    def __init__(self, decls: Optional[dict[str, FunctionType]] = None):
        self.decls: dict[str, FunctionType] = dict(decls or {})

    def declare(self, name: str, ftype: FunctionType) -> None:
        self.decls[name] = ftype

    def lookup(self, name: str) -> FunctionType:
        if name not in self.decls:
            raise TypeCheckError(f"unknown function symbol {name!r}")
        return self.decls[name]

    def __contains__(self, name: str) -> bool:
        return name in self.decls


def arity(f: Function, sig: Optional[Signature] = None) -> int:
    if isinstance(f, UserFn):
        if sig is None:
            raise TypeCheckError(f"arity of {f.name!r} needs a signature")
        return len(sig.lookup(f.name).args)
    return 1


def signature_of(f: Function, sig: Optional[Signature] = None) -> FunctionType:
    """The declared function type; built-ins must carry their annotation."""
    if isinstance(f, UserFn):
        if sig is None:
            raise TypeCheckError(f"unknown user symbol {f.name!r}")
        return sig.lookup(f.name)
    if isinstance(f, DProj):
        if f.ann is None:
            raise TypeCheckError("pi projection lacks a type annotation")
        return FunctionType((d_type(f.ann),), f.ann)
    if isinstance(f, DInj):
        if f.ann is None:
            raise TypeCheckError("iota injection lacks a type annotation")
        return FunctionType((f.ann,), d_type(f.ann))
    if isinstance(f, Theta):
        if f.ann is None:
            raise TypeCheckError("theta lacks a type annotation")
        return FunctionType((d_type_n(f.ann, f.n + 1),), d_type(f.ann))
    if isinstance(f, ProdProj):
        if f.ann is None:
            raise TypeCheckError("pr projection lacks a type annotation")
        a, b = f.ann
        return FunctionType((ProductType(a, b),), a if f.i == 0 else b)
    raise TypeCheckError(f"not a function: {f!r}")


def fn_name(f: Function) -> str:
    if isinstance(f, UserFn):
        return f.name
    if isinstance(f, DProj):
        return f"pi{f.i}"
    if isinstance(f, ProdProj):
        return f"pr{f.i}"
    if isinstance(f, DInj):
        return f"iota{f.i}"
    return f"theta_{f.n}"


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Pair:
    t0: "Term"
    t1: "Term"


@dataclass(frozen=True)
class App:
    fn: Function
    word: tuple[int, ...] = ()
    args: tuple["Term", ...] = ()


Term = Union[Var, Pair, App]

Context = tuple[tuple[str, Type], ...]


def word_count(word: tuple[int, ...], letter: int) -> int:
    return sum(1 for x in word if x == letter)


def term_str(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Pair):
        return f"<{term_str(t.t0)}, {term_str(t.t1)}>"
    name = fn_name(t.fn)
    sup = ""
    if t.word:
        sup = "^[" + ",".join(str(i) for i in t.word) + "]"
    args = ", ".join(term_str(a) for a in t.args)
    return f"{name}{sup}({args})"


def term_key(t: Term):
    """Total order on terms; used for canonical multisets and traces."""
    if isinstance(t, Var):
        return (0, t.name)
    if isinstance(t, Pair):
        return (1, term_key(t.t0), term_key(t.t1))
    f = t.fn
    if isinstance(f, DProj):
        fk = (0, f.i)
    elif isinstance(f, ProdProj):
        fk = (1, f.i)
    elif isinstance(f, DInj):
        fk = (2, f.i)
    elif isinstance(f, Theta):
        fk = (3, f.n)
    else:
        fk = (4, f.name)
    return (2, fk, t.word, tuple(term_key(a) for a in t.args))


def context_lookup(ctx: Context, name: str) -> Type:
    for var, ty in ctx:
        if var == name:
            return ty
    raise TypeCheckError(f"unbound variable {name!r}")


def check_context(ctx: Context) -> None:
    names = [v for v, _ in ctx]
    if len(set(names)) != len(names):
        raise TypeCheckError(f"duplicate variable in context: {names}")


def typecheck(sig: Signature, ctx: Context, t: Term) -> Type:
    """The unique type of t in ctx, or a TypeCheckError describing why not."""
    if isinstance(t, Var):
        return context_lookup(ctx, t.name)
    if isinstance(t, Pair):
        return ProductType(typecheck(sig, ctx, t.t0), typecheck(sig, ctx, t.t1))
    return _check_app(sig, ctx, t)


def _expect(actual: Type, expected: Type, what: str) -> None:
    if actual != expected:
        raise TypeCheckError(
            f"{what}: expected {type_str(expected)}, got {type_str(actual)}"
        )


def _check_app(sig: Signature, ctx: Context, t: App) -> Type:
    f = t.fn
    arg_types = [typecheck(sig, ctx, a) for a in t.args]
    if isinstance(f, UserFn):
        ftype = sig.lookup(f.name)
        n = len(ftype.args)
        if len(t.args) != n:
            raise TypeCheckError(
                f"{f.name} expects {n} arguments, got {len(t.args)}"
            )
        for letter in t.word:
            if not 0 <= letter < n:
                raise TypeCheckError(
                    f"word letter {letter} out of range for arity {n}"
                )
        for i, (ai, ti) in enumerate(zip(ftype.args, arg_types)):
            expected = d_type_n(ai, word_count(t.word, i))
            _expect(ti, expected, f"argument {i} of {f.name}")
        return d_type_n(ftype.result, len(t.word))

    # Built-ins all have arity 1; their word is over the single letter 0.
    if len(t.args) != 1:
        raise TypeCheckError(f"{fn_name(f)} expects 1 argument, got {len(t.args)}")
    if any(letter != 0 for letter in t.word):
        raise TypeCheckError(f"word letters of {fn_name(f)} must be 0")
    d = len(t.word)
    ti = arg_types[0]

    if isinstance(f, DProj):
        if f.ann is not None:
            _expect(ti, d_type_n(d_type(f.ann), d), f"argument of {fn_name(f)}")
        stripped = try_strip_d_n(ti, d + 1)
        if stripped is None:
            raise TypeCheckError(
                f"{fn_name(f)} with word depth {d} needs an argument of shape "
                f"D^{d + 1} A, got {type_str(ti)}"
            )
        return d_type_n(stripped, d)
    if isinstance(f, DInj):
        if f.ann is not None:
            _expect(ti, d_type_n(f.ann, d), f"argument of {fn_name(f)}")
        if try_strip_d_n(ti, d) is None:
            raise TypeCheckError(
                f"{fn_name(f)} with word depth {d} needs an argument of shape "
                f"D^{d} A, got {type_str(ti)}"
            )
        return d_type(ti)
    if isinstance(f, Theta):
        if f.ann is not None:
            _expect(
                ti, d_type_n(f.ann, d + f.n + 1), f"argument of {fn_name(f)}"
            )
        stripped = try_strip_d_n(ti, d + f.n + 1)
        if stripped is None:
            raise TypeCheckError(
                f"{fn_name(f)} with word depth {d} needs an argument of shape "
                f"D^{d + f.n + 1} A, got {type_str(ti)}"
            )
        return d_type_n(d_type(stripped), d)
    if isinstance(f, ProdProj):
        if f.ann is not None:
            a, b = f.ann
            _expect(
                ti, d_type_n(ProductType(a, b), d), f"argument of {fn_name(f)}"
            )
        if not isinstance(ti, ProductType):
            raise TypeCheckError(
                f"{fn_name(f)} needs a product argument, got {type_str(ti)}"
            )
        if (
            try_strip_d_n(ti.left, d) is None
            or try_strip_d_n(ti.right, d) is None
        ):
            raise TypeCheckError(
                f"{fn_name(f)} with word depth {d} needs an argument of shape "
                f"D^{d} (A & B), got {type_str(ti)}"
            )
        return ti.left if f.i == 0 else ti.right
    raise TypeCheckError(f"not a function: {f!r}")


# ---------------------------------------------------------------------------
# The syntactic differential


def differentiate(t: Term, x: str) -> Term:
    """The term d t / d x, total on well-formed terms.

    Variables: x goes to itself (now at type DA), others get iota_0.
    Pairs are differentiated componentwise.  An application f^w(...) becomes
    theta_n(f^(w n...1 0)(...)) with every argument differentiated.
    """
    if isinstance(t, Var):
        return t if t.name == x else App(DInj(0), (), (t,))
    if isinstance(t, Pair):
        return Pair(differentiate(t.t0, x), differentiate(t.t1, x))
    if not t.args:
        # Constants: theta_(-1) does not exist, and a closed application is
        # differentiated exactly like a foreign variable.
        return App(DInj(0), (), (t,))
    n = len(t.args) - 1
    new_word = t.word + tuple(range(n, -1, -1))
    new_args = tuple(differentiate(a, x) for a in t.args)
    inner = App(t.fn, new_word, new_args)
    return App(Theta(n), (), (inner,))
