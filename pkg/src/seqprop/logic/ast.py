"""Abstract syntax of the predicate language.

Source positions are carried for error messages but excluded from
equality and hashing, so structurally identical formulas compare equal
(the compiler caches on this).
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Term:
    pos: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class Var(Term):
    name: str = ""


@dataclass(frozen=True)
class Const(Term):
    value: int = 0


@dataclass(frozen=True)
class Add(Term):
    left: Term = None
    right: Term = None


@dataclass(frozen=True)
class Sub(Term):
    left: Term = None
    right: Term = None


@dataclass(frozen=True)
class Mul(Term):
    coef: int = 1
    term: Term = None


@dataclass(frozen=True)
class SeqRef:
    """Occurrence of a sequence symbol applied to an index term."""

    symbol: str
    index: Term
    pos: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class Formula:
    pos: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class Compare(Formula):
    left: Term = None
    rel: str = "="
    right: Term = None


@dataclass(frozen=True)
class SeqCompare(Formula):
    """Equality or disequality between sequence values / output constants.

    Each side is a SeqRef or an int output symbol.
    """

    left: object = None
    rel: str = "="
    right: object = None


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula = None


@dataclass(frozen=True)
class And(Formula):
    left: Formula = None
    right: Formula = None


@dataclass(frozen=True)
class Or(Formula):
    left: Formula = None
    right: Formula = None


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula = None
    right: Formula = None


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula = None
    right: Formula = None


@dataclass(frozen=True)
class Exists(Formula):
    var: str = ""
    body: Formula = None


@dataclass(frozen=True)
class Forall(Formula):
    var: str = ""
    body: Formula = None


@dataclass(frozen=True)
class Call(Formula):
    name: str = ""
    args: tuple = ()


_BINARY = (And, Or, Implies, Iff)


def term_vars(t) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    if isinstance(t, (Add, Sub)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Mul):
        return term_vars(t.term)
    raise TypeError(f"not a term: {t!r}")


def _side_vars(side) -> set[str]:
    return term_vars(side.index) if isinstance(side, SeqRef) else set()


def free_vars(f) -> set[str]:
    if isinstance(f, Compare):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, SeqCompare):
        return _side_vars(f.left) | _side_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.operand)
    if isinstance(f, _BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Call):
        out = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    raise TypeError(f"not a formula: {f!r}")


def subst_term(t, mapping: dict):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, Add):
        return Add(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Sub):
        return Sub(subst_term(t.left, mapping), subst_term(t.right, mapping))
    if isinstance(t, Mul):
        return Mul(t.coef, subst_term(t.term, mapping))
    raise TypeError(f"not a term: {t!r}")


def subst(f, mapping: dict, fresh):
    """Capture-avoiding substitution of terms for free variables."""
    if isinstance(f, Compare):
        return Compare(subst_term(f.left, mapping), f.rel,
                       subst_term(f.right, mapping))
    if isinstance(f, SeqCompare):
        def side(s):
            if isinstance(s, SeqRef):
                return SeqRef(s.symbol, subst_term(s.index, mapping))
            return s
        return SeqCompare(side(f.left), f.rel, side(f.right))
    if isinstance(f, Not):
        return Not(subst(f.operand, mapping, fresh))
    if isinstance(f, _BINARY):
        return type(f)(subst(f.left, mapping, fresh),
                       subst(f.right, mapping, fresh))
    if isinstance(f, (Exists, Forall)):
        mapping = {k: v for k, v in mapping.items() if k != f.var}
        captured = set()
        for t in mapping.values():
            captured |= term_vars(t)
        var, body = f.var, f.body
        if var in captured:
            new = fresh(var)
            body = subst(body, {var: Var(new)}, fresh)
            var = new
        return type(f)(var, subst(body, mapping, fresh))
    if isinstance(f, Call):
        return Call(f.name, tuple(subst_term(a, mapping) for a in f.args))
    raise TypeError(f"not a formula: {f!r}")


def linear_form(t) -> tuple[dict, int]:
    """Flatten a term into (coefficients by variable, constant)."""
    if isinstance(t, Var):
        return {t.name: 1}, 0
    if isinstance(t, Const):
        return {}, t.value
    if isinstance(t, (Add, Sub)):
        lc, lk = linear_form(t.left)
        rc, rk = linear_form(t.right)
        sign = 1 if isinstance(t, Add) else -1
        for v, c in rc.items():
            lc[v] = lc.get(v, 0) + sign * c
        return {v: c for v, c in lc.items() if c}, lk + sign * rk
    if isinstance(t, Mul):
        c0, k0 = linear_form(t.term)
        return {v: t.coef * c for v, c in c0.items() if t.coef * c}, t.coef * k0
    raise TypeError(f"not a term: {t!r}")
