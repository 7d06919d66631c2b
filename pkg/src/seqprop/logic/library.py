"""Named predicate macros and the shipped standard library."""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from .ast import Call, Exists, Forall, Formula, free_vars, subst, term_vars
from .parser import ParseError, parse


class LibraryError(ValueError):
    pass


class PredicateLibrary:
    """Mapping from macro names to (parameter list, body formula)."""

    def __init__(self):
        self._defs: dict[str, tuple[tuple[str, ...], Formula]] = {}

    def define(self, name: str, params, body: Formula):
        params = tuple(params)
        if len(set(params)) != len(params):
            raise LibraryError(f"{name}: duplicate parameters")
        unbound = free_vars(body) - set(params)
        if unbound:
            raise LibraryError(
                f"{name}: unbound variables {', '.join(sorted(unbound))}")
        self._defs[name] = (params, body)

    def get(self, name: str):
        if name not in self._defs:
            raise LibraryError(f"unknown predicate {name!r}")
        return self._defs[name]

    def names(self):
        return list(self._defs)

    def __contains__(self, name):
        return name in self._defs


_DEF_RE = re.compile(r"^\s*def\s+(\w+)\s*\(([^)]*)\)\s*:=\s*(.*)$", re.DOTALL)


def parse_library(text: str) -> PredicateLibrary:
    """Parse ``def Name(p1,...,pk) := formula;`` entries; ``#`` comments."""
    text = re.sub(r"#[^\n]*", "", text)
    lib = PredicateLibrary()
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        m = _DEF_RE.match(chunk)
        if not m:
            raise LibraryError(f"malformed entry: {chunk.strip()[:60]!r}")
        name, params, body = m.groups()
        params = tuple(p.strip() for p in params.split(",") if p.strip())
        try:
            lib.define(name, params, parse(body))
        except ParseError as e:
            raise LibraryError(f"in {name}: {e}") from e
    return lib


@lru_cache(maxsize=None)
def stdlib() -> PredicateLibrary:
    """The shipped predicate library."""
    text = resources.files("seqprop.data").joinpath("paper.prd").read_text()
    return parse_library(text)


class _Fresh:
    def __init__(self, used):
        self.used = set(used)

    def __call__(self, base: str) -> str:
        name = base + "'"
        while name in self.used:
            name += "'"
        self.used.add(name)
        return name


def _all_names(f) -> set[str]:
    """Free and bound variable names occurring anywhere in a formula."""
    from .ast import And, Iff, Implies, Not, Or
    if isinstance(f, (Exists, Forall)):
        return {f.var} | _all_names(f.body)
    if isinstance(f, Not):
        return _all_names(f.operand)
    if isinstance(f, (And, Or, Implies, Iff)):
        return _all_names(f.left) | _all_names(f.right)
    return free_vars(f)


def expand(f, library: PredicateLibrary | None, _stack=()):
    """Replace macro calls by their bodies, capture-avoidingly."""
    from .ast import And, Iff, Implies, Not, Or
    if isinstance(f, Call):
        if library is None:
            raise LibraryError(f"no library available for {f.name!r}")
        if f.name in _stack:
            chain = " -> ".join(_stack + (f.name,))
            raise LibraryError(f"recursive macros: {chain}")
        params, body = library.get(f.name)
        if len(params) != len(f.args):
            raise LibraryError(
                f"{f.name} takes {len(params)} arguments, got {len(f.args)}")
        body = expand(body, library, _stack + (f.name,))
        arg_vars = set()
        for a in f.args:
            arg_vars |= term_vars(a)
        fresh = _Fresh(arg_vars | set(params) | _all_names(body))
        return subst(body, dict(zip(params, f.args)), fresh)
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, expand(f.body, library, _stack))
    if isinstance(f, Not):
        return Not(expand(f.operand, library, _stack))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(expand(f.left, library, _stack),
                       expand(f.right, library, _stack))
    return f
