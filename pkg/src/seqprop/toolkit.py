"""Shared glue between the library and the CLI.

Counting predicates, accept sets, crosscheck sweeps: the pieces the CLI
commands and the acceptance suite both drive.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import counting, numeration, oracle, sequences
from .automata import trim_state_count
from .logic import CompiledFormula, make_compiler

COUNT_PREDICATES = {
    "closed": "$Closed(i,n) & ~$Occurs(i, 0, n, i + n - 1)",
    "privileged": "$Priv(i,n) & ~$Occurs(i, 0, n, i + n - 1)",
    "privileged-palindrome":
        "$Priv(i,n) & $Pal(i,n) & ~$Occurs(i, 0, n, i + n - 1)",
}

_REP_CACHE: dict = {}


def counting_rep(sequence: str, property_name: str,
                 minimized: bool = False) -> counting.LinearRep:
    """Linear representation counting distinct factors with the property."""
    key = (sequence, property_name, minimized)
    if key in _REP_CACHE:
        return _REP_CACHE[key]
    if property_name not in COUNT_PREDICATES:
        raise ValueError(f"no counting predicate for {property_name!r}; "
                         f"known: {', '.join(COUNT_PREDICATES)}")
    if minimized:
        rep = counting.minimize_rep(counting_rep(sequence, property_name))
    else:
        compiler = make_compiler(sequence)
        compiled = compiler.compile(COUNT_PREDICATES[property_name])
        if compiled.variables != ("i", "n"):
            raise RuntimeError("counting predicate must be over (i, n)")
        rep = counting.rep_from_counting_dfa(compiled.dfa, compiler.system, 0)
    _REP_CACHE[key] = rep
    return rep


@dataclass(frozen=True)
class AcceptSet:
    compiled: CompiledFormula
    values: tuple
    state_count: int          # without the dead sink, as usually reported
    total_states: int


def accept_set(sequence: str, formula: str, bound: int,
               msd_first: bool = True) -> AcceptSet:
    compiler = make_compiler(sequence, msd_first=msd_first)
    compiled = compiler.compile(formula)
    if len(compiled.variables) != 1:
        raise ValueError(
            f"accept-set needs exactly one free variable, got "
            f"{', '.join(compiled.variables) or 'none'}")
    values = tuple(compiled.enumerate(bound))
    return AcceptSet(compiled, values, trim_state_count(compiled.dfa),
                     compiled.dfa.n_states)


def _window(w, i, n):
    return w[i:i + n]


def _maxpal_oracle(sequence):
    mp = oracle.stable_maximal_palindromes(sequence, 64)

    def check(w, i, n):
        return _window(w, i, n) in mp
    return check


# name -> (formula, argument count, oracle verdict builder)
CROSSCHECK_PREDICATES = {
    "Pal": ("$Pal(i,n)", 2, lambda s: lambda w, i, n: oracle.is_palindrome(_window(w, i, n))),
    "Closed": ("$Closed(i,n)", 2, lambda s: lambda w, i, n: oracle.is_closed(_window(w, i, n))),
    "Rich": ("$Rich(i,n)", 2, lambda s: lambda w, i, n: oracle.is_rich(_window(w, i, n))),
    "Priv": ("$Priv(i,n)", 2, lambda s: lambda w, i, n: oracle.is_privileged(_window(w, i, n))),
    "Priv2": ("$Priv2(i,n)", 2, lambda s: lambda w, i, n: oracle.is_privileged(_window(w, i, n))),
    "Trap": ("$Trap(j,n)", 2, lambda s: lambda w, j, n: oracle.is_trapezoidal_by_rk(_window(w, j, n))),
    "Unbal": ("$Unbal(i,n)", 2, lambda s: lambda w, i, n: not oracle.is_balanced(_window(w, i, n))),
    "MaxPal": ("$MaxPal(i,n)", 2, _maxpal_oracle),
    "FactorEq": ("$FactorEq(i,j,n)", 3,
                 lambda s: lambda w, i, j, n: w[i:i + n] == w[j:j + n]),
    "Border": ("$Border(i,m,n)", 3,
               lambda s: lambda w, i, m, n: 1 <= m <= n and w[i:i + m] == w[i + n - m:i + n]),
    "Occurs": ("$Occurs(i,j,m,n)", 4,
               lambda s: lambda w, i, j, m, n: m <= n and w[i:i + m] in w[j:j + n]),
}


def _sweep_tuples(name: str, bound: int):
    """Argument tuples whose windows all fit inside the first ``bound``."""
    if name in ("FactorEq",):
        for n in range(bound + 1):
            for i in range(bound - n + 1):
                for j in range(bound - n + 1):
                    yield (i, j, n)
    elif name == "Border":
        for n in range(bound + 1):
            for i in range(bound - n + 1):
                for m in range(bound + 1):
                    yield (i, m, n)
    elif name == "Occurs":
        for n in range(bound + 1):
            for m in range(n + 1):
                for i in range(bound - m + 1):
                    for j in range(bound - n + 1):
                        yield (i, j, m, n)
    else:
        for n in range(bound + 1):
            for i in range(bound - n + 1):
                yield (i, n)


DEFAULT_CROSSCHECK_BOUNDS = {2: 128, 3: 48, 4: 24}


@dataclass(frozen=True)
class CrosscheckResult:
    sequence: str
    predicate: str
    bound: int
    checked: int
    mismatches: tuple

    @property
    def ok(self) -> bool:
        return not self.mismatches


def crosscheck(sequence: str, predicate: str, bound: int | None = None,
               msd_first: bool = True, limit: int = 20) -> CrosscheckResult:
    """Exhaustive engine-vs-oracle comparison on all windows in range."""
    if predicate not in CROSSCHECK_PREDICATES:
        raise ValueError(f"unknown predicate {predicate!r}; known: "
                         f"{', '.join(CROSSCHECK_PREDICATES)}")
    formula, nargs, make_checker = CROSSCHECK_PREDICATES[predicate]
    if bound is None:
        bound = DEFAULT_CROSSCHECK_BOUNDS[nargs]
        if sequence == "fibonacci" and nargs == 2:
            bound = 96
    compiled = make_compiler(sequence, msd_first=msd_first).compile(formula)
    word = oracle.sequence_prefix(sequence, 2 * bound + 4)
    checker = make_checker(sequence)
    mism = []
    checked = 0
    for args in _sweep_tuples(predicate, bound):
        checked += 1
        engine = compiled.accepts(args)
        truth = checker(word, *args)
        if engine != truth:
            mism.append((args, engine, truth))
            if len(mism) >= limit:
                break
    return CrosscheckResult(sequence, predicate, bound, checked, tuple(mism))
