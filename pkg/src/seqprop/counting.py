"""Linear representations of k-regular counting sequences.

A representation is a row vector v, one square matrix per digit, and a
column vector w, all over exact rationals; the value at n is v times the
digit matrices of n times w.  Representations are extracted from
first-occurrence automata over pairs (witness, length), minimized with
exact arithmetic, compared by zero-testing the difference, and used to
verify printed recurrence systems numerically.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import numeration
from .automata import Dfa


class CountingError(ValueError):
    pass


@dataclass(frozen=True)
class LinearRep:
    system: numeration.NumerationSystem
    v: tuple
    mats: tuple          # one dim x dim matrix (tuple of row tuples) per digit
    w: tuple

    @property
    def dim(self) -> int:
        return len(self.v)

    def __post_init__(self):
        if len(self.mats) != self.system.digit_range:
            raise CountingError("one matrix per digit required")
        for m in self.mats:
            if len(m) != self.dim or any(len(row) != self.dim for row in m):
                raise CountingError("matrix dimensions disagree with v")
        if len(self.w) != self.dim:
            raise CountingError("w dimension disagrees with v")

    def is_integral(self) -> bool:
        entries = list(self.v) + list(self.w)
        for m in self.mats:
            for row in m:
                entries.extend(row)
        return all(Fraction(e).denominator == 1 for e in entries)


def _row_times_mat(row, mat):
    dim = len(row)
    return tuple(
        sum(row[i] * mat[i][j] for i in range(dim) if row[i])
        for j in range(dim)
    )


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def eval_rep(rep: LinearRep, n: int):
    """v . mu(digits of n) . w along the canonical representation."""
    if rep.dim == 0:
        return Fraction(0)
    vec = rep.v
    for (d,) in numeration.to_canonical(n, rep.system).digits:
        vec = _row_times_mat(vec, rep.mats[d])
    return Fraction(_dot(vec, rep.w))


def eval_range(rep: LinearRep, bound: int) -> list:
    """Values at 0..bound sharing work across common digit prefixes."""
    if rep.dim == 0:
        return [Fraction(0)] * (bound + 1)
    if not rep.system.msd_first:
        raise CountingError("range evaluation expects an msd-first system")
    use_np = rep.is_integral()
    if use_np:
        mats = [np.array([[int(x) for x in row] for row in m], dtype=np.int64)
                for m in rep.mats]
        w = np.array([int(x) for x in rep.w], dtype=np.int64)
        v = np.array([int(x) for x in rep.v], dtype=np.int64)
        out = [None] * (bound + 1)
        out[0] = Fraction(int(v @ w))
    else:
        mats, w, v = rep.mats, rep.w, rep.v
        out = [None] * (bound + 1)
        out[0] = Fraction(_dot(v, w))
    if bound == 0:
        return out
    # DFS over canonical digit strings; Zeckendorf values evolve as a pair
    stack = []
    if rep.system.kind == numeration.BASE_K:
        k = rep.system.base
        for d in range(1, k):
            if d <= bound:
                stack.append((v @ mats[d] if use_np else _row_times_mat(v, mats[d]), d))
        while stack:
            vec, val = stack.pop()
            out[val] = Fraction(int(vec @ w)) if use_np else Fraction(_dot(vec, w))
            for d in range(k):
                nval = val * k + d
                if nval <= bound:
                    nvec = vec @ mats[d] if use_np else _row_times_mat(vec, mats[d])
                    stack.append((nvec, nval))
    else:
        if 1 <= bound:
            start = v @ mats[1] if use_np else _row_times_mat(v, mats[1])
            stack.append((start, 1, 1, 1))  # vec, A (value), B (shifted), last digit
        while stack:
            vec, a, b, last = stack.pop()
            out[a] = Fraction(int(vec @ w)) if use_np else Fraction(_dot(vec, w))
            for d in range(2):
                if d == 1 and last == 1:
                    continue
                na, nb = a + b + d, a + d
                if na <= bound:
                    nvec = vec @ mats[d] if use_np else _row_times_mat(vec, mats[d])
                    stack.append((nvec, na, nb, d))
    assert all(x is not None for x in out)
    return out


# ---------------------------------------------------------------------------
# extraction from a counting automaton

def _useful_states(dfa: Dfa):
    reach = [False] * dfa.n_states
    reach[dfa.initial] = True
    frontier = [dfa.initial]
    while frontier:
        q = frontier.pop()
        for t in dfa.transitions[q]:
            if not reach[t]:
                reach[t] = True
                frontier.append(t)
    pred = [[] for _ in range(dfa.n_states)]
    for q in range(dfa.n_states):
        for t in dfa.transitions[q]:
            pred[t].append(q)
    co = [False] * dfa.n_states
    frontier = [q for q in dfa.accepting]
    for q in frontier:
        co[q] = True
    while frontier:
        q = frontier.pop()
        for p in pred[q]:
            if not co[p]:
                co[p] = True
                frontier.append(p)
    return [q for q in range(dfa.n_states) if reach[q] and co[q]]


def _find_zero_cycle(n, edges, seeds):
    """A cycle in the zero-digit graph reachable from the seeds, if any."""
    color = {}
    for s in seeds:
        stack = [(s, iter(edges[s]))]
        color[s] = 1
        path = [s]
        while stack:
            q, it = stack[-1]
            advanced = False
            for t in it:
                if color.get(t) == 1:
                    return path[path.index(t):] + [t]
                if t not in color:
                    color[t] = 1
                    path.append(t)
                    stack.append((t, iter(edges[t])))
                    advanced = True
                    break
            if not advanced:
                color[q] = 2
                path.pop()
                stack.pop()
    return None


def rep_from_counting_dfa(dfa: Dfa, system: numeration.NumerationSystem,
                          count_coord: int = 0) -> LinearRep:
    """Representation of n -> |{i : (i, n) accepted}|.

    The automaton must be over pairs, minimized, and accept zero-padded
    encodings.  The initial vector absorbs witness digits read before the
    first digit of n (leading blocks where n's component is 0); if that
    saturation fails to converge the count is infinite and the offending
    cycle is reported.
    """
    if dfa.alphabet.arity != 2:
        raise CountingError("counting automata have arity 2")
    if not system.msd_first:
        raise CountingError("counting uses msd-first systems")
    k = system.digit_range
    if dfa.alphabet.ranges != (k, k):
        raise CountingError("automaton alphabet disagrees with the system")
    useful = _useful_states(dfa)
    if dfa.initial not in useful:
        return zero_rep(system)
    index = {q: i for i, q in enumerate(useful)}
    dim = len(useful)
    zero_sym = dfa.alphabet.index((0, 0))
    if dfa.transitions[dfa.initial][zero_sym] != dfa.initial:
        raise CountingError(
            "initial state is not stable under the zero symbol; "
            "minimize a padding-closed automaton first")

    def symbol(e, d):
        sym = [0, 0]
        sym[count_coord] = e
        sym[1 - count_coord] = d
        return dfa.alphabet.index(tuple(sym))

    mats = []
    for d in range(k):
        m = [[0] * dim for _ in range(dim)]
        for q in useful:
            row = dfa.transitions[q]
            for e in range(k):
                t = row[symbol(e, d)]
                if t in index:
                    m[index[q]][index[t]] += 1
        mats.append(tuple(tuple(Fraction(x) for x in row) for row in m))

    n1 = [[0] * dim for _ in range(dim)]
    n0_edges = [[] for _ in range(dim)]
    for q in useful:
        row = dfa.transitions[q]
        for e in range(k):
            t = row[symbol(e, 0)]
            if t in index:
                if e != 0:
                    n1[index[q]][index[t]] += 1
                else:
                    n0_edges[index[q]].append(index[t])
    n0 = mats[0]

    v0 = [Fraction(0)] * dim
    v0[index[dfa.initial]] = Fraction(1)
    acc = list(v0)
    cur = _row_times_mat(tuple(v0), tuple(tuple(Fraction(x) for x in row) for row in n1))
    steps = 0
    while any(cur):
        acc = [a + c for a, c in zip(acc, cur)]
        cur = _row_times_mat(cur, n0)
        steps += 1
        if steps > dim + 1:
            seeds = [i for i, x in enumerate(cur) if x]
            all_zero_edges = [
                [t for t in range(dim) if n0[s][t]] for s in range(dim)
            ]
            cycle = _find_zero_cycle(dim, all_zero_edges, seeds)
            states = [useful[i] for i in (cycle or seeds)]
            raise CountingError(
                f"count is infinite: witness digits cycle through states {states}")

    w = tuple(Fraction(1) if q in dfa.accepting else Fraction(0) for q in useful)
    return LinearRep(system, tuple(acc), tuple(mats), w)


def zero_rep(system) -> LinearRep:
    return LinearRep(system, (), tuple(() for _ in range(system.digit_range)), ())


# ---------------------------------------------------------------------------
# exact minimization (reachability then observability reduction)

def _reduce_against(vec, basis, pivots):
    """Echelon reduction; returns (residual, coordinates w.r.t. basis)."""
    vec = list(vec)
    coords = [Fraction(0)] * len(basis)
    for bi, (b, p) in enumerate(zip(basis, pivots)):
        if vec[p]:
            c = Fraction(vec[p], b[p])
            coords[bi] = c
            for j in range(len(vec)):
                vec[j] -= c * b[j]
    return vec, coords


def _first_nonzero(vec):
    for i, x in enumerate(vec):
        if x:
            return i
    return None


def _left_reduce(v, mats, w):
    """Basis of the row space spanned by v . mu(x); new rep in that basis."""
    dim = len(v)
    basis, pivots = [], []
    worklist = []
    residual, _ = _reduce_against(v, basis, pivots)
    if _first_nonzero(residual) is not None:
        basis.append(tuple(residual))
        pivots.append(_first_nonzero(residual))
        worklist.append(tuple(residual))
    while worklist:
        b = worklist.pop(0)
        for m in mats:
            cand = _row_times_mat(b, m)
            residual, _ = _reduce_against(cand, basis, pivots)
            p = _first_nonzero(residual)
            if p is not None:
                basis.append(tuple(residual))
                pivots.append(p)
                worklist.append(tuple(residual))
    ndim = len(basis)
    if ndim == 0:
        return (), tuple(() for _ in mats), ()
    new_mats = []
    for m in mats:
        rows = []
        for b in basis:
            img = _row_times_mat(b, m)
            residual, coords = _reduce_against(img, basis, pivots)
            assert _first_nonzero(residual) is None, "row space is not invariant"
            rows.append(tuple(coords))
        new_mats.append(tuple(rows))
    _, vcoords = _reduce_against(v, basis, pivots)
    new_w = tuple(_dot(b, w) for b in basis)
    return tuple(vcoords), tuple(new_mats), new_w


def _transpose(m):
    return tuple(zip(*m)) if m else ()


def minimize_rep(rep: LinearRep) -> LinearRep:
    """Minimal-dimension representation of the same sequence."""
    v, mats, w = _left_reduce(rep.v, rep.mats, rep.w)
    if not v:
        return zero_rep(rep.system)
    # observability reduction = reachability reduction of the transpose
    tv, tmats, tw = _left_reduce(w, tuple(_transpose(m) for m in mats), v)
    if not tv:
        return zero_rep(rep.system)
    return LinearRep(rep.system, tw,
                     tuple(_transpose(m) for m in tmats), tv)


def reps_equal(r1: LinearRep, r2: LinearRep) -> bool:
    """Exact equality of the realized sequences."""
    if r1.system != r2.system:
        raise CountingError("representations live in different systems")
    d1, d2 = r1.dim, r2.dim
    dim = d1 + d2
    v = tuple(r1.v) + tuple(-Fraction(x) for x in r2.v)
    w = tuple(r1.w) + tuple(r2.w)
    mats = []
    for m1, m2 in zip(r1.mats, r2.mats):
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for i in range(d1):
            for j in range(d1):
                m[i][j] = Fraction(m1[i][j])
        for i in range(d2):
            for j in range(d2):
                m[d1 + i][d1 + j] = Fraction(m2[i][j])
        mats.append(tuple(tuple(row) for row in m))
    diff = LinearRep(r1.system, v, tuple(mats), w)
    return minimize_rep(diff).dim == 0


# ---------------------------------------------------------------------------
# recurrence relations

@dataclass(frozen=True)
class RecurrenceRelation:
    """lhs f(a n + b) equals a rational combination of f(a_i n + b_i)."""

    name: str
    lhs: tuple[int, int]
    terms: tuple  # of (Fraction coefficient, a, b)

    def __str__(self):
        def arg(a, b):
            s = f"{a}n" if a != 1 else "n"
            if b:
                s += f"+{b}"
            return s
        rhs = ""
        for c, a, b in self.terms:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{mag} "
            term = f"{coef}{self.name}({arg(a, b)})"
            rhs = f"{rhs} {sign} {term}" if rhs else \
                (f"-{term}" if sign == "-" else term)
        return f"{self.name}({arg(*self.lhs)}) = {rhs or '0'}"


_ARG_RE = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?n\s*(?:\+\s*(\d+))?\s*$|^\s*(\d+)\s*$")
_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?"
    r"(?P<name>[A-Za-z]\w*)\s*\(\s*(?P<arg>[^)]*)\)")


def _parse_arg(text: str):
    m = _ARG_RE.match(text)
    if not m:
        raise CountingError(f"cannot parse argument {text!r}")
    if m.group(3) is not None:
        return 0, int(m.group(3))
    a = int(m.group(1)) if m.group(1) else 1
    b = int(m.group(2)) if m.group(2) else 0
    return a, b


def parse_relation(text: str) -> RecurrenceRelation:
    """Parse e.g. ``f(8n+4) = 2 f(2n+1) - 5/2 f(4n+1) + f(8n+2)``."""
    lhs_text, _, rhs_text = text.partition("=")
    m = _TERM_RE.match(lhs_text)
    if not m or m.group("sign") or m.group("coef"):
        raise CountingError(f"cannot parse left side of {text!r}")
    name = m.group("name")
    lhs = _parse_arg(m.group("arg"))
    rhs_text = rhs_text.strip()
    terms = []
    if rhs_text != "0":
        pos = 0
        while pos < len(rhs_text):
            m = _TERM_RE.match(rhs_text, pos)
            if not m:
                raise CountingError(f"cannot parse right side of {text!r}")
            if m.group("name") != name:
                raise CountingError(f"mixed function symbols in {text!r}")
            coef = Fraction(m.group("coef") or 1)
            if m.group("sign") == "-":
                coef = -coef
            terms.append((coef,) + _parse_arg(m.group("arg")))
            pos = m.end()
        if rhs_text[pos:].strip():
            raise CountingError(f"trailing input in {text!r}")
    return RecurrenceRelation(name, lhs, tuple(terms))


def load_relations(text: str) -> list[RecurrenceRelation]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_relation(line))
    return out


def verify_relation(rel: RecurrenceRelation, rep: LinearRep, bound: int):
    """Check the relation for all n <= bound; returns (ok, first failure)."""
    sizes = [rel.lhs[0] * bound + rel.lhs[1]]
    sizes += [a * bound + b for _, a, b in rel.terms]
    values = eval_range(rep, max(sizes))
    for n in range(bound + 1):
        lhs = values[rel.lhs[0] * n + rel.lhs[1]]
        rhs = sum((c * values[a * n + b] for c, a, b in rel.terms),
                  start=Fraction(0))
        if lhs != rhs:
            return False, (n, lhs, rhs)
    return True, None


# ---------------------------------------------------------------------------
# piecewise closed form for the closed-factor counts

_PIECES = (
    (15, 18, lambda n, p: 16 * p),
    (18, 19, lambda n, p: 2 * n - 20 * p - 2),
    (19, 20, lambda n, p: 56 * p - 2 * n + 2),
    (20, 22, lambda n, p: 4 * n - 64 * p - 4),
    (22, 24, lambda n, p: 112 * p - 4 * n + 4),
    (24, 28, lambda n, p: 16 * p),
    (28, 30, lambda n, p: 8 * n - 208 * p - 8),
)


def piecewise_value(n: int):
    """The seven-case closed form, defined for n >= 8 with k >= -1.

    Returns (value, k, case index); raises if no window or several
    windows cover n.
    """
    if n < 8:
        raise CountingError("the closed form starts at n = 8")
    hits = []
    p = Fraction(1, 2)  # 2^k for k = -1
    k = -1
    while 15 * p < n:
        for idx, (lo, hi, fn) in enumerate(_PIECES):
            if lo * p < n <= hi * p:
                hits.append((fn(n, p), k, idx))
        p *= 2
        k += 1
    if len(hits) != 1:
        raise CountingError(f"n={n} lies in {len(hits)} case windows")
    value, k, idx = hits[0]
    if Fraction(value).denominator != 1:
        raise CountingError(f"non-integral case value at n={n}")
    return Fraction(value), k, idx


@dataclass(frozen=True)
class PiecewiseReport:
    ok: bool
    mismatches: tuple
    coverage_errors: tuple


def verify_piecewise_formula(rep: LinearRep, bound: int) -> PiecewiseReport:
    """Compare the closed form with the representation on 8..bound."""
    if bound < 8:
        raise CountingError("bound must be at least 8")
    values = eval_range(rep, bound)
    mismatches = []
    coverage = []
    for n in range(8, bound + 1):
        try:
            expect, _, _ = piecewise_value(n)
        except CountingError as e:
            coverage.append((n, str(e)))
            continue
        if values[n] != expect:
            mismatches.append((n, values[n], expect))
    return PiecewiseReport(not mismatches and not coverage,
                           tuple(mismatches), tuple(coverage))


# ---------------------------------------------------------------------------
# serialization

def _system_obj(system):
    return {"kind": system.kind, "base": system.base,
            "msd_first": system.msd_first}


def _system_from_obj(obj):
    return numeration.NumerationSystem(obj["kind"], obj["base"],
                                       obj["msd_first"])


def rep_to_json_obj(rep: LinearRep) -> dict:
    return {
        "system": _system_obj(rep.system),
        "dim": rep.dim,
        "v": [str(x) for x in rep.v],
        "mats": [[[str(x) for x in row] for row in m] for m in rep.mats],
        "w": [str(x) for x in rep.w],
    }


def rep_from_json_obj(obj) -> LinearRep:
    system = _system_from_obj(obj["system"])
    v = tuple(Fraction(x) for x in obj["v"])
    mats = tuple(
        tuple(tuple(Fraction(x) for x in row) for row in m)
        for m in obj["mats"])
    w = tuple(Fraction(x) for x in obj["w"])
    return LinearRep(system, v, mats, w)


def rep_to_json(rep: LinearRep) -> str:
    return json.dumps(rep_to_json_obj(rep), indent=1)


def rep_from_json(text: str) -> LinearRep:
    return rep_from_json_obj(json.loads(text))


def rep_to_text(rep: LinearRep) -> str:
    lines = [f"linear-rep {rep.system.describe()} dim {rep.dim}"]
    lines.append("v " + " ".join(str(x) for x in rep.v))
    for d, m in enumerate(rep.mats):
        lines.append(f"matrix {d}")
        for row in m:
            lines.append("  " + " ".join(str(x) for x in row))
    lines.append("w " + " ".join(str(x) for x in rep.w))
    return "\n".join(lines) + "\n"


def rep_from_text(text: str) -> LinearRep:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    desc, dim = " ".join(head[1:-2]), int(head[-1])
    msd = not desc.endswith("lsd")
    if desc.startswith("base-"):
        system = numeration.base(int(desc.split()[0][5:]), msd)
    else:
        system = numeration.zeckendorf(msd)
    v = tuple(Fraction(x) for x in lines[1].split()[1:])
    mats = []
    i = 2
    while lines[i].startswith("matrix"):
        rows = []
        i += 1
        while i < len(lines) and not lines[i].startswith(("matrix", "w ")):
            rows.append(tuple(Fraction(x) for x in lines[i].split()))
            i += 1
        mats.append(tuple(rows))
    w = tuple(Fraction(x) for x in lines[i].split()[1:])
    if dim != len(v):
        raise CountingError("declared dimension disagrees with v")
    return LinearRep(system, v, tuple(mats), w)
