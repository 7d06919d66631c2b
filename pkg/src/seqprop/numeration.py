"""Numeration systems and the arithmetic automata built over them.

Base-k (msd- or lsd-first) and Zeckendorf representations are supported.
Canonical representations carry no leading zeros (msd) / trailing zeros
(lsd); the representation of 0 is the empty string.  Automata accept any
zero-padded variant of the canonical form, which keeps tuple padding
uniform.

All arithmetic automata are constructed msd-first from a running-deficit
state and obtained for lsd systems by the reversal construction.  For
base k the deficit after a prefix is an integer that evolves as
``V' = k*V + e``; for Zeckendorf it is a pair (P, Q) tracking the prefix
value under the current and once-shifted Fibonacci weights, evolving as
``(P, Q) -> (P + Q + e, P + e)``.  States whose deficit provably cannot
reach the target relation again collapse into sinks, which keeps the
construction finite.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Alphabet, Dfa, full_dfa, minimize, product, reverse_dfa

BASE_K = "base-k"
ZECKENDORF = "zeckendorf"


@dataclass(frozen=True)
class NumerationSystem:
    kind: str
    base: int | None = None
    msd_first: bool = True

    def __post_init__(self):
        if self.kind == BASE_K:
            if self.base is None or self.base < 2:
                raise ValueError("base-k needs base >= 2")
        elif self.kind == ZECKENDORF:
            if self.base is not None:
                raise ValueError("zeckendorf carries no base")
        else:
            raise ValueError(f"unknown numeration kind {self.kind!r}")

    @property
    def digit_range(self) -> int:
        return self.base if self.kind == BASE_K else 2

    def describe(self) -> str:
        order = "msd" if self.msd_first else "lsd"
        if self.kind == BASE_K:
            return f"base-{self.base} {order}"
        return f"zeckendorf {order}"


def base(k: int, msd_first: bool = True) -> NumerationSystem:
    return NumerationSystem(BASE_K, k, msd_first)


def zeckendorf(msd_first: bool = True) -> NumerationSystem:
    return NumerationSystem(ZECKENDORF, None, msd_first)


@dataclass(frozen=True)
class DigitString:
    """Aligned tuple representation: one digit tuple per position."""

    system: NumerationSystem
    arity: int
    digits: tuple[tuple[int, ...], ...]

    def __str__(self):
        if self.arity == 1:
            return "".join(str(d[0]) for d in self.digits)
        return "".join("[" + ",".join(str(x) for x in d) + "]" for d in self.digits)


def _fib_weights(length: int) -> list[int]:
    """Zeckendorf position weights 1, 2, 3, 5, ... lsd-to-msd."""
    w = []
    a, b = 1, 2
    for _ in range(length):
        w.append(a)
        a, b = b, a + b
    return w


def _canonical_digits_msd(n: int, system: NumerationSystem) -> tuple[int, ...]:
    if n < 0:
        raise ValueError("naturals only")
    if n == 0:
        return ()
    if system.kind == BASE_K:
        k = system.base
        digits = []
        while n:
            digits.append(n % k)
            n //= k
        return tuple(reversed(digits))
    weights = [1, 2]
    while weights[-1] <= n:
        weights.append(weights[-1] + weights[-2])
    digits = []
    rem = n
    for w in reversed(weights):
        if w <= rem:
            digits.append(1)
            rem -= w
        elif digits:
            digits.append(0)
    assert rem == 0
    return tuple(digits)


def to_canonical(n: int, system: NumerationSystem) -> DigitString:
    """Canonical arity-1 representation of a natural number."""
    msd = _canonical_digits_msd(n, system)
    digits = msd if system.msd_first else tuple(reversed(msd))
    return DigitString(system, 1, tuple((d,) for d in digits))


def from_digits(arg, system: NumerationSystem | None = None) -> int:
    """Value of an arity-1 digit string; padding zeros are permitted."""
    if isinstance(arg, DigitString):
        if arg.arity != 1:
            raise ValueError("from_digits needs an arity-1 string")
        system = arg.system
        seq = [d[0] for d in arg.digits]
    else:
        if system is None:
            raise ValueError("a NumerationSystem is required")
        seq = [d[0] if isinstance(d, tuple) else d for d in arg]
    msd = seq if system.msd_first else list(reversed(seq))
    for d in msd:
        if not 0 <= d < system.digit_range:
            raise ValueError(f"digit {d} invalid for {system.describe()}")
    if system.kind == BASE_K:
        value = 0
        for d in msd:
            value = value * system.base + d
        return value
    for a, b in zip(msd, msd[1:]):
        if a == 1 and b == 1:
            raise ValueError("adjacent ones are not a valid Zeckendorf string")
    weights = _fib_weights(len(msd))
    return sum(d * w for d, w in zip(reversed(msd), weights))


def encode_tuple(values, system: NumerationSystem) -> DigitString:
    """Componentwise canonical representations padded to equal length."""
    values = tuple(values)
    if not values:
        raise ValueError("arity must be >= 1")
    comps = [_canonical_digits_msd(v, system) for v in values]
    width = max((len(c) for c in comps), default=0)
    padded = [(0,) * (width - len(c)) + c for c in comps]
    columns = tuple(zip(*padded)) if width else ()
    if not system.msd_first:
        columns = tuple(reversed(columns))
    return DigitString(system, len(values), columns)


def decode_tuple(digits, arity: int, system: NumerationSystem) -> tuple[int, ...]:
    """Inverse of encode_tuple on (possibly padded) aligned strings."""
    cols = list(digits)
    comps = [[col[i] for col in cols] for i in range(arity)]
    return tuple(from_digits(c, system) for c in comps)


# ---------------------------------------------------------------------------
# validity

def validity_automaton(system: NumerationSystem, arity: int) -> Dfa:
    """Accepts exactly the zero-padded canonical representations."""
    alphabet = Alphabet((system.digit_range,) * arity)
    if system.kind == BASE_K:
        return full_dfa(alphabet)
    # per component: no adjacent ones, in either reading order
    states = {(0,) * arity: 0}
    order = [(0,) * arity]
    trans = []
    sink = None
    rows: list[list[int]] = []
    symbols = alphabet.symbols()
    i = 0
    while i < len(order):
        prev = order[i]
        row = []
        for sym in symbols:
            if prev == "sink":
                row.append(states["sink"])
                continue
            if any(p == 1 and d == 1 for p, d in zip(prev, sym)):
                nxt = "sink"
            else:
                nxt = sym
            j = states.get(nxt)
            if j is None:
                j = len(order)
                states[nxt] = j
                order.append(nxt)
            row.append(j)
        rows.append(row)
        i += 1
    accepting = frozenset(i for i, st in enumerate(order) if st != "sink")
    dfa = Dfa(alphabet, tuple(tuple(r) for r in rows), 0, accepting)
    return minimize(dfa)


# ---------------------------------------------------------------------------
# linear atoms:  sum(coeffs[i] * v_i)  rel  const,   rel in {=, <=, <}

_REL_TEST = {
    "=": lambda v, c: v == c,
    "<=": lambda v, c: v <= c,
    "<": lambda v, c: v < c,
}

_TRUE = "T"
_FALSE = "F"


def _base_linear_states(coeffs, const, rel, k):
    """BFS over integer deficits with proven sink collapse.

    With S+ = sum of positive coefficients and S- = -sum of negative
    ones, a deficit V > S- + max(const, 0) keeps every future value
    above const, and V < -S+ + min(const, 0) keeps it below.
    """
    s_pos = sum(c for c in coeffs if c > 0)
    s_neg = -sum(c for c in coeffs if c < 0)
    hi = s_neg + max(const, 0)
    lo = -s_pos + min(const, 0)

    def classify(v):
        if v > hi:
            return _FALSE
        if v < lo:
            return _TRUE if rel in ("<=", "<") else _FALSE
        return v

    alphabet = Alphabet((k,) * len(coeffs))
    symbols = alphabet.symbols()
    sym_e = [sum(c * d for c, d in zip(coeffs, sym)) for sym in symbols]
    ids = {0: 0}
    order = [0]
    rows = []
    i = 0
    while i < len(order):
        st = order[i]
        row = []
        for e in sym_e:
            if st in (_TRUE, _FALSE):
                nxt = st
            else:
                nxt = classify(k * st + e)
            j = ids.get(nxt)
            if j is None:
                j = len(order)
                ids[nxt] = j
                order.append(nxt)
            row.append(j)
        rows.append(row)
        i += 1
    test = _REL_TEST[rel]
    accepting = frozenset(
        i for i, st in enumerate(order)
        if st == _TRUE or (st not in (_TRUE, _FALSE) and test(st, const))
    )
    return Dfa(alphabet, tuple(tuple(r) for r in rows), 0, accepting)


def _fib_pair(t: int) -> tuple[int, int, int]:
    """(F_{t+1}, F_t, F_{t+3} - 2) with F_1 = F_2 = 1."""
    a, b = 1, 0  # F_1, F_0
    for _ in range(t):
        a, b = a + b, a
    # a = F_{t+1}, b = F_t
    f2 = a + b      # F_{t+2}
    f3 = f2 + a     # F_{t+3}
    return a, b, f3 - 2


class _ZeckCurves:
    """Exact min/max curves of the reachable end value from a (P, Q) state.

    min_curve(t) = F_{t+1} P + F_t Q + e_min (F_{t+3} - 2) and the e_max
    analogue bound every value reachable in exactly t more digits; the
    minimum and maximum themselves are attained.
    """

    def __init__(self, e_min, e_max, cap=300):
        self.e_min = e_min
        self.e_max = e_max
        self.cap = cap

    def _iter(self, p, q):
        a, b = 1, 0  # F_{t+1}, F_t at t = 0
        f2, f3 = 1, 2  # F_{t+2}, F_{t+3} at t = 0
        for _ in range(self.cap):
            fpad = f3 - 2
            yield a * p + b * q + self.e_min * fpad, a * p + b * q + self.e_max * fpad
            a, b = a + b, a
            f2, f3 = f3, f2 + f3
        raise RuntimeError("liveness iteration did not settle")

    def can_hit(self, p, q, c):
        """Can some future end value equal c.

        The min curve obeys lo(t+1) = lo(t) + lo(t-1) + 2 e_min, so two
        consecutive values >= max(c+1, -2 e_min) keep it above c forever;
        the max curve escapes downward symmetrically.
        """
        up = max(c + 1, -2 * self.e_min)
        down = min(c - 1, -2 * self.e_max)
        prev = None
        for lo, hi in self._iter(p, q):
            if lo <= c <= hi:
                return True
            if prev is not None:
                plo, phi = prev
                if plo >= up and lo >= up:
                    return False
                if phi <= down and hi <= down:
                    return False
            prev = (lo, hi)
        raise RuntimeError("unreachable")

    def can_go_le(self, p, q, c):
        """Can some future end value be <= c."""
        up = max(c + 1, -2 * self.e_min)
        prev = None
        for lo, _ in self._iter(p, q):
            if lo <= c:
                return True
            if prev is not None and prev >= up and lo >= up:
                return False
            prev = lo
        raise RuntimeError("unreachable")

    def always_le(self, p, q, c):
        """Is every future end value <= c."""
        down = min(c, -2 * self.e_max)
        prev = None
        for _, hi in self._iter(p, q):
            if hi > c:
                return False
            if prev is not None and prev <= down and hi <= down:
                return True
            prev = hi
        raise RuntimeError("unreachable")


def _zeck_linear_states(coeffs, const, rel):
    e_min = sum(c for c in coeffs if c < 0)
    e_max = sum(c for c in coeffs if c > 0)
    curves = _ZeckCurves(e_min, e_max)
    target = const if rel != "<" else const - 1  # strict: value <= const - 1

    def classify(state):
        p, q = state
        if rel == "=":
            if not curves.can_hit(p, q, target):
                return _FALSE
        else:
            if not curves.can_go_le(p, q, target):
                return _FALSE
            if curves.always_le(p, q, target):
                return _TRUE
        return state

    alphabet = Alphabet((2,) * len(coeffs))
    symbols = alphabet.symbols()
    sym_e = [sum(c * d for c, d in zip(coeffs, sym)) for sym in symbols]
    start = classify((0, 0))
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        st = order[i]
        row = []
        for e in sym_e:
            if st in (_TRUE, _FALSE):
                nxt = st
            else:
                p, q = st
                nxt = classify((p + q + e, p + e))
            j = ids.get(nxt)
            if j is None:
                j = len(order)
                ids[nxt] = j
                order.append(nxt)
            row.append(j)
        rows.append(row)
        i += 1
        if len(order) > 20000:
            raise RuntimeError("zeckendorf linear construction exploded")
    accepting = frozenset(
        i for i, st in enumerate(order)
        if st == _TRUE
        or (st not in (_TRUE, _FALSE) and _REL_TEST[rel](st[0], const))
    )
    return Dfa(alphabet, tuple(tuple(r) for r in rows), 0, accepting)


def linear_automaton(coeffs, const: int, rel: str,
                     system: NumerationSystem) -> Dfa:
    """Automaton for sum(coeffs . vars) rel const over padded tuples.

    Components must be canonically valid; the result is intersected with
    the validity automaton and minimized.  ``rel`` is one of =, <=, <.
    """
    coeffs = tuple(coeffs)
    if rel not in _REL_TEST:
        raise ValueError(f"unsupported relation {rel!r}")
    if not coeffs:
        raise ValueError("at least one variable required")
    if all(c == 0 for c in coeffs):
        alpha = Alphabet((system.digit_range,) * len(coeffs))
        dfa = full_dfa(alpha) if _REL_TEST[rel](0, const) else \
            Dfa(alpha, ((0,) * alpha.n_symbols,), 0, frozenset())
    elif system.kind == BASE_K:
        dfa = _base_linear_states(coeffs, const, rel, system.base)
    else:
        dfa = _zeck_linear_states(coeffs, const, rel)
    dfa = product(dfa, validity_automaton(system, len(coeffs)), "and")
    dfa = minimize(dfa)
    if not system.msd_first:
        dfa = reverse_dfa(dfa)
    return dfa


def addition_automaton(system: NumerationSystem) -> Dfa:
    """Accepts padded triples (x, y, z) with x + y = z."""
    return linear_automaton((1, 1, -1), 0, "=", system)


def comparison_automaton(relation: str, system: NumerationSystem) -> Dfa:
    """Accepts padded pairs (x, y) with x relation y; relation in =, <, <=."""
    if relation not in ("=", "<", "<="):
        raise ValueError(f"unsupported relation {relation!r}")
    return linear_automaton((1, -1), 0, relation, system)


def constant_automaton(value: int, system: NumerationSystem) -> Dfa:
    """Arity-1 automaton accepting the padded representations of a value."""
    return linear_automaton((1,), value, "=", system)
