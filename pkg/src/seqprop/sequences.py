"""Built-in automatic sequences.

Each sequence is available through two independent routes: a Dfao built
from its defining recurrences (or a direct state construction), and a
generator built from its defining morphism (or interval rule).  The two
routes cross-validate each other in the test suite.

Base-k Dfaos are synthesized by the kernel construction, which reads
digits least-significant-first: the state reached after digits w is the
subsequence n -> x[k^|w| * n + value(w)].  The msd-first machine is then
obtained by the output-function reversal construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import numeration
from .automata import Alphabet, Dfao, minimize_dfao, reverse_dfao


@dataclass(frozen=True)
class Morphism:
    """Letter-to-word morphism with an optional output coding."""

    rules: tuple[tuple[int, tuple[int, ...]], ...]
    start: int
    coding: tuple[tuple[int, int], ...] | None = None

    def rule_map(self):
        return dict(self.rules)

    def fixed_point_prefix(self, length: int) -> tuple[int, ...]:
        """Prefix of the fixed point starting at ``start``, after coding."""
        rules = self.rule_map()
        if length < 0:
            raise ValueError("length must be >= 0")
        if rules[self.start][0] != self.start:
            raise ValueError("morphism is not prolongable on its start letter")
        word = [self.start]
        while len(word) < length:
            nxt = []
            for c in word:
                nxt.extend(rules[c])
                if len(nxt) >= length and len(word) > 1:
                    break
            if len(nxt) == len(word):
                raise ValueError("morphism does not grow")
            word = nxt
        word = word[:length]
        if self.coding is not None:
            cmap = dict(self.coding)
            word = [cmap[c] for c in word]
        return tuple(word)


# ---------------------------------------------------------------------------
# recurrence evaluators (primary definitions of the base-2 sequences)

@lru_cache(maxsize=None)
def thue_morse_value(n: int) -> int:
    if n == 0:
        return 0
    return thue_morse_value(n // 2) if n % 2 == 0 else 1 - thue_morse_value(n // 2)


@lru_cache(maxsize=None)
def rudin_shapiro_value(n: int) -> int:
    # the printed recurrence system leaves r(3) free; seeded from the prefix
    if n == 0:
        return 0
    if n == 3:
        return 1
    if n % 2 == 0:
        return rudin_shapiro_value(n // 2)
    if n % 4 == 1:
        return rudin_shapiro_value((n - 1) // 4)
    if n % 8 == 7:
        return rudin_shapiro_value((n - 7) // 4 + 1)
    if n % 16 == 3:
        return rudin_shapiro_value((n - 3) // 2 + 3)
    assert n % 16 == 11
    return rudin_shapiro_value((n - 11) // 4 + 3)


@lru_cache(maxsize=None)
def paperfolding_value(n: int) -> int:
    if n % 2 == 1:
        return paperfolding_value((n - 1) // 2)
    if n % 4 == 0:
        return 0
    return 1


@lru_cache(maxsize=None)
def period_doubling_value(n: int) -> int:
    if n % 2 == 0:
        return 1
    if n % 4 == 1:
        return 0
    return period_doubling_value((n - 3) // 4)


def seq_a_value(i: int) -> int:
    """1 + (k mod 2) on the closed blocks [3*4^k, 5*4^k], else 0."""
    pow4 = 1
    k = 0
    while 3 * pow4 <= i:
        if i <= 5 * pow4:
            return (k % 2) + 1
        pow4 *= 4
        k += 1
    return 0


def seq_b_value(i: int) -> int:
    """1 + (k mod 2) on the open blocks (3*4^k, 5*4^k), else 0."""
    pow4 = 1
    k = 0
    while 3 * pow4 < i:
        if i < 5 * pow4:
            return (k % 2) + 1
        pow4 *= 4
        k += 1
    return 0


# ---------------------------------------------------------------------------
# Dfao synthesis

def _kernel_dfao_lsd(value_fn, k: int, window: int = 512) -> Dfao:
    """Lsd-first Dfao from a recurrence evaluator via the k-kernel.

    States n -> x[a n + b] are deduplicated by their values on
    [0, window); the result is gated by exhaustive agreement tests.
    """
    alphabet = Alphabet((k,))

    def signature(a, b):
        return tuple(value_fn(a * m + b) for m in range(window))

    start = (1, 0)
    sigs = {signature(1, 0): 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        a, b = order[i]
        row = []
        for d in range(k):
            na, nb = a * k, b + d * a
            sig = signature(na, nb)
            j = sigs.get(sig)
            if j is None:
                j = len(order)
                sigs[sig] = j
                order.append((na, nb))
            row.append(j)
        rows.append(tuple(row))
        i += 1
    outputs = tuple(value_fn(b) for _, b in order)
    return minimize_dfao(Dfao(alphabet, tuple(rows), 0, outputs))


def _fibonacci_dfao(msd_first: bool) -> Dfao:
    """x[n] is the least significant Zeckendorf digit of n."""
    alphabet = Alphabet((2,))
    if msd_first:
        # track the digit read last
        trans = ((0, 1), (0, 1))
        return minimize_dfao(Dfao(alphabet, trans, 0, (0, 1)))
    # first digit read decides; remaining digits are frozen
    trans = ((1, 2), (1, 1), (2, 2))
    return minimize_dfao(Dfao(alphabet, trans, 0, (0, 0, 1)))


def _block_dfao_msd(strict: bool) -> Dfao:
    """Base-4 machine for the interval rule, closed or open blocks.

    In-block values have msd form 3w, 10w, or 11 0^j; with open blocks
    the all-zero tails 3 0^j and 11 0^j fall out.
    """
    # state ids
    Z, O1, U0, U1, D = 0, 1, 2, 3, 4
    if not strict:
        T0, T1, E0, E1 = 5, 6, 7, 8
        n = 9
        out = {Z: 0, O1: 0, U0: 1, U1: 2, D: 0, T0: 1, T1: 2, E0: 1, E1: 2}
        tr = {
            Z: (Z, O1, D, T0),
            O1: (U0, E0, D, D),
            U0: (U1, U1, U1, U1),
            U1: (U0, U0, U0, U0),
            D: (D, D, D, D),
            T0: (T1, T1, T1, T1),
            T1: (T0, T0, T0, T0),
            E0: (E1, D, D, D),
            E1: (E0, D, D, D),
        }
    else:
        Z3_0, Z3_1, N3_0, N3_1 = 5, 6, 7, 8
        n = 9
        out = {Z: 0, O1: 0, U0: 1, U1: 2, D: 0,
               Z3_0: 0, Z3_1: 0, N3_0: 1, N3_1: 2}
        tr = {
            Z: (Z, O1, D, Z3_0),
            O1: (U0, D, D, D),  # 11... is either 5*4^j (excluded) or dead
            U0: (U1, U1, U1, U1),
            U1: (U0, U0, U0, U0),
            D: (D, D, D, D),
            Z3_0: (Z3_1, N3_1, N3_1, N3_1),
            Z3_1: (Z3_0, N3_0, N3_0, N3_0),
            N3_0: (N3_1, N3_1, N3_1, N3_1),
            N3_1: (N3_0, N3_0, N3_0, N3_0),
        }
    trans = tuple(tr[q] for q in range(n))
    outputs = tuple(out[q] for q in range(n))
    return minimize_dfao(Dfao(Alphabet((4,)), trans, 0, outputs))


@dataclass(frozen=True)
class BuiltinSequence:
    """A named automatic sequence with both of its defining routes."""

    name: str
    system: numeration.NumerationSystem
    output_alphabet: tuple[int, ...]
    morphism: Morphism | None

    def dfao(self, msd_first: bool = True) -> Dfao:
        return _dfao_cached(self.name, msd_first)

    def eval(self, n: int) -> int:
        ds = numeration.to_canonical(n, self.system)
        return self.dfao().run(ds.digits)

    def prefix(self, length: int) -> tuple[int, ...]:
        """Generated independently of the Dfao."""
        if self.morphism is not None:
            return self.morphism.fixed_point_prefix(length)
        rule = seq_a_value if self.name == "seq-a" else seq_b_value
        return tuple(rule(i) for i in range(length))

    def prefix_str(self, length: int) -> str:
        return "".join(str(c) for c in self.prefix(length))


_TAU = ((0, 0), (1, 0), (2, 1), (3, 1))

_SPECS = {
    "thue-morse": dict(
        system=numeration.base(2),
        outputs=(0, 1),
        morphism=Morphism(((0, (0, 1)), (1, (1, 0))), 0),
        value_fn=thue_morse_value,
    ),
    "rudin-shapiro": dict(
        system=numeration.base(2),
        outputs=(0, 1),
        morphism=Morphism(((0, (0, 1)), (1, (0, 2)), (2, (3, 1)), (3, (3, 2))), 0, _TAU),
        value_fn=rudin_shapiro_value,
    ),
    "paperfolding": dict(
        system=numeration.base(2),
        outputs=(0, 1),
        morphism=Morphism(((0, (0, 1)), (1, (2, 1)), (2, (0, 3)), (3, (2, 3))), 0, _TAU),
        value_fn=paperfolding_value,
    ),
    "period-doubling": dict(
        system=numeration.base(2),
        outputs=(0, 1),
        morphism=Morphism(((1, (1, 0)), (0, (1, 1))), 1),
        value_fn=period_doubling_value,
    ),
    "fibonacci": dict(
        system=numeration.zeckendorf(),
        outputs=(0, 1),
        morphism=Morphism(((0, (0, 1)), (1, (0,))), 0),
        value_fn=None,
    ),
    "seq-a": dict(
        system=numeration.base(4),
        outputs=(0, 1, 2),
        morphism=None,
        value_fn=seq_a_value,
    ),
    "seq-b": dict(
        system=numeration.base(4),
        outputs=(0, 1, 2),
        morphism=None,
        value_fn=seq_b_value,
    ),
}

_DFAO_CACHE: dict[tuple[str, bool], Dfao] = {}


def _dfao_cached(name: str, msd_first: bool) -> Dfao:
    key = (name, msd_first)
    if key in _DFAO_CACHE:
        return _DFAO_CACHE[key]
    spec = _SPECS[name]
    if name == "fibonacci":
        d = _fibonacci_dfao(msd_first)
    elif name in ("seq-a", "seq-b"):
        d = _block_dfao_msd(strict=(name == "seq-b"))
        if not msd_first:
            d = reverse_dfao(d)
    else:
        lsd = _kernel_dfao_lsd(spec["value_fn"], spec["system"].base)
        d = reverse_dfao(lsd) if msd_first else lsd
    _DFAO_CACHE[key] = d
    return d


def builtin_names() -> list[str]:
    return list(_SPECS)


@lru_cache(maxsize=None)
def get(name: str) -> BuiltinSequence:
    if name not in _SPECS:
        raise KeyError(f"unknown sequence {name!r}; known: {', '.join(_SPECS)}")
    spec = _SPECS[name]
    return BuiltinSequence(name, spec["system"], spec["outputs"], spec["morphism"])


def dfao(name: str, msd_first: bool = True) -> Dfao:
    return get(name).dfao(msd_first)


def seq_eval(name: str, n: int) -> int:
    return get(name).eval(n)


def prefix(name: str, length: int):
    return get(name).prefix(length)
