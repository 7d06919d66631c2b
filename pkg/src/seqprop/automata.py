"""Automata algebra over tuple-digit alphabets.

Deterministic automata here are always complete: every state has a
transition on every symbol, with an explicit sink where needed.  Symbols
are tuples of digits, one digit per component, ordered lexicographically
(the order produced by ``itertools.product``).  All values are immutable
after construction; every operation returns a new automaton.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as _iproduct

import numpy as np


class AlphabetMismatch(ValueError):
    """Two automata were combined over different alphabets."""


@dataclass(frozen=True)
class Alphabet:
    """Tuple-digit alphabet: one digit range per component."""

    ranges: tuple[int, ...]

    @property
    def arity(self) -> int:
        return len(self.ranges)

    @property
    def n_symbols(self) -> int:
        n = 1
        for r in self.ranges:
            n *= r
        return n

    def symbols(self) -> list[tuple[int, ...]]:
        return list(_iproduct(*(range(r) for r in self.ranges)))

    def index(self, symbol: tuple[int, ...]) -> int:
        i = 0
        for digit, r in zip(symbol, self.ranges):
            if not 0 <= digit < r:
                raise ValueError(f"digit {digit} out of range {r}")
            i = i * r + digit
        return i

    def drop(self, coord: int) -> "Alphabet":
        return Alphabet(self.ranges[:coord] + self.ranges[coord + 1:])


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton.

    ``transitions[state][symbol_index]`` is the successor state.
    """

    alphabet: Alphabet
    transitions: tuple[tuple[int, ...], ...]
    initial: int
    accepting: frozenset[int]

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def run(self, symbols) -> bool:
        state = self.initial
        idx = self.alphabet.index
        for sym in symbols:
            state = self.transitions[state][idx(sym)]
        return state in self.accepting


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton; transition relation may be partial.

    ``transitions[state]`` maps a symbol index to a tuple of successors.
    """

    alphabet: Alphabet
    transitions: tuple[dict, ...]
    initial: frozenset[int]
    accepting: frozenset[int]


@dataclass(frozen=True)
class Dfao:
    """Complete deterministic automaton with an output symbol per state."""

    alphabet: Alphabet
    transitions: tuple[tuple[int, ...], ...]
    initial: int
    outputs: tuple[int, ...]

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def run(self, symbols) -> int:
        state = self.initial
        idx = self.alphabet.index
        for sym in symbols:
            state = self.transitions[state][idx(sym)]
        return self.outputs[state]


_BOOL_OPS = {
    "and": lambda x, y: x and y,
    "or": lambda x, y: x or y,
    "xor": lambda x, y: x != y,
    "implies": lambda x, y: (not x) or y,
    "iff": lambda x, y: x == y,
    "andnot": lambda x, y: x and not y,
}


def product(a: Dfa, b: Dfa, op: str) -> Dfa:
    """Boolean combination of two languages over the same alphabet."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{a.alphabet} vs {b.alphabet}")
    combine = _BOOL_OPS[op]
    n_syms = a.alphabet.n_symbols
    ta, tb = a.transitions, b.transitions
    pair_ids = {(a.initial, b.initial): 0}
    order = [(a.initial, b.initial)]
    trans = []
    i = 0
    while i < len(order):
        sa, sb = order[i]
        row = []
        ra, rb = ta[sa], tb[sb]
        for s in range(n_syms):
            nxt = (ra[s], rb[s])
            j = pair_ids.get(nxt)
            if j is None:
                j = len(order)
                pair_ids[nxt] = j
                order.append(nxt)
            row.append(j)
        trans.append(tuple(row))
        i += 1
    acc = frozenset(
        i for i, (sa, sb) in enumerate(order)
        if combine(sa in a.accepting, sb in b.accepting)
    )
    return Dfa(a.alphabet, tuple(trans), 0, acc)


def complement(a: Dfa) -> Dfa:
    """Swap the accepting set; valid because automata are complete."""
    return Dfa(a.alphabet, a.transitions,
               a.initial, frozenset(range(a.n_states)) - a.accepting)


class _SubsetCapExceeded(Exception):
    pass


def determinize(nfa: Nfa, cap: int | None = None) -> Dfa:
    """Subset construction; subsets are bit vectors reduced with numpy."""
    n_syms = nfa.alphabet.n_symbols
    n = len(nfa.transitions)
    words = max(1, (n + 63) // 64)
    # masks[sym][state] = successor set of state on sym, as a bit vector
    masks = np.zeros((n_syms, n, words), dtype=np.uint64)
    for q in range(n):
        for s, targets in nfa.transitions[q].items():
            row = masks[s][q]
            for t in targets:
                row[t >> 6] |= np.uint64(1 << (t & 63))
    acc_vec = np.zeros(words, dtype=np.uint64)
    for q in nfa.accepting:
        acc_vec[q >> 6] |= np.uint64(1 << (q & 63))
    start = np.zeros(words, dtype=np.uint64)
    for q in nfa.initial:
        start[q >> 6] |= np.uint64(1 << (q & 63))

    ids = {start.tobytes(): 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        subset = order[i]
        bits = np.unpackbits(subset.view(np.uint8), bitorder="little")[:n]
        members = np.nonzero(bits)[0]
        if len(members):
            per_sym = np.bitwise_or.reduce(masks[:, members, :], axis=1)
        else:
            per_sym = np.zeros((n_syms, words), dtype=np.uint64)
        row = []
        for sym in range(n_syms):
            key = per_sym[sym].tobytes()
            j = ids.get(key)
            if j is None:
                j = len(order)
                ids[key] = j
                order.append(per_sym[sym].copy())
            row.append(j)
        trans.append(tuple(row))
        i += 1
        if cap is not None and len(order) > cap:
            raise _SubsetCapExceeded
    acc = frozenset(
        i for i, subset in enumerate(order)
        if bool(np.any(subset & acc_vec)))
    return Dfa(nfa.alphabet, tuple(trans), 0, acc)


def _nfa_reverse(nfa: Nfa) -> Nfa:
    rev: list[dict] = [dict() for _ in range(len(nfa.transitions))]
    for q in range(len(nfa.transitions)):
        for s, targets in nfa.transitions[q].items():
            for t in targets:
                rev[t].setdefault(s, []).append(q)
    ntrans = tuple({s: tuple(v) for s, v in row.items()} for row in rev)
    return Nfa(nfa.alphabet, ntrans, frozenset(nfa.accepting),
               frozenset(nfa.initial))


def _dfa_as_reversed_nfa(a: Dfa) -> Nfa:
    rev: list[dict] = [dict() for _ in range(a.n_states)]
    for q in range(a.n_states):
        for s, t in enumerate(a.transitions[q]):
            rev[t].setdefault(s, []).append(q)
    ntrans = tuple({s: tuple(v) for s, v in row.items()} for row in rev)
    return Nfa(a.alphabet, ntrans, frozenset(a.accepting),
               frozenset({a.initial}))


_FORWARD_SUBSET_CAP = 40000


def det_min(nfa: Nfa) -> Dfa:
    """Minimal DFA of an NFA's language, adaptively.

    Plain subset construction usually wins, but some projections explode
    forward while staying small in reverse; past a cap, switch to
    determinizing the reversal twice (whose second pass is minimal by
    Brzozowski's argument).
    """
    try:
        return minimize(determinize(nfa, cap=_FORWARD_SUBSET_CAP))
    except _SubsetCapExceeded:
        pass
    lsd = minimize(determinize(_nfa_reverse(nfa)))
    return minimize(determinize(_dfa_as_reversed_nfa(lsd)))


def _zero_kept_symbols(alphabet: Alphabet, coord: int) -> list[int]:
    """Symbol indices whose components other than ``coord`` are all zero."""
    out = []
    for i, sym in enumerate(alphabet.symbols()):
        if all(d == 0 for j, d in enumerate(sym) if j != coord):
            out.append(i)
    return out


def project(a: Dfa, coord: int, side: str = "msd") -> Dfa:
    """Erase one component, closing under re-padding of the witness.

    A witness value may need more digits than the remaining components:
    those extra steps read zeros on every kept component.  For msd-first
    representations the extra steps come first (initial-state closure);
    for lsd-first they come last (accepting-state closure).
    """
    if a.alphabet.arity < 1:
        raise ValueError("projection needs arity >= 1")
    if side not in ("msd", "lsd"):
        raise ValueError(f"bad side {side!r}")
    reduced = a.alphabet.drop(coord)
    # full symbol index -> reduced symbol index
    sym_map = []
    for sym in a.alphabet.symbols():
        kept = sym[:coord] + sym[coord + 1:]
        sym_map.append(reduced.index(kept))
    zero_syms = _zero_kept_symbols(a.alphabet, coord)

    initial = {a.initial}
    accepting = set(a.accepting)
    if side == "msd":
        # extra leading witness digits: forward closure from the initial state
        frontier = list(initial)
        while frontier:
            q = frontier.pop()
            for s in zero_syms:
                nxt = a.transitions[q][s]
                if nxt not in initial:
                    initial.add(nxt)
                    frontier.append(nxt)
    else:
        # extra trailing witness digits: backward closure into accepting states
        pred = [[] for _ in range(a.n_states)]
        for q in range(a.n_states):
            for s in zero_syms:
                pred[a.transitions[q][s]].append(q)
        frontier = list(accepting)
        while frontier:
            q = frontier.pop()
            for p in pred[q]:
                if p not in accepting:
                    accepting.add(p)
                    frontier.append(p)

    ntrans = []
    for q in range(a.n_states):
        row: dict[int, set] = {}
        for s, nxt in enumerate(a.transitions[q]):
            row.setdefault(sym_map[s], set()).add(nxt)
        ntrans.append({s: tuple(sorted(v)) for s, v in row.items()})
    nfa = Nfa(reduced, tuple(ntrans), frozenset(initial), frozenset(accepting))
    return det_min(nfa)


def _reachable(a: Dfa) -> list[int]:
    tmat = np.array(a.transitions, dtype=np.int64).reshape(a.n_states, -1)
    seen = np.zeros(a.n_states, dtype=bool)
    seen[a.initial] = True
    frontier = np.array([a.initial])
    while len(frontier):
        nxt = np.unique(tmat[frontier].ravel())
        fresh = nxt[~seen[nxt]]
        seen[fresh] = True
        frontier = fresh
    return np.nonzero(seen)[0].tolist()


def _moore_blocks(trans, n_syms, initial_block):
    """Partition refinement to language-equivalence classes."""
    n = len(trans)
    tmat = np.array(trans, dtype=np.int64).reshape(n, -1)
    block = np.asarray(initial_block, dtype=np.int64)
    n_blocks = len(np.unique(block))
    while True:
        sig = np.concatenate([block[:, None], block[tmat]], axis=1)
        _, new_block = np.unique(sig, axis=0, return_inverse=True)
        count = new_block.max() + 1 if n else 0
        if count == n_blocks:
            return new_block.tolist()
        block = new_block
        n_blocks = count


def _renumber(alphabet, trans, initial, labels):
    """Canonical numbering: BFS from the initial state in symbol order."""
    ids = {initial: 0}
    order = [initial]
    i = 0
    while i < len(order):
        for nxt in trans[order[i]]:
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
        i += 1
    new_trans = tuple(
        tuple(ids[t] for t in trans[q]) for q in order
    )
    new_labels = [labels[q] for q in order]
    return new_trans, new_labels


def minimize(a: Dfa) -> Dfa:
    """Minimal complete automaton with canonically numbered states."""
    reach = _reachable(a)
    remap = {old: new for new, old in enumerate(reach)}
    trans = [tuple(remap[t] for t in a.transitions[q]) for q in reach]
    acc = [1 if q in a.accepting else 0 for q in reach]
    block = _moore_blocks(trans, a.alphabet.n_symbols, acc)
    n_blocks = max(block) + 1
    btrans = [None] * n_blocks
    bacc = [0] * n_blocks
    for q, b in enumerate(block):
        if btrans[b] is None:
            btrans[b] = tuple(block[t] for t in trans[q])
            bacc[b] = acc[q]
    new_trans, labels = _renumber(a.alphabet, btrans, block[remap[a.initial]], bacc)
    accepting = frozenset(i for i, v in enumerate(labels) if v)
    return Dfa(a.alphabet, new_trans, 0, accepting)


def minimize_dfao(a: Dfao) -> Dfao:
    """Moore minimization of an automaton with per-state outputs."""
    reach = _reachable(Dfa(a.alphabet, a.transitions, a.initial, frozenset()))
    remap = {old: new for new, old in enumerate(reach)}
    trans = [tuple(remap[t] for t in a.transitions[q]) for q in reach]
    outs = [a.outputs[q] for q in reach]
    out_ids = {}
    init_block = []
    for o in outs:
        if o not in out_ids:
            out_ids[o] = len(out_ids)
        init_block.append(out_ids[o])
    block = _moore_blocks(trans, a.alphabet.n_symbols, init_block)
    n_blocks = max(block) + 1
    btrans = [None] * n_blocks
    bout = [0] * n_blocks
    for q, b in enumerate(block):
        if btrans[b] is None:
            btrans[b] = tuple(block[t] for t in trans[q])
            bout[b] = outs[q]
    new_trans, labels = _renumber(a.alphabet, btrans, block[remap[a.initial]], bout)
    return Dfao(a.alphabet, new_trans, 0, tuple(labels))


def reverse_dfa(a: Dfa) -> Dfa:
    """Automaton for the reversals of the accepted strings."""
    return minimize(determinize(_dfa_as_reversed_nfa(a)))


def reverse_dfao(a: Dfao) -> Dfao:
    """Automaton computing the same outputs on reversed input strings.

    States are maps (state of ``a``) -> output: reading digits d1..dm in
    reversed order must yield a.run(dm..d1).
    """
    n_syms = a.alphabet.n_symbols
    start = tuple(a.outputs)
    ids = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        fn = order[i]
        row = []
        for s in range(n_syms):
            nxt = tuple(fn[a.transitions[q][s]] for q in range(a.n_states))
            j = ids.get(nxt)
            if j is None:
                j = len(order)
                ids[nxt] = j
                order.append(nxt)
            row.append(j)
        trans.append(tuple(row))
        i += 1
    outputs = tuple(fn[a.initial] for fn in order)
    return minimize_dfao(Dfao(a.alphabet, tuple(trans), 0, outputs))


def trim_state_count(a: Dfa) -> int:
    """States excluding a non-accepting all-self-loop sink, if present.

    Matches the usual reported size of automata drawn without their dead
    state.
    """
    n = a.n_states
    for q in range(n):
        if q not in a.accepting and all(t == q for t in a.transitions[q]):
            return n - 1
    return n


def is_empty(a: Dfa):
    """Emptiness test; returns (verdict, shortest witness or None)."""
    if a.initial in a.accepting:
        return False, []
    symbols = a.alphabet.symbols()
    parent = {a.initial: None}
    queue = [a.initial]
    i = 0
    while i < len(queue):
        q = queue[i]
        for s, nxt in enumerate(a.transitions[q]):
            if nxt not in parent:
                parent[nxt] = (q, symbols[s])
                if nxt in a.accepting:
                    witness = []
                    cur = nxt
                    while parent[cur] is not None:
                        cur, sym = parent[cur]
                        witness.append(sym)
                    witness.reverse()
                    return False, witness
                queue.append(nxt)
        i += 1
    return True, None


def equivalent(a: Dfa, b: Dfa) -> bool:
    """Language equality via canonical minimization."""
    if a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{a.alphabet} vs {b.alphabet}")
    ma, mb = minimize(a), minimize(b)
    return (ma.transitions == mb.transitions and ma.accepting == mb.accepting)


def enumerate_accepted(a: Dfa, system, bound: int):
    """Accepted values (ints for arity 1, tuples otherwise) up to ``bound``."""
    from . import numeration

    arity = a.alphabet.arity
    out = []
    if arity == 1:
        for n in range(bound + 1):
            if a.run(numeration.encode_tuple((n,), system).digits):
                out.append(n)
        return out
    for values in _iproduct(range(bound + 1), repeat=arity):
        if a.run(numeration.encode_tuple(values, system).digits):
            out.append(values)
    return out


def cylindrify(a: Dfa, positions: tuple[int, ...], new_ranges: tuple[int, ...]) -> Dfa:
    """Add unconstrained components at the given positions of the new alphabet.

    ``positions`` lists, for each component of ``a``, its index within the
    widened alphabet of ``new_ranges``.
    """
    new_alpha = Alphabet(new_ranges)
    old_index = a.alphabet.index
    mapping = [old_index(tuple(sym[p] for p in positions))
               for sym in new_alpha.symbols()]
    trans = tuple(
        tuple(a.transitions[q][m] for m in mapping) for q in range(a.n_states)
    )
    return Dfa(new_alpha, trans, a.initial, a.accepting)


def full_dfa(alphabet: Alphabet) -> Dfa:
    return Dfa(alphabet, ((0,) * alphabet.n_symbols,), 0, frozenset({0}))


def empty_dfa(alphabet: Alphabet) -> Dfa:
    return Dfa(alphabet, ((0,) * alphabet.n_symbols,), 0, frozenset())


# ---------------------------------------------------------------------------
# serialization

def _header(kind, a):
    ranges = ",".join(str(r) for r in a.alphabet.ranges)
    return f"{kind} arity {a.alphabet.arity} ranges {ranges} initial {a.initial}"


def to_text(a) -> str:
    """Plain-text format; accepts a Dfa or a Dfao."""
    is_dfao = isinstance(a, Dfao)
    lines = [_header("dfao" if is_dfao else "dfa", a)]
    if is_dfao:
        lines.append("outputs " + ",".join(str(o) for o in a.outputs))
    else:
        lines.append("accepting " + ",".join(str(q) for q in sorted(a.accepting)))
    symbols = a.alphabet.symbols()
    for q in range(a.n_states):
        for s, nxt in enumerate(a.transitions[q]):
            digits = ",".join(str(d) for d in symbols[s])
            lines.append(f"{q} [{digits}] -> {nxt}")
    return "\n".join(lines) + "\n"


def from_text(text: str):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    kind = head[0]
    arity = int(head[2])
    ranges = tuple(int(x) for x in head[4].split(","))
    initial = int(head[6])
    if len(ranges) != arity:
        raise ValueError("arity does not match ranges")
    alphabet = Alphabet(ranges)
    accepting = frozenset()
    outputs = None
    if kind == "dfa":
        rest = lines[1].split(None, 1)
        accepting = frozenset(int(x) for x in rest[1].split(",")) if len(rest) > 1 else frozenset()
    elif kind == "dfao":
        outputs = tuple(int(x) for x in lines[1].split(None, 1)[1].split(","))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    table: dict[int, dict[int, int]] = {}
    n_states = 0
    for ln in lines[2:]:
        src, sym, arrow, dst = ln.split()
        q, t = int(src), int(dst)
        digits = tuple(int(x) for x in sym.strip("[]").split(",")) if arity else ()
        table.setdefault(q, {})[alphabet.index(digits)] = t
        n_states = max(n_states, q + 1, t + 1)
    trans = tuple(
        tuple(table.get(q, {}).get(s, 0) for s in range(alphabet.n_symbols))
        for q in range(n_states)
    )
    for q in range(n_states):
        if len(table.get(q, {})) != alphabet.n_symbols:
            raise ValueError(f"state {q} is missing transitions")
    if kind == "dfa":
        return Dfa(alphabet, trans, initial, accepting)
    return Dfao(alphabet, trans, initial, outputs)


def to_json_obj(a) -> dict:
    obj = {
        "kind": "dfao" if isinstance(a, Dfao) else "dfa",
        "ranges": list(a.alphabet.ranges),
        "initial": a.initial,
        "transitions": [list(row) for row in a.transitions],
    }
    if isinstance(a, Dfao):
        obj["outputs"] = list(a.outputs)
    else:
        obj["accepting"] = sorted(a.accepting)
    return obj


def from_json_obj(obj):
    alphabet = Alphabet(tuple(obj["ranges"]))
    trans = tuple(tuple(row) for row in obj["transitions"])
    for row in trans:
        if len(row) != alphabet.n_symbols:
            raise ValueError("transition row has wrong width")
    if obj["kind"] == "dfao":
        return Dfao(alphabet, trans, obj["initial"], tuple(obj["outputs"]))
    return Dfa(alphabet, trans, obj["initial"], frozenset(obj["accepting"]))


def to_json(a) -> str:
    return json.dumps(to_json_obj(a), indent=1, sort_keys=True)


def from_json(text: str):
    return from_json_obj(json.loads(text))


def to_dot(a, name: str = "automaton") -> str:
    """GraphViz rendering; accepting states doubled, outputs in labels."""
    is_dfao = isinstance(a, Dfao)
    symbols = a.alphabet.symbols()
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  start [shape=point];']
    for q in range(a.n_states):
        if is_dfao:
            lines.append(f'  {q} [shape=circle, label="{q}/{a.outputs[q]}"];')
        else:
            shape = "doublecircle" if q in a.accepting else "circle"
            lines.append(f'  {q} [shape={shape}, label="{q}"];')
    lines.append(f"  start -> {a.initial};")
    for q in range(a.n_states):
        grouped: dict[int, list[str]] = {}
        for s, nxt in enumerate(a.transitions[q]):
            label = "[" + ",".join(str(d) for d in symbols[s]) + "]"
            grouped.setdefault(nxt, []).append(label)
        for nxt, labels in grouped.items():
            lines.append(f'  {q} -> {nxt} [label="{" ".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
