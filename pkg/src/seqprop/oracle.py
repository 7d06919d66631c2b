"""Brute-force word-property checkers over explicit finite words.

Everything here is independent of the automata engine and serves as its
ground truth.  Words are plain strings of digit characters.  Where the
toolkit relies on a non-obvious shortcut (longest-border occurrence
counts, bottom-up privileged generation, rolling-hash return words),
the definitional implementation is kept alongside and the two are
checked against each other exhaustively in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sequences


class StabilizationError(RuntimeError):
    """A sequence-level enumeration failed to stabilize under doubling."""


PREFIX_CAP = 1 << 20


# ---------------------------------------------------------------------------
# basic word operations

def occurrences(x: str, w: str) -> int:
    """Number of possibly overlapping occurrences of w in x."""
    if not w:
        return len(x) + 1
    count = 0
    pos = x.find(w)
    while pos != -1:
        count += 1
        pos = x.find(w, pos + 1)
    return count


def is_palindrome(x: str) -> bool:
    return x == x[::-1]


def border_lengths(x: str) -> list[int]:
    """Lengths of proper borders, longest first (failure-function chain)."""
    n = len(x)
    if n < 2:
        return []
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and x[i] != x[k]:
            k = fail[k - 1]
        if x[i] == x[k]:
            k += 1
        fail[i] = k
    chain = []
    b = fail[n - 1]
    while b:
        chain.append(b)
        b = fail[b - 1]
    return chain


def is_closed(x: str) -> bool:
    """Length <= 1, or some border occurs exactly twice.

    Occurrence counts are monotone along the border chain, so only the
    longest border needs testing.
    """
    if len(x) <= 1:
        return True
    chain = border_lengths(x)
    if not chain:
        return False
    return occurrences(x, x[:chain[0]]) == 2


def _is_closed_naive(x: str) -> bool:
    if len(x) <= 1:
        return True
    return any(
        x[:b] == x[len(x) - b:] and occurrences(x, x[:b]) == 2
        for b in range(1, len(x))
    )


_PRIV_MEMO: dict[str, bool] = {}


def is_privileged(x: str) -> bool:
    """Length <= 1, or a twice-occurring border is itself privileged."""
    if len(x) <= 1:
        return True
    cached = _PRIV_MEMO.get(x)
    if cached is not None:
        return cached
    result = False
    for b in border_lengths(x):
        if occurrences(x, x[:b]) != 2:
            break  # occurrence counts only grow as borders shorten
        if is_privileged(x[:b]):
            result = True
            break
    _PRIV_MEMO[x] = result
    return result


def _is_privileged_naive(x: str) -> bool:
    if len(x) <= 1:
        return True
    return any(
        x[:b] == x[len(x) - b:] and occurrences(x, x[:b]) == 2
        and _is_privileged_naive(x[:b])
        for b in range(1, len(x))
    )


def has_property_p(x: str) -> bool:
    """For every n there is a word occurring once as a prefix of the first
    n symbols and once as a suffix of the last n symbols."""
    total = len(x)
    for n in range(1, total + 1):
        head, tail = x[:n], x[total - n:]
        ok = False
        for p in range(1, n + 1):
            w = x[:p]
            if w != x[total - p:]:
                continue
            if occurrences(head, w) == 1 and occurrences(tail, w) == 1:
                ok = True
                break
        if not ok:
            return False
    return True


# ---------------------------------------------------------------------------
# palindromic factors

def _palindrome_scan(w: str, collect: bool, checkpoints=None):
    """Distinct palindromic factors via longest palindromic suffixes.

    Every novel palindrome of a word first appears as the longest
    palindromic suffix of some prefix, so one left-to-right scan counts
    them all.  Returns (count including the empty word, set or None,
    {checkpoint: count}).
    """
    by_len: dict[int, list[int]] = {}
    pals = set() if collect else None
    count = 1
    lps = 0
    marks = {}
    checkpoints = set(checkpoints or ())
    if 0 in checkpoints:
        marks[0] = 1
    for i in range(len(w)):
        c = min(lps + 2, i + 1)
        while c > 1:
            seg = w[i - c + 1:i + 1]
            if seg == seg[::-1]:
                break
            c -= 1
        lps = c
        start = i - c + 1
        starts = by_len.setdefault(c, [])
        seg = w[start:i + 1]
        novel = True
        for st in starts:
            if w[st:st + c] == seg:
                novel = False
                break
        if novel:
            starts.append(start)
            count += 1
            if collect:
                pals.add(seg)
        if i + 1 in checkpoints:
            marks[i + 1] = count
    return count, pals, marks


def count_distinct_palindromes(x: str) -> int:
    """Distinct palindromic factors including the empty word."""
    return _palindrome_scan(x, False)[0]


def distinct_palindromes(x: str) -> set[str]:
    """Nonempty distinct palindromic factors."""
    return _palindrome_scan(x, True)[1]


def is_rich(x: str) -> bool:
    return count_distinct_palindromes(x) == len(x) + 1


def is_rich_by_suffixes(x: str) -> bool:
    """Every prefix has a palindromic suffix occurring only once in it."""
    for n in range(1, len(x) + 1):
        p = x[:n]
        ok = False
        for s in range(n, 0, -1):
            suf = p[n - s:]
            if suf == suf[::-1] and occurrences(p, suf) == 1:
                ok = True
                break
        if not ok:
            return False
    return True


# ---------------------------------------------------------------------------
# trapezoidal

def right_special_bound(x: str) -> int:
    """Minimal length with no right-special factor (R)."""
    n = len(x)
    for ell in range(n + 1):
        seen: dict[str, str] = {}
        special = False
        for i in range(n - ell):
            f = x[i:i + ell]
            nxt = x[i + ell]
            prev = seen.get(f)
            if prev is None:
                seen[f] = nxt
            elif prev != nxt:
                special = True
                break
        if not special:
            return ell
    return n + 1


def unrepeated_suffix_bound(x: str) -> int:
    """Minimal length of a suffix occurring only once (K)."""
    n = len(x)
    if n == 0:
        return 0
    for ell in range(1, n + 1):
        if x.find(x[n - ell:]) == n - ell:
            return ell
    return n


@dataclass(frozen=True)
class FactorStats:
    factor_counts: tuple[int, ...]
    palindrome_counts: tuple[int, ...]
    right_special_counts: tuple[int, ...]
    r_value: int
    k_value: int


def factor_stats(x: str) -> FactorStats:
    n = len(x)
    fc, pc, rc = [], [], []
    for ell in range(n + 1):
        fs = {x[i:i + ell] for i in range(n - ell + 1)}
        fc.append(len(fs))
        pc.append(sum(1 for f in fs if f == f[::-1]))
        ext: dict[str, set] = {}
        for i in range(n - ell):
            ext.setdefault(x[i:i + ell], set()).add(x[i + ell])
        rc.append(sum(1 for v in ext.values() if len(v) > 1))
    return FactorStats(tuple(fc), tuple(pc), tuple(rc),
                       right_special_bound(x), unrepeated_suffix_bound(x))


def is_trapezoidal(x: str) -> bool:
    """At most n+1 distinct factors of each length n."""
    n = len(x)
    for ell in range(n + 1):
        if len({x[i:i + ell] for i in range(n - ell + 1)}) > ell + 1:
            return False
    return True


def is_trapezoidal_by_rk(x: str) -> bool:
    return len(x) == right_special_bound(x) + unrepeated_suffix_bound(x)


# ---------------------------------------------------------------------------
# balanced

def is_balanced(x: str) -> bool:
    """Per-letter counts of equal-length factors differ by at most 1."""
    n = len(x)
    letters = sorted(set(x))
    for ell in range(1, n + 1):
        counts = {a: 0 for a in letters}
        for c in x[:ell]:
            counts[c] += 1
        lo = dict(counts)
        hi = dict(counts)
        for i in range(ell, n):
            counts[x[i]] += 1
            counts[x[i - ell]] -= 1
            for a in (x[i], x[i - ell]):
                if counts[a] < lo[a]:
                    lo[a] = counts[a]
                if counts[a] > hi[a]:
                    hi[a] = counts[a]
        if any(hi[a] - lo[a] > 1 for a in letters):
            return False
    return True


def is_balanced_coven_hedlund(x: str) -> bool:
    """Binary criterion: unbalanced iff 0v0 and 1v1 occur for a palindrome v."""
    if not set(x) <= {"0", "1"}:
        raise ValueError("Coven-Hedlund applies to binary words")
    for v in distinct_palindromes(x) | {""}:
        if "0" + v + "0" in x and "1" + v + "1" in x:
            return False
    return True


# ---------------------------------------------------------------------------
# maximal palindromes

def maximal_palindromes(prefix: str, window: int) -> set[str]:
    """Palindromic factors of prefix[:window] with no a.x.a in the prefix.

    The check against extensions is one-sided: the caller supplies a
    prefix long enough for absence to be meaningful (see the stabilized
    sequence-level helper).
    """
    if window > len(prefix):
        raise ValueError("window exceeds the supplied prefix")
    letters = sorted(set(prefix))
    out = set()
    for p in distinct_palindromes(prefix[:window]):
        if all(a + p + a not in prefix for a in letters):
            out.add(p)
    return out


# ---------------------------------------------------------------------------
# sequence-level enumeration with stabilization

_PREFIX_CACHE: dict[str, str] = {}


def sequence_prefix(name: str, length: int) -> str:
    """Prefix of a built-in sequence as a digit string, cached."""
    cached = _PREFIX_CACHE.get(name, "")
    if len(cached) < length:
        word = sequences.get(name).prefix_str(length)
        _PREFIX_CACHE[name] = word
        return word
    return cached[:length]


def _doubling_windows(start: int, cap: int = PREFIX_CAP):
    w = start
    while w <= cap:
        yield w
        w *= 2


def factor_length_sets(name: str, max_len: int,
                       start: int | None = None) -> dict[int, frozenset]:
    """Distinct factors of each length <= max_len, stable under doubling."""
    start = start or max(4 * max_len, 1024)
    prev = None
    for w in _doubling_windows(start):
        word = sequence_prefix(name, w)
        cur = {
            ell: frozenset(word[i:i + ell] for i in range(len(word) - ell + 1))
            for ell in range(max_len + 1)
        }
        if prev == cur:
            return cur
        prev = cur
    raise StabilizationError(f"factor sets of {name} up to {max_len}")


@dataclass(frozen=True)
class PropertyCount:
    property_name: str
    per_length: tuple[int, ...]
    total: int
    longest: int


PROPERTY_CHECKERS = {
    "closed": is_closed,
    "privileged": is_privileged,
    "rich": is_rich,
    "trapezoidal": is_trapezoidal_by_rk,
    "balanced": is_balanced,
    "palindromic": is_palindrome,
}


def distinct_property_factors(name: str, property_name: str,
                              max_len: int) -> PropertyCount:
    """Counts of distinct factors with the property, per length."""
    check = PROPERTY_CHECKERS[property_name]
    sets = factor_length_sets(name, max_len)
    per_length = [0] * (max_len + 1)
    for ell, factors in sets.items():
        per_length[ell] = sum(1 for f in factors if check(f))
    total = sum(per_length)
    longest = max((ell for ell, c in enumerate(per_length) if c), default=0)
    return PropertyCount(property_name, tuple(per_length), total, longest)


def count_palindromes_in_prefix(name: str, n: int) -> int:
    """Distinct palindromic factors (including empty) of the length-n prefix."""
    return count_distinct_palindromes(sequence_prefix(name, n))


def palindrome_count_profile(name: str, checkpoints) -> dict[int, int]:
    """Palindrome counts at several prefix lengths in one scan."""
    top = max(checkpoints)
    word = sequence_prefix(name, top)
    return _palindrome_scan(word, False, checkpoints)[2]


# rolling-hash parameters for the return-word scan (fixed for determinism)
_HM1, _HB1 = (1 << 31) - 1, 131
_HM2, _HB2 = (1 << 29) - 3, 137


def _closed_lengths_in(word: str, bound: int) -> set[int]:
    """Lengths of closed factors arising as complete returns in ``word``.

    A word is closed iff it is a complete first return to its longest
    border, so every closed length equals gap + border for a pair of
    consecutive occurrences of some factor.
    """
    import numpy as np

    n = len(word)
    out = {0, 1} if n else {0}
    vals = np.frombuffer(word.encode(), dtype=np.uint8).astype(np.int64)
    h1 = np.zeros(n + 1, dtype=np.int64)
    h2 = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        h1[i + 1] = (h1[i] * _HB1 + vals[i]) % _HM1
        h2[i + 1] = (h2[i] * _HB2 + vals[i]) % _HM2
    for ell in range(1, bound):
        if ell >= n:
            break
        p1 = pow(_HB1, ell, _HM1)
        p2 = pow(_HB2, ell, _HM2)
        k1 = (h1[ell:] - h1[:-ell] * p1) % _HM1
        k2 = (h2[ell:] - h2[:-ell] * p2) % _HM2
        keys = (k1 * _HM2 + k2).tolist()
        last: dict[int, int] = {}
        for i, key in enumerate(keys):
            prev = last.get(key)
            if prev is not None:
                total = i - prev + ell
                if total <= bound:
                    out.add(total)
            last[key] = i
    return out


def closed_length_set(name: str, bound: int) -> set[int]:
    """All n <= bound for which the sequence has a closed factor of length n."""
    prev = None
    for w in _doubling_windows(max(4 * bound, 2048)):
        cur = _closed_lengths_in(sequence_prefix(name, w), bound)
        if prev == cur:
            return cur
        prev = cur
    raise StabilizationError(f"closed lengths of {name} up to {bound}")


def _privileged_factors_in(word: str, max_n: int) -> set[str]:
    """Bottom-up closure: complete returns over privileged words."""
    found = set(set(word))
    queue = list(found)
    while queue:
        u = queue.pop()
        limit = max_n - len(u)
        prev = word.find(u)
        while prev != -1:
            nxt = word.find(u, prev + 1)
            if nxt == -1:
                break
            if nxt - prev <= limit:
                w = word[prev:nxt + len(u)]
                if w not in found:
                    found.add(w)
                    queue.append(w)
            prev = nxt
    found.add("")
    return found


def privileged_factor_set(name: str, max_n: int) -> set[str]:
    """Distinct privileged factors of length <= max_n, stable under doubling."""
    prev = None
    for w in _doubling_windows(max(4 * max_n, 2048)):
        cur = _privileged_factors_in(sequence_prefix(name, w), max_n)
        if prev == cur:
            return cur
        prev = cur
    raise StabilizationError(f"privileged factors of {name} up to {max_n}")


def privileged_length_counts(name: str, max_n: int) -> list[int]:
    counts = [0] * (max_n + 1)
    for f in privileged_factor_set(name, max_n):
        counts[len(f)] += 1
    return counts


def stable_maximal_palindromes(name: str, max_len: int,
                               start: int | None = None) -> set[str]:
    """Maximal palindromes of length <= max_len, stable under doubling."""
    start = start or max(8 * max_len, 4096)
    prev = None
    for w in _doubling_windows(start):
        word = sequence_prefix(name, w)
        cur = {p for p in maximal_palindromes(word, len(word))
               if len(p) <= max_len}
        if prev == cur:
            return cur
        prev = cur
    raise StabilizationError(f"maximal palindromes of {name} up to {max_len}")
