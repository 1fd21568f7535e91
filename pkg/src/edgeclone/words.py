"""The embedding order on nonempty words.

``a <=_E b`` holds when ``b`` arises from ``a`` by inserting letters that
already occurred earlier, so the symbol sets agree and every letter first
occurs at the matching spot.  Words are tuples of 0-based letters and
witnesses are tuples of 0-based positions into ``b``.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Optional, Sequence

from .config import ContractError, DomainError

Word = tuple[int, ...]
Witness = tuple[int, ...]


def check_word(a: Sequence[int], t: int | None = None) -> Word:
    a = tuple(a)
    if not a:
        raise DomainError("words are nonempty")
    if t is not None:
        for v in a:
            if not 0 <= v < t:
                raise DomainError(f"letter {v} not in domain of size {t}")
    return a


def symbols(a: Word) -> frozenset[int]:
    return frozenset(a)


def last(a: Word) -> int:
    return a[-1]


def start(a: Word) -> Word:
    if len(a) < 2:
        raise DomainError("start() needs a word of length at least 2")
    return a[:-1]


def first_occ(a: Word, b: int) -> Optional[int]:
    """Position of the first ``b`` in ``a``, or None."""
    try:
        return a.index(b)
    except ValueError:
        return None


def first_occurrences(a: Word) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, c in enumerate(a):
        out.setdefault(c, i)
    return out


def is_witness(a: Word, b: Word, h: Sequence[int]) -> bool:
    """Check the three defining conditions of ``a <=_E b`` for ``h``."""
    if len(h) != len(a):
        return False
    if any(not 0 <= j < len(b) for j in h):
        return False
    if any(h[i] >= h[i + 1] for i in range(len(h) - 1)):
        return False
    if any(a[i] != b[h[i]] for i in range(len(a))):
        return False
    if set(a) != set(b):
        return False
    fb = first_occurrences(b)
    return all(h[i] == fb[c] for c, i in first_occurrences(a).items())


def embeds(a: Sequence[int], b: Sequence[int]) -> Optional[Witness]:
    """A witness for ``a <=_E b`` or None.

    First occurrences are pinned; the remaining letters are matched greedily
    inside the gaps between consecutive pins, which is optimal per gap.
    """
    a, b = check_word(a), check_word(b)
    if len(a) > len(b) or set(a) != set(b):
        return None
    fa, fb = first_occurrences(a), first_occurrences(b)
    pins = {i: fb[c] for c, i in fa.items()}
    h = [0] * len(a)
    pos = 0
    i = 0
    while i < len(a):
        if i in pins:
            j = pins[i]
            if j < pos:
                return None
            h[i] = j
            pos = j + 1
            i += 1
            continue
        # next pinned target bounds this gap
        nxt = next((pins[q] for q in range(i + 1, len(a)) if q in pins), len(b))
        while i < len(a) and i not in pins:
            while pos < nxt and b[pos] != a[i]:
                pos += 1
            if pos >= nxt:
                return None
            h[i] = pos
            pos += 1
            i += 1
    return tuple(h)


def embeds_bruteforce(a: Word, b: Word) -> Optional[Witness]:
    for h in itertools.combinations(range(len(b)), len(a)):
        if is_witness(a, b, h):
            return h
    return None


def word_le(a: Sequence[int], b: Sequence[int]) -> bool:
    return embeds(a, b) is not None


def lex_lt(x: Sequence[int], y: Sequence[int]) -> bool:
    """Strict lexicographic order on tuples of equal length."""
    return tuple(x) < tuple(y)


def t_map(a: Word, b: Word, h: Sequence[int], x: Sequence[int]) -> tuple[int, ...]:
    """The coordinate-projection map ``A^|a| -> A^|b|`` attached to a witness."""
    a, b = tuple(a), tuple(b)
    if not is_witness(a, b, h):
        raise ContractError(f"{tuple(h)} does not witness {a} <=_E {b}")
    if len(x) != len(a):
        raise DomainError(f"argument has length {len(x)}, expected {len(a)}")
    return tuple(x[i] for i in t_map_sources(a, b, h))


def t_map_sources(a: Word, b: Word, h: Sequence[int]) -> tuple[int, ...]:
    """For each position of b, the position of the argument it copies."""
    inverse = {j: i for i, j in enumerate(h)}
    fa = first_occurrences(a)
    return tuple(inverse[j] if j in inverse else fa[b[j]] for j in range(len(b)))


def predecessors(a: Sequence[int]) -> list[Word]:
    """Words obtained by deleting one non-first occurrence, in lex order."""
    a = check_word(a)
    fa = first_occurrences(a)
    first = set(fa.values())
    out = {a[:i] + a[i + 1:] for i in range(len(a)) if i not in first}
    return sorted(out)


def words(t: int, length: int) -> Iterable[Word]:
    return itertools.product(range(t), repeat=length)


def words_up_to(t: int, max_len: int) -> list[Word]:
    return [w for n in range(1, max_len + 1) for w in words(t, n)]


def minimal_elements(member: Callable[[Word], bool], t: int, max_len: int) -> tuple[list[Word], bool]:
    """Bounded search for the ``<=_E``-minimal words of an upward closed set.

    Scans lengths 1..max_len, each in lex order.  A word counts as minimal if
    it is a member, none of its deletion predecessors is, and no minimal found
    earlier embeds into it.  The flag is True when no minimal word turned up at
    length ``max_len``; it is a stabilisation signal, not a completeness proof.
    """
    if max_len < 1:
        raise DomainError("max_len must be at least 1")
    cache: dict[Word, bool] = {}

    def is_member(w: Word) -> bool:
        if w not in cache:
            cache[w] = bool(member(w))
        return cache[w]

    minimals: list[Word] = []
    for n in range(1, max_len + 1):
        for w in words(t, n):
            if not is_member(w):
                continue
            if any(is_member(p) for p in predecessors(w)):
                continue
            if any(word_le(m, w) for m in minimals):
                continue
            minimals.append(w)
    closed = all(len(m) < max_len for m in minimals)
    return minimals, closed


def find_good_pair(seq: Sequence[Sequence[int]]) -> Optional[tuple[int, int]]:
    """Least ``(i, j)`` with ``i < j`` and ``seq[i] <=_E seq[j]`` (0-based)."""
    seq = [tuple(w) for w in seq]
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if word_le(seq[i], seq[j]):
                return i, j
    return None
