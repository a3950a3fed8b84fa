"""Subsequence divisibility on words and sentential forms.

``v`` divides ``w`` when ``v`` is a subsequence of ``w``.  Items are compared
as whole symbols, so the functions work on strings, token tuples and
sentential forms alike.  An embedding is the tuple of target positions
matched by each source item.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations
from typing import Optional, Sequence


def divides(v: Sequence, w: Sequence) -> Optional[tuple]:
    """Leftmost embedding of ``v`` into ``w``, or None."""
    out = []
    j = 0
    for x in v:
        while j < len(w) and w[j] != x:
            j += 1
        if j == len(w):
            return None
        out.append(j)
        j += 1
    return tuple(out)


def divides_covering(v: Sequence, w: Sequence, required) -> Optional[tuple]:
    """Leftmost embedding of ``v`` into ``w`` whose image contains ``required``."""
    req = set(required)
    n, m = len(v), len(w)
    if any(not 0 <= r < m for r in req) or len(req) > n:
        return None
    # ok[i][j]: v[i:] embeds into w[j:] hitting every required position >= j
    ok = [[False] * (m + 1) for _ in range(n + 1)]
    ok[n][m] = True
    for j in range(m - 1, -1, -1):
        ok[n][j] = ok[n][j + 1] and j not in req
    for i in range(n - 1, -1, -1):
        row, nxt = ok[i], ok[i + 1]
        for j in range(m - 1, -1, -1):
            row[j] = (v[i] == w[j] and nxt[j + 1]) or (j not in req and row[j + 1])
    if not ok[0][0]:
        return None
    out, j = [], 0
    for i in range(n):
        while not (v[i] == w[j] and ok[i + 1][j + 1]):
            j += 1
        out.append(j)
        j += 1
    return tuple(out)


def _order_key(y):
    return (len(y), repr(y))


def minimal_elements(ys) -> set:
    """The members of ``ys`` not divisible by any other member."""
    kept = []
    for y in sorted(set(ys), key=_order_key):
        # a non-minimal y is divisible by some minimal element already kept
        if not any(len(x) < len(y) and divides(x, y) is not None for x in kept):
            kept.append(y)
    return set(kept)


def _markings(y, m):
    # copies are numbered in positional order; divisibility preserves the
    # order of marked letters, so other numberings add isomorphic copies only
    for chosen in combinations(range(len(y)), m):
        copy = dict(zip(chosen, range(1, m + 1)))
        yield tuple((a, copy.get(i, 0)) for i, a in enumerate(y))


def distinguished_cover(ys, m: int) -> set:
    """Finite cover of ``ys`` for words with ``m`` distinguished letters.

    Every ``y`` outside the result, with any ``m`` of its positions
    distinguished, is divided by some member of the result through an
    embedding that hits all distinguished positions.
    """
    if m < 1:
        raise ValueError("m must be positive")
    ys = set(ys)
    short = {y for y in ys if len(y) < m}
    groups = defaultdict(list)
    for y in ys - short:
        for marked in _markings(y, m):
            signature = tuple(s for s in marked if s[1])
            groups[signature].append(marked)
    originals = {tuple(y): y for y in ys}
    cover = set(short)
    for group in groups.values():
        for x in minimal_elements(group):
            cover.add(originals[tuple(a for a, _ in x)])
    return cover


def cover_violations(cover, ys, m: int) -> list:
    """Pairs ``(y, positions)`` for which ``cover`` fails the distinguished-cover property."""
    bad = []
    by_len = sorted(cover, key=_order_key)
    for y in ys:
        if y in cover:
            continue
        for chosen in combinations(range(len(y)), m):
            if not any(x != y and divides_covering(x, y, chosen) is not None for x in by_len):
                bad.append((y, chosen))
    return bad
