"""Independent reference implementations used by the tests."""

from collections import deque
from itertools import combinations

from shrinklab.grammar import NT


def lcs_divides(v, w):
    """Subsequence test via longest common subsequence length."""
    n, m = len(v), len(w)
    t = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n):
        for j in range(m):
            t[i + 1][j + 1] = t[i][j] + 1 if v[i] == w[j] else max(t[i][j + 1], t[i + 1][j])
    return t[n][m] == n


def all_embeddings(v, w):
    for pos in combinations(range(len(w)), len(v)):
        if all(w[p] == x for p, x in zip(pos, v)):
            yield pos


def naive_words(g, max_len, max_depth):
    """Rewrite any nonterminal occurrence (not only the leftmost); no prefix states."""
    start = (NT(g.start),)
    seen = {start}
    queue = deque([start])
    words = set()
    while queue:
        form = queue.popleft()
        spots = [i for i, x in enumerate(form) if isinstance(x, NT)]
        if not spots:
            words.add(form)
            continue
        for i in spots:
            head = form[i]
            for p in g.productions_for(head.name):
                stack = head.stack
                if p.pop is not None:
                    if not stack or stack[0] != p.pop:
                        continue
                    stack = stack[1:]
                new = []
                for x in p.rhs:
                    new.append(NT(x.name, x.stack + stack) if isinstance(x, NT) else x)
                if any(isinstance(x, NT) and len(x.stack) > max_depth for x in new):
                    continue
                nf = form[:i] + tuple(new) + form[i + 1:]
                if len(nf) <= max_len and nf not in seen:
                    seen.add(nf)
                    queue.append(nf)
    return words
