"""Bounded derivation search and derivation trees.

Both searches are breadth-first over leftmost sentential forms with global
deduplication.  A state is ``(prefix, rest)``: the terminal prefix already
produced and the remaining items, which start with a nonterminal.  Item
count never decreases in an epsilon-free grammar, so forms longer than the
target are dropped.
"""

from __future__ import annotations

import enum
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .grammar import NT, Grammar, apply_production, format_word, is_terminal


@dataclass(frozen=True)
class SearchBounds:
    max_items: int
    max_index_depth: int
    max_steps: int = 500_000

    def __post_init__(self):
        if min(self.max_items, self.max_index_depth, self.max_steps) <= 0:
            raise ValueError(f"search bounds must be positive: {self}")

    @classmethod
    def for_length(cls, max_len, grammar, max_depth=None, max_steps=None):
        """Defaults: index depth ``max_len + |F| + 2``."""
        depth = max_depth if max_depth is not None else max_len + len(grammar.indices) + 2
        return cls(max(max_len, 1), max(depth, 1), max_steps or cls.max_steps)


class WordSet(frozenset):
    """Set of words that also records whether the search ran to completion.

    ``complete`` is False when the step budget ran out; ``depth_pruned``
    is True when some form was dropped for exceeding the index depth.
    """

    def __new__(cls, words=(), complete=True, depth_pruned=False, steps=0):
        self = super().__new__(cls, words)
        self.complete = complete
        self.depth_pruned = depth_pruned
        self.steps = steps
        return self


def _check_epsilon(g):
    for p in g.productions:
        if not p.rhs and any(isinstance(x, NT) and x.name == p.lhs
                             for q in g.productions for x in q.rhs):
            raise ValueError(f"{p}: erasing a symbol that occurs on a right-hand side "
                             "breaks length pruning")


def _expand(head, prod, depth):
    """Items replacing ``head``, or None when a pushed stack is too deep."""
    stack = head.stack
    if prod.pop is not None:
        if not stack or stack[0] != prod.pop:
            return ()
        stack = stack[1:]
    out = []
    for x in prod.rhs:
        if isinstance(x, NT):
            s = x.stack + stack
            if len(s) > depth:
                return None
            out.append(NT(x.name, s))
        else:
            out.append(x)
    return tuple(out)


def _applicable(g, head):
    for p in g.productions_for(head.name):
        if p.pop is None or (head.stack and head.stack[0] == p.pop):
            yield p


def enumerate_words(g: Grammar, max_len: int, bounds: Optional[SearchBounds] = None) -> WordSet:
    """All words of ``L(g)`` of length at most ``max_len`` reachable within ``bounds``."""
    _check_epsilon(g)
    if max_len <= 0:
        return WordSet({()} if g.has_empty_word else set())
    b = bounds or SearchBounds.for_length(max_len, g)
    limit = min(max_len, b.max_items)
    start = ((), (NT(g.start),))
    seen = {start}
    queue = deque([start])
    words = set()
    steps = 0
    complete = True
    pruned = False
    while queue:
        steps += 1
        if steps > b.max_steps:
            complete = False
            break
        prefix, rest = queue.popleft()
        if not rest:
            words.add(prefix)
            continue
        head, tail = rest[0], rest[1:]
        for p in _applicable(g, head):
            new = _expand(head, p, b.max_index_depth)
            if new is None:
                pruned = True
                continue
            items = new + tail
            if len(prefix) + len(items) > limit:
                continue
            i = 0
            while i < len(items) and is_terminal(items[i]):
                i += 1
            state = (prefix + items[:i], items[i:])
            if state not in seen:
                seen.add(state)
                queue.append(state)
    return WordSet(words, complete=complete, depth_pruned=pruned, steps=steps)


# ---------------------------------------------------------------------------
# trees

@dataclass
class DerivationTree:
    """A vertex of a derivation tree; the root vertex stands for the tree.

    ``prod`` is the id of the production applied here (None at leaves).
    Vertices are addressed by paths: tuples of child positions.
    """

    label: object
    prod: Optional[int] = None
    children: list = field(default_factory=list)

    def at(self, path):
        v = self
        for i in path:
            v = v.children[i]
        return v

    def walk(self, path=()):
        """Preorder ``(path, vertex)`` pairs."""
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.walk(path + (i,))

    def word(self):
        if not self.children:
            return (self.label,) if is_terminal(self.label) else ()
        return tuple(a for c in self.children for a in c.word())

    def depth(self):
        return 1 + max((c.depth() for c in self.children), default=0)

    def to_json(self):
        if isinstance(self.label, NT):
            label = {"nt": self.label.name, "stack": list(self.label.stack)}
        else:
            label = {"t": self.label}
        return {"label": label, "prod": self.prod, "children": [c.to_json() for c in self.children]}

    @classmethod
    def from_json(cls, data):
        lab = data["label"]
        label = NT(lab["nt"], tuple(lab.get("stack", ()))) if "nt" in lab else lab["t"]
        return cls(label, data.get("prod"), [cls.from_json(c) for c in data.get("children", ())])

    def to_dot(self, name="derivation"):
        lines = [f"digraph {name} {{", "  node [shape=box, fontsize=10];"]
        ids = {}
        for path, v in self.walk():
            ids[path] = f"n{len(ids)}"
            text = str(v.label) if isinstance(v.label, NT) else v.label
            if v.prod is not None:
                text += f"\\n#{v.prod}"
            shape = "" if isinstance(v.label, NT) else ", shape=plaintext"
            lines.append(f'  {ids[path]} [label="{text}"{shape}];')
            if path:
                lines.append(f"  {ids[path[:-1]]} -> {ids[path]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


class TreeError(ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"vertex {list(path)}: {message}")


def validate_tree(g: Grammar, t: DerivationTree):
    """Replay every production of ``t``; return its yield."""
    if t.label != NT(g.start):
        raise TreeError((), f"root must be {g.start} with an empty stack, got {t.label}")
    for path, v in t.walk():
        if v.prod is None:
            if v.children:
                raise TreeError(path, "children without a production")
            if isinstance(v.label, NT):
                raise TreeError(path, f"leaf {v.label} is not a terminal")
            continue
        if not isinstance(v.label, NT):
            raise TreeError(path, "terminal vertex with a production")
        try:
            p = g.production(v.prod)
            expected = apply_production((v.label,), 0, p)
        except (KeyError, ValueError) as exc:
            raise TreeError(path, str(exc)) from None
        got = tuple(c.label for c in v.children)
        if got != expected:
            raise TreeError(path, f"children {[str(x) for x in got]} do not match production "
                                  f"{p} giving {[str(x) for x in expected]}")
    return t.word()


def tree_from_leftmost(g: Grammar, prod_ids) -> DerivationTree:
    """Build the tree of a leftmost derivation given its production sequence."""
    root = DerivationTree(NT(g.start))
    frontier = [root]
    for pid in prod_ids:
        k = next(i for i, v in enumerate(frontier) if isinstance(v.label, NT))
        v = frontier[k]
        v.prod = pid
        v.children = [DerivationTree(x) for x in apply_production((v.label,), 0, g.production(pid))]
        frontier[k:k + 1] = v.children
    return root


# ---------------------------------------------------------------------------
# membership

class Verdict(enum.Enum):
    YES = "yes"
    NO = "no_within_bounds"
    UNKNOWN = "unknown"


@dataclass
class Membership:
    verdict: Verdict
    tree: Optional[DerivationTree] = None
    steps: int = 0
    depth_pruned: bool = False

    def __bool__(self):
        return self.verdict is Verdict.YES


def is_member(g: Grammar, w, bounds: Optional[SearchBounds] = None) -> Membership:
    """Search for a leftmost derivation of ``w``.

    NO means the search at ``max_items = |w|`` finished inside the depth and
    step bounds without a derivation; UNKNOWN means the step budget ran out.
    """
    _check_epsilon(g)
    w = tuple(w)
    n = len(w)
    if n == 0:
        for p in g.productions_for(g.start):
            if not p.rhs and p.pop is None:
                return Membership(Verdict.YES, DerivationTree(NT(g.start), p.id, []))
        return Membership(Verdict.NO)
    b = bounds or SearchBounds.for_length(n, g)
    start = (0, (NT(g.start),))
    parent = {start: None}
    queue = deque([start])
    steps = 0
    pruned = False
    while queue:
        steps += 1
        if steps > b.max_steps:
            return Membership(Verdict.UNKNOWN, steps=steps, depth_pruned=pruned)
        state = queue.popleft()
        pos, rest = state
        if not rest:
            if pos == n:
                ids = []
                while parent[state] is not None:
                    state, pid = parent[state]
                    ids.append(pid)
                return Membership(Verdict.YES, tree_from_leftmost(g, reversed(ids)), steps, pruned)
            continue
        head, tail = rest[0], rest[1:]
        for p in _applicable(g, head):
            new = _expand(head, p, b.max_index_depth)
            if new is None:
                pruned = True
                continue
            items = new + tail
            if pos + len(items) > min(n, b.max_items):
                continue
            i, j = 0, pos
            while i < len(items) and is_terminal(items[i]):
                if items[i] != w[j]:
                    break
                i += 1
                j += 1
            else:
                nxt = (j, items[i:])
                if nxt not in parent:
                    parent[nxt] = (state, p.id)
                    queue.append(nxt)
    return Membership(Verdict.NO, steps=steps, depth_pruned=pruned)


def tree_json(t: DerivationTree) -> str:
    return json.dumps(t.to_json(), sort_keys=True)


def describe(m: Membership, w) -> str:
    return f"{format_word(w) or 'ε'}: {m.verdict.value}"
