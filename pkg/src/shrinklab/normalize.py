"""Normal form for indexed grammars.

Target shapes: ``A -> B C``, ``A[f] -> B``, ``A -> B[f]``, ``A -> a``, plus
``S -> eps`` for a start symbol that never occurs on a right-hand side.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import NamedTuple

from .grammar import NT, Grammar, GrammarError, Production

log = logging.getLogger(__name__)


class Violation(NamedTuple):
    production: Production
    condition: int
    message: str

    def __str__(self):
        return f"({self.condition}) {self.production}: {self.message}"


def _shape_ok(p: Production, start: str) -> bool:
    rhs = p.rhs
    if not rhs:
        return p.lhs == start and p.pop is None
    if p.pop is not None:
        return len(rhs) == 1 and isinstance(rhs[0], NT) and not rhs[0].stack
    if len(rhs) == 2:
        return all(isinstance(x, NT) and not x.stack for x in rhs)
    if len(rhs) == 1:
        x = rhs[0]
        return not isinstance(x, NT) or len(x.stack) == 1
    return False


def is_normal_form(g: Grammar) -> list:
    """List every violation of the three normal-form conditions (empty = conformant)."""
    out = []
    for p in g.productions:
        if any(isinstance(x, NT) and x.name == g.start for x in p.rhs):
            out.append(Violation(p, 1, f"start symbol {g.start} occurs on the right-hand side"))
        if not p.rhs and (p.lhs != g.start or p.pop is not None):
            out.append(Violation(p, 2, "epsilon production for a non-start symbol"))
        elif not _shape_ok(p, g.start):
            if p.pop is not None:
                why = "pop productions must have the shape A[f] -> B"
            elif len(p.rhs) == 1 and isinstance(p.rhs[0], NT) and not p.rhs[0].stack:
                why = "unit production A -> B"
            else:
                why = "not of the shape A -> B C, A -> B[f] or A -> a"
            out.append(Violation(p, 3, why))
    return out


class _Names:
    def __init__(self, used):
        self.used = set(used)
        self.created = []

    def fresh(self, base):
        name, i = base, 0
        while name in self.used:
            i += 1
            name = f"{base}_{i}"
        self.used.add(name)
        self.created.append(name)
        return name


def _is_unit(rule):
    lhs, pop, rhs = rule
    return pop is None and len(rhs) == 1 and isinstance(rhs[0], NT) and not rhs[0].stack


def _dedupe(rules):
    seen, out = set(), []
    for r in rules:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


def to_normal_form(g: Grammar) -> Grammar:
    """Rewrite ``g`` into normal form; the generated language is unchanged.

    Inputs must be epsilon-free apart from ``S -> eps``.
    """
    for p in g.productions:
        if not p.rhs and p.lhs != g.start:
            raise GrammarError(f"epsilon production {p} is not supported for normalization")
    names = _Names(set(g.terminals) | set(g.nonterminals) | set(g.indices) | {"eps"})
    rules = [(p.lhs, p.pop, p.rhs) for p in g.productions]
    start = g.start

    # 1. fresh start symbol
    if any(isinstance(x, NT) and x.name == start for _, _, rhs in rules for x in rhs):
        if any(lhs == start and not rhs for lhs, _, rhs in rules):
            raise GrammarError(f"{start} -> eps while {start} occurs on a right-hand side")
        new_start = names.fresh(start + "0")
        rules += [(new_start, pop, rhs) for lhs, pop, rhs in rules if lhs == start]
        log.debug("fresh start %s replaces %s", new_start, start)
        start = new_start

    # 2. pop flattening
    pop_targets = {}
    out = []
    for lhs, pop, rhs in rules:
        if pop is not None and not (len(rhs) == 1 and isinstance(rhs[0], NT) and not rhs[0].stack):
            if rhs not in pop_targets:
                pop_targets[rhs] = names.fresh(f"{lhs}_{pop}")
                out.append((pop_targets[rhs], None, rhs))
            out.append((lhs, pop, (NT(pop_targets[rhs]),)))
        else:
            out.append((lhs, pop, rhs))
    rules = out

    # 3. index-string expansion
    chains = {}
    chain_rules = []

    def push_chain(item):
        # nonterminal deriving item by single pushes, bottom index first
        if item in chains:
            return chains[item]
        d0 = names.fresh(f"D_{item.name}_{''.join(item.stack)}")
        chains[item] = d0
        if len(item.stack) == 1:
            chain_rules.append((d0, None, (item,)))
        else:
            inner = push_chain(NT(item.name, item.stack[:-1]))
            chain_rules.append((d0, None, (NT(inner, (item.stack[-1],)),)))
        return d0

    out = []
    for lhs, pop, rhs in rules:
        new_rhs = tuple(
            NT(push_chain(x)) if isinstance(x, NT) and (len(x.stack) >= 2 or (x.stack and len(rhs) > 1))
            else x
            for x in rhs)
        out.append((lhs, pop, new_rhs))
    rules = out + chain_rules

    # 4. terminal lifting
    lifted = {}
    out = []
    for lhs, pop, rhs in rules:
        if len(rhs) >= 2:
            new_rhs = []
            for x in rhs:
                if isinstance(x, NT):
                    new_rhs.append(x)
                    continue
                if x not in lifted:
                    lifted[x] = names.fresh(f"T_{x}")
                    out.append((lifted[x], None, (x,)))
                new_rhs.append(NT(lifted[x]))
            rhs = tuple(new_rhs)
        out.append((lhs, pop, rhs))
    rules = out

    # 5. right-fold binarization
    folds = {}
    out = []

    def folded(seq, base):
        # nonterminal deriving seq (len >= 2) through binary rules
        if seq not in folds:
            folds[seq] = names.fresh(f"{base}_r")
            rhs = seq if len(seq) == 2 else (seq[0], NT(folded(seq[1:], base)))
            out.append((folds[seq], None, rhs))
        return folds[seq]

    for lhs, pop, rhs in rules:
        if len(rhs) >= 3:
            rhs = (rhs[0], NT(folded(rhs[1:], lhs)))
        out.append((lhs, pop, rhs))
    rules = out

    # 6. unit elimination by closure; cycles fall out of the closure
    units = {}
    for r in rules:
        if _is_unit(r):
            units.setdefault(r[0], []).append(r[2][0].name)
    lhs_order = _dedupe([r[0] for r in rules])
    out = []
    for a in lhs_order:
        closure, queue = [a], deque([a])
        while queue:
            for b in units.get(queue.popleft(), ()):
                if b not in closure:
                    closure.append(b)
                    queue.append(b)
        for b in closure:
            out.extend((a, pop, rhs) for lhs, pop, rhs in rules if lhs == b and not _is_unit((lhs, pop, rhs)))
    rules = _dedupe(out)

    # prune unreachable productions
    reach, queue = {start}, deque([start])
    while queue:
        a = queue.popleft()
        for lhs, _, rhs in rules:
            if lhs == a:
                for x in rhs:
                    if isinstance(x, NT) and x.name not in reach:
                        reach.add(x.name)
                        queue.append(x.name)
    rules = [r for r in rules if r[0] in reach]
    nts = [a for a in list(g.nonterminals) + names.created if a in reach]
    out = Grammar(g.terminals, tuple(nts), g.indices, start,
                  tuple(Production(i, *r) for i, r in enumerate(rules)))
    bad = is_normal_form(out)
    if bad:  # pragma: no cover - would be a bug in the steps above
        raise AssertionError(f"normalization left violations: {bad}")
    return out
