"""Indexed grammars, sentential forms and the line-oriented grammar format.

A sentential form is a tuple of items.  A terminal item is a plain ``str``;
a nonterminal item is an :class:`NT` carrying its index stack, leftmost
index on top.  Words are tuples of terminal tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

EPS = "eps"


class NT(NamedTuple):
    name: str
    stack: tuple = ()

    def __str__(self):
        if not self.stack:
            return self.name
        return f"{self.name}[{' '.join(self.stack)}]"


Item = Union[str, NT]
Form = tuple  # tuple[Item, ...]
Word = tuple  # tuple[str, ...]


class GrammarError(ValueError):
    """Raised for malformed grammar text or an inconsistent grammar."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message)


class DerivationError(ValueError):
    """Raised when a production cannot be applied to a sentential form."""


def is_terminal(item) -> bool:
    return not isinstance(item, NT)


@dataclass(frozen=True)
class Production:
    """``lhs[pop] -> rhs``.  ``pop`` is the consumed index for a pop production.

    RHS nonterminals carry the index string they push on top of the
    inherited stack.
    """

    id: int
    lhs: str
    pop: Optional[str]
    rhs: tuple

    def shape(self):
        return (self.lhs, self.pop, self.rhs)

    def __str__(self):
        lhs = self.lhs if self.pop is None else f"{self.lhs}[{self.pop}]"
        rhs = " ".join(str(x) for x in self.rhs) if self.rhs else EPS
        return f"{lhs} -> {rhs}"


@dataclass(frozen=True)
class Grammar:
    terminals: tuple
    nonterminals: tuple
    indices: tuple
    start: str
    productions: tuple = ()
    _by_lhs: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        t, n, f = set(self.terminals), set(self.nonterminals), set(self.indices)
        for kind, decl in (("terminal", self.terminals), ("nonterminal", self.nonterminals),
                           ("index", self.indices)):
            if len(set(decl)) != len(decl):
                raise GrammarError(f"duplicate declaration among {kind}s")
        clash = (t & n) | (t & f) | (n & f)
        if clash:
            raise GrammarError(f"symbols declared twice across kinds: {sorted(clash)}")
        if self.start not in n:
            raise GrammarError(f"undeclared symbol {self.start!r} used as start")
        ids = [p.id for p in self.productions]
        if len(set(ids)) != len(ids):
            raise GrammarError("production identifiers are not unique")
        for p in self.productions:
            if p.lhs not in n:
                raise GrammarError(f"undeclared symbol {p.lhs!r} in {p}")
            if p.pop is not None and p.pop not in f:
                raise GrammarError(f"undeclared symbol {p.pop!r} in {p}")
            if not p.rhs and (p.lhs != self.start or p.pop is not None):
                raise GrammarError(f"epsilon production only allowed for the start symbol: {p}")
            for item in p.rhs:
                if isinstance(item, NT):
                    if item.name not in n:
                        raise GrammarError(f"undeclared symbol {item.name!r} in {p}")
                    for x in item.stack:
                        if x not in f:
                            raise GrammarError(f"undeclared symbol {x!r} in {p}")
                elif item not in t:
                    raise GrammarError(f"undeclared symbol {item!r} in {p}")
        by_lhs = {a: [] for a in self.nonterminals}
        for p in self.productions:
            by_lhs[p.lhs].append(p)
        object.__setattr__(self, "_by_lhs", {a: tuple(ps) for a, ps in by_lhs.items()})

    def productions_for(self, nonterminal):
        return self._by_lhs.get(nonterminal, ())

    def production(self, pid):
        for p in self.productions:
            if p.id == pid:
                return p
        raise KeyError(f"no production with id {pid}")

    @property
    def has_empty_word(self):
        return any(p.lhs == self.start and not p.rhs for p in self.productions)

    def same_as(self, other) -> bool:
        """Equality up to declaration order (production ids ignored)."""
        return (set(self.terminals) == set(other.terminals)
                and set(self.nonterminals) == set(other.nonterminals)
                and set(self.indices) == set(other.indices)
                and self.start == other.start
                and sorted(map(str, self.productions)) == sorted(map(str, other.productions)))

    def with_productions(self, productions, nonterminals=None, start=None):
        prods = tuple(Production(i, p.lhs, p.pop, p.rhs) for i, p in enumerate(productions))
        return Grammar(self.terminals, tuple(nonterminals or self.nonterminals), self.indices,
                       start or self.start, prods)


# ---------------------------------------------------------------------------
# derivation steps

def apply_production(form: Sequence, position: int, production: Production) -> Form:
    """Rewrite the nonterminal at ``position`` with ``production``.

    Each RHS nonterminal gets its pushed string on top of the inherited
    stack (minus the popped index for a pop production).  Terminals drop
    the stack.
    """
    if not 0 <= position < len(form):
        raise DerivationError(f"position {position} out of range for form of length {len(form)}")
    item = form[position]
    if not isinstance(item, NT):
        raise DerivationError(f"item {position} is the terminal {item!r}")
    if item.name != production.lhs:
        raise DerivationError(f"production {production} does not rewrite {item.name}")
    stack = item.stack
    if production.pop is not None:
        if not stack or stack[0] != production.pop:
            raise DerivationError(f"production {production} needs index {production.pop!r} "
                                  f"on top of {item}")
        stack = stack[1:]
    new = tuple(NT(x.name, x.stack + stack) if isinstance(x, NT) else x
                for x in production.rhs)
    return tuple(form[:position]) + new + tuple(form[position + 1:])


def append_stack(form: Sequence, omega: Sequence) -> Form:
    """``form . omega``: append ``omega`` below every nonterminal's stack."""
    omega = tuple(omega)
    return tuple(NT(x.name, x.stack + omega) if isinstance(x, NT) else x for x in form)


def is_ground(form) -> bool:
    return all(not isinstance(x, NT) for x in form)


def project_word(form) -> Word:
    if not is_ground(form):
        raise DerivationError("sentential form still contains a nonterminal")
    return tuple(form)


def format_form(form) -> str:
    return " ".join(str(x) for x in form) if form else "ε"


def format_word(word) -> str:
    word = tuple(word)
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return " ".join(word)


def parse_word(text: str, grammar: Grammar) -> Word:
    """Split ``text`` into terminal tokens.

    Whitespace-separated input is taken literally; otherwise the string is
    tokenised greedily by the longest matching terminal.
    """
    text = text.strip()
    if text in ("", EPS, "ε"):
        return ()
    if any(ch.isspace() for ch in text):
        tokens = tuple(text.split())
    else:
        terms = sorted(grammar.terminals, key=len, reverse=True)
        tokens, i = [], 0
        while i < len(text):
            for t in terms:
                if text.startswith(t, i):
                    tokens.append(t)
                    i += len(t)
                    break
            else:
                raise GrammarError(f"cannot split {text!r} into terminals at offset {i}")
        tokens = tuple(tokens)
    for t in tokens:
        if t not in grammar.terminals:
            raise GrammarError(f"{t!r} is not a terminal")
    return tokens


# ---------------------------------------------------------------------------
# text format

_DECL = re.compile(r"^(terminals|nonterminals|indices|start)\s*:(.*)$")
_ITEM = re.compile(r"([^\s\[\]#]+)(\[([^\]]*)\])?")


def _items(text, line_no, col0):
    out = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _ITEM.match(text, pos)
        if not m:
            raise GrammarError(f"unexpected character {text[pos]!r}", line_no, col0 + pos + 1)
        stack = tuple(m.group(3).split()) if m.group(2) else None
        out.append((m.group(1), stack, col0 + pos + 1))
        pos = m.end()
    return out


def parse_grammar(text: str) -> Grammar:
    decls = {}
    raw_prods = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _DECL.match(line.strip())
        if m:
            key = m.group(1)
            if key in decls:
                raise GrammarError(f"duplicate declaration of {key!r}", line_no, 1)
            values = m.group(2).split()
            if key == "start":
                if len(values) != 1:
                    raise GrammarError("start takes exactly one symbol", line_no, 1)
                values = values[0]
            decls[key] = values
            continue
        if "->" not in line:
            raise GrammarError("expected a declaration or a production", line_no, 1)
        lhs_text, rhs_text = line.split("->", 1)
        lhs_items = _items(lhs_text, line_no, 0)
        if len(lhs_items) != 1:
            raise GrammarError("left-hand side must be a single nonterminal", line_no, 1)
        rhs_col = len(lhs_text) + 2
        raw_prods.append((line_no, lhs_items[0], _items(rhs_text, line_no, rhs_col)))

    for key in ("terminals", "nonterminals", "indices", "start"):
        if key not in decls:
            if key == "indices":
                decls[key] = []
            else:
                raise GrammarError(f"missing declaration {key!r}")
    terminals = tuple(decls["terminals"])
    nonterminals = tuple(decls["nonterminals"])
    indices = tuple(decls["indices"])
    for kind, values in (("terminal", terminals), ("nonterminal", nonterminals), ("index", indices)):
        seen = set()
        for v in values:
            if v in seen:
                raise GrammarError(f"duplicate declaration of {kind} {v!r}")
            seen.add(v)
    start = decls["start"]
    if start not in nonterminals:
        raise GrammarError(f"undeclared symbol {start!r} used as start")
    tset, nset, fset = set(terminals), set(nonterminals), set(indices)

    prods = []
    for line_no, (lname, lstack, lcol), rhs_items in raw_prods:
        if lname not in nset:
            raise GrammarError(f"undeclared symbol {lname!r}", line_no, lcol)
        pop = None
        if lstack is not None:
            if len(lstack) != 1:
                raise GrammarError("a pop left-hand side takes exactly one index", line_no, lcol)
            pop = lstack[0]
            if pop not in fset:
                raise GrammarError(f"undeclared symbol {pop!r}", line_no, lcol)
        rhs = []
        names = [name for name, _, _ in rhs_items]
        if EPS in names:
            if len(rhs_items) != 1:
                raise GrammarError("eps must stand alone on the right-hand side", line_no, rhs_items[0][2])
            if lname != start or pop is not None:
                raise GrammarError("epsilon production only allowed for the start symbol", line_no, 1)
        else:
            for name, stack, col in rhs_items:
                if name in tset:
                    if stack is not None:
                        raise GrammarError(f"terminal {name!r} carrying an index string", line_no, col)
                    rhs.append(name)
                elif name in nset:
                    for x in stack or ():
                        if x not in fset:
                            raise GrammarError(f"undeclared symbol {x!r}", line_no, col)
                    rhs.append(NT(name, tuple(stack or ())))
                else:
                    raise GrammarError(f"undeclared symbol {name!r}", line_no, col)
            if not rhs:
                raise GrammarError("empty right-hand side (write eps)", line_no, 1)
        prods.append(Production(len(prods), lname, pop, tuple(rhs)))
    return Grammar(terminals, nonterminals, indices, start, tuple(prods))


def format_grammar(g: Grammar) -> str:
    lines = [
        f"terminals: {' '.join(g.terminals)}",
        f"nonterminals: {' '.join(g.nonterminals)}",
        f"indices: {' '.join(g.indices)}",
        f"start: {g.start}",
    ]
    lines.extend(str(p) for p in g.productions)
    return "\n".join(lines) + "\n"


def load_grammar(path) -> Grammar:
    with open(path) as fh:
        return parse_grammar(fh.read())
