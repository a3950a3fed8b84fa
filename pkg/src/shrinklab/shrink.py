"""Shrinking long words of an indexed language.

Given a derivation tree of ``w``, a vertex ``p`` is chosen whose cut view
``beta(p)`` (the subtree at ``p`` stopped where ``p``'s top index is
consumed, with the inherited stack removed) is not in the cover table while
the views of all its descendants are.  The pieces of ``w`` produced by the
symbols of ``beta(p)`` become factors; a cover element that properly divides
``beta(p)`` and hits the distinguished factors selects a proper subproduct,
which is again in the language.

All functions expect a grammar in normal form.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

from .derivation import DerivationTree, SearchBounds, Verdict, is_member, validate_tree
from .grammar import NT, Grammar, append_stack, format_form, format_word
from .normalize import is_normal_form, to_normal_form
from .subword import distinguished_cover, divides_covering

log = logging.getLogger(__name__)


class ShrinkError(RuntimeError):
    pass


def source_class(label):
    """``A`` for an empty stack, ``(A, f)`` for top index ``f``; None for terminals."""
    if not isinstance(label, NT):
        return None
    return label.name if not label.stack else (label.name, label.stack[0])


def source_item(src) -> NT:
    return NT(src) if isinstance(src, str) else NT(src[0], (src[1],))


def format_source(src) -> str:
    return src if isinstance(src, str) else f"{src[0]}[{src[1]}]"


def _form_key(form):
    return (len(form), tuple(str(x) for x in form))


def normal(g: Grammar) -> Grammar:
    return g if not is_normal_form(g) else to_normal_form(g)


# ---------------------------------------------------------------------------
# beta / gamma views

def _walk(g, v, path, d, out):
    # d: position of the marked index from the top of v's stack
    if not isinstance(v.label, NT):
        out.append((v.label, path))
        return
    prod = g.production(v.prod)
    popped = 1 if prod.pop is not None else 0
    if popped and d == 1:
        below = len(v.label.stack) - 1
        for i, c in enumerate(v.children):
            lab = c.label
            if isinstance(lab, NT):
                lab = NT(lab.name, lab.stack[:len(lab.stack) - below])
            out.append((lab, path + (i,)))
        return
    inherited = len(v.label.stack) - popped
    for i, c in enumerate(v.children):
        if isinstance(c.label, NT):
            pushed = len(c.label.stack) - inherited
            _walk(g, c, path + (i,), d - popped + pushed, out)
        else:
            out.append((c.label, path + (i,)))


def cut_leaves(g: Grammar, t: DerivationTree, p=()):
    """``beta(p)`` paired with the paths of the cut-subtree leaves producing each symbol."""
    v = t.at(p)
    if not isinstance(v.label, NT):
        return [(v.label, tuple(p))]
    if not v.label.stack:
        return [(u.label, tuple(p) + q) for q, u in v.walk() if not isinstance(u.label, NT)]
    out = []
    _walk(g, v, tuple(p), 1, out)
    return out


def beta_view(g: Grammar, t: DerivationTree, p=()) -> tuple:
    """The index-stripped cut view of vertex ``p``."""
    try:
        t.at(p)
    except (IndexError, TypeError):
        raise ShrinkError(f"vertex {list(p)} is not in the tree") from None
    return tuple(sym for sym, _ in cut_leaves(g, t, p))


def gamma_view(g: Grammar, t: DerivationTree, p=()) -> tuple:
    """``beta(p)`` with the stack below ``p``'s top index appended again."""
    lab = t.at(p).label
    omega = lab.stack[1:] if isinstance(lab, NT) else ()
    return append_stack(beta_view(g, t, p), omega)


# ---------------------------------------------------------------------------
# index-free derivable forms and the cover table

def derivable_forms(g: Grammar, sources, max_len: int, max_depth: int, max_steps=1_000_000):
    """Index-free forms of length <= ``max_len`` derivable from each source item.

    Returns ``(forms, depth_pruned, complete)`` where ``forms`` maps every
    item reached (stack depth <= ``max_depth``) to a frozenset of forms.
    Computed as a least fixpoint over items: an item derives itself when
    its stack is empty, and the bounded concatenations of what its
    children derive for each applicable production.
    """
    roots = [source_item(s) if not isinstance(s, NT) else s for s in sources]
    rules = {}
    parents = {}
    pruned = False
    seen = set(roots)
    queue = deque(roots)
    while queue:
        item = queue.popleft()
        alts = []
        for p in g.productions_for(item.name):
            stack = item.stack
            if p.pop is not None:
                if not stack or stack[0] != p.pop:
                    continue
                stack = stack[1:]
            kids = []
            for x in p.rhs:
                if isinstance(x, NT):
                    x = NT(x.name, x.stack + stack)
                    if len(x.stack) > max_depth:
                        pruned = True
                        break
                kids.append(x)
            else:
                alts.append(tuple(kids))
                for x in kids:
                    if isinstance(x, NT):
                        parents.setdefault(x, set()).add(item)
                        if x not in seen:
                            seen.add(x)
                            queue.append(x)
        rules[item] = alts

    forms = {item: frozenset({(NT(item.name),)} if not item.stack else ()) for item in rules}
    work = deque(rules)
    queued = set(rules)
    steps = 0
    complete = True
    while work:
        steps += 1
        if steps > max_steps:
            complete = False
            break
        item = work.popleft()
        queued.discard(item)
        acc_all = set(forms[item])
        for kids in rules[item]:
            acc = {()}
            for x in kids:
                options = forms[x] if isinstance(x, NT) else ((x,),)
                acc = {a + o for a in acc for o in options if len(a) + len(o) <= max_len}
                if not acc:
                    break
            acc_all |= acc
        if len(acc_all) != len(forms[item]):
            forms[item] = frozenset(acc_all)
            for parent in parents.get(item, ()):
                if parent not in queued:
                    queued.add(parent)
                    work.append(parent)
    return forms, pruned, complete


@dataclass
class ZTable:
    """Per-source cover sets of index-free forms, with ``C`` and ``k = C*C + 2``."""

    grammar: Grammar
    m: int
    entries: dict
    C: int
    k: int
    complete: bool
    max_form_len: int
    max_depth: int
    depth_pruned: bool = False
    empty_sources: tuple = ()

    def entry(self, src):
        return self.entries.get(src, frozenset())

    def covers(self, label, beta) -> bool:
        """Whether ``beta`` (the view of a vertex labelled ``label``) lies in the table."""
        if not isinstance(label, NT) or len(beta) <= self.m:
            return True
        return tuple(beta) in self.entry(source_class(label))

    def to_json(self):
        return {
            "m": self.m, "C": self.C, "k": self.k, "complete": self.complete,
            "max_form_len": self.max_form_len, "max_depth": self.max_depth,
            "depth_pruned": self.depth_pruned,
            "empty_sources": [format_source(s) for s in self.empty_sources],
            "entries": {format_source(s): sorted(format_form(f) for f in fs)
                        for s, fs in self.entries.items()},
        }


def default_form_len(m):
    # longer bounds grow the table (and k) quickly; see max_form_len
    return m + 1


def approximate_z(g: Grammar, m: int, bounds: Optional[SearchBounds] = None,
                  max_form_len: Optional[int] = None) -> ZTable:
    """Build the cover table for every source ``A`` and ``A f``.

    For each source the index-free forms it derives (up to ``max_form_len``
    symbols) are reduced with :func:`distinguished_cover`; every derivable
    form of length <= m is kept as well.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if is_normal_form(g):
        raise ValueError("approximate_z needs a grammar in normal form")
    lz = max_form_len or default_form_len(m)
    depth = bounds.max_index_depth if bounds else lz + len(g.indices) + 2
    steps = bounds.max_steps if bounds else 1_000_000
    sources = list(g.nonterminals) + [(a, f) for a in g.nonterminals for f in g.indices]
    forms, pruned, complete = derivable_forms(g, sources, lz, depth, steps)
    entries = {}
    for src in sources:
        ys = forms.get(source_item(src), frozenset())
        cover = distinguished_cover(ys, m) | {y for y in ys if len(y) <= m}
        entries[src] = frozenset(cover)
    longest = max((len(f) for fs in entries.values() for f in fs), default=0)
    c = max(2, m, longest)
    empty = tuple(s for s in sources if not entries[s])
    table = ZTable(g, m, entries, c, c * c + 2, complete and lz >= c * c and not empty,
                   lz, depth, pruned, empty)
    log.debug("Z table: C=%d k=%d complete=%s", table.C, table.k, table.complete)
    return table


# ---------------------------------------------------------------------------
# vertex selection and factorization

def select_vertex(g: Grammar, t: DerivationTree, z: ZTable):
    """Deepest (then leftmost) vertex whose view is outside the table.

    All proper descendants of the returned vertex have views inside it.
    """
    best = None
    for path, v in t.walk():
        if not isinstance(v.label, NT):
            continue
        if best is not None and len(path) <= len(best):
            continue
        if not z.covers(v.label, beta_view(g, t, path)):
            best = path
    if best is None:
        raise ShrinkError(f"every vertex view lies in the table (|w| = {len(t.word())}, "
                          f"k = {z.k}); nothing to shrink")
    return best


@dataclass(frozen=True)
class Origin:
    kind: str  # "left", "unit" or "right"
    symbol: object = None
    beta_index: Optional[int] = None

    def to_json(self):
        d = {"kind": self.kind}
        if self.kind == "unit":
            d["symbol"] = str(self.symbol)
            d["beta_index"] = self.beta_index
        return d


@dataclass(frozen=True)
class Factorization:
    factors: tuple
    origins: tuple
    vertex: tuple
    beta: tuple
    source: object

    @property
    def r(self):
        return len(self.factors)

    @property
    def word(self):
        return tuple(a for f in self.factors for a in f)

    def unit_factor(self, beta_index):
        for i, o in enumerate(self.origins):
            if o.kind == "unit" and o.beta_index == beta_index:
                return i
        raise KeyError(beta_index)

    def to_json(self):
        return {
            "factors": [format_word(f) for f in self.factors],
            "origins": [o.to_json() for o in self.origins],
            "vertex": list(self.vertex),
            "beta": format_form(self.beta),
            "source": format_source(self.source),
        }


def _span(t, p):
    start = 0
    v = t
    for i in p:
        start += sum(len(c.word()) for c in v.children[:i])
        v = v.children[i]
    return start, start + len(v.word())


def factorize(g: Grammar, t: DerivationTree, p) -> Factorization:
    """Split the yield of ``t`` into left context, one piece per symbol of ``beta(p)``, right context."""
    w = t.word()
    lo, hi = _span(t, p)
    leaves = cut_leaves(g, t, p)
    factors, origins = [], []
    if lo > 0:
        factors.append(w[:lo])
        origins.append(Origin("left"))
    for i, (sym, path) in enumerate(leaves):
        factors.append(t.at(path).word())
        origins.append(Origin("unit", sym, i))
    if hi < len(w):
        factors.append(w[hi:])
        origins.append(Origin("right"))
    return Factorization(tuple(factors), tuple(origins), tuple(p),
                         tuple(sym for sym, _ in leaves), source_class(t.at(p).label))


# ---------------------------------------------------------------------------
# shrinking

@dataclass
class ShrinkCertificate:
    factorization: Factorization
    distinguished: tuple
    alpha: tuple
    embedding: tuple
    kept: tuple
    v: tuple
    membership_witness: Optional[DerivationTree]
    fallback: bool = False

    @property
    def t(self):
        return len(self.kept)

    def to_json(self):
        return {
            "word": format_word(self.factorization.word),
            **self.factorization.to_json(),
            "distinguished": list(self.distinguished),
            "alpha": format_form(self.alpha),
            "embedding": list(self.embedding),
            "kept": list(self.kept),
            "v": format_word(self.v),
            "fallback": self.fallback,
            "witness": self.membership_witness.to_json() if self.membership_witness else None,
        }


def _find_alpha(candidates, beta, required):
    for alpha in sorted(candidates, key=_form_key):
        if tuple(alpha) == tuple(beta):
            continue
        emb = divides_covering(alpha, beta, required)
        if emb is not None:
            return tuple(alpha), emb
    return None


def shrink(g: Grammar, t: DerivationTree, fz: Factorization, distinguished, z: ZTable,
           bounds: Optional[SearchBounds] = None) -> ShrinkCertificate:
    """Drop factors of ``fz`` while keeping ``distinguished`` and staying in the language."""
    distinguished = tuple(sorted(set(distinguished)))
    if len(distinguished) != z.m or not all(0 <= i < fz.r for i in distinguished):
        raise ValueError(f"need {z.m} distinct factor indices in range({fz.r}), got {distinguished}")
    beta = fz.beta
    required = [fz.origins[i].beta_index for i in distinguished if fz.origins[i].kind == "unit"]
    for j in range(len(beta)):
        if len(required) >= z.m:
            break
        if j not in required:
            required.append(j)
    required = sorted(required)

    fallback = False
    found = _find_alpha(z.entry(fz.source), beta, required)
    if found is None:
        fallback = True
        forms, _, _ = derivable_forms(g, [fz.source], len(beta) - 1, z.max_depth)
        found = _find_alpha(forms.get(source_item(fz.source), ()), beta, required)
        if found is None:
            raise ShrinkError(f"no derivable proper divisor of {format_form(beta)} from "
                              f"{format_source(fz.source)} covers positions {required}")
    alpha, emb = found

    kept = [i for i, o in enumerate(fz.origins) if o.kind != "unit" or o.beta_index in emb]
    v = tuple(a for i in kept for a in fz.factors[i])
    mem = is_member(g, v, bounds)
    if mem.verdict is not Verdict.YES:
        raise ShrinkError(f"shrunk word {format_word(v)!r} not confirmed in the language "
                          f"({mem.verdict.value})")
    return ShrinkCertificate(fz, distinguished, alpha, emb, tuple(kept), v, mem.tree, fallback)


def _longest(fz, m, exclude=()):
    order = sorted((i for i in range(fz.r) if i not in exclude),
                   key=lambda i: (-len(fz.factors[i]), i))
    return order[:m]


def distinguish_max_length(fz: Factorization, m: int, g: Grammar = None):
    return tuple(sorted(_longest(fz, m)))


def distinguish_parikh(fz: Factorization, m: int, g: Grammar):
    """Per terminal, the factor holding most copies of it; padded with the longest others."""
    chosen = []
    for a in g.terminals:
        counts = [f.count(a) for f in fz.factors]
        best = max(counts, default=0)
        if best:
            i = counts.index(best)
            if i not in chosen:
                chosen.append(i)
    chosen = chosen[:m]
    chosen += _longest(fz, m - len(chosen), exclude=chosen)
    return tuple(sorted(chosen))


STRATEGIES = {"max-length": distinguish_max_length, "parikh": distinguish_parikh}


def derive(g: Grammar, w, bounds=None) -> DerivationTree:
    mem = is_member(g, w, bounds)
    if mem.verdict is not Verdict.YES:
        raise ShrinkError(f"{format_word(w)!r} has no derivation within bounds ({mem.verdict.value})")
    return mem.tree


def iter_shrink_steps(g: Grammar, w, m: int, strategy="max-length", z: Optional[ZTable] = None):
    """Yield one certificate per shrinking step until the word is shorter than ``k``."""
    g = normal(g)
    z = z or approximate_z(g, m)
    if z.m != m:
        raise ValueError(f"table built for m={z.m}, not m={m}")
    choose = STRATEGIES[strategy] if isinstance(strategy, str) else strategy
    w = tuple(w)
    while len(w) >= z.k:
        tree = derive(g, w)
        p = select_vertex(g, tree, z)
        fz = factorize(g, tree, p)
        cert = shrink(g, tree, fz, choose(fz, m, g), z)
        log.info("%d -> %d", len(w), len(cert.v))
        yield cert
        w = cert.v


def shrink_chain(g: Grammar, w, m: int, strategy="max-length", z: Optional[ZTable] = None):
    """The descending chain ``w = v0, v1, ...`` ending below ``k``."""
    return [tuple(w)] + [c.v for c in iter_shrink_steps(g, w, m, strategy, z)]


# ---------------------------------------------------------------------------
# checking all conditions

@dataclass
class SubsetOutcome:
    subset: tuple
    ok: bool
    v: Optional[tuple] = None
    kept: tuple = ()
    problems: list = field(default_factory=list)

    def to_json(self):
        return {"subset": list(self.subset), "ok": self.ok,
                "v": format_word(self.v) if self.v is not None else None,
                "kept": list(self.kept), "problems": self.problems}


@dataclass
class ShrinkReport:
    word: tuple
    m: int
    k: int
    factorization: Factorization
    condition1: bool
    condition2: bool
    outcomes: list

    @property
    def r(self):
        return self.factorization.r

    @property
    def ok(self):
        return self.condition1 and self.condition2 and all(o.ok for o in self.outcomes)

    def failures(self):
        return [o for o in self.outcomes if not o.ok]

    def to_json(self):
        return {"word": format_word(self.word), "m": self.m, "k": self.k, "r": self.r,
                "ok": self.ok, "condition1": self.condition1, "condition2": self.condition2,
                "factorization": self.factorization.to_json(),
                "outcomes": [o.to_json() for o in self.outcomes]}


def _check_certificate(cert, w, m, ng, g):
    problems = []
    fz = cert.factorization
    if not set(cert.distinguished) <= set(cert.kept):
        problems.append("distinguished factors not kept")
    if list(cert.kept) != sorted(set(cert.kept)):
        problems.append("kept indices not strictly increasing")
    if not m <= len(cert.kept) < fz.r:
        problems.append(f"t = {len(cert.kept)} outside [{m}, {fz.r})")
    if cert.v != tuple(a for i in cert.kept for a in fz.factors[i]):
        problems.append("v is not the product of the kept factors")
    if len(cert.v) >= len(w):
        problems.append("v is not shorter than w")
    try:
        if validate_tree(ng, cert.membership_witness) != cert.v:
            problems.append("witness tree does not yield v")
    except ValueError as exc:
        problems.append(f"witness tree invalid: {exc}")
    if is_member(g, cert.v).verdict is not Verdict.YES:
        problems.append("v not confirmed by the membership oracle")
    return problems


def verify_theorem_a(g: Grammar, w, m: int, z: ZTable) -> ShrinkReport:
    """Factor ``w`` and shrink it for every choice of ``m`` factors, checking each condition.

    ``v`` is confirmed against ``g`` as given, independently of the normal
    form the construction runs on.
    """
    w = tuple(w)
    if z.m != m:
        raise ValueError(f"table built for m={z.m}, not m={m}")
    if len(w) < z.k:
        raise ValueError(f"|w| = {len(w)} is below k = {z.k}")
    ng = z.grammar
    tree = derive(ng, w)
    fz = factorize(ng, tree, select_vertex(ng, tree, z))
    cond1 = m < fz.r <= z.k
    cond2 = all(len(f) > 0 for f in fz.factors) and fz.word == w
    outcomes = []
    for subset in combinations(range(fz.r), m):
        try:
            cert = shrink(ng, tree, fz, subset, z)
        except ShrinkError as exc:
            outcomes.append(SubsetOutcome(subset, False, problems=[str(exc)]))
            continue
        problems = _check_certificate(cert, w, m, ng, g)
        outcomes.append(SubsetOutcome(subset, not problems, cert.v, cert.kept, problems))
    return ShrinkReport(w, m, z.k, fz, cond1, cond2, outcomes)
