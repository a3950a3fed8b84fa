"""Checks built on the shrinking property of indexed languages.

``growth_check`` bounds consecutive ratios of the lengths in a one-letter
language; ``refute_decomposition`` searches every factorization of a word
against a finite sample of a language to see whether any could satisfy
the shrinking property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

NO_DECOMPOSITION = "no valid decomposition"
FOUND = "decomposition found"
INCONCLUSIVE = "inconclusive"


def growth_check(lengths) -> Fraction:
    """Largest ratio ``lengths[i+1] / lengths[i]``."""
    lengths = list(lengths)
    if len(lengths) < 2:
        raise ValueError("need at least two lengths")
    if lengths[0] <= 0 or any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise ValueError("lengths must be positive and strictly increasing")
    return max(Fraction(b, a) for a, b in zip(lengths, lengths[1:]))


@dataclass
class Refutation:
    verdict: str
    factors: tuple = ()
    witnesses: dict = field(default_factory=dict)
    factorizations_checked: int = 0

    def to_json(self):
        return {
            "verdict": self.verdict,
            "factors": ["".join(f) for f in self.factors],
            "witnesses": {",".join(map(str, k)): list(v) for k, v in sorted(self.witnesses.items())},
            "factorizations_checked": self.factorizations_checked,
        }


def search_size(n, k, m):
    """Subproducts examined over all factorizations of a length-``n`` word."""
    return sum(comb(n - 1, r - 1) * 2 ** r for r in range(m + 1, min(k, n) + 1))


def refute_decomposition(sample, w, k: int, m: int, cap: int = 5_000_000) -> Refutation:
    """Exhaustively look for ``w = w1...wr`` (m < r <= k) with every ``m`` factors
    inside a proper subproduct that lies in ``sample``.
    """
    sample = {tuple(x) for x in sample}
    w = tuple(w)
    if w not in sample:
        raise ValueError("the word must belong to the sample")
    if k <= m:
        return Refutation(NO_DECOMPOSITION)
    if search_size(len(w), k, m) > cap:
        return Refutation(INCONCLUSIVE)
    n = len(w)
    checked = 0
    for r in range(m + 1, min(k, n) + 1):
        for cuts in combinations(range(1, n), r - 1):
            bounds = (0,) + cuts + (n,)
            factors = tuple(w[a:b] for a, b in zip(bounds, bounds[1:]))
            checked += 1
            good = [frozenset(sub) for t in range(m, r) for sub in combinations(range(r), t)
                    if tuple(a for i in sub for a in factors[i]) in sample]
            witnesses = {}
            for chosen in combinations(range(r), m):
                hit = next((s for s in good if s.issuperset(chosen)), None)
                if hit is None:
                    break
                witnesses[chosen] = tuple(sorted(hit))
            else:
                return Refutation(FOUND, factors, witnesses, checked)
    return Refutation(NO_DECOMPOSITION, factorizations_checked=checked)


def power_family(n_max):
    """Sample ``{(a^n b)^n : 1 <= n <= n_max}`` used to argue non-indexedness."""
    return {tuple(("a" * n + "b") * n) for n in range(1, n_max + 1)}
