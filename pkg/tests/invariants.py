"""Structural checks on views of derivation trees."""

from shrinklab.grammar import NT, append_stack
from shrinklab.shrink import beta_view, gamma_view


def structural_problems(g, t):
    """Violations of the view laws at every applicable vertex of ``t``."""
    bad = []
    for p, v in t.walk():
        if not isinstance(v.label, NT):
            continue
        prod = g.production(v.prod)
        beta = beta_view(g, t, p)
        omega = v.label.stack[1:]
        if gamma_view(g, t, p) != append_stack(beta, omega):
            bad.append((p, "gamma != beta . omega"))
        kids = [c for c in v.children if isinstance(c.label, NT)]
        if prod.pop is None and len(prod.rhs) == 2 and len(kids) == 2:
            joined = beta_view(g, t, p + (0,)) + beta_view(g, t, p + (1,))
            if beta != joined:
                bad.append((p, "beta is not the concatenation of the children's views"))
        if prod.pop is not None and v.label.stack and len(prod.rhs) == 1 and len(beta) != 1:
            bad.append((p, "pop vertex view is not a single symbol"))
        if len(prod.rhs) == 1 and not isinstance(prod.rhs[0], NT) and len(beta) != 1:
            bad.append((p, "terminal vertex view is not a single symbol"))
    return bad
