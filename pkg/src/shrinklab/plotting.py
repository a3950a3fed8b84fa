"""Figures for shrink chains, shrinking checks and growth ratios."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, ax, path, title):
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_chain(lengths, k, path, title=None):
    """Word length along a shrink chain, with the ``|w|/k`` floor for each step."""
    fig, ax = plt.subplots(figsize=(6, 4))
    steps = range(len(lengths))
    ax.plot(steps, lengths, "o-", label="|v_i|")
    if len(lengths) > 1:
        ax.plot(steps[1:], [x / k for x in lengths[:-1]], "v--", color="grey",
                label=f"|v_(i-1)| / k  (k = {k})")
    ax.axhline(k, color="red", lw=0.8, ls=":", label="k")
    ax.set_xlabel("step")
    ax.set_ylabel("length")
    ax.set_yscale("log", base=2)
    ax.legend()
    return _finish(fig, ax, path, title)


def plot_check(reports, path, title=None):
    """Length of every shrunk word against the length of its source word."""
    fig, ax = plt.subplots(figsize=(6, 4))
    xs, ys, bad_x, bad_y = [], [], [], []
    k = None
    for rep in reports:
        k = rep.k
        for o in rep.outcomes:
            if o.v is None:
                continue
            (xs if o.ok else bad_x).append(len(rep.word))
            (ys if o.ok else bad_y).append(len(o.v))
    ax.scatter(xs, ys, s=18, label="shrunk word (verified)")
    if bad_x:
        ax.scatter(bad_x, bad_y, s=24, marker="x", color="red", label="failed check")
    if xs or bad_x:
        top = max(xs + bad_x)
        ax.plot([0, top], [0, top], color="grey", lw=0.8, label="|v| = |w|")
        if k:
            ax.plot([0, top], [0, top / k], color="grey", lw=0.8, ls="--", label="|v| = |w|/k")
    ax.set_xlabel("|w|")
    ax.set_ylabel("|v|")
    ax.legend()
    return _finish(fig, ax, path, title)


def plot_growth(lengths, path, title=None):
    fig, ax = plt.subplots(figsize=(6, 4))
    ratios = [b / a for a, b in zip(lengths, lengths[1:])]
    ax.bar(range(1, len(lengths)), ratios)
    ax.set_xlabel("n")
    ax.set_ylabel("f(n+1) / f(n)")
    return _finish(fig, ax, path, title)
