"""``shrinklab`` command line.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 a search bound was exhausted (inconclusive).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .harness import INCONCLUSIVE, growth_check, refute_decomposition
from .derivation import SearchBounds, Verdict, enumerate_words, is_member
from .grammar import GrammarError, format_form, format_grammar, format_word, load_grammar, parse_word
from .normalize import is_normal_form, to_normal_form
from .shrink import (STRATEGIES, ShrinkError, approximate_z, derive, factorize, format_source,
                     iter_shrink_steps, normal, select_vertex, shrink, verify_theorem_a)
from .subword import distinguished_cover, minimal_elements

OK, FAILED, USAGE, INCONCLUSIVE_EXIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _bounds(args, grammar, max_len):
    depth = args.max_depth
    if depth is None and os.environ.get("SHRINKLAB_DEFAULT_DEPTH"):
        try:
            depth = int(os.environ["SHRINKLAB_DEFAULT_DEPTH"])
        except ValueError:
            raise UsageError("SHRINKLAB_DEFAULT_DEPTH must be an integer") from None
    return SearchBounds.for_length(max_len, grammar, depth, args.max_steps)


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _read_words(path):
    words = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                words.append(tuple(line.split()) if " " in line else tuple(line))
    return words


def _shown(w):
    return format_word(w) or "ε"


# ---------------------------------------------------------------------------

def cmd_parse(args):
    g = load_grammar(args.grammar)
    bad = is_normal_form(g)
    payload = {"terminals": list(g.terminals), "nonterminals": list(g.nonterminals),
               "indices": list(g.indices), "start": g.start,
               "productions": [str(p) for p in g.productions],
               "violations": [str(v) for v in bad]}
    text = [f"{len(g.terminals)} terminals, {len(g.nonterminals)} nonterminals, "
            f"{len(g.indices)} indices, {len(g.productions)} productions"]
    text += ["normal form"] if not bad else ["normal-form violations:"] + [f"  {v}" for v in bad]
    _emit(args, payload, "\n".join(text))
    return OK


def cmd_normalize(args):
    g = load_grammar(args.grammar)
    ng = to_normal_form(g)
    text = format_grammar(ng)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    elif not args.json:
        sys.stdout.write(text)
    code = OK
    payload = {"grammar": text}
    if args.check_bound is not None:
        n = args.check_bound
        a = enumerate_words(g, n, _bounds(args, g, n))
        b = enumerate_words(ng, n, _bounds(args, ng, n))
        same = set(a) == set(b)
        payload["check"] = {"bound": n, "equal": same, "words": len(a),
                            "complete": a.complete and b.complete}
        print(f"# enumeration check up to length {n}: {'equal' if same else 'DIFFERENT'} "
              f"({len(a)} words)", file=sys.stderr)
        if not same:
            code = FAILED
        elif not (a.complete and b.complete):
            code = INCONCLUSIVE_EXIT
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    return code


def cmd_enumerate(args):
    g = load_grammar(args.grammar)
    words = enumerate_words(g, args.max_len, _bounds(args, g, args.max_len))
    ordered = sorted(words, key=lambda w: (len(w), w))
    payload = {"words": [format_word(w) for w in ordered], "complete": words.complete,
               "depth_pruned": words.depth_pruned}
    _emit(args, payload, "\n".join(_shown(w) for w in ordered))
    if not words.complete:
        print("# step budget exhausted; list may be incomplete", file=sys.stderr)
        return INCONCLUSIVE_EXIT
    return OK


def cmd_member(args):
    g = load_grammar(args.grammar)
    w = parse_word(args.word, g)
    res = is_member(g, w, _bounds(args, g, len(w)))
    if res.tree is not None:
        if args.emit_tree:
            with open(args.emit_tree, "w") as fh:
                json.dump(res.tree.to_json(), fh, sort_keys=True, indent=1)
        if args.emit_dot:
            with open(args.emit_dot, "w") as fh:
                fh.write(res.tree.to_dot())
    payload = {"word": format_word(w), "verdict": res.verdict.value,
               "tree": res.tree.to_json() if res.tree else None}
    _emit(args, payload, f"{_shown(w)}: {res.verdict.value}")
    return {Verdict.YES: OK, Verdict.NO: FAILED, Verdict.UNKNOWN: INCONCLUSIVE_EXIT}[res.verdict]


def _ztable(args, ng):
    return approximate_z(ng, args.m, max_form_len=args.max_form_len)


def cmd_shrink(args):
    g = load_grammar(args.grammar)
    ng = normal(g)
    w = parse_word(args.word, g)
    z = _ztable(args, ng)
    if args.chain:
        certs = list(iter_shrink_steps(ng, w, args.m, args.strategy, z))
        chain = [w] + [c.v for c in certs]
        payload = {"k": z.k, "C": z.C, "chain": [format_word(x) for x in chain],
                   "steps": [c.to_json() for c in certs]}
        lines = [f"k = {z.k}"] + [f"{len(x):4d}  {_shown(x)}" for x in chain]
        if args.plot:
            from .plotting import plot_chain
            plot_chain([len(x) for x in chain], z.k, args.plot, title=f"shrink chain, m = {args.m}")
        if args.emit_cert:
            with open(args.emit_cert, "w") as fh:
                json.dump(payload, fh, sort_keys=True, indent=1)
        _emit(args, payload, "\n".join(lines))
        return OK
    tree = derive(ng, w)
    fz = factorize(ng, tree, select_vertex(ng, tree, z))
    if args.distinguish:
        try:
            chosen = [int(x) for x in args.distinguish.split(",")]
        except ValueError:
            raise UsageError("--distinguish takes comma-separated factor indices") from None
    else:
        chosen = STRATEGIES[args.strategy](fz, args.m, ng)
    try:
        cert = shrink(ng, tree, fz, chosen, z)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {"k": z.k, "C": z.C, "certificate": cert.to_json()}
    if args.emit_cert:
        with open(args.emit_cert, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
    lines = [
        f"k = {z.k}, r = {fz.r}, vertex {list(fz.vertex)} ({format_source(fz.source)})",
        f"beta   = {format_form(fz.beta)}",
        "factors = " + " | ".join(_shown(f) for f in fz.factors),
        f"distinguished = {list(cert.distinguished)}, kept = {list(cert.kept)}",
        f"alpha  = {format_form(cert.alpha)}",
        f"v      = {_shown(cert.v)}",
    ]
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_check(args):
    g = load_grammar(args.grammar)
    ng = normal(g)
    z = _ztable(args, ng)
    words = enumerate_words(ng, args.max_len, _bounds(args, ng, args.max_len))
    reports = []
    lines = [f"m = {args.m}, C = {z.C}, k = {z.k}, table complete: {z.complete}"]
    for w in sorted(words, key=lambda w: (len(w), w)):
        if len(w) < z.k:
            continue
        try:
            rep = verify_theorem_a(g, w, args.m, z)
        except ShrinkError as exc:
            lines.append(f"FAIL {_shown(w)}: {exc}")
            reports.append(None)
            continue
        reports.append(rep)
        status = "PASS" if rep.ok else "FAIL"
        lines.append(f"{status} {_shown(w)}: r = {rep.r}, {len(rep.outcomes)} subsets, "
                     f"{len(rep.failures())} failed")
    ok = all(r is not None and r.ok for r in reports)
    lines.append(f"{len(reports)} words checked: {'all conditions hold' if ok else 'violations found'}")
    if args.plot:
        from .plotting import plot_check
        plot_check([r for r in reports if r], args.plot, title=f"shrinking check, m = {args.m}")
    payload = {"m": args.m, "C": z.C, "k": z.k, "table_complete": z.complete, "ok": ok,
               "enumeration_complete": words.complete,
               "reports": [r.to_json() if r else None for r in reports]}
    _emit(args, payload, "\n".join(lines))
    if not ok:
        return FAILED
    return OK if words.complete else INCONCLUSIVE_EXIT


def cmd_refute(args):
    sample = _read_words(args.sample)
    w = tuple(args.word.split()) if " " in args.word else tuple(args.word)
    try:
        res = refute_decomposition(sample, w, args.k, args.m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = res.verdict
    if res.factors:
        text += ": " + " | ".join("".join(f) for f in res.factors)
    _emit(args, res.to_json(), text)
    return INCONCLUSIVE_EXIT if res.verdict == INCONCLUSIVE else OK


def cmd_antichain(args):
    words = _read_words(args.words)
    out = distinguished_cover(words, args.m) if args.m else minimal_elements(words)
    ordered = sorted(out, key=lambda w: (len(w), w))
    _emit(args, {"words": ["".join(w) for w in ordered]}, "\n".join(_shown(w) for w in ordered))
    return OK


def cmd_growth(args):
    g = load_grammar(args.grammar)
    if len(g.terminals) != 1:
        raise UsageError("growth needs a one-letter alphabet")
    words = enumerate_words(g, args.max_len, _bounds(args, g, args.max_len))
    lengths = sorted(len(w) for w in words if w)
    ratio = growth_check(lengths)
    if args.plot:
        from .plotting import plot_growth
        plot_growth(lengths, args.plot)
    _emit(args, {"lengths": lengths, "max_ratio": str(ratio)},
          f"lengths {lengths}\nmax consecutive ratio {ratio}")
    return OK if words.complete else INCONCLUSIVE_EXIT


# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="shrinklab", description="Indexed-grammar shrinking toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--max-depth", type=int, help="maximum index-stack depth")
    bounds.add_argument("--max-steps", type=int, help="search step budget")
    table = argparse.ArgumentParser(add_help=False)
    table.add_argument("--m", type=int, default=1, help="number of distinguished factors")
    table.add_argument("--max-form-len", type=int, help="length bound for the cover table")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="validate a grammar and report normal-form violations")
    p.add_argument("grammar")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("normalize", parents=[common, bounds], help="print the normal form of a grammar")
    p.add_argument("grammar")
    p.add_argument("-o", "--output")
    p.add_argument("--check-bound", type=int, metavar="N",
                   help="compare the languages of input and output up to length N")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("enumerate", parents=[common, bounds], help="list words up to a length")
    p.add_argument("grammar")
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("member", parents=[common, bounds], help="bounded membership with a witness tree")
    p.add_argument("grammar")
    p.add_argument("word")
    p.add_argument("--emit-tree", metavar="FILE")
    p.add_argument("--emit-dot", metavar="FILE")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("shrink", parents=[common, table], help="shrink a word")
    p.add_argument("grammar")
    p.add_argument("word")
    p.add_argument("--distinguish", metavar="I,J,...")
    p.add_argument("--strategy", choices=sorted(STRATEGIES), default="max-length")
    p.add_argument("--chain", action="store_true", help="shrink repeatedly until |w| < k")
    p.add_argument("--emit-cert", metavar="FILE")
    p.add_argument("--plot", metavar="FILE", help="chain figure (with --chain)")
    p.set_defaults(func=cmd_shrink)

    p = sub.add_parser("check", parents=[common, bounds, table], help="verify the shrinking conditions on enumerated words")
    p.add_argument("grammar")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--plot", metavar="FILE")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("refute", parents=[common], help="search all decompositions against a sample")
    p.add_argument("sample")
    p.add_argument("word")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.set_defaults(func=cmd_refute)

    p = sub.add_parser("antichain", parents=[common], help="minimal elements or distinguished cover")
    p.add_argument("words")
    p.add_argument("--m", type=int)
    p.set_defaults(func=cmd_antichain)

    p = sub.add_parser("growth", parents=[common, bounds], help="length ratios of a one-letter language")
    p.add_argument("grammar")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--plot", metavar="FILE")
    p.set_defaults(func=cmd_growth)
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GrammarError, UsageError, OSError) as exc:
        print(f"shrinklab: {exc}", file=sys.stderr)
        return USAGE
    except ShrinkError as exc:
        print(f"shrinklab: {exc}", file=sys.stderr)
        return FAILED


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
