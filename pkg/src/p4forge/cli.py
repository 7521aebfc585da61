"""Command-line front end: recognize, decompose, count, constants, pattern,
sample, stats, and verify.

Exit codes: 0 success, 1 domain error (bad input graph, unknown class,
bounds), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

import mpmath as mp

DEFAULT_PRECISION_ENV = "P4FORGE_PRECISION"


class CliError(Exception):
    pass


def _read_graph(path: str):
    from .graphs import graph_from_json

    with open(path) if path != "-" else sys.stdin as fh:
        return graph_from_json(json.load(fh))


def _num(x, digits: int = 10) -> str:
    return mp.nstr(x, digits)


def cmd_recognize(args) -> int:
    from .families import recognize
    from .trees import tree_to_sexp

    g = _read_graph(args.infile)
    ok, tree, node = recognize(g, args.klass)
    out = {"class": args.klass, "member": ok}
    if ok:
        out["witness_tree"] = tree_to_sexp(tree)
    else:
        out["violating_node"] = tree_to_sexp(node)
    print(json.dumps(out))
    return 0


def cmd_decompose(args) -> int:
    from .trees import canonical_tree, tree_to_dot, tree_to_sexp

    g = _read_graph(args.infile)
    t = canonical_tree(g)
    if args.format == "dot":
        print(tree_to_dot(t))
    else:
        print(tree_to_sexp(t))
    return 0


def cmd_count(args) -> int:
    from .series import graph_count

    if args.table:
        lo, hi = (1, int(args.table)) if "-" not in args.table else map(int, args.table.split("-"))
        rows = [(n, graph_count(args.klass, n)) for n in range(lo, hi + 1)]
        if args.csv:
            print("n,count")
            for n, c in rows:
                print(f"{n},{c}")
        else:
            for n, c in rows:
                print(n, c)
    else:
        if args.n is None:
            raise CliError("count needs --n or --table")
        print(graph_count(args.klass, args.n))
    return 0


def cmd_constants(args) -> int:
    from .asymptotics import constants_table
    from .families import CLASS_IDS

    ids = list(CLASS_IDS) if args.klass == "all" else [args.klass]
    rows = constants_table(ids, precision=args.precision)
    digits = 10
    if args.json:
        print(
            json.dumps(
                [
                    {k: (v if isinstance(v, str) else _num(v, digits)) for k, v in row.items()}
                    for row in rows
                ]
            )
        )
    else:
        hdr = f"{'class':11s} {'R_inv':>12s} {'R':>12s} {'kappa':>12s} {'C':>12s} {'K_P4tilde':>12s}"
        print(hdr)
        for row in rows:
            print(
                f"{row['class']:11s} {_num(row['R_inv']):>12s} {_num(row['R']):>12s} "
                f"{_num(row['kappa']):>12s} {_num(row['C']):>12s} {_num(row['K_P4tilde']):>12s}"
            )
    return 0


def cmd_pattern(args) -> int:
    from .patterns import pattern_series, subtree_probability_exact
    from .trees import tree_from_sexp

    tau = tree_from_sexp(args.tau)
    n = args.n
    series = pattern_series(tau, args.klass, n)
    count = int(series[n])
    out = {"class": args.klass, "tau": args.tau, "n": n, "marked_trees": str(count)}
    if args.probability:
        p = subtree_probability_exact(tau, args.klass, n)
        out["probability"] = str(p)
        out["probability_float"] = float(p)
    print(json.dumps(out))
    return 0


def cmd_sample(args) -> int:
    from .graphs import graph_to_json
    from .sampler import sample_tree
    from .trees import graph_of, tree_to_sexp

    rng = random.Random(args.seed)
    t = sample_tree(args.klass, args.n, rng)
    fmt = args.format or (os.path.splitext(args.out or "")[1].lstrip(".") or "json")
    if fmt in ("sexp", "tree.sexp"):
        text = tree_to_sexp(t) + "\n"
    elif fmt == "pgm":
        text = _adjacency_pgm(graph_of(t))
    elif fmt == "json":
        text = json.dumps(graph_to_json(graph_of(t))) + "\n"
    else:
        raise CliError(f"unknown output format {fmt!r}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _adjacency_pgm(g) -> str:
    """Adjacency heat map in label order (plain PGM, black = edge)."""
    order = sorted(range(g.n), key=lambda i: g.labels[i])
    lines = [f"P2\n{g.n} {g.n}\n1"]
    for i in order:
        row = ["0" if g.adj[i] >> j & 1 else "1" for j in order]
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def cmd_stats(args) -> int:
    from .sampler import empirical_stats

    rng = random.Random(args.seed)
    rep = empirical_stats(args.klass, args.n, args.trials, rng)
    if args.csv:
        keys = ["class", "n", "trials", "p4_per_n_mean", "p4_per_n_se", "bull_per_n32_mean", "bull_per_n32_se"]
        print(",".join(keys))
        print(",".join(str(rep[k]) for k in keys))
    else:
        print(json.dumps(rep, indent=2))
    return 0


def cmd_verify(args) -> int:
    from .asymptotics import singularity_report
    from .families import CLASS_IDS, is_member, is_member_definitional
    from .graphs import all_labeled_graphs
    from .patterns import count_trees
    from .series import brute_force_class_count, graph_count

    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(("PASS " if ok else "FAIL ") + name)
        if not ok:
            failures += 1

    n_max = 5 if args.level == "desk" else 4
    for cid in CLASS_IDS:
        ok = all(graph_count(cid, n) == brute_force_class_count(cid, n) for n in range(1, n_max + 1))
        check(f"count oracle {cid} (n <= {n_max})", ok)
        ok = all(count_trees(cid, n) == graph_count(cid, n) for n in range(1, 6))
        check(f"tree enumeration {cid} (n <= 5)", ok)
        rep = singularity_report(cid)
        check(f"singularity residual {cid}", rep.residual < 1e-12)
    ok = True
    for g in all_labeled_graphs(4):
        for cid in CLASS_IDS:
            if is_member(g, cid) != is_member_definitional(g, cid):
                ok = False
    check("recognizer equivalence (n = 4)", ok)
    print("verify:", "all passed" if failures == 0 else f"{failures} failures")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    from .families import CLASS_IDS

    p = argparse.ArgumentParser(
        prog="p4forge",
        description="Enumeration, recognition, counting and uniform sampling "
        "of graph families with restricted induced four-vertex paths.",
    )
    env_prec = float(os.environ.get(DEFAULT_PRECISION_ENV, "1e-30"))
    sub = p.add_subparsers(dest="command", required=True)
    classes = list(CLASS_IDS)

    sp = sub.add_parser("recognize", help="test membership of a graph")
    sp.add_argument("--class", dest="klass", required=True, choices=classes)
    sp.add_argument("--in", dest="infile", required=True, help="edge-list JSON file, or - for stdin")
    sp.set_defaults(func=cmd_recognize)

    sp = sub.add_parser("decompose", help="print the canonical decomposition tree")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--format", choices=("sexp", "dot"), default="sexp")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("count", help="exact number of members of a given size")
    sp.add_argument("--class", dest="klass", required=True, choices=classes)
    sp.add_argument("--n", type=int)
    sp.add_argument("--table", help="N or LO-HI: print a table of counts")
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("constants", help="R, kappa, C and the path-pattern constant")
    sp.add_argument("--class", dest="klass", default="all", choices=classes + ["all"])
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--precision", type=float, default=env_prec)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("pattern", help="marked-tree counts of an induced pattern tree")
    sp.add_argument("--class", dest="klass", required=True, choices=classes)
    sp.add_argument("--tau", required=True, help="pattern tree s-expression, e.g. '(J 1 2)'")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--probability", action="store_true", help="also print the induced-subtree probability")
    sp.set_defaults(func=cmd_pattern)

    sp = sub.add_parser("sample", help="draw one exactly uniform member")
    sp.add_argument("--class", dest="klass", required=True, choices=classes)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output file; extension selects the format")
    sp.add_argument("--format", choices=("json", "sexp", "pgm"))
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("stats", help="Monte-Carlo occurrence statistics")
    sp.add_argument("--class", dest="klass", required=True, choices=classes)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("verify", help="run the built-in oracle cross-checks")
    sp.add_argument("--level", choices=("quick", "desk"), default="quick")
    sp.set_defaults(func=cmd_verify)

    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
