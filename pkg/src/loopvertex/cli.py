"""Command-line front end: ``lve <subcommand>``.

Exit codes: 0 success, 1 an invariant failed, 2 usage or input error,
3 disconnected graph where a connected one is required.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
from contextlib import redirect_stdout
from fractions import Fraction

from .graphs import (
    DisconnectedGraphError,
    GraphSpecError,
    count_spanning_trees_matrix_tree,
    enumerate_spanning_trees,
    frac_str,
    is_connected,
    load_graph,
)
from .intermediate import MAX_CENSUS_ORDER
from .series import SqrtLambdaSeries, series_log
from .weights import tree_weight, weight_table

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE, EXIT_DISCONNECTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def max_order() -> int:
    raw = os.environ.get("LVE_MAX_ORDER", "3")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LVE_MAX_ORDER must be an integer, got {raw!r}") from None


def _check_order(n: int, limit: int | None = None):
    cap = max_order() if limit is None else min(limit, max_order())
    if n < 0 or n > cap:
        raise UsageError(f"order must be in 0..{cap}, got {n}")


def _series_doc(s: SqrtLambdaSeries) -> dict:
    return {
        "series": s.to_json(),
        "lambda_coefficients": [frac_str(c) for c in s.lambda_coefficients()],
    }


# -- subcommands -------------------------------------------------------------

def cmd_weights(args) -> int:
    g = load_graph(args.graph)
    if not is_connected(g) and not args.forests:
        print("graph is disconnected; pass --forests for a forest table", file=sys.stderr)
        return EXIT_DISCONNECTED
    table = weight_table(g)
    print("forest\tweight" if args.forests else "tree\tweight")
    for f, w in table:
        print(f"{f}\t{frac_str(w)}")
    print(f"total\t{frac_str(table.total)}")
    return EXIT_OK if table.total == 1 else EXIT_INVARIANT


def cmd_trees(args) -> int:
    g = load_graph(args.graph)
    if not is_connected(g):
        print("graph is disconnected", file=sys.stderr)
        return EXIT_DISCONNECTED
    trees = enumerate_spanning_trees(g)
    print("tree\tweight")
    for t in trees:
        print(f"{t}\t{frac_str(tree_weight(g, t))}")
    kirchhoff = count_spanning_trees_matrix_tree(g)
    print(f"count\t{len(trees)}")
    print(f"matrix_tree\t{kirchhoff}")
    return EXIT_OK if kirchhoff == len(trees) else EXIT_INVARIANT


def cmd_series(args) -> int:
    from .zerodim import z_from_feynman, z_from_loop_vertices

    _check_order(args.order)
    n = args.order
    doc: dict = {"order": n, "side": args.side}
    status = EXIT_OK
    if args.side == "feynman":
        doc.update(_series_doc(z_from_feynman(n)))
    elif args.side == "lve":
        doc.update(_series_doc(z_from_loop_vertices(n)))
    elif args.side == "log":
        doc.update(_series_doc(series_log(z_from_feynman(n))))
    else:
        feyn, lve = z_from_feynman(n), z_from_loop_vertices(n)
        equal = feyn == lve
        doc["feynman"] = _series_doc(feyn)
        doc["lve"] = _series_doc(lve)
        doc["equal"] = equal
        status = EXIT_OK if equal else EXIT_INVARIANT
    print(json.dumps(doc, indent=2))
    return status


def cmd_census(args) -> int:
    from .resummation import census

    _check_order(args.order, MAX_CENSUS_ORDER)
    if args.order < 1:
        raise UsageError("census order must be at least 1")
    cen = census(args.order)
    print(json.dumps(cen.to_json(), indent=2, sort_keys=True))
    print(f"{cen.total} extensions in {len(cen.classes)} classes", file=sys.stderr)
    return EXIT_OK


def cmd_resum(args) -> int:
    from .resummation import cross_pipeline_table, lve_rows, mass_conservation

    _check_order(args.order, MAX_CENSUS_ORDER)
    if args.order < 1:
        raise UsageError("resum order must be at least 1")
    print("order\ttree_key\tclass_key\tweight\tcontribution")
    for row in lve_rows(args.order):
        print(row.tsv())
    ok = True
    print()
    print("# order\tclass_mass\ttree_mass\tlabeled_graphs\tconserved")
    for b in mass_conservation(args.order):
        ok &= b.conserved
        print(f"# {b.order}\t{frac_str(b.before)}\t{frac_str(b.after)}\t{b.labeled_graphs}\t{b.conserved}")
    if args.order >= 3:
        print()
        print("# profile\tclass_key\tpairings\trelative_weight\tfactor\tfeynman_factor")
        for r in cross_pipeline_table(3):
            if r.profile != (1, 2, 3):
                continue
            ok &= r.factor == r.feynman_factor
            print("# " + "\t".join([
                "".join(map(str, r.profile)), r.class_key, str(r.pairings),
                frac_str(r.relative_weight), frac_str(r.factor), frac_str(r.feynman_factor),
            ]))
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_amplitude(args) -> int:
    from .parametric import AmplitudeConfig, amplitude, tree_amplitude_partial

    cfg = AmplitudeConfig(args.dimension, args.mass, args.budget, args.seed, transform=args.transform)
    if args.graph:
        g = load_graph(args.graph)
        if not is_connected(g):
            print("graph is disconnected", file=sys.stderr)
            return EXIT_DISCONNECTED
        print(json.dumps(amplitude(g, cfg).to_json(), indent=2))
        return EXIT_OK
    _check_order(args.order, MAX_CENSUS_ORDER)
    try:
        parts = tree_amplitude_partial(args.tree, cfg, args.order, args.normalization)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    doc = {
        "tree": args.tree,
        "normalization": args.normalization,
        "orders": [dict(order=n, **r.to_json()) for n, r in enumerate(parts, start=1)],
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lve", description="Loop vertex expansion combinatorics.")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--manifest", help="write a JSON run manifest to this path")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("weights", help="relative weights of all spanning trees/forests")
    s.add_argument("graph", help="GraphSpec JSON file")
    s.add_argument("--forests", action="store_true", help="allow disconnected graphs")
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("trees", help="spanning trees with the matrix-tree cross-check")
    s.add_argument("graph")
    s.set_defaults(func=cmd_trees)

    s = sub.add_parser("series", help="zero-dimensional Z or log Z")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--side", choices=("feynman", "lve", "both", "log"), default="both")
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("census", help="extension/collapse census of order-n graphs")
    s.add_argument("--order", type=int, required=True)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("resum", help="loop vertex tree repacking")
    s.add_argument("--order", type=int, required=True)
    s.set_defaults(func=cmd_resum)

    s = sub.add_parser("amplitude", help="parametric amplitude of a graph or a tree class")
    target = s.add_mutually_exclusive_group(required=True)
    target.add_argument("--graph")
    target.add_argument("--tree", help="tree class key as printed by 'resum'")
    s.add_argument("--dimension", type=float, required=True)
    s.add_argument("--mass", type=float, default=1.0)
    s.add_argument("--budget", type=int, default=2**16)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--transform", choices=("rational", "squared"), default="rational")
    s.add_argument("--order", type=int, default=3, help="highest order for --tree")
    s.add_argument("--normalization", choices=("series", "raw"), default="series")
    s.set_defaults(func=cmd_amplitude)
    return p


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def write_manifest(path: str, args, argv: list[str]):
    params = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
    inputs = {}
    for key in ("graph",):
        f = params.get(key)
        if f:
            inputs[f] = _digest(f)
    manifest = {
        "command": args.command,
        "argv": argv,
        "parameters": params,
        "inputs": inputs,
        "outputs": [args.output] if args.output else [],
        "output_digests": {args.output: _digest(args.output)} if args.output else {},
        "seed": params.get("seed"),
        "env": {"LVE_MAX_ORDER": os.environ.get("LVE_MAX_ORDER", "3")},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    buf = io.StringIO()
    try:
        with redirect_stdout(buf):
            status = args.func(args)
    except (GraphSpecError, UsageError, OSError) as exc:
        print(f"lve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DisconnectedGraphError as exc:
        print(f"lve: error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except ValueError as exc:
        print(f"lve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if args.manifest:
        write_manifest(args.manifest, args, argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
