"""Command-line interface: ``bmepoly <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from importlib import resources

from .coords import vertex_vector, vertices_to_json, vertices_to_text
from .dissimilarity import DEFAULT_SEED, DissimilarityError, parse_dissimilarity, random_instances
from .geometry import (AffineFrame, BudgetExceeded, f_vector, hull_facets, polytope,
                       birkhoff_vertices, combinatorially_equivalent)
from .geometry.io import write_h
from .inequalities import (FAMILIES, caterpillar_inequality, classify_facets, constraints_to_json, constraints_to_text,
                           dedup_by_face, family_constraints, intersecting_cherry_inequality,
                           vertex_table)
from .solver import (INCUMBENT, BnBConfig, SolverError, branch_and_bound, brute_force_bme,
                     nni_local_search)
from .trees import TreeError, enumerate_trees
from .verify import facet_polytope, run_checks

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need_n(args, low: int = 3, high: int | None = None) -> int:
    if args.n is None:
        raise InputError("--n is required")
    if args.n < low or (high is not None and args.n > high):
        bound = f"{low}..{high}" if high is not None else f">= {low}"
        raise InputError(f"--n must be {bound}")
    return args.n


def cmd_trees(args) -> int:
    trees = enumerate_trees(_need_n(args, 3, 10), cap=10)
    if args.json:
        _emit(args, json.dumps([{"newick": t.newick(), "key": t.key} for t in trees], indent=2))
    else:
        _emit(args, "\n".join(t.newick() for t in trees))
    return EXIT_OK


def cmd_vertices(args) -> int:
    n = _need_n(args, 3, 10)
    trees = enumerate_trees(n, cap=10)
    if args.json:
        _emit(args, vertices_to_json(trees))
    else:
        _emit(args, vertices_to_text([vertex_vector(t) for t in trees], n))
    return EXIT_OK


def _vertex_points(n: int) -> list:
    return [vertex_vector(t).x for t in enumerate_trees(n)]


def cmd_facets(args) -> int:
    n = _need_n(args, 4)
    if args.method == "hull":
        pts = _vertex_points(n)
        h = hull_facets(pts, max_steps=args.budget_steps)
        cls = classify_facets(h, AffineFrame(pts), family_constraints(n, "all"))
        report = {"n": n, "facets": len(h), "classified": cls.counts, "unmatched": len(cls.unmatched),
                  "facet_list": [[str(k.tag) for k in m] for m in cls.matches]}
        if args.json:
            _emit(args, json.dumps(report, indent=2))
        else:
            lines = [f"{len(h)} facets"] + [f"{fam}: {c}" for fam, c in cls.counts.items()]
            lines.append(f"unmatched: {len(cls.unmatched)}")
            _emit(args, "\n".join(lines))
        return EXIT_OK
    constraints = family_constraints(n, args.family)
    if args.dedup:
        constraints = dedup_by_face(constraints, vertex_table(n))
    _emit(args, constraints_to_json(constraints) if args.json else constraints_to_text(constraints))
    return EXIT_OK


def cmd_hull(args) -> int:
    n = _need_n(args, 4)
    try:
        h = hull_facets(_vertex_points(n), adjacency=args.adjacency, max_steps=args.budget_steps,
                        checkpoint=args.checkpoint, checkpoint_every=args.checkpoint_every,
                        resume=args.resume)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        if args.checkpoint:
            print(f"state saved to {args.checkpoint}; rerun with --resume", file=sys.stderr)
        return EXIT_BUDGET
    if args.json:
        _emit(args, json.dumps({"n": n, "dim": h.dim, "facets": len(h),
                                "inequalities": [[[str(x) for x in a], str(b)] for a, b in h.inequalities]}))
    else:
        _emit(args, write_h(h))
    print(f"{len(h)} facets", file=sys.stderr)
    return EXIT_OK


def cmd_fvector(args) -> int:
    n = _need_n(args, 4)
    v, h = polytope(_vertex_points(n))
    fv = f_vector(v, h, method=args.method or "intersection")
    _emit(args, json.dumps({"n": n, "f_vector": list(fv)}) if args.json else " ".join(map(str, fv)))
    return EXIT_OK


def cmd_verify(args) -> int:
    n = _need_n(args, 4)
    hull = None if args.method is None else args.method == "hull"
    checks = run_checks(n, hull=hull)
    if args.json:
        _emit(args, json.dumps([c.to_json() for c in checks], indent=2))
    else:
        _emit(args, "\n".join(c.line() for c in checks))
    return EXIT_OK if all(c.ok for c in checks) else EXIT_VERIFY


def _load_matrix(args):
    if args.matrix == "example":
        text = resources.files("bmepoly").joinpath("data/example5.txt").read_text()
        return parse_dissimilarity(text)
    if args.matrix:
        try:
            with open(args.matrix) as fh:
                return parse_dissimilarity(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read {args.matrix}: {exc.strerror}") from exc
    n = _need_n(args, 4)
    return random_instances(n, 1, args.seed)[0]


def cmd_solve(args) -> int:
    d = _load_matrix(args)
    method = args.method or "bnb"
    if method == "brute":
        res = brute_force_bme(d)
    elif method == "nni":
        start = random.Random(args.seed).choice(enumerate_trees(d.n)) if d.n <= 10 else None
        if start is None:
            raise InputError("nni starts from a random tree, available for n <= 10")
        res = nni_local_search(d, start)
    elif method == "bnb":
        res = branch_and_bound(d, BnBConfig(max_nodes=args.budget_nodes, time_limit=args.time_limit,
                                            lazy=args.lazy))
    else:
        raise InputError(f"unknown solve method {method!r}; use brute, nni or bnb")
    if args.json:
        _emit(args, json.dumps(res.to_json(), indent=2, default=str))
    else:
        lines = [res.best_tree.newick(), f"value (scaled): {res.best_value}",
                 f"value (Pauplin): {res.pauplin_value}", f"status: {res.status}"]
        if res.stats.get("objective_constant"):
            lines.append("note: objective constant on all trees")
        if res.status == INCUMBENT:
            lines.append(f"lower bound (scaled): {res.lower_bound}")
        _emit(args, "\n".join(lines))
    return EXIT_BUDGET if res.status == INCUMBENT else EXIT_OK


def cmd_birkhoff(args) -> int:
    k = args.k
    try:
        vb = birkhoff_vertices(k)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    b = polytope(vb.vertices)
    report = {"k": k, "vertices": len(vb.vertices), "dim": b[1].dim, "facets": len(b[1])}
    if k <= 3:
        report["f_vector"] = list(f_vector(*b))
    if k == 3:
        report["caterpillar_facet_of_P5_equivalent"] = bool(
            combinatorially_equivalent(facet_polytope(caterpillar_inequality(1, 2, 5)), b))
        report["cherry_facet_of_P5_equivalent"] = bool(
            combinatorially_equivalent(facet_polytope(intersecting_cherry_inequality(1, 2, 3, 5)), b))
    if args.json:
        _emit(args, json.dumps(report, indent=2))
    else:
        _emit(args, "\n".join(f"{key}: {val}" for key, val in report.items()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of taxa")
    common.add_argument("--json", action="store_true", help="JSON output")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"seed for random instances (default {DEFAULT_SEED})")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bmepoly", description="Balanced minimum evolution polytopes.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("trees", parents=[common], help="list all binary trees")
    sub.add_parser("vertices", parents=[common], help="list vertex vectors")

    sp = sub.add_parser("facets", parents=[common], help="family inequalities, or hull facets classified")
    sp.add_argument("--family", choices=[*FAMILIES, "all"], default="all")
    sp.add_argument("--method", choices=["families", "hull"], default="families")
    sp.add_argument("--dedup", action="store_true", help="drop constraints with a repeated tight set")
    sp.add_argument("--budget-steps", type=int)

    sp = sub.add_parser("hull", parents=[common], help="full facet list of P_n")
    sp.add_argument("--adjacency", choices=["combinatorial", "algebraic"], default="combinatorial")
    sp.add_argument("--budget-steps", type=int, help="stop after this many double description steps")
    sp.add_argument("--checkpoint", help="checkpoint file")
    sp.add_argument("--checkpoint-every", type=int, default=100_000)
    sp.add_argument("--resume", action="store_true", help="continue from --checkpoint")

    sp = sub.add_parser("fvector", parents=[common], help="f-vector of P_n")
    sp.add_argument("--method", choices=["intersection", "closure"])

    sp = sub.add_parser("verify", parents=[common], help="run the invariant checks for P_n")
    sp.add_argument("--method", choices=["hull", "families"],
                    help="'hull' also computes the full hull (default for n <= 5)")

    sp = sub.add_parser("solve", parents=[common], help="find the BME tree")
    sp.add_argument("matrix", nargs="?",
                    help="dissimilarity file, or 'example'; omitted: random instance from --n/--seed")
    sp.add_argument("--method", choices=["brute", "nni", "bnb"], default="bnb")
    sp.add_argument("--budget-nodes", type=int)
    sp.add_argument("--time-limit", type=float)
    sp.add_argument("--lazy", action="store_true", help="add family constraints only when violated")

    sp = sub.add_parser("birkhoff", parents=[common], help="Birkhoff polytope B(k) summary")
    sp.add_argument("--k", type=int, default=3)
    return p


COMMANDS = {"trees": cmd_trees, "vertices": cmd_vertices, "facets": cmd_facets, "hull": cmd_hull,
            "fvector": cmd_fvector, "verify": cmd_verify, "solve": cmd_solve, "birkhoff": cmd_birkhoff}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (InputError, DissimilarityError, TreeError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
