"""Command-line front end.

Exit codes: 0 success, 1 solver failure, 2 input error, 3 infeasible
control result (existence, invert, rank-check, realize-npr).
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

import numpy as np

from . import batch as batch_mod
from .control import (
    InfeasibleTargetError,
    existence_check,
    mpr_reduce,
    ranking_bound,
    ranking_feasible,
    realize_npr_as_pr,
)
from .graph import DanglingPolicy, EdgeListError, read_edge_list, serialize_edge_list, \
    transition_matrix
from .io import dumps, load_matrix, load_vector, vector_csv
from .localization import competitor_report, localization_intervals, localization_matrix
from .solvers import (
    ConvergenceError,
    Damping,
    degree_dependent_damping,
    eigenvector_centrality,
    mpr_pagerank,
    npr_pagerank,
    pagerank,
)
from .structural import (
    DEFAULT_SWEEP_ALPHAS,
    DEFAULT_SWEEP_WEIGHTS,
    cycle_invariance_demo,
    selfloop_sweep,
    tune_weights_for_eigenvector,
)
from .walker import WalkConfig, convergence_curve, reference_centrality, simulate

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _floats(text: str) -> list:
    return [float(x) for x in text.replace(",", " ").split()]


def _graph(args):
    return read_edge_list(args.graph)


def _damping(args, g):
    if getattr(args, "alphas", None):
        return Damping(load_vector(args.alphas, g.n))
    if getattr(args, "degree_restart", None):
        a, sigma = args.degree_restart
        return degree_dependent_damping(g, a, sigma)
    if getattr(args, "alpha", None) is None:
        raise UsageError("a damping is required (--alpha or --alphas)")
    return Damping(args.alpha)


def _teleport(args, g):
    return load_vector(getattr(args, "teleport", "uniform") or "uniform", g.n)


def _transition(args, g, teleport=None):
    mode = args.dangling
    if mode == "teleport-copy" and teleport is None:
        mode = "uniform"
    return transition_matrix(g, DanglingPolicy(mode), teleport)


def _with_dangling(out: dict, P) -> dict:
    if P.repaired:
        out["dangling_rows"] = list(P.repaired_rows)
        out["dangling_repair"] = P.repair_mode
    return out


def _emit_vector(args, g, P, cv):
    if args.format == "csv":
        return vector_csv(cv.scores, cv.ranking, g.labels)
    out = cv.to_dict()
    if P is not None and P.repaired:
        out["meta"]["dangling_rows"] = list(P.repaired_rows)
    if g.labels:
        out["labels"] = list(g.labels)
    return dumps(out)


# -- subcommands: each returns (text, exit_code) --------------------------

def cmd_pagerank(args):
    g = _graph(args)
    v = _teleport(args, g)
    P = _transition(args, g, v)
    cv = pagerank(P, args.alpha, v, method=args.method)
    return _emit_vector(args, g, P, cv), EXIT_OK


def cmd_npr(args):
    g = _graph(args)
    w = _teleport(args, g)
    P = _transition(args, g, w)
    cv = npr_pagerank(P, _damping(args, g), w)
    return _emit_vector(args, g, P, cv), EXIT_OK


def cmd_mpr(args):
    g = _graph(args)
    m = load_matrix(args.matrix, g.n)
    P = _transition(args, g, m)
    return _emit_vector(args, g, P, mpr_pagerank(P, args.alpha, m)), EXIT_OK


def cmd_eigencent(args):
    g = _graph(args)
    return _emit_vector(args, g, None, eigenvector_centrality(g)), EXIT_OK


def cmd_localize(args):
    g = _graph(args)
    d = _damping(args, g)
    ref = _teleport(args, g)
    P = _transition(args, g, ref)
    loc = localization_matrix(P, d, None if d.is_global else ref)
    rep = localization_intervals(loc, args.samples, args.seed)
    if args.format == "csv":
        return rep.to_csv(), EXIT_OK
    out = rep.to_dict()
    comp = competitor_report(rep).to_dict()
    out["unbeatable"] = comp["unbeatable"]
    out["leader_candidates"] = comp["leader_candidates"]
    out["column_dominant"] = loc.column_dominant()
    return dumps(_with_dangling(out, P)), EXIT_OK


def _target(args, g):
    return load_vector(args.target, g.n, normalize=True)


def cmd_existence(args):
    g = _graph(args)
    P = _transition(args, g)
    rep = existence_check(_target(args, g), P, _damping(args, g))
    code = EXIT_OK if rep.feasible else EXIT_INFEASIBLE
    return dumps(_with_dangling(rep.to_dict(), P)), code


def cmd_invert(args):
    g = _graph(args)
    P = _transition(args, g)
    rep = existence_check(_target(args, g), P, _damping(args, g))
    out = {"v": None if rep.witness is None else rep.witness.tolist(), "report": rep.to_dict()}
    return dumps(_with_dangling(out, P)), EXIT_OK if rep.feasible else EXIT_INFEASIBLE


def cmd_max_alpha(args):
    g = _graph(args)
    rec = batch_mod.max_alpha_record(g, args.graph, args.repair, args.seed)
    out = {"max_colsum": rec.max_colsum, "alpha_max": rec.alpha_max, "n": rec.n,
           "m": rec.m, "dangling_repaired": rec.dangling_repaired}
    if args.alpha is not None or args.alphas:
        P = transition_matrix(g, DanglingPolicy("uniform"))
        out["ranking_bound"] = ranking_bound(P, _damping(args, g)).to_dict()
    return dumps(out), EXIT_OK


def cmd_rank_check(args):
    g = _graph(args)
    P = _transition(args, g)
    d = _damping(args, g)
    if args.all:
        if g.n > 8:
            raise UsageError("--all is limited to graphs with at most 8 nodes")
        checks = [ranking_feasible(P, d, perm) for perm in itertools.permutations(range(g.n))]
        out = {"n_rankings": len(checks),
               "n_achievable": sum(c.achievable for c in checks),
               "rankings": [c.to_dict() for c in checks]}
        ok = all(c.achievable for c in checks)
    else:
        if not args.ranking:
            raise UsageError("give --ranking or --all")
        ranking = [g.node_id(t) for t in args.ranking.replace(",", " ").split()]
        chk = ranking_feasible(P, d, ranking)
        out, ok = chk.to_dict(), chk.achievable
    out["bound"] = ranking_bound(P, d).to_dict()
    return dumps(_with_dangling(out, P)), EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_realize_npr(args):
    g = _graph(args)
    w = _teleport(args, g)
    P = _transition(args, g, w)
    if not args.alphas and not args.degree_restart:
        raise UsageError("realize-npr needs per-node dampings (--alphas or --degree-restart)")
    if args.alpha is None:
        raise UsageError("realize-npr needs the target global damping --alpha")
    d = Damping(load_vector(args.alphas, g.n)) if args.alphas else \
        degree_dependent_damping(g, *args.degree_restart)
    r = realize_npr_as_pr(P, d, w, args.alpha)
    return dumps(_with_dangling(r.to_dict(), P)), EXIT_OK if r.feasible else EXIT_INFEASIBLE


def cmd_mpr_reduce(args):
    g = _graph(args)
    m = load_matrix(args.matrix, g.n)
    P = _transition(args, g, m)
    return dumps(_with_dangling(mpr_reduce(P, args.alpha, m).to_dict(), P)), EXIT_OK


def cmd_tune_weights(args):
    g = _graph(args)
    c = load_vector(args.target, g.n, normalize=True)
    wa = tune_weights_for_eigenvector(g, c)
    if args.out_graph:
        with open(args.out_graph, "w", encoding="utf-8") as fh:
            fh.write(serialize_edge_list(wa.graph))
    return dumps(wa.to_dict()), EXIT_OK


def cmd_selfloop_sweep(args):
    g = _graph(args)
    v = _teleport(args, g)
    policy = DanglingPolicy(args.dangling)
    sweep = selfloop_sweep(g, g.node_id(args.node), _floats(args.sweep_weights),
                           _floats(args.sweep_alphas), v, policy)
    return (sweep.to_csv() if args.format == "csv" else dumps(sweep.to_dict())), EXIT_OK


def cmd_cycle_demo(args):
    weights = _floats(args.weights) if args.weights else \
        list(np.random.default_rng(args.seed).uniform(0.1, 10.0, args.n))
    demo = cycle_invariance_demo(args.n, weights, args.alpha)
    out = demo.to_dict()
    out["weights"] = [float(w) for w in weights]
    return dumps(out), EXIT_OK


def cmd_simulate(args):
    g = _graph(args)
    if args.matrix:
        t = load_matrix(args.matrix, g.n)
    else:
        t = _teleport(args, g)
    P = _transition(args, g, t)
    d = _damping(args, g)
    cfg = WalkConfig(args.steps, args.seed, args.burn_in,
                     None if args.start is None else g.node_id(args.start))
    ref = reference_centrality(P, d, t)
    if args.checkpoints:
        curve = convergence_curve(P, d, t, cfg, [int(x) for x in _floats(args.checkpoints)], ref)
        if args.format == "csv":
            return "steps,tv\n" + "".join(f"{k},{tv!r}\n" for k, tv in curve), EXIT_OK
        return dumps({"curve": [[k, tv] for k, tv in curve], "seed": args.seed}), EXIT_OK
    h = simulate(P, d, t, cfg, ref)
    if args.format == "csv":
        lines = ["node,count,frequency,reference"]
        lines += [f"{i},{c},{f!r},{r!r}" for i, (c, f, r)
                  in enumerate(zip(h.counts.tolist(), h.frequencies.tolist(), ref.tolist()))]
        return "\n".join(lines) + "\n", EXIT_OK
    return dumps(_with_dangling(h.to_dict(), P)), EXIT_OK


def cmd_batch(args):
    records, errors = batch_mod.batch_max_alpha(args.directory, args.repair, args.seed,
                                                args.workers)
    if errors:
        for e in errors:
            print(f"prcontrol: {e['file']}: {e['error']}", file=sys.stderr)
    if args.format == "csv":
        return batch_mod.scatter_csv(records), EXIT_OK
    return dumps({"records": batch_mod.records_to_dicts(records), "errors": errors}), EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_graph(p):
    p.add_argument("graph", help="edge-list file: 'src dst [weight]' per line")
    p.add_argument("--dangling", choices=["teleport-copy", "uniform"], default="teleport-copy",
                   help="dangling-row repair (default: copy the teleport distribution)")


def _add_damping(p, alpha_required=False, per_node=True):
    p.add_argument("--alpha", type=float, required=alpha_required, help="global damping in (0, 1)")
    if per_node:
        p.add_argument("--alphas", metavar="FILE", help="per-node dampings")
        p.add_argument("--degree-restart", nargs=2, type=float, metavar=("A", "SIGMA"),
                       help="per-node dampings 1 - A * outdeg**SIGMA")


def _add_format(p):
    p.add_argument("--format", choices=["json", "csv"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prcontrol", description="PageRank variants, localization and control.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.set_defaults(func=fn)
        return p

    p = add("pagerank", cmd_pagerank, "standard PageRank")
    _add_graph(p); _add_damping(p, alpha_required=True, per_node=False); _add_format(p)
    p.add_argument("--teleport", default="uniform", help="'uniform' or vector file")
    p.add_argument("--method", choices=["direct", "power"], default="direct")

    p = add("npr", cmd_npr, "node-dependent restart PageRank")
    _add_graph(p); _add_damping(p); _add_format(p)
    p.add_argument("--teleport", default="uniform")

    p = add("mpr", cmd_mpr, "PageRank with a personalization matrix")
    _add_graph(p); _add_damping(p, alpha_required=True, per_node=False); _add_format(p)
    p.add_argument("--matrix", required=True, metavar="FILE")

    p = add("eigencent", cmd_eigencent, "eigenvector centrality")
    p.add_argument("graph")
    _add_format(p)

    p = add("localize", cmd_localize, "attainable-score intervals and competitors")
    _add_graph(p); _add_damping(p); _add_format(p)
    p.add_argument("--teleport", default="uniform",
                   help="reference personalization fixing the per-node-damping scale")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    for name, fn, help_ in (("existence", cmd_existence, "existence test for a target centrality"),
                            ("invert", cmd_invert, "personalization producing a target")):
        p = add(name, fn, help_)
        _add_graph(p); _add_damping(p)
        p.add_argument("--target", required=True, help="'uniform' or vector file")

    p = add("max-alpha", cmd_max_alpha, "largest damping admitting ranking control")
    p.add_argument("graph")
    _add_damping(p)
    p.add_argument("--repair", choices=["uniform", "edge"], default="uniform")
    p.add_argument("--seed", type=int, default=0)

    p = add("rank-check", cmd_rank_check, "decide whether a ranking is realizable")
    _add_graph(p); _add_damping(p)
    p.add_argument("--ranking", help="node labels, best first, comma separated")
    p.add_argument("--all", action="store_true", help="check every permutation (n <= 8)")

    p = add("realize-npr", cmd_realize_npr,
            "standard-PageRank personalization matching a node-dependent restart one")
    _add_graph(p); _add_damping(p)
    p.add_argument("--teleport", default="uniform")

    p = add("mpr-reduce", cmd_mpr_reduce, "replace a personalization matrix by a vector")
    _add_graph(p); _add_damping(p, alpha_required=True, per_node=False)
    p.add_argument("--matrix", required=True, metavar="FILE")

    p = add("tune-weights", cmd_tune_weights, "reweight arcs for a target eigenvector centrality")
    p.add_argument("graph")
    p.add_argument("--target", required=True)
    p.add_argument("--out-graph", metavar="FILE", help="write the reweighted edge list")

    p = add("selfloop-sweep", cmd_selfloop_sweep, "self-loop weight/damping sweep for one node")
    _add_graph(p); _add_format(p)
    p.add_argument("--node", required=True)
    p.add_argument("--sweep-weights", default=",".join(map(str, DEFAULT_SWEEP_WEIGHTS)))
    p.add_argument("--sweep-alphas", default=",".join(map(str, DEFAULT_SWEEP_ALPHAS)))
    p.add_argument("--teleport", default="uniform")

    p = add("cycle-demo", cmd_cycle_demo, "PageRank of a reweighted directed cycle")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--weights", help="comma-separated arc weights (random if omitted)")
    p.add_argument("--alpha", type=float, default=0.85)
    p.add_argument("--seed", type=int, default=0)

    p = add("simulate", cmd_simulate, "random-walker simulation")
    _add_graph(p); _add_damping(p); _add_format(p)
    p.add_argument("--teleport", default="uniform")
    p.add_argument("--matrix", metavar="FILE")
    p.add_argument("--steps", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--start", default=None, help="start node (default: teleport draw)")
    p.add_argument("--checkpoints", help="comma-separated step counts for a convergence curve")

    p = add("batch", cmd_batch, "max-alpha over every edge list in a directory")
    p.add_argument("directory")
    _add_format(p)
    p.add_argument("--repair", choices=["uniform", "edge"], default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        text, code = args.func(args)
    except InfeasibleTargetError as exc:
        print(f"prcontrol: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConvergenceError as exc:
        print(f"prcontrol: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (EdgeListError, UsageError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"prcontrol: {msg}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
