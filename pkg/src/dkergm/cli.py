"""Command-line entry point.

Results go to stdout as JSON (CSV for experiment tables with ``--csv``),
diagnostics to stderr.  Exit status: 0 on success, 2 on usage errors, 1 on
domain errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import asymptotics, constructions, enumeration, graph, model1k, model2k, polytope
from .errors import DomainError

EXPERIMENTS_HELP = """\
CSV columns per experiment:
  prop5         n,a_n,k,clipped,frequency,stderr,lambda_k
  prop6         n,mean,stderr,scaled_mean
  singularity   n,p,C,prob_er,prob_1k
  nu-dominance  n,j,nu,fraction,dominance_ratio
  fig4          n,count,ratio
  tn-bidegree   n,count,closed_form,ratio
  er-theta      n,p,theta_derived,theta_log_odds,max_gap_derived,max_gap_log_odds
  h-sequence    n,a_n,h_n,log_bound
  lambda        n,k,lambda_k
  band-bound    n,draw,k,prob_alpha,bound_p0,bound_lambda
"""


class UsageError(Exception):
    pass


# -- helpers ----------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "-inf" if x < 0 else "inf"
        return x
    return x


def _emit(obj, out):
    out.write(json.dumps(_jsonable(obj), sort_keys=True, allow_nan=False) + "\n")


def _floats(text, name):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--{name}: expected a comma-separated list of numbers, got {text!r}") from None


def _ints(text, name):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--{name}: expected a comma-separated list of integers, got {text!r}") from None


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join("--" + m for m in missing))


def _params(model, n, alpha_text):
    if model == "1k":
        alpha = _floats(alpha_text, "alpha") if alpha_text else [0.0] * (n - 1)
        return model1k.NaturalParams1K(n, np.array(alpha))
    alpha = _floats(alpha_text, "alpha") if alpha_text else [0.0] * len(model2k.free_pairs(n))
    return model2k.NaturalParams2K(n, np.array(alpha))


def _observations(args):
    if not args.obs:
        raise UsageError("need at least one --obs FILE")
    return [graph.read_graph(p) for p in args.obs]


# -- subcommands ------------------------------------------------------------


def cmd_stats(args, out):
    g = graph.read_graph(args.graph)
    d = graph.degree_vector(g)
    b = graph.bi_degree_vector(g)
    _emit(
        {
            "n": g.n,
            "edges": graph.edges_from_degrees(d),
            "degree_vector": d,
            "bi_degree_vector": b,
            "scaled_bi_degree": graph.scaled_bi_degree(g),
            "degrees_from_bidegrees": graph.degrees_from_bidegrees(b, g.n),
        },
        out,
    )


def cmd_psi(args, out):
    _need(args, "n")
    n = args.n
    if args.p is not None:
        if args.model != "1k":
            raise UsageError("--p only applies to the 1k model")
        if args.alpha is not None:
            raise UsageError("--p and --alpha are mutually exclusive")
        params = model1k.alpha_from_p(_floats(args.p, "p"))
    elif args.er_p is not None:
        if args.model != "1k" or args.alpha is not None:
            raise UsageError("--er-p needs --model 1k and no --alpha")
        params = model1k.er_embedding(n, args.er_p)
    else:
        params = _params(args.model, n, args.alpha)
    if params.n != n:
        raise UsageError(f"parameters describe n={params.n}, but --n is {n}")

    result = {"model": args.model, "n": n, "alpha": params.to_json()}
    if args.model == "1k":
        result["psi"] = model1k.psi_1k(params)
        result["expected_stats"] = model1k.expected_stats_1k(params)
        if args.present is not None:
            result["prob_degree_present"] = model1k.prob_degree_present(n, args.present, params)
        if args.change is not None:
            k, kp = _ints(args.change, "change")
            result["change_statistic"] = model1k.change_statistic(params, k, kp)
        if args.graph:
            result["log_prob"] = model1k.log_prob_1k(graph.read_graph(args.graph), params)
    else:
        if args.present is not None or args.change is not None:
            raise UsageError("--present and --change only apply to the 1k model")
        result["psi"] = model2k.psi_2k(params)
        result["expected_stats"] = model2k.expected_stats_2k(params)
        if args.graph:
            result["log_prob"] = model2k.log_prob_2k(graph.read_graph(args.graph), params)
    _emit(result, out)


def cmd_fit(args, out):
    obs = _observations(args)
    fit = model1k.fit_1k if args.model == "1k" else model2k.fit_2k
    res = fit(obs, args.tol, args.max_iter)
    _emit(res.to_json(), out)
    if args.require_exists and res.exists is not True:
        raise DomainError("maximum likelihood estimate does not exist for these observations")


def cmd_exists(args, out):
    if args.model != "1k":
        raise UsageError("exists covers the 1k polytope; use `fit --model 2k` for the 2k model")
    if args.obs and args.mean:
        raise UsageError("--obs and --mean are mutually exclusive")
    if args.obs:
        obs = _observations(args)
        n = obs[0].n
        mean = model1k.mean_reduced_degrees(obs)
    else:
        _need(args, "n", "mean")
        n = args.n
        mean = [Fraction(v) for v in args.mean.split(",")]
    A = polytope.polytope_A(n)
    result = {
        "n": n,
        "mean_stats": list(mean),
        "closed_form": polytope.mle_exists_1k(n, mean),
        "failed_clauses": polytope.existence_failures(n, mean),
        "hull_interior": polytope.interior_membership(A, mean),
        "membership": polytope.membership(A.vertices, mean),
    }
    if args.vertices:
        result["A_vertices"] = A.vertices
        result["B_vertices"] = polytope.polytope_B(n).vertices
    _emit(result, out)
    if args.require_exists and not result["closed_form"]:
        raise DomainError("maximum likelihood estimate does not exist for this mean")


def cmd_enumerate(args, out):
    _need(args, "n")
    n = args.n
    if args.key_kind == "custom":
        raise UsageError("custom keys need a key function; not available from the command line")
    table = enumeration.enumerate_graphs(
        n, args.key_kind, args.restricted, cap_override=args.cap_override, workers=args.workers
    )
    result = table.to_json()
    result["total"] = table.total
    result["f"] = enumeration.count_no_isolated(n)
    result["nu"] = [enumeration.nu(n, j) for j in range(n + 1)]
    result["dominance_ratio"] = enumeration.dominance_ratio(n)
    _emit(result, out)


def cmd_construct(args, out):
    _need(args, "n")
    if args.family == "regular":
        _need(args, "k")
        g = constructions.regular_graph(args.n, args.k)
    elif args.family == "near-regular":
        _need(args, "k", "l")
        g = constructions.near_regular_graph(args.n, args.k, args.l)
    else:
        g = constructions.spectrum_graph(args.n)
    if args.json:
        _emit(graph.graph_to_json(g), out)
    else:
        out.write(graph.format_edge_list(g))


def _n_list(args, default):
    return _ints(args.n_list, "n") if args.n_list else default


def _experiment_report(args):
    name = args.name
    if name in ("prop5", "prop6"):
        ns = _n_list(args, [51, 101, 201] if name == "prop5" else [100, 400, 1600])
        cfg = asymptotics.ExperimentConfig(
            tuple(ns), args.trials, args.seed, args.sequence, args.c, args.csv, args.workers
        )
        return asymptotics.mc_degree_presence(cfg) if name == "prop5" else asymptotics.mc_nonzero_count(cfg)
    if name == "singularity":
        p = 0.9 if args.p is None else args.p
        return asymptotics.singularity_report(_n_list(args, [3, 4, 5, 6, 7]), p, args.C)
    if name == "nu-dominance":
        return asymptotics.nu_dominance_report(_n_list(args, list(range(1, 13))))
    if name == "fig4":
        report = asymptotics.ExperimentReport("fig4", ("n", "count", "ratio"))
        for n in _n_list(args, list(range(args.step, args.nmax + 1, args.step))):
            count, ratio = model2k.bidegree_nonzero_upper_bound(n, args.strict, args.denominator)
            report.rows.append((n, count, ratio))
        return report
    if name == "tn-bidegree":
        report = asymptotics.ExperimentReport("tn-bidegree", ("n", "count", "closed_form", "ratio"))
        for n in _n_list(args, [51, 101, 201]):
            c = constructions.spectrum_bidegree_nonzeros(n)
            report.rows.append((n, c, constructions.spectrum_bidegree_closed_form(n), c / (n * (n + 1) / 2)))
        return report
    if name == "er-theta":
        cols = ("n", "p", "theta_derived", "theta_log_odds", "max_gap_derived", "max_gap_log_odds")
        report = asymptotics.ExperimentReport("er-theta", cols)
        for n in _n_list(args, [3, 4]):
            for p in [0.3, 0.5, 0.7] if args.p is None else [args.p]:
                r = model1k.er_theta_report(n, p)
                report.rows.append(tuple(r[c] for c in cols))
        return report
    if name == "h-sequence":
        return asymptotics.h_sequence_report(_n_list(args, [10, 100, 1000]), args.c, args.sequence)
    if name == "lambda":
        _need(args, "k")
        report = asymptotics.ExperimentReport("lambda", ("n", "k", "lambda_k"))
        for n in _n_list(args, [201]):
            report.rows.append((n, args.k, asymptotics.lambda_k(n, args.k)))
        return report
    # band-bound
    report = asymptotics.ExperimentReport(
        "band-bound", ("n", "draw", "k", "prob_alpha", "bound_p0", "bound_lambda"), seed=args.seed, trials=args.trials
    )
    rng = np.random.default_rng(args.seed)
    lo, hi = math.log(0.9), math.log(1.1)
    for n in _n_list(args, [3, 4, 5]):
        for draw in range(args.trials):
            params = model1k.NaturalParams1K(n, rng.uniform(lo, hi, n - 1))
            for k, pa, b0, bl in asymptotics.band_bound_check(params):
                report.rows.append((n, draw, k, pa, b0, bl))
    return report


def cmd_experiment(args, out):
    report = _experiment_report(args)
    if args.csv:
        if args.csv == "-":
            out.write(report.to_csv())
        else:
            report.write(args.csv)
            if args.json:
                _emit(report.to_json(), out)
    else:
        _emit(report.to_json(), out)


# every public operation and the subcommand that exposes it
OPERATIONS = {
    "graph.read_graph": "stats",
    "graph.parse_edge_list": "stats",
    "graph.degree_vector": "stats",
    "graph.bi_degree_vector": "stats",
    "graph.scaled_bi_degree": "stats",
    "graph.edges_from_degrees": "stats",
    "graph.degrees_from_bidegrees": "stats",
    "graph.format_edge_list": "construct",
    "graph.graph_to_json": "construct",
    "enumeration.enumerate_graphs": "enumerate",
    "enumeration.count_no_isolated": "enumerate",
    "enumeration.nu": "enumerate",
    "enumeration.dominance_ratio": "enumerate",
    "constructions.regular_graph": "construct",
    "constructions.near_regular_graph": "construct",
    "constructions.spectrum_graph": "construct",
    "constructions.spectrum_bidegree_nonzeros": "experiment",
    "constructions.spectrum_bidegree_closed_form": "experiment",
    "polytope.polytope_A": "exists",
    "polytope.polytope_B": "exists",
    "polytope.mle_exists_1k": "exists",
    "polytope.existence_failures": "exists",
    "polytope.interior_membership": "exists",
    "polytope.membership": "exists",
    "model1k.alpha_from_p": "psi",
    "model1k.psi_1k": "psi",
    "model1k.log_prob_1k": "psi",
    "model1k.expected_stats_1k": "psi",
    "model1k.change_statistic": "psi",
    "model1k.prob_degree_present": "psi",
    "model1k.er_embedding": "psi",
    "model1k.fit_1k": "fit",
    "model1k.mean_reduced_degrees": "exists",
    "model1k.er_theta_report": "experiment",
    "model2k.psi_2k": "psi",
    "model2k.log_prob_2k": "psi",
    "model2k.expected_stats_2k": "psi",
    "model2k.fit_2k": "fit",
    "model2k.bidegree_nonzero_upper_bound": "experiment",
    "asymptotics.lambda_k": "experiment",
    "asymptotics.mc_degree_presence": "experiment",
    "asymptotics.mc_nonzero_count": "experiment",
    "asymptotics.h_sequence": "experiment",
    "asymptotics.h_sequence_report": "experiment",
    "asymptotics.singularity_experiment": "experiment",
    "asymptotics.singularity_report": "experiment",
    "asymptotics.nu_dominance_report": "experiment",
    "asymptotics.band_bound_check": "experiment",
}

COMMANDS = {
    "stats": cmd_stats,
    "psi": cmd_psi,
    "fit": cmd_fit,
    "exists": cmd_exists,
    "enumerate": cmd_enumerate,
    "construct": cmd_construct,
    "experiment": cmd_experiment,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dkergm", description="Exact inference for the 1K and 2K random graph models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("stats", help="degree and bi-degree statistics of a graph file")
    s.add_argument("--graph", required=True, metavar="FILE")

    s = sub.add_parser("psi", help="log-partition function, moments and probabilities")
    s.add_argument("--model", choices=("1k", "2k"), default="1k")
    s.add_argument("--n", type=int)
    s.add_argument("--alpha", help="comma list; '-inf' drops a coordinate")
    s.add_argument("--p", help="1k degree probabilities p_0..p_{n-1} instead of --alpha")
    s.add_argument("--er-p", type=float, help="use the Erdos-Renyi embedding for this edge probability")
    s.add_argument("--graph", metavar="FILE", help="also report the log-probability of this graph")
    s.add_argument("--present", type=int, metavar="K", help="also report P(some node has degree K)")
    s.add_argument("--change", metavar="K,K2", help="also report the change statistic for degrees K, K2")

    s = sub.add_parser("fit", help="maximum likelihood fit from observed graphs")
    s.add_argument("--model", choices=("1k", "2k"), default="1k")
    s.add_argument("--obs", nargs="+", action="extend", metavar="FILE")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--require-exists", action="store_true", help="exit 1 when the MLE does not exist")

    s = sub.add_parser("exists", help="1k MLE existence: closed form versus hull oracle")
    s.add_argument("--model", choices=("1k", "2k"), default="1k")
    s.add_argument("--obs", nargs="+", action="extend", metavar="FILE")
    s.add_argument("--n", type=int)
    s.add_argument("--mean", help="mean reduced degree vector, comma list of rationals")
    s.add_argument("--vertices", action="store_true", help="include the polytope vertex lists")
    s.add_argument("--require-exists", action="store_true")

    s = sub.add_parser("enumerate", help="partition table by exhaustive enumeration")
    s.add_argument("--n", type=int)
    s.add_argument("--key-kind", choices=enumeration.KEY_KINDS, default="degree-vector")
    s.add_argument("--restricted", action="store_true", help="only graphs without isolated nodes")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--cap-override", action="store_true", help=f"allow n={enumeration.HARD_CAP}")

    s = sub.add_parser("construct", help="regular, near-regular and full-spectrum graphs")
    s.add_argument("family", choices=("regular", "near-regular", "spectrum"))
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--l", type=int)
    s.add_argument("--json", action="store_true", help="JSON instead of the edge-list format")

    s = sub.add_parser(
        "experiment",
        help="experiment tables",
        epilog=EXPERIMENTS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    s.add_argument(
        "name",
        choices=(
            "prop5",
            "prop6",
            "singularity",
            "nu-dominance",
            "fig4",
            "tn-bidegree",
            "er-theta",
            "h-sequence",
            "lambda",
            "band-bound",
        ),
    )
    s.add_argument("--n", dest="n_list", metavar="N[,N...]")
    s.add_argument("--k", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=500)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--c", type=float, default=0.0, help="a_n = c*sqrt(n) or c*sqrt(n log n)")
    s.add_argument("--sequence", choices=asymptotics.SEQUENCE_KINDS, default="sqrt-n-log-n")
    s.add_argument("--p", type=float, help="edge probability (singularity: 0.9; er-theta: 0.3, 0.5, 0.7)")
    s.add_argument("--C", type=float, default=1.0)
    s.add_argument("--nmax", type=int, default=200)
    s.add_argument("--step", type=int, default=10)
    s.add_argument("--strict", action="store_true", help="fig4: stop before the running sum reaches n")
    s.add_argument("--denominator", choices=model2k.BOUND_DENOMINATORS, default="n(n+1)/2")
    s.add_argument("--csv", metavar="PATH", help="write the table as CSV ('-' for stdout)")
    s.add_argument("--json", action="store_true", help="with --csv PATH, also print JSON")
    return p


def run(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except SystemExit as exc:
        # --help and --version
        return int(exc.code or 0)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
