"""
Command handlers. Each takes parsed arguments and returns a RunReport;
library errors propagate to the application.
"""
import logging
from argparse import Namespace
from typing import Dict

import numpy as np
import scipy.linalg

from src.cli.report import RunReport, Table, inputs_digest
from src.core.config import config
from src.core.errors import NotAnEigenvalueError
from src.graph import compute_depths, is_structural_set, load_graph
from src.markov import (
    load_params,
    simulate_many,
    spawn_seeds,
    stationary_closed_form,
    total_variation,
    truncation_convergence,
    validate,
)
from src.reduction import (
    find_reduced_roots,
    reconstruct_eigenvector,
    reduce_branches,
    reduce_linear_solve,
    reduced_determinant,
    reduced_spectrum,
    restrict_eigenvector,
)
from src.reduction.finite import sigma_tolerance
from src.reduction.spectrum import cluster_tolerance

logger = logging.getLogger(__name__)


def _digest(path: str, **extra) -> str:
    return inputs_digest([path], {k: v for k, v in extra.items() if v is not None})


def cmd_check(args: Namespace) -> RunReport:
    g, S = load_graph(args.graph)
    report = RunReport("check", _digest(args.graph))
    verdict = is_structural_set(g, S)
    report.add("structural_set", list(S))
    report.add("sigma", list(g.sigma(S)))
    if not verdict:
        report.add("verdict", "not structural")
        report.add("witness_cycle", list(verdict.witness))
        report.exit_code = 1
        return report

    report.add("verdict", "structural")
    depths = compute_depths(g, S)
    table = Table(["vertex", "depth"])
    for v in depths.order():
        table.add(v, depths.depth[v])
    report.add("depths", table)
    report.add("max_depth", depths.max_depth)
    return report


def cmd_reduce(args: Namespace) -> RunReport:
    g, S = load_graph(args.graph)
    report = RunReport(f"reduce --method {args.method}", _digest(args.graph, lam=args.lam, method=args.method))
    report.tolerances["sigma"] = sigma_tolerance(g)
    report.add("lambda", args.lam)
    report.add("S", list(S))

    if args.method == "branches":
        report.add("R_S(lambda)", reduce_branches(g, S, args.lam).entries)
    elif args.method == "solve":
        report.add("R_S(lambda)", reduce_linear_solve(g, S, args.lam).entries)
    else:
        solved = reduce_linear_solve(g, S, args.lam).entries
        branched = reduce_branches(g, S, args.lam).entries
        scale = max(1.0, float(np.abs(solved).max()))
        report.add("R_S(lambda)", solved)
        report.add("max_relative_discrepancy", float(np.abs(solved - branched).max()) / scale)
    return report


def cmd_spectrum(args: Namespace) -> RunReport:
    g, S = load_graph(args.graph)
    mode = "reduced-only" if args.reduced_only else "full"
    report = RunReport(f"spectrum ({mode})", _digest(args.graph, mode=mode))
    report.tolerances["sigma"] = sigma_tolerance(g)
    report.tolerances["cluster"] = cluster_tolerance(g)
    report.add("sigma", list(g.sigma(S)))

    if args.reduced_only:
        table = Table(["k", "root", "residual"])
        for k, root in enumerate(find_reduced_roots(g, S), start=1):
            table.add(k, root, abs(reduced_determinant(g, S, root)))
        report.add("reduced_roots", table)
        return report

    spectrum = reduced_spectrum(g, S)
    table = Table(["k", "eigenvalue", "residual"])
    for k, r in enumerate(spectrum.reduced_spectrum, start=1):
        table.add(k, r.value, r.residual)
    report.add("reduced_spectrum", table)
    report.add("excluded", list(spectrum.excluded))
    report.add("max_residual", spectrum.max_residual)
    return report


def _normalize(x: np.ndarray) -> np.ndarray:
    pivot = x[int(np.argmax(np.abs(x)))]
    return x / pivot if pivot != 0 else x


def cmd_reconstruct(args: Namespace) -> RunReport:
    g, S = load_graph(args.graph)
    if args.lam is None:
        values = reduced_spectrum(g, S).values()
        if not 1 <= args.k <= len(values):
            raise NotAnEigenvalueError(f"there are {len(values)} eigenvalues outside Sigma, asked for k={args.k}")
        lam0 = values[args.k - 1]
    else:
        lam0 = args.lam

    report = RunReport("reconstruct", _digest(args.graph, lam=args.lam, k=args.k))
    R = reduce_linear_solve(g, S, lam0).entries
    _, singular, vh = scipy.linalg.svd(R - lam0 * np.eye(len(S)))
    threshold = 1e-8 * max(1.0, float(np.abs(R).sum(axis=0).max()))
    report.tolerances["eigenvalue"] = threshold
    if singular[-1] > threshold:
        raise NotAnEigenvalueError(f"{lam0} is not an eigenvalue of R_S({lam0}) (smallest singular value {singular[-1]:.3e})")

    v = vh[-1].conj()
    u = _normalize(reconstruct_eigenvector(g, S, lam0, v))
    A = g.adjacency()
    residual = float(np.linalg.norm(A @ u - lam0 * u) / np.linalg.norm(u))

    report.add("lambda0", lam0)
    report.add("v", restrict_eigenvector(u, S))
    report.add("u", u)
    report.add("residual", residual)
    return report


def _markov_settings(args: Namespace) -> Dict:
    return {
        "tol": args.tol if args.tol is not None else float(config.get("markov.tol", 1e-12)),
        "window": args.window if args.window is not None else int(config.get("markov.window", 40)),
        "seed": args.seed if args.seed is not None else int(config.get("markov.seed", 7)),
        "steps": args.steps if args.steps is not None else int(config.get("markov.steps", 1_000_000)),
        "n_list": args.n_list if args.n_list is not None else list(config.get("markov.n_list", [3, 5, 8, 12])),
    }


def cmd_markov(args: Namespace) -> RunReport:
    p = load_params(args.params)
    validate(p)
    s = _markov_settings(args)
    report = RunReport(f"markov {args.action}", _digest(args.params, action=args.action, **s, runs=args.runs))
    report.tolerances["tol"] = s["tol"]

    if args.action == "stationary":
        measure = stationary_closed_form(p, s["tol"], s["window"])
        table = Table(["state", "q"])
        for i, value in enumerate(measure.q, start=1):
            table.add(i, value)
        report.add("reduced_matrix", measure.reduced)
        report.add("v", list(measure.v))
        report.add("q", table)
        report.add("tail_bound", measure.tail_bound)
        report.add("total_mass", measure.mass + measure.tail_bound)
        report.truncation["reduced_2x2"] = measure.report
        return report

    if args.action == "convergence":
        sweep = truncation_convergence(p, s["n_list"], s["tol"], s["window"])
        table = Table(["n", "gap", "2 max b_i", "2 C rho^n", "tv_distance"])
        for row in sweep.rows:
            table.add(row.n, row.gap, row.gap_expected, row.gap_bound, row.tv_distance)
        report.add("window", sweep.window)
        report.add("convergence", table)
        report.add("monotone", sweep.monotone)
        if not sweep.monotone:
            report.warnings.append("total variation is not monotone in n")
        return report

    seeds = [s["seed"]] if args.runs <= 1 else spawn_seeds(s["seed"], args.runs)
    empirical = simulate_many(p, s["steps"], seeds, s["window"], args.workers)
    measure = stationary_closed_form(p, s["tol"], s["window"])
    table = Table(["state", "frequency", "q"])
    for i, (f, q) in enumerate(zip(empirical.frequencies, measure.q), start=1):
        table.add(i, f, q)
    report.add("steps", empirical.steps)
    report.add("seeds", list(empirical.seeds))
    report.add("occupation", table)
    report.add("above_window", empirical.above)
    tv = total_variation(np.append(empirical.frequencies, empirical.above), np.append(measure.q, measure.tail_bound))
    report.add("tv_distance", tv)
    return report


COMMANDS = {
    "check": cmd_check,
    "reduce": cmd_reduce,
    "spectrum": cmd_spectrum,
    "reconstruct": cmd_reconstruct,
    "markov": cmd_markov,
}
