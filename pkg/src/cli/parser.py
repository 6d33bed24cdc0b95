"""
Command-line argument parser.
"""
import argparse

from src.utils.numbers import parse_complex


def complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def n_list_arg(text: str):
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(n < 2 for n in values):
        raise argparse.ArgumentTypeError("truncation orders must be integers >= 2")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--no-timestamp", action="store_true", help="omit wall-clock duration (reproducible output)")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    parser = argparse.ArgumentParser(
        prog="isoreduce",
        description="Isospectral reduction of finite and countable weighted graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="check a structural set and list depths")
    check.add_argument("graph", help="graph file")

    reduce = sub.add_parser("reduce", parents=[common], help="evaluate R_S(lambda)")
    reduce.add_argument("graph")
    reduce.add_argument("--lambda", dest="lam", type=complex_arg, required=True,
                        help="evaluation point, e.g. 2, 0.5+1i (use --lambda=-1 for negatives)")
    reduce.add_argument("--method", choices=["branches", "solve", "both"], default="solve")

    spectrum = sub.add_parser("spectrum", parents=[common], help="spectrum of A against the reduced determinant")
    spectrum.add_argument("graph")
    spectrum.add_argument("--reduced-only", action="store_true",
                          help="find zeros of det(R_S(lambda) - lambda I) by Newton iteration")

    reconstruct = sub.add_parser("reconstruct", parents=[common], help="reconstruct an eigenvector from S")
    reconstruct.add_argument("graph")
    reconstruct.add_argument("--lambda", dest="lam", type=complex_arg, default=None,
                             help="eigenvalue to use (default: the k-th reduced eigenvalue)")
    reconstruct.add_argument("-k", type=positive_int, default=1, help="1-based eigenvalue index")

    markov = sub.add_parser("markov", help="stationary measure of the Markov family")
    markov_sub = markov.add_subparsers(dest="action", required=True)
    for action, help_text in (
        ("stationary", "closed-form stationary measure"),
        ("convergence", "truncation sweep: norm gap and distance to q"),
        ("simulate", "Monte Carlo occupation frequencies"),
    ):
        p = markov_sub.add_parser(action, parents=[common], help=help_text)
        p.add_argument("params", help="family parameter file (key = value)")
        p.add_argument("--tol", type=positive_float, default=None, help="numerical tolerance (config markov.tol)")
        p.add_argument("--window", type=positive_int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--steps", type=positive_int, default=None)
        p.add_argument("--n-list", type=n_list_arg, default=None)
        p.add_argument("--runs", type=positive_int, default=1, help="independent Monte Carlo runs")
        p.add_argument("--workers", type=positive_int, default=1)

    return parser
