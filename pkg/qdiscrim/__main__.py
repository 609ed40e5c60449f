"""
Command line front end: success curves, the verification report, Monte Carlo runs, SVG plots and
the many-copy limit.

Exit status is 0 on success, 1 when an asserted verification check fails and 2 for usage or
domain errors.
"""

import argparse
import logging
import os
import sys
from itertools import product
from pathlib import Path

import orjson

from .adaptive import BAYES_CAP, asymptotic_limit, success_closed
from .curves import evaluate, curves_to_json, parse_angle, parse_schemes, write_csv
from .errors import QDiscrimError
from .metrics import render_metrics
from .plot import plot_file
from .sim import SEED_LIMIT, TrialPlan, compare, exact_reference, run_with_totals
from .states import NoiseModel, SignalEnsemble
from .verify import Grid, Verifier

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def angle_list(text: str):
    return [parse_angle(part) for part in text.split(",") if part.strip()]


def float_list(text: str):
    return [float(part) for part in text.split(",") if part.strip()]


def seed_value(text: str) -> int:
    seed = int(text, 0)
    if not 0 <= seed < SEED_LIMIT:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return seed


def default_seed() -> int:
    env = os.environ.get("QDISCRIM_SEED")
    if env is None:
        return 0
    try:
        return seed_value(env)
    except (ValueError, argparse.ArgumentTypeError):
        logging.warning(f"Ignoring QDISCRIM_SEED={env!r}, it is not an unsigned 64-bit integer")
        return 0


def write_output(out: str, data) -> None:
    """Write str or bytes to a file, or to stdout when out is '-'"""
    if isinstance(data, str):
        data = data.encode()
    if out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)
        logging.info(f"Wrote {out}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--debug", action="store_true", default=False, help="Print debug messages to stdout"
    )
    common.add_argument(
        "--quiet", action="store_true", default=False, help="Only print error messages to stdout"
    )
    common.add_argument(
        "--metrics-out",
        metavar="<path>",
        type=str,
        dest="metrics_out",
        default=None,
        help="Write the prometheus text exposition of the run counters to this file when the "
             "command finishes. Default is not to write metrics.",
    )

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument(
        "--theta",
        metavar="<rad|pi/K>[,...]",
        type=angle_list,
        dest="thetas",
        default=None,
        help="Half angle between the two signal states, in radians or as a fraction of pi such "
             "as pi/6. A comma separated list sweeps several angles. Default is pi/6 "
             "(curves: pi/6,pi/12).",
    )
    point.add_argument(
        "--fidelity",
        metavar="<F>[,...]",
        type=float_list,
        dest="fidelities",
        default=None,
        help="Preparation fidelity of each copy, between 0.5 and 1. A comma separated list "
             "sweeps several values. Default is 0.95 (curves: 0.95,0.99,0.999).",
    )
    point.add_argument(
        "--p0",
        metavar="<p>",
        type=float,
        default=0.5,
        help="Prior probability of the first signal state. Default is 0.5",
    )
    point.add_argument(
        "--bayes-cap",
        metavar="<N>",
        type=int,
        dest="bayes_cap",
        default=BAYES_CAP,
        help=f"Largest number of copies for which full-record Bayesian updating is evaluated "
             f"exactly. Default is {BAYES_CAP}",
    )

    parser = argparse.ArgumentParser(
        prog="qdiscrim",
        description="Multiple-copy discrimination of two noisy qubit states")
    commands = parser.add_subparsers(dest="command", metavar="<command>")
    commands.required = True

    curves = commands.add_parser("curves", parents=[common, point],
                                 help="Exact success curves over N = 1..n-max")
    curves.add_argument(
        "--n-max", metavar="<N>", type=int, dest="n_max", default=50,
        help="Largest number of copies. Default is 50",
    )
    curves.add_argument(
        "--schemes", metavar="<scheme>[,...]", type=parse_schemes,
        default=["adaptive", "qdg", "voting"],
        help="Schemes to evaluate: adaptive, adaptive-majority, bayes, qdg, voting, "
             "helstrom-pure. Default is adaptive,qdg,voting",
    )
    curves.add_argument(
        "--qdg-route", metavar="<route>", choices=("oracle", "kraus", "closed"),
        dest="qdg_route", default="oracle",
        help="How the data gathering probe is evaluated: oracle (explicit unitary), kraus "
             "(coefficient update) or closed (closed forms). Default is oracle",
    )
    curves.add_argument(
        "--format", metavar="<csv|json>", choices=("csv", "json"), default="csv",
        help="Output format. Default is csv",
    )
    curves.add_argument(
        "--out", metavar="<path>", type=str, default="-",
        help="Output file, - for stdout. Default is -",
    )

    verify = commands.add_parser("verify", parents=[common],
                                 help="Run the cross-route verification suite")
    verify.add_argument(
        "--grid", metavar="<default|file>", type=str, default="default",
        help="Grid of (theta, F) points: 'default' or a JSON file with keys thetas, fidelities "
             "and n_max. Default is default",
    )
    verify.add_argument(
        "--tol", metavar="<float>", type=float, default=1e-12,
        help="Tolerance of the exact route comparisons. Default is 1e-12",
    )
    verify.add_argument(
        "--trials", metavar="<n>", type=int, default=10 ** 6,
        help="Monte Carlo trials per sampled grid point, 0 to skip. Default is 1000000",
    )
    verify.add_argument(
        "--seed", metavar="<u64>", type=seed_value, default=None,
        help="Seed of every random stream. Default is $QDISCRIM_SEED or 0",
    )
    verify.add_argument(
        "--workers", metavar="<n>", type=int, default=1,
        help="Worker processes for the Monte Carlo checks. Default is 1",
    )
    verify.add_argument(
        "--k-sigma", metavar="<k>", type=float, dest="k_sigma", default=3.0,
        help="Standard errors allowed between an estimate and its reference. Default is 3",
    )
    verify.add_argument(
        "--out", metavar="<path>", type=str, default="-",
        help="Report file (JSON), - for stdout. Default is -",
    )

    mc = commands.add_parser("mc", parents=[common, point], help="Monte Carlo estimate")
    mc.add_argument(
        "--schemes", metavar="<scheme>[,...]", type=parse_schemes, default=["adaptive"],
        help="Schemes to simulate, any of adaptive, adaptive-majority, bayes, qdg, "
             "qdg-postselect, voting, helstrom-pure. Default is adaptive",
    )
    mc.add_argument(
        "--n-max", metavar="<N>", type=int, dest="n_max", default=3,
        help="Number of copies per trial. Default is 3",
    )
    mc.add_argument(
        "--trials", metavar="<n>", type=int, default=10 ** 5,
        help="Number of trials. Default is 100000",
    )
    mc.add_argument(
        "--seed", metavar="<u64>", type=seed_value, default=None,
        help="Seed of the random streams. Default is $QDISCRIM_SEED or 0",
    )
    mc.add_argument(
        "--workers", metavar="<n>", type=int, default=1,
        help="Worker processes; results do not depend on it. Default is 1",
    )
    mc.add_argument(
        "--budget-factor", metavar="<k>", type=int, dest="budget_factor", default=4,
        help="Post-selected data gathering may consume k*N copies. Default is 4",
    )
    mc.add_argument(
        "--k-sigma", metavar="<k>", type=float, dest="k_sigma", default=3.0,
        help="Standard errors allowed between the estimate and the exact value. Default is 3",
    )
    mc.add_argument(
        "--out", metavar="<path>", type=str, default="-",
        help="Output file (JSON), - for stdout. Default is -",
    )

    plot = commands.add_parser("plot", parents=[common], help="SVG chart of a curves CSV")
    plot.add_argument(
        "--in", metavar="<path>", type=str, dest="csv_in", required=True,
        help="CSV written by the curves command",
    )
    plot.add_argument(
        "--out", metavar="<path>", type=str, required=True, help="SVG file to write",
    )
    plot.add_argument(
        "--log-scale", action="store_true", dest="log_scale", default=False,
        help="Logarithmic failure probability axis",
    )

    limit = commands.add_parser("limit", parents=[common, point],
                                help="Common many-copy success probability")
    limit.add_argument(
        "--n-max", metavar="<N>", type=int, dest="n_max", default=None,
        help="Also print the adaptive closed form for N = 1..n-max. Default is the limit only",
    )
    return parser


def points(args, default_thetas, default_fidelities):
    thetas = args.thetas or default_thetas
    fidelities = args.fidelities or default_fidelities
    return [(SignalEnsemble(t, args.p0), NoiseModel(f)) for t, f in product(thetas, fidelities)]


def cmd_curves(args) -> int:
    results = []
    for ens, noise in points(args, [parse_angle("pi/6"), parse_angle("pi/12")],
                             [0.95, 0.99, 0.999]):
        for scheme in args.schemes:
            results.append(evaluate(scheme, ens, noise, args.n_max, args.bayes_cap,
                                    args.qdg_route))
    logging.info(f"Evaluated {len(results)} curve(s) up to N={args.n_max}")
    write_output(args.out, curves_to_json(results) if args.format == "json"
                 else write_csv(results))
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = Grid() if args.grid == "default" else Grid.from_json(Path(args.grid).read_bytes())
    seed = args.seed if args.seed is not None else default_seed()
    report = Verifier(grid, seed=seed, tol=args.tol, mc_trials=args.trials,
                      k_sigma=args.k_sigma, workers=args.workers).run()
    write_output(args.out, report.to_json())
    if report.passed:
        logging.info(f"All {len(report.entries)} checks passed or reported")
        return EXIT_OK
    logging.error(f"Verification failed: {', '.join(report.failures)}")
    return EXIT_VERIFY_FAILED


def cmd_mc(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    results = []
    for ens, noise in points(args, [parse_angle("pi/6")], [0.95]):
        for scheme in args.schemes:
            plan = TrialPlan(scheme, ens, noise, n_copies=args.n_max, trials=args.trials,
                             seed=seed, workers=args.workers, budget_factor=args.budget_factor)
            estimate, totals = run_with_totals(plan)
            reference = exact_reference(plan, args.bayes_cap)
            # worker count is left out so that the file does not depend on it
            entry = {"scheme": scheme, "theta": ens.theta, "fidelity": noise.fidelity,
                     "p0": ens.prior0, "N": args.n_max, "trials": args.trials, "seed": seed,
                     "p_hat": estimate.p_hat, "std_err": estimate.std_err,
                     "reference": reference}
            if reference is not None:
                verdict = compare(estimate, reference, args.k_sigma)
                entry.update({"z": verdict.z, "within_k_sigma": verdict.passed})
            if scheme == "qdg-postselect":
                entry.update({"budget": plan.budget,
                              "mean_copies": totals["copies"] / totals["trials"],
                              "restarts": totals["restarts"],
                              "heralded_failures": totals["heralded"]})
            results.append(entry)
    write_output(args.out, orjson.dumps(results, option=orjson.OPT_INDENT_2))
    return EXIT_OK


def cmd_plot(args) -> int:
    plot_file(Path(args.csv_in), Path(args.out), log_scale=args.log_scale)
    return EXIT_OK


def cmd_limit(args) -> int:
    for ens, noise in points(args, [parse_angle("pi/6")], [0.95]):
        limit = asymptotic_limit(ens.theta, noise)
        print(f"theta={ens.theta!r} fidelity={noise.fidelity!r} limit={limit!r}")
        if args.n_max:
            for n in range(1, args.n_max + 1):
                print(f"  N={n} adaptive={success_closed(n, ens, noise)!r}")
    return EXIT_OK


COMMANDS = {
    "curves": cmd_curves,
    "verify": cmd_verify,
    "mc": cmd_mc,
    "plot": cmd_plot,
    "limit": cmd_limit,
}


def main(argv=None):
    """Run the qdiscrim command line"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # set logging message verbosity
    if args.debug:
        logging.basicConfig(level=logging.DEBUG,
                            format='%(levelname)s: %(asctime)s - %(message)s',
                            datefmt='%d-%b-%y %H:%M:%S')
    elif args.quiet:
        logging.basicConfig(level=logging.ERROR,
                            format='%(levelname)s: %(asctime)s - %(message)s',
                            datefmt='%d-%b-%y %H:%M:%S')
    else:
        logging.basicConfig(level=logging.INFO,
                            format='%(levelname)s: %(asctime)s - %(message)s',
                            datefmt='%d-%b-%y %H:%M:%S')

    try:
        code = COMMANDS[args.command](args)
    except QDiscrimError as e:
        logging.error(str(e))
        code = EXIT_USAGE
    except (ValueError, OSError) as e:
        logging.error(f"{args.command}: {e}")
        code = EXIT_USAGE
    if args.metrics_out:
        Path(args.metrics_out).write_bytes(render_metrics())
    return code


if __name__ == "__main__":
    sys.exit(main())
