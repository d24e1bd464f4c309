"""Command-line front end.

Exit codes: 0 ok, 1 input validation, 2 numerical failure, 3 property failure.
"""
from __future__ import annotations

import argparse
import json
import sys



from . import bandit, best_choice as bc, io, odds_engine as oe, point_processes as pp, verification
from ._seeding import block_rng
from .errors import NumericalError, ValidationError
from .monte_carlo import SimulationConfig, XStrategy, parse_strategy, simulate

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_PROPERTY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _emit(payload, output: str, config: dict, out) -> None:
    if output == "json":
        if isinstance(payload, list):
            payload = {"rows": payload}
        out.write(json.dumps({**payload, "config": config}, indent=2) + "\n")
    else:
        rows = payload if isinstance(payload, list) else [payload]
        out.write("# config: " + json.dumps(config) + "\n")
        out.write(io.rows_to_csv([{k: v for k, v in r.items() if not isinstance(v, (dict, list))} for r in rows]))


def _config(args, **extra) -> dict:
    skip = {"func", "command"}
    d = {k: v for k, v in vars(args).items() if k not in skip}
    d.update(extra)
    d["command"] = args.command
    return d


# ---------------------------------------------------------------------------


def cmd_odds(args, out) -> int:
    problem = io.read_odds_problem(args.file)
    result = oe.solve(problem)
    _emit(result.to_dict(), args.output, _config(args, n=problem.n), out)
    return EXIT_OK


def cmd_odds_delayed(args, out) -> int:
    p = io.parse_probability_csv(io._read_text(args.file))
    n = args.w + len(p) - 1
    rule = oe.delayed_threshold(oe.DelayedOddsProblem(n, args.w, tuple(p)))
    _emit(rule.to_dict(), args.output, _config(args, n=n), out)
    return EXIT_OK


def cmd_continuous(args, out) -> int:
    eta = io.read_intensity(args.file)
    t_star = oe.continuous_threshold(eta, args.T, xtol=args.tolerance or 1e-10)
    diagnostics = []
    for m in (10, 100, 1000):
        try:
            part = oe.partition_odds_sum(eta, args.T, m)
        except ValidationError as exc:
            diagnostics.append({"m": m, "error": str(exc)})
            continue
        diagnostics.append(
            {
                "m": m,
                "odds_sum": part.odds_sum,
                "integral": part.integral,
                "max_cell_prob": part.max_cell_prob,
                "squeeze_holds": part.squeeze_holds(),
                "discretized_threshold": oe.discretized_threshold(eta, args.T, m),
            }
        )
    payload = {"t_star": t_star, "tail_integral": eta.tail(t_star), "partitions": diagnostics}
    if args.output == "csv":
        payload = [{"t_star": t_star, "tail_integral": payload["tail_integral"], **d} for d in diagnostics]
    _emit(payload, args.output, _config(args, intensity=eta.to_dict()), out)
    return EXIT_OK


def cmd_thresholds(args, out) -> int:
    _emit(bc.threshold_table(args.n), args.output, _config(args), out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    if args.strategy is not None:
        strategy = parse_strategy(args.strategy)
    elif args.x is not None:
        strategy = XStrategy(args.x)
    else:
        strategy = XStrategy(bc.INV_E)
    report = simulate(SimulationConfig(args.trials, args.seed, args.n, strategy, args.workers))
    payload = report.to_dict()
    if args.output == "csv":
        payload = {"estimate": report.estimate, "std_error": report.std_error, "trials": report.trials, **report.outcome_counts}
    _emit(payload, args.output, _config(args, strategy=strategy.label()), out)
    return EXIT_OK


def cmd_pi_process(args, out) -> int:
    rng = block_rng(args.seed, 0)
    for _ in range(args.trials):
        path = pp.simulate_pi_process(args.t1, rng, seed_count=args.count)
        out.write(pp.path_to_json(path, pp.thin_records(path, rng)) + "\n")
    return EXIT_OK


def cmd_records(args, out) -> int:
    rng = block_rng(args.seed, 0)
    samples = (pp.sample_arrivals(args.n, rng) for _ in range(args.trials))
    for line in pp.iter_sample_rows(samples):
        out.write(line + "\n")
    return EXIT_OK


def cmd_bandit(args, out) -> int:
    if args.file:
        inst = io.read_two_line_csv(args.file)
    else:
        inst = bandit.TwoLineInstance((0.2,) * 10, (0.8,) * 10)
    g = bandit.simulate_red_light(inst, args.delta, args.trials, args.seed, args.coupling, args.workers)
    payload = {
        "n": inst.n,
        "M_n": bandit.accumulated_max(inst),
        "l_n": bandit.l_divergence(inst),
        **g.to_dict(),
        "within_bound": g.gap <= g.bound + 3.0 * g.std_error,
    }
    _emit(payload, args.output, _config(args), out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    cfg = verification.VerifyConfig(
        trials=args.trials,
        seed=args.seed,
        sigma=args.sigma,
        resolution=args.resolution,
        tolerance=args.tolerance,
        workers=args.workers,
    )
    try:
        results = verification.run(cfg, args.property)
    except KeyError as exc:
        raise ValidationError(str(exc.args[0])) from None
    failed = any(r.status == verification.FAIL for r in results)
    if args.output == "json":
        out.write(json.dumps({"config": _config(args), "properties": [r.to_dict() for r in results]}, indent=2) + "\n")
    else:
        out.write("# config: " + json.dumps(_config(args)) + "\n")
        out.write(io.rows_to_csv([{"property": r.name, "status": r.status, "margin": r.margin, "seconds": r.seconds} for r in results]))
    return EXIT_PROPERTY if failed else EXIT_OK


# ---------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    # fresh per subcommand: set_defaults on a child mutates shared parent actions
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=42)
    common.add_argument("--output", choices=("json", "csv"), default="json")
    common.add_argument("--tolerance", type=float, default=None)
    return common


def _sim() -> argparse.ArgumentParser:
    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--trials", type=_positive, default=100_000)
    sim.add_argument("--workers", type=_positive, default=1)
    return sim


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oddstop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("odds", parents=[_common()], help="odds-theorem thresholds for a CSV of probabilities")
    p.add_argument("file")
    p.set_defaults(func=cmd_odds)

    p = sub.add_parser("odds-delayed", parents=[_common()], help="delayed-stopping threshold")
    p.add_argument("file", help="CSV of p_j(w) for j = w..n")
    p.add_argument("--w", type=_positive, required=True, help="realized delay index")
    p.set_defaults(func=cmd_odds_delayed)

    p = sub.add_parser("continuous", parents=[_common()], help="continuous-time threshold for a JSON intensity")
    p.add_argument("file")
    p.add_argument("--T", type=float, default=0.0, help="earliest admissible time")
    p.set_defaults(func=cmd_continuous)

    p = sub.add_parser("thresholds", parents=[_common()], help="table of x_n, p_n(x_n), p_n(1/e)")
    p.add_argument("--n", type=_positive, default=20, help="largest n")
    p.set_defaults(func=cmd_thresholds, output="csv")

    p = sub.add_parser("simulate", parents=[_common(), _sim()], help="Monte Carlo of an x-strategy or cutoff rule")
    p.add_argument("--strategy", help="x=<float>, x=1/e or cutoff=<int>")
    p.add_argument("--x", type=float)
    p.add_argument("--n", type=_positive, default=10)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pi-process", parents=[_common(), _sim()], help="JSON-lines dump of thinned p.i. paths")
    p.add_argument("--t1", type=float, default=0.25, help="seed time")
    p.add_argument("--count", type=_positive, default=1, help="count at the seed time")
    p.set_defaults(func=cmd_pi_process, trials=10)

    p = sub.add_parser("records", parents=[_common(), _sim()], help="JSON-lines dump of ranked arrivals and their records")
    p.add_argument("--n", type=_positive, default=10)
    p.set_defaults(func=cmd_records, trials=10)

    p = sub.add_parser("bandit", parents=[_common(), _sim()], help="red-light gap of the two-line betting example")
    p.add_argument("file", nargs="?", help="CSV with columns p1,p2")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--coupling", choices=bandit.COUPLINGS, default="independent")
    p.set_defaults(func=cmd_bandit)

    p = sub.add_parser("verify", parents=[_common(), _sim()], help="run the property suite")
    p.add_argument("--property", action="append", help="restrict to this property (repeatable)")
    p.add_argument("--sigma", type=float, default=4.0)
    p.add_argument("--resolution", type=float, default=0.01)
    p.set_defaults(func=cmd_verify, trials=200_000)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"oddstop {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, FloatingPointError, OverflowError) as exc:
        print(f"oddstop {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
