"""Command-line front end.

Subcommands: nfl, freelunch, classify, complexity, enumerate, bounds, sweep.
Every subcommand is a pure function of its flags, config file, and input
files: repeated runs produce byte-identical output, including with
--workers > 1 (rows are always written in task order).  Data goes to the
output file or stdout; diagnostics go to stderr; exit status is 0 iff no
error diagnostic was issued.

A config file holds `key = value` lines (# comments allowed) whose keys are
the long flag names with dashes, e.g. `theta = 0.5`; explicit flags take
precedence.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path

from . import analysis
from .classify import (
    BASELINE_KINDS,
    CSV_COLUMNS,
    astar,
    evaluate,
    parse_strategy,
)
from .enumerator import approx_m, build_mn
from .errors import MincompError
from .estimators import conditional_complexity, parse_estimator
from .model import (
    Mask,
    bernoulli_mask,
    first_bit_problem,
    load_mask,
    load_problem,
    prefix_mask,
)
from .rng import derive_seed

ALL_ALGORITHMS = ("astar",) + BASELINE_KINDS


def _emit(lines: list[str], output: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(row) -> str:
    cells = []
    for v in row:
        s = str(v)
        if "," in s or '"' in s:
            s = '"' + s.replace('"', '""') + '"'
        cells.append(s)
    return ",".join(cells)


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _load_config(path: str) -> dict[str, str]:
    config = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"{path}: expected 'key = value', got {raw!r}")
        config[key.strip().replace("-", "_")] = value.strip()
    return config


def _algorithm_callable(kind: str, est, strategy, seed):
    """Adapt a named algorithm to the analysis-module protocol."""
    from .model import Problem  # local to keep module import light

    def algo(features, visible, test, n_labels):
        if kind == "astar":
            if n_labels != 2:
                raise ValueError("the complexity classifier is binary only")
            n = len(features)
            labels = "".join(
                str(visible.get(pos, 0)) for pos in range(1, n + 1)
            )
            problem = Problem(k=len(features[0]), features=tuple(features), labels=labels)
            mask = Mask("".join("1" if pos in visible else "0" for pos in range(1, n + 1)))
            pred, _ = astar(problem, mask, est, strategy)
            return [int(c) for c in pred]
        if kind == "constant0":
            return [0] * len(test)
        if kind == "constant1":
            return [1] * len(test)
        if kind == "best_constant_on_train":
            counts = [0] * n_labels
            for pos in visible:
                counts[visible[pos]] += 1
            best = max(range(n_labels), key=lambda y: (counts[y], -y))
            return [best] * len(test)
        if kind == "random":
            from .rng import SplitMix64

            gen = SplitMix64(seed or 0)
            return [gen.below(n_labels) for _ in test]
        raise ValueError(f"unknown algorithm {kind!r}")

    return algo


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_nfl(args) -> int:
    mask = Mask(args.mask)
    est = parse_estimator(args.estimator)
    strategy = parse_strategy(args.strategy)
    algorithms = args.algorithms.split(",")
    lines = ["algorithm,size_x,size_y,mask,loss_num,loss_den"]
    for kind in algorithms:
        algo = _algorithm_callable(kind.strip(), est, strategy, args.seed)
        value = analysis.nfl_expected_loss(algo, args.size_x, args.size_y, mask)
        lines.append(
            _csv((kind.strip(), args.size_x, args.size_y, args.mask,
                  value.numerator, value.denominator))
        )
    _emit(lines, args.output)
    return 0


def cmd_freelunch(args) -> int:
    result = analysis.free_lunch_experiment(
        args.m, args.kk, args.L, args.S, uniform=args.uniform_prior
    )
    lines = ["m,kk,L,S,prior,expected_num,expected_den,margin_num,margin_den,constant"]
    lines.append(
        _csv((args.m, args.kk, args.L, args.S,
              "uniform" if args.uniform_prior else "mn",
              result.expected.numerator, result.expected.denominator,
              result.margin.numerator, result.margin.denominator,
              result.constant_for_rest))
    )
    prior_lines = ["labels,weight_num,weight_den"]
    for labels in sorted(result.prior.weights):
        w = result.prior.weights[labels]
        prior_lines.append(_csv((labels, w.numerator, w.denominator)))
    if args.prior_out:
        _emit(prior_lines, args.prior_out)
    else:
        lines.append("# prior")
        lines.extend(prior_lines)
    _emit(lines, args.output)
    return 0


def _classify_task(task):
    """One (mask, algorithm) evaluation; module-level so worker pools can pickle it."""
    (problem, mask, kind, est_text, strategy_text, seed, theta, mask_kind, timing) = task
    report = evaluate(
        problem,
        mask,
        kind,
        parse_estimator(est_text),
        parse_strategy(strategy_text),
        seed=seed,
        theta=theta,
        mask_kind=mask_kind,
    )
    if not timing:
        report = type(report)(**{**report.__dict__, "runtime_ms": 0})
    return report


def _run_tasks(tasks, workers):
    if workers > 1:
        with Pool(workers) as pool:
            return pool.map(_classify_task, tasks, chunksize=1)
    return [_classify_task(t) for t in tasks]


def _classify_tasks(problem, args, thetas):
    """Task list for a seed sweep: one prefix-mask row set, then seeded masks.

    Masks with no test position are skipped and counted for the footer.
    """
    algorithms = [a.strip() for a in args.algorithms.split(",")]
    tasks = []
    skipped = 0
    n = problem.n
    prefix_m = args.prefix_m if args.prefix_m is not None else round(thetas[0] * n)
    pmask = prefix_mask(n, prefix_m)
    if pmask.ones < n:
        for kind in algorithms:
            tasks.append((problem, pmask, kind, args.estimator,
                          args.strategy, None, None, "prefix", args.timing))
    else:
        skipped += 1
    index = 0
    for theta in thetas:
        for _ in range(args.seeds):
            mask_seed = derive_seed(args.seed, 2 * index)
            algo_seed = derive_seed(args.seed, 2 * index + 1)
            index += 1
            mask = bernoulli_mask(n, theta, mask_seed)
            if mask.ones == n:
                skipped += 1
                continue
            for kind in algorithms:
                tasks.append((problem, mask, kind, args.estimator,
                              args.strategy, algo_seed, theta, "bernoulli",
                              args.timing))
    return tasks, skipped


def _emit_reports(reports, skipped, args) -> None:
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(_csv(r.row()) for r in reports)
    if skipped:
        lines.append(f"# skipped_empty_test_masks={skipped}")
    _emit(lines, args.output)


def cmd_classify(args) -> int:
    problem = load_problem(args.problem) if args.problem else first_bit_problem(args.k)
    if args.mask:
        mask = load_mask(args.mask)
        tasks = [(problem, mask, kind.strip(), args.estimator, args.strategy,
                  None, None, "file", args.timing)
                 for kind in args.algorithms.split(",")]
        skipped = 0
    else:
        tasks, skipped = _classify_tasks(problem, args, [args.theta])
    reports = _run_tasks(tasks, args.workers)
    _emit_reports(reports, skipped, args)
    return 0


def cmd_sweep(args) -> int:
    problem = load_problem(args.problem) if args.problem else first_bit_problem(args.k)
    thetas = [float(t) for t in args.thetas.split(",")]
    tasks, skipped = _classify_tasks(problem, args, thetas)
    reports = _run_tasks(tasks, args.workers)
    _emit_reports(reports, skipped, args)
    return 0


def cmd_complexity(args) -> int:
    lines = ["string,side,estimator,bits"]
    for text in args.estimator:
        est = parse_estimator(text)
        bits = conditional_complexity(args.string, args.side, est)
        lines.append(_csv((args.string, args.side, est, format(bits, ".10g"))))
    _emit(lines, args.output)
    return 0


def cmd_enumerate(args) -> int:
    table = build_mn(args.depth, args.side, args.L, args.S)
    lines = ["string,m_lower,mn,km_bits,programs_counted,L,S"]
    for length in range(args.depth + 1):
        for i in range(2 ** length):
            x = format(i, f"0{length}b") if length else ""
            est = approx_m(x, args.side, args.L, args.S)
            km = "" if est.value == 0 else format(-math.log2(est.value) + 0.0, ".10g")
            lines.append(
                _csv((x, _frac(est.value), _frac(table.entries[x]) if length else "1/1",
                      km, est.programs_counted, args.L, args.S))
            )
    _emit(lines, args.output)
    return 0


def cmd_bounds(args) -> int:
    params = analysis.ILLUSTRATIVE if args.profile == "illustrative" else analysis.BoundParams()
    # entropy-inequality grid
    grid_lines = ["theta,alpha,middle,upper,gap"]
    for ti in range(1, 100):
        theta = ti / 100.0
        for ai in range(0, 101):
            alpha = ai / 100.0
            _, middle, upper = analysis.entropy_inequality_chain(theta, alpha)
            grid_lines.append(
                _csv((format(theta, ".2f"), format(alpha, ".2f"),
                      format(middle, ".10g"), format(upper, ".10g"),
                      format(upper - middle, ".10g")))
            )
    _emit(grid_lines, args.grid_output)

    # bound-vs-n curves
    ns = [int(v) for v in args.n_list.split(",")]
    lines = ["n,theta,km_f,km_x,bound2,bound3"]
    plot_lines = []
    omitted = 0
    for n in ns:
        try:
            b2 = analysis.loss_bound_km_features(args.km_f, args.km_x, n, args.theta, params)
            b3 = analysis.loss_bound_log_size(args.km_f, n, n, args.theta, params)
        except MincompError:
            omitted += 1
            continue
        lines.append(_csv((n, format(args.theta, ".10g"), format(args.km_f, ".10g"),
                           format(args.km_x, ".10g"), format(b2, ".10g"),
                           format(b3, ".10g"))))
        plot_lines.append(f"{n} {format(b2, '.10g')} {format(b3, '.10g')}")
    if omitted:
        lines.append(f"# omitted_degenerate={omitted}")
    _emit(lines, args.output)
    if args.plot_data:
        Path(args.plot_data).write_text("\n".join(plot_lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mincomp",
        description="Minimum-complexity classification and no-free-lunch experiments",
    )
    parser.add_argument("--config", help="key = value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("-o", "--output", help="output CSV path (default stdout)")

    p = sub.add_parser("nfl", help="exact expected loss under the uniform prior")
    p.add_argument("--size-x", type=int, default=4)
    p.add_argument("--size-y", type=int, default=2)
    p.add_argument("--mask", default="1100")
    p.add_argument("--algorithms", default=",".join(ALL_ALGORITHMS))
    p.add_argument("--estimator", default="kt:r=2")
    p.add_argument("--strategy", default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_nfl)

    p = sub.add_parser("freelunch", help="expected loss under the machine prior")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--kk", type=int, default=2)
    p.add_argument("--L", type=int, default=18)
    p.add_argument("--S", type=int, default=1000)
    p.add_argument("--uniform-prior", action="store_true")
    p.add_argument("--prior-out", help="write the prior table to its own file")
    common(p)
    p.set_defaults(func=cmd_freelunch)

    def classify_flags(p):
        p.add_argument("--problem", help="problem file (default: built-in first-bit problem)")
        p.add_argument("--k", type=int, default=4, help="width of the built-in problem")
        p.add_argument("--mask", help="mask file (instead of generated masks)")
        p.add_argument("--theta", type=float, default=0.5)
        p.add_argument("--seeds", type=int, default=10, help="number of Bernoulli masks")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--prefix-m", type=int, help="prefix mask ones (default round(theta*n))")
        p.add_argument("--estimator", default="kt:r=2")
        p.add_argument("--strategy", default="exhaustive")
        p.add_argument("--algorithms", default=",".join(ALL_ALGORITHMS))
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--timing", action="store_true",
                       help="emit measured runtimes (breaks byte-identical reruns)")
        common(p)

    p = sub.add_parser("classify", help="run the classifier and baselines over masks")
    classify_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="classify across a theta grid")
    classify_flags(p)
    p.add_argument("--thetas", default="0.1,0.25,0.5")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("complexity", help="dump estimator values for a string")
    p.add_argument("--string", required=True)
    p.add_argument("--side", default="")
    p.add_argument("--estimator", action="append", default=None,
                   help="repeatable; e.g. kt:r=2 or enum:L=18,S=1000")
    common(p)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("enumerate", help="dump the M/Mn table for all short strings")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--side", default="")
    p.add_argument("--L", type=int, default=18)
    p.add_argument("--S", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bounds", help="entropy-inequality grid and loss-bound curves")
    p.add_argument("--theta", type=float, default=0.25)
    p.add_argument("--km-f", type=float, default=100.0)
    p.add_argument("--km-x", type=float, default=0.0)
    p.add_argument("--n-list", default="32,64,128,256,512,1024,2048,4096,8192,16384")
    p.add_argument("--profile", choices=("zeros", "illustrative"), default="zeros")
    p.add_argument("--grid-output", help="entropy grid CSV path (default stdout)")
    p.add_argument("--plot-data", help="plain numeric n/bound2/bound3 file")
    common(p)
    p.set_defaults(func=cmd_bounds)

    return parser


def _apply_config(parser: argparse.ArgumentParser, config: dict[str, str]) -> None:
    """Install config values as typed subparser defaults; flags still win."""
    subparsers = parser._subparsers._group_actions[0].choices.values()
    known = set()
    for sp in subparsers:
        defaults = {}
        for action in sp._actions:
            known.add(action.dest)
            if action.dest not in config:
                continue
            raw = config[action.dest]
            if isinstance(action, argparse._StoreTrueAction):
                defaults[action.dest] = raw.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                defaults[action.dest] = action.type(raw)
            else:
                defaults[action.dest] = raw
        sp.set_defaults(**defaults)
    bad = set(config) - known
    if bad:
        raise ValueError(f"unknown config keys {sorted(bad)}")


def main(argv=None) -> int:
    parser = _build_parser()
    args, _ = parser.parse_known_args(argv)
    if args.config:
        try:
            _apply_config(parser, _load_config(args.config))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    args = parser.parse_args(argv)
    if getattr(args, "estimator", None) is None and args.command == "complexity":
        args.estimator = ["kt:r=2"]
    try:
        return args.func(args)
    except MincompError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
