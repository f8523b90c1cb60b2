"""Command-line interface: ``generate``, ``design``, ``benchmark``, ``report``.

Exit codes: 0 success (or converged), 1 usage error, 2 numerical failure,
3 I/O failure.  Any subcommand accepts ``--config FILE`` holding
``key = value`` lines named after the long flags; flags given on the
command line win over the file.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .baselines import STRATEGIES, StrategySpec
from .datasets import (
    DEFAULT_N,
    MANIFOLDS,
    ManifoldDataset,
    generate,
    load_images,
    rotating_pattern_images,
)
from .design import (
    STEP_RULES,
    ContinuousDesign,
    DesignState,
    odoem_continuous,
    odoem_discrete,
    regularizer,
    determinant_identity_report,
)
from .errors import AlreadyOptimal, AngleOutOfRange, NotPerfectSquare, ParseError
from .harness import NEG_LOG_FRACTION, ExperimentConfig, build_pool, compare, feature_map
from .kernels import RBF_CONVENTIONS, KernelSpec

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _lambda_i(text):
    if text == NEG_LOG_FRACTION:
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or {NEG_LOG_FRACTION!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("lambda_i must be nonnegative")
    return value


def _seeds(text):
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("seeds look like '1..10' or '1,2,5'") from None


def _strategies(text):
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in names if s not in STRATEGIES]
    if bad or not names:
        raise argparse.ArgumentTypeError(
            f"unknown strategy {', '.join(bad) or '(none)'}; valid names: {', '.join(STRATEGIES)}")
    return names


def _add_model_flags(p):
    p.add_argument("--kernel", choices=("rbf", "linear"), default="rbf")
    p.add_argument("--range", type=float, default=0.01, help="RBF range parameter")
    p.add_argument("--rbf-convention", choices=RBF_CONVENTIONS, default="lengthscale")
    p.add_argument("--lambda-a", type=float, default=0.01)
    p.add_argument("--knn-k", type=int, default=7)
    p.add_argument("--graph-weighting", choices=("binary", "heat"), default="binary")
    p.add_argument("--features", choices=("auto", "explicit", "empirical-kernel"), default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="manifold-doe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic dataset CSV")
    g.add_argument("--config")
    g.add_argument("--kind", choices=MANIFOLDS + ("rotating-pattern",), default="torus")
    g.add_argument("--n", type=int, help="points (images for rotating-pattern)")
    g.add_argument("--noise-var", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sampling", choices=("grid", "random"), default="grid")
    g.add_argument("-o", "--output", required=True)

    d = sub.add_parser("design", help="compute an optimal design on a dataset")
    d.add_argument("--config")
    d.add_argument("-i", "--input", required=True)
    d.add_argument("--mode", choices=("continuous", "discrete"), default="continuous")
    d.add_argument("--budget", type=int, default=10)
    d.add_argument("--tol", type=float, default=1e-6)
    d.add_argument("--max-iter", type=int, default=5000)
    d.add_argument("--step-rule", choices=STEP_RULES, default="paper-bound")
    d.add_argument("--init", default="uniform", help="uniform, empty, or comma-separated indices")
    d.add_argument("--away-steps", action=argparse.BooleanOptionalAction, default=True)
    d.add_argument("--lambda-i", type=float, default=1.0)
    _add_model_flags(d)
    d.add_argument("-o", "--output")

    b = sub.add_parser("benchmark", help="compare labeling strategies")
    b.add_argument("--config")
    b.add_argument("-i", "--input", required=True)
    b.add_argument("--strategies", "--strategy", type=_strategies, default=["odoem", "classical-d", "random"])
    b.add_argument("--budget", type=int, default=100)
    b.add_argument("--seeds", type=_seeds, default=[0])
    b.add_argument("--lambda-i", type=_lambda_i, default=NEG_LOG_FRACTION)
    _add_model_flags(b)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--outdir", default="benchmark-out")

    r = sub.add_parser("report", help="summarize benchmark output or check the update formula")
    r.add_argument("--config")
    r.add_argument("-i", "--input", help="benchmark output directory")
    r.add_argument("--determinant-identity", action="store_true")
    r.add_argument("--trials", type=int, default=100)
    r.add_argument("--seed", type=int, default=0)
    parser.commands = {"generate": g, "design": d, "benchmark": b, "report": r}
    return parser


def read_config(path) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            out[key.strip().lstrip("-").replace("-", "_")] = val.strip()
    return out


def parse_args(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    command = next((a for a in argv if a in parser.commands), None)
    if known.config and command:
        # file values become subcommand defaults, so explicit flags still win
        subparser = parser.commands[command]
        actions = {a.dest: a for a in subparser._actions}
        defaults = {}
        for key, val in read_config(known.config).items():
            if key not in actions or key in ("config", "help"):
                raise UsageError(f"{known.config}: unknown key {key!r} for '{command}'")
            if isinstance(actions[key], (argparse._StoreTrueAction, argparse.BooleanOptionalAction)):
                defaults[key] = val.lower() in ("1", "true", "yes", "on")
            else:
                defaults[key] = val
            if actions[key].required:
                actions[key].required = False
        subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _header(args) -> dict:
    return {k: (",".join(map(str, v)) if isinstance(v, list) else v) for k, v in sorted(vars(args).items())}


def load_dataset(path):
    """Read a manifold CSV or an image CSV, detected from the header."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip() and not line.startswith("#"):
                first = line.split(",")[0].strip()
                break
        else:
            raise ParseError(f"{path}: empty file")
    if first == "x1":
        return ManifoldDataset.from_csv(path)
    return load_images(path)


def _kernel(args) -> KernelSpec:
    return KernelSpec(args.kernel, args.range, args.rbf_convention)


def cmd_generate(args) -> int:
    if args.kind == "rotating-pattern":
        data = rotating_pattern_images(args.n or 72, seed=args.seed)
    else:
        data = generate(args.kind, args.n or DEFAULT_N[args.kind], args.noise_var, args.seed, args.sampling)
    data.to_csv(args.output, comments=_header(args))
    print(f"wrote {data.n} rows to {args.output}")
    return EXIT_OK


def _write_design(path, state, p, comments):
    lines = [f"# {k} = {v}" for k, v in comments.items()]
    lines += [f"p {p}", f"logdet {float(state.logdet)!r}", f"gap {float(state.gap)!r}", f"iterations {state.iteration}"]
    lines += [f"{int(i)} {float(w)!r}" for i, w in zip(state.design.support, state.design.weights)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_design(path) -> dict:
    """Parse a design file written by ``design`` into header values and records."""
    out = {"support": [], "weights": []}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, val = line.split()
        if key in ("p", "iterations"):
            out[key] = int(val)
        elif key in ("logdet", "gap"):
            out[key] = float(val)
        else:
            out["support"].append(int(key))
            out["weights"].append(float(val))
    return out


def cmd_design(args) -> int:
    data = load_dataset(args.input)
    pool = build_pool(data, _kernel(args), args.knn_k, args.graph_weighting)
    fm = feature_map(pool, args.features)
    c = regularizer(fm, pool.laplacian, args.lambda_a, args.lambda_i)
    if args.mode == "continuous":
        if args.init in ("uniform", "empty"):
            init = args.init
        else:
            init = [int(s) for s in args.init.split(",")]
        state = odoem_continuous(fm, c, tol=args.tol, max_iter=args.max_iter, step_rule=args.step_rule,
                                 init=init, away_steps=args.away_steps)
        ok = state.gap <= args.tol
    else:
        picks = odoem_discrete(fm, c, args.budget)
        state = DesignState.from_design(ContinuousDesign.uniform(picks), fm, c)
        state.iteration = len(picks)
        ok = True
    print(f"p = {fm.p}")
    print(f"logdet = {state.logdet:.10g}")
    print(f"gap = {state.gap:.3e}")
    print(f"iterations = {state.iteration}")
    if args.output:
        _write_design(args.output, state, fm.p, _header(args))
    if not ok:
        print(f"not converged: gap {state.gap:.3e} > tol {args.tol:g}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_benchmark(args) -> int:
    data = load_dataset(args.input)
    kernel = _kernel(args)
    configs = []
    for seed in args.seeds:
        for kind in args.strategies:
            configs.append(ExperimentConfig(
                StrategySpec(kind, seed if kind == "random" else None), kernel, args.lambda_a, args.lambda_i,
                args.budget, args.knn_k, args.graph_weighting, seed, args.features))
    pool = build_pool(data, kernel, args.knn_k, args.graph_weighting)
    table = compare(configs, data, pool, jobs=args.jobs)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    header = _header(args)
    for curve in table.curves:
        kind, seed = curve.label.split("@")
        curve.to_csv(out / f"curve_{kind}_seed{seed}.csv")
    table.to_csv(out / "comparison.csv", comments=header)
    table.summary_to_csv(out / "summary.csv", comments=header)
    for kind, mean in table.mean_curves().items():
        print(f"{kind:16s} mean final MSE {mean[-1]:.5g}  mean area {mean.sum():.5g}")
    print(f"wrote {len(table.curves)} curves to {out}")
    return EXIT_OK


def summarize(outdir) -> dict:
    """Per-strategy averages and ODOEM head-to-head counts from ``summary.csv``."""
    rows = []
    with open(Path(outdir) / "summary.csv", encoding="utf-8", newline="") as fh:
        body = [line for line in fh if not line.startswith("#")]
    for row in csv.DictReader(body):
        kind, seed = row["label"].split("@")
        rows.append((kind, seed, float(row["area"]), float(row["final_mse"])))
    kinds = sorted({r[0] for r in rows}, key=lambda k: STRATEGIES.index(k) if k in STRATEGIES else 99)
    result = {}
    for kind in kinds:
        mine = {r[1]: r for r in rows if r[0] == kind}
        entry = {
            "runs": len(mine),
            "mean_area": float(np.mean([r[2] for r in mine.values()])),
            "mean_final_mse": float(np.mean([r[3] for r in mine.values()])),
        }
        if kind != "odoem" and "odoem" in kinds:
            ours = {r[1]: r for r in rows if r[0] == "odoem"}
            shared = sorted(set(ours) & set(mine))
            entry["odoem_wins_final"] = sum(ours[s][3] < mine[s][3] for s in shared)
            entry["odoem_wins_area"] = sum(ours[s][2] < mine[s][2] for s in shared)
            entry["paired_seeds"] = len(shared)
        result[kind] = entry
    return result


def cmd_report(args) -> int:
    if not args.input and not args.determinant_identity:
        raise UsageError("report needs --input DIR and/or --determinant-identity")
    if args.input:
        for kind, entry in summarize(args.input).items():
            line = f"{kind:16s} runs {entry['runs']:3d}  mean area {entry['mean_area']:.5g}  " \
                   f"mean final MSE {entry['mean_final_mse']:.5g}"
            if "paired_seeds" in entry:
                line += f"  odoem better (final/area): {entry['odoem_wins_final']}/{entry['odoem_wins_area']}" \
                        f" of {entry['paired_seeds']}"
            print(line)
    if args.determinant_identity:
        rep = determinant_identity_report(args.trials, args.seed)
        print(f"determinant update formula over {rep['trials']} random steps:")
        print(f"  with regularizer term: max rel. discrepancy {rep['max_rel_discrepancy']:.3e}, "
              f"median {rep['median_rel_discrepancy']:.3e}")
        print(f"  rank-one only:         max rel. discrepancy {rep['max_rel_discrepancy_rank_one']:.3e}")
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "design": cmd_design, "benchmark": cmd_benchmark, "report": cmd_report}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except UsageError as exc:
        print(f"manifold-doe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"manifold-doe: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return COMMANDS[args.command](args)
    except (OSError, ParseError, AngleOutOfRange) as exc:
        print(f"manifold-doe: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (np.linalg.LinAlgError, AlreadyOptimal) as exc:
        print(f"manifold-doe: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, NotPerfectSquare, ValueError) as exc:
        print(f"manifold-doe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
