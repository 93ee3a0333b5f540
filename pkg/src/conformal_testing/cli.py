"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 numerical or assertion failure.
Progress and diagnostics go to stderr; results go to --out or stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product

from .bk import ChangepointAlternative
from .benchmarks import (
    FinalValueFunction,
    batch_benchmark,
    lower_benchmark,
    naturalize_finite_horizon,
    upper_benchmark,
)
from .compression import MODEL_NAMES, conformal_p_sequence
from .core import BinarySequence, RandomizationStream, RealSequence
from .harness import (
    MODES,
    ExperimentConfig,
    records_from_csv,
    records_to_csv,
    run_experiment,
    summarize,
    summary_to_json,
)
from . import verify as verify_mod


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract wants 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _write_out(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _alt_from(args, cfg_file: dict) -> ChangepointAlternative:
    def pick(flag, key, default):
        v = getattr(args, flag)
        if v is not None:
            return v
        return cfg_file.get(key, default)

    return ChangepointAlternative(
        n0=int(pick("n0", "n0", 10)),
        n1=int(pick("n1", "n1", 10)),
        pi0=float(pick("pi0", "pi0", 0.1)),
        pi1=float(pick("pi1", "pi1", 0.9)),
    )


def _cmd_simulate(args) -> int:
    cfg_file = {}
    if args.config:
        with open(args.config) as fh:
            cfg_file = json.load(fh)

    def pick(flag, key, default):
        v = getattr(args, flag)
        if v is not None:
            return v
        return cfg_file.get(key, default)

    cfg = ExperimentConfig(
        alt=_alt_from(args, cfg_file),
        replications=int(pick("reps", "reps", 1000)),
        inner_bk=int(pick("inner_bk", "inner_bk", 1000)),
        seed=int(pick("seed", "seed", 42)),
        mode=pick("mode", "mode", "random-datasets"),
        null_theta=float(pick("theta", "theta", 0.5)),
    )
    print(
        f"simulate: mode={cfg.mode} reps={cfg.replications} inner_bk={cfg.inner_bk} "
        f"seed={cfg.seed}",
        file=sys.stderr,
    )
    records = run_experiment(cfg)
    _write_out(records_to_csv(records), args.out)
    return 0


def _cmd_summary(args) -> int:
    with open(args.csv) as fh:
        records = records_from_csv(fh.read())
    stats = summarize(records)
    _write_out(summary_to_json(stats) + "\n", args.out)
    return 0


def _cmd_benchmarks(args) -> int:
    alt = _alt_from(args, {})
    data = BinarySequence.from_string(args.dataset)
    n_pre = min(len(data), alt.n0)
    k0 = sum(data.values[:n_pre])
    k1 = data.ones - k0
    doc = {
        "K": data.ones,
        "k0": k0,
        "k1": k1,
        "lb": lower_benchmark(data, alt),
        "ub": upper_benchmark(data, alt),
    }
    if len(data) == alt.horizon:
        doc["batch"] = batch_benchmark(data.ones, k1, alt)
    _write_out(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_pvalues(args) -> int:
    stream = RandomizationStream(args.seed, 0)
    if args.model == "binary-exchangeability":
        data = BinarySequence.from_string(args.sequence)
    else:
        data = RealSequence(tuple(float(x) for x in args.sequence.split(",")))
    ps = conformal_p_sequence(data, stream, args.model)
    lines = ["n,p"] + [f"{i + 1},{p!r}" for i, p in enumerate(ps)]
    _write_out("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_naturalize(args) -> int:
    with open(args.finals) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != "dataset,value":
        print("error: finals CSV must have header 'dataset,value'", file=sys.stderr)
        return 1
    table = {}
    for ln in lines[1:]:
        key, val = ln.split(",")
        table[tuple(int(c) for c in key)] = float(val)
    if not table:
        print("error: empty finals table", file=sys.stderr)
        return 1
    N = len(next(iter(table)))
    finals = FinalValueFunction(N, table)
    tree = naturalize_finite_horizon(finals, args.theta, N)
    out = ["prefix,value"]
    for n in range(N + 1):
        for prefix in product((0, 1), repeat=n):
            out.append(f"{''.join(map(str, prefix))},{tree[prefix]!r}")
    _write_out("\n".join(out) + "\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    ok = verify_mod.run_all(reps=args.reps, seed=args.seed)
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conformal-testing")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the changepoint experiment")
    sim.add_argument("--mode", choices=MODES, default=None)
    sim.add_argument("--reps", type=int, default=None)
    sim.add_argument("--inner-bk", dest="inner_bk", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--n0", type=int, default=None)
    sim.add_argument("--n1", type=int, default=None)
    sim.add_argument("--pi0", type=float, default=None)
    sim.add_argument("--pi1", type=float, default=None)
    sim.add_argument("--theta", type=float, default=None, help="null-calibration theta")
    sim.add_argument("--config", default=None, help="JSON config file; flags override")
    sim.add_argument("--out", default=None, help="CSV output path (default stdout)")
    sim.set_defaults(func=_cmd_simulate)

    summ = sub.add_parser("summary", help="summarize a simulate CSV as JSON")
    summ.add_argument("csv")
    summ.add_argument("--out", default=None)
    summ.set_defaults(func=_cmd_summary)

    ben = sub.add_parser("benchmarks", help="LB/UB/batch for one 0/1 dataset")
    ben.add_argument("dataset")
    ben.add_argument("--n0", type=int, default=None)
    ben.add_argument("--n1", type=int, default=None)
    ben.add_argument("--pi0", type=float, default=None)
    ben.add_argument("--pi1", type=float, default=None)
    ben.add_argument("--out", default=None)
    ben.set_defaults(func=_cmd_benchmarks)

    pv = sub.add_parser("pvalues", help="conformal p-values for one sequence")
    pv.add_argument("sequence", help="0/1 string, or comma-separated reals")
    pv.add_argument("--model", choices=MODEL_NAMES, default="binary-exchangeability")
    pv.add_argument("--seed", type=int, default=42)
    pv.add_argument("--out", default=None)
    pv.set_defaults(func=_cmd_pvalues)

    nat = sub.add_parser("naturalize", help="backward-average a finals table")
    nat.add_argument("finals", help="CSV with header dataset,value")
    nat.add_argument("--theta", type=float, required=True)
    nat.add_argument("--out", default=None)
    nat.set_defaults(func=_cmd_naturalize)

    ver = sub.add_parser("verify", help="run the calibration suites")
    ver.add_argument("--reps", type=int, default=None)
    ver.add_argument("--seed", type=int, default=42)
    ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except (ValueError, OSError) as exc:
        # Bad flags, files, or input data.
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AssertionError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
