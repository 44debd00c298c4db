"""Command-line interface.

Subcommands: validate, analyze, table1, ttest, wavefunction, simulate, serve.
Exit status: 0 on success, 1 on usage errors (synopsis goes to stderr),
2 on data errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import collector as collector_module
from .errors import QontextError
from .estimation import PoolingMode
from .report import build_report, export_analysis, render_table1, render_text
from .simulate import RNG_ID, SimulationMode, SplitMix64, load_simulation_specs, simulate
from .trials import Dataset, load_trials, serialize_trials, validate_dataset

USAGE_ERROR = 1
DATA_ERROR = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="qontext", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", help="check trial files, print findings")
    validate.add_argument("paths", nargs="+")

    def add_common(p: argparse.ArgumentParser, formats: bool = True) -> None:
        p.add_argument("dataset")
        p.add_argument(
            "--pooling",
            choices=[m.value for m in PoolingMode],
            default=PoolingMode.PAPER.value,
            help="paper mirrors the published 4-decimal arithmetic (default); "
            "strict keeps full precision and excludes undefined conditionals",
        )
        if formats:
            p.add_argument("--format", choices=["text", "json", "csv"], default="text")

    analyze = sub.add_parser("analyze", help="full analysis of a trial file")
    add_common(analyze)
    sections = analyze.add_mutually_exclusive_group()
    sections.add_argument("--per-experiment", action="store_true")
    sections.add_argument("--pooled", action="store_true")

    table1 = sub.add_parser("table1", help="render the published-style table")
    add_common(table1)

    ttest = sub.add_parser("ttest", help="measured vs classical t-test")
    add_common(ttest, formats=False)

    wavefunction = sub.add_parser("wavefunction", help="wave-function reconstruction")
    add_common(wavefunction, formats=False)
    wavefunction.add_argument(
        "--phases",
        default="solved",
        help='"solved" (default) or explicit "paper:<theta+,theta->" '
        "(the prefix is optional)",
    )

    simulate_cmd = sub.add_parser("simulate", help="generate synthetic trial data")
    simulate_cmd.add_argument("--spec", required=True)
    simulate_cmd.add_argument("--seed", type=int, default=0)
    simulate_cmd.add_argument("--out", required=True)

    serve = sub.add_parser("serve", help="run the session collector")
    serve.add_argument("--addr", default="127.0.0.1:8077")
    serve.add_argument("--store", required=True)
    serve.add_argument("--experiment-config", default=None)
    serve.add_argument("--allow-origin", default=None)

    return parser


def _load_dataset(path: str) -> Dataset:
    result = load_trials(path)
    if result.diagnostics:
        for diagnostic in result.diagnostics:
            print(f"{path}:{diagnostic}", file=sys.stderr)
        raise QontextError(f"{path}: {len(result.diagnostics)} malformed lines")
    return result.dataset


def _usage_error(message: str) -> _UsageError:
    print(f"qontext: error: {message}", file=sys.stderr)
    return _UsageError(message)


def _parse_phases(raw: str) -> tuple[float, float] | None:
    if raw == "solved":
        return None
    text = raw.split(":", 1)[1] if ":" in raw else raw
    parts = text.split(",")
    if len(parts) != 2:
        raise _usage_error(
            f"--phases expects 'solved' or two comma-separated radians, got {raw!r}"
        )
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise _usage_error(f"--phases values must be numbers, got {raw!r}") from None


def _cmd_validate(args: argparse.Namespace) -> int:
    failed = False
    for path in args.paths:
        result = load_trials(path)
        for diagnostic in result.diagnostics:
            print(f"{path}:{diagnostic}", file=sys.stderr)
            failed = True
        report = validate_dataset(result.dataset)
        for finding in report.findings:
            print(f"{path}: {finding}", file=sys.stderr)
            failed = True
        if result.ok and report.ok:
            print(f"{path}: OK ({len(result.dataset)} records)")
    return DATA_ERROR if failed else 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    report = build_report(_load_dataset(args.dataset), PoolingMode(args.pooling))
    if args.format == "text":
        show_all = not (args.per_experiment or args.pooled)
        print(
            render_text(
                report,
                per_experiment=show_all or args.per_experiment,
                pooled=show_all or args.pooled,
            ),
            end="",
        )
    else:
        print(export_analysis(report, args.format), end="")
    return 0


def _cmd_table1(args: argparse.Namespace) -> int:
    report = build_report(_load_dataset(args.dataset), PoolingMode(args.pooling))
    print(render_table1(report, args.format), end="")
    return 0


def _cmd_ttest(args: argparse.Namespace) -> int:
    report = build_report(_load_dataset(args.dataset), PoolingMode(args.pooling))
    result = report.ttest
    if result is None:
        raise QontextError("t-test needs at least two experiments")
    print(
        f"t = {result.t:.4f}   df = {result.df:.0f}   "
        f"pooled sd = {result.pooled_sd:.4f}   two-tailed p = {result.p_two_tailed:.4f}"
    )
    recomputed = report.ttest_recomputed
    if recomputed is not None and abs(recomputed.t - result.t) > 1e-12:
        print(
            f"recomputed from full-precision columns: t = {recomputed.t:.4f}   "
            f"p = {recomputed.p_two_tailed:.4f}"
        )
    return 0


def _cmd_wavefunction(args: argparse.Namespace) -> int:
    phases = _parse_phases(args.phases)
    report = build_report(
        _load_dataset(args.dataset), PoolingMode(args.pooling), phases=phases
    )
    if report.wavefunction is None:
        raise QontextError(report.wavefunction_error or "wave function unavailable")
    print(render_text(report, per_experiment=False, pooled=True), end="")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    specs = load_simulation_specs(args.spec)
    rng = SplitMix64(args.seed)
    records = []
    bernoulli = False
    for spec in specs:
        dataset = simulate(spec, args.seed, rng=rng)
        bernoulli = bernoulli or spec.mode is SimulationMode.BERNOULLI
        records.extend(dataset.records)
    out_path = Path(args.out)
    out_path.write_text(serialize_trials(Dataset(records=records)), encoding="utf-8")
    meta = {
        "schema": "qontext/simulation-meta/v1",
        "mode": "bernoulli" if bernoulli else "exact_counts",
        "experiments": [spec.experiment_id for spec in specs],
        "records": len(records),
    }
    if bernoulli:
        meta["rng"] = RNG_ID
        meta["seed"] = args.seed
    meta_path = out_path.with_suffix(".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(records)} records to {out_path} (metadata: {meta_path})")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    collector_module.serve(
        addr=args.addr,
        store_dir=args.store,
        config_path=args.experiment_config,
        allow_origin=args.allow_origin,
    )
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "analyze": _cmd_analyze,
    "table1": _cmd_table1,
    "ttest": _cmd_ttest,
    "wavefunction": _cmd_wavefunction,
    "simulate": _cmd_simulate,
    "serve": _cmd_serve,
}


def run_cli(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError:
        return USAGE_ERROR
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return 0 if code in (0, None) else USAGE_ERROR
    except QontextError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
