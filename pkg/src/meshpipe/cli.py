"""Command-line front end: run cases, sweep parameters, emit CSV reports."""

from __future__ import annotations

import argparse
import sys

from . import deploy, metrics
from .config import ConfigError, Settings, load_config
from .deploy import CALIBRATED, COUNTED, SWEEP_CORE_COUNTS, build_case, run_plan
from .engine import DeadlockError, OverrunError
from .mesh import AddressRangeError, InvalidCoreError


def _core_list(text: str) -> list[int]:
    try:
        cores = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad core list {text!r}") from None
    if not cores:
        raise argparse.ArgumentTypeError("empty core list")
    for n in cores:
        if n not in SWEEP_CORE_COUNTS:
            raise argparse.ArgumentTypeError(
                f"core count {n} not supported; choose from {','.join(map(str, SWEEP_CORE_COUNTS))}"
            )
    return cores


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshpipe",
        description="Cycle-approximate mesh-manycore simulator for a streaming receiver chain",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file", default=None)
    common.add_argument("--seed", type=int, default=0, help="input symbol generator seed")
    common.add_argument(
        "--cost-mode", choices=[CALIBRATED, COUNTED], default=None,
        help="override the calibration cost mode",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", parents=[common], help="run one deployment case and report it")
    p_run.add_argument("--case", type=int, choices=[1, 2, 3], required=True)
    p_run.add_argument("--block-size", type=int, default=None, help="case III pipeline block")
    p_run.add_argument("--ifft-cores", type=int, default=8, help="case III IFFT core count")
    p_run.add_argument("--out", default="case_report.csv", help="case_report CSV path")

    p_ifft = sub.add_parser("sweep-ifft", parents=[common], help="latency of the IFFT over core counts")
    p_ifft.add_argument(
        "--cores", type=_core_list, default=list(SWEEP_CORE_COUNTS),
        help="comma-separated core counts (default 1,2,4,8,16,32)",
    )
    p_ifft.add_argument("--out", default="ifft_sweep.csv")

    p_blk = sub.add_parser("sweep-blocksize", parents=[common], help="pipelined pair latency over block sizes")
    p_blk.add_argument("--divisors-of", type=int, default=256, metavar="N",
                       help="sweep every divisor of N (default 256)")
    p_blk.add_argument("--out", default="blocksize_sweep.csv")

    p_rep = sub.add_parser("report", parents=[common], help="run all three cases and emit the comparison CSV")
    p_rep.add_argument("--out", default="case_comparison.csv")
    return parser


def _settings(args) -> Settings:
    settings = load_config(args.config)
    if args.cost_mode is not None:
        from dataclasses import replace

        settings = Settings(settings.mesh, replace(settings.cal, mode=args.cost_mode))
    return settings


def _print_report(report: metrics.CaseReport) -> None:
    print(f"case {report.case}")
    for name, cycles in report.task_cycles.items():
        print(f"  {name:<12} {cycles:>8} cycles")
    print(f"  {'total':<12} {report.total_cycles:>8} cycles  ({report.latency_us:.3f} us)")
    print(f"  {'bottleneck':<12} {report.bottleneck_cycles:>8} cycles")
    print(f"  throughput {report.throughput_sps} symbols/s")
    rate = "pass" if report.meets_throughput_budget else "FAIL"
    lat = "pass" if report.meets_latency_budget else "FAIL"
    print(f"  symbol-rate budget ({metrics.SYMBOL_PERIOD_US:.0f} us): {rate}")
    print(f"  latency budget ({metrics.LATENCY_BUDGET_US:.0f} us): {lat}")


def _cmd_run(args, settings: Settings) -> int:
    plan = build_case(
        args.case, settings.cal, settings.mesh,
        block_size=args.block_size, n_cores_ifft=args.ifft_cores, seed=args.seed,
    )
    timeline = run_plan(plan, settings.mesh)
    report = metrics.build_report(plan, timeline, settings.mesh)
    _print_report(report)
    metrics.write_csv([metrics.report_row(report)], "case_report", args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_sweep_ifft(args, settings: Settings) -> int:
    symbol = deploy.kernels.random_symbol(seed=args.seed)
    rows = deploy.ifft_sweep(args.cores, settings.cal, settings.mesh, symbol)
    for n_cores, cycles in rows:
        print(f"ifft cores={n_cores:<3} latency={cycles} cycles")
    metrics.write_csv(metrics.sweep_rows(rows, "n_cores"), "ifft_sweep", args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_sweep_blocksize(args, settings: Settings) -> int:
    if args.divisors_of < 1:
        raise ConfigError(f"--divisors-of must be positive, got {args.divisors_of}")
    symbol = deploy.kernels.random_symbol(seed=args.seed)
    sizes = [d for d in _divisors(args.divisors_of) if deploy.SYMBOL_SIZE % d == 0]
    rows = deploy.blocksize_sweep(sizes, settings.cal, settings.mesh, symbol)
    for block, cycles in rows:
        print(f"block={block:<4} latency={cycles} cycles")
    metrics.write_csv(metrics.sweep_rows(rows, "block_size"), "blocksize_sweep", args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_report(args, settings: Settings) -> int:
    rows = []
    for case in (1, 2, 3):
        plan = build_case(case, settings.cal, settings.mesh, seed=args.seed)
        timeline = run_plan(plan, settings.mesh)
        report = metrics.build_report(plan, timeline, settings.mesh)
        _print_report(report)
        rows.append(metrics.report_row(report))
    metrics.write_csv(rows, "case_report", args.out)
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep-ifft": _cmd_sweep_ifft,
    "sweep-blocksize": _cmd_sweep_blocksize,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _settings(args)
        return _COMMANDS[args.command](args, settings)
    except (ConfigError, InvalidCoreError, AddressRangeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DeadlockError, OverrunError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
