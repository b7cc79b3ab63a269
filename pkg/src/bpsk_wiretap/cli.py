"""Command-line interface.

Subcommands: ``capacity``, ``sweep``, ``simulate``, ``verify``, ``budget``.
Exit codes: 0 success, 1 check failure, 2 usage or configuration error,
3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import capacity, codesim, scenario, verify
from .errors import PropertyViolation, ResourceError, WiretapError

log = logging.getLogger("bpsk_wiretap")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load_config(args) -> scenario.ScenarioConfig:
    cfg = scenario.ScenarioConfig.from_file(args.config) if args.config else scenario.ScenarioConfig()
    return cfg


def cmd_capacity(args) -> int:
    cfg = _load_config(args)
    energy = args.energy if args.energy is not None else cfg.energy_E
    params = capacity.ChannelParamSet(tuple(args.tau), tuple(args.eta), energy)
    report = capacity.capacity_report(params)
    payload = {"tau_set": list(params.tau_set), "eta_set": list(params.eta_set), **asdict(report)}
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    tau_range = None
    if args.tau_min is not None or args.tau_max is not None:
        lo = args.tau_min if args.tau_min is not None else cfg.tau_range[0]
        hi = args.tau_max if args.tau_max is not None else cfg.tau_range[1]
        tau_range = (lo, hi)
    cfg = cfg.replace(energy_E=args.energy, tau_range=tau_range, grid_points=args.grid_points,
                      worst_case_eta_fraction=args.eta_fraction, eta_mode=args.eta_mode)
    rows = scenario.run_sweep(cfg)
    text = scenario.rows_to_csv(rows) if args.format == "csv" else scenario.rows_to_json(rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.experiment == "covering-trend":
        rows = codesim.covering_trend(args.M, args.n, args.energy, args.eta, args.L_list,
                                      range(args.seed, args.seed + args.seeds))
        payload = {"experiment": args.experiment, "M": args.M, "n": args.n, "E": args.energy,
                   "eta": args.eta, "rows": rows}
    else:
        cb = codesim.sample_codebook(args.M, args.L, args.n, args.energy, args.seed, args.prune_delta)
        if args.experiment == "leakage-monotonicity":
            etas = args.eta_list or [k / 10 for k in range(11)]
            payload = {"experiment": args.experiment, "seed": args.seed,
                       "rows": codesim.leakage_monotonicity(cb, sorted(etas))}
        else:
            payload = {"experiment": args.experiment,
                       **codesim.evaluate_code(cb, args.tau, args.eta).to_dict()}
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify.run_suite(args.suite)
    _emit(json.dumps(report, indent=2), args.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_budget(args) -> int:
    cfg = _load_config(args)
    cfg = cfg.replace(symbol_rate=args.symbol_rate, coherence_window=args.coherence_window,
                      feedback_fraction=args.feedback_fraction)
    payload = {"symbols": scenario.block_budget(cfg), "symbol_rate": cfg.symbol_rate,
               "coherence_window": cfg.coherence_window, "feedback_fraction": cfg.feedback_fraction}
    _emit(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpsk-wiretap",
                                     description="Private capacities of the bosonic compound wiretap channel with BPSK.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario config (unknown keys are rejected)")
    common.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("capacity", parents=[common], help="QQ/CQ/CC capacities at one parameter set")
    p.add_argument("--tau", type=float, nargs="+", required=True, help="legitimate-link amplitude transmissivities")
    p.add_argument("--eta", type=float, nargs="+", required=True, help="eavesdropper amplitude transmissivities")
    p.add_argument("--energy", type=float, help="input mean photon number (default: config energy_E)")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("sweep", parents=[common], help="capacity sweep over received photon number")
    p.add_argument("--energy", type=float)
    p.add_argument("--tau-min", type=float)
    p.add_argument("--tau-max", type=float)
    p.add_argument("--grid-points", type=int)
    p.add_argument("--eta-fraction", type=float, help="worst-case eta^2 / tau^2")
    p.add_argument("--eta-mode", choices=scenario.ETA_MODES)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", parents=[common], help="randomized wiretap-code experiments")
    p.add_argument("--experiment", choices=("report", "covering-trend", "leakage-monotonicity"), default="report")
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--L", type=int, default=4)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--energy", type=float, default=1.0)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=20, help="number of consecutive seeds for covering-trend")
    p.add_argument("--prune-delta", type=float)
    p.add_argument("--L-list", type=int, nargs="+", default=[2, 8, 32, 128])
    p.add_argument("--eta-list", type=float, nargs="+")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", choices=verify.SUITES + ("all",))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("budget", parents=[common], help="symbols per channel-coherence window")
    p.add_argument("--symbol-rate", type=float)
    p.add_argument("--coherence-window", type=float)
    p.add_argument("--feedback-fraction", type=float)
    p.set_defaults(func=cmd_budget)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ResourceError as exc:
        log.error("%s", exc)
        return EXIT_RESOURCE
    except PropertyViolation as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    except (WiretapError, TypeError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
