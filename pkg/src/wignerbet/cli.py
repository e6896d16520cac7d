"""Command-line front end.

Subcommands: state | wigner | quadrature | verify | protocol. Every command is
deterministic given its configuration and seed, and writes plot-ready CSV or
JSON-lines files. Exit codes: 0 success, 1 verification failure, 2
configuration error.
"""

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .densities import (
    negative_volume,
    total_mass,
    write_density_csv_1d,
    write_density_csv_2d,
)
from .errors import WignerBetError
from .grids import make_grid
from .protocol import (
    ConstantSkeptic,
    CycleExperimenter,
    DishonestForecaster,
    FaithfulReality,
    HonestForecaster,
    ShiftedReality,
    StateResolver,
    discrepancy_statistic,
    lln_skeptic_strategy,
    run_protocol1,
    run_protocol2,
)
from .quadrature import QuadratureSpec, quadrature_distribution
from .states import state_from_spec, write_state_csv
from .verify import cross_route_report
from .wigner import marginal_x, purity, wigner

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="INI config file; flags override it")
    parser.add_argument("--seed", type=int, help="seed for any randomized step")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--x-min", dest="x_min", type=float)
    parser.add_argument("--x-max", dest="x_max", type=float)
    parser.add_argument("--n-points", dest="n_points", type=int)
    parser.add_argument("--hbar", type=float)
    parser.add_argument("--oversample", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wignerbet",
        description="Phase-space quasiprobability densities and measurement-testing protocols",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", help="build a state and dump it as CSV")
    p_state.add_argument("--state", help="fixture spec, e.g. gauss:0,0,1 or fock:2")
    _add_common(p_state)

    p_wig = sub.add_parser("wigner", help="phase-space density CSV plus summary")
    p_wig.add_argument("--state")
    _add_common(p_wig)

    p_quad = sub.add_parser("quadrature", help="outcome distribution of a*x + b*p")
    p_quad.add_argument("--state")
    p_quad.add_argument("--a", type=float)
    p_quad.add_argument("--b", type=float)
    _add_common(p_quad)

    p_ver = sub.add_parser("verify", help="cross-route agreement over a direction sweep")
    p_ver.add_argument("--states", help="semicolon-separated fixture specs")
    p_ver.add_argument("--directions", help='"auto:12" or "a,b;a,b;..."')
    _add_common(p_ver)

    p_proto = sub.add_parser("protocol", help="run a betting protocol, write transcript")
    for name in ("protocol", "rounds", "runs", "skeptic_depth"):
        p_proto.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int)
    p_proto.add_argument("--skeptic", choices=["lln", "unit"])
    p_proto.add_argument("--skeptic-f", dest="skeptic_f")
    p_proto.add_argument("--skeptic-c", dest="skeptic_c", type=float)
    p_proto.add_argument("--forecaster", help='"honest" or "dishonest:<fixture>"')
    p_proto.add_argument("--reality", help='"faithful" or "shifted:<delta>"')
    p_proto.add_argument("--states")
    p_proto.add_argument("--directions")
    _add_common(p_proto)

    return parser


def _merge_config(args: argparse.Namespace) -> ExperimentConfig:
    if getattr(args, "config", None):
        text = Path(args.config).read_text()
        cfg = ExperimentConfig.from_ini(text)
    else:
        cfg = ExperimentConfig()
    renames = {"out_dir": "out"}
    for f in fields(ExperimentConfig):
        value = getattr(args, renames.get(f.name, f.name), None)
        if value is not None:
            setattr(cfg, f.name, str(value) if f.name == "out_dir" else value)
    return cfg


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_state(cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.x_min, cfg.x_max, cfg.n_points)
    psi = state_from_spec(cfg.state, grid, cfg.hbar)
    out = _out_dir(cfg)
    path = out / "state.csv"
    write_state_csv(psi, path)
    print(f"state {cfg.state} -> {path}")
    print(f"norm {psi.norm:.6f}")
    return EXIT_OK


def cmd_wigner(cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.x_min, cfg.x_max, cfg.n_points)
    psi = state_from_spec(cfg.state, grid, cfg.hbar)
    W = wigner(psi, oversample=cfg.oversample)
    out = _out_dir(cfg)
    csv_path = out / "wigner.csv"
    write_density_csv_2d(W, csv_path)
    ix = int(np.argmin(np.abs(W.x_grid.points)))
    ip = int(np.argmin(np.abs(W.p_grid.points)))
    summary = {
        "state": cfg.state,
        "mass": total_mass(W),
        "negative_volume": negative_volume(W),
        "purity": purity(W),
        "imag_residue": W.imag_residue,
        "w_at_origin": float(W.values[ix, ip]),
    }
    summary_path = out / "wigner_summary.json"
    summary_path.write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_quadrature(cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.x_min, cfg.x_max, cfg.n_points)
    psi = state_from_spec(cfg.state, grid, cfg.hbar)
    dist = quadrature_distribution(psi, QuadratureSpec(cfg.a, cfg.b))
    out = _out_dir(cfg)
    path = out / "quadrature.csv"
    write_density_csv_1d(dist, path)
    print(f"quadrature a={cfg.a} b={cfg.b} mass {total_mass(dist):.9f} -> {path}")
    return EXIT_OK


def cmd_verify(cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.x_min, cfg.x_max, cfg.n_points)
    directions = cfg.direction_list()
    all_ok = True
    report_lines = []
    for spec in cfg.state_list():
        psi = state_from_spec(spec, grid, cfg.hbar)
        W = wigner(psi, oversample=cfg.oversample)
        for check in cross_route_report(psi, W, directions):
            status = "ok" if check.passed else "FAIL"
            line = f"{spec:24s} a={check.a:+.6f} b={check.b:+.6f} L1={check.l1:.3e} {status}"
            report_lines.append(line)
            print(line)
            all_ok = all_ok and check.passed
    out = _out_dir(cfg)
    (out / "verify_report.txt").write_text("\n".join(report_lines) + "\n")
    print("verify:", "ok" if all_ok else "FAILED")
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


def _build_players(cfg: ExperimentConfig):
    directions = cfg.direction_list()
    quads = [QuadratureSpec(a, b) for a, b in directions]
    experimenter = CycleExperimenter(cfg.state_list(), quads)

    if cfg.forecaster == "honest":
        forecaster = HonestForecaster(oversample=cfg.oversample)
    elif cfg.forecaster.startswith("dishonest:"):
        forecaster = DishonestForecaster(cfg.forecaster.split(":", 1)[1],
                                         oversample=cfg.oversample)
    else:
        raise WignerBetError(f"unknown forecaster {cfg.forecaster!r}")

    if cfg.skeptic == "lln":
        skeptic_factory = lambda: lln_skeptic_strategy(cfg.skeptic_f, cfg.skeptic_c,
                                                       cfg.skeptic_depth)
    elif cfg.skeptic == "unit":
        skeptic_factory = ConstantSkeptic
    else:
        raise WignerBetError(f"unknown skeptic {cfg.skeptic!r}")

    if cfg.reality == "faithful":
        reality = FaithfulReality()
    elif cfg.reality.startswith("shifted:"):
        reality = ShiftedReality(float(cfg.reality.split(":", 1)[1]))
    else:
        raise WignerBetError(f"unknown reality {cfg.reality!r}")

    return experimenter, forecaster, skeptic_factory, reality


def cmd_protocol(cfg: ExperimentConfig) -> int:
    grid = make_grid(cfg.x_min, cfg.x_max, cfg.n_points)
    resolver = StateResolver(grid, cfg.hbar)
    experimenter, forecaster, skeptic_factory, reality = _build_players(cfg)
    out = _out_dir(cfg)

    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.runs)
    run_fn = run_protocol1 if cfg.protocol == 1 else run_protocol2
    config_snapshot = {f: getattr(cfg, f) for f in (
        "protocol", "rounds", "runs", "seed", "skeptic", "skeptic_f", "skeptic_c",
        "skeptic_depth", "forecaster", "reality", "states", "directions",
        "x_min", "x_max", "n_points", "hbar", "oversample",
    )}

    finals = []
    transcript_path = out / "transcript.jsonl"
    with open(transcript_path, "w") as fh:
        for run_idx, seed_seq in enumerate(seeds):
            rng = np.random.default_rng(seed_seq)
            transcript = run_fn(experimenter, forecaster, skeptic_factory(), reality,
                                cfg.rounds, rng, resolver, record_arrays=False,
                                config=config_snapshot)
            for line in transcript.jsonl_lines():
                record = json.loads(line)
                record["run"] = run_idx
                fh.write(json.dumps(record, sort_keys=True) + "\n")
            finals.append(transcript.final_log_capital)
            if run_idx == 0:
                series = discrepancy_statistic(transcript, cfg.skeptic_f)
                with open(out / "discrepancy.csv", "w") as dfh:
                    dfh.write("n,running_mean\n")
                    for i, v in enumerate(series, start=1):
                        dfh.write(f"{i},{v:.17g}\n")

    summary = {
        "protocol": cfg.protocol,
        "runs": cfg.runs,
        "rounds": cfg.rounds,
        "seed": cfg.seed,
        "final_log_capital": finals,
        "discrepancy_csv": "discrepancy.csv",
        "config": config_snapshot,
    }
    (out / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(f"protocol {cfg.protocol}: {cfg.runs} run(s) of {cfg.rounds} round(s); "
          f"final log capital {finals[-1]:.6g} -> {transcript_path}")
    return EXIT_OK


COMMANDS = {
    "state": cmd_state,
    "wigner": cmd_wigner,
    "quadrature": cmd_quadrature,
    "verify": cmd_verify,
    "protocol": cmd_protocol,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge_config(args)
        return COMMANDS[args.command](cfg)
    except WignerBetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
