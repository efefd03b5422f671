""" qpinn-mac train|solve|diagnose --config <path> --out <dir> [--seed <u64>] """
from __future__ import annotations
import argparse
import json
import os
import logging
import sys
import numpy as np
from . import artifacts, snapshot
from .diagnostics import run_sweep, trainability_report, sweep_csv, summary
from .enums import Mode
from .exceptions import QPINNException, NonFiniteLoss, ConfigurationError
from .pinn.problems import get_problem, uniform_grid
from .pinn.trainer import train
from .run_config import RunConfig, load_run_config

logger = logging.getLogger(__name__)
logger.level = logging.INFO

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_DIVERGED = 3
SOLUTION_POINTS = 101


def _config_snapshot(config: RunConfig) -> str:
    return json.dumps(config.model_dump(mode="json"), indent=1, sort_keys=True) + "\n"


def _report_errors(solution: artifacts.Solution):
    if solution.y_ref is not None:
        print(F"max abs error: {solution.max_abs_error():.6e}, L2 error: {solution.l2_error():.6e}")


def cmd_train(config: RunConfig, out_dir: str) -> int:
    problem = config.build_problem()
    model = config.build_model(problem.dim, np.random.default_rng(config.seed))
    problem_info = {"name": problem.name, "overrides": config.problem.overrides()}
    artifacts.write_text(out_dir, "config.json", _config_snapshot(config))
    try:
        result = train(model, problem, config.build_weights(), config.build_train_config())
    except NonFiniteLoss as e:
        snapshot.save(os.path.join(out_dir, "model.json"), snapshot.Snapshot(e.snapshot, problem_info))
        print(F"training diverged: {e}", file=sys.stderr)
        return EXIT_DIVERGED
    artifacts.write_text(out_dir, "trace.csv", artifacts.trace_csv(result.trace))
    solution = artifacts.solve(result.model, uniform_grid(problem.t0, problem.t_end, SOLUTION_POINTS), problem)
    artifacts.write_text(out_dir, "solution.csv", solution.to_csv())
    artifacts.write_text(out_dir, "model.json", snapshot.dumps(snapshot.Snapshot(result.model, problem_info)))
    print(F"final loss: {result.trace.final.loss}")
    _report_errors(solution)
    return EXIT_OK


def cmd_solve(config: RunConfig, out_dir: str) -> int:
    s = config.solve
    loaded = snapshot.load(s.snapshot)
    problem = None
    if name := loaded.problem.get("name"):
        problem = get_problem(name, **loaded.problem.get("overrides", dict()))
    start = s.grid_start if s.grid_start is not None else (problem.t0 if problem else None)
    stop = s.grid_stop if s.grid_stop is not None else (problem.t_end if problem else None)
    if start is None or stop is None:
        raise ConfigurationError("snapshot has no problem domain, set grid_start and grid_stop", "solve.grid_start")
    grid = np.array([start]) if s.grid_num == 1 else np.linspace(start, stop, s.grid_num)
    solution = artifacts.solve(loaded.model, grid, problem)
    artifacts.write_text(out_dir, "solution.csv", solution.to_csv())
    _report_errors(solution)
    return EXIT_OK


def cmd_diagnose(config: RunConfig, out_dir: str) -> int:
    sweep = config.build_sweep_config()
    report = run_sweep(sweep)
    verdict = trainability_report(report, sweep.eps_grad)
    artifacts.write_text(out_dir, "config.json", _config_snapshot(config))
    artifacts.write_text(out_dir, "sweep.csv", sweep_csv(report))
    artifacts.write_text(out_dir, "summary.toml", summary(report, verdict))
    print(F"slope vs N: {report.primary_slope_vs_n}, envelope c: {verdict.envelope_c:.6e}, trainable cells: {len(verdict.trainable_cells)}/{len(report.cells)}")
    return EXIT_OK


COMMANDS = {
    Mode.TRAIN: cmd_train,
    Mode.SOLVE: cmd_solve,
    Mode.DIAGNOSE: cmd_diagnose,
}


def get_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpinn-mac", description="hybrid quantum-classical PINN solver for first-order ODE systems")
    parser.add_argument("mode", choices=Mode.get_values())
    parser.add_argument("--config", required=True, help="run config, TOML or JSON")
    parser.add_argument("--out", default=None, help="output directory, overrides config out")
    parser.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed override")
    return parser


def main(argv: list[str] = None) -> int:
    args = get_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_run_config(args.config).with_seed(args.seed)
        if config.mode != (mode := Mode.from_str(args.mode)):
            raise ConfigurationError(F"config is for {config.mode.value}, command is {mode.value}", "mode")
        if (out_dir := args.out or config.out) is None:
            raise ConfigurationError("no output directory, use --out", "out")
        return COMMANDS[config.mode](config, out_dir)
    except QPINNException as e:
        print(F"error [{e.error.value}]: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
