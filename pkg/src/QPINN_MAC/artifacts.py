""" CSV and text artifacts. Numbers are written as shortest round-trip decimals so reruns are byte-identical """
from __future__ import annotations
from dataclasses import dataclass
import csv
import io
import logging
import os
import numpy as np
from .hybrid import HybridModel, predict
from .pinn.problems import ODEProblem
from .pinn.trainer import TrainTrace

logger = logging.getLogger(__name__)
logger.level = logging.INFO

TRACE_HEADER = ("epoch", "loss_total", "loss_ic", "loss_ode", "loss_sol", "grad_norm_classical", "grad_norm_quantum")


def fmt(value) -> str:
    return repr(float(value))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def trace_csv(trace: TrainTrace) -> str:
    return _csv(TRACE_HEADER, ((
        r.epoch,
        fmt(r.loss.total),
        fmt(r.loss.ic),
        fmt(r.loss.ode),
        fmt(r.loss.sol),
        fmt(r.grad_norm_classical),
        fmt(r.grad_norm_quantum)) for r in trace.rows))


@dataclass(frozen=True)
class Solution:
    t: np.ndarray
    y_mac: np.ndarray
    """ K x M """
    y_ref: np.ndarray | None = None
    extrapolated: np.ndarray | None = None
    """ outside the training domain, None when the domain is unknown """

    @property
    def abs_err(self) -> np.ndarray | None:
        return None if self.y_ref is None else np.abs(self.y_mac - self.y_ref)

    def max_abs_error(self) -> float | None:
        return None if self.y_ref is None else float(np.max(self.abs_err))

    def l2_error(self) -> float | None:
        """ discrete L^2 over the grid span """
        if self.y_ref is None:
            return None
        span = float(self.t[-1] - self.t[0]) if len(self.t) > 1 else 1.0
        return float(np.sqrt(np.mean(np.sum(self.abs_err ** 2, axis=1)) * span))

    def header(self) -> tuple[str, ...]:
        dim = self.y_mac.shape[1]
        ret = ["t"] + [F"y_mac_{j}" for j in range(1, dim + 1)]
        if self.y_ref is not None:
            ret += [F"y_ref_{j}" for j in range(1, dim + 1)] + [F"abs_err_{j}" for j in range(1, dim + 1)]
        if self.has_extrapolation:
            ret.append("extrapolated")
        return tuple(ret)

    @property
    def has_extrapolation(self) -> bool:
        return self.extrapolated is not None and bool(np.any(self.extrapolated))

    def to_csv(self) -> str:
        rows = list()
        for k, t in enumerate(self.t):
            row = [fmt(t)] + [fmt(v) for v in self.y_mac[k]]
            if self.y_ref is not None:
                row += [fmt(v) for v in self.y_ref[k]] + [fmt(v) for v in self.abs_err[k]]
            if self.has_extrapolation:
                row.append(int(self.extrapolated[k]))
            rows.append(row)
        return _csv(self.header(), rows)


def solve(model: HybridModel, grid: np.ndarray, problem: ODEProblem = None) -> Solution:
    """ y_MAC on the grid with fixed parameters """
    grid = np.atleast_1d(np.asarray(grid, dtype=np.float64))
    y_mac = predict(model, grid)
    if problem is None:
        return Solution(grid, y_mac)
    extrapolated = ~problem.in_domain(grid)
    if np.any(extrapolated):
        logger.warning(F"{int(np.sum(extrapolated))} grid points outside [{problem.t0}, {problem.t_end}]")
    y_ref = None if problem.analytic_solution is None else problem.analytic_solution(grid)
    return Solution(grid, y_mac, y_ref, extrapolated)


def write_text(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(F"write {path}")
    return path
