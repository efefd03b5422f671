""" Composite physics-informed loss L = w_ic*L_IC + w_ode*L_ODE + w_sol*L_SOL evaluated on the model output y_MAC.
Loss terms accept any trajectory with evaluate(t) -> (values, time derivatives) """
from __future__ import annotations
from dataclasses import dataclass
from typing import Protocol
import logging
import numpy as np
from ..config_parser import get_value
from ..exceptions import ConfigurationError, NumericError, ShapeError
from ..hybrid import HybridModel, quantum_eval, eval_mac, grad_classical, grad_quantum
from .problems import ODEProblem, RHS, Solution

logger = logging.getLogger(__name__)
logger.level = logging.INFO

FD_STEP = float(get_value("loss", "fd_step", default=1e-6))


class Trajectory(Protocol):
    def evaluate(self, t) -> tuple[np.ndarray, np.ndarray]:
        """ values and d/dt, (K, M) for K times """


class FunctionTrajectory:
    """ adapter around y(t), derivative by central difference in t when not given """
    def __init__(self, solution: Solution, derivative: Solution = None, step: float = 1e-6):
        self.solution = solution
        self.derivative = derivative
        self.step = step

    @classmethod
    def analytic(cls, problem: ODEProblem) -> FunctionTrajectory:
        if problem.analytic_solution is None:
            raise ConfigurationError(F"{problem.name} has no analytic solution")
        return cls(problem.analytic_solution, problem.analytic_derivative)

    def evaluate(self, t) -> tuple[np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=np.float64)
        if self.derivative is not None:
            return self.solution(t), self.derivative(t)
        return self.solution(t), (self.solution(t + self.step) - self.solution(t - self.step)) / (2 * self.step)


@dataclass(frozen=True)
class LossWeights:
    w_ic: float = float(get_value("loss", "w_ic", default=1.0))
    w_ode: float = float(get_value("loss", "w_ode", default=1.0))
    w_sol: float = float(get_value("loss", "w_sol", default=1.0))

    def __post_init__(self):
        for name in ("w_ic", "w_ode", "w_sol"):
            if not getattr(self, name) >= 0.0:
                raise ConfigurationError(F"got {getattr(self, name)}, expected >= 0", F"loss.{name}")


@dataclass(frozen=True)
class LossBreakdown:
    total: float
    ic: float
    ode: float
    sol: float
    sol_skipped: bool = False
    """ no known solutions, L_SOL reported as 0 """

    @classmethod
    def combine(cls, weights: LossWeights, ic: float, ode: float, sol: float | None) -> LossBreakdown:
        skipped = sol is None
        sol = 0.0 if skipped else sol
        total = weights.w_ic * ic + weights.w_ode * ode + (0.0 if skipped else weights.w_sol * sol)
        return cls(float(total), float(ic), float(ode), float(sol), skipped)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite((self.total, self.ic, self.ode, self.sol))))

    def __str__(self):
        return F"total={self.total:.6e} ic={self.ic:.6e} ode={self.ode:.6e} sol={'skipped' if self.sol_skipped else F'{self.sol:.6e}'}"


def _rhs(rhs: RHS, t: float, y: np.ndarray) -> np.ndarray:
    ret = np.asarray(rhs(float(t), y), dtype=np.float64)
    if ret.shape != y.shape:
        raise ShapeError(F"rhs returned {ret.shape}, expected {y.shape}")
    if not np.all(np.isfinite(ret)):
        raise NumericError("right-hand side is not finite", float(t))
    return ret


def rhs_vjp(rhs: RHS, t: float, y: np.ndarray, v: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    """ (dF/dy)^T v by central differences along each axis, h = step*(1+|y|) """
    h = step * (1.0 + np.linalg.norm(y))
    ret = np.empty_like(y)
    for i in range(len(y)):
        e = np.zeros_like(y)
        e[i] = h
        ret[i] = np.dot(v, (_rhs(rhs, t, y + e) - _rhs(rhs, t, y - e)) / (2 * h))
    return ret


def _check_dim(values: np.ndarray, problem: ODEProblem):
    if values.shape[-1] != problem.dim:
        raise ShapeError(F"got model dim {values.shape[-1]}, expected {problem.dim} ({problem.name})")


def _residuals(problem: ODEProblem, values: np.ndarray, derivs: np.ndarray) -> np.ndarray:
    return np.stack([d - _rhs(problem.rhs, t, y) for t, y, d in zip(problem.collocation, values, derivs)])


def loss_ic(model: Trajectory, problem: ODEProblem) -> float:
    values, _ = model.evaluate(np.array([problem.t0]))
    _check_dim(values, problem)
    return float(np.sum((values[0] - problem.y0) ** 2))


def loss_ode(model: Trajectory, problem: ODEProblem) -> float:
    """ unnormalized sum over collocation points """
    values, derivs = model.evaluate(problem.collocation)
    _check_dim(values, problem)
    return float(np.sum(_residuals(problem, values, derivs) ** 2))


def loss_sol(model: Trajectory, problem: ODEProblem) -> float:
    if not problem.known_solutions:
        logger.debug(F"{problem.name}: no known solutions, L_SOL skipped")
        return 0.0
    ts = np.array([t for t, _ in problem.known_solutions])
    values, _ = model.evaluate(ts)
    _check_dim(values, problem)
    return float(np.sum((values - np.stack([y for _, y in problem.known_solutions])) ** 2))


def loss_breakdown(model: Trajectory, problem: ODEProblem, weights: LossWeights = LossWeights()) -> LossBreakdown:
    return LossBreakdown.combine(
        weights,
        loss_ic(model, problem),
        loss_ode(model, problem),
        loss_sol(model, problem) if problem.known_solutions else None)


def total_loss_and_grad(model: HybridModel,
                        problem: ODEProblem,
                        weights: LossWeights = LossWeights(),
                        fd_step: float = FD_STEP) -> tuple[LossBreakdown, np.ndarray, list[np.ndarray]]:
    """ loss parts with gradients over network parameters and every Theta_j. All terms are evaluated on one
    batch of times [t0, collocation..., samples...] and reduced to value/derivative adjoints """
    if model.dim != problem.dim:
        raise ShapeError(F"got model dim {model.dim}, expected {problem.dim} ({problem.name})")
    colloc = problem.collocation
    samples = problem.known_solutions or ()
    ts = np.concatenate(([problem.t0], colloc, [t for t, _ in samples]))
    quantum = quantum_eval(model, with_grad=True)
    ev = eval_mac(model, ts, quantum)
    value_adj = np.zeros_like(ev.y_mac)
    deriv_adj = np.zeros_like(ev.y_mac)
    # initial condition
    ic_diff = ev.y_mac[0] - problem.y0
    value_adj[0] += weights.w_ic * 2.0 * ic_diff
    # residual
    k_ode = slice(1, 1 + len(colloc))
    residuals = _residuals(problem, ev.y_mac[k_ode], ev.y_mac_dt[k_ode])
    deriv_adj[k_ode] += weights.w_ode * 2.0 * residuals
    if weights.w_ode != 0.0:
        for k, (t, y, r) in enumerate(zip(colloc, ev.y_mac[k_ode], residuals), start=1):
            value_adj[k] -= weights.w_ode * 2.0 * rhs_vjp(problem.rhs, t, y, r, fd_step)
    # known solutions
    sol = None
    if samples:
        sol_diff = ev.y_mac[1 + len(colloc):] - np.stack([y for _, y in samples])
        value_adj[1 + len(colloc):] += weights.w_sol * 2.0 * sol_diff
        sol = np.sum(sol_diff ** 2)
    breakdown = LossBreakdown.combine(weights, np.sum(ic_diff ** 2), np.sum(residuals ** 2), sol)
    return (
        breakdown,
        grad_classical(model, ts, value_adj, deriv_adj, quantum),
        grad_quantum(model, ts, value_adj, deriv_adj, quantum, ev))


def gradient_norms(classical: np.ndarray, quantum: list[np.ndarray]) -> tuple[float, float]:
    return float(np.linalg.norm(classical)), float(np.sqrt(sum(np.sum(g * g) for g in quantum)))
