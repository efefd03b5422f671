""" First-order ODE systems y' = F(t, y), y(t0) = y0 on [t0, t_end] with collocation grid and optional samples """
from __future__ import annotations
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable, Self, Sequence, TypeAlias
import inspect
import numpy as np
from ..config_parser import get_value
from ..exceptions import CatalogError, ConfigurationError


RHS: TypeAlias = Callable[[float, np.ndarray], np.ndarray]
Solution: TypeAlias = Callable[[float | np.ndarray], np.ndarray]
""" (M,) for scalar t, (K, M) for K times """

DEFAULT_POINTS = int(get_value("problem", "num_points", default=32))


def uniform_grid(t0: float, t_end: float, num_points: int) -> np.ndarray:
    """ K points including both ends, K=1 is t0 """
    if num_points < 1:
        raise ConfigurationError(F"got {num_points}, expected >= 1", "problem.num_points")
    if num_points == 1:
        return np.array([float(t0)])
    return np.linspace(t0, t_end, num_points)


@dataclass(frozen=True)
class ODEProblem:
    name: str
    dim: int
    rhs: RHS
    t0: float
    y0: np.ndarray
    t_end: float
    collocation: np.ndarray
    known_solutions: tuple[tuple[float, np.ndarray], ...] | None = None
    analytic_solution: Solution | None = None
    """ validation only """
    analytic_derivative: Solution | None = None
    parameters: dict = field(default_factory=dict)
    """ overrides the problem was built with """

    def __post_init__(self):
        object.__setattr__(self, "y0", np.atleast_1d(np.asarray(self.y0, dtype=np.float64)))
        object.__setattr__(self, "collocation", np.atleast_1d(np.asarray(self.collocation, dtype=np.float64)))
        if self.y0.shape != (self.dim, ):
            raise ConfigurationError(F"got y0 {self.y0.shape}, expected ({self.dim},)", "problem.y0")
        if not self.t0 < self.t_end:
            raise ConfigurationError(F"got t0={self.t0}, t_end={self.t_end}, expected t0 < t_end", "problem.t_end")
        if self.collocation.ndim != 1 or len(self.collocation) < 1:
            raise ConfigurationError("collocation needs at least one point", "problem.num_points")
        if np.any(self.collocation < self.t0) or np.any(self.collocation > self.t_end):
            raise ConfigurationError(F"collocation outside [{self.t0}, {self.t_end}]", "problem.collocation")
        if self.known_solutions is not None:
            object.__setattr__(self, "known_solutions", tuple((float(t), np.atleast_1d(np.asarray(y, dtype=np.float64))) for t, y in self.known_solutions))

    def with_collocation(self, points: Sequence[float]) -> Self:
        return replace(self, collocation=np.asarray(points, dtype=np.float64))

    def without_known_solutions(self) -> Self:
        return replace(self, known_solutions=None)

    def in_domain(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return (t >= self.t0) & (t <= self.t_end)

    def sample_known_solutions(self, num_points: int) -> Self:
        """ known solutions from the analytic one on a uniform grid """
        if self.analytic_solution is None:
            raise ConfigurationError(F"{self.name} has no analytic solution to sample", "problem.known_points")
        ts = uniform_grid(self.t0, self.t_end, num_points)
        return replace(self, known_solutions=tuple((float(t), self.analytic_solution(t)) for t in ts))


def _vector(f: Callable[[np.ndarray], list[np.ndarray]], t) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return np.stack(f(t), axis=-1)


def exp_decay(lam: float = 1.0, t0: float = 0.0, t_end: float = 1.0, num_points: int = DEFAULT_POINTS) -> ODEProblem:
    """ y' = -lam*y, y(t0) = 1 """
    return ODEProblem(
        name="exp_decay",
        dim=1,
        rhs=lambda t, y: -lam * y,
        t0=t0,
        y0=np.array([1.0]),
        t_end=t_end,
        collocation=uniform_grid(t0, t_end, num_points),
        analytic_solution=partial(_vector, lambda t: [np.exp(-lam * (t - t0))]),
        analytic_derivative=partial(_vector, lambda t: [-lam * np.exp(-lam * (t - t0))]),
        parameters=dict(lam=lam))


def logistic(t0: float = 0.0, t_end: float = 1.0, num_points: int = DEFAULT_POINTS) -> ODEProblem:
    """ y' = y(1 - y), y(t0) = 0.5 """
    def solution(t: np.ndarray) -> list[np.ndarray]:
        return [1.0 / (1.0 + np.exp(-(t - t0)))]

    def derivative(t: np.ndarray) -> list[np.ndarray]:
        y = solution(t)[0]
        return [y * (1.0 - y)]

    return ODEProblem(
        name="logistic",
        dim=1,
        rhs=lambda t, y: y * (1.0 - y),
        t0=t0,
        y0=np.array([0.5]),
        t_end=t_end,
        collocation=uniform_grid(t0, t_end, num_points),
        analytic_solution=partial(_vector, solution),
        analytic_derivative=partial(_vector, derivative),
        parameters=dict())


def harmonic(omega: float = 1.0, t0: float = 0.0, t_end: float = 1.0, num_points: int = DEFAULT_POINTS) -> ODEProblem:
    """ y1' = y2, y2' = -omega^2*y1, y(t0) = (1, 0) """
    return ODEProblem(
        name="harmonic",
        dim=2,
        rhs=lambda t, y: np.array([y[1], -omega * omega * y[0]]),
        t0=t0,
        y0=np.array([1.0, 0.0]),
        t_end=t_end,
        collocation=uniform_grid(t0, t_end, num_points),
        analytic_solution=partial(_vector, lambda t: [np.cos(omega * (t - t0)), -omega * np.sin(omega * (t - t0))]),
        analytic_derivative=partial(_vector, lambda t: [-omega * np.sin(omega * (t - t0)), -omega * omega * np.cos(omega * (t - t0))]),
        parameters=dict(omega=omega))


_CATALOG: dict[str, Callable[..., ODEProblem]] = {
    "exp_decay": exp_decay,
    "logistic": logistic,
    "harmonic": harmonic,
}


def builtin_problems() -> dict[str, Callable[..., ODEProblem]]:
    return dict(_CATALOG)


def get_problem(name: str, known_points: int = 0, **overrides) -> ODEProblem:
    """ catalog entry with overrides of its keyword parameters """
    if (factory := _CATALOG.get(name)) is None:
        raise CatalogError(name, _CATALOG)
    allowed = inspect.signature(factory).parameters
    overrides = {k: v for k, v in overrides.items() if v is not None}
    for key in overrides:
        if key not in allowed:
            raise ConfigurationError(F"{name} has no parameter {key!r}, expected one of {', '.join(allowed)}", F"problem.{key}")
    problem = factory(**overrides)
    if known_points:
        problem = problem.sample_known_solutions(known_points)
    return problem
