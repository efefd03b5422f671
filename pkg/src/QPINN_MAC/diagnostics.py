""" Gradient statistics of the loss over the quantum parameters under random initialization: sweeps over qubit
count and depth, ln-variance slope fits, c/sqrt(depth*N) envelope and trainability verdicts """
from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence
import csv
import io
import logging
import numpy as np
from .config_parser import get_value
from .enums import Activation, ModelKind, ObservableKind, ProbeLoss, ProbeNorm
from .exceptions import ConfigurationError
from .hybrid import HybridModel, init_model, quantum_eval, eval_mac, grad_quantum
from .pinn.loss import LossWeights, total_loss_and_grad
from .pinn.problems import ODEProblem, get_problem
from .quantum.qnode import QNodeConfig, ObservableSpec, DEFAULT_PHI

logger = logging.getLogger(__name__)
logger.level = logging.INFO

SWEEP_HEADER = ("n_qubits", "depth", "sample_count", "var_component", "mean_component", "median_abs_norm", "max_norm")


@dataclass(frozen=True)
class SweepConfig:
    qubit_range: tuple[int, ...]
    depth_range: tuple[int, ...]
    samples: int = int(get_value("sweep", "samples", default=200))
    seed: int = 0
    eps_grad: float = float(get_value("sweep", "eps_grad", default=1e-3))
    model_kind: ModelKind = ModelKind.MAC
    problem: str = "exp_decay"
    t_probe: tuple[float, ...] = tuple(get_value("sweep", "t_probe", default=[0.5]))
    component: tuple[int, int] = (0, 0)
    """ (layer, qubit) of QNode 0 whose variance is reported """
    hidden: tuple[int, ...] = tuple(get_value("mlp", "hidden", default=[16, 16]))
    activation: Activation = Activation.TANH
    observable: ObservableKind = ObservableKind(get_value("qnode", "observable", default="z_sum"))
    """ for mac models, quantum_only kinds fix their own """
    phi: float = DEFAULT_PHI
    loss: ProbeLoss = ProbeLoss.PHYSICS
    probe_norm: ProbeNorm = ProbeNorm.MAX
    p: float = float(get_value("sweep", "lp", default=2.0))
    weights: LossWeights = field(default_factory=LossWeights)
    problem_overrides: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "model_kind", ModelKind(self.model_kind))
        object.__setattr__(self, "activation", Activation(self.activation))
        object.__setattr__(self, "observable", ObservableKind(self.observable))
        object.__setattr__(self, "loss", ProbeLoss(self.loss))
        object.__setattr__(self, "probe_norm", ProbeNorm(self.probe_norm))
        for name in ("qubit_range", "depth_range"):
            values = tuple(getattr(self, name))
            object.__setattr__(self, name, values)
            if not values or min(values) < 1 or any(a >= b for a, b in zip(values[:-1], values[1:])):
                raise ConfigurationError(F"got {values}, expected nonempty increasing positive values", F"sweep.{name}")
        if self.samples < 2:
            raise ConfigurationError(F"got {self.samples}, expected >= 2", "sweep.samples")
        if self.eps_grad < 0.0:
            raise ConfigurationError(F"got {self.eps_grad}, expected >= 0", "sweep.eps_grad")
        if not self.t_probe:
            raise ConfigurationError("expected at least one probe time", "sweep.t_probe")
        layer, qubit = self.component
        if layer >= min(self.depth_range) or qubit >= min(self.qubit_range) or min(layer, qubit) < 0:
            raise ConfigurationError(F"got {self.component}, expected inside the smallest cell", "sweep.component")
        if self.p < 1.0:
            raise ConfigurationError(F"got {self.p}, expected >= 1", "sweep.p")
        if self.workers < 1:
            raise ConfigurationError(F"got {self.workers}, expected >= 1", "sweep.workers")

    def build_problem(self) -> ODEProblem:
        return get_problem(self.problem, **self.problem_overrides)

    def cells(self) -> list[tuple[int, int]]:
        return [(n, depth) for depth in self.depth_range for n in self.qubit_range]


@dataclass(frozen=True)
class GradientStats:
    n_qubits: int
    depth: int
    sample_count: int
    var_component: float
    mean_component: float
    median_abs_norm: float
    max_norm: float
    component_samples: np.ndarray = field(repr=False, compare=False, default=None)
    norm_samples: np.ndarray = field(repr=False, compare=False, default=None)

    @classmethod
    def from_samples(cls, n_qubits: int, depth: int, components: np.ndarray, norms: np.ndarray) -> GradientStats:
        """ unbiased variance, ordered reductions only """
        return cls(
            n_qubits=n_qubits,
            depth=depth,
            sample_count=len(components),
            var_component=float(np.var(components, ddof=1)),
            mean_component=float(np.mean(components)),
            median_abs_norm=float(np.median(np.abs(norms))),
            max_norm=float(np.max(norms)),
            component_samples=components,
            norm_samples=norms)

    @property
    def size(self) -> int:
        """ depth * N """
        return self.n_qubits * self.depth

    def row(self) -> tuple:
        return self.n_qubits, self.depth, self.sample_count, self.var_component, self.mean_component, self.median_abs_norm, self.max_norm


def sample_rng(seed: int, n_qubits: int, depth: int, sample: int) -> np.random.Generator:
    """ independent stream per (seed, cell, sample) """
    return np.random.default_rng(np.random.SeedSequence((seed, n_qubits, depth, sample)))


def build_sample_model(cfg: SweepConfig, n_qubits: int, depth: int, dim: int, rng: np.random.Generator) -> HybridModel:
    """ fresh network and Theta uniform on [0, 2pi) """
    return init_model(
        hidden=cfg.hidden,
        dim=dim,
        act=cfg.activation,
        qnode_config=QNodeConfig(n_qubits, depth, cfg.phi),
        obs=ObservableSpec(cfg.model_kind.observable or cfg.observable),
        rng=rng,
        coupling=cfg.model_kind.coupling)


def probe_gradient(model: HybridModel, problem: ODEProblem, cfg: SweepConfig, t: float) -> np.ndarray:
    """ gradient over Xi (M x depth x N) of the loss restricted to probe time t """
    if cfg.model_kind == ModelKind.QUANTUM_ONLY_GLOBAL:
        # squared error to constant target 0
        quantum = quantum_eval(model, with_grad=True)
        ts = np.array([t])
        ev = eval_mac(model, ts, quantum)
        return np.stack(grad_quantum(model, ts, 2.0 * ev.y_mac, np.zeros_like(ev.y_mac), quantum, ev))
    match cfg.loss:
        case ProbeLoss.SUPERVISED:
            if problem.analytic_solution is None:
                raise ConfigurationError(F"{problem.name} has no analytic solution", "sweep.loss")
            quantum = quantum_eval(model, with_grad=True)
            ts = np.array([t])
            ev = eval_mac(model, ts, quantum)
            adj = 2.0 * (ev.y_mac - problem.analytic_solution(ts))
            return np.stack(grad_quantum(model, ts, adj, np.zeros_like(adj), quantum, ev))
        case _:
            _, _, g_q = total_loss_and_grad(model, problem.with_collocation([t]).without_known_solutions(), cfg.weights)
            return np.stack(g_q)


def aggregate_norm(norms: np.ndarray, cfg: SweepConfig, problem: ODEProblem) -> float:
    """ max over probe times or discrete L^p over the time domain """
    match cfg.probe_norm:
        case ProbeNorm.LP:
            w = (problem.t_end - problem.t0) / len(norms)
            return float(np.sum(w * norms ** cfg.p) ** (1.0 / cfg.p))
        case _:
            return float(np.max(norms))


def _sample(cfg: SweepConfig, problem: ODEProblem, n_qubits: int, depth: int, index: int) -> tuple[float, float]:
    """ component at the first probe time and aggregated norm """
    model = build_sample_model(cfg, n_qubits, depth, problem.dim, sample_rng(cfg.seed, n_qubits, depth, index))
    grads = [probe_gradient(model, problem, cfg, t) for t in cfg.t_probe]
    layer, qubit = cfg.component
    norms = np.array([np.linalg.norm(g) for g in grads])
    return float(grads[0][0, layer, qubit]), aggregate_norm(norms, cfg, problem)


def sample_gradient_stats(cell: tuple[int, int], cfg: SweepConfig, problem: ODEProblem = None) -> GradientStats:
    n_qubits, depth = cell
    if problem is None:
        problem = cfg.build_problem()
    indexes = range(cfg.samples)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda i: _sample(cfg, problem, n_qubits, depth, i), indexes))
    else:
        results = [_sample(cfg, problem, n_qubits, depth, i) for i in indexes]
    stats = GradientStats.from_samples(n_qubits, depth, np.array([c for c, _ in results]), np.array([n for _, n in results]))
    logger.info(F"cell N={n_qubits} depth={depth}: var={stats.var_component:.3e} median|grad|={stats.median_abs_norm:.3e}")
    return stats


def fit_log_slope(x: Sequence[float], var: Sequence[float]) -> float | None:
    """ least squares slope of ln(var) against x, None for fewer than 2 usable points """
    points = [(a, np.log(v)) for a, v in zip(x, var) if v > 0.0 and np.isfinite(v)]
    if len(points) < len(x):
        logger.warning(F"slope fit skips {len(x) - len(points)} cells with zero variance")
    if len({a for a, _ in points}) < 2:
        return None
    xs, ys = np.array(points).T
    return float(np.polyfit(xs, ys, 1)[0])


def fit_envelope(cells: Sequence[GradientStats]) -> float:
    """ c of median_abs_norm ~ c / sqrt(depth*N) by least squares """
    u = np.array([1.0 / np.sqrt(c.size) for c in cells])
    m = np.array([c.median_abs_norm for c in cells])
    return float(np.dot(u, m) / np.dot(u, u))


@dataclass(frozen=True)
class SweepReport:
    cells: tuple[GradientStats, ...]
    slope_vs_n: dict[int, float | None]
    """ per depth """
    slope_vs_depth: dict[int, float | None]
    """ per qubit count """
    envelope_c: float
    eps_grad: float
    model_kind: ModelKind = ModelKind.MAC

    @property
    def primary_slope_vs_n(self) -> float | None:
        """ at the smallest depth """
        return self.slope_vs_n[min(self.slope_vs_n)]

    @property
    def primary_slope_vs_depth(self) -> float | None:
        """ at the smallest qubit count """
        return self.slope_vs_depth[min(self.slope_vs_depth)]

    @property
    def trainable_cells(self) -> list[tuple[int, int]]:
        return [(c.n_qubits, c.depth) for c in self.cells if c.median_abs_norm >= self.eps_grad]

    def bound_curve(self, size: float) -> float:
        return self.envelope_c / np.sqrt(size)

    def get_cell(self, n_qubits: int, depth: int) -> GradientStats:
        return next(filter(lambda c: (c.n_qubits, c.depth) == (n_qubits, depth), self.cells))


def build_report(cells: Sequence[GradientStats], cfg: SweepConfig) -> SweepReport:
    return SweepReport(
        cells=tuple(cells),
        slope_vs_n={depth: fit_log_slope(*zip(*[(c.n_qubits, c.var_component) for c in cells if c.depth == depth])) for depth in cfg.depth_range},
        slope_vs_depth={n: fit_log_slope(*zip(*[(c.depth, c.var_component) for c in cells if c.n_qubits == n])) for n in cfg.qubit_range},
        envelope_c=fit_envelope(cells),
        eps_grad=cfg.eps_grad,
        model_kind=cfg.model_kind)


def run_sweep(cfg: SweepConfig) -> SweepReport:
    problem = cfg.build_problem()
    logger.info(F"sweep {cfg.model_kind.value} on {problem.name}: {len(cfg.cells())} cells x {cfg.samples} samples")
    return build_report([sample_gradient_stats(cell, cfg, problem) for cell in cfg.cells()], cfg)


@dataclass(frozen=True)
class CellVerdict:
    n_qubits: int
    depth: int
    median_abs_norm: float
    trainable: bool
    """ measured median norm >= eps_grad """
    envelope_trainable: bool
    """ c / sqrt(depth*N) >= eps_grad """


@dataclass(frozen=True)
class TrainabilityReport:
    eps_grad: float
    envelope_c: float
    max_size: float
    """ depth*N <= c^2 / eps_grad^2 """
    verdicts: tuple[CellVerdict, ...]

    @property
    def trainable_cells(self) -> list[tuple[int, int]]:
        return [(v.n_qubits, v.depth) for v in self.verdicts if v.trainable]

    @property
    def misclassified(self) -> list[tuple[int, int]]:
        """ cells where envelope and measurement disagree """
        return [(v.n_qubits, v.depth) for v in self.verdicts if v.trainable != v.envelope_trainable]


def trainability_report(report: SweepReport, eps_grad: float) -> TrainabilityReport:
    if not report.cells:
        raise ConfigurationError("empty sweep report", "sweep")
    c = report.envelope_c
    return TrainabilityReport(
        eps_grad=eps_grad,
        envelope_c=c,
        max_size=float("inf") if eps_grad == 0.0 else c * c / (eps_grad * eps_grad),
        verdicts=tuple(CellVerdict(
            n_qubits=cell.n_qubits,
            depth=cell.depth,
            median_abs_norm=cell.median_abs_norm,
            trainable=cell.median_abs_norm >= eps_grad,
            envelope_trainable=report.bound_curve(cell.size) >= eps_grad) for cell in report.cells))


def sweep_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for cell in report.cells:
        writer.writerow(tuple(repr(v) if isinstance(v, float) else v for v in cell.row()))
    return buf.getvalue()


def summary(report: SweepReport, verdict: TrainabilityReport) -> str:
    """ TOML-like text document: slopes, constants and per cell verdicts """
    def fmt(value: float | None) -> str:
        return "\"absent\"" if value is None else repr(value)

    lines = [
        F"model_kind = \"{report.model_kind.value}\"",
        F"eps_grad = {verdict.eps_grad!r}",
        F"envelope_c = {verdict.envelope_c!r}",
        F"max_size = {verdict.max_size!r}" if np.isfinite(verdict.max_size) else "max_size = \"inf\"",
        F"misclassified = {len(verdict.misclassified)}",
        "",
        "[slope_vs_n]"]
    lines.extend(F"depth_{depth} = {fmt(slope)}" for depth, slope in report.slope_vs_n.items())
    lines.extend(("", "[slope_vs_depth]"))
    lines.extend(F"n_{n} = {fmt(slope)}" for n, slope in report.slope_vs_depth.items())
    for v in verdict.verdicts:
        lines.extend((
            "",
            "[[cell]]",
            F"n_qubits = {v.n_qubits}",
            F"depth = {v.depth}",
            F"median_abs_norm = {v.median_abs_norm!r}",
            F"trainable = {str(v.trainable).lower()}",
            F"envelope_trainable = {str(v.envelope_trainable).lower()}"))
    return "\n".join(lines) + "\n"
