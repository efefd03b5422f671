""" Joint optimization of network weights and QNode angles on the composite loss """
from __future__ import annotations
from dataclasses import dataclass, field
import logging
import numpy as np
from ..config_parser import get_value
from ..enums import OptimizerKind, Coupling
from ..exceptions import ConfigurationError, NonFiniteLoss, NumericError, UnsupportedActivation
from ..hybrid import HybridModel
from .loss import LossBreakdown, LossWeights, total_loss_and_grad, gradient_norms
from .optimizers import get_optimizer
from .problems import ODEProblem

logger = logging.getLogger(__name__)
logger.level = logging.INFO


@dataclass(frozen=True)
class TrainConfig:
    optimizer: OptimizerKind = OptimizerKind(get_value("train", "optimizer", default="adam"))
    learning_rate: float = float(get_value("train", "learning_rate", default=1e-2))
    beta1: float = float(get_value("train", "beta1", default=0.9))
    beta2: float = float(get_value("train", "beta2", default=0.999))
    epsilon: float = float(get_value("train", "epsilon", default=1e-8))
    epochs: int = int(get_value("train", "epochs", default=5000))
    seed: int = 0
    log_every: int = int(get_value("train", "log_every", default=100))

    def __post_init__(self):
        object.__setattr__(self, "optimizer", OptimizerKind(self.optimizer))
        if self.learning_rate < 0.0:
            raise ConfigurationError(F"got {self.learning_rate}, expected >= 0", "train.learning_rate")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ConfigurationError(F"got betas ({self.beta1}, {self.beta2}), expected in [0, 1)", "train.beta1")
        if self.epsilon <= 0.0:
            raise ConfigurationError(F"got {self.epsilon}, expected > 0", "train.epsilon")
        if self.epochs < 1:
            raise ConfigurationError(F"got {self.epochs}, expected >= 1", "train.epochs")
        if self.log_every < 1:
            raise ConfigurationError(F"got {self.log_every}, expected >= 1", "train.log_every")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(F"got {self.seed}, expected unsigned 64-bit", "seed")


@dataclass(frozen=True)
class TraceRow:
    epoch: int
    loss: LossBreakdown
    grad_norm_classical: float
    grad_norm_quantum: float


@dataclass
class TrainTrace:
    rows: list[TraceRow] = field(default_factory=list)

    @property
    def final(self) -> TraceRow | None:
        return self.rows[-1] if self.rows else None

    def losses(self) -> np.ndarray:
        return np.array([row.loss.total for row in self.rows])


@dataclass
class TrainResult:
    trace: TrainTrace
    model: HybridModel


def _finite(breakdown: LossBreakdown, classical: np.ndarray, quantum: list[np.ndarray]) -> bool:
    return breakdown.is_finite() and bool(np.all(np.isfinite(classical))) and all(np.all(np.isfinite(g)) for g in quantum)


def train(model: HybridModel, problem: ODEProblem, weights: LossWeights, cfg: TrainConfig) -> TrainResult:
    """ trace rows every log_every epochs and after the last update. The input model is not mutated """
    if model.coupling == Coupling.MAC and not model.act.is_smooth:
        raise UnsupportedActivation(model.act.value, "physics-informed training")
    model = model.copy()
    optimizer = get_optimizer(cfg.optimizer, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon)
    trace = TrainTrace()
    logger.info(F"train {problem.name}: {cfg.optimizer.value} lr={cfg.learning_rate} epochs={cfg.epochs} seed={cfg.seed}")

    def evaluate(epoch: int) -> tuple[LossBreakdown, np.ndarray, list[np.ndarray]]:
        try:
            breakdown, g_c, g_q = total_loss_and_grad(model, problem, weights)
        except NumericError as e:
            logger.error(F"non-finite right-hand side at {epoch=}: {e}")
            raise NonFiniteLoss(epoch, last_good)
        if not _finite(breakdown, g_c, g_q):
            logger.error(F"non-finite loss at {epoch=}: {breakdown}")
            raise NonFiniteLoss(epoch, last_good)
        return breakdown, g_c, g_q

    def record(epoch: int, breakdown: LossBreakdown, g_c: np.ndarray, g_q: list[np.ndarray]):
        norm_c, norm_q = gradient_norms(g_c, g_q)
        trace.rows.append(TraceRow(epoch, breakdown, norm_c, norm_q))
        logger.info(F"epoch {epoch}: {breakdown} |grad_c|={norm_c:.3e} |grad_q|={norm_q:.3e}")

    last_good = model.copy()
    for epoch in range(cfg.epochs):
        breakdown, g_c, g_q = evaluate(epoch)
        last_good = model.copy()
        if epoch % cfg.log_every == 0:
            record(epoch, breakdown, g_c, g_q)
        params = {"classical": model.classical_vector(), "quantum": model.quantum_array()}
        optimizer.step(params, {"classical": g_c, "quantum": np.stack(g_q)})
        model.set_parameters(params["classical"], params["quantum"])
    record(cfg.epochs, *evaluate(cfg.epochs))
    return TrainResult(trace, model)
