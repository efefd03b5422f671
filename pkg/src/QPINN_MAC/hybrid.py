""" QPINN-MAC output y_j = (y_hat_j + 1) * <O>_{Theta_j}. Theta carries no time dependence, so
dy_j/dt = y_hat_j' * <O>_{Theta_j}. Gradients take value and time-derivative channel adjoints, every loss term
goes through grad_classical/grad_quantum """
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Self, Sequence
import logging
import numpy as np
from .enums import Activation, Coupling
from .exceptions import ShapeError
from .classical.mlp import MLPParams, init_mlp, mlp_forward, forward_with_tangent, mlp_backprop
from .quantum.qnode import QNodeConfig, QNodeParams, ObservableSpec, expectation, value_and_grad

logger = logging.getLogger(__name__)
logger.level = logging.INFO


@dataclass
class HybridModel:
    mlp: MLPParams | None
    act: Activation
    qnode_config: QNodeConfig
    qnode_params: list[QNodeParams]
    """ Xi = (Theta_1, ..., Theta_M), one QNode per output """
    obs: ObservableSpec = field(default_factory=ObservableSpec)
    coupling: Coupling = Coupling.MAC

    def __post_init__(self):
        self.act = Activation(self.act)
        self.coupling = Coupling(self.coupling)
        self.check()

    def check(self):
        if not self.qnode_params:
            raise ShapeError("model needs at least one QNode")
        for j, params in enumerate(self.qnode_params):
            try:
                params.check(self.qnode_config)
            except ShapeError as e:
                raise ShapeError(F"QNode {j}: {e}")
        match self.coupling:
            case Coupling.MAC:
                if self.mlp is None:
                    raise ShapeError("mac coupling needs a classical network")
                if self.mlp.output_size != len(self.qnode_params):
                    raise ShapeError(F"got network output {self.mlp.output_size}, expected {len(self.qnode_params)} (QNodes)")
            case Coupling.QUANTUM_ONLY:
                if self.mlp is not None:
                    raise ShapeError("quantum only coupling has no classical network")

    @property
    def dim(self) -> int:
        return len(self.qnode_params)

    @property
    def num_classical(self) -> int:
        return 0 if self.mlp is None else self.mlp.num_parameters

    def classical_vector(self) -> np.ndarray:
        return np.zeros(0) if self.mlp is None else self.mlp.flatten()

    def quantum_array(self) -> np.ndarray:
        """ M x depth x N """
        return np.stack([p.angles for p in self.qnode_params])

    def set_parameters(self, classical: np.ndarray, quantum: np.ndarray):
        if self.mlp is not None:
            self.mlp = MLPParams.from_flat(self.mlp.widths, classical)
        quantum = np.asarray(quantum, dtype=np.float64)
        if quantum.shape != (self.dim, ) + self.qnode_config.shape:
            raise ShapeError(F"got quantum {quantum.shape}, expected {(self.dim, ) + self.qnode_config.shape}")
        self.qnode_params = [QNodeParams(a.copy()) for a in quantum]

    def copy(self) -> Self:
        return self.__class__(
            mlp=None if self.mlp is None else self.mlp.copy(),
            act=self.act,
            qnode_config=self.qnode_config,
            qnode_params=[p.copy() for p in self.qnode_params],
            obs=self.obs,
            coupling=self.coupling)

    def evaluate(self, t) -> tuple[np.ndarray, np.ndarray]:
        """ trajectory interface: y_mac and dy_mac/dt """
        ev = eval_mac(self, t)
        return ev.y_mac, ev.y_mac_dt


def init_model(hidden: Sequence[int],
               dim: int,
               act: Activation,
               qnode_config: QNodeConfig,
               obs: ObservableSpec,
               rng: np.random.Generator,
               coupling: Coupling = Coupling.MAC) -> HybridModel:
    """ network by init_mlp, angles uniform on [0, 2pi) """
    mlp = init_mlp((1, *hidden, dim), rng) if coupling == Coupling.MAC else None
    return HybridModel(
        mlp=mlp,
        act=act,
        qnode_config=qnode_config,
        qnode_params=[QNodeParams.random(qnode_config, rng) for _ in range(dim)],
        obs=obs,
        coupling=coupling)


@dataclass(frozen=True)
class QuantumEval:
    values: np.ndarray
    """ <O>_{Theta_j}, (M,) """
    grads: np.ndarray | None = None
    """ d<O>_{Theta_j}/dTheta_j, (M, depth, N) """


def quantum_eval(model: HybridModel, with_grad: bool = False) -> QuantumEval:
    """ every QNode is evaluated once and reused for all times """
    if with_grad:
        pairs = [value_and_grad(model.qnode_config, p, model.obs) for p in model.qnode_params]
        return QuantumEval(np.array([v for v, _ in pairs]), np.stack([g for _, g in pairs]))
    return QuantumEval(np.array([expectation(model.qnode_config, p, model.obs) for p in model.qnode_params]))


@dataclass(frozen=True)
class ModelEval:
    """ arrays are (M,) for scalar time, (K, M) for K times """
    y_mac: np.ndarray
    y_mac_dt: np.ndarray
    y_hat: np.ndarray
    y_hat_dt: np.ndarray
    expectations: np.ndarray


def eval_mac(model: HybridModel, t, quantum: QuantumEval = None) -> ModelEval:
    if quantum is None:
        quantum = quantum_eval(model)
    e = quantum.values
    match model.coupling:
        case Coupling.MAC:
            y_hat, y_hat_dt = forward_with_tangent(model.mlp, model.act, t)
        case _:
            shape = np.shape(t) + (model.dim, )
            y_hat, y_hat_dt = np.zeros(shape), np.zeros(shape)
    return ModelEval(
        y_mac=(y_hat + 1.0) * e,
        y_mac_dt=y_hat_dt * e,
        y_hat=y_hat,
        y_hat_dt=y_hat_dt,
        expectations=np.broadcast_to(e, np.shape(y_hat)).copy())


def predict(model: HybridModel, t, quantum: QuantumEval = None) -> np.ndarray:
    """ y_mac only, any activation """
    if quantum is None:
        quantum = quantum_eval(model)
    if model.mlp is None:
        return np.broadcast_to(quantum.values, np.shape(t) + (model.dim, )).copy()
    return (mlp_forward(model.mlp, model.act, t) + 1.0) * quantum.values


def _adjoints(model: HybridModel, t, value_adjoint, deriv_adjoint) -> tuple[np.ndarray, np.ndarray]:
    shape = np.shape(t) + (model.dim, )
    value_adjoint = np.asarray(value_adjoint, dtype=np.float64)
    deriv_adjoint = np.asarray(deriv_adjoint, dtype=np.float64)
    if value_adjoint.shape != shape or deriv_adjoint.shape != shape:
        raise ShapeError(F"got adjoints {value_adjoint.shape} and {deriv_adjoint.shape}, expected {shape}")
    return value_adjoint, deriv_adjoint


def grad_classical(model: HybridModel, t, value_adjoint, deriv_adjoint, quantum: QuantumEval = None) -> np.ndarray:
    """ gradient of sum(adj * y_mac + adj' * y_mac_dt) over network parameters: <O>_j * grad y_hat_j """
    value_adjoint, deriv_adjoint = _adjoints(model, t, value_adjoint, deriv_adjoint)
    if model.mlp is None:
        return np.zeros(0)
    if quantum is None:
        quantum = quantum_eval(model)
    e = quantum.values
    return mlp_backprop(model.mlp, model.act, t, value_adjoint * e, deriv_adjoint * e)


def quantum_factors(model: HybridModel, t, value_adjoint, deriv_adjoint, evaluation: ModelEval = None) -> np.ndarray:
    """ (M,) scalars sum_k adj_kj * (y_hat_kj + 1) + adj'_kj * y_hat'_kj multiplying grad <O>_j """
    value_adjoint, deriv_adjoint = _adjoints(model, t, value_adjoint, deriv_adjoint)
    if evaluation is None:
        evaluation = eval_mac(model, t)
    factors = value_adjoint * (evaluation.y_hat + 1.0) + deriv_adjoint * evaluation.y_hat_dt
    return factors.reshape(-1, model.dim).sum(axis=0)


def grad_quantum(model: HybridModel, t, value_adjoint, deriv_adjoint, quantum: QuantumEval = None, evaluation: ModelEval = None) -> list[np.ndarray]:
    """ per QNode depth x N gradient of the same scalarized quantity """
    if quantum is None or quantum.grads is None:
        quantum = quantum_eval(model, with_grad=True)
    if evaluation is None:
        evaluation = eval_mac(model, t, quantum)
    factors = quantum_factors(model, t, value_adjoint, deriv_adjoint, evaluation)
    return [factor * grad for factor, grad in zip(factors, quantum.grads)]
