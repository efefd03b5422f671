""" QNode: N qubits, depth variational layers R_Y(all) -> H(qubit 0) -> CP(phi)(all), observable expectation and
parameter-shift gradient """
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Self
import logging
import numpy as np
from ..enums import ObservableKind
from ..exceptions import ConfigurationError, ShapeError
from ..config_parser import get_value
from .statevector import StateVector, init_zero_state, apply_ry, apply_h, apply_cp_all, expect_z_all, expect_z_global

logger = logging.getLogger(__name__)
logger.level = logging.INFO

SHIFT = np.pi / 2
DEFAULT_PHI = float(get_value("qnode", "phi", default=np.pi))


@dataclass(frozen=True)
class QNodeConfig:
    num_qubits: int
    depth: int
    phi: float = DEFAULT_PHI
    """ fixed hyperparameter, not trained """

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ConfigurationError(F"got {self.num_qubits}, expected >= 1", "num_qubits")
        if self.depth < 1:
            raise ConfigurationError(F"got {self.depth}, expected >= 1", "depth")
        if not 0.0 <= self.phi <= 2 * np.pi:
            raise ConfigurationError(F"got {self.phi}, expected 0..2pi", "phi")

    @property
    def shape(self) -> tuple[int, int]:
        return self.depth, self.num_qubits

    @property
    def num_parameters(self) -> int:
        return self.depth * self.num_qubits


@dataclass
class QNodeParams:
    angles: np.ndarray
    """ depth x num_qubits, angles[j][k] rotates qubit k in layer j """

    def __post_init__(self):
        self.angles = np.array(self.angles, dtype=np.float64)
        if self.angles.ndim != 2:
            raise ShapeError(F"got angles with {self.angles.ndim} dims, expected depth x num_qubits")
        if not np.all(np.isfinite(self.angles)):
            raise ValueError("angles must be finite")

    @classmethod
    def zeros(cls, config: QNodeConfig) -> Self:
        return cls(np.zeros(config.shape))

    @classmethod
    def random(cls, config: QNodeConfig, rng: np.random.Generator) -> Self:
        """ uniform on [0, 2pi) per component """
        return cls(rng.uniform(0.0, 2 * np.pi, size=config.shape))

    def copy(self) -> Self:
        return self.__class__(self.angles.copy())

    def check(self, config: QNodeConfig):
        if self.angles.shape != config.shape:
            raise ShapeError(F"got angles {self.angles.shape}, expected {config.shape}")


@dataclass(frozen=True)
class ObservableSpec:
    kind: ObservableKind = field(default=ObservableKind.Z_SUM)

    def __post_init__(self):
        object.__setattr__(self, "kind", ObservableKind(self.kind))

    def bound(self, config: QNodeConfig) -> float:
        """ spectral radius """
        match self.kind:
            case ObservableKind.Z_SUM:    return float(config.num_qubits)
            case ObservableKind.Z_GLOBAL: return 1.0

    def measure(self, state: StateVector) -> float:
        match self.kind:
            case ObservableKind.Z_SUM:    return float(np.sum(expect_z_all(state)))
            case ObservableKind.Z_GLOBAL: return expect_z_global(state)


def apply_variational_layer(state: StateVector, layer_angles, phi: float) -> StateVector:
    layer_angles = np.asarray(layer_angles, dtype=np.float64)
    if layer_angles.shape != (state.num_qubits,):
        raise ShapeError(F"got {layer_angles.shape} layer angles, expected ({state.num_qubits},)")
    for k, theta in enumerate(layer_angles):
        apply_ry(state, k, float(theta))
    apply_h(state, 0)
    return apply_cp_all(state, phi)


def prepare_qnode_state(config: QNodeConfig, params: QNodeParams) -> StateVector:
    params.check(config)
    state = init_zero_state(config.num_qubits)
    for layer in params.angles:
        apply_variational_layer(state, layer, config.phi)
    return state


def expectation(config: QNodeConfig, params: QNodeParams, obs: ObservableSpec) -> float:
    return obs.measure(prepare_qnode_state(config, params))


def grad_parameter_shift(config: QNodeConfig, params: QNodeParams, obs: ObservableSpec) -> np.ndarray:
    """ d<O>/d angles[j][k] = (<O>(+pi/2) - <O>(-pi/2)) / 2, exact for R_Y generators """
    params.check(config)
    ret = np.zeros(config.shape)
    shifted = params.copy()
    for j, k in np.ndindex(*config.shape):
        origin = shifted.angles[j, k]
        shifted.angles[j, k] = origin + SHIFT
        plus = expectation(config, shifted, obs)
        shifted.angles[j, k] = origin - SHIFT
        minus = expectation(config, shifted, obs)
        shifted.angles[j, k] = origin
        ret[j, k] = (plus - minus) / 2.0
    return ret


def value_and_grad(config: QNodeConfig, params: QNodeParams, obs: ObservableSpec) -> tuple[float, np.ndarray]:
    """ expectation and its parameter-shift gradient """
    return expectation(config, params, obs), grad_parameter_shift(config, params, obs)
