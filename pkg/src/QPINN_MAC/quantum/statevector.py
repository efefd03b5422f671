""" Dense statevector of an N-qubit register. Basis index i encodes |i_0 ... i_{N-1}> with qubit 0 as the most
significant bit. Gates act in place by stride iteration over amplitude pairs, no dense matrices are built """
from __future__ import annotations
from typing import Self
import numpy as np
from .. import settings
from ..exceptions import ConfigurationError, QubitIndexError, ShapeError


SQRT2_INV = 1.0 / np.sqrt(2.0)


class StateVector:
    num_qubits: int
    amps: np.ndarray
    __slots__ = ("num_qubits", "amps")

    def __init__(self, num_qubits: int, amps: np.ndarray):
        if amps.shape != (1 << num_qubits,):
            raise ShapeError(F"got {amps.shape=}, expected ({1 << num_qubits},) for {num_qubits=}")
        self.num_qubits = num_qubits
        self.amps = amps
        """ complex128 amplitudes """

    @classmethod
    def from_amplitudes(cls, amps) -> Self:
        amps = np.array(amps, dtype=np.complex128)
        num_qubits = int(amps.shape[0]).bit_length() - 1
        if num_qubits < 1 or amps.shape[0] != 1 << num_qubits:
            raise ShapeError(F"got {amps.shape[0]} amplitudes, expected power of two >= 2")
        return cls(num_qubits, amps)

    def copy(self) -> Self:
        return self.__class__(self.num_qubits, self.amps.copy())

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def _pair_view(self, qubit: int) -> np.ndarray:
        """ view with axis 1 is the bit of qubit: [high bits, qubit bit, low bits] """
        check_qubit(self, qubit)
        return self.amps.reshape(1 << qubit, 2, 1 << (self.num_qubits - qubit - 1))

    def __len__(self):
        return len(self.amps)

    def __str__(self):
        return F"{self.__class__.__name__}[{self.num_qubits}]: norm={self.norm_squared():.12f}"


def check_qubit(state: StateVector, qubit: int):
    if not 0 <= qubit < state.num_qubits:
        raise QubitIndexError(qubit, state.num_qubits)


def init_zero_state(num_qubits: int) -> StateVector:
    cap = settings.get_max_qubits()
    if not 1 <= num_qubits <= cap:
        raise ConfigurationError(F"got {num_qubits=}, expected 1..{cap} (qubit cap)", "num_qubits")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def apply_ry(state: StateVector, qubit: int, theta: float) -> StateVector:
    """ R_Y(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]] """
    if not np.isfinite(theta):
        raise ValueError(F"got {theta=}, expected finite angle")
    view = state._pair_view(qubit)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = c * a0 - s * a1
    view[:, 1, :] = s * a0 + c * a1
    return state


def apply_h(state: StateVector, qubit: int) -> StateVector:
    view = state._pair_view(qubit)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = (a0 + a1) * SQRT2_INV
    view[:, 1, :] = (a0 - a1) * SQRT2_INV
    return state


def apply_cp_all(state: StateVector, phi: float) -> StateVector:
    """ multiplies amplitude of |1...1> by exp(-i*phi). For one qubit this is diag(1, exp(-i*phi)) """
    state.amps[-1] *= np.exp(-1j * phi)
    return state


def expect_z(state: StateVector, qubit: int) -> float:
    """ <Z_qubit>, + for bit 0 """
    probs = np.abs(state._pair_view(qubit)) ** 2
    return float(np.clip(probs[:, 0, :].sum() - probs[:, 1, :].sum(), -1.0, 1.0))


def expect_z_all(state: StateVector) -> np.ndarray:
    """ <Z_k> for every qubit k """
    return np.array([expect_z(state, k) for k in range(state.num_qubits)])


def expect_z_global(state: StateVector) -> float:
    """ <Z x ... x Z>, sign is parity of the basis index """
    index = np.arange(len(state), dtype=np.uint64)
    parity = np.zeros(len(state), dtype=np.uint64)
    for k in range(state.num_qubits):
        parity ^= (index >> np.uint64(k)) & np.uint64(1)
    signs = 1.0 - 2.0 * parity.astype(np.float64)
    return float(np.clip(np.dot(signs, state.probabilities()), -1.0, 1.0))
