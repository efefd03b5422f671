""" Classical network y_hat(t, W): scalar input t, arbitrary hidden widths, M outputs. Activation is applied at
every layer including the output one. Flat parameter layout is layer-major, per layer the weight matrix row-major
then the bias vector """
from __future__ import annotations
from dataclasses import dataclass
from typing import Self, Sequence
import numpy as np
from ..enums import Activation
from ..exceptions import ShapeError, UnsupportedActivation


@dataclass(frozen=True)
class DualValue:
    """ value and d/dt tangent """
    value: float
    tangent: float


@dataclass
class MLPParams:
    layers: list[tuple[np.ndarray, np.ndarray]]
    """ (weight out x in, bias out) per layer """

    def __post_init__(self):
        self.layers = [(np.array(w, dtype=np.float64), np.array(b, dtype=np.float64)) for w, b in self.layers]
        self.check()

    def check(self):
        if not self.layers:
            raise ShapeError("network has no layers")
        fan_in = 1
        for i, (w, b) in enumerate(self.layers):
            if w.ndim != 2 or w.shape[1] != fan_in:
                raise ShapeError(F"layer {i}: got weight {w.shape}, expected (*, {fan_in})")
            if b.shape != (w.shape[0],):
                raise ShapeError(F"layer {i}: got bias {b.shape}, expected ({w.shape[0]},)")
            fan_in = w.shape[0]

    @property
    def widths(self) -> tuple[int, ...]:
        """ 1, hidden..., M """
        return (1, ) + tuple(w.shape[0] for w, _ in self.layers)

    @property
    def output_size(self) -> int:
        return self.layers[-1][0].shape[0]

    @property
    def num_parameters(self) -> int:
        return sum(w.size + b.size for w, b in self.layers)

    def flatten(self) -> np.ndarray:
        return np.concatenate([np.concatenate((w.ravel(), b)) for w, b in self.layers])

    @classmethod
    def from_flat(cls, widths: Sequence[int], flat: np.ndarray) -> Self:
        flat = np.asarray(flat, dtype=np.float64)
        if flat.shape != (count := _count(widths),):
            raise ShapeError(F"got {flat.shape} parameters, expected ({count},) for {tuple(widths)}")
        layers = list()
        pos = 0
        for fan_in, fan_out in zip(widths[:-1], widths[1:]):
            w = flat[pos: pos + fan_in * fan_out].reshape(fan_out, fan_in)
            pos += fan_in * fan_out
            layers.append((w.copy(), flat[pos: pos + fan_out].copy()))
            pos += fan_out
        return cls(layers)

    @classmethod
    def zeros(cls, widths: Sequence[int]) -> Self:
        return cls.from_flat(widths, np.zeros(_count(widths)))

    def copy(self) -> Self:
        return self.__class__([(w.copy(), b.copy()) for w, b in self.layers])


def _count(widths: Sequence[int]) -> int:
    return sum(fan_in * fan_out + fan_out for fan_in, fan_out in zip(widths[:-1], widths[1:]))


def init_mlp(widths: Sequence[int], rng: np.random.Generator) -> MLPParams:
    """ weights uniform in +-sqrt(6/(fan_in+fan_out)), biases 0 """
    if len(widths) < 2 or widths[0] != 1 or min(widths) < 1:
        raise ShapeError(F"got {widths=}, expected (1, hidden..., M) with positive widths")
    layers = list()
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        layers.append((rng.uniform(-limit, limit, size=(fan_out, fan_in)), np.zeros(fan_out)))
    return MLPParams(layers)


def activate(act: Activation, z: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ return sigma(z), sigma'(z), sigma''(z) """
    match act:
        case Activation.TANH:
            a = np.tanh(z)
            d1 = 1.0 - a * a
            return a, d1, -2.0 * a * d1
        case Activation.SIGMOID:
            a = 1.0 / (1.0 + np.exp(-z))
            d1 = a * (1.0 - a)
            return a, d1, d1 * (1.0 - 2.0 * a)
        case Activation.RELU:
            return np.maximum(z, 0.0), (z > 0.0).astype(np.float64), np.zeros_like(z)
        case err:
            raise ValueError(F"unknown activation {err}")


@dataclass
class _Tape:
    """ per layer inputs and local derivatives for the reverse pass """
    x: list[np.ndarray]
    x_dot: list[np.ndarray]
    z_dot: list[np.ndarray]
    d1: list[np.ndarray]
    d2: list[np.ndarray]


def _as_batch(t) -> tuple[np.ndarray, bool]:
    t_arr = np.asarray(t, dtype=np.float64)
    return np.atleast_1d(t_arr), t_arr.ndim == 0


def _propagate(params: MLPParams, act: Activation, ts: np.ndarray, with_tangent: bool, tape: _Tape = None) -> tuple[np.ndarray, np.ndarray | None]:
    x = ts[:, None]
    x_dot = np.ones_like(x) if with_tangent else None
    for w, b in params.layers:
        z = x @ w.T + b
        a, d1, d2 = activate(act, z)
        if with_tangent:
            z_dot = x_dot @ w.T
            if tape is not None:
                tape.x.append(x)
                tape.x_dot.append(x_dot)
                tape.z_dot.append(z_dot)
                tape.d1.append(d1)
                tape.d2.append(d2)
            x_dot = d1 * z_dot
        x = a
    return x, x_dot


def mlp_forward(params: MLPParams, act: Activation, t) -> np.ndarray:
    """ (M,) for scalar t, (K, M) for K times """
    ts, scalar = _as_batch(t)
    out, _ = _propagate(params, act, ts, False)
    return out[0] if scalar else out


def forward_with_tangent(params: MLPParams, act: Activation, t) -> tuple[np.ndarray, np.ndarray]:
    """ values and d/dt, shapes as mlp_forward """
    if not act.is_smooth:
        raise UnsupportedActivation(act.value, "forward-mode derivative")
    ts, scalar = _as_batch(t)
    out, out_dot = _propagate(params, act, ts, True)
    return (out[0], out_dot[0]) if scalar else (out, out_dot)


def mlp_forward_dual(params: MLPParams, act: Activation, t: float) -> list[DualValue]:
    values, tangents = forward_with_tangent(params, act, float(t))
    return [DualValue(float(v), float(d)) for v, d in zip(values, tangents)]


def mlp_backprop(params: MLPParams, act: Activation, t, out_adjoint, tangent_adjoint) -> np.ndarray:
    """ flat gradient of sum(out_adjoint * y_hat(t) + tangent_adjoint * y_hat'(t)) over all times """
    if not act.is_smooth:
        raise UnsupportedActivation(act.value, "backprop of time derivative")
    ts, _ = _as_batch(t)
    shape = (len(ts), params.output_size)
    out_adjoint = np.asarray(out_adjoint, dtype=np.float64)
    tangent_adjoint = np.asarray(tangent_adjoint, dtype=np.float64)
    if out_adjoint.size != shape[0] * shape[1] or tangent_adjoint.size != shape[0] * shape[1]:
        raise ShapeError(F"got adjoints {out_adjoint.shape} and {tangent_adjoint.shape}, expected {shape}")
    tape = _Tape(list(), list(), list(), list(), list())
    _propagate(params, act, ts, True, tape)
    x_bar = out_adjoint.reshape(shape)
    x_dot_bar = tangent_adjoint.reshape(shape)
    grads: list[np.ndarray] = list()
    for i in reversed(range(len(params.layers))):
        w, _ = params.layers[i]
        d1 = tape.d1[i]
        z_dot_bar = d1 * x_dot_bar
        z_bar = d1 * x_bar + tape.d2[i] * tape.z_dot[i] * x_dot_bar
        g_w = z_bar.T @ tape.x[i] + z_dot_bar.T @ tape.x_dot[i]
        grads.append(np.concatenate((g_w.ravel(), z_bar.sum(axis=0))))
        x_bar = z_bar @ w
        x_dot_bar = z_dot_bar @ w
    return np.concatenate(grads[::-1])
