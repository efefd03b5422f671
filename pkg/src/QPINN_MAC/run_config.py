""" Run configuration for the command line: TOML (or JSON by suffix) validated by a strict schema. Unknown fields
are rejected, errors carry the dotted field path """
from __future__ import annotations
import json
import os
import tomllib
from typing import Annotated, Any
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from .config_parser import get_value
from .enums import Activation, Coupling, Mode, ModelKind, ObservableKind, OptimizerKind, ProbeLoss, ProbeNorm
from .exceptions import ConfigurationError
from .hybrid import HybridModel, init_model
from .diagnostics import SweepConfig
from .pinn.loss import LossWeights
from .pinn.problems import ODEProblem, get_problem
from .pinn.trainer import TrainConfig
from .quantum.qnode import QNodeConfig, ObservableSpec, DEFAULT_PHI

Seed = Annotated[int, Field(ge=0, lt=2 ** 64)]
PositiveInt = Annotated[int, Field(ge=1)]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ProblemSection(_Section):
    name: str
    lam: float | None = None
    omega: float | None = None
    t0: float | None = None
    t_end: float | None = None
    num_points: PositiveInt | None = None
    known_points: Annotated[int, Field(ge=0)] = 0

    def overrides(self) -> dict:
        return self.model_dump(exclude={"name", "known_points"}, exclude_none=True)


class ModelSection(_Section):
    hidden: list[PositiveInt] = Field(default_factory=lambda: list(get_value("mlp", "hidden", default=[16, 16])))
    activation: Activation = Activation(get_value("mlp", "activation", default="tanh"))
    num_qubits: PositiveInt = 4
    depth: PositiveInt = 3
    phi: Annotated[float, Field(ge=0.0, le=2 * np.pi)] = DEFAULT_PHI
    observable: ObservableKind = ObservableKind(get_value("qnode", "observable", default="z_sum"))
    coupling: Coupling = Coupling.MAC


class LossSection(_Section):
    w_ic: Annotated[float, Field(ge=0.0)] = LossWeights.w_ic
    w_ode: Annotated[float, Field(ge=0.0)] = LossWeights.w_ode
    w_sol: Annotated[float, Field(ge=0.0)] = LossWeights.w_sol


class TrainSection(_Section):
    optimizer: OptimizerKind = TrainConfig.optimizer
    learning_rate: Annotated[float, Field(ge=0.0)] = TrainConfig.learning_rate
    beta1: Annotated[float, Field(ge=0.0, lt=1.0)] = TrainConfig.beta1
    beta2: Annotated[float, Field(ge=0.0, lt=1.0)] = TrainConfig.beta2
    epsilon: Annotated[float, Field(gt=0.0)] = TrainConfig.epsilon
    epochs: PositiveInt = TrainConfig.epochs
    log_every: PositiveInt = TrainConfig.log_every


class SweepSection(_Section):
    qubit_range: list[PositiveInt]
    depth_range: list[PositiveInt]
    samples: Annotated[int, Field(ge=2)] = SweepConfig.samples
    eps_grad: Annotated[float, Field(ge=0.0)] = SweepConfig.eps_grad
    model_kind: ModelKind = ModelKind.MAC
    t_probe: list[float] = Field(default_factory=lambda: list(SweepConfig.t_probe))
    component: tuple[int, int] = (0, 0)
    loss: ProbeLoss = ProbeLoss.PHYSICS
    probe_norm: ProbeNorm = ProbeNorm.MAX
    p: Annotated[float, Field(ge=1.0)] = SweepConfig.p
    workers: PositiveInt = 1


class SolveSection(_Section):
    snapshot: str
    grid_start: float | None = None
    """ None is t0 of the snapshot problem """
    grid_stop: float | None = None
    grid_num: PositiveInt = 101


class RunConfig(_Section):
    mode: Mode
    seed: Seed = 0
    out: str | None = None
    problem: ProblemSection | None = None
    model: ModelSection = Field(default_factory=ModelSection)
    loss: LossSection = Field(default_factory=LossSection)
    train: TrainSection = Field(default_factory=TrainSection)
    sweep: SweepSection | None = None
    solve: SolveSection | None = None

    def check_mode(self):
        """ mode specific sections """
        match self.mode:
            case Mode.TRAIN | Mode.DIAGNOSE if self.problem is None:
                raise ConfigurationError("missing problem name", "problem.name")
            case Mode.DIAGNOSE if self.sweep is None:
                raise ConfigurationError("diagnose needs a [sweep] section", "sweep")
            case Mode.SOLVE if self.solve is None:
                raise ConfigurationError("solve needs a [solve] section", "solve.snapshot")
        if self.model.activation == Activation.RELU and self.mode != Mode.SOLVE:
            raise ConfigurationError("relu is not smooth, physics-informed loss needs tanh or sigmoid", "model.activation")

    def with_seed(self, seed: int | None) -> RunConfig:
        if seed is None:
            return self
        return validate({**self.model_dump(mode="json"), "seed": seed})

    def build_problem(self) -> ODEProblem:
        return get_problem(self.problem.name, known_points=self.problem.known_points, **self.problem.overrides())

    def build_weights(self) -> LossWeights:
        return LossWeights(**self.loss.model_dump())

    def build_train_config(self) -> TrainConfig:
        return TrainConfig(seed=self.seed, **self.train.model_dump())

    def build_model(self, dim: int, rng: np.random.Generator) -> HybridModel:
        return init_model(
            hidden=self.model.hidden,
            dim=dim,
            act=self.model.activation,
            qnode_config=QNodeConfig(self.model.num_qubits, self.model.depth, self.model.phi),
            obs=ObservableSpec(self.model.observable),
            rng=rng,
            coupling=self.model.coupling)

    def build_sweep_config(self) -> SweepConfig:
        s = self.sweep
        return SweepConfig(
            qubit_range=tuple(s.qubit_range),
            depth_range=tuple(s.depth_range),
            samples=s.samples,
            seed=self.seed,
            eps_grad=s.eps_grad,
            model_kind=s.model_kind,
            problem=self.problem.name,
            t_probe=tuple(s.t_probe),
            component=s.component,
            hidden=tuple(self.model.hidden),
            activation=self.model.activation,
            observable=self.model.observable,
            phi=self.model.phi,
            loss=s.loss,
            probe_norm=s.probe_norm,
            p=s.p,
            weights=self.build_weights(),
            problem_overrides=self.problem.overrides(),
            workers=s.workers)


def _field_path(error: dict[str, Any]) -> str:
    """ drop pydantic union/enum tags, keep field names and list indexes """
    return ".".join(str(it) for it in error["loc"] if not (isinstance(it, str) and ("[" in it or it.startswith("function-"))))


def validate(data: dict) -> RunConfig:
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigurationError(first["msg"], _field_path(first))
    config.check_mode()
    return config


def load_run_config(path: str) -> RunConfig:
    if not os.path.isfile(path):
        raise ConfigurationError(F"no such file {path}", "--config")
    with open(path, "rb") as f:
        try:
            if path.lower().endswith(".json"):
                data = json.load(f)
            else:
                data = tomllib.load(f)
        except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
            raise ConfigurationError(F"can't parse {path}: {e}", "--config")
    return validate(data)
