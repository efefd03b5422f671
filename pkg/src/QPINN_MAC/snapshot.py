""" Model snapshot: JSON document with explicit schema_version. Floats are written in shortest round-trip form so
load(save(model)) is bitwise equal """
from __future__ import annotations
from dataclasses import dataclass, field
import json
import logging
import numpy as np
from .enums import Activation, Coupling, ObservableKind
from .exceptions import ConfigurationError, SchemaVersionError
from .hybrid import HybridModel
from .classical.mlp import MLPParams
from .quantum.qnode import QNodeConfig, QNodeParams, ObservableSpec
from .version import SchemaVersion, SNAPSHOT_SCHEMA

logger = logging.getLogger(__name__)
logger.level = logging.INFO


@dataclass
class Snapshot:
    model: HybridModel
    problem: dict = field(default_factory=dict)
    """ name and overrides the model was trained on """


def model_to_dict(model: HybridModel) -> dict:
    return {
        "coupling": model.coupling.value,
        "activation": model.act.value,
        "qnode": {
            "num_qubits": model.qnode_config.num_qubits,
            "depth": model.qnode_config.depth,
            "phi": model.qnode_config.phi,
            "observable": model.obs.kind.value},
        "layers": None if model.mlp is None else [{"weight": w.tolist(), "bias": b.tolist()} for w, b in model.mlp.layers],
        "theta": [p.angles.tolist() for p in model.qnode_params]}


def model_from_dict(data: dict) -> HybridModel:
    try:
        q = data["qnode"]
        layers = data["layers"]
        return HybridModel(
            mlp=None if layers is None else MLPParams([(np.array(it["weight"], dtype=np.float64), np.array(it["bias"], dtype=np.float64)) for it in layers]),
            act=Activation(data["activation"]),
            qnode_config=QNodeConfig(int(q["num_qubits"]), int(q["depth"]), float(q["phi"])),
            qnode_params=[QNodeParams(np.array(a, dtype=np.float64)) for a in data["theta"]],
            obs=ObservableSpec(ObservableKind(q["observable"])),
            coupling=Coupling(data["coupling"]))
    except KeyError as e:
        raise ConfigurationError(F"missing key {e.args[0]!r}", "snapshot.model")


def dumps(snapshot: Snapshot) -> str:
    return json.dumps({
        "schema_version": str(SNAPSHOT_SCHEMA),
        "model": model_to_dict(snapshot.model),
        "problem": snapshot.problem}, indent=1)


def loads(text: str) -> Snapshot:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(F"not a JSON document: {e}", "solve.snapshot")
    if not isinstance(data, dict):
        raise ConfigurationError(F"got {type(data).__name__}, expected JSON object", "solve.snapshot")
    if "schema_version" not in data:
        raise ConfigurationError("missing schema_version", "snapshot.schema_version")
    try:
        found = SchemaVersion.from_str(data["schema_version"])
    except ValueError as e:
        raise ConfigurationError(str(e), "snapshot.schema_version")
    if not found.is_compatible(SNAPSHOT_SCHEMA):
        raise SchemaVersionError(found, SNAPSHOT_SCHEMA)
    if not isinstance(model := data.get("model"), dict):
        raise ConfigurationError("missing model object", "snapshot.model")
    return Snapshot(model_from_dict(model), data.get("problem") or dict())


def save(path: str, snapshot: Snapshot):
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(snapshot))
    logger.info(F"snapshot saved: {path}")


def load(path: str) -> Snapshot:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigurationError(F"can't read {path}: {e.strerror}", "solve.snapshot")
    return loads(text)
