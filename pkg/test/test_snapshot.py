import json
import os
import tempfile
import unittest
import numpy as np
from src.QPINN_MAC import snapshot
from src.QPINN_MAC.enums import Activation, Coupling, ObservableKind
from src.QPINN_MAC.exceptions import ConfigurationError, SchemaVersionError
from src.QPINN_MAC.hybrid import init_model, predict
from src.QPINN_MAC.quantum.qnode import QNodeConfig, ObservableSpec


class TestType(unittest.TestCase):
    def test_bitwise_round_trip(self):
        model = init_model((5, 4), 2, Activation.TANH, QNodeConfig(3, 2, 1.234), ObservableSpec(), np.random.default_rng(11))
        loaded = snapshot.loads(snapshot.dumps(snapshot.Snapshot(model, {"name": "harmonic", "overrides": {"omega": 2.0}})))
        self.assertTrue(np.array_equal(loaded.model.classical_vector(), model.classical_vector()), "network")
        self.assertTrue(np.array_equal(loaded.model.quantum_array(), model.quantum_array()), "angles")
        self.assertEqual(loaded.model.qnode_config, model.qnode_config)
        self.assertEqual(loaded.problem["overrides"], {"omega": 2.0})
        ts = np.linspace(0, 1, 5)
        self.assertTrue(np.array_equal(predict(loaded.model, ts), predict(model, ts)), "solve before and after round trip")

    def test_quantum_only(self):
        model = init_model((), 1, Activation.TANH, QNodeConfig(2, 1), ObservableSpec(ObservableKind.Z_GLOBAL), np.random.default_rng(1), Coupling.QUANTUM_ONLY)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "model.json")
            snapshot.save(path, snapshot.Snapshot(model))
            loaded = snapshot.load(path)
        self.assertIsNone(loaded.model.mlp)
        self.assertEqual(loaded.model.obs.kind, ObservableKind.Z_GLOBAL)
        self.assertEqual(loaded.problem, dict())

    def test_schema(self):
        model = init_model((2, ), 1, Activation.SIGMOID, QNodeConfig(1, 1), ObservableSpec(), np.random.default_rng(2))
        data = json.loads(snapshot.dumps(snapshot.Snapshot(model)))
        self.assertEqual(data["schema_version"], "1.0")
        data["schema_version"] = "2.0"
        with self.assertRaises(SchemaVersionError) as cm:
            snapshot.loads(json.dumps(data))
        print(cm.exception)
        data["schema_version"] = "1.0"
        del data["model"]["theta"]
        self.assertRaises(ConfigurationError, snapshot.loads, json.dumps(data))
        del data["schema_version"]
        self.assertRaises(ConfigurationError, snapshot.loads, json.dumps(data))
        for text in ("{not json", "[1, 2]", json.dumps({"schema_version": "1.x"}), json.dumps({"schema_version": "1.0"})):
            self.assertRaises(ConfigurationError, snapshot.loads, text)
        with tempfile.TemporaryDirectory() as tmp:
            self.assertRaises(ConfigurationError, snapshot.load, os.path.join(tmp, "absent.json"))
