import os
import unittest
from src.QPINN_MAC.enums import Activation, Mode, ModelKind, ObservableKind
from src.QPINN_MAC.exceptions import ConfigurationError, CatalogError
from src.QPINN_MAC.run_config import validate, load_run_config

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


class TestType(unittest.TestCase):
    def test_shipped_configs(self):
        for name in sorted(os.listdir(CONFIGS)):
            config = load_run_config(os.path.join(CONFIGS, name))
            print(name, config.mode)
        quickstart = load_run_config(os.path.join(CONFIGS, "exp_decay_quickstart.toml"))
        self.assertEqual(quickstart.mode, Mode.TRAIN)
        self.assertEqual(quickstart.build_problem().name, "exp_decay")
        self.assertEqual(quickstart.build_train_config().seed, quickstart.seed)
        baseline = load_run_config(os.path.join(CONFIGS, "mac_vs_global_baseline.toml"))
        self.assertEqual(baseline.build_sweep_config().model_kind, ModelKind.QUANTUM_ONLY_GLOBAL)

    def test_shipped_train_weights(self):
        for name in ("logistic.toml", "harmonic.toml"):
            config = load_run_config(os.path.join(CONFIGS, name))
            problem = config.build_problem()
            self.assertEqual(config.build_weights().w_ic, len(problem.collocation), F"{name}: initial condition weighted like the residual sum")
            self.assertLessEqual(config.train.epochs, 5000)
        self.assertEqual(load_run_config(os.path.join(CONFIGS, "logistic.toml")).model.activation, Activation.SIGMOID)
        self.assertEqual(load_run_config(os.path.join(CONFIGS, "harmonic.toml")).build_problem().dim, 2)

    def test_missing_problem_name(self):
        with self.assertRaises(ConfigurationError) as cm:
            validate({"mode": "train"})
        self.assertEqual(cm.exception.field, "problem.name")
        with self.assertRaises(ConfigurationError) as cm:
            validate({"mode": "train", "problem": {"lam": 2.0}})
        self.assertEqual(cm.exception.field, "problem.name")

    def test_strict_fields(self):
        with self.assertRaises(ConfigurationError) as cm:
            validate({"mode": "train", "problem": {"name": "exp_decay"}, "model": {"hiden": [4]}})
        self.assertEqual(cm.exception.field, "model.hiden", "misspelling is not a silent default")
        with self.assertRaises(ConfigurationError) as cm:
            validate({"mode": "train", "problem": {"name": "exp_decay"}, "train": {"epochs": 0}})
        self.assertEqual(cm.exception.field, "train.epochs")
        with self.assertRaises(ConfigurationError) as cm:
            validate({"mode": "train", "seed": 2 ** 64, "problem": {"name": "exp_decay"}})
        self.assertEqual(cm.exception.field, "seed")

    def test_model_kind(self):
        data = {"mode": "diagnose", "problem": {"name": "exp_decay"}, "sweep": {"qubit_range": [2], "depth_range": [1], "model_kind": "hybrid"}}
        with self.assertRaises(ConfigurationError) as cm:
            validate(data)
        self.assertEqual(cm.exception.field, "sweep.model_kind")
        for kind in ModelKind.get_values():
            self.assertIn(kind, str(cm.exception), "message names valid kinds")

    def test_modes(self):
        self.assertRaises(ConfigurationError, validate, {"mode": "diagnose", "problem": {"name": "exp_decay"}})
        self.assertRaises(ConfigurationError, validate, {"mode": "solve"})
        self.assertRaises(ConfigurationError, validate, {"mode": "train", "problem": {"name": "exp_decay"}, "model": {"activation": "relu"}})
        config = validate({"mode": "solve", "solve": {"snapshot": "model.json"}})
        self.assertEqual(config.solve.grid_num, 101)
        self.assertEqual(config.with_seed(5).seed, 5)
        self.assertIs(config.with_seed(None), config)

    def test_build(self):
        config = validate({"mode": "train", "problem": {"name": "harmonic", "omega": 2.0, "known_points": 3}, "loss": {"w_sol": 0.5}})
        problem = config.build_problem()
        self.assertEqual(problem.parameters, {"omega": 2.0})
        self.assertEqual(len(problem.known_solutions), 3)
        self.assertEqual(config.build_weights().w_sol, 0.5)
        self.assertRaises(CatalogError, validate({"mode": "train", "problem": {"name": "lorenz"}}).build_problem)
        with self.assertRaises(ConfigurationError) as cm:
            validate({"mode": "train", "problem": {"name": "logistic", "omega": 2.0}}).build_problem()
        self.assertEqual(cm.exception.field, "problem.omega")

    def test_sweep_observable(self):
        data = {"mode": "diagnose", "problem": {"name": "exp_decay"}, "model": {"observable": "z_global"}, "sweep": {"qubit_range": [2], "depth_range": [1]}}
        sweep = validate(data).build_sweep_config()
        self.assertEqual(sweep.model_kind, ModelKind.MAC)
        self.assertEqual(sweep.observable, ObservableKind.Z_GLOBAL, "model observable reaches the sweep")

    def test_bad_file(self):
        self.assertRaises(ConfigurationError, load_run_config, os.path.join(CONFIGS, "missing.toml"))
