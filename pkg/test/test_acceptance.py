""" end-to-end training and sweep checks, minutes of runtime """
import os
import tomllib
import unittest
import numpy as np
from src.QPINN_MAC import artifacts
from src.QPINN_MAC.diagnostics import SweepConfig, run_sweep, sample_gradient_stats, trainability_report
from src.QPINN_MAC.enums import ModelKind
from src.QPINN_MAC.pinn.problems import uniform_grid
from src.QPINN_MAC.pinn.trainer import train
from src.QPINN_MAC.run_config import load_run_config

HERE = os.path.dirname(__file__)
CONFIGS = os.path.join(HERE, "..", "configs")
with open(os.path.join(HERE, "fixtures", "acceptance.toml"), "rb") as f:
    LIMITS = tomllib.load(f)


@unittest.skipUnless(os.environ.get("QPINN_SLOW") == "1", "set QPINN_SLOW=1")
class TestType(unittest.TestCase):
    def check_training(self, config_name: str):
        config = load_run_config(os.path.join(CONFIGS, config_name))
        problem = config.build_problem()
        model = config.build_model(problem.dim, np.random.default_rng(config.seed))
        result = train(model, problem, config.build_weights(), config.build_train_config())
        solution = artifacts.solve(result.model, uniform_grid(problem.t0, problem.t_end, LIMITS["train"]["grid_points"]), problem)
        print(config_name, result.trace.final.loss, solution.max_abs_error())
        self.assertLessEqual(solution.max_abs_error(), LIMITS["train"][problem.name], problem.name)

    def test_exp_decay(self):
        self.check_training("exp_decay_quickstart.toml")

    def test_logistic(self):
        self.check_training("logistic.toml")

    def test_harmonic(self):
        self.check_training("harmonic.toml")

    def test_plateau_mitigation(self):
        limits = LIMITS["sweep"]
        mac = run_sweep(load_run_config(os.path.join(CONFIGS, "mac_vs_global_mac.toml")).build_sweep_config())
        baseline = run_sweep(load_run_config(os.path.join(CONFIGS, "mac_vs_global_baseline.toml")).build_sweep_config())
        print(F"slope vs N: mac={mac.primary_slope_vs_n} baseline={baseline.primary_slope_vs_n}")
        self.assertGreater(mac.primary_slope_vs_n, baseline.primary_slope_vs_n)
        self.assertGreaterEqual(mac.primary_slope_vs_n, limits["mac_slope_min"])
        self.assertLessEqual(baseline.primary_slope_vs_n, limits["baseline_slope_max"])
        verdict = trainability_report(mac, limits["eps_grad"])
        measured = [(c.n_qubits, c.depth) for c in mac.cells if c.median_abs_norm >= limits["eps_grad"]]
        self.assertEqual(verdict.trainable_cells, measured)
        self.assertLessEqual(len(verdict.misclassified), limits["max_misclassified"])

    def test_global_variance_reference(self):
        """ small-R estimate against an independent R=10000 run, within 3 standard errors of the difference """
        def standard_error(x: np.ndarray) -> float:
            r = len(x)
            m4 = np.mean((x - np.mean(x)) ** 4)
            return float(np.sqrt((m4 - np.var(x, ddof=1) ** 2 * (r - 3) / (r - 1)) / r))

        params = dict(qubit_range=(2, ), depth_range=(3, ), model_kind=ModelKind.QUANTUM_ONLY_GLOBAL, hidden=(3, ), workers=4)
        small = sample_gradient_stats((2, 3), SweepConfig(samples=200, seed=11, **params))
        reference = sample_gradient_stats((2, 3), SweepConfig(samples=10000, seed=12, **params))
        bound = 3.0 * np.hypot(standard_error(small.component_samples), standard_error(reference.component_samples))
        print(F"variance: R=200 {small.var_component:.6e}, R=10000 {reference.var_component:.6e}, bound {bound:.3e}")
        self.assertLessEqual(abs(small.var_component - reference.var_component), bound)
