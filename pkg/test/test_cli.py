import contextlib
import io
import json
import os
import tempfile
import unittest
from src.QPINN_MAC.cli import main, EXIT_OK, EXIT_ERROR

TRAIN = """
mode = "train"
seed = 17

[problem]
name = "exp_decay"
num_points = 4

[model]
hidden = [3]
num_qubits = 2
depth = 1

[train]
epochs = 3
log_every = 1
"""

DIAGNOSE = """
mode = "diagnose"
seed = 5

[problem]
name = "exp_decay"
num_points = 4

[model]
hidden = [3]

[sweep]
qubit_range = [2]
depth_range = [1]
samples = 3
model_kind = "{kind}"
"""


def run(*argv: str) -> tuple[int, str]:
    err = io.StringIO()
    with contextlib.redirect_stderr(err), contextlib.redirect_stdout(io.StringIO()):
        code = main(list(argv))
    return code, err.getvalue()


def read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


class TestType(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name: str, text: str) -> str:
        path = os.path.join(self.dir, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_train_artifacts(self):
        config = self.write("train.toml", TRAIN)
        out = os.path.join(self.dir, "run1")
        code, err = run("train", "--config", config, "--out", out)
        self.assertEqual(code, EXIT_OK, err)
        trace = read(os.path.join(out, "trace.csv")).splitlines()
        self.assertEqual(trace[0], "epoch,loss_total,loss_ic,loss_ode,loss_sol,grad_norm_classical,grad_norm_quantum")
        self.assertEqual([row.split(",")[0] for row in trace[1:]], ["0", "1", "2", "3"])
        solution = read(os.path.join(out, "solution.csv")).splitlines()
        self.assertEqual(solution[0], "t,y_mac_1,y_ref_1,abs_err_1")
        self.assertEqual(len(solution), 102, "101-point grid")
        self.assertTrue(os.path.isfile(os.path.join(out, "model.json")))
        self.assertEqual(json.loads(read(os.path.join(out, "config.json")))["seed"], 17)
        # same seed, same bytes
        out2 = os.path.join(self.dir, "run2")
        self.assertEqual(run("train", "--config", config, "--out", out2)[0], EXIT_OK)
        for name in ("trace.csv", "solution.csv", "model.json"):
            self.assertEqual(read(os.path.join(out, name)), read(os.path.join(out2, name)), name)
        out3 = os.path.join(self.dir, "run3")
        self.assertEqual(run("train", "--config", config, "--out", out3, "--seed", "18")[0], EXIT_OK)
        self.assertNotEqual(read(os.path.join(out, "solution.csv")), read(os.path.join(out3, "solution.csv")), "seed override")

    def test_solve(self):
        out = os.path.join(self.dir, "train")
        self.assertEqual(run("train", "--config", self.write("train.toml", TRAIN), "--out", out)[0], EXIT_OK)
        snapshot = os.path.join(out, "model.json")
        solve = {"mode": "solve", "solve": {"snapshot": snapshot, "grid_start": 0.0, "grid_num": 1}}
        code, err = run("solve", "--config", self.write("one.json", json.dumps(solve)), "--out", os.path.join(self.dir, "one"))
        self.assertEqual(code, EXIT_OK, err)
        rows = read(os.path.join(self.dir, "one", "solution.csv")).splitlines()
        self.assertEqual(len(rows), 2, "one grid point")
        trained = read(os.path.join(out, "solution.csv")).splitlines()[1].split(",")
        for a, b in zip(rows[1].split(","), trained):
            self.assertAlmostEqual(float(a), float(b), 14, "same values as after training")
        solve["solve"].update(grid_stop=2.0, grid_num=5)
        self.assertEqual(run("solve", "--config", self.write("wide.json", json.dumps(solve)), "--out", os.path.join(self.dir, "wide"))[0], EXIT_OK)
        rows = read(os.path.join(self.dir, "wide", "solution.csv")).splitlines()
        self.assertTrue(rows[0].endswith(",extrapolated"))
        self.assertEqual([row.split(",")[-1] for row in rows[1:]], ["0", "0", "0", "1", "1"])

    def test_solve_schema_mismatch(self):
        out = os.path.join(self.dir, "train")
        self.assertEqual(run("train", "--config", self.write("train.toml", TRAIN), "--out", out)[0], EXIT_OK)
        data = json.loads(read(os.path.join(out, "model.json")))
        data["schema_version"] = "2.0"
        snapshot = self.write("old.json", json.dumps(data))
        code, err = run("solve", "--config", self.write("solve.json", json.dumps({"mode": "solve", "solve": {"snapshot": snapshot}})), "--out", self.dir)
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("migrate", err)

    def test_solve_unreadable_snapshot(self):
        cases = {
            "missing": os.path.join(self.dir, "absent.json"),
            "garbage": self.write("garbage.json", "{not json"),
            "version": self.write("version.json", json.dumps({"schema_version": "one", "model": {}})),
        }
        for name, snapshot in cases.items():
            config = self.write(F"{name}.json", json.dumps({"mode": "solve", "solve": {"snapshot": snapshot}}))
            code, err = run("solve", "--config", config, "--out", self.dir)
            self.assertEqual(code, EXIT_ERROR, name)
            self.assertTrue(err.startswith("error ["), name)
            self.assertIn("snapshot", err, name)

    def test_invalid_config(self):
        code, err = run("train", "--config", self.write("bad.toml", "mode = \"train\"\n[problem]\nlam = 2.0\n"), "--out", self.dir)
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("problem.name", err)
        code, err = run("diagnose", "--config", self.write("kind.toml", DIAGNOSE.format(kind="hybrid")), "--out", self.dir)
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("quantum_only_global", err, "names valid kinds")
        code, err = run("solve", "--config", self.write("train.toml", TRAIN), "--out", self.dir)
        self.assertEqual(code, EXIT_ERROR, "mode mismatch")

    def test_diagnose(self):
        for kind in ("mac", "quantum_only_global"):
            out = os.path.join(self.dir, kind)
            code, err = run("diagnose", "--config", self.write(F"{kind}.toml", DIAGNOSE.format(kind=kind)), "--out", out)
            self.assertEqual(code, EXIT_OK, err)
            rows = read(os.path.join(out, "sweep.csv")).splitlines()
            self.assertEqual(rows[0], "n_qubits,depth,sample_count,var_component,mean_component,median_abs_norm,max_norm")
            self.assertEqual(len(rows), 2, "single cell")
            self.assertIn(F"model_kind = \"{kind}\"", read(os.path.join(out, "summary.toml")))
