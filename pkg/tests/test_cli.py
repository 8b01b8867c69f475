"""
Tests for the command line interface
"""
import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, SEED_ENV, run


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        env = {k: v for k, v in os.environ.items() if k != SEED_ENV}
        patcher = mock.patch.dict(os.environ, env, clear=True)
        patcher.start()
        self.addCleanup(patcher.stop)

    def tearDown(self):
        shutil.rmtree(self.tmp, ignore_errors=True)

    def _run(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = run(list(argv))
        return code, out.getvalue(), err.getvalue()

    def _path(self, name):
        return os.path.join(self.tmp, name)

    def _json(self, name):
        with open(self._path(name), encoding="utf-8") as handle:
            return json.load(handle)

    def test_verify_coherent(self):
        code, _, err = self._run("verify", "--problem", "four_cell_downlink", "--scheme", "coherent",
                                 "--tau", "3", "--draws", "10", "--seed", "7", "--out", self._path("v.json"))
        self.assertEqual(code, EXIT_OK)
        doc = self._json("v.json")
        self.assertEqual(doc["sum_dof"], "8/3")
        self.assertTrue(doc["passed"])
        self.assertIn("[OK]", err)

    def test_verify_without_coherence_fails(self):
        code, out, err = self._run("verify", "--problem", "four_cell_downlink", "--scheme", "coherent",
                                   "--tau", "1", "--draws", "5", "--seed", "7")
        self.assertEqual(code, EXIT_FAILED)
        self.assertFalse(json.loads(out)["passed"])
        self.assertIn("b2, d2", err)

    def test_receiver_tau_override(self):
        code, _, _ = self._run("verify", "--problem", "four_cell_uplink", "--scheme", "coherent",
                               "--receiver-tau", "A=1,B=1,C=1,D=3", "--tau", "1", "--draws", "5",
                               "--seed", "3", "--out", self._path("u.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(self._json("u.json")["parameters"]["receiver_tau"]["D"], 3)

    def test_seed_from_environment(self):
        os.environ[SEED_ENV] = "4"
        code, out, _ = self._run("verify", "--problem", "four_cell_downlink", "--scheme", "iid",
                                 "--draws", "3")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["parameters"]["seed"], 4)

    def test_missing_seed(self):
        code, _, err = self._run("verify", "--problem", "four_cell_downlink", "--scheme", "iid")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn(SEED_ENV, err)

    def test_usage_errors(self):
        self.assertEqual(self._run("teleport")[0], EXIT_USAGE)
        self.assertEqual(self._run()[0], EXIT_USAGE)
        self.assertEqual(self._run("bound", "--problem", "hex:2x2")[0], EXIT_USAGE)
        self.assertEqual(self._run("bound", "--problem", self._path("absent.json"))[0], EXIT_USAGE)
        self.assertEqual(self._run("verify", "--problem", "four_cell_uplink", "--scheme", "coherent",
                                   "--receiver-tau", "D", "--seed", "1")[0], EXIT_USAGE)

    def test_malformed_problem_file(self):
        self.assertEqual(self._run("gen-topology", "--problem", "four_cell_downlink",
                                   "--out", self._path("p.json"))[0], EXIT_OK)
        doc = self._json("p.json")
        doc["messages"][0]["origin"] = ["A"]
        with open(self._path("bad.json"), "w", encoding="utf-8") as handle:
            json.dump(doc, handle)
        code, _, err = self._run("bound", "--problem", self._path("bad.json"))
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("messages[0].origin", err)

    def test_topology_file_round_trip(self):
        self.assertEqual(self._run("gen-topology", "--problem", "four_cell_downlink",
                                   "--out", self._path("p.json"))[0], EXIT_OK)
        code, out, _ = self._run("verify", "--problem", self._path("p.json"), "--scheme", "iid",
                                 "--draws", "3", "--seed", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["sum_dof"], "5/2")

    def test_scheme_file(self):
        self.assertEqual(self._run("build-scheme", "--problem", "four_cell_downlink", "--scheme", "coherent",
                                   "--out", self._path("s.json"))[0], EXIT_OK)
        code, out, _ = self._run("verify", "--problem", "four_cell_downlink", "--scheme", self._path("s.json"),
                                 "--tau", "3", "--draws", "3", "--seed", "2")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["sum_dof"], "8/3")

    def test_reuse_schedule(self):
        code, out, _ = self._run("build-scheme", "--problem", "linear:6", "--scheme", "aligned", "--schedule")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(json.loads(out))
        self.assertEqual(self._run("build-scheme", "--problem", "linear:6", "--scheme", "coherent",
                                   "--schedule")[0], EXIT_USAGE)

    def test_bound_and_orthogonal(self):
        code, out, _ = self._run("bound", "--problem", "four_cell_downlink")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["sum_bound"], "8/3")
        code, out, _ = self._run("orthogonal", "--problem", "four_cell_downlink", "--objective", "sum")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["value"], "2")

    def test_index_coding_commands(self):
        code, out, _ = self._run("half-dof", "--gic", "five_message")
        self.assertEqual(code, EXIT_OK)
        self.assertFalse(json.loads(out)["feasible"])
        code, out, _ = self._run("xor-check", "--gic", "macro_femto_gic")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["dof"], "4")
        self.assertEqual(self._run("xor-check", "--gic", "two_user", "--plan", "W1+W2")[0], EXIT_FAILED)
        self.assertEqual(self._run("xor-check", "--gic", "two_user")[0], EXIT_USAGE)

    def test_mappings(self):
        self.assertEqual(self._run("map-cb-gic", "--problem", "four_cell_merged",
                                   "--out", self._path("g.json"))[0], EXIT_OK)
        code, out, _ = self._run("map-gic-cb", "--gic", self._path("g.json"))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("transmitters", json.loads(out))

    def test_reciprocal(self):
        code, out, _ = self._run("reciprocal", "--problem", "four_cell_downlink")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(json.loads(out)["transmitters"]), 8)

    def test_simulate_csv(self):
        code, _, _ = self._run("simulate", "--problem", "four_cell_downlink", "--scheme", "iid",
                               "--snr", "30,40", "--draws", "2", "--seed", "1", "--out", self._path("r.csv"))
        self.assertEqual(code, EXIT_OK)
        with open(self._path("r.csv"), encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        self.assertEqual(lines[0], "snr_db,message_id,rate_bits_per_slot")
        self.assertEqual(len(lines), 1 + 2 * 9)


if __name__ == "__main__":
    unittest.main()
