import io
import json
import math
import os
import tempfile
from unittest import skipUnless

import numpy as np
import pandas as pd
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from core.exceptions import DegreeCapExceeded, ParamOutOfRange, ParseError
from dirichlet.series import GeneralDirichletSeries, constant_series
from experiments.config import RunConfig, cast_numeric
from experiments.dispatch import parse_complex, parse_params
from experiments.expressions import parse_expression, parse_polynomial, print_polynomial
from experiments.models import ExperimentRun
from experiments.outputs import jsonable, write_csv
from experiments.recorder import RunRecorder
from gallery.entries import compose_mu
from polynomials.composer import DirichletPolynomial, PolynomialKind, classify, variable


def random_polynomial(rng, max_vars=3, max_terms=4) -> DirichletPolynomial:
    num_vars = int(rng.integers(1, max_vars + 1))
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        degree = tuple(int(d) for d in rng.integers(0, 3, size=num_vars))
        if sum(degree) > 3:
            continue
        a = complex(rng.normal(), rng.normal())
        if rng.random() < 0.5:
            terms[degree] = constant_series(a)
        else:
            b = complex(rng.normal(), rng.normal())
            terms[degree] = GeneralDirichletSeries.from_terms([(a, 0.0), (b, float(rng.uniform(0.1, 3.0)))])
    if not terms:
        terms[(0,) * num_vars] = constant_series(1.0)
    return DirichletPolynomial(num_vars, terms)


class ParseTests(SimpleTestCase):
    def test_mu_polynomial(self):
        P = parse_polynomial("D0*D2 - D1^2")
        self.assertTrue(P.structurally_equal(compose_mu().poly))
        self.assertEqual(classify(P), PolynomialKind.NON_MONOMIAL)

    def test_identity(self):
        F = parse_expression("D0")
        self.assertTrue(F.poly.structurally_equal(variable(0)))
        self.assertEqual(F.base.name, "zeta")

    def test_two_term_polynomial(self):
        P = parse_polynomial("D1 + (2+0i)*D0^3")
        self.assertEqual(classify(P), PolynomialKind.NON_MONOMIAL)
        self.assertEqual(sorted(P.terms), [(0, 1), (3, 0)])
        self.assertEqual(P.terms[(3, 0)].constant_value(), 2)

    def test_variable_spellings(self):
        for text in ("zeta''", "D{2}", "D2"):
            self.assertTrue(parse_polynomial(text).structurally_equal(variable(2)), text)

    def test_series_and_exp(self):
        P = parse_polynomial("series{1, 1; shift=1}*D0")
        coeff = P.terms[(1,)]
        self.assertAlmostEqual(abs(coeff.values(2.0)[0] - (1 + 2.0**-3)), 0.0, places=14)
        Q = parse_polynomial("exp{0.5}*D0 + 3i")
        self.assertAlmostEqual(abs(Q.terms[(1,)].values(2.0)[0] - math.exp(-1.0)), 0.0, places=14)
        self.assertEqual(Q.terms[(0,)].constant_value(), 3j)

    def test_parse_errors_carry_position(self):
        with self.assertRaises(ParseError) as ctx:
            parse_polynomial("D0 $ D1")
        self.assertEqual(ctx.exception.position, 3)
        for text in ("D0 +", "(D0", "D0^-1", "D0^1.5", "foo", "", "D0 - D0"):
            with self.assertRaises(ParseError, msg=text):
                parse_polynomial(text)

    def test_degree_caps(self):
        with self.assertRaises(DegreeCapExceeded):
            parse_polynomial("D0^9")
        with self.assertRaises(DegreeCapExceeded):
            parse_polynomial("D7")
        with self.assertRaises(DegreeCapExceeded):
            parse_polynomial("D0^5*D1^4")


class PrintTests(SimpleTestCase):
    def test_mu_prints_readably(self):
        self.assertEqual(print_polynomial(compose_mu().poly), "-D1^2 + D0*D2")

    def test_random_roundtrip(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            P = random_polynomial(rng)
            text = print_polynomial(P)
            self.assertTrue(P.structurally_equal(parse_polynomial(text)), text)


class ConfigTests(SimpleTestCase):
    def test_cast_numeric(self):
        self.assertEqual(cast_numeric("contour.initial_samples", "128"), 128)
        self.assertEqual(cast_numeric("contour.boundary_threshold", "1e-7"), 1e-7)
        self.assertEqual(cast_numeric("contour.perturbations", "1e-4, 2e-4"), [1e-4, 2e-4])
        self.assertIsNone(cast_numeric("zeta.truncation_N", "none"))
        with self.assertRaises(ParamOutOfRange):
            cast_numeric("contour.initial_samples", "many")
        with self.assertRaises(ParamOutOfRange):
            cast_numeric("no.such.key", "1")

    def test_layering(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.env")
            with open(path, "w") as handle:
                handle.write("# run settings\ncontour.initial_samples=128\ncounting.panel_tol=1e-8\nworkers=2\n")
            config = RunConfig.resolve(
                "count",
                config_file=path,
                assignments=["contour.initial_samples=32"],
                flags={"workers": 3, "seed": None},
            )
        self.assertEqual(config.numerics, {"contour.initial_samples": 32, "counting.panel_tol": 1e-8})
        self.assertEqual(config.workers, 3)
        self.assertEqual(config.seed, settings.ZETALAB_SEED)
        header = config.to_header()
        self.assertEqual(header["numerics"]["contour.initial_samples"], 32)
        self.assertEqual(header["numerics"]["cauchy.nodes"], settings.ZETALAB_NUMERICS["cauchy.nodes"])

    def test_record_from_config_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.env")
            with open(path, "w") as handle:
                handle.write("record=false\nworkers=2\n")
            config = RunConfig.resolve("count", config_file=path)
            self.assertFalse(config.record)
            self.assertEqual(config.numerics, {})
            self.assertTrue(RunConfig.resolve("count", config_file=path, flags={"record": True}).record)
        with self.assertRaises(ParamOutOfRange):
            RunConfig.resolve("count", assignments=["record=sometimes"])

    def test_invalid_run_values(self):
        with self.assertRaises(ParamOutOfRange):
            RunConfig.resolve("count", flags={"workers": 0})
        with self.assertRaises(ParamOutOfRange):
            RunConfig.resolve("count", assignments=["novalue"])


class ArgumentTests(SimpleTestCase):
    def test_parse_complex(self):
        self.assertEqual(parse_complex("2.5+1i"), 2.5 + 1j)
        self.assertEqual(parse_complex("(2+0i)"), 2)
        self.assertEqual(parse_complex("-i"), -1j)
        with self.assertRaises(ParseError):
            parse_complex("two")

    def test_parse_params(self):
        self.assertEqual(
            parse_params(["m=3", "C=8+8i", "strict=false", "coeffs=[1, 2]"]),
            {"m": 3, "C": 8 + 8j, "strict": False, "coeffs": [1, 2]},
        )


class OutputTests(SimpleTestCase):
    def test_jsonable(self):
        data = jsonable({"z": 1 + 2j, "x": np.float64(0.5), "bad": float("inf"), "n": np.int64(3)})
        self.assertEqual(data, {"z": {"re": 1.0, "im": 2.0}, "x": 0.5, "bad": None, "n": 3})

    def test_csv_keeps_header_as_comments(self):
        stream = io.StringIO()
        write_csv(stream, {"command": "sweep"}, pd.DataFrame({"T": [1.0, 2.0], "count": [0, 1]}))
        text = stream.getvalue()
        self.assertTrue(text.startswith('# command: "sweep"\n'))
        frame = pd.read_csv(io.StringIO(text), comment="#")
        self.assertEqual(list(frame["count"]), [0, 1])


class RecorderTests(TestCase):
    def test_success_and_failure(self):
        run = RunRecorder.start("count", {"params": {"rect": "0,1,0,1"}})
        RunRecorder.finish(run, summary={"count": 1}, output_path="out.json")
        run.refresh_from_db()
        self.assertEqual(run.status, "succeeded")
        self.assertEqual(run.exit_code, 0)
        self.assertIsNotNone(run.duration)

        failed = RunRecorder.fail(RunRecorder.start("eval", {}), 2, "ParseError: bad")
        failed.refresh_from_db()
        self.assertEqual(failed.status, "failed")
        self.assertEqual(failed.exit_code, 2)
        self.assertEqual([r.command for r in RunRecorder.recent()], ["eval", "count"])

    def test_closing_nothing(self):
        self.assertIsNone(RunRecorder.finish(None))


class CommandTests(TestCase):
    def zetalab(self, *args):
        out = io.StringIO()
        call_command("zetalab", *args, stdout=out)
        return json.loads(out.getvalue())

    def test_lemma_solve(self):
        result = self.zetalab("lemma-solve", "--jet", "2,3,5")
        b = [complex(x["re"], x["im"]) for x in result["data"]["b"]]
        np.testing.assert_allclose(b, [math.log(2), 1.5, 0.125], rtol=1e-14)
        self.assertEqual(result["config"]["command"], "lemma-solve")

    def test_theta_equation(self):
        result = self.zetalab("lemma-solve", "--expr", "D0 + D1", "--alpha", "0.75+2i")
        theta = result["data"]["theta"]
        self.assertAlmostEqual(theta[0]["re"], -1.0, places=10)
        self.assertLess(result["data"]["residual"], 1e-9)

    def test_gallery_list(self):
        result = self.zetalab("gallery", "list")
        self.assertIn("mu", result["data"]["entries"])
        self.assertIn("F_plus", result["data"]["entries"])

    def test_count(self):
        result = self.zetalab("count", "--expr", "zeta", "--rect", "0.4,0.6,10,20", "--localize")
        self.assertEqual(result["data"]["count"], 1)
        zero = result["data"]["zeros"][0]
        self.assertAlmostEqual(zero["im"], 14.134725, places=5)

    def test_runs_are_journaled(self):
        self.zetalab("eval", "--expr", "zeta", "--at", "2")
        self.zetalab("eval", "--expr", "zeta", "--at", "2", "--no-record")
        runs = ExperimentRun.objects.all()
        self.assertEqual(runs.count(), 1)
        self.assertEqual(runs[0].status, "succeeded")
        self.assertEqual(runs[0].config["params"]["at"], "2")

    def test_zero_arguments_are_kept(self):
        result = self.zetalab("eval", "--expr", "zeta", "--at", "2", "--derivative", "0")
        self.assertEqual(result["config"]["params"]["derivative"], 0)
        result = self.zetalab("rouche-demo", "--expr", "D1", "--alpha", "0.75+0.5i", "--radius", "0.1", "--tau", "0")
        self.assertEqual(result["config"]["params"]["tau"], 0.0)
        self.assertEqual(result["data"]["certificate"]["tau"], 0.0)

    def test_eval_matches_zeta_two(self):
        result = self.zetalab("eval", "--expr", "zeta", "--at", "2;4")
        values = result["data"]["values"]
        self.assertAlmostEqual(values[0]["re"], math.pi**2 / 6, places=12)
        self.assertAlmostEqual(values[1]["re"], math.pi**4 / 90, places=12)

    def test_exit_codes(self):
        with self.assertRaises(CommandError) as ctx:
            self.zetalab("count", "--expr", "D0 +", "--rect", "0,1,1,2")
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            self.zetalab("eval", "--expr", "zeta", "--set", "no.such.key=1")
        self.assertEqual(ctx.exception.returncode, 2)
        failed = ExperimentRun.objects.get(command="count")
        self.assertEqual(failed.exit_code, 2)

    def test_sweep_does_not_depend_on_workers(self):
        with tempfile.TemporaryDirectory() as tmp:
            outputs = []
            for workers in ("1", "2"):
                path = os.path.join(tmp, f"sweep{workers}.csv")
                call_command(
                    "zetalab",
                    "sweep",
                    "--expr",
                    "zeta",
                    "--strip",
                    "0.51,0.99",
                    "--T",
                    "20,30",
                    "--workers",
                    workers,
                    "--output",
                    path,
                    stdout=io.StringIO(),
                )
                with open(path) as handle:
                    outputs.append([line for line in handle if not line.startswith("#")])
        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(outputs[0][0].strip(), "T,count,slope_so_far,error")

    def test_tau_scan_streams_json_lines(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "scan.jsonl")
            call_command(
                "zetalab", "tau-scan", "--tau-range", "0,0.2", "--step", "0.1", "--output", path, stdout=io.StringIO()
            )
            with open(path) as handle:
                records = [json.loads(line) for line in handle]
        self.assertIn("config", records[0])
        self.assertEqual(records[0]["config"]["params"]["tau_range"], "0,0.2")
        self.assertEqual([r["tau"] for r in records[1:]], [0.0, 0.1, 0.2])
        self.assertTrue(all("pass" in r for r in records[1:]))

    def test_rouche_demo(self):
        result = self.zetalab("rouche-demo", "--expr", "D1", "--alpha", "0.75+0.5i", "--radius", "0.1")
        self.assertIn("pass", result["data"]["certificate"])
        self.assertEqual(result["data"]["certificate"]["tau"], 0.0)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_count_zeta_prime_strip(self):
        result = self.zetalab("count", "--expr", "D1", "--rect", "0.51,0.99,0,100")
        self.assertIn("count", result["data"])
