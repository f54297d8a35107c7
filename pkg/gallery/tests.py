import json
import math
from unittest import skipUnless

import mpmath
import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from core.exceptions import ParamOutOfRange, UnknownEntry
from gallery.entries import (
    build,
    check_claims,
    compose,
    describe,
    list_entries,
    remark1_disk_check,
    remark1_zero_spacing,
    smoke,
    stopple_mu_sweep,
)
from polynomials.composer import PolynomialKind, classify
from zeta.engine import zeta


def mp(value) -> complex:
    return complex(value)


class BuildTests(SimpleTestCase):
    def test_catalogue(self):
        names = list_entries()
        for name in (
            "zeta",
            "zeta_derivative",
            "mu",
            "height_zeta",
            "G",
            "F_plus",
            "F_minus",
            "remark1_F",
            "exp_zeta",
            "laurincikas_combination",
            "zeta_minus_one_squared",
        ):
            self.assertIn(name, names)

    def test_every_entry_survives_smoke_evaluation(self):
        for name in list_entries():
            values = smoke(name)
            self.assertEqual(len(values), 3)

    def test_mu_at_two(self):
        expected = mp(mpmath.zeta(2) * mpmath.zeta(2, 1, 2) - mpmath.zeta(2, 1, 1) ** 2)
        self.assertAlmostEqual(abs(build("mu")(2.0) - expected), 0.0, places=9)

    def test_mu_pole_order(self):
        self.assertEqual(build("mu").poles, ((1 + 0j, 4),))

    def test_height_zeta_at_three(self):
        value = build("height_zeta", {"m": 1})(3.0)
        self.assertAlmostEqual(value.real, 4 * float(mpmath.zeta(2) / mpmath.zeta(3)), places=9)
        self.assertAlmostEqual(value.real, 5.4737, places=3)

    def test_height_zeta_matches_direct_form(self):
        f = build("height_zeta", {"m": 1})
        rng = np.random.default_rng(3)
        pts = rng.uniform(2.5, 4.0, 50) + 1j * rng.uniform(-30, 30, 50)
        direct = 4 * zeta(pts - 1) / zeta(pts)
        np.testing.assert_allclose(f.values(pts), direct, rtol=1e-10)

    def test_height_zeta_poles(self):
        self.assertEqual([loc for loc, _ in build("height_zeta", {"m": 3}).poles], [4 + 0j, 2 + 0j])
        self.assertEqual([loc for loc, _ in build("height_zeta", {"m": 2}).poles], [3 + 0j])

    def test_F_plus_at_four(self):
        expected = 3 + 2 * math.pi * float(mpmath.zeta(3) / mpmath.zeta(5))
        value = build("F_plus")(4.0)
        self.assertAlmostEqual(value.real, expected, places=9)
        self.assertAlmostEqual(value.real, 10.28, places=2)

    def test_F_conjugate_symmetry(self):
        rng = np.random.default_rng(11)
        pts = rng.uniform(-1, 3, 50) + 1j * rng.uniform(0.5, 40, 50)
        for name in ("F_plus", "F_minus"):
            f = build(name)
            upper, lower = f.values(pts), f.values(np.conj(pts))
            np.testing.assert_allclose(lower, np.conj(upper), rtol=1e-12, atol=1e-12)

    def test_G_validation(self):
        with self.assertRaises(ParamOutOfRange):
            build("G", {"C": 1 + 1j})
        with self.assertRaises(ParamOutOfRange):
            build("G", {"C": 9 + 9j})
        f = build("G", {"C": 1 + 1j, "strict": False})
        self.assertAlmostEqual(abs(f(2.0) - (math.pi**2 / 6 + 2 + 2j)), 0.0, places=10)

    def test_parameter_errors(self):
        with self.assertRaises(ParamOutOfRange):
            build("height_zeta", {"m": 7})
        with self.assertRaises(ParamOutOfRange):
            build("zeta", {"k": 2})
        with self.assertRaises(UnknownEntry):
            build("no_such_function")

    def test_composition_entries(self):
        self.assertEqual(classify(compose("mu").poly), PolynomialKind.NON_MONOMIAL)
        self.assertEqual(compose("zeta_derivative", {"k": 2}).poly.l, 2)
        with self.assertRaises(ParamOutOfRange):
            compose("F_plus")

    def test_laurincikas_combination(self):
        f = build("laurincikas_combination", {"coeffs": [2.0, -1.0, 0.5]})
        expected = mp(2 * mpmath.zeta(3) - mpmath.zeta(3, 1, 1) + 0.5 * mpmath.zeta(3, 1, 2))
        self.assertAlmostEqual(abs(f(3.0) - expected), 0.0, places=9)

    def test_describe_is_json(self):
        data = json.loads(json.dumps(describe("G")))
        self.assertEqual(data["name"], "G")
        self.assertEqual(data["parameters"]["C"], {"re": 8.0, "im": 8.0})
        self.assertEqual(data["claims"][0]["expected"], 0)


class RemarkOneTests(SimpleTestCase):
    def test_spacing(self):
        spacing = remark1_zero_spacing()
        self.assertAlmostEqual(spacing["spacing"], 0.3177, places=4)
        self.assertAlmostEqual(spacing["half_spacing"], 0.158867, places=6)

    def test_zero_at_center_without_shift(self):
        self.assertGreaterEqual(remark1_disk_check(0.0).count, 1)

    def test_half_spacing_shift(self):
        self.assertGreaterEqual(remark1_disk_check(remark1_zero_spacing()["half_spacing"]).count, 1)

    def test_random_shifts(self):
        rng = np.random.default_rng(5)
        for tau in rng.uniform(0, 100, 3):
            self.assertGreaterEqual(remark1_disk_check(float(tau)).count, 1)

    def test_radius_bounds(self):
        with self.assertRaises(ParamOutOfRange):
            remark1_disk_check(0.0, radius=0.15)
        with self.assertRaises(ParamOutOfRange):
            remark1_disk_check(0.0, radius=0.3)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_twenty_random_shifts(self):
        rng = np.random.default_rng(20)
        for tau in rng.uniform(0, 100, 20):
            self.assertGreaterEqual(remark1_disk_check(float(tau)).count, 1)


class ClaimTests(SimpleTestCase):
    def test_zeta_claim(self):
        (result,) = check_claims("zeta")
        self.assertTrue(result["holds"])

    def test_exp_zeta_has_no_zeros(self):
        (result,) = check_claims("exp_zeta")
        self.assertEqual(result["observed"], 0)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_G_claim(self):
        self.assertTrue(all(r["holds"] for r in check_claims("G")))

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_F_critical_line_claims(self):
        for name in ("F_plus", "F_minus"):
            self.assertTrue(all(r["holds"] for r in check_claims(name)), name)

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_zeta_minus_one_squared_has_double_zeros(self):
        self.assertTrue(all(r["holds"] for r in check_claims("zeta_minus_one_squared")))

    @skipUnless(settings.RUN_SLOW_CHECKS, "long acceptance run")
    def test_stopple_sweeps_report_slopes(self):
        sweeps = stopple_mu_sweep([50.0, 100.0])
        self.assertEqual(sorted(sweeps), [0.01, 0.05])
        for sweep in sweeps.values():
            self.assertIsNotNone(sweep.fit)
