"""
Gallery of concrete zeta-type functions

Each entry knows how to build an AnalyticFunction (with its poles
declared), what zero behaviour to expect, and a list of claims that
`check_claims` can verify with the counting engine.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.exceptions import BoundaryZero, NumericalError, ParamOutOfRange, UnknownEntry
from core.utils.analytic import AnalyticFunction
from core.utils.contour import ZeroReport, argument_change_count, count_zeros_disk, count_zeros_rect
from core.utils.geometry import ComplexRect, Disk
from core.utils.localize import localize_zeros
from core.utils.numerics import setting
from counting.density import DensitySweep, density_sweep
from dirichlet.series import GeneralDirichletSeries, constant_series, ring_add, ring_neg, single_term, unit_series
from polynomials.composer import ComposedFunction, as_analytic, constant_polynomial, variable
from zeta.engine import ZETA_DOMAIN, em_values, reciprocal_values, zeta_function

logger = logging.getLogger(__name__)

REFERENCE_POINTS = (2.5 + 1.0j, 3.0 + 7.0j, 0.75 + 10.0j)
LOG9 = math.log(9)


@dataclass(frozen=True)
class Claim:
    """kind is count, argument_change_positive or multiplicity"""

    kind: str
    region: ComplexRect
    expected: Optional[int] = None
    text: str = ""


@dataclass(frozen=True)
class GalleryEntry:
    name: str
    parameters: Dict[str, Any]
    builder: Callable[..., AnalyticFunction]
    expectation: str
    claims: Callable[[dict], Sequence[Claim]] = lambda params: ()
    composer: Optional[Callable[..., ComposedFunction]] = None

    def to_dict(self) -> dict:
        from gallery.serializers import GalleryEntrySerializer

        return dict(GalleryEntrySerializer(self).data)


def _zeta_composition(poly, label: str) -> ComposedFunction:
    return ComposedFunction(poly, zeta_function(), label=label)


# Polynomial compositions over zeta


def compose_zeta(k: int = 0) -> ComposedFunction:
    if not 0 <= k < setting("poly.max_vars"):
        raise ParamOutOfRange(f"derivative order k={k} outside [0, {setting('poly.max_vars') - 1}]")
    return _zeta_composition(variable(k), "zeta" if k == 0 else f"zeta^({k})")


def compose_mu() -> ComposedFunction:
    P = variable(0, 3) * variable(2, 3) - variable(1, 3) ** 2
    return _zeta_composition(P, "mu")


def compose_laurincikas(coeffs: Sequence[complex] = (1.0, 1.0)) -> ComposedFunction:
    coeffs = [complex(a) for a in coeffs]
    if not coeffs or not any(coeffs):
        raise ParamOutOfRange("at least one nonzero coefficient is needed")
    n = len(coeffs)
    P = None
    for k, a in enumerate(coeffs):
        if a:
            term = variable(k, n).scaled(constant_series(a))
            P = term if P is None else P + term
    return _zeta_composition(P, "laurincikas_combination")


def compose_zeta_minus_one_squared() -> ComposedFunction:
    return _zeta_composition((variable(0) - constant_polynomial(1.0)) ** 2, "(zeta-1)^2")


def remark1_coefficient() -> GeneralDirichletSeries:
    """1 - 9^(9(s - 3/4)) as a two-term series with a negative exponent"""
    return ring_add(unit_series(), ring_neg(single_term(9.0 ** (-27 / 4), -9 * LOG9)))


def compose_remark1() -> ComposedFunction:
    P = variable(0).scaled(remark1_coefficient()) + constant_polynomial(2.0)
    return _zeta_composition(P, "remark1_F")


# Direct handles


def build_height_zeta(m: int = 1) -> AnalyticFunction:
    """
    Height zeta of projective m-space over Q:
    (1/zeta(s)) sum_{n=0}^{[m/2]} C(m+1, 2n+1) 2^(m-2n) zeta(s - m + 2n)
    """
    if int(m) != m or not 1 <= m <= setting("gallery.max_height_m"):
        raise ParamOutOfRange(f"m must be an integer in [1, {setting('gallery.max_height_m')}], got {m}")
    m = int(m)
    terms = [(math.comb(m + 1, 2 * n + 1) * 2 ** (m - 2 * n), m - 2 * n) for n in range(m // 2 + 1)]

    def evaluator(pts):
        total = sum(c * em_values(pts - shift) for c, shift in terms)
        return reciprocal_values(pts) * total

    # zeta(s - m + 2n) has its pole at s = m + 1 - 2n; at s = 1 it cancels against 1/zeta(s)
    poles = tuple((float(shift + 1), 1) for _, shift in terms if shift != 0)
    return AnalyticFunction(
        evaluator=evaluator,
        name=f"Z_{m}",
        poles=poles,
        domain=ZETA_DOMAIN,
        metadata={"m": m, "terms": terms, "validated_window": (m - 0.5, float(m)) if m >= 2 else None},
    )


def build_G(C: complex = 8 + 8j, strict: bool = True) -> AnalyticFunction:
    """zeta(s) + C s, zero-free for sigma > 1/18 when |C| > 10 and -19/2 <= Re C <= 17/2"""
    C = complex(C)
    if not (abs(C) > 10 and -9.5 <= C.real <= 8.5):
        message = f"C = {C} violates |C| > 10, -19/2 <= Re C <= 17/2"
        if strict:
            raise ParamOutOfRange(message)
        logger.warning(f"{message}; the zero-free claim does not apply")

    def derivative(pts, k):
        return em_values(pts, k) + (C if k == 1 else 0)

    return AnalyticFunction(
        evaluator=lambda pts: em_values(pts) + C * pts,
        name=f"G[{C:g}]",
        max_derivative_order=64,
        poles=((1.0, 1),),
        domain=ZETA_DOMAIN,
        derivative=derivative,
        metadata={"C": C},
    )


def build_F(sign: int = 1) -> AnalyticFunction:
    """F(s) = s - 1 + sign * 2 pi zeta(s - 1) / zeta(s + 1)"""
    if sign not in (1, -1):
        raise ParamOutOfRange(f"sign must be +1 or -1, got {sign}")

    def evaluator(pts):
        return pts - 1 + sign * 2 * np.pi * em_values(pts - 1) * reciprocal_values(pts + 1)

    return AnalyticFunction(
        evaluator=evaluator,
        name="F_plus" if sign > 0 else "F_minus",
        poles=((2.0, 1),),
        domain=ZETA_DOMAIN,
        metadata={"sign": sign},
    )


def build_exp_zeta() -> AnalyticFunction:
    """exp(zeta(s)); the essential singularity at s = 1 is not a pole and is left undeclared"""
    return AnalyticFunction(
        evaluator=lambda pts: np.exp(em_values(pts)),
        name="exp(zeta)",
        max_derivative_order=1,
        domain=ZETA_DOMAIN,
        derivative=lambda pts, k: np.exp(em_values(pts)) * em_values(pts, 1),
        metadata={"essential_singularity": 1.0},
    )


def _from_composer(composer):
    def builder(**params):
        return as_analytic(composer(**params))

    return builder


def _F_claims(params):
    return (
        Claim("count", ComplexRect(0.55, 1.45, 0.0, 50.0), 0, "no zeros right of the critical line"),
        Claim("count", ComplexRect(-0.45, 0.45, 0.0, 50.0), 0, "no zeros left of the critical line"),
        Claim("argument_change_positive", ComplexRect(0.45, 0.55, 0.0, 50.0), None, "zeros on the critical line"),
    )


ENTRIES: Dict[str, GalleryEntry] = {}


def register(entry: GalleryEntry) -> GalleryEntry:
    ENTRIES[entry.name] = entry
    return entry


register(
    GalleryEntry(
        name="zeta",
        parameters={},
        builder=_from_composer(lambda: compose_zeta(0)),
        composer=lambda: compose_zeta(0),
        expectation="Riemann zeta; pole of order 1 at s=1; no zeros in 1/2 < sigma < 1 at desk heights.",
        claims=lambda p: (Claim("count", ComplexRect(0.51, 0.99, 0.0, 50.0), 0, "zero-free right of 1/2"),),
    )
)
register(
    GalleryEntry(
        name="zeta_derivative",
        parameters={"k": 1},
        builder=_from_composer(compose_zeta),
        composer=compose_zeta,
        expectation="zeta^(k); pole of order k+1 at s=1; for k=1 no zeros in 0 < sigma < 1/2 (Speiser).",
        claims=lambda p: (
            (Claim("count", ComplexRect(0.0, 0.5, 0.0, 50.0), 0, "Speiser zone is empty"),) if p.get("k") == 1 else ()
        ),
    )
)
register(
    GalleryEntry(
        name="mu",
        parameters={},
        builder=_from_composer(compose_mu),
        composer=compose_mu,
        expectation="zeta zeta'' - zeta'^2; pole of order 4 at s=1; zero counts in sigma > 5/6 + delta grow at most linearly.",
    )
)
register(
    GalleryEntry(
        name="height_zeta",
        parameters={"m": 1},
        builder=build_height_zeta,
        expectation="Height zeta of P^m(Q); simple poles at s = m+1-2n; no spurious poles in m-1/2 < sigma < m.",
    )
)
register(
    GalleryEntry(
        name="G",
        parameters={"C": 8 + 8j, "strict": True},
        builder=build_G,
        expectation="zeta(s) + C s; nonvanishing for sigma > 1/18 when |C| > 10 and -19/2 <= Re C <= 17/2.",
        claims=lambda p: (Claim("count", ComplexRect(0.2, 2.0, 0.5, 200.0), 0, "zero-free half-plane above the pole"),),
    )
)
register(
    GalleryEntry(
        name="F_plus",
        parameters={},
        builder=lambda: build_F(1),
        expectation="s - 1 + 2 pi zeta(s-1)/zeta(s+1); pole at s=2; all nontrivial zeros on sigma = 1/2.",
        claims=_F_claims,
    )
)
register(
    GalleryEntry(
        name="F_minus",
        parameters={},
        builder=lambda: build_F(-1),
        expectation="s - 1 - 2 pi zeta(s-1)/zeta(s+1); pole at s=2; all nontrivial zeros on sigma = 1/2.",
        claims=_F_claims,
    )
)
register(
    GalleryEntry(
        name="remark1_F",
        parameters={},
        builder=_from_composer(compose_remark1),
        composer=compose_remark1,
        expectation="(1 - 9^(9(s-3/4))) zeta(s) + 2; every shift F(s+i tau) - 2 has a zero in |s - 3/4| < 0.2.",
    )
)
register(
    GalleryEntry(
        name="exp_zeta",
        parameters={},
        builder=build_exp_zeta,
        expectation="exp(zeta(s)); never zero, so no shift approximates a function with a zero.",
        claims=lambda p: (Claim("count", ComplexRect(0.55, 0.95, 0.0, 100.0), 0, "exp never vanishes"),),
    )
)
register(
    GalleryEntry(
        name="laurincikas_combination",
        parameters={"coeffs": [1.0, 1.0]},
        builder=_from_composer(compose_laurincikas),
        composer=compose_laurincikas,
        expectation="sum a_k zeta^(k)(s); a linear polynomial in the derivatives of zeta.",
    )
)
register(
    GalleryEntry(
        name="zeta_minus_one_squared",
        parameters={},
        builder=_from_composer(compose_zeta_minus_one_squared),
        composer=compose_zeta_minus_one_squared,
        expectation="(zeta(s) - 1)^2; a polynomial composition without simple zeros.",
        claims=lambda p: (Claim("multiplicity", ComplexRect(-1.0, 4.0, 1.0, 40.0), 2, "every zero is double"),),
    )
)


def get_entry(name: str) -> GalleryEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise UnknownEntry(f"no gallery entry named {name!r}; known: {', '.join(sorted(ENTRIES))}")


def _merged(entry: GalleryEntry, params: Optional[dict]) -> dict:
    params = dict(params or {})
    unknown = set(params) - set(entry.parameters)
    if unknown:
        raise ParamOutOfRange(f"{entry.name} takes no parameter(s) {', '.join(sorted(unknown))}")
    return {**entry.parameters, **params}


def build(name: str, params: Optional[dict] = None) -> AnalyticFunction:
    """
    Build a gallery function

    Args:
        name: Entry name (see list_entries)
        params: Overrides of the entry's default parameters

    Returns:
        AnalyticFunction with its poles declared

    Raises:
        UnknownEntry: no such entry
        ParamOutOfRange: unknown or invalid parameters
    """
    entry = get_entry(name)
    return entry.builder(**_merged(entry, params))


def compose(name: str, params: Optional[dict] = None) -> ComposedFunction:
    """The polynomial composition behind an entry, for entries that have one"""
    entry = get_entry(name)
    if entry.composer is None:
        raise ParamOutOfRange(f"{name} is not a polynomial composition over zeta")
    return entry.composer(**_merged(entry, params))


def list_entries() -> List[str]:
    return sorted(ENTRIES)


def describe(name: str) -> dict:
    return get_entry(name).to_dict()


def smoke(name: str, params: Optional[dict] = None) -> List[complex]:
    """Values at the reference points; raises NumericalError if any is not finite"""
    f = build(name, params)
    values = [complex(v) for v in f.values(np.array(REFERENCE_POINTS))]
    if not all(np.isfinite(v) for v in values):
        raise NumericalError(f"{name} is not finite at the reference points: {values}")
    return values


def _argument_change_with_perturbation(f, rect: ComplexRect) -> Tuple[int, float]:
    for delta in [0.0] + list(setting("contour.perturbations")):
        try:
            return argument_change_count(f, rect.expanded(delta) if delta else rect), delta
        except BoundaryZero:
            continue
    raise BoundaryZero(f"zero of {f.name} on the boundary of {rect} after all perturbations", region=rect)


def check_claims(name: str, params: Optional[dict] = None) -> List[dict]:
    """Verify every claim of an entry; each result records the observed value and a holds flag"""
    entry = get_entry(name)
    merged = _merged(entry, params)
    f = entry.builder(**merged)
    results = []
    for claim in entry.claims(merged):
        record = {"kind": claim.kind, "region": claim.region.to_dict(), "expected": claim.expected, "text": claim.text}
        if claim.kind == "count":
            report = count_zeros_rect(f, claim.region)
            record.update(observed=report.count, holds=report.count == claim.expected)
        elif claim.kind == "argument_change_positive":
            turns, delta = _argument_change_with_perturbation(f, claim.region)
            record.update(observed=turns, holds=turns > 0, adjustment=delta)
        elif claim.kind == "multiplicity":
            report = localize_zeros(f, claim.region)
            mults = [z.multiplicity for z in report.zeros]
            record.update(observed=mults, holds=report.resolved and all(m == claim.expected for m in mults))
        logger.info(f"{name}: claim {claim.text!r} holds={record['holds']}")
        results.append(record)
    return results


def remark1_zero_spacing() -> Dict[str, float]:
    """Spacing 2 pi / (9 log 9) of the zeros of 1 - 9^(9(s-3/4)) on sigma = 3/4, and half of it"""
    return {"spacing": 2 * math.pi / (9 * LOG9), "half_spacing": math.pi / math.log(9**9)}


def remark1_disk_check(tau: float, radius: Optional[float] = None) -> ZeroReport:
    """
    Zeros of (1 - 9^(9(s + i tau - 3/4))) zeta(s + i tau) in the disk |s - 3/4| < radius

    Args:
        tau: Vertical shift
        radius: Disk radius in (pi / log 9^9, 1/4)

    Returns:
        ZeroReport; count >= 1 for every tau
    """
    radius = setting("gallery.remark1_radius", radius)
    lower = remark1_zero_spacing()["half_spacing"]
    if not lower < radius < 0.25:
        raise ParamOutOfRange(f"radius must lie in ({lower:.6f}, 0.25), got {radius}")
    F = _zeta_composition(variable(0).scaled(remark1_coefficient()), "remark1_F-2").shifted(tau)
    report = count_zeros_disk(as_analytic(F, verify_poles=False), Disk(0.75, radius))
    logger.info(f"remark1 disk check at tau={tau:g}: {report.count} zeros")
    return report


def stopple_mu_sweep(
    T_grid: Sequence[float], deltas: Sequence[float] = (0.01, 0.05), workers: Optional[int] = None
) -> Dict[float, DensitySweep]:
    """Zero counts of mu in (5/6 + delta, 0.99) x (0, T); only slopes are reported"""
    mu = build("mu")
    return {delta: density_sweep(mu, (5 / 6 + delta, 0.99), T_grid, workers=workers) for delta in deltas}
