"""
Celery tasks for Rouche certificates
"""
import logging

from celery import shared_task

from core.exceptions import ZetaLabError
from core.utils.geometry import Disk

logger = logging.getLogger(__name__)


@shared_task
def certificate_task(expression, k, alpha_re, alpha_im, radius, tau, samples=None):
    """
    Certificate for the shift tau of a composition against A(s, alpha, k)

    Args:
        expression: Composition in the zetalab expression syntax
        k: Order of the monomial target
        alpha_re, alpha_im: Target zero (also the disk center)
        radius: Disk radius
        tau: Shift

    Returns:
        dict: Certificate JSON, or an error record
    """
    from experiments.expressions import parse_expression
    from rouche.scan import certify_shift
    from rouche.targets import aux_monomial_target

    try:
        alpha = complex(alpha_re, alpha_im)
        F = parse_expression(expression)
        cert = certify_shift(F, aux_monomial_target(alpha, k), Disk(alpha, radius), tau, samples)
        logger.info(f"Certificate task tau={tau:g}: pass={cert.passed}")
        return cert.to_dict()
    except ZetaLabError as exc:
        logger.error(f"Certificate task tau={tau:g} failed: {exc}")
        return {"tau": tau, **exc.to_dict()}
