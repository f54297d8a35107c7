"""
Celery tasks for zero counting
"""
import logging

from celery import shared_task

from core.exceptions import ZetaLabError
from core.utils.contour import count_zeros_rect
from core.utils.geometry import ComplexRect
from core.utils.localize import localize_zeros

logger = logging.getLogger(__name__)


@shared_task
def count_rectangle_task(expression, sigma_min, sigma_max, t_min, t_max, localize=False):
    """
    Count (optionally locate) the zeros of a composition in a rectangle

    Args:
        expression: Composition in the zetalab expression syntax
        sigma_min, sigma_max, t_min, t_max: Rectangle
        localize: Also locate the zeros

    Returns:
        dict: ZeroReport JSON, or an error record
    """
    from experiments.expressions import parse_expression
    from polynomials.composer import as_analytic

    try:
        f = as_analytic(parse_expression(expression))
        rect = ComplexRect(sigma_min, sigma_max, t_min, t_max)
        report = localize_zeros(f, rect) if localize else count_zeros_rect(f, rect)
        logger.info(f"Counted {report.count} zeros of {f.name} in {rect}")
        return {"t_max": t_max, **report.to_dict()}
    except ZetaLabError as exc:
        logger.error(f"Count task for {expression} up to T={t_max} failed: {exc}")
        return {"t_max": t_max, **exc.to_dict()}
