# Contour machinery shared by all zetalab apps
from .analytic import AnalyticFunction, constant, from_callable, polynomial_from_roots
from .cauchy import cauchy_derivative, derivative_error_bound
from .contour import (
    LocalizedZero,
    ZeroReport,
    argument_change_count,
    count_zeros_disk,
    count_zeros_rect,
    winding_number,
)
from .geometry import ComplexRect, Disk
from .localize import localize_zeros
from .parallel import ParallelMap, pairwise_sum

__all__ = [
    'AnalyticFunction',
    'constant',
    'from_callable',
    'polynomial_from_roots',
    'cauchy_derivative',
    'derivative_error_bound',
    'LocalizedZero',
    'ZeroReport',
    'argument_change_count',
    'count_zeros_disk',
    'count_zeros_rect',
    'winding_number',
    'ComplexRect',
    'Disk',
    'localize_zeros',
    'ParallelMap',
    'pairwise_sum',
]
