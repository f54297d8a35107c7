"""
Ordered parallel map over a process pool, and deterministic reductions
"""
import logging
import multiprocessing
from typing import Callable, Iterable, Iterator, List, Optional, Sequence

import numpy as np
from django.conf import settings

logger = logging.getLogger(__name__)

_job: Optional[Callable] = None


def _install_job(job: Callable) -> None:
    global _job
    _job = job


def _run_job(item):
    return _job(item)


class ParallelMap:
    """
    Apply a job to grid items across worker processes.

    Results come back in input order whatever the scheduling. Jobs are
    installed in each worker at fork time, so closures need not be
    picklable; items and results must be.
    """

    def __init__(self, workers: Optional[int] = None, chunksize: int = 1):
        self.workers = max(1, workers if workers is not None else settings.ZETALAB_WORKERS)
        self.chunksize = chunksize

    def imap(self, job: Callable, items: Iterable) -> Iterator:
        items = list(items)
        if self.workers == 1 or len(items) <= 1:
            for item in items:
                yield job(item)
            return
        ctx = multiprocessing.get_context("fork")
        logger.info(f"Dispatching {len(items)} items to {self.workers} workers")
        with ctx.Pool(self.workers, initializer=_install_job, initargs=(job,)) as pool:
            yield from pool.imap(_run_job, items, chunksize=self.chunksize)

    def map(self, job: Callable, items: Iterable) -> List:
        return list(self.imap(job, items))


def pairwise_sum(values: Sequence[complex]):
    """Tree reduction with a fixed pairing order, independent of worker count"""
    arr = list(values)
    if not arr:
        return 0.0
    while len(arr) > 1:
        paired = [arr[i] + arr[i + 1] for i in range(0, len(arr) - 1, 2)]
        if len(arr) % 2:
            paired.append(arr[-1])
        arr = paired
    result = arr[0]
    return complex(result) if np.iscomplexobj(result) else float(result)
