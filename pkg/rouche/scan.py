"""
Scanning vertical shifts tau for Rouche certificates
"""
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from core.exceptions import ParamOutOfRange, ZetaLabError
from core.utils.geometry import Disk
from core.utils.numerics import setting
from core.utils.parallel import ParallelMap
from polynomials.composer import ComposedFunction, as_analytic, eval_composed
from rouche.certificates import RoucheCertificate, rouche_check

logger = logging.getLogger(__name__)

# |F(mapped zero)| below which a mapped zero counts as verified
MAPPED_ZERO_TOL = 1e-6


@dataclass
class TauScanResult:
    certificates: List[RoucheCertificate]
    grid_size: int
    resumed: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def passes(self) -> List[RoucheCertificate]:
        return [c for c in self.certificates if c.passed]

    @property
    def hit_fraction(self) -> float:
        return len(self.passes) / self.grid_size if self.grid_size else 0.0

    def summary(self) -> dict:
        first = self.passes[0].tau if self.passes else None
        return {
            "grid_size": self.grid_size,
            "passes": len(self.passes),
            "hit_fraction": self.hit_fraction,
            "first_pass_tau": first,
            "resumed": self.resumed,
            "unverified": sum(1 for c in self.passes if c.verified is False),
        }


def tau_grid(tau_range: Tuple[float, float], step: float) -> np.ndarray:
    """Points tau_0 + i*step inside [tau_0, tau_1]"""
    if not step > 0:
        raise ParamOutOfRange(f"tau step must be positive, got {step}")
    lo, hi = float(tau_range[0]), float(tau_range[1])
    if hi < lo:
        raise ParamOutOfRange(f"empty tau range [{lo}, {hi}]")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _tau_key(tau: float) -> float:
    return round(float(tau), 9)


def load_checkpoint(path: str) -> List[RoucheCertificate]:
    """Certificates already written to a JSON-lines scan file (a torn last line is ignored)"""
    done = []
    if not path or not os.path.exists(path):
        return done
    with open(path) as handle:
        for number, line in enumerate(handle, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                if "config" in record:
                    continue
                done.append(RoucheCertificate.from_dict(record))
            except (ValueError, KeyError) as exc:
                logger.warning(f"Skipping unreadable line {number} of {path}: {exc}")
    return done


def certify_shift(F: ComposedFunction, A, disk: Disk, tau: float, samples: Optional[int] = None) -> RoucheCertificate:
    """
    Certificate for Z(s) = F(s + i tau) against A; a pass maps its zero back to F
    """
    try:
        Z = as_analytic(F.shifted(tau), verify_poles=False)
        cert = rouche_check(Z, A, disk, samples=samples, tau=tau)
    except ZetaLabError as exc:
        cert = RoucheCertificate(disk=disk, tau=tau, max_diff=np.inf, min_target=0.0, passed=False, samples=0)
        cert.notes.append(f"{exc.__class__.__name__}: {exc}")
        return cert
    if cert.passed and cert.zero_inside is not None:
        cert.mapped_zero = cert.zero_inside.location + 1j * tau
        try:
            residual = abs(eval_composed(F, cert.mapped_zero))
        except ZetaLabError as exc:
            residual = np.inf
            cert.notes.append(f"mapped zero check failed: {exc}")
        cert.verified = bool(residual < MAPPED_ZERO_TOL)
        if not cert.verified:
            logger.warning(f"Mapped zero {cert.mapped_zero} of {F.name} has residual {residual:.2e}")
    return cert


def tau_scan(
    F: ComposedFunction,
    A,
    disk: Disk,
    tau_range: Tuple[float, float],
    step: Optional[float] = None,
    workers: Optional[int] = None,
    sink: Optional[str] = None,
    resume: bool = False,
    checkpoint_every: Optional[int] = None,
    samples: Optional[int] = None,
    progress: Optional[Callable[[RoucheCertificate], None]] = None,
    header: Optional[dict] = None,
) -> TauScanResult:
    """
    Rouche certificates for every tau on the grid

    Args:
        F: Composition to shift
        A: Target with known zeros in the disk
        disk: Disk of the certificate
        tau_range: (tau_0, tau_1)
        step: Grid step
        workers: Worker processes (grid order is kept)
        sink: JSON-lines file receiving one certificate per grid point
        resume: Skip tau values already present in sink
        checkpoint_every: Flush the sink after this many certificates
        samples: Initial circle samples per certificate
        header: Run configuration written as the first line of a new sink

    Returns:
        TauScanResult with certificates sorted by tau
    """
    step = setting("rouche.tau_step", step)
    checkpoint_every = setting("rouche.checkpoint_every", checkpoint_every)
    grid = tau_grid(tau_range, step)

    previous = load_checkpoint(sink) if (resume and sink) else []
    done = {_tau_key(c.tau) for c in previous}
    todo = [float(t) for t in grid if _tau_key(t) not in done]
    previous = [c for c in previous if tau_range[0] - 1e-9 <= c.tau <= tau_range[1] + 1e-9]
    logger.info(
        f"tau scan of {F.name} on {disk}: {len(grid)} shifts in [{tau_range[0]:g}, {tau_range[1]:g}] "
        f"step {step:g}, {len(previous)} resumed"
    )

    certificates = list(previous)
    fresh = bool(sink) and not (resume and os.path.exists(sink) and os.path.getsize(sink))
    handle = open(sink, "w" if fresh else "a") if sink else None
    if fresh and header is not None:
        handle.write(json.dumps({"config": header}) + "\n")
    try:
        runner = ParallelMap(workers)
        for written, cert in enumerate(runner.imap(lambda tau: certify_shift(F, A, disk, tau, samples), todo), 1):
            certificates.append(cert)
            if progress:
                progress(cert)
            if handle:
                handle.write(json.dumps(cert.to_dict()) + "\n")
                if written % checkpoint_every == 0:
                    handle.flush()
                    logger.info(f"checkpoint: {written}/{len(todo)} shifts written to {sink}")
    finally:
        if handle:
            handle.close()

    certificates.sort(key=lambda c: c.tau)
    result = TauScanResult(certificates=certificates, grid_size=len(grid), resumed=len(previous))
    logger.info(f"tau scan of {F.name}: {len(result.passes)} passes, hit fraction {result.hit_fraction:.4f}")
    return result
