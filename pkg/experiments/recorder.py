"""
Run journal for zetalab commands
"""
import logging
from typing import Any, Dict, Optional

from django.db import DatabaseError
from django.utils import timezone

from experiments.models import ExperimentRun

logger = logging.getLogger(__name__)


class RunRecorder:
    """Journal service; a journal failure never stops the numerical run"""

    @staticmethod
    def start(command: str, config: Dict[str, Any]) -> Optional[ExperimentRun]:
        """
        Open a journal row for a run

        Args:
            command: Subcommand name
            config: Resolved RunConfig as a dict

        Returns:
            Created ExperimentRun, or None if the database is unavailable
        """
        try:
            run = ExperimentRun.objects.create(command=command, config=config)
        except DatabaseError as exc:
            logger.warning(f"Run journal unavailable, {command} is not recorded: {exc}")
            return None
        logger.info(f"Run {run.pk} started: {command}")
        return run

    @staticmethod
    def finish(
        run: Optional[ExperimentRun],
        summary: Optional[Dict[str, Any]] = None,
        output_path: str = "",
    ) -> Optional[ExperimentRun]:
        """Mark a run as succeeded"""
        return RunRecorder._close(run, "succeeded", 0, summary=summary, output_path=output_path)

    @staticmethod
    def fail(run: Optional[ExperimentRun], exit_code: int, error: str) -> Optional[ExperimentRun]:
        """Mark a run as failed with the process exit code"""
        return RunRecorder._close(run, "failed", exit_code, error=error)

    @staticmethod
    def _close(run, status: str, exit_code: int, summary=None, output_path: str = "", error: str = ""):
        if run is None:
            return None
        run.status = status
        run.exit_code = exit_code
        run.summary = summary or {}
        run.output_path = output_path[:500]
        run.error = error
        run.finished_at = timezone.now()
        try:
            run.save()
        except DatabaseError as exc:
            logger.warning(f"Could not close run {run.pk}: {exc}")
            return run
        logger.info(f"Run {run.pk} {status}: {run.command} (exit {exit_code})")
        return run

    @staticmethod
    def recent(command: Optional[str] = None, limit: int = 20):
        runs = ExperimentRun.objects.all()
        if command:
            runs = runs.filter(command=command)
        return list(runs[:limit])
