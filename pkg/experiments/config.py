"""
Run configuration for the zetalab command

Resolution order (later wins): settings defaults, key=value config file,
repeated --set key=value flags, dedicated command-line flags.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional

from decouple import Csv, RepositoryEnv
from django.conf import settings

from core.exceptions import ParamOutOfRange
from core.utils.numerics import all_settings

logger = logging.getLogger(__name__)

RUN_KEYS = ("workers", "seed", "output", "format", "backend", "record")
TRUE_VALUES = {"1", "true", "yes", "on"}
FALSE_VALUES = {"0", "false", "no", "off"}


def cast_numeric(key: str, raw: Any) -> Any:
    """
    Cast a textual override to the type of its settings default

    Raises:
        ParamOutOfRange: unknown key or unreadable value
    """
    if key not in settings.ZETALAB_NUMERICS:
        raise ParamOutOfRange(f"unknown numerical setting {key!r}")
    if not isinstance(raw, str):
        return raw
    default = settings.ZETALAB_NUMERICS[key]
    text = raw.strip()
    try:
        if text.lower() in ("none", ""):
            return None
        if isinstance(default, bool):
            if text.lower() not in TRUE_VALUES | FALSE_VALUES:
                raise ValueError(text)
            return text.lower() in TRUE_VALUES
        if isinstance(default, list):
            return Csv(cast=float)(text)
        if isinstance(default, int) or default is None:
            value = float(text)
            if value != int(value):
                raise ValueError(text)
            return int(value)
        return float(text)
    except ValueError:
        raise ParamOutOfRange(f"cannot read {raw!r} for setting {key}") from None


def parse_assignments(items: Iterable[str]) -> Dict[str, str]:
    """["a.b=1", "c=x"] -> {"a.b": "1", "c": "x"}"""
    pairs = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ParamOutOfRange(f"expected key=value, got {item!r}")
        pairs[key.strip()] = value.strip()
    return pairs


@dataclass
class RunConfig:
    """
    Everything that determines a run; serialized into every output header.

    Attributes:
        command: Subcommand name
        params: Parsed command parameters
        numerics: Overrides of ZETALAB_NUMERICS for this run
        workers: Worker processes for sweeps and scans
        seed: Seed for randomized test points
        output: Output path; None writes to stdout
        format: Output format override (json, csv, jsonl, table)
        backend: local or celery
        record: Write the run journal
    """

    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    numerics: Dict[str, Any] = field(default_factory=dict)
    workers: int = 1
    seed: int = 0
    output: Optional[str] = None
    format: Optional[str] = None
    backend: str = "local"
    record: bool = True
    config_file: Optional[str] = None

    @classmethod
    def resolve(
        cls,
        command: str,
        params: Optional[Dict[str, Any]] = None,
        config_file: Optional[str] = None,
        assignments: Iterable[str] = (),
        flags: Optional[Dict[str, Any]] = None,
    ) -> "RunConfig":
        """
        Layer the configuration sources

        Args:
            command: Subcommand name
            params: Command parameters from the command line
            config_file: Optional key=value file
            assignments: --set key=value items
            flags: Dedicated run flags (workers, seed, output, format, backend, record); None values are ignored

        Returns:
            RunConfig
        """
        layered: Dict[str, Any] = {}
        if config_file:
            try:
                layered.update(RepositoryEnv(config_file).data)
            except OSError as exc:
                raise ParamOutOfRange(f"cannot read config file {config_file}: {exc}") from None
            logger.info(f"Loaded {len(layered)} settings from {config_file}")
        layered.update(parse_assignments(assignments))

        run = {
            "workers": settings.ZETALAB_WORKERS,
            "seed": settings.ZETALAB_SEED,
            "output": None,
            "format": None,
            "backend": "local",
            "record": True,
        }
        numerics = {}
        for key, value in layered.items():
            if key in RUN_KEYS:
                run[key] = value
            else:
                numerics[key] = cast_numeric(key, value)
        run.update({k: v for k, v in (flags or {}).items() if v is not None})

        try:
            workers, seed = int(run["workers"]), int(run["seed"])
        except ValueError:
            raise ParamOutOfRange(f"workers and seed must be integers, got {run['workers']!r}, {run['seed']!r}")
        if workers < 1:
            raise ParamOutOfRange(f"workers must be >= 1, got {workers}")
        if run["backend"] not in ("local", "celery"):
            raise ParamOutOfRange(f"backend must be local or celery, got {run['backend']!r}")
        record = run["record"]
        if isinstance(record, str):
            if record.strip().lower() not in TRUE_VALUES | FALSE_VALUES:
                raise ParamOutOfRange(f"record must be true or false, got {record!r}")
            record = record.strip().lower() in TRUE_VALUES
        return cls(
            command=command,
            params=dict(params or {}),
            numerics=numerics,
            workers=workers,
            seed=seed,
            output=run["output"] or None,
            format=run["format"] or None,
            backend=run["backend"],
            record=bool(record),
            config_file=config_file,
        )

    def resolved_numerics(self) -> Dict[str, Any]:
        merged = all_settings()
        merged.update(self.numerics)
        return merged

    def to_header(self) -> Dict[str, Any]:
        from experiments.outputs import jsonable

        return jsonable(
            {
                "command": self.command,
                "params": self.params,
                "workers": self.workers,
                "seed": self.seed,
                "backend": self.backend,
                "config_file": self.config_file,
                "numerics": dict(sorted(self.resolved_numerics().items())),
            }
        )
