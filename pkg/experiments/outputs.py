"""
Writers for run artifacts: JSON reports, CSV sweeps, JSON-lines scans and
gnuplot tables. Every artifact starts with the run configuration.
"""
import json
import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, TextIO, Tuple

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv", "jsonl", "table")


def jsonable(value: Any) -> Any:
    """Plain JSON types; complex numbers become {"re", "im"}, non-finite floats None"""
    if hasattr(value, "to_dict") and not isinstance(value, (pd.DataFrame, pd.Series)):
        return jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": jsonable(float(value.real)), "im": jsonable(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


@dataclass
class Artifact:
    """
    What a subcommand produced

    Attributes:
        kind: json, csv, jsonl or table
        data: JSON payload (json), or list of records (jsonl)
        frame: Table for csv output
        columns: (x, y) pairs for gnuplot tables
        summary: Short JSON summary for the run journal and the console
        written: The command already streamed its records to this path
    """

    kind: str
    data: Any = None
    frame: Optional[pd.DataFrame] = None
    columns: List[Tuple[float, float]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    written: Optional[str] = None


def _header_lines(header: Dict[str, Any]) -> Iterator[str]:
    for key, value in header.items():
        yield f"# {key}: {json.dumps(value, sort_keys=True)}\n"


def write_json(stream: TextIO, header: Dict[str, Any], data: Any) -> None:
    json.dump({"config": header, "data": jsonable(data)}, stream, indent=2)
    stream.write("\n")


def write_jsonl(stream: TextIO, header: Dict[str, Any], records: Sequence[Any]) -> None:
    stream.write(json.dumps({"config": header}) + "\n")
    for record in records:
        stream.write(json.dumps(jsonable(record)) + "\n")


def write_csv(stream: TextIO, header: Dict[str, Any], frame: pd.DataFrame) -> None:
    """Header as # comment lines, then the table (read back with pandas.read_csv(comment="#"))"""
    stream.writelines(_header_lines(header))
    frame.to_csv(stream, index=False, float_format="%.12g")


def write_table(stream: TextIO, header: Dict[str, Any], columns: Sequence[Tuple[float, float]]) -> None:
    """Whitespace-separated two-column table for gnuplot"""
    stream.writelines(_header_lines(header))
    for x, y in columns:
        stream.write(f"{float(x):.12g} {float(y):.12g}\n")


@contextmanager
def open_output(path: Optional[str], default: TextIO) -> Iterator[TextIO]:
    if not path or path == "-":
        yield default
        return
    with open(path, "w") as handle:
        yield handle


def emit(artifact: Artifact, header: Dict[str, Any], path: Optional[str], default: TextIO, fmt: Optional[str] = None):
    """
    Write an artifact

    Args:
        artifact: Command result
        header: Serialized RunConfig
        path: Output file, or None / "-" for the default stream
        default: Stream used without a path
        fmt: Format override; "table" needs columns, "csv" a frame
    """
    if artifact.written:
        logger.info(f"{artifact.kind} output already streamed to {artifact.written}")
        return
    kind = fmt or artifact.kind
    if kind == "table" and not artifact.columns:
        kind = artifact.kind
    with open_output(path, default) as stream:
        if kind == "table":
            write_table(stream, header, artifact.columns)
        elif kind == "csv" and artifact.frame is not None:
            write_csv(stream, header, artifact.frame)
        elif kind == "jsonl" and isinstance(artifact.data, list):
            write_jsonl(stream, header, artifact.data)
        else:
            write_json(stream, header, artifact.data)
    if path and path != "-":
        logger.info(f"Wrote {kind} output to {path}")
