"""Deterministic export of result tables (CSV, JSON, Parquet) with a metadata sidecar."""

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from src.constants import CSV_FLOAT_FORMAT, SIGNIFICANT_DIGITS
from src.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def _json_value(value: Any) -> Any:
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    return value


class ResultWriter:
    """Writes DataFrames in the requested format; identical input gives identical bytes."""

    FORMATS = ("csv", "json", "parquet")

    def __init__(self, version: Optional[str] = None):
        self.version = version

    def write_table(self, df: pd.DataFrame, path: PathLike, fmt: str = "csv") -> Path:
        """
        Write a result table.

        Args:
            df: Table to write
            path: Destination file
            fmt: csv, json or parquet

        Returns:
            Path written
        """
        if fmt not in self.FORMATS:
            raise ValueError(f"Invalid output format: {fmt}")
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)

        if fmt == "csv":
            df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
        elif fmt == "json":
            records = [
                {column: _json_value(value) for column, value in zip(df.columns, row)}
                for row in df.itertuples(index=False, name=None)
            ]
            path.write_text(json.dumps(records, indent=2) + "\n")
        else:
            self.export_to_parquet(df, path)

        logger.info(f"Wrote {len(df)} rows to {path}")
        return path

    def export_to_parquet(self, df: pd.DataFrame, path: PathLike) -> Path:
        """Secondary export for analytics tools."""
        path = Path(path)
        df.to_parquet(path, engine="pyarrow", index=False)
        return path

    def write_metadata(
        self, path: PathLike, config: Dict[str, Any], summary: Dict[str, Any]
    ) -> Path:
        """Write ``<stem>.meta.json`` next to a result file."""
        path = Path(path)
        meta_path = path.with_name(f"{path.stem}.meta.json")
        payload = {"version": self.version, "config": config, "summary": summary}
        meta_path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
        return meta_path
