from pathlib import Path
from typing import List, Optional, Sequence, Type, TypeVar
import logging

import backoff
import pandas as pd
from pydantic import BaseModel

from ...schemas.metrics import MetricRow, TimingRow

logger = logging.getLogger(__name__)

Row = TypeVar("Row", bound=BaseModel)

class MetricsRepository:
    """metrics.csv / timing.csv: comma-separated, header row, one row per evaluation point."""

    @staticmethod
    def text_columns(model: Type[BaseModel]) -> dict:
        return {name: str for name, field in model.model_fields.items() if field.annotation in (str, Optional[str])}

    @staticmethod
    def columns(model: Type[BaseModel]) -> List[str]:
        return list(model.model_fields)

    @backoff.on_exception(
        backoff.expo,
        OSError,
        max_tries=3,
        max_time=30
    )
    def _write_frame(self, frame: pd.DataFrame, path: Path) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        frame.to_csv(tmp, index=False, lineterminator="\n")
        tmp.replace(path)

    def write_rows(self, path: Path, rows: Sequence[Row], model: Type[Row]) -> None:
        try:
            frame = pd.DataFrame([row.model_dump() for row in rows], columns=self.columns(model))
            self._write_frame(frame, path)
        except Exception as e:
            logger.error(f"Error writing {path}: {str(e)}")
            raise

    def write_metrics(self, path: Path, rows: Sequence[MetricRow]) -> None:
        self.write_rows(path, rows, MetricRow)

    def write_timing(self, path: Path, rows: Sequence[TimingRow]) -> None:
        self.write_rows(path, rows, TimingRow)

    def read_rows(self, path: Path, model: Type[Row]) -> List[Row]:
        if not path.exists():
            return []
        frame = pd.read_csv(path, dtype=self.text_columns(model))
        frame = frame.astype(object).where(frame.notna(), None)
        return [model(**record) for record in frame.to_dict(orient="records")]

    def read_metrics(self, path: Path) -> List[MetricRow]:
        return self.read_rows(path, MetricRow)

    def read_timing(self, path: Path) -> List[TimingRow]:
        return self.read_rows(path, TimingRow)

    def read_frame(self, path: Path) -> pd.DataFrame:
        return pd.read_csv(path)

metrics_repository = MetricsRepository()
