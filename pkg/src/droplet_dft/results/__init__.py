"""CSV result files, run metadata and reference datasets."""

from .reference import ReferenceDataset, ingest_reference, parse_reference
from .writer import Column, ResultTable, RunMetadata, format_value, meta_path, unit_label, write_result

__all__ = [
    "Column",
    "ReferenceDataset",
    "ResultTable",
    "RunMetadata",
    "format_value",
    "ingest_reference",
    "meta_path",
    "parse_reference",
    "unit_label",
    "write_result",
]
