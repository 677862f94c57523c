"""Flat-table export helpers."""

import csv
import io
from typing import Any, Dict, Sequence


def records_to_csv(records: Sequence[Dict[str, Any]]) -> str:
    """CSV text with one column per key of the first record.

    Raises:
        ValueError: If there are no records
    """
    if not records:
        raise ValueError("No rows to export")
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(records[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(records)
    return buffer.getvalue()
