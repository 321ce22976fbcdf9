"""
Text / CSV / JSON document writer.

CSV and JSON are byte-stable for identical inputs: numbers are written with
12 significant digits, non-finite numbers as empty cells (CSV) or null
(JSON), and columns keep the order of the first row.
"""
import csv
import io
from typing import Any, Dict, List, Mapping, Optional, Sequence

from rest_framework.renderers import JSONRenderer

from .serializers import SIGNIFICANT_DIGITS, OutputFormat, round_significant


def _normalize(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return round_significant(value)
    if isinstance(value, Mapping):
        return {key: _normalize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(item) for item in value]
    return str(value)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


class DocumentWriter:
    """
    Renders command output in one of the supported formats.
    """

    def __init__(self, fmt: str = OutputFormat.TEXT):
        self.fmt = OutputFormat.parse(fmt)

    def render_rows(self, command: str, rows: Sequence[Mapping[str, Any]], columns: Optional[Sequence[str]] = None) -> str:
        """
        Render a list of flat rows.

        Args:
            command: Command name, recorded in the JSON document
            rows: Dicts of scalar cells
            columns: Column order; defaults to the union of row keys in first-seen order

        Returns:
            The rendered document, newline terminated
        """
        rows = [_normalize(dict(row)) for row in rows]
        columns = list(columns) if columns else self._columns(rows)
        if self.fmt is OutputFormat.JSON:
            return self._json({"command": command, "rows": rows})
        if self.fmt is OutputFormat.CSV:
            return self._csv(columns, rows)
        return self._table(columns, rows)

    def render_object(self, document: Mapping[str, Any], list_key: Optional[str] = None) -> str:
        """
        Render one object. Text output lists the scalar fields and then
        ``document[list_key]`` as a table; CSV writes the scalar fields as a
        single row.
        """
        document = _normalize(dict(document))
        if self.fmt is OutputFormat.JSON:
            return self._json(document)
        scalars = {k: v for k, v in document.items() if not isinstance(v, (list, dict))}
        if self.fmt is OutputFormat.CSV:
            return self._csv(list(scalars), [scalars])
        width = max((len(key) for key in scalars), default=0)
        lines = [f"{key.ljust(width)}  {_cell(value)}" for key, value in scalars.items()]
        text = "\n".join(lines) + "\n"
        nested = document.get(list_key) if list_key else None
        if nested:
            text += "\n" + self._table(self._columns(nested), nested)
        return text

    @staticmethod
    def _columns(rows: Sequence[Mapping[str, Any]]) -> List[str]:
        columns: Dict[str, None] = {}
        for row in rows:
            for key in row:
                columns.setdefault(key)
        return list(columns)

    @staticmethod
    def _json(document) -> str:
        return JSONRenderer().render(document).decode("utf-8") + "\n"

    @staticmethod
    def _csv(columns: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(column)) for column in columns])
        return buffer.getvalue()

    @staticmethod
    def _table(columns: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
        cells = [[_cell(row.get(column)) for column in columns] for row in rows]
        widths = [
            max([len(column)] + [len(line[i]) for line in cells]) for i, column in enumerate(columns)
        ]
        lines = ["  ".join(column.ljust(w) for column, w in zip(columns, widths)).rstrip()]
        lines += ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in cells]
        return "\n".join(lines) + "\n"
