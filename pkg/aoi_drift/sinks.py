"""
Row sinks for aoi_drift output.

"""

from __future__ import annotations

import abc
import contextlib
import csv
import json
import sys
from collections.abc import Iterator, Mapping, Sequence
from enum import Enum
from numbers import Integral, Real
from typing import Any, Generic, Optional, TextIO, TypeVar

from .core import format_number

R = TypeVar("R")  # Row type

type Row = Mapping[str, Any]


class Sink(abc.ABC, Generic[R]):
    """Abstract base class for output sinks.

    Attributes:
        stream: Text stream the sink writes to. The sink never closes it.
    """

    stream: TextIO

    def __init__(self, stream: TextIO):
        self.stream = stream

    @abc.abstractmethod
    def write(self, row: R) -> None:
        """Write one row."""
        ...

    @abc.abstractmethod
    def close(self) -> None:
        """Flush everything still buffered."""
        ...

    def __enter__(self) -> Sink[R]:
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.close()


class CsvSink(Sink[Row]):
    """CSV sink with a fixed column order.

    The header is written on construction; each row is written as soon as it
    arrives. Missing keys and None render as empty cells.

    Attributes:
        columns: Column names in output order.
    """

    def __init__(self, stream: TextIO, columns: Sequence[str]):
        super().__init__(stream)
        self.columns = tuple(columns)
        self._writer = csv.writer(stream, lineterminator="\n")
        self._writer.writerow(self.columns)

    def write(self, row: Row) -> None:
        self._writer.writerow([format_number(row.get(column)) for column in self.columns])

    def close(self) -> None:
        self.stream.flush()


def json_value(value: Any) -> Any:
    """Convert a value for JSON output, rounding floats like the CSV cells."""
    match value:
        case Enum():
            return value.value
        case None | bool() | str():
            return value
        case Integral():
            return int(value)
        case Real():
            return float(format_number(value))
        case Mapping():
            return {str(key): json_value(item) for key, item in value.items()}
        case list() | tuple():
            return [json_value(item) for item in value]
        case _:
            return str(value)


class JsonSink(Sink[Row]):
    """JSON sink that buffers rows and emits a single document on close.

    The document is ``{"rows": [...]}`` plus every key of ``summary``,
    rendered with ``indent=2`` and sorted keys.

    Attributes:
        columns: When set, each row is restricted to these keys.
        summary: Extra top-level entries of the document.
    """

    def __init__(self, stream: TextIO, columns: Optional[Sequence[str]] = None):
        super().__init__(stream)
        self.columns = tuple(columns) if columns is not None else None
        self.summary: dict[str, Any] = {}
        self._rows: list[dict[str, Any]] = []
        self._closed = False

    def write(self, row: Row) -> None:
        if self.columns is not None:
            row = {column: row.get(column) for column in self.columns}
        self._rows.append(json_value(row))

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        document = {"rows": self._rows} | json_value(self.summary)
        json.dump(document, self.stream, indent=2, sort_keys=True)
        self.stream.write("\n")
        self.stream.flush()


def write_document(stream: TextIO, document: Mapping[str, Any]) -> None:
    """Write one standalone JSON document."""
    json.dump(json_value(document), stream, indent=2, sort_keys=True)
    stream.write("\n")


def make_sink(fmt: str, stream: TextIO, columns: Sequence[str]) -> Sink[Row]:
    """Sink for the output format ``fmt`` ("csv" or "json")."""
    match fmt:
        case "csv":
            return CsvSink(stream, columns)
        case "json":
            return JsonSink(stream, columns)
    raise ValueError(f"unknown output format '{fmt}'")


@contextlib.contextmanager
def open_output(path: Optional[str]) -> Iterator[TextIO]:
    """Stream for ``path``, or stdout when no path is given."""
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as stream:
        yield stream
