"""Deterministic CSV / JSON rendering of result tables."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import DomainError


@dataclass
class SweepResult:
    """Ordered table: an input axis plus named value series of equal length."""

    axis_name: str
    axis_values: list[float] = field(default_factory=list)
    columns: dict[str, list[float]] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.axis_values)
        for name, values in self.columns.items():
            if len(values) != n:
                raise DomainError(f"column {name!r} has {len(values)} values, axis has {n}")

    @property
    def header(self) -> list[str]:
        return [self.axis_name, *self.columns]

    def rows(self):
        series = [self.axis_values, *self.columns.values()]
        return zip(*series)


def format_number(value: float, precision: int = 12) -> str:
    """Lower-case scientific notation with ``precision`` significant digits.

    The exponent carries no ``+`` sign or zero padding: ``1.0 -> 1.00000000000e0``.
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    mantissa, exponent = f"{value:.{precision - 1}e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def _json_number(value, precision):
    text = format_number(value, precision)
    return "null" if text in ("nan", "inf", "-inf") else text


def _json_string(text):
    return json.dumps(text, ensure_ascii=False)


def emit_table(result: SweepResult, fmt: str = "csv", precision: int = 12) -> bytes:
    """Render ``result`` as UTF-8 bytes with LF line endings."""
    if precision < 1:
        raise DomainError(f"precision must be >= 1, got {precision}")
    if fmt == "csv":
        lines = [",".join(result.header)]
        for row in result.rows():
            lines.append(",".join(format_number(v, precision) for v in row))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "json":
        axis_values = ", ".join(_json_number(v, precision) for v in result.axis_values)
        cols = []
        for name, values in result.columns.items():
            body = ", ".join(_json_number(v, precision) for v in values)
            cols.append(f"{_json_string(name)}: [{body}]")
        text = (
            "{"
            f'"axis": {{"name": {_json_string(result.axis_name)}, "values": [{axis_values}]}}, '
            f'"columns": {{{", ".join(cols)}}}'
            "}\n"
        )
        return text.encode("utf-8")
    raise DomainError(f"unknown output format {fmt!r}")
