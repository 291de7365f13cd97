"""Plain result tables with canonical TSV/JSON rendering."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


def fmt_cell(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return "NA" if math.isnan(x) else f"{x:.6g}"
    return str(x)


def _json_cell(x):
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return None if math.isnan(x) else float(f"{x:.6g}")
    return str(x)


@dataclass
class Table:
    """Rows under named columns.

    ``series`` maps plot series (``empirical``, ``lower_bound``,
    ``upper_bound``) to either a column name or a constant.
    """

    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    series: dict = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_tsv(self) -> str:
        lines = ["\t".join(self.columns)]
        lines += ["\t".join(fmt_cell(x) for x in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "name": self.name,
            "columns": self.columns,
            "rows": [[_json_cell(x) for x in row] for row in self.rows],
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"

    def render(self, fmt="tsv") -> str:
        if fmt == "tsv":
            return self.to_tsv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


PLOT_SERIES = ("empirical", "lower_bound", "upper_bound")


def plotdata(table: Table) -> str:
    """Long-format ``series, n, value`` rows for a dimension table."""
    if "n" not in table.columns or not table.series:
        raise ValueError(f"table {table.name!r} is not a dimension table")
    for key in table.series:
        if key not in PLOT_SERIES:
            raise ValueError(f"unknown plot series {key!r}")
    lines = ["series\tn\tvalue"]
    ns = table.column("n")
    for key in PLOT_SERIES:
        if key not in table.series:
            continue
        src = table.series[key]
        if isinstance(src, str):
            values = table.column(src)
        else:
            values = [src] * len(ns)
        for n, v in zip(ns, values):
            if v is not None:
                lines.append(f"{key}\t{n}\t{fmt_cell(float(v))}")
    return "\n".join(lines) + "\n"
