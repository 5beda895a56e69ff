"""CSV and gnuplot emitters. Output bytes depend only on the rows."""

from __future__ import annotations

import io
from pathlib import Path
from typing import Iterable, Sequence

SCHEMA_VERSION = 1


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    # repr is the shortest string that round-trips
    return repr(float(v))


def render_csv(kind: str, columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    buf.write(f"# dpris {kind} v{SCHEMA_VERSION}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format_value(row[c]) for c in columns) + "\n")
    return buf.getvalue()


def write_text(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


_PLOTS = {
    "power-sweep": ("Transmit power P (dB)", "Capacity (bits/s/Hz)",
                    ["cap_bound_dp", "cap_bound_sp", "mc_cap_dp_opt", "mc_cap_sp_opt",
                     "mc_cap_dp_rand", "mc_cap_sp_rand"]),
    "size-sweep": ("RIS size L", "Capacity (bits/s/Hz)",
                   ["cap_bound_dp", "cap_bound_sp", "mc_cap_dp_opt", "mc_cap_sp_opt"]),
    "threshold-sweep": ("Transmit power P (dB)", "Required RIS size", ["l_req"]),
}


def render_gnuplot(kind: str, columns: Sequence[str], csv_name: str, rows: Sequence[dict] = ()) -> str:
    xlabel, ylabel, series = _PLOTS[kind]
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set grid",
    ]
    if kind == "threshold-sweep":
        # rows arrive grouped by alpha; one curve per contiguous block
        blocks = []
        for i, row in enumerate(rows):
            if not blocks or blocks[-1][0] != row["alpha"]:
                blocks.append([row["alpha"], i, i])
            blocks[-1][2] = i
        parts = [f"'{csv_name}' every ::{lo + 1}::{hi + 1} using 1:3 with linespoints "
                 f"title 'alpha={format_value(a)}'" for a, lo, hi in blocks]
    else:
        parts = [f"'{csv_name}' using 1:{columns.index(s) + 1} with linespoints title '{s}'"
                 for s in series]
    if parts:
        lines.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(lines) + "\n"
