"""Flat-file emission and parsing for orbits and density reports.

Orbit CSV layout: `#`-prefixed legend comments (model, flow, seed, steps and
one line per coordinate column), then a `time,c1,...` header, then one row
per sample.  Floats are printed with 17 significant digits so equal orbits
produce byte-identical files and parsing recovers the exact doubles.

Density reports serialize to a flat JSON object with sorted keys: model,
flow, steps, seed, bins, visited, total, fraction.

All writes go through a temp file in the target directory followed by an
atomic rename, so readers never observe a half-written file.
"""

from __future__ import annotations

import json
import os
import tempfile

from horoflow.flows import flow_label

FLOAT_FMT = "%.17g"


def _atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".horoflow-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def orbit_csv_text(segment):
    """Render one orbit segment in the CSV layout described above."""
    names = tuple(segment.coord_names)
    if segment.samples:
        width = len(segment.samples[0][1].coords)
    else:
        width = len(names)
    lines = [
        "# model = %s" % segment.model,
        "# flow = %s" % flow_label(segment.flow),
        "# seed = %s" % segment.seed,
        "# steps = %d" % segment.steps,
    ]
    for i in range(min(width, len(names))):
        lines.append("# c%d = %s" % (i + 1, names[i]))
    lines.append("time," + ",".join("c%d" % (i + 1) for i in range(width)))
    for time, point in segment.samples:
        cells = [FLOAT_FMT % time]
        cells.extend(FLOAT_FMT % value for value in point.coords)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_orbit_csv(segment, path):
    _atomic_write(path, orbit_csv_text(segment))
    return path


def read_orbit_csv(path):
    """Parse an orbit CSV into (legend dict, column names, float rows).

    Raises ValueError naming the offending line on any malformed content.
    """
    legend = {}
    columns = None
    rows = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    legend[key.strip()] = value.strip()
                continue
            if columns is None:
                columns = line.split(",")
                if columns[0] != "time":
                    raise ValueError(
                        "%s:%d: header must start with 'time'" % (path, lineno)
                    )
                continue
            cells = line.split(",")
            if len(cells) != len(columns):
                raise ValueError(
                    "%s:%d: expected %d fields, got %d"
                    % (path, lineno, len(columns), len(cells))
                )
            try:
                rows.append(tuple(float(cell) for cell in cells))
            except ValueError:
                raise ValueError(
                    "%s:%d: non-numeric cell" % (path, lineno)
                ) from None
    if columns is None:
        raise ValueError("%s: no header line found" % path)
    return legend, columns, rows


def density_json_text(report):
    payload = {
        "model": report.model,
        "flow": report.flow,
        "steps": report.steps,
        "seed": report.seed,
        "bins": list(report.bins),
        "visited": report.visited,
        "total": report.total,
        "fraction": report.fraction,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_density_json(report, path):
    _atomic_write(path, density_json_text(report))
    return path
