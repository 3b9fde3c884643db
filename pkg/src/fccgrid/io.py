"""Region (JSON lines) and coloring (CSV) files, both in doubled coordinates."""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .colorings import ColoringSpec, explicit
from .lattice import ParityError, Region, Site, make_site

__all__ = ["FormatError", "write_region", "read_region", "region_text",
           "write_coloring", "read_coloring", "coloring_text"]

CSV_HEADER = ["x", "y", "z", "color"]


class FormatError(ValueError):
    pass


def region_text(region: Region) -> str:
    return "".join(json.dumps({"x": s.x, "y": s.y, "z": s.z}) + "\n" for s in region)


def write_region(region: Region, path) -> None:
    Path(path).write_text(region_text(region))


def read_region(path) -> Region:
    """Read a JSON-lines region; sites violating the parity rule are rejected."""
    sites = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            x, y, z = obj["x"], obj["y"], obj["z"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from None
        if not all(type(t) is int for t in (x, y, z)):
            raise FormatError(f"{path}:{lineno}: coordinates must be integers")
        try:
            sites.append(make_site(x, y, z))
        except ParityError as exc:
            raise FormatError(f"{path}:{lineno}: {exc}") from None
    return Region(tuple(sites), ("file", str(path)))


def coloring_text(spec: ColoringSpec, region: Region) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in region:
        w.writerow([s.x, s.y, s.z, spec(s)])
    return buf.getvalue()


def write_coloring(spec: ColoringSpec, region: Region, path) -> None:
    """Write ``x,y,z,color`` rows for the region's sites in canonical order."""
    Path(path).write_text(coloring_text(spec, region))


def read_coloring(path) -> tuple[ColoringSpec, Region]:
    """Read a coloring CSV back as an explicit spec plus the region it covers."""
    mapping: dict[Site, int] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise FormatError(f"{path}: header must be {','.join(CSV_HEADER)}")
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            try:
                x, y, z, c = (int(t) for t in row)
                s = make_site(x, y, z)
            except (ValueError, ParityError) as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
            if s in mapping:
                raise FormatError(f"{path}:{lineno}: site {tuple(s)} listed twice")
            mapping[s] = c
    return explicit(mapping), Region(tuple(mapping), ("file", str(path)))
