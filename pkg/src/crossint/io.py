"""Text format for families and JSON helpers.

A family is written as a header line ``family n=<n> k=<k> size=<m>``
followed by one member per line, elements comma-separated and ascending.
"""
from __future__ import annotations

import json
import re
from typing import Iterable, TextIO

from .families import Family

_HEADER = re.compile(r"^family\s+n=(\d+)\s+k=(\d+)\s+size=(\d+)\s*$")


def format_family(f: Family) -> str:
    lines = [f"family n={f.ground_n} k={f.set_size} size={len(f)}"]
    lines.extend(",".join(map(str, s.elements)) for s in f.members)
    return "\n".join(lines)


def format_families(fams: Iterable[Family]) -> str:
    return "\n".join(format_family(f) for f in fams) + "\n"


def parse_families(text: str) -> list[Family]:
    fams = []
    header = None
    rows: list[tuple[int, ...]] = []

    def flush():
        if header is None:
            return
        n, k, size = header
        fam = Family(n, k, rows)
        if len(fam) != size or len(rows) != size:
            raise ValueError(f"family header says size={size}, found {len(rows)} sets")
        fams.append(fam)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _HEADER.match(line)
        if m:
            flush()
            header = tuple(int(g) for g in m.groups())
            rows = []
            continue
        if header is None:
            raise ValueError(f"line {lineno}: set before any family header")
        try:
            rows.append(tuple(int(x) for x in line.split(",")))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad set {line!r}") from exc
    flush()
    return fams


def read_families(fh: TextIO) -> list[Family]:
    return parse_families(fh.read())


def dumps(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"
