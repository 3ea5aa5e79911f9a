"""Reading and writing the line-based ``SPI 1`` instance format.

Layout::

    SPI 1
    n <n>
    edges <m>
    <u> <v>            (m lines, cover edge u < v, sorted ascending)
    order <x_1> ... <x_n>
"""

from __future__ import annotations

import os
from typing import TextIO

from .poset import InvalidInstanceError, PosetInstance


class SPIFormatError(ValueError):
    """Malformed or invariant-violating SPI file."""


def dumps(p: PosetInstance) -> str:
    lines = ["SPI 1", f"n {p.n}", f"edges {len(p.cover_edges)}"]
    lines += [f"{u} {v}" for u, v in sorted(p.cover_edges)]
    lines.append(" ".join(["order", *map(str, p.hidden_order)]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> PosetInstance:
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if len(lines) < 4:
        raise SPIFormatError("truncated file")
    if lines[0] != "SPI 1":
        raise SPIFormatError(f"bad header {lines[0]!r}")
    n = _keyed_int(lines[1], "n")
    m = _keyed_int(lines[2], "edges")
    if n < 0 or m < 0:
        raise SPIFormatError("negative count")
    if len(lines) != m + 4:
        raise SPIFormatError(f"expected {m + 4} lines, found {len(lines)}")
    edges = []
    for ln in lines[3 : 3 + m]:
        parts = ln.split()
        if len(parts) != 2:
            raise SPIFormatError(f"bad edge line {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise SPIFormatError(f"bad edge line {ln!r}") from None
    tail = lines[-1].split()
    if not tail or tail[0] != "order":
        raise SPIFormatError("missing order line")
    try:
        order = [int(x) for x in tail[1:]]
    except ValueError:
        raise SPIFormatError("non-integer in order line") from None
    if len(order) != n:
        raise SPIFormatError(f"order has {len(order)} entries, expected {n}")
    try:
        return PosetInstance(n, tuple(edges), tuple(order))
    except InvalidInstanceError as exc:
        raise SPIFormatError(str(exc)) from exc


def _keyed_int(line: str, key: str) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise SPIFormatError(f"expected '{key} <int>', got {line!r}")
    try:
        return int(parts[1])
    except ValueError:
        raise SPIFormatError(f"expected '{key} <int>', got {line!r}") from None


def dump(p: PosetInstance, fp: TextIO) -> None:
    fp.write(dumps(p))


def load(fp: TextIO) -> PosetInstance:
    return loads(fp.read())


def write_file(p: PosetInstance, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fp:
        dump(p, fp)


def read_file(path: str | os.PathLike) -> PosetInstance:
    with open(path, encoding="ascii") as fp:
        return load(fp)
