"""Line-oriented text formats for images, maps, paths, and homotopies.

Every format opens with a keyword header; referenced files are resolved
relative to the referring file.  Blank lines and '#' comments are ignored.
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence

from .lattice import DigitalImage
from .maps import DigitalMap, Homotopy
from .paths import FinitePath, PathHomotopy
from .ecpaths import EcHomotopy, EcPath


class FormatError(ValueError):
    """Raised when a file does not match its declared format."""


def _lines(path: str) -> list[list[str]]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                out.append(line.split())
    if not out:
        raise FormatError(f"{path}: empty file")
    return out


def _expect(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise FormatError(f"{path}: {msg}")


def _resolve(base: str, ref: str) -> str:
    return os.path.join(os.path.dirname(os.path.abspath(base)), ref)


def read_image(path: str) -> DigitalImage:
    rows = _lines(path)
    head = rows[0]
    _expect(head[0] == "dim" and len(head) == 3, path, "header must be 'dim <n> <u>'")
    n, u = int(head[1]), int(head[2])
    pts = []
    for row in rows[1:]:
        _expect(len(row) == n, path, f"point {row} does not have {n} coordinates")
        pts.append(tuple(int(c) for c in row))
    try:
        return DigitalImage(pts, u=u, dim=n)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from None


def write_image(image: DigitalImage, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"dim {image.dim} {image.u}\n")
        for p in image.points:
            fh.write(" ".join(str(c) for c in p) + "\n")


def read_map(path: str) -> DigitalMap:
    rows = _lines(path)
    head = rows[0]
    _expect(head[0] == "map" and len(head) == 3, path, "header must be 'map <source> <target>'")
    source = read_image(_resolve(path, head[1]))
    target = read_image(_resolve(path, head[2]))
    table = [-1] * len(source)
    for row in rows[1:]:
        _expect(len(row) == 2, path, f"expected 'i j' pair, got {row}")
        i, j = int(row[0]), int(row[1])
        _expect(0 <= i < len(source), path, f"source index {i} out of range")
        _expect(0 <= j < len(target), path, f"target index {j} out of range")
        _expect(table[i] < 0, path, f"source index {i} assigned twice")
        table[i] = j
    _expect(all(v >= 0 for v in table), path, "table must cover every source point")
    return DigitalMap(source, target, tuple(table))


def write_map(m: DigitalMap, path: str, source_ref: str, target_ref: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"map {source_ref} {target_ref}\n")
        for i, j in enumerate(m.table):
            fh.write(f"{i} {j}\n")


def _read_index_block(rows: Sequence[Sequence[str]], path: str) -> list[int]:
    out = []
    for row in rows:
        _expect(len(row) == 1, path, f"expected one index per line, got {row}")
        out.append(int(row[0]))
    return out


def read_path(path: str) -> FinitePath:
    rows = _lines(path)
    head = rows[0]
    _expect(head[0] == "path" and len(head) == 2, path, "header must be 'path <image>'")
    image = read_image(_resolve(path, head[1]))
    idx = _read_index_block(rows[1:], path)
    _expect(bool(idx), path, "a path needs at least one point")
    try:
        return FinitePath(image, tuple(image.points[i] for i in idx))
    except (IndexError, ValueError) as e:
        raise FormatError(f"{path}: {e}") from None


def write_path(p: FinitePath, path: str, image_ref: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"path {image_ref}\n")
        for i in p.indices():
            fh.write(f"{i}\n")


def read_ecpath(path: str) -> EcPath:
    rows = _lines(path)
    head = rows[0]
    _expect(head[0] == "ecpath" and len(head) == 2, path, "header must be 'ecpath <image>'")
    image = read_image(_resolve(path, head[1]))
    body, tail = _split_ec_body(rows[1:], path)
    try:
        return EcPath(image, tuple(image.points[i] for i in body), image.points[tail])
    except (IndexError, ValueError) as e:
        raise FormatError(f"{path}: {e}") from None


def _split_ec_body(rows: Sequence[Sequence[str]], path: str) -> tuple[list[int], int]:
    _expect(bool(rows), path, "missing 'tail <index>' line")
    tail_row = rows[-1]
    _expect(tail_row[0] == "tail" and len(tail_row) == 2, path, "last line must be 'tail <index>'")
    return _read_index_block(rows[:-1], path), int(tail_row[1])


def write_ecpath(p: EcPath, path: str, image_ref: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"ecpath {image_ref}\n")
        for v in p.prefix:
            fh.write(f"{p.image.index_of(v)}\n")
        fh.write(f"tail {p.image.index_of(p.tail)}\n")


def _stage_blocks(rows: Sequence[Sequence[str]], path: str) -> list[list[Sequence[str]]]:
    blocks: list[list[Sequence[str]]] = []
    cur: list[Sequence[str]] | None = None
    for row in rows:
        if row == ["stage"]:
            cur = []
            blocks.append(cur)
        else:
            _expect(cur is not None, path, "content before the first 'stage' line")
            cur.append(row)
    _expect(bool(blocks), path, "no stages")
    return blocks


def read_map_homotopy(path: str) -> Homotopy:
    rows = _lines(path)
    head = rows[0]
    _expect(head[0] == "maphomotopy" and len(head) == 3, path, "header must be 'maphomotopy <source> <target>'")
    source = read_image(_resolve(path, head[1]))
    target = read_image(_resolve(path, head[2]))
    stages = []
    for block in _stage_blocks(rows[1:], path):
        table = [-1] * len(source)
        for row in block:
            _expect(len(row) == 2, path, f"expected 'i j' pair, got {row}")
            table[int(row[0])] = int(row[1])
        _expect(all(v >= 0 for v in table), path, "stage must cover every source point")
        stages.append(DigitalMap(source, target, tuple(table)))
    return Homotopy(tuple(stages))


def write_map_homotopy(H: Homotopy, path: str, source_ref: str, target_ref: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"maphomotopy {source_ref} {target_ref}\n")
        for stage in H.stages:
            fh.write("stage\n")
            for i, j in enumerate(stage.table):
                fh.write(f"{i} {j}\n")


def read_path_homotopy(path: str) -> PathHomotopy:
    rows = _lines(path)
    head = rows[0]
    _expect(head[0] == "pathhomotopy" and len(head) == 2, path, "header must be 'pathhomotopy <image>'")
    image = read_image(_resolve(path, head[1]))
    stages = []
    for block in _stage_blocks(rows[1:], path):
        idx = _read_index_block(block, path)
        stages.append(FinitePath(image, tuple(image.points[i] for i in idx)))
    return PathHomotopy(tuple(stages))


def write_path_homotopy(H: PathHomotopy, path: str, image_ref: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"pathhomotopy {image_ref}\n")
        for stage in H.stages:
            fh.write("stage\n")
            for i in stage.indices():
                fh.write(f"{i}\n")


def read_ec_homotopy(path: str) -> EcHomotopy:
    rows = _lines(path)
    head = rows[0]
    _expect(head[0] == "echomotopy" and len(head) == 2, path, "header must be 'echomotopy <image>'")
    image = read_image(_resolve(path, head[1]))
    stages = []
    for block in _stage_blocks(rows[1:], path):
        body, tail = _split_ec_body(block, path)
        stages.append(EcPath(image, tuple(image.points[i] for i in body), image.points[tail]))
    return EcHomotopy(tuple(stages))


def write_ec_homotopy(H: EcHomotopy, path: str, image_ref: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"echomotopy {image_ref}\n")
        for stage in H.stages:
            fh.write("stage\n")
            for v in stage.prefix:
                fh.write(f"{stage.image.index_of(v)}\n")
            fh.write(f"tail {stage.image.index_of(stage.tail)}\n")
