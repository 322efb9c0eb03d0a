"""Text file formats: edge lists, coordinates, signals and sampling sets."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .graph import Graph, GraphError, build_graph


class FormatError(ValueError):
    """Malformed input file; ``lineno`` is 1-based."""

    def __init__(self, path, lineno: int | None, msg: str):
        where = f"{path}:{lineno}" if lineno is not None else str(path)
        super().__init__(f"{where}: {msg}")
        self.path = path
        self.lineno = lineno


def _content_lines(path) -> Iterator[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line


def save_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for i, j, w in zip(g.rows, g.cols, g.weights):
            fh.write(f"{i} {j} {float(w)!r}\n")


def load_edge_list(path) -> Graph:
    lines = _content_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise FormatError(path, None, "empty file, expected header 'n m'") from None
    try:
        n, m = (int(tok) for tok in header.split())
    except ValueError:
        raise FormatError(path, lineno, f"bad header {header!r}, expected 'n m'") from None
    if n < 1 or m < 0:
        raise FormatError(path, lineno, f"invalid header values n={n} m={m}")

    edges = []
    for lineno, line in lines:
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(path, lineno, f"expected 'i j w', got {line!r}")
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise FormatError(path, lineno, f"cannot parse {line!r}") from None
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(path, lineno, f"node index out of range for n={n}")
        if i == j:
            raise FormatError(path, lineno, f"self-loop on node {i}")
        if not math.isfinite(w) or w <= 0:
            raise FormatError(path, lineno, f"weight must be positive, got {parts[2]}")
        edges.append((i, j, w))
    if len(edges) != m:
        raise FormatError(path, None, f"header declares {m} edges, found {len(edges)}")
    try:
        return build_graph(n, edges)
    except GraphError as exc:
        raise FormatError(path, None, str(exc)) from exc


def coords_path(path) -> str:
    return os.fspath(path) + ".xy"


def save_coords(xy: np.ndarray, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, (x, y) in enumerate(xy):
            fh.write(f"{i} {float(x)!r} {float(y)!r}\n")


def load_coords(path, n: int) -> np.ndarray:
    xy = np.full((n, 2), np.nan)
    for lineno, line in _content_lines(path):
        parts = line.split()
        try:
            i, x, y = int(parts[0]), float(parts[1]), float(parts[2])
        except (ValueError, IndexError):
            raise FormatError(path, lineno, f"expected 'i x y', got {line!r}") from None
        if not 0 <= i < n:
            raise FormatError(path, lineno, f"node index {i} out of range")
        xy[i] = x, y
    return xy


def save_signal(values, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in np.asarray(values, dtype=np.float64):
            fh.write(f"{float(v)!r}\n")


def load_signal(path) -> np.ndarray:
    values = []
    for lineno, line in _content_lines(path):
        try:
            values.append(float(line))
        except ValueError:
            raise FormatError(path, lineno, f"not a number: {line!r}") from None
    return np.array(values, dtype=np.float64)


@dataclass
class SampleFile:
    nodes: list[int]
    T_hat: float
    valid: bool
    certified_lb: float


def save_sample_set(path, nodes, T_hat: float, valid: bool, certified_lb: float) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# T_hat={float(T_hat)!r} valid={int(bool(valid))} "
                 f"certified_lb={float(certified_lb)!r}\n")
        for v in nodes:
            fh.write(f"{int(v)}\n")


def load_sample_set(path) -> SampleFile:
    meta = {"T_hat": "nan", "valid": "0", "certified_lb": "nan"}
    nodes = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, sep, val = tok.partition("=")
                    if sep and key in meta:
                        meta[key] = val
                continue
            try:
                nodes.append(int(line))
            except ValueError:
                raise FormatError(path, lineno, f"not a node index: {line!r}") from None
    if len(set(nodes)) != len(nodes):
        raise FormatError(path, None, "duplicate node in sampling set")
    return SampleFile(
        nodes=nodes,
        T_hat=float(meta["T_hat"]),
        valid=meta["valid"] == "1",
        certified_lb=float(meta["certified_lb"]),
    )
