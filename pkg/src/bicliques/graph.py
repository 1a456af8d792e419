"""Immutable bipartite graphs in compressed sorted-adjacency (CSR) form.

Side ``U`` is the candidate side (the one the search pops vertices from) and
side ``V`` is the other side.  After :func:`normalize_sides` the candidate
side is never the larger one.
"""
from __future__ import annotations

import enum
import io
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import BinaryIO, Iterable, TextIO, Union

import numpy as np


class Side(enum.Enum):
    U = "U"
    V = "V"


class EdgeListError(ValueError):
    """Base class for edge-list loading problems."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class ParseError(EdgeListError):
    pass


class VertexIndexError(EdgeListError, IndexError):
    pass


@dataclass(frozen=True)
class Adjacency:
    """One side's neighbor lists, stored as ``offsets`` + flat ``targets``."""

    offsets: np.ndarray
    targets: np.ndarray

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def __getitem__(self, v: int) -> np.ndarray:
        view = self.targets[self.offsets[v]:self.offsets[v + 1]]
        view.flags.writeable = False
        return view

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def lists(self) -> list[list[int]]:
        # Plain Python lists are much faster to iterate in the search loops
        # than numpy slices.
        flat = self.targets.tolist()
        off = self.offsets.tolist()
        return [flat[off[i]:off[i + 1]] for i in range(len(off) - 1)]

    @classmethod
    def from_pairs(cls, n: int, src: np.ndarray, dst: np.ndarray) -> "Adjacency":
        # pairs must be deduplicated; sort by (src, dst)
        order = np.lexsort((dst, src))
        targets = np.ascontiguousarray(dst[order], dtype=np.int64)
        targets.flags.writeable = False
        counts = np.bincount(src, minlength=n) if len(src) else np.zeros(n, np.int64)
        offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        offsets.flags.writeable = False
        return cls(offsets, targets)


@dataclass(frozen=True)
class BipartiteGraph:
    n_u: int
    n_v: int
    adj_u: Adjacency
    adj_v: Adjacency
    swapped: bool = False
    # internal dense ID -> original input ID
    u_labels: np.ndarray = field(default=None, repr=False, compare=False)
    v_labels: np.ndarray = field(default=None, repr=False, compare=False)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n_u: int | None = None,
                   n_v: int | None = None) -> "BipartiteGraph":
        """Build from ``(u, v)`` pairs over dense IDs; duplicates collapse."""
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if len(arr):
            arr = np.unique(arr, axis=0)
            if arr.min() < 0:
                raise VertexIndexError("negative vertex ID")
        if n_u is None:
            n_u = int(arr[:, 0].max()) + 1 if len(arr) else 0
        if n_v is None:
            n_v = int(arr[:, 1].max()) + 1 if len(arr) else 0
        if len(arr) and (arr[:, 0].max() >= n_u or arr[:, 1].max() >= n_v):
            raise VertexIndexError("vertex ID outside declared side size")
        src, dst = arr[:, 0], arr[:, 1]
        return cls(
            n_u=n_u,
            n_v=n_v,
            adj_u=Adjacency.from_pairs(n_u, src, dst),
            adj_v=Adjacency.from_pairs(n_v, dst, src),
            u_labels=np.arange(n_u, dtype=np.int64),
            v_labels=np.arange(n_v, dtype=np.int64),
        )

    @property
    def n_edges(self) -> int:
        return len(self.adj_u.targets)

    def neighbors(self, side: Side, v: int) -> np.ndarray:
        adj, n = (self.adj_u, self.n_u) if side is Side.U else (self.adj_v, self.n_v)
        if not 0 <= v < n:
            raise IndexError(f"vertex {v} out of range for side {side.value} (size {n})")
        return adj[v]

    def edges(self) -> set[tuple[int, int]]:
        """Edge set as ``(u, v)`` pairs reconstructed from ``adj_u``."""
        src = np.repeat(np.arange(self.n_u), self.adj_u.degrees())
        return set(zip(src.tolist(), self.adj_u.targets.tolist()))

    def edges_from_v(self) -> set[tuple[int, int]]:
        src = np.repeat(np.arange(self.n_v), self.adj_v.degrees())
        return set(zip(self.adj_v.targets.tolist(), src.tolist()))

    def check(self) -> None:
        """Raise AssertionError if the two adjacency directions disagree."""
        for adj in (self.adj_u, self.adj_v):
            for v in range(len(adj)):
                nb = adj[v]
                assert np.all(np.diff(nb) > 0), f"neighbor list of {v} not strictly increasing"
        assert self.edges() == self.edges_from_v()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.n_u == other.n_u
            and self.n_v == other.n_v
            and self.swapped == other.swapped
            and np.array_equal(self.adj_u.offsets, other.adj_u.offsets)
            and np.array_equal(self.adj_u.targets, other.adj_u.targets)
            and np.array_equal(self.adj_v.offsets, other.adj_v.offsets)
            and np.array_equal(self.adj_v.targets, other.adj_v.targets)
            and np.array_equal(self.u_labels, other.u_labels)
            and np.array_equal(self.v_labels, other.v_labels)
        )

    __hash__ = None


def normalize_sides(raw: BipartiteGraph) -> BipartiteGraph:
    """Exchange sides when needed so that ``n_u <= n_v``.  Ties keep orientation."""
    if raw.n_u <= raw.n_v:
        return raw
    return BipartiteGraph(
        n_u=raw.n_v,
        n_v=raw.n_u,
        adj_u=raw.adj_v,
        adj_v=raw.adj_u,
        swapped=not raw.swapped,
        u_labels=raw.v_labels,
        v_labels=raw.u_labels,
    )


Source = Union[str, os.PathLike, BinaryIO, TextIO, bytes]


def _lines(source: Source) -> Iterable[str]:
    if isinstance(source, bytes):
        yield from io.StringIO(source.decode())
        return
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from fh
        return
    for line in source:
        yield line.decode() if isinstance(line, bytes) else line


def load_edge_list(source: Source, one_based: bool = False, allow_comments: bool = True,
                   header: bool = False) -> BipartiteGraph:
    """Read ``u v`` pairs (one edge per line) into a normalized graph.

    The first column is side U, the second side V.  Columns past the second
    (KONECT weights and timestamps) are ignored.  IDs are remapped densely
    per side; the original IDs are kept in ``u_labels``/``v_labels``.
    With ``header`` set, the first non-comment line (``|E| |U| |V|``) is
    skipped.
    """
    base = 1 if one_based else 0
    us: list[int] = []
    vs: list[int] = []
    skip_header = header
    for lineno, line in enumerate(_lines(source), start=1):
        tokens = line.split()
        if not tokens:
            continue
        if allow_comments and tokens[0][0] in "%#":
            continue
        if skip_header:
            skip_header = False
            continue
        if len(tokens) < 2:
            raise ParseError(f"expected two vertex IDs, got {line.strip()!r}", lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer vertex ID in {line.strip()!r}", lineno) from None
        if u < base or v < base:
            raise VertexIndexError(f"vertex ID below {base} in {line.strip()!r}", lineno)
        us.append(u)
        vs.append(v)

    u_raw = np.asarray(us, dtype=np.int64)
    v_raw = np.asarray(vs, dtype=np.int64)
    u_labels, u_dense = np.unique(u_raw, return_inverse=True)
    v_labels, v_dense = np.unique(v_raw, return_inverse=True)
    g = BipartiteGraph.from_edges(
        zip(u_dense.reshape(-1).tolist(), v_dense.reshape(-1).tolist()),
        n_u=len(u_labels),
        n_v=len(v_labels),
    )
    g = BipartiteGraph(g.n_u, g.n_v, g.adj_u, g.adj_v, False, u_labels, v_labels)
    return normalize_sides(g)


def random_bipartite(n_u: int, n_v: int, p: float, seed=None) -> BipartiteGraph:
    """Erdos-Renyi style bipartite graph; vertex counts are kept even if isolated."""
    rng = np.random.default_rng(seed)
    mask = rng.random((n_u, n_v)) < p
    us, vs = np.nonzero(mask)
    return BipartiteGraph.from_edges(zip(us.tolist(), vs.tolist()), n_u=n_u, n_v=n_v)


def write_edge_list(g: BipartiteGraph, dest: TextIO, one_based: bool = False) -> None:
    base = 1 if one_based else 0
    for u, v in sorted(g.edges()):
        dest.write(f"{u + base} {v + base}\n")
