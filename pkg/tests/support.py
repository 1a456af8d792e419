"""Shared fixtures data: dataset lookup, seeded random graphs, skewed workloads."""
from __future__ import annotations

import os
import random
from pathlib import Path

import numpy as np
import pytest

from bicliques.graph import BipartiteGraph, load_edge_list, random_bipartite

REPO = Path(__file__).resolve().parent.parent

# Maximal biclique counts of the public datasets (file stem -> count).
KNOWN_COUNTS = {
    "corporate-leadership": 66,
    "unicode": 460,
    "ucforum": 16_261,
    "movielens-u-t": 166_380,
    "movielens-t-i": 140_266,
    "marvel": 206_135,
    "movielens-u-i": 2_365_457,
    "youtube": 1_826_587,
}


def data_dir() -> Path:
    return Path(os.environ.get("MBE_DATA_DIR", REPO / "data"))


def dataset_path(name: str) -> Path:
    return data_dir() / f"{name}.txt"


def load_dataset(name: str) -> BipartiteGraph:
    """Load a KONECT-style dataset or skip the calling test as blocked."""
    path = dataset_path(name)
    if not path.is_file():
        pytest.skip(f"BLOCKED: dataset missing: {path} (fetch with scripts/fetch_datasets.py)")
    return load_edge_list(path, one_based=True)


def random_cases(count: int, max_side: int, seed: int, p_lo: float = 0.1, p_hi: float = 0.9):
    """Yield ``(case_seed, graph)`` for ``count`` reproducible random graphs."""
    rng = random.Random(seed)
    for _ in range(count):
        case_seed = rng.randrange(2**31)
        n_u = rng.randint(1, max_side)
        n_v = rng.randint(1, max_side)
        p = rng.uniform(p_lo, p_hi)
        yield case_seed, random_bipartite(n_u, n_v, p, seed=case_seed)


def skewed_graph(seed: int = 0, p: float = 0.5, core: int = 24, n_stars: int = 500,
                 leaves: int = 3) -> BipartiteGraph:
    """A 40x40 dense community plus ``n_stars`` disjoint stars.

    Inside the community, vertex 0 of the candidate side sees only the first
    ``core`` columns while the other 39 rows see the core at density ``p`` and
    every remaining column.  Vertex 0 then has the lowest degree of the
    community and sits in roughly half of its maximal bicliques, so the first
    community subtree carries a large share of all work.
    """
    rng = np.random.default_rng(seed)
    edges = [(0, v) for v in range(core)]
    for u in range(1, 40):
        for v in range(40):
            if v >= core or rng.random() < p:
                edges.append((u, v))
    n_u, n_v = 40, 40
    for _ in range(n_stars):
        for _ in range(leaves):
            edges.append((n_u, n_v))
            n_v += 1
        n_u += 1
    return BipartiteGraph.from_edges(edges, n_u=n_u, n_v=n_v)


def as_set(found) -> frozenset:
    return frozenset((tuple(l), tuple(r)) for l, r in found)
