"""Independent reference enumerators used to check the engine.

``closure_enumerate`` relies only on the closed-pair characterisation of
maximal bicliques; ``reference_recursive_mbea`` is the plain recursive
search with set copies and none of the engine's optimisations.
"""
from __future__ import annotations

import sys

from .graph import BipartiteGraph

Biclique = tuple[tuple[int, ...], tuple[int, ...]]
BicliqueSet = frozenset


class OracleLimitError(ValueError):
    """The graph is too large for the requested oracle."""


def closure_enumerate(g: BipartiteGraph, subset_side_limit: int = 20) -> frozenset[Biclique]:
    """All ``(N(S), N(N(S)))`` over non-empty subsets ``S`` of U, empty sides dropped.

    Subsets are walked depth-first with bitmasks; once ``N(S)`` is empty every
    superset of ``S`` is empty too, so that branch is cut.
    """
    if g.n_u > subset_side_limit:
        raise OracleLimitError(
            f"candidate side has {g.n_u} vertices, closure oracle limit is {subset_side_limit}")
    adj_u = g.adj_u.lists
    adj_v = g.adj_v.lists
    nbr_u = [sum(1 << v for v in nb) for nb in adj_u]
    nbr_v = [sum(1 << u for u in nb) for nb in adj_v]
    all_u = (1 << g.n_u) - 1

    def bits(mask: int) -> tuple[int, ...]:
        out = []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    found: set[Biclique] = set()
    cache: dict[int, int] = {}
    # (largest vertex in S, N(S) as a V-side bitmask)
    stack = [(u, nbr_u[u]) for u in range(g.n_u - 1, -1, -1)]
    while stack:
        last, lmask = stack.pop()
        if not lmask:
            continue
        rmask = cache.get(lmask)
        if rmask is None:
            rmask = all_u
            m = lmask
            while m:
                low = m & -m
                rmask &= nbr_v[low.bit_length() - 1]
                m ^= low
            cache[lmask] = rmask
            found.add((bits(lmask), bits(rmask)))
        for u in range(g.n_u - 1, last, -1):
            stack.append((u, lmask & nbr_u[u]))
    return frozenset(found)


def reference_recursive_mbea(g: BipartiteGraph, limit: int = 5000) -> frozenset[Biclique]:
    """Recursive MBEA with per-call set copies and candidates popped in ID order."""
    if g.n_u > limit:
        raise OracleLimitError(f"candidate side has {g.n_u} vertices, recursion limit is {limit}")
    adj_u = [set(nb) for nb in g.adj_u.lists]
    found: list[Biclique] = []

    def mbea(L: set[int], R: list[int], P: list[int], Q: list[int]) -> None:
        P = list(P)
        Q = list(Q)
        while P:
            x = P.pop(0)
            R_new = R + [x]
            L_new = {v for v in L if v in adj_u[x]}
            if L_new:
                maximal = True
                Q_new = []
                for v in Q:
                    c = len(adj_u[v] & L_new)
                    if c == len(L_new):
                        maximal = False
                        break
                    if c > 0:
                        Q_new.append(v)
                if maximal:
                    P_new = []
                    for v in P:
                        c = len(adj_u[v] & L_new)
                        if c == len(L_new):
                            R_new.append(v)
                        elif c > 0:
                            P_new.append(v)
                    found.append((tuple(sorted(L_new)), tuple(sorted(R_new))))
                    if P_new:
                        mbea(L_new, R_new, P_new, Q_new)
            Q.append(x)

    # R grows and L shrinks strictly on every call, so depth <= min(n_u, n_v) + 1
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, min(g.n_u, g.n_v) + 200))
    try:
        mbea(set(range(g.n_v)), [], [u for u in range(g.n_u) if adj_u[u]], [])
    finally:
        sys.setrecursionlimit(old)
    result = frozenset(found)
    if len(result) != len(found):
        raise AssertionError("recursive reference emitted a duplicate")
    return result


def is_closed(g: BipartiteGraph, l_side, r_side) -> bool:
    """True iff ``l_side == N(r_side)`` and ``r_side == N(l_side)``, both non-empty."""
    if not l_side or not r_side:
        return False
    adj_u, adj_v = g.adj_u.lists, g.adj_v.lists
    common_v = set.intersection(*(set(adj_u[v]) for v in r_side))
    common_u = set.intersection(*(set(adj_v[u]) for u in l_side))
    return common_v == set(l_side) and common_u == set(r_side)
