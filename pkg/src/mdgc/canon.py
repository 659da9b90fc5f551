"""Canonical vertex labellings of coloured multigraphs and core-graph enumeration.

A core key is ``(v, edges)`` with ``edges`` a sorted tuple of normalized edges
``(a, b, cols)``: ``a <= b`` and, for a tadpole, ``cols`` is the smaller of the
colour row and its negation.  Edge labels and core directions are irrelevant
for the key, since reversing an edge only changes its type (handled by the
caller).

The canonical form is the lexicographically smallest relabelled key over all
leaves of an individualization-refinement search.  The set of leaves that
reach it is a coset of the vertex automorphism group, which is exactly what
the sign bookkeeping of typed graphs needs.
"""
from __future__ import annotations

from typing import Iterable, Sequence

Cols = tuple[int, ...]
NormEdge = tuple[int, int, Cols]
CoreKey = tuple[NormEdge, ...]


def neg(cols: Cols) -> Cols:
    return tuple(-s for s in cols)


def norm_edge(t: int, h: int, cols: Cols) -> NormEdge:
    if t < h:
        return (t, h, cols)
    if t > h:
        return (h, t, neg(cols))
    nc = neg(cols)
    return (t, t, cols if cols <= nc else nc)


def core_key(edges: Iterable[tuple]) -> CoreKey:
    return tuple(sorted(norm_edge(e[0], e[1], e[2]) for e in edges))


def _rank(keys: Sequence) -> list[int]:
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _adjacency(v: int, key: CoreKey) -> tuple[list[list[tuple[Cols, int]]], list[tuple]]:
    adj: list[list[tuple[Cols, int]]] = [[] for _ in range(v + 1)]
    loops: list[list[Cols]] = [[] for _ in range(v + 1)]
    for a, b, cols in key:
        if a == b:
            loops[a].append(cols)
        else:
            adj[a].append((cols, b))
            adj[b].append((neg(cols), a))
    init = [()] + [(len(adj[x]) + 2 * len(loops[x]), tuple(sorted(loops[x])),
                    tuple(sorted(c for c, _ in adj[x]))) for x in range(1, v + 1)]
    return adj, init


def _refine(colors: list[int], adj: list[list[tuple[Cols, int]]]) -> list[int]:
    v = len(colors) - 1
    ncol = len(set(colors[1:]))
    while True:
        sigs = [()] + [(colors[x], tuple(sorted((c, colors[y]) for c, y in adj[x])))
                       for x in range(1, v + 1)]
        new = [0] + _rank(sigs[1:])
        k = len(set(new[1:]))
        colors = new
        if k == ncol:
            return colors
        ncol = k


def _leaves(colors: list[int], adj) -> Iterable[list[int]]:
    colors = _refine(colors, adj)
    v = len(colors) - 1
    counts: dict[int, int] = {}
    for c in colors[1:]:
        counts[c] = counts.get(c, 0) + 1
    cell = min((c for c, m in counts.items() if m > 1), default=None)
    if cell is None:
        yield colors
        return
    for w in range(1, v + 1):
        if colors[w] != cell:
            continue
        keys = [(-1, 0)] + [(colors[x], 0 if x == w else 1) for x in range(1, v + 1)]
        yield from _leaves([0] + _rank(keys[1:]), adj)


def perm_parity(perm: Sequence[int]) -> int:
    """Parity (0/1) of a permutation given as a 1-based list with a dummy entry 0."""
    n = len(perm) - 1
    seen = [False] * (n + 1)
    parity = 0
    for i in range(1, n + 1):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def relabel_key(key: CoreKey, perm: Sequence[int]) -> CoreKey:
    return tuple(sorted(norm_edge(perm[a], perm[b], cols) for a, b, cols in key))


_CACHE: dict[tuple[int, CoreKey], tuple[CoreKey, tuple[tuple[tuple[int, ...], int], ...]]] = {}


def canonical_core(v: int, key: CoreKey) -> tuple[CoreKey, tuple[tuple[tuple[int, ...], int], ...]]:
    """Canonical key and every relabelling reaching it, each with its parity."""
    hit = _CACHE.get((v, key))
    if hit is not None:
        return hit
    adj, init = _adjacency(v, key)
    colors = [0] + _rank(init[1:])
    best: CoreKey | None = None
    perms: list[tuple[tuple[int, ...], int]] = []
    for leaf in _leaves(colors, adj):
        perm = tuple(c + 1 for c in leaf)
        perm = (0,) + perm[1:]
        enc = relabel_key(key, perm)
        if best is None or enc < best:
            best, perms = enc, [(perm, perm_parity(perm))]
        elif enc == best:
            perms.append((perm, perm_parity(perm)))
    if best is None:  # v == 0
        best, perms = key, [((0,), 0)]
    out = (best, tuple(perms))
    if len(_CACHE) > 2_000_000:
        _CACHE.clear()
    _CACHE[(v, key)] = out
    return out


def clear_cache() -> None:
    _CACHE.clear()


def enumerate_cores(v: int, e: int, *, connected: bool = True, min_valence: int = 0,
                    loops: bool = True, max_multiplicity: int | None = None,
                    max_loops_per_vertex: int | None = None) -> list[CoreKey]:
    """Isomorphism classes of uncoloured multigraphs, by adding one edge at a time."""
    pairs = [(a, b) for a in range(1, v + 1) for b in range(a, v + 1) if loops or a != b]
    level: set[CoreKey] = {()}
    for placed in range(e):
        remaining = e - placed - 1
        nxt: set[CoreKey] = set()
        for key in level:
            val = [0] * (v + 1)
            mult: dict[tuple[int, int], int] = {}
            for a, b, _ in key:
                val[a] += 1
                val[b] += 1
                mult[(a, b)] = mult.get((a, b), 0) + 1
            for a, b in pairs:
                m = mult.get((a, b), 0) + 1
                if a == b and max_loops_per_vertex is not None and m > max_loops_per_vertex:
                    continue
                if a != b and max_multiplicity is not None and m > max_multiplicity:
                    continue
                val[a] += 1
                val[b] += 1
                deficit = sum(max(0, min_valence - val[x]) for x in range(1, v + 1))
                val[a] -= 1
                val[b] -= 1
                if deficit > 2 * remaining:
                    continue
                new = tuple(sorted(key + ((a, b, ()),)))
                nxt.add(canonical_core(v, new)[0])
        level = nxt
    out = []
    for key in sorted(level):
        val = [0] * (v + 1)
        for a, b, _ in key:
            val[a] += 1
            val[b] += 1
        if any(val[x] < min_valence for x in range(1, v + 1)):
            continue
        if connected and not _is_connected(v, key):
            continue
        out.append(key)
    return out


def _is_connected(v: int, key: CoreKey) -> bool:
    if v <= 1:
        return True
    parent = list(range(v + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in key:
        parent[find(a)] = find(b)
    return len({find(x) for x in range(1, v + 1)}) == 1
