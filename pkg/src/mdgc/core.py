"""Core graphs: labelled multigraphs with oriented edges and optional colours.

Vertices and edges carry consecutive 1-based labels.  An edge ``a`` is a pair
``(tail, head)``; a tadpole has ``tail == head``.  A multi-directed core graph
additionally stores, for every edge and every colour, a sign ``o_c(a)`` that
says whether the colour direction agrees (+1) or disagrees (-1) with the core
direction of the edge.

Colours are split into three consecutive groups: ``j`` oriented colours (no
cycles allowed), ``k`` sourced colours (a source is required) and ``l`` plain
colours.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence


class ConfigurationError(ValueError):
    """Raised for malformed graphs, modules or family descriptions."""


@dataclass(frozen=True)
class CoreGraph:
    v: int
    endpoints: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.v < 0:
            raise ConfigurationError(f"negative vertex count {self.v}")
        eps = tuple((int(t), int(h)) for t, h in self.endpoints)
        for a, (t, h) in enumerate(eps, start=1):
            if not (1 <= t <= self.v and 1 <= h <= self.v):
                raise ConfigurationError(
                    f"edge {a} has endpoint outside 1..{self.v}: ({t}, {h})")
        object.__setattr__(self, "endpoints", eps)

    @property
    def e(self) -> int:
        return len(self.endpoints)

    @property
    def loop_number(self) -> int:
        return self.e - self.v

    def tail(self, a: int) -> int:
        return self.endpoints[a - 1][0]

    def head(self, a: int) -> int:
        return self.endpoints[a - 1][1]


@dataclass(frozen=True)
class MultiDirectedCoreGraph:
    base: CoreGraph
    j: int = 0
    k: int = 0
    l: int = 0
    orient: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self) -> None:
        for name in ("j", "k", "l"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"negative colour count {name}")
        nc = self.j + self.k + self.l
        orient = self.orient
        if not orient and self.base.e:
            orient = tuple((1,) * nc for _ in range(self.base.e))
        orient = tuple(tuple(int(s) for s in row) for row in orient)
        if len(orient) != self.base.e:
            raise ConfigurationError("one colour row per edge is required")
        for row in orient:
            if len(row) != nc or any(s not in (1, -1) for s in row):
                raise ConfigurationError(f"bad colour row {row}")
        object.__setattr__(self, "orient", orient)

    @property
    def v(self) -> int:
        return self.base.v

    @property
    def e(self) -> int:
        return self.base.e

    @property
    def ncolours(self) -> int:
        return self.j + self.k + self.l

    def colour_role(self, c: int) -> str:
        self._check_colour(c)
        if c < self.j:
            return "oriented"
        if c < self.j + self.k:
            return "sourced"
        return "plain"

    def _check_colour(self, c: int) -> None:
        if not (0 <= c < self.ncolours):
            raise ConfigurationError(f"unknown colour {c}")

    def colour_head(self, a: int, c: int) -> int:
        t, h = self.base.endpoints[a - 1]
        return h if self.orient[a - 1][c] == 1 else t

    def colour_tail(self, a: int, c: int) -> int:
        t, h = self.base.endpoints[a - 1]
        return t if self.orient[a - 1][c] == 1 else h


AnyGraph = CoreGraph | MultiDirectedCoreGraph


def _base(g: AnyGraph) -> CoreGraph:
    return g.base if isinstance(g, MultiDirectedCoreGraph) else g


def _check_edge(g: CoreGraph, a: int) -> None:
    if not (1 <= a <= g.e):
        raise ConfigurationError(f"edge {a} not in 1..{g.e}")


def _check_vertex(g: CoreGraph, x: int) -> None:
    if not (1 <= x <= g.v):
        raise ConfigurationError(f"vertex {x} not in 1..{g.v}")


def is_tadpole(g: AnyGraph, a: int) -> bool:
    b = _base(g)
    _check_edge(b, a)
    t, h = b.endpoints[a - 1]
    return t == h


def valence(g: AnyGraph, x: int) -> int:
    """Number of edge ends at ``x``; a tadpole contributes two."""
    b = _base(g)
    _check_vertex(b, x)
    return sum((t == x) + (h == x) for t, h in b.endpoints)


def valences(g: AnyGraph) -> list[int]:
    b = _base(g)
    val = [0] * (b.v + 1)
    for t, h in b.endpoints:
        val[t] += 1
        val[h] += 1
    return val[1:]


def connected_components(g: AnyGraph) -> list[list[int]]:
    b = _base(g)
    parent = list(range(b.v + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, h in b.endpoints:
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[max(rt, rh)] = min(rt, rh)
    comps: dict[int, list[int]] = {}
    for x in range(1, b.v + 1):
        comps.setdefault(find(x), []).append(x)
    return sorted(comps.values())


def is_connected(g: AnyGraph) -> bool:
    return len(connected_components(g)) <= 1


def is_source(g: MultiDirectedCoreGraph, c: int, x: int) -> bool:
    """True if no edge has its colour-``c`` head at ``x``."""
    g._check_colour(c)
    _check_vertex(g.base, x)
    return all(g.colour_head(a, c) != x for a in range(1, g.e + 1))


def has_colour_cycle(g: MultiDirectedCoreGraph, c: int) -> bool:
    """Directed cycle in colour ``c``; a tadpole counts as a cycle."""
    g._check_colour(c)
    succ: list[list[int]] = [[] for _ in range(g.v + 1)]
    for a in range(1, g.e + 1):
        succ[g.colour_tail(a, c)].append(g.colour_head(a, c))
    return _has_directed_cycle(g.v, succ)


def _has_directed_cycle(v: int, succ: Sequence[Sequence[int]]) -> bool:
    indeg = [0] * (v + 1)
    for x in range(1, v + 1):
        for y in succ[x]:
            indeg[y] += 1
    stack = [x for x in range(1, v + 1) if indeg[x] == 0]
    seen = 0
    while stack:
        x = stack.pop()
        seen += 1
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                stack.append(y)
    return seen < v


def edge_ends(g: AnyGraph, x: int) -> list[tuple[int, int]]:
    """Edge ends ``(a, mu)`` at ``x``; ``mu`` is -1 for a tail end, +1 for a head end."""
    b = _base(g)
    ends = []
    for a, (t, h) in enumerate(b.endpoints, start=1):
        if t == x:
            ends.append((a, -1))
        if h == x:
            ends.append((a, 1))
    return ends


def is_passing(g: AnyGraph, x: int) -> bool:
    """2-valent with one incoming and one outgoing end in every colour."""
    ends = edge_ends(g, x)
    if len(ends) != 2:
        return False
    if not isinstance(g, MultiDirectedCoreGraph):
        return True
    (a, mu), (b, nu) = ends
    oa, ob = g.orient[a - 1], g.orient[b - 1]
    return all(mu * oa[c] * nu * ob[c] == -1 for c in range(g.ncolours))


def reverse_edge(g: AnyGraph, a: int) -> AnyGraph:
    """Swap tail and head of ``a``; colour signs flip so colour directions stay put."""
    b = _base(g)
    _check_edge(b, a)
    eps = list(b.endpoints)
    t, h = eps[a - 1]
    eps[a - 1] = (h, t)
    nb = CoreGraph(b.v, tuple(eps))
    if isinstance(g, MultiDirectedCoreGraph):
        orient = list(g.orient)
        orient[a - 1] = tuple(-s for s in orient[a - 1])
        return MultiDirectedCoreGraph(nb, g.j, g.k, g.l, tuple(orient))
    return nb


def permute(g: AnyGraph, vperm: Sequence[int], eperm: Sequence[int]) -> AnyGraph:
    """Relabel: old vertex ``x`` becomes ``vperm[x-1]``, old edge ``a`` becomes ``eperm[a-1]``."""
    b = _base(g)
    if sorted(vperm) != list(range(1, b.v + 1)) or sorted(eperm) != list(range(1, b.e + 1)):
        raise ConfigurationError("relabelling must be a bijection")
    eps: list[tuple[int, int]] = [(0, 0)] * b.e
    for a, (t, h) in enumerate(b.endpoints, start=1):
        eps[eperm[a - 1] - 1] = (vperm[t - 1], vperm[h - 1])
    nb = CoreGraph(b.v, tuple(eps))
    if isinstance(g, MultiDirectedCoreGraph):
        orient: list[tuple[int, ...]] = [()] * b.e
        for a in range(1, b.e + 1):
            orient[eperm[a - 1] - 1] = g.orient[a - 1]
        return MultiDirectedCoreGraph(nb, g.j, g.k, g.l, tuple(orient))
    return nb


def spanning_trees(g: AnyGraph) -> Iterator[frozenset[int]]:
    """All spanning trees as sets of edge labels; tadpoles never occur in a tree."""
    b = _base(g)
    if b.v == 0:
        return
    if not is_connected(b):
        return
    edges = [a for a in range(1, b.e + 1) if not is_tadpole(b, a)]
    need = b.v - 1

    def rec(i: int, chosen: list[int], parent: list[int]) -> Iterator[frozenset[int]]:
        if len(chosen) == need:
            yield frozenset(chosen)
            return
        if len(edges) - i < need - len(chosen):
            return
        a = edges[i]
        t, h = b.endpoints[a - 1]

        def find(p: list[int], x: int) -> int:
            while p[x] != x:
                x = p[x]
            return x

        rt, rh = find(parent, t), find(parent, h)
        if rt != rh:
            p2 = parent.copy()
            p2[max(rt, rh)] = min(rt, rh)
            yield from rec(i + 1, chosen + [a], p2)
        yield from rec(i + 1, chosen, parent)

    yield from rec(0, [], list(range(b.v + 1)))


def count_spanning_trees_det(g: AnyGraph) -> int:
    """Matrix-tree theorem: any cofactor of the loopless Laplacian."""
    b = _base(g)
    if b.v <= 1:
        return 1 if b.v == 1 else 0
    lap = [[Fraction(0)] * b.v for _ in range(b.v)]
    for t, h in b.endpoints:
        if t == h:
            continue
        lap[t - 1][t - 1] += 1
        lap[h - 1][h - 1] += 1
        lap[t - 1][h - 1] -= 1
        lap[h - 1][t - 1] -= 1
    m = [row[1:] for row in lap[1:]]
    return int(_det(m))


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in m]
    size = len(m)
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, size):
            if m[r][c]:
                f = m[r][c] / m[c][c]
                for k in range(c, size):
                    m[r][k] -= f * m[c][k]
    return det


def bfs_tree(g: AnyGraph, root: int | None = None) -> list[int]:
    """Tree edges in BFS order from ``root`` (default: last vertex), lowest labels first.

    Every prefix of the returned list is a subtree containing the root.
    """
    b = _base(g)
    root = b.v if root is None else root
    seen = {root}
    order: list[int] = []
    queue = [root]
    while queue:
        x = queue.pop(0)
        for a, (t, h) in enumerate(b.endpoints, start=1):
            if t == h or x not in (t, h):
                continue
            y = h if t == x else t
            if y not in seen:
                seen.add(y)
                order.append(a)
                queue.append(y)
    return order


# ---------------------------------------------------------------- text format

def format_graph(g: AnyGraph) -> str:
    """Header ``v e j k l`` then one ``a tail head s_1 .. s_{j+k+l}`` line per edge."""
    md = g if isinstance(g, MultiDirectedCoreGraph) else MultiDirectedCoreGraph(g)
    lines = [f"{md.v} {md.e} {md.j} {md.k} {md.l}"]
    for a, (t, h) in enumerate(md.base.endpoints, start=1):
        signs = " ".join("+" if s == 1 else "-" for s in md.orient[a - 1])
        lines.append(f"{a} {t} {h} {signs}".rstrip())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> MultiDirectedCoreGraph:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 5:
        raise ConfigurationError("graph header must be 'v e j k l'")
    v, e, j, k, l = (int(x) for x in rows[0])
    if len(rows) - 1 != e:
        raise ConfigurationError(f"expected {e} edge lines, got {len(rows) - 1}")
    eps, orient = [], []
    for i, row in enumerate(rows[1:], start=1):
        if int(row[0]) != i or len(row) != 3 + j + k + l:
            raise ConfigurationError(f"malformed edge line {' '.join(row)}")
        eps.append((int(row[1]), int(row[2])))
        orient.append(tuple(1 if s == "+" else -1 for s in row[3:]))
    return MultiDirectedCoreGraph(CoreGraph(v, tuple(eps)), j, k, l, tuple(orient))
