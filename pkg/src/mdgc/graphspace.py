"""Typed graph representatives, canonical forms with signs, families and bases.

A representative is ``BaseGraphRep(v, edges)`` where every edge is a tuple
``(tail, head, cols, ty)``: 1-based endpoints, a row of colour signs and the
index of its type in the family's edge module.  The edge label of an edge is
its position (1-based).

A graph class is the canonical representative returned by
:func:`canonicalize`, together with the sign relating it to the input:
``[rep] = sign * [canonical]``.  Classes with an odd symmetry are ``None``.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

from . import canon
from .core import ConfigurationError, CoreGraph, MultiDirectedCoreGraph
from .edgetypes import DgS2Module, make_sigma_fix, make_sigma_pm, make_sigma_sk, make_sigma_u

Edge = tuple[int, int, tuple[int, ...], int]


class BaseGraphRep(NamedTuple):
    v: int
    edges: tuple[Edge, ...]

    @property
    def e(self) -> int:
        return len(self.edges)

    def core(self, j: int = 0, k: int = 0, l: int = 0) -> MultiDirectedCoreGraph:
        base = CoreGraph(self.v, tuple((t, h) for t, h, _, _ in self.edges))
        nc = j + k + l
        orient = tuple(cols if nc else () for _, _, cols, _ in self.edges)
        return MultiDirectedCoreGraph(base, j, k, l, orient)


def degree(rep: BaseGraphRep, mod: DgS2Module) -> int:
    return rep.v * mod.n - mod.n + sum(mod.degree[e[3]] for e in rep.edges)


def canonicalize(rep: BaseGraphRep, mod: DgS2Module) -> tuple[BaseGraphRep | None, int]:
    """Canonical representative of the class of ``rep`` and the sign ``rep = sign * canon``.

    Returns ``(None, 0)`` when some symmetry maps ``rep`` to minus itself.
    """
    v, edges = rep
    ckey, leaves = canon.canonical_core(v, canon.core_key(edges))
    vodd = mod.n % 2 == 1
    rev = mod.rev
    odd = mod.odd
    best = None
    best_sign = 0
    for perm, parity in leaves:
        sign = -1 if (vodd and parity) else 1
        items = []
        for idx, (t, h, cols, ty) in enumerate(edges):
            a, b = perm[t], perm[h]
            if a == b:
                nc = canon.neg(cols)
                if cols == nc:
                    ty2, s = rev[ty]
                    if ty2 == ty:
                        if s == -1:
                            return None, 0
                    elif ty2 < ty:
                        ty, sign = ty2, sign * s
                elif cols > nc:
                    cols = nc
                    ty, s = rev[ty]
                    sign *= s
            elif a > b:
                a, b, cols = b, a, canon.neg(cols)
                ty, s = rev[ty]
                sign *= s
            items.append((a, b, cols, ty, idx))
        items.sort()
        seq = []
        prev = None
        for it in items:
            cur = it[:4]
            if odd[it[3]]:
                if cur == prev:
                    return None, 0
                seq.append(it[4])
            prev = cur
        inv = 0
        for i in range(len(seq)):
            si = seq[i]
            for j in range(i + 1, len(seq)):
                if seq[j] < si:
                    inv ^= 1
        if inv:
            sign = -sign
        enc = tuple(it[:4] for it in items)
        if best is None or enc < best:
            best, best_sign = enc, sign
        elif enc == best and sign != best_sign:
            return None, 0
    return BaseGraphRep(v, best), best_sign


def apply_symmetry(rep: BaseGraphRep, mod: DgS2Module, vperm: Sequence[int],
                   eperm: Sequence[int], flips: Sequence[bool]) -> tuple[BaseGraphRep, int]:
    """Act by reversals ``flips`` then the relabelling; returns ``(new, sign)`` with
    ``[rep] = sign * [new]``.

    ``vperm[x-1]`` is the new label of vertex ``x``; ``eperm[a-1]`` that of edge ``a``.
    """
    sign = 1
    flipped = []
    for (t, h, cols, ty), f in zip(rep.edges, flips):
        if f:
            ty2, s = mod.rev[ty]
            sign *= s
            flipped.append((h, t, canon.neg(cols), ty2))
        else:
            flipped.append((t, h, cols, ty))
    new: list[Edge | None] = [None] * rep.e
    for a, (t, h, cols, ty) in enumerate(flipped):
        new[eperm[a] - 1] = (vperm[t - 1], vperm[h - 1], cols, ty)
    sign *= relabel_sign(rep, mod, vperm, eperm)
    return BaseGraphRep(rep.v, tuple(new)), sign  # type: ignore[arg-type]


def relabel_sign(rep: BaseGraphRep, mod: DgS2Module, vperm: Sequence[int],
                 eperm: Sequence[int]) -> int:
    """Sign of a relabelling: ``sgn(vertex part)^n`` times the sign on odd edges."""
    sign = 1
    if mod.n % 2 and canon.perm_parity((0,) + tuple(vperm)):
        sign = -sign
    seq = [eperm[a] for a, e in enumerate(rep.edges) if mod.odd[e[3]]]
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -sign if inv % 2 else sign


# ------------------------------------------------------------------ predicates

def valence_list(rep: BaseGraphRep) -> list[int]:
    val = [0] * (rep.v + 1)
    for t, h, _, _ in rep.edges:
        val[t] += 1
        val[h] += 1
    return val


def _ends(rep: BaseGraphRep, x: int) -> list[tuple[int, int]]:
    out = []
    for a, (t, h, _, _) in enumerate(rep.edges):
        if t == x:
            out.append((a, -1))
        if h == x:
            out.append((a, 1))
    return out


def colour_passing(rep: BaseGraphRep, x: int) -> bool:
    ends = _ends(rep, x)
    if len(ends) != 2:
        return False
    (a, m), (b, nu) = ends
    ca, cb = rep.edges[a][2], rep.edges[b][2]
    return all(m * sa * nu * sb == -1 for sa, sb in zip(ca, cb))


def _type_dir(mod: DgS2Module, ty: int) -> int:
    nm = mod.names[ty]
    if nm == ">":
        return 1
    if nm == "<":
        return -1
    return 0


def strongly_passing(rep: BaseGraphRep, mod: DgS2Module, x: int) -> bool:
    """Passing in every colour and also in the direction carried by a ``>``/``<`` type."""
    if not colour_passing(rep, x):
        return False
    (a, m), (b, nu) = _ends(rep, x)
    da, db = _type_dir(mod, rep.edges[a][3]), _type_dir(mod, rep.edges[b][3])
    if da == 0 or db == 0:
        return False
    return m * da * nu * db == -1


def type_arrows(rep: BaseGraphRep, mod: DgS2Module) -> list[tuple[int, int]]:
    """Directed pairs (from, to) following the type direction of ``>``/``<`` edges."""
    arrows = []
    for t, h, _, ty in rep.edges:
        d = _type_dir(mod, ty)
        if d == 1:
            arrows.append((t, h))
        elif d == -1:
            arrows.append((h, t))
    return arrows


def _has_cycle(v: int, arrows: Iterable[tuple[int, int]]) -> bool:
    succ: list[list[int]] = [[] for _ in range(v + 1)]
    indeg = [0] * (v + 1)
    for x, y in arrows:
        succ[x].append(y)
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


def is_type_oriented(rep: BaseGraphRep, mod: DgS2Module) -> bool:
    return not _has_cycle(rep.v, type_arrows(rep, mod))


def is_type_sourced(rep: BaseGraphRep, mod: DgS2Module) -> bool:
    for _, _, _, ty in rep.edges:
        nm = mod.names[ty]
        if nm == "<>" or mod.length(ty) >= 3:
            return True
    incoming = {y for _, y in type_arrows(rep, mod)}
    return any(x not in incoming for x in range(1, rep.v + 1))


def colour_cycle(rep: BaseGraphRep, c: int) -> bool:
    arrows = [(t, h) if cols[c] == 1 else (h, t) for t, h, cols, _ in rep.edges]
    return _has_cycle(rep.v, arrows)


def colour_sourced(rep: BaseGraphRep, c: int) -> bool:
    heads = {h if cols[c] == 1 else t for t, h, cols, _ in rep.edges}
    return len(heads) < rep.v


# -------------------------------------------------------------------- families

@dataclass(frozen=True)
class Family:
    """A graph complex: edge module, colours and the admissible core graphs.

    ``graphs`` is ``"all"`` (every core graph), ``"connected"`` or ``"reduced"``
    (connected, at least 2-valent, some vertex at least 3-valent, no passing
    vertex).  ``passing`` selects whether a passing vertex is judged in the
    colours only or also in the arrow direction of ``>``/``<`` types.
    ``types`` optionally requires the typed graph to be type-oriented or
    type-sourced.
    """
    name: str
    module: DgS2Module
    j: int = 0
    k: int = 0
    l: int = 0
    graphs: str = "reduced"
    passing: str = "colour"
    types: str | None = None
    tadpoles: bool = True
    label: str = ""

    def __post_init__(self) -> None:
        # delta = delta_C + delta_E squares to zero only if C kills the image of d
        for i in range(len(self.module)):
            if sum((c * self.module.contraction[k] for k, c in self.module.diff[i]), Fraction(0)):
                raise ConfigurationError(
                    f"contraction does not vanish on d({self.module.names[i]})")

    @property
    def n(self) -> int:
        return self.module.n

    @property
    def ncolours(self) -> int:
        return self.j + self.k + self.l

    def tag(self) -> str:
        cols = f"O{self.j}S{self.k}D{self.l}" if self.ncolours else ""
        return f"{cols}{self.name}_n{self.n}" + ("" if self.tadpoles else "_notad")


_NAME = re.compile(r"^(fGCc?|GC|DfGC|DGC|OGC|SGC|DskGC|[DOS]\d+GC)$")


def make_family(name: str, n: int, *, j: int = 0, k: int = 0, l: int = 0,
                tadpoles: bool = True, truncation: int | None = None,
                t: int | None = None) -> Family:
    """Build a named family.

    ``fGC``/``fGCc``: all / connected graphs with the one-dimensional module.
    ``GC``: reduced core graphs.  ``DfGC``, ``DGC``: two arrow types, no
    strongly passing vertex for ``DGC``; ``OGC``/``SGC`` add type-oriented /
    type-sourced.  ``DskGC``: skeleton strings up to ``truncation``.  ``D<u>GC``,
    ``O<u>GC``, ``S<u>GC``: bounded skeleton modules in the basis with
    originals up to length ``t`` (default ``u``).
    """
    if not _NAME.match(name):
        raise ConfigurationError(f"unknown family {name!r}")
    mu = -1 if n % 2 else 1
    kw = dict(j=j, k=k, l=l, tadpoles=tadpoles)
    if name == "fGC":
        return Family(name, make_sigma_pm(n, mu), graphs="all", **kw)
    if name == "fGCc":
        return Family(name, make_sigma_pm(n, mu), graphs="connected", **kw)
    if name == "GC":
        return Family(name, make_sigma_pm(n, mu), **kw)
    if name == "DfGC":
        return Family(name, make_sigma_fix(n), graphs="all", **kw)
    if name in ("DGC", "OGC", "SGC"):
        types = {"DGC": None, "OGC": "oriented", "SGC": "sourced"}[name]
        return Family(name, make_sigma_fix(n), passing="strong", types=types, **kw)
    if name == "DskGC":
        if truncation is None:
            raise ConfigurationError("DskGC needs a truncation length")
        return Family(name, make_sigma_sk(n, truncation), label=f"L{truncation}", **kw)
    u = int(name[1:-2])
    kind = name[0]
    if kind == "O" and u < 1:
        raise ConfigurationError("type-oriented families need u >= 1")
    if kind == "S" and u < 2:
        raise ConfigurationError("type-sourced families need u >= 2")
    tt = u if t is None else t
    if kind in "OS" and tt < (1 if kind == "O" else 2):
        raise ConfigurationError("type predicates need original strings in the basis")
    types = {"D": None, "O": "oriented", "S": "sourced"}[kind]
    return Family(name, make_sigma_u(n, u, tt), types=types, label=f"t{tt}", **kw)


def core_admissible(fam: Family, rep: BaseGraphRep, connected: bool = False) -> bool:
    """Filters that depend only on the coloured core graph.  ``connected`` skips the
    connectivity test for graphs known to be connected."""
    if fam.graphs != "all" and not connected and \
            not canon._is_connected(rep.v, canon.core_key(rep.edges)):
        return False
    if not fam.tadpoles and any(t == h for t, h, _, _ in rep.edges):
        return False
    if fam.graphs == "reduced":
        val = valence_list(rep)
        if any(val[x] < 2 for x in range(1, rep.v + 1)):
            return False
        if all(val[x] < 3 for x in range(1, rep.v + 1)):
            return False
        if fam.passing == "colour" and any(colour_passing(rep, x) for x in range(1, rep.v + 1)):
            return False
    for c in range(fam.j):
        if colour_cycle(rep, c):
            return False
    for c in range(fam.j, fam.j + fam.k):
        if not colour_sourced(rep, c):
            return False
    return True


def typed_admissible(fam: Family, rep: BaseGraphRep) -> bool:
    mod = fam.module
    if fam.graphs == "reduced" and fam.passing == "strong":
        if any(strongly_passing(rep, mod, x) for x in range(1, rep.v + 1)):
            return False
    if fam.types == "oriented" and not is_type_oriented(rep, mod):
        return False
    if fam.types == "sourced" and not is_type_sourced(rep, mod):
        return False
    return True


def admissible(fam: Family, rep: BaseGraphRep) -> bool:
    return core_admissible(fam, rep) and typed_admissible(fam, rep)


# ----------------------------------------------------------------------- bases

@dataclass
class Basis:
    family: Family
    v: int
    e: int
    elements: list[BaseGraphRep]
    index: dict[BaseGraphRep, int] = field(default_factory=dict)
    degrees: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.index:
            self.index = {g: i for i, g in enumerate(self.elements)}
        if not self.degrees:
            self.degrees = [degree(g, self.family.module) for g in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def of_degree(self, d: int) -> list[int]:
        return [i for i, dd in enumerate(self.degrees) if dd == d]


def _min_valence(fam: Family) -> int:
    if fam.graphs != "reduced":
        return 0
    # without colours no 2-valent vertex survives the passing filter
    if fam.ncolours == 0 and fam.passing == "colour":
        return 3
    return 2


@functools.lru_cache(maxsize=None)
def uncoloured_cores(v: int, e: int, connected: bool, min_valence: int,
                     loops: bool) -> tuple[canon.CoreKey, ...]:
    return tuple(canon.enumerate_cores(v, e, connected=connected, min_valence=min_valence,
                                       loops=loops))


def _colourings(e: int, nc: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    rows = [tuple(1 if (m >> c) & 1 == 0 else -1 for c in range(nc)) for m in range(1 << nc)]

    def rec(i: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if i == e:
            yield ()
            return
        for r in rows:
            for rest in rec(i + 1):
                yield (r,) + rest

    yield from rec(0)


def _typings(e: int, size: int) -> Iterator[tuple[int, ...]]:
    if e == 0:
        yield ()
        return
    for first in range(size):
        for rest in _typings(e - 1, size):
            yield (first,) + rest


def candidate_reps(fam: Family, v: int, e: int) -> Iterator[BaseGraphRep]:
    """Every labelled representative over the enumerated core graphs (before dedup)."""
    cores = uncoloured_cores(v, e, fam.graphs != "all", _min_valence(fam), fam.tadpoles)
    nc = fam.ncolours
    dim = len(fam.module)
    for key in cores:
        for cols in _colourings(e, nc):
            crep = BaseGraphRep(v, tuple((a, b, c, 0) for (a, b, _), c in zip(key, cols)))
            if not core_admissible(fam, crep):
                continue
            for ty in _typings(e, dim):
                yield BaseGraphRep(v, tuple((a, b, c, t) for (a, b, c, _), t in
                                            zip(crep.edges, ty)))


def generate_basis(fam: Family, v: int, e: int) -> Basis:
    """Sorted list of canonical representatives of the nonzero classes in stratum (v, e)."""
    found: set[BaseGraphRep] = set()
    mod = fam.module
    for rep in candidate_reps(fam, v, e):
        if not typed_admissible(fam, rep):
            continue
        cf, s = canonicalize(rep, mod)
        if cf is not None:
            found.add(cf)
    return Basis(fam, v, e, sorted(found))


def describe(rep: BaseGraphRep, mod: DgS2Module) -> str:
    parts = []
    for t, h, cols, ty in rep.edges:
        cs = "".join("+" if s == 1 else "-" for s in cols)
        parts.append(f"{t}-{h}{':' + cs if cs else ''}[{mod.names[ty]}]")
    return f"v={rep.v} " + " ".join(parts)


def rep_from_core(g: CoreGraph | MultiDirectedCoreGraph, types: Sequence[int]) -> BaseGraphRep:
    md = g if isinstance(g, MultiDirectedCoreGraph) else MultiDirectedCoreGraph(g)
    return BaseGraphRep(md.v, tuple((t, h, md.orient[a], types[a])
                                    for a, (t, h) in enumerate(md.base.endpoints)))


def with_types(rep: BaseGraphRep, types: Sequence[int]) -> BaseGraphRep:
    return BaseGraphRep(rep.v, tuple((t, h, c, ty) for (t, h, c, _), ty in zip(rep.edges, types)))


def strip_family(fam: Family, **changes) -> Family:
    return replace(fam, **changes)
