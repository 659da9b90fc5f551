"""Graph complexes at fixed loop order and their homology tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .differentials import assemble, delta_rep
from .graphspace import Basis, Family, _min_valence, degree
from .homology import FiniteComplex, HomologyResult, HomologyRow, homology
from .matrix import SparseRationalMatrix

DEFAULT_MAX_ELEMENTS = 400_000


class TooLarge(RuntimeError):
    """A requested complex exceeds the configured size guard."""


def vertex_range(fam: Family, b: int, max_v: int | None = None) -> range:
    """Vertex counts that can occur at loop order ``b``.

    With every vertex at least 3-valent, ``2(v + b) >= 3v`` bounds ``v <= 2b``;
    families admitting 2-valent vertices need an explicit ``max_v``.
    """
    lo = 1
    if _min_valence(fam) >= 3:
        hi = 2 * b if b > 0 else 0
        if max_v is not None:
            hi = min(hi, max_v)
    else:
        if max_v is None:
            raise ValueError(f"{fam.tag()} admits 2-valent vertices: pass max_v")
        hi = max_v
    if b < 0:
        return range(0)
    return range(lo, hi + 1)


@dataclass
class LoopOrderComplex:
    family: Family
    b: int
    bases: dict[int, Basis]
    complex: FiniteComplex

    def homology(self, **kw) -> HomologyResult:
        return homology(self.complex, **kw)

    def rows(self, result: HomologyResult | None = None) -> list[HomologyRow]:
        res = result or self.homology()
        name = self.family.tag()
        return [HomologyRow(name, self.family.n, self.b, d, x) for d, x in sorted(res.dims.items())]


def estimate_candidates(fam: Family, v: int, e: int) -> int:
    """Number of labelled representatives the generator will visit in a stratum."""
    from .graphspace import uncoloured_cores
    cores = uncoloured_cores(v, e, fam.graphs != "all", _min_valence(fam), fam.tadpoles)
    return len(cores) * (2 ** fam.ncolours) ** e * len(fam.module) ** e


def loop_order_complex(fam: Family, b: int, *, max_v: int | None = None,
                       max_elements: int = DEFAULT_MAX_ELEMENTS,
                       basis_fn: Callable[[Family, int, int], Basis] | None = None,
                       progress: Callable[[str], None] | None = None) -> LoopOrderComplex:
    """Total complex ``(fam, delta)`` spanned by all strata with ``e - v = b``.

    Raises :class:`TooLarge` before any generation if the candidate count of a
    stratum exceeds ``max_elements`` times the module size (a cheap a-priori bound).
    """
    from .graphspace import generate_basis
    basis_fn = basis_fn or generate_basis
    vs = vertex_range(fam, b, max_v)
    for v in vs:
        est = estimate_candidates(fam, v, v + b)
        if est > max_elements * len(fam.module):
            raise TooLarge(f"{fam.tag()} b={b} stratum (v={v}, e={v + b}) visits {est} "
                           f"representatives, above the guard")
    bases: dict[int, Basis] = {}
    for v in vs:
        bases[v] = basis_fn(fam, v, v + b)
        if progress:
            progress(f"{fam.tag()} b={b} v={v}: {len(bases[v])} elements")
    total = sum(len(B) for B in bases.values())
    if total > max_elements:
        raise TooLarge(f"{fam.tag()} b={b} has {total} elements, above the guard")
    cx = assemble_complex(fam, bases, f"{fam.tag()} b={b}")
    return LoopOrderComplex(fam, b, bases, cx)


def assemble_complex(fam: Family, bases: dict[int, Basis], name: str) -> FiniteComplex:
    """Grade the union of the strata by degree and assemble ``delta`` blockwise."""
    mod = fam.module
    cells: dict[int, list] = {}
    for v in sorted(bases):
        for g in bases[v].elements:
            cells.setdefault(degree(g, mod), []).append(g)
    for d in cells:
        cells[d].sort()
    cx = FiniteComplex(cells, name=name)
    for d, cs in cells.items():
        idx = cx.index.get(d - 1, {})
        cx.boundary[d] = assemble(cs, idx, len(cells.get(d - 1, [])),
                                  lambda g: delta_rep(g, fam))
    return cx


def homology_by_degree(fam: Family, bs: Sequence[int], **kw) -> list[HomologyRow]:
    rows = []
    for b in bs:
        lc = loop_order_complex(fam, b, **kw)
        rows.extend(lc.rows())
    return rows


def nonzero(rows: Sequence[HomologyRow]) -> dict[int, int]:
    return {r.degree: r.dim for r in rows if r.dim}


def boundary_blocks(cx: FiniteComplex) -> dict[int, SparseRationalMatrix]:
    return dict(cx.boundary)
