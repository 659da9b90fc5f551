"""Edge contraction, the edge-type differential and matrix assembly.

Contraction signs are computed by relabelling to the normal form where the
contracted edge is the last edge and heads towards the last vertex; that
relabelling carries the usual permutation sign and the final contraction then
has sign +1.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from . import canon
from .graphspace import (BaseGraphRep, Basis, Family, canonicalize, core_admissible,
                         degree, typed_admissible, valence_list)
from .matrix import SparseRationalMatrix

LinearCombination = dict[BaseGraphRep, Fraction]


class BasisClosureError(AssertionError):
    """A differential produced a class outside the target basis."""


def add_term(out: LinearCombination, g: BaseGraphRep, c: Fraction) -> None:
    y = out.get(g, Fraction(0)) + c
    if y:
        out[g] = y
    else:
        out.pop(g, None)


def normalize(lin: Mapping[BaseGraphRep, Fraction], fam: Family,
              same_core: bool = False, connected: bool = False) -> LinearCombination:
    """Canonicalize every term, dropping zero classes and inadmissible graphs.

    With ``same_core`` the terms are known to share an admissible coloured core and
    only the type filters are applied; ``connected`` skips the connectivity test.
    """
    out: LinearCombination = {}
    for g, c in lin.items():
        if not c:
            continue
        if not same_core and not core_admissible(fam, g, connected):
            continue
        if not typed_admissible(fam, g):
            continue
        cf, s = canonicalize(g, fam.module)
        if cf is not None:
            add_term(out, cf, c * s)
    return out


def contract_edge(rep: BaseGraphRep, a: int, fam: Family) -> tuple[BaseGraphRep, Fraction] | None:
    """Contract edge ``a`` (1-based); returns an uncanonicalized term or ``None``."""
    mod = fam.module
    t, h, _, ty = rep.edges[a - 1]
    if t == h:
        return None
    c = mod.contraction[ty]
    if not c:
        return None
    val = valence_list(rep)
    leaves = (val[t] == 1) + (val[h] == 1)
    if leaves == 1:
        return None
    coeff = Fraction(c) * (-1 if leaves == 2 else 1)
    # move edge a to the end
    if mod.odd[ty]:
        after = sum(1 for e in rep.edges[a:] if mod.odd[e[3]])
        if after % 2:
            coeff = -coeff
    # move the head to the last vertex: a cycle of length v - h + 1
    v = rep.v
    if mod.n % 2 and (v - h) % 2:
        coeff = -coeff

    def lab(z: int) -> int:
        if z == h:
            return t if t < h else t - 1
        return z if z < h else z - 1

    edges = tuple((lab(x), lab(y), cols, tt) for i, (x, y, cols, tt) in enumerate(rep.edges)
                  if i != a - 1)
    return BaseGraphRep(v - 1, edges), coeff


def delta_C_rep(rep: BaseGraphRep, fam: Family) -> LinearCombination:
    # contracting a non-tadpole edge keeps the graph connected, and a
    # disconnected graph stays disconnected
    connected = canon._is_connected(rep.v, canon.core_key(rep.edges))
    if fam.graphs != "all" and not connected:
        return {}
    raw: LinearCombination = {}
    for a in range(1, rep.e + 1):
        term = contract_edge(rep, a, fam)
        if term is not None:
            add_term(raw, term[0], term[1])
    return normalize(raw, fam, connected=connected)


def delta_E_rep(rep: BaseGraphRep, fam: Family) -> LinearCombination:
    """Sum over edges of ``(-1)^{k_a}`` times the module differential on edge ``a``,
    where ``k_a`` counts odd edges after ``a``."""
    mod = fam.module
    # retyping leaves the coloured core alone
    if not core_admissible(fam, rep):
        return {}
    raw: LinearCombination = {}
    edges = rep.edges
    odd_after = 0
    for a in range(len(edges) - 1, -1, -1):
        t, h, cols, ty = edges[a]
        sign = -1 if odd_after % 2 else 1
        for ty2, c in mod.diff[ty]:
            new = edges[:a] + ((t, h, cols, ty2),) + edges[a + 1:]
            add_term(raw, BaseGraphRep(rep.v, new), c * sign)
        if mod.odd[ty]:
            odd_after += 1
    return normalize(raw, fam, same_core=True)


def delta_rep(rep: BaseGraphRep, fam: Family) -> LinearCombination:
    """``delta_C + (-1)^{n deg} delta_E``."""
    out = delta_C_rep(rep, fam)
    s = -1 if (fam.n * degree(rep, fam.module)) % 2 else 1
    for g, c in delta_E_rep(rep, fam).items():
        add_term(out, g, s * c)
    return out


OPS: dict[str, Callable[[BaseGraphRep, Family], LinearCombination]] = {
    "C": delta_C_rep,
    "E": delta_E_rep,
    "total": delta_rep,
}


def apply(op: Callable[[BaseGraphRep, Family], LinearCombination],
          lin: Mapping[BaseGraphRep, Fraction], fam: Family) -> LinearCombination:
    out: LinearCombination = {}
    for g, c in lin.items():
        for h, d in op(g, fam).items():
            add_term(out, h, c * d)
    return out


def delta_C(lin: Mapping[BaseGraphRep, Fraction], fam: Family) -> LinearCombination:
    return apply(delta_C_rep, lin, fam)


def delta_E(lin: Mapping[BaseGraphRep, Fraction], fam: Family) -> LinearCombination:
    return apply(delta_E_rep, lin, fam)


def delta(lin: Mapping[BaseGraphRep, Fraction], fam: Family) -> LinearCombination:
    return apply(delta_rep, lin, fam)


# shared objects for the usual small coefficients keep large matrices compact
_SHARED = {Fraction(k, d): Fraction(k, d) for k in range(-8, 9) for d in (1, 2, 4, 8)}


def assemble(src: Iterable[BaseGraphRep], dst_index: Mapping[BaseGraphRep, int], nrows: int,
             func: Callable[[BaseGraphRep], LinearCombination]) -> SparseRationalMatrix:
    """Matrix with one column per source element; rows indexed by ``dst_index``."""
    src = list(src)
    m = SparseRationalMatrix(nrows, len(src))
    for j, g in enumerate(src):
        for h, c in func(g).items():
            i = dst_index.get(h)
            if i is None:
                raise BasisClosureError(f"image term {h} outside the target basis")
            m.columns[j][i] = _SHARED.get(c, c)
    return m


def assemble_matrix(src: Basis, dst: Basis, op: str = "total") -> SparseRationalMatrix:
    fam = src.family
    f = OPS[op]
    return assemble(src.elements, dst.index, len(dst), lambda g: f(g, fam))
