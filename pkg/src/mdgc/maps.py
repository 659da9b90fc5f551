"""Maps between graph complexes.

* ``eta``: arrow types become an extra colour.
* ``kappa``: skeleton edges are unfolded into strings of arrow edges.
* ``map_g``: every plain edge becomes half the symmetric sum of the two arrows.
* ``map_h``: sum over vertices and spanning trees; tree edges become arrows
  pointing away from the chosen vertex and their labels are exchanged with the
  labels of the vertices at their far ends.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .core import ConfigurationError, CoreGraph, spanning_trees
from .differentials import LinearCombination, add_term, delta, normalize
from .edgetypes import DgS2Module, alternating, sigma_tu_vectors
from .graphspace import (BaseGraphRep, Basis, Family, degree, make_family, relabel_sign,
                         valence_list)
from .matrix import SparseRationalMatrix

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ChainMap:
    name: str
    source: Family
    target: Family
    func: Callable[[BaseGraphRep], LinearCombination]
    degree: int = 0

    def __call__(self, rep: BaseGraphRep) -> LinearCombination:
        return self.func(rep)

    def apply(self, lin: LinearCombination) -> LinearCombination:
        out: LinearCombination = {}
        for g, c in lin.items():
            for h, d in self.func(g).items():
                add_term(out, h, c * d)
        return out


def check_chain_map(m: ChainMap, elements: Iterable[BaseGraphRep]) -> list[BaseGraphRep]:
    """Elements ``x`` with ``delta(m(x)) != m(delta(x))``."""
    bad = []
    for g in elements:
        x = {g: Fraction(1)}
        lhs = delta(m.apply(x), m.target)
        rhs = m.apply(delta(x, m.source))
        diff = dict(lhs)
        for h, c in rhs.items():
            add_term(diff, h, -c)
        if diff:
            bad.append(g)
    return bad


def map_matrix(m: ChainMap, src: Basis, dst: Basis) -> SparseRationalMatrix:
    from .differentials import assemble
    return assemble(src.elements, dst.index, len(dst), m.func)


# ------------------------------------------------------------------------- eta

def eta_family(fam: Family) -> Family:
    """Target of ``eta``: arrow families become one-dimensional-module families
    with one more colour (plain, oriented or sourced)."""
    base = {"DfGC": "fGC", "DGC": "GC", "OGC": "GC", "SGC": "GC"}.get(fam.name)
    if base is None:
        raise ConfigurationError(f"eta is defined on arrow families, not {fam.name}")
    j, k, l = fam.j, fam.k, fam.l
    if fam.types == "oriented":
        j += 1
    elif fam.types == "sourced":
        k += 1
    else:
        l += 1
    return make_family(base, fam.n, j=j, k=k, l=l, tadpoles=fam.tadpoles)


def _eta_slot(fam: Family) -> int:
    if fam.types == "oriented":
        return fam.j
    if fam.types == "sourced":
        return fam.j + fam.k
    return fam.j + fam.k + fam.l


def eta(fam: Family) -> ChainMap:
    tgt = eta_family(fam)
    slot = _eta_slot(fam)
    mod = fam.module
    mu = mod.mu

    def f(rep: BaseGraphRep) -> LinearCombination:
        c = Fraction(1)
        edges = []
        for t, h, cols, ty in rep.edges:
            s = 1 if mod.names[ty] == ">" else -1
            if s == -1:
                c *= mu
            edges.append((t, h, cols[:slot] + (s,) + cols[slot:], 0))
        return normalize({BaseGraphRep(rep.v, tuple(edges)): c}, tgt)

    return ChainMap("eta", fam, tgt, f)


# ----------------------------------------------------------------------- kappa

def kappa_rep(rep: BaseGraphRep, mod: DgS2Module) -> BaseGraphRep:
    """Unfold a graph whose types are alternating strings.

    Skeleton vertices keep their labels; inner vertices follow, grouped by
    skeleton edge and ordered from tail to head; original edges are numbered
    the same way and point from tail side to head side.
    """
    v = rep.v
    edges = []
    for t, h, cols, ty in rep.edges:
        word = mod.names[ty]
        if not word or set(word) - {"<", ">"}:
            raise ConfigurationError(f"kappa needs alternating strings, got {word!r}")
        chain = [t] + [v + i + 1 for i in range(len(word) - 1)] + [h]
        v += len(word) - 1
        for i, ch in enumerate(word):
            edges.append((chain[i], chain[i + 1], cols, 0 if ch == ">" else 1))
    return BaseGraphRep(v, tuple(edges))


def kappa(fam: Family) -> ChainMap:
    if fam.name != "DskGC":
        raise ConfigurationError("kappa is defined on skeleton families")
    tgt = make_family("DGC", fam.n, j=fam.j, k=fam.k, l=fam.l, tadpoles=fam.tadpoles)

    def f(rep: BaseGraphRep) -> LinearCombination:
        return normalize({kappa_rep(rep, fam.module): Fraction(1)}, tgt)

    return ChainMap("kappa", fam, tgt, f)


def expand_types(rep: BaseGraphRep, src: DgS2Module, vectors: Sequence[dict[int, Fraction]]
                 ) -> LinearCombination:
    """Rewrite each edge type as a combination in another basis and expand."""
    out: LinearCombination = {}
    choices = [list(vectors[ty].items()) for _, _, _, ty in rep.edges]
    for pick in product(*choices):
        c = Fraction(1)
        edges = []
        for (t, h, cols, _), (ty2, x) in zip(rep.edges, pick):
            c *= x
            edges.append((t, h, cols, ty2))
        add_term(out, BaseGraphRep(rep.v, tuple(edges)), c)
    return out


def to_skeleton(fam: Family, truncation: int) -> tuple[Family, Callable[[BaseGraphRep], LinearCombination]]:
    """Inclusion of a bounded family into the skeleton family, as a basis change."""
    u = int(fam.name[1:-2])
    t = int(fam.label[1:])
    sk, names, vecs = sigma_tu_vectors(fam.n, t, u)
    tgt = make_family("DskGC", fam.n, j=fam.j, k=fam.k, l=fam.l, tadpoles=fam.tadpoles,
                      truncation=truncation)
    remap = {i: tgt.module[sk.names[i]] for i in range(len(sk))}
    vectors = [{remap[i]: c for i, c in vec.items()} for vec in vecs]

    def f(rep: BaseGraphRep) -> LinearCombination:
        return normalize(expand_types(rep, fam.module, vectors), tgt)

    return tgt, f


# --------------------------------------------------------------------------- g

def map_g(n: int, *, tadpoles: bool = True) -> ChainMap:
    src = make_family("GC", n, tadpoles=tadpoles)
    tgt = make_family("D1GC", n, tadpoles=tadpoles)
    mu = tgt.module.mu
    vec = {tgt.module[">"]: HALF, tgt.module["<"]: HALF * mu}

    def f(rep: BaseGraphRep) -> LinearCombination:
        return normalize(expand_types(rep, src.module, [vec]), tgt)

    return ChainMap("g", src, tgt, f)


# --------------------------------------------------------------------------- h

def _far_ends(rep: BaseGraphRep, tree: Sequence[int], root: int) -> dict[int, int]:
    """For each tree edge (0-based index) its endpoint away from ``root``."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for a in tree:
        t, h = rep.edges[a][0], rep.edges[a][1]
        adj.setdefault(t, []).append((a, h))
        adj.setdefault(h, []).append((a, t))
    far = {}
    stack = [root]
    seen = {root}
    while stack:
        x = stack.pop()
        for a, y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                far[a] = y
                stack.append(y)
    return far


@dataclass(frozen=True)
class HTerm:
    vertex: int
    tree: frozenset[int]
    rep: BaseGraphRep
    coeff: Fraction
    # relabelling taking the output back to the labels of the input
    back_vperm: tuple[int, ...]
    back_eperm: tuple[int, ...]


def h_terms(rep: BaseGraphRep, n: int, tgt_mod: DgS2Module, src_mod: DgS2Module,
            vertices: Iterable[int] | None = None,
            trees: Iterable[frozenset[int]] | None = None) -> list[HTerm]:
    """The labelled terms ``h_{x,tau}`` with their signs, before canonicalization."""
    v, e = rep.v, rep.e
    val = valence_list(rep)
    right = tgt_mod["s2"]
    arrow_out, arrow_in = tgt_mod[">"], tgt_mod["<"]
    core = CoreGraph(v, tuple((t, h) for t, h, _, _ in rep.edges))
    tree_list = list(trees) if trees is not None else list(spanning_trees(core))
    xs = list(vertices) if vertices is not None else list(range(1, v + 1))
    out = []
    for x in xs:
        w = val[x] - 2
        if w == 0:
            continue
        for tau in tree_list:
            tree = sorted(a - 1 for a in tau)
            # model labelling: x last, tree edges first, otherwise order kept
            others = [z for z in range(1, v + 1) if z != x]
            vperm = [0] * v
            for i, z in enumerate(others, start=1):
                vperm[z - 1] = i
            vperm[x - 1] = v
            rest = [a for a in range(e) if a not in tau_set(tree)]
            eperm = [0] * e
            for i, a in enumerate(tree + rest, start=1):
                eperm[a] = i
            s = relabel_sign(rep, src_mod, vperm, eperm)
            model = [None] * e
            for a, (t, h, cols, ty) in enumerate(rep.edges):
                model[eperm[a] - 1] = (vperm[t - 1], vperm[h - 1], cols, ty)
            mrep = BaseGraphRep(v, tuple(model))  # type: ignore[arg-type]
            far = _far_ends(mrep, range(v - 1), v)
            r = 0
            typed = []
            for a, (t, h, cols, _) in enumerate(mrep.edges):
                if a < v - 1:
                    if h == far[a]:
                        typed.append((t, h, cols, arrow_out))
                    else:
                        typed.append((t, h, cols, arrow_in))
                        r += 1
                else:
                    typed.append((t, h, cols, right))
            # exchange labels: far end of tree edge i gets vertex label i,
            # tree edge i gets the old label of its far end
            xv = list(range(v + 1))
            xe = list(range(e + 1))
            for a in range(v - 1):
                xv[far[a]] = a + 1
                xe[a + 1] = far[a]
            new = [None] * e
            for a, (t, h, cols, ty) in enumerate(typed):
                new[xe[a + 1] - 1] = (xv[t], xv[h], cols, ty)
            hrep = BaseGraphRep(v, tuple(new))  # type: ignore[arg-type]
            sign = s
            if (r * n) % 2:
                sign = -sign
            if v % 2:
                sign = -sign
            if ((n + 1) * e * v) % 2:
                sign = -sign
            # composite relabelling input -> output, inverted
            fwd_v = [xv[vperm[z - 1]] for z in range(1, v + 1)]
            fwd_e = [xe[eperm[a]] for a in range(e)]
            back_v = [0] * v
            for z, y in enumerate(fwd_v, start=1):
                back_v[y - 1] = z
            back_e = [0] * e
            for a, y in enumerate(fwd_e, start=1):
                back_e[y - 1] = a
            out.append(HTerm(x, tau, hrep, Fraction(w * sign), tuple(back_v), tuple(back_e)))
    return out


def tau_set(tree: Sequence[int]) -> set[int]:
    return set(tree)


def relabel_back(term: HTerm, tgt_mod: DgS2Module) -> tuple[BaseGraphRep, Fraction]:
    """The term expressed with the vertex and edge labels of the input graph."""
    rep = term.rep
    s = relabel_sign(rep, tgt_mod, term.back_vperm, term.back_eperm)
    new = [None] * rep.e
    for a, (t, h, cols, ty) in enumerate(rep.edges):
        new[term.back_eperm[a] - 1] = (term.back_vperm[t - 1], term.back_vperm[h - 1], cols, ty)
    return BaseGraphRep(rep.v, tuple(new)), term.coeff * s  # type: ignore[arg-type]


def map_h(n: int, *, tadpoles: bool = True) -> ChainMap:
    src = make_family("GC", n, tadpoles=tadpoles)
    tgt = make_family("O1GC", n + 1, tadpoles=tadpoles)

    def f(rep: BaseGraphRep) -> LinearCombination:
        raw: LinearCombination = {}
        for term in h_terms(rep, n, tgt.module, src.module):
            add_term(raw, term.rep, term.coeff)
        return normalize(raw, tgt)

    return ChainMap("h", src, tgt, f)


def h_term_count(rep: BaseGraphRep) -> int:
    """Number of pairs (vertex of valence != 2, spanning tree) contributing to ``h``."""
    core = CoreGraph(rep.v, tuple((t, h) for t, h, _, _ in rep.edges))
    val = valence_list(rep)
    ntrees = sum(1 for _ in spanning_trees(core))
    return sum(ntrees for x in range(1, rep.v + 1) if val[x] != 2)


def degree_shift(m: ChainMap, rep: BaseGraphRep) -> set[int]:
    d0 = degree(rep, m.source.module)
    return {degree(g, m.target.module) - d0 for g in m(rep)}
