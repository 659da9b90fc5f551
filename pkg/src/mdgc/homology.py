"""Finite chain complexes, homology dimensions and mapping cones."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .matrix import DEFAULT_PRIMES, RankReport, SparseRationalMatrix, rank

Vector = dict[Hashable, Fraction]


@dataclass
class FiniteComplex:
    """Graded vector space with basis ``cells[d]`` and differentials of degree -1.

    ``boundary[d]`` is the matrix of ``C_d -> C_{d-1}`` (rows: basis of ``d-1``).
    """
    cells: dict[int, list[Hashable]]
    boundary: dict[int, SparseRationalMatrix] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        self.index = {d: {c: i for i, c in enumerate(cs)} for d, cs in self.cells.items()}
        for d in self.cells:
            if d not in self.boundary:
                self.boundary[d] = SparseRationalMatrix(len(self.cells.get(d - 1, [])),
                                                        len(self.cells[d]))

    @classmethod
    def from_function(cls, items: Iterable[Hashable], deg: Callable[[Hashable], int],
                      d: Callable[[Hashable], Mapping[Hashable, Fraction]], name: str = "",
                      strict: bool = True) -> FiniteComplex:
        """Build from a differential given on basis elements.

        Terms outside the basis raise unless ``strict`` is false (then they are dropped).
        """
        cells: dict[int, list[Hashable]] = {}
        for it in items:
            cells.setdefault(deg(it), []).append(it)
        for k in cells:
            cells[k].sort()
        cx = cls(cells, name=name)
        for k, cs in cells.items():
            rows = cx.index.get(k - 1, {})
            m = SparseRationalMatrix(len(cells.get(k - 1, [])), len(cs))
            for j, c in enumerate(cs):
                for tgt, x in d(c).items():
                    i = rows.get(tgt)
                    if i is None:
                        if strict:
                            raise AssertionError(f"boundary of {c} leaves the complex: {tgt}")
                        continue
                    m.add(i, j, Fraction(x))
            cx.boundary[k] = m
        return cx

    def degrees(self) -> list[int]:
        return sorted(self.cells)

    def dim(self, d: int) -> int:
        return len(self.cells.get(d, []))

    def total_dim(self) -> int:
        return sum(len(c) for c in self.cells.values())

    def check_d2(self) -> bool:
        for d in self.cells:
            if d - 1 in self.cells:
                if not (self.boundary[d - 1] @ self.boundary[d]).is_zero():
                    return False
        return True


@dataclass(frozen=True)
class HomologyResult:
    dims: dict[int, int]
    ranks: dict[int, RankReport]

    @property
    def euler(self) -> int:
        return sum((-1) ** (d % 2) * x for d, x in self.dims.items())

    def bad_primes(self) -> set[int]:
        return {p for r in self.ranks.values() for p in r.bad_primes}


def homology(cx: FiniteComplex, primes: tuple[int, ...] = DEFAULT_PRIMES,
             check: bool = True, check_d2: bool = True) -> HomologyResult:
    """``dim H_d = dim C_d - rank d_d - rank d_{d+1}``; the Euler characteristic is checked.

    Raises ``ValueError`` if consecutive differentials do not compose to zero.
    """
    if check_d2 and not cx.check_d2():
        raise ValueError(f"{cx.name}: consecutive differentials do not compose to zero")
    ranks = {d: rank(cx.boundary[d], primes, check) for d in cx.cells}
    dims = {}
    for d in cx.degrees():
        r_out = ranks[d].rank
        r_in = ranks[d + 1].rank if d + 1 in ranks else 0
        dims[d] = cx.dim(d) - r_out - r_in
        if dims[d] < 0:
            raise ArithmeticError(f"negative homology in degree {d}: d^2 != 0?")
    chain_euler = sum((-1) ** (d % 2) * cx.dim(d) for d in cx.cells)
    res = HomologyResult(dims, ranks)
    if res.euler != chain_euler:
        raise ArithmeticError("Euler characteristic of homology differs from the chains")
    return res


def homology_dims(cx: FiniteComplex, **kw) -> dict[int, int]:
    return homology(cx, **kw).dims


def map_matrices(src: FiniteComplex, dst: FiniteComplex,
                 f: Callable[[Hashable], Mapping[Hashable, Fraction]], degree: int = 0,
                 strict: bool = True) -> dict[int, SparseRationalMatrix]:
    out = {}
    for d, cs in src.cells.items():
        rows = dst.index.get(d + degree, {})
        m = SparseRationalMatrix(len(dst.cells.get(d + degree, [])), len(cs))
        for j, c in enumerate(cs):
            for tgt, x in f(c).items():
                i = rows.get(tgt)
                if i is None:
                    if strict:
                        raise AssertionError(f"map sends {c} outside the target: {tgt}")
                    continue
                m.add(i, j, Fraction(x))
        out[d] = m
    return out


def is_chain_map(src: FiniteComplex, dst: FiniteComplex,
                 fm: Mapping[int, SparseRationalMatrix]) -> bool:
    for d in src.cells:
        shape = (dst.dim(d - 1), src.dim(d))
        lhs = dst.boundary[d] @ fm[d] if d in dst.cells else SparseRationalMatrix(*shape)
        rhs = fm[d - 1] @ src.boundary[d] if d - 1 in src.cells else SparseRationalMatrix(*shape)
        if lhs != rhs:
            return False
    return True


def mapping_cone(src: FiniteComplex, dst: FiniteComplex,
                 fm: Mapping[int, SparseRationalMatrix], check: bool = True) -> FiniteComplex:
    """Cone of a degree-0 chain map: ``Cone_d = src_{d-1} + dst_d``,
    ``(x, y) -> (-dx, f(x) + dy)``.  Raises ``ValueError`` if ``f`` is not a chain map."""
    if check and not is_chain_map(src, dst, fm):
        raise ValueError("mapping cone of a map that does not commute with the differentials")
    degs = set(dst.cells) | {d + 1 for d in src.cells}
    cells = {d: [("s", c) for c in src.cells.get(d - 1, [])] + [("t", c) for c in dst.cells.get(d, [])]
             for d in degs}
    cone = FiniteComplex(cells, name=f"cone({src.name}->{dst.name})")
    for d in degs:
        ns, nt = len(src.cells.get(d - 1, [])), len(dst.cells.get(d, []))
        ms, mt = len(src.cells.get(d - 2, [])), len(dst.cells.get(d - 1, []))
        m = SparseRationalMatrix(ms + mt, ns + nt)
        if d - 1 in src.cells:
            for i, j, x in src.boundary[d - 1].entries():
                m.add(i, j, -x)
            for i, j, x in fm[d - 1].entries():
                m.add(ms + i, j, x)
        if d in dst.cells:
            for i, j, x in dst.boundary[d].entries():
                m.add(ms + i, ns + j, x)
        cone.boundary[d] = m
    return cone


def is_quasi_isomorphism(src: FiniteComplex, dst: FiniteComplex,
                         fm: Mapping[int, SparseRationalMatrix]) -> bool:
    cone = mapping_cone(src, dst, fm)
    return all(x == 0 for x in homology(cone, check_d2=False).dims.values())


@dataclass(frozen=True)
class HomologyRow:
    family: str
    n: int
    b: int
    degree: int
    dim: int

    def format(self) -> str:
        return f"{self.family} {self.n} {self.b} {self.degree} {self.dim}"


def format_homology(rows: Sequence[HomologyRow]) -> str:
    lines = ["family n b degree dim"] + [r.format() for r in sorted(
        rows, key=lambda r: (r.family, r.n, r.b, r.degree))]
    return "\n".join(lines) + "\n"


def parse_homology(text: str) -> list[HomologyRow]:
    rows = []
    for ln in text.strip().splitlines()[1:]:
        f, n, b, d, x = ln.split()
        rows.append(HomologyRow(f, int(n), int(b), int(d), int(x)))
    return rows
