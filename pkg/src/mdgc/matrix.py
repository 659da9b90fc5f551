"""Sparse rational matrices and exact rank.

The authoritative rank is computed over the rationals by sparse elimination:
integer rows (scaled by the common denominator) are combined fraction-free and
divided by their content after each step; the pivot is taken from the shortest
remaining row, in its sparsest column, lowest indices breaking ties.  Ranks modulo primes are a fast
independent check.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator

DEFAULT_PRIMES = (1_000_003, 998_244_353)


class BadPrimeWarning(UserWarning):
    pass


@dataclass
class SparseRationalMatrix:
    rows: int
    cols: int
    columns: list[dict[int, Fraction]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.columns:
            self.columns = [dict() for _ in range(self.cols)]
        if len(self.columns) != self.cols:
            raise ValueError("column count mismatch")

    @classmethod
    def from_entries(cls, rows: int, cols: int,
                     entries: Iterable[tuple[int, int, Fraction]]) -> SparseRationalMatrix:
        m = cls(rows, cols)
        for i, j, x in entries:
            m.add(i, j, x)
        return m

    @classmethod
    def from_dense(cls, dense: list[list]) -> SparseRationalMatrix:
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls.from_entries(rows, cols, ((i, j, Fraction(x)) for i, r in enumerate(dense)
                                             for j, x in enumerate(r) if x))

    def add(self, i: int, j: int, x: Fraction) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        col = self.columns[j]
        y = col.get(i, Fraction(0)) + x
        if y:
            col[i] = y
        else:
            col.pop(i, None)

    def entries(self) -> Iterator[tuple[int, int, Fraction]]:
        """Nonzero entries sorted by (row, column)."""
        out = [(i, j, x) for j, col in enumerate(self.columns) for i, x in col.items()]
        out.sort()
        return iter(out)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def to_dense(self) -> list[list[Fraction]]:
        d = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                d[i][j] = x
        return d

    def transpose(self) -> SparseRationalMatrix:
        return SparseRationalMatrix.from_entries(self.cols, self.rows,
                                                 ((j, i, x) for i, j, x in self.entries()))

    def row_dicts(self) -> list[dict[int, Fraction]]:
        rows: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                rows[i][j] = x
        return rows

    def __matmul__(self, other: SparseRationalMatrix) -> SparseRationalMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = SparseRationalMatrix(self.rows, other.cols)
        for j, col in enumerate(other.columns):
            acc: dict[int, Fraction] = {}
            for k, y in col.items():
                for i, x in self.columns[k].items():
                    acc[i] = acc.get(i, Fraction(0)) + x * y
            out.columns[j] = {i: x for i, x in acc.items() if x}
        return out

    def __add__(self, other: SparseRationalMatrix) -> SparseRationalMatrix:
        return self.combine(other, Fraction(1))

    def __sub__(self, other: SparseRationalMatrix) -> SparseRationalMatrix:
        return self.combine(other, Fraction(-1))

    def combine(self, other: SparseRationalMatrix, c: Fraction | int) -> SparseRationalMatrix:
        """``self + c * other``."""
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = SparseRationalMatrix(self.rows, self.cols, [dict(col) for col in self.columns])
        for i, j, x in other.entries():
            out.add(i, j, Fraction(c) * x)
        return out

    def scaled(self, c: Fraction | int) -> SparseRationalMatrix:
        c = Fraction(c)
        return SparseRationalMatrix(self.rows, self.cols,
                                    [{i: c * x for i, x in col.items()} if c else {}
                                     for col in self.columns])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and \
            list(self.entries()) == list(other.entries())


def _integer_rows(m: SparseRationalMatrix) -> list[dict[int, int]]:
    rows = m.row_dicts()
    out = []
    for r in rows:
        if not r:
            continue
        den = lcm(*(x.denominator for x in r.values()))
        ir = {j: int(x * den) for j, x in r.items()}
        g = 0
        for x in ir.values():
            g = gcd(g, x)
        out.append({j: x // g for j, x in ir.items()})
    return out


def _eliminate(rows: list[dict[int, int]], combine) -> int:
    """Generic sparse elimination; ``combine(pivot_row, row, col)`` returns the reduced row.

    Pivot: the shortest remaining row (lowest index on ties), and in it the
    column meeting the fewest other rows (lowest column on ties).
    """
    rows = [r for r in rows if r]
    col_rows: dict[int, set[int]] = {}
    for ri, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(ri)
    heap = [(len(r), ri) for ri, r in enumerate(rows)]
    heapq.heapify(heap)
    done = [False] * len(rows)
    rank = 0
    while heap:
        ln, pr = heapq.heappop(heap)
        prow = rows[pr]
        if done[pr] or ln != len(prow):
            continue
        if not prow:
            done[pr] = True
            continue
        pc = min(prow, key=lambda c: (len(col_rows[c]), c))
        done[pr] = True
        for c in prow:
            col_rows[c].discard(pr)
        rank += 1
        for ri in sorted(col_rows.get(pc, ())):
            old = rows[ri]
            new = combine(prow, old, pc)
            for c in old:
                if c not in new:
                    col_rows[c].discard(ri)
            for c in new:
                if c not in old:
                    col_rows.setdefault(c, set()).add(ri)
            rows[ri] = new
            if new:
                heapq.heappush(heap, (len(new), ri))
            else:
                done[ri] = True
    return rank


def _combine_int(prow: dict[int, int], row: dict[int, int], pc: int) -> dict[int, int]:
    a, b = prow[pc], row[pc]
    g = gcd(a, b)
    fa, fb = a // g, b // g
    out = {c: fa * x for c, x in row.items()}
    for c, x in prow.items():
        y = out.get(c, 0) - fb * x
        if y:
            out[c] = y
        else:
            out.pop(c, None)
    if out:
        g = 0
        for x in out.values():
            g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            out = {c: x // g for c, x in out.items()}
    return out


def rank_exact(m: SparseRationalMatrix) -> int:
    return _eliminate(_integer_rows(m), _combine_int)


def rank_mod_p(m: SparseRationalMatrix, p: int) -> int:
    """Rank modulo ``p``; raises ``ZeroDivisionError`` if a denominator vanishes mod p."""
    rows = []
    for r in m.row_dicts():
        rr = {}
        for c, x in r.items():
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            y = x.numerator * pow(x.denominator, -1, p) % p
            if y:
                rr[c] = y
        rows.append(rr)

    def combine(prow: dict[int, int], row: dict[int, int], pc: int) -> dict[int, int]:
        f = row[pc] * pow(prow[pc], -1, p) % p
        out = dict(row)
        for c, x in prow.items():
            y = (out.get(c, 0) - f * x) % p
            if y:
                out[c] = y
            else:
                out.pop(c, None)
        return out

    return _eliminate(rows, combine)


def rank_dense(m: SparseRationalMatrix) -> int:
    """Plain Gaussian elimination on a dense Fraction copy (oracle for small matrices)."""
    d = m.to_dense()
    rank = 0
    ncols = m.cols
    for c in range(ncols):
        piv = next((r for r in range(rank, len(d)) if d[r][c] != 0), None)
        if piv is None:
            continue
        d[rank], d[piv] = d[piv], d[rank]
        for r in range(len(d)):
            if r != rank and d[r][c] != 0:
                f = d[r][c] / d[rank][c]
                d[r] = [x - f * y for x, y in zip(d[r], d[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class RankReport:
    rank: int
    modular: tuple[tuple[int, int], ...]
    bad_primes: tuple[int, ...]


def rank(m: SparseRationalMatrix, primes: tuple[int, ...] = DEFAULT_PRIMES,
         check: bool = True) -> RankReport:
    """Exact rank with an optional cross-check modulo primes.

    A prime whose rank disagrees with the exact one (or that divides a
    denominator) is reported as bad; the exact rank always wins.
    """
    r = rank_exact(m)
    mods, bad = [], []
    if check:
        for p in primes:
            try:
                rp = rank_mod_p(m, p)
            except ZeroDivisionError:
                bad.append(p)
                continue
            mods.append((p, rp))
            if rp != r:
                bad.append(p)
    return RankReport(r, tuple(mods), tuple(bad))


def format_matrix(m: SparseRationalMatrix) -> str:
    lines = [f"{m.rows} {m.cols} {m.nnz}"]
    lines += [f"{i} {j} {x.numerator} {x.denominator}" for i, j, x in m.entries()]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> SparseRationalMatrix:
    rows = text.strip().splitlines()
    r, c, nnz = (int(x) for x in rows[0].split())
    if len(rows) - 1 != nnz:
        raise ValueError("nnz does not match the number of entry lines")
    return SparseRationalMatrix.from_entries(
        r, c, ((int(a), int(b), Fraction(int(p), int(q)))
               for a, b, p, q in (ln.split() for ln in rows[1:])))
