"""Verification suites shared by the tests and the command line."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .complexes import estimate_candidates
from .differentials import BasisClosureError, assemble_matrix
from .graphspace import Basis, Family, _min_valence, generate_basis
from .maps import ChainMap, check_chain_map
from .matrix import SparseRationalMatrix

DEFAULT_MAX_CANDIDATES = 3_000_000


@dataclass
class StratumResult:
    v: int
    e: int
    size: int
    ok: bool
    skipped: bool = False
    detail: str = ""

    def line(self) -> str:
        status = "skip" if self.skipped else ("ok" if self.ok else "FAIL")
        return f"(v={self.v}, e={self.e}) size={self.size} {status} {self.detail}".rstrip()


@dataclass
class SuiteResult:
    name: str
    strata: list[StratumResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.ok and not s.skipped for s in self.strata)

    @property
    def failed(self) -> list[StratumResult]:
        return [s for s in self.strata if not s.ok]

    @property
    def skipped(self) -> list[StratumResult]:
        return [s for s in self.strata if s.skipped]

    def summary(self) -> str:
        done = [s for s in self.strata if not s.skipped]
        return (f"{self.name}: {len(done)} strata checked, {len(self.failed)} failed, "
                f"{len(self.skipped)} skipped by the size guard")


def strata(fam: Family, vmax: int, bmax: int, bmin: int | None = None) -> Iterator[tuple[int, int]]:
    """All ``(v, e)`` with ``1 <= v <= vmax`` and ``e - v <= bmax`` that can be nonempty."""
    mv = _min_valence(fam)
    for v in range(1, vmax + 1):
        lo = (mv * v + 1) // 2
        lo = max(lo, v - 1 if fam.graphs != "all" else 0)
        if bmin is not None:
            lo = max(lo, v + bmin)
        for e in range(lo, v + bmax + 1):
            yield v, e


def _guard(fam: Family, v: int, e: int, limit: int) -> bool:
    return estimate_candidates(fam, v, e) <= limit


class _Bases:
    """Per-run basis store so each stratum is generated once."""

    def __init__(self, fam: Family, basis_fn: Callable[[Family, int, int], Basis] | None):
        self.fam = fam
        self.fn = basis_fn or generate_basis
        self.store: dict[tuple[int, int], Basis] = {}

    def __call__(self, v: int, e: int) -> Basis:
        if (v, e) not in self.store:
            self.store[(v, e)] = self.fn(self.fam, v, e) if v >= 1 and e >= 0 else \
                Basis(self.fam, v, e, [])
        return self.store[(v, e)]


def check_d2(fam: Family, vmax: int, bmax: int, *, max_candidates: int = DEFAULT_MAX_CANDIDATES,
             basis_fn=None, progress: Callable[[str], None] | None = None) -> SuiteResult:
    """``d_C^2 = 0``, ``d_E^2 = 0``, ``d^2 = 0`` and ``d_E d_C = (-1)^{1-n} d_C d_E`` as exact
    matrices on every stratum; each stratum is the source of the checked composites."""
    bases = _Bases(fam, basis_fn)
    res = SuiteResult(f"d2 {fam.tag()}")
    sign = Fraction(-1 if (1 - fam.n) % 2 else 1)
    mats: dict[tuple[int, int, str], SparseRationalMatrix] = {}

    def mat(v: int, e: int, op: str) -> SparseRationalMatrix:
        if (v, e, op) not in mats:
            tgt = bases(v - 1, e - 1) if op == "C" else bases(v, e)
            mats[(v, e, op)] = assemble_matrix(bases(v, e), tgt, op)
        return mats[(v, e, op)]

    for v, e in strata(fam, vmax, bmax):
        # strata are visited by increasing (v, e); drop what no later stratum reads
        for key in [k for k in bases.store if k[0] < v - 1 or (k[0] == v - 1 and k[1] < e - 1)
                    or (k[0] == vmax and k[1] < e)]:
            del bases.store[key]
        for key in [k for k in mats if k[0] < v - 1 or (k[0] < v and k[1] < e - 1)
                    or (k[0] == vmax and k[:2] != (v, e))]:
            del mats[key]
        if not all(_guard(fam, v - i, e - i, max_candidates) for i in range(3) if v - i >= 1):
            res.strata.append(StratumResult(v, e, -1, True, True, "candidate count above guard"))
            if progress:
                progress(res.strata[-1].line())
            continue
        try:
            B = bases(v, e)
            E1, C1, E0, C0 = mat(v, e, "E"), mat(v, e, "C"), mat(v - 1, e - 1, "E"), \
                mat(v - 1, e - 1, "C")
            bad = _stratum_checks(fam, B, bases(v - 1, e - 1), C1, E1, C0, E0, sign)
            res.strata.append(StratumResult(v, e, len(B), not bad, detail=",".join(bad)))
        except BasisClosureError as exc:
            res.strata.append(StratumResult(v, e, -1, False, detail=f"closure: {exc}"))
        if progress:
            progress(res.strata[-1].line())
    return res


def _apply(m: SparseRationalMatrix, col: dict[int, Fraction]) -> dict[int, Fraction]:
    acc: dict[int, Fraction] = {}
    for k, y in col.items():
        for i, x in m.columns[k].items():
            acc[i] = acc.get(i, 0) + x * y
    return {i: x for i, x in acc.items() if x}


def _stratum_checks(fam: Family, B: Basis, Bp: Basis, C1, E1, C0, E0, sign: Fraction) -> list[str]:
    """All identities out of one stratum, one source column at a time (no product
    matrices are formed).

    ``d = d_C + (-1)^{n deg} d_E`` maps ``(v, e)`` to ``(v-1, e-1) + (v, e)``; its
    square lands in ``v-2, v-1, v`` and each block is compared with zero.
    """
    s1 = [-1 if (fam.n * d) % 2 else 1 for d in B.degrees]
    s0 = [-1 if (fam.n * d) % 2 else 1 for d in Bp.degrees]
    bad: set[str] = set()
    for j in range(len(B)):
        e1, c1 = E1.columns[j], C1.columns[j]
        if _apply(E1, e1):
            bad.add("dE^2")
        if _apply(C0, c1):
            bad.add("dC^2")
        ec = _apply(E0, c1)
        ce = _apply(C1, e1)
        if ec != {i: x * sign for i, x in ce.items()}:
            bad.add("anticommute")
        d1 = {i: x * s1[i] for i, x in e1.items()}
        # into (v-1): C1 D1 + D0 C1; into (v): D1 D1
        mid = _apply(C1, d1)
        for i, x in ec.items():
            y = mid.get(i, 0) + x * s0[i]
            if y:
                mid[i] = y
            else:
                mid.pop(i, None)
        if mid or _apply(E1, d1):
            bad.add("d^2")
    return [k for k in ("dE^2", "dC^2", "anticommute", "d^2") if k in bad]


def check_chain_map_strata(m: ChainMap, vmax: int, bmax: int, *, basis_fn=None,
                           max_candidates: int = DEFAULT_MAX_CANDIDATES,
                           progress: Callable[[str], None] | None = None) -> SuiteResult:
    """``d M = M d`` column by column on every source stratum."""
    fam = m.source
    bases = _Bases(fam, basis_fn)
    res = SuiteResult(f"chain-map {m.name}: {fam.tag()} -> {m.target.tag()}")
    for v, e in strata(fam, vmax, bmax):
        if not _guard(fam, v, e, max_candidates):
            res.strata.append(StratumResult(v, e, -1, True, True, "candidate count above guard"))
            continue
        B = bases(v, e)
        bad = check_chain_map(m, B.elements)
        res.strata.append(StratumResult(v, e, len(B), not bad,
                                        detail=f"{len(bad)} failing" if bad else ""))
        if progress:
            progress(res.strata[-1].line())
    return res


def bijection_check(m: ChainMap, v: int, e: int, target_v: int | None = None,
                    target_e: int | None = None) -> tuple[bool, int, int]:
    """Images of basis elements are distinct single classes with coefficient +-1 and
    exhaust the target basis."""
    B = generate_basis(m.source, v, e)
    T = generate_basis(m.target, target_v or v, target_e or e)
    seen = set()
    for g in B.elements:
        img = m(g)
        if len(img) != 1 or abs(next(iter(img.values()))) != 1:
            return False, len(B), len(T)
        seen.add(next(iter(img)))
    return len(seen) == len(B) == len(T) and seen == set(T.elements), len(B), len(T)
