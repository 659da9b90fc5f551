"""Finite-dimensional dg modules of edge types with a reversal involution.

Every module is stored in a fixed basis.  For each basis element we record its
degree, the image under edge reversal (a single basis element with a sign),
the differential as a sparse vector and the contraction coefficient used when
an edge of that type is contracted.

Skeleton strings are written with one character per original edge: ``>`` for an
edge pointing along the string and ``<`` for one pointing back.  So ``><`` is
the two-edge string whose middle vertex is a sink and ``<>`` the one whose
middle vertex is a source.  The solid and dotted combinations are ``s<t>`` and
``d<t>``; ``T`` is the thick edge used by the per-core-graph complexes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .core import ConfigurationError

Vec = dict[int, Fraction]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DgS2Module:
    n: int
    names: tuple[str, ...]
    degree: tuple[int, ...]
    rev: tuple[tuple[int, int], ...]
    diff: tuple[tuple[tuple[int, Fraction], ...], ...]
    contraction: tuple[Fraction, ...]
    # parity of degrees, cached for the Koszul signs
    odd: tuple[bool, ...] = field(init=False)
    index: Mapping[str, int] = field(init=False)

    def __post_init__(self) -> None:
        size = len(self.names)
        for name, seq in (("degree", self.degree), ("rev", self.rev),
                          ("diff", self.diff), ("contraction", self.contraction)):
            if len(seq) != size:
                raise ConfigurationError(f"{name} has {len(seq)} entries, expected {size}")
        if len(set(self.names)) != size:
            raise ConfigurationError("basis names must be distinct")
        object.__setattr__(self, "odd", tuple(d % 2 == 1 for d in self.degree))
        object.__setattr__(self, "index", {nm: i for i, nm in enumerate(self.names)})

    @property
    def mu(self) -> int:
        return -1 if self.n % 2 else 1

    def __len__(self) -> int:
        return len(self.names)

    def __getitem__(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise ConfigurationError(f"no basis element {name!r}") from None

    def d(self, i: int) -> Vec:
        return dict(self.diff[i])

    def length(self, i: int) -> int:
        """Number of original edges of a skeleton element (0 if not a skeleton element)."""
        return skeleton_length(self.names[i])


def skeleton_length(name: str) -> int:
    if name and set(name) <= {"<", ">"}:
        return len(name)
    if name[:1] in ("s", "d") and name[1:].isdigit():
        return int(name[1:])
    return 0


def _mu(n: int) -> int:
    return -1 if n % 2 else 1


def _build(n: int, names: Sequence[str], degree: Sequence[int],
           rev: Sequence[tuple[int, int]], diff: Sequence[Mapping[int, Fraction]],
           contraction: Sequence[Fraction]) -> DgS2Module:
    return DgS2Module(
        n=n,
        names=tuple(names),
        degree=tuple(degree),
        rev=tuple(rev),
        diff=tuple(tuple(sorted((k, Fraction(c)) for k, c in d.items() if c)) for d in diff),
        contraction=tuple(Fraction(c) for c in contraction),
    )


def make_sigma_pm(n: int, sign: int, degree: int | None = None,
                  contraction: Fraction | int | None = None) -> DgS2Module:
    """One-dimensional module on which reversal acts by ``sign``."""
    if sign not in (1, -1):
        raise ConfigurationError("sign must be +1 or -1")
    deg = 1 - n if degree is None else degree
    if contraction is None:
        contraction = 1 if (sign == _mu(n) and deg == 1 - n) else 0
    if contraction and (sign != _mu(n) or deg != 1 - n):
        raise ConfigurationError(
            "a nonzero contraction needs reversal sign (-1)^n and degree 1-n")
    name = "+" if sign == 1 else "-"
    return _build(n, [name], [deg], [(0, sign)], [{}], [contraction])


def make_sigma_fix(n: int) -> DgS2Module:
    """Two arrows exchanged by reversal; contraction 1 along the core direction, (-1)^n against."""
    mu = _mu(n)
    return _build(n, [">", "<"], [1 - n, 1 - n], [(1, 1), (0, 1)], [{}, {}], [1, mu])


def skeleton_reversal_sign(n: int, t: int) -> int:
    """Sign of reversing a string of ``t`` original edges and ``t-1`` inner vertices.

    Reversal reverses the order of ``t`` edges of parity ``1-n`` and of ``t-1``
    vertices of parity ``n``, so the Koszul sign is the product of both block
    reversals.
    """
    e = (1 - n) * (t * (t - 1) // 2) + n * ((t - 1) * (t - 2) // 2)
    return -1 if e % 2 else 1


def alternating(t: int, first: str) -> str:
    other = "<" if first == ">" else ">"
    return "".join(first if i % 2 == 0 else other for i in range(t))


def make_sigma_sk(n: int, max_length: int) -> DgS2Module:
    """Skeleton module truncated at ``max_length``, in the basis of alternating strings."""
    if max_length < 1:
        raise ConfigurationError("max_length must be at least 1")
    mu = _mu(n)
    names: list[str] = []
    for t in range(1, max_length + 1):
        names += [alternating(t, ">"), alternating(t, "<")]
    idx = {nm: i for i, nm in enumerate(names)}
    degree, rev, diff, contraction = [], [], [], []
    for t in range(1, max_length + 1):
        s = skeleton_reversal_sign(n, t)
        a, b = idx[alternating(t, ">")], idx[alternating(t, "<")]
        degree += [t - n, t - n]
        rev += [(b, s), (a, s)] if t % 2 else [(a, s), (b, s)]
        if t == 1:
            diff += [{}, {}]
            contraction += [1, mu]
            continue
        pa, pb = idx[alternating(t - 1, ">")], idx[alternating(t - 1, "<")]
        if t % 2 == 0:
            diff += [{pa: 1, pb: -mu}, {pa: -1, pb: mu}]
        else:
            diff += [{pa: 1, pb: 1}, {pa: mu, pb: mu}]
        contraction += [0, 0]
    return _build(n, names, degree, rev, diff, contraction)


def solid_vector(n: int, t: int, sk: DgS2Module) -> Vec:
    mu = _mu(n)
    a, b = sk[alternating(t, ">")], sk[alternating(t, "<")]
    if t % 2:
        return {a: HALF, b: HALF * mu}
    return {a: HALF, b: -HALF}


def dotted_vector(n: int, t: int, sk: DgS2Module) -> Vec:
    mu = _mu(n)
    a, b = sk[alternating(t, ">")], sk[alternating(t, "<")]
    if t % 2:
        return {a: Fraction(1), b: Fraction(-mu)}
    return {a: Fraction(1), b: Fraction(1)}


def sigma_tu_vectors(n: int, t: int, u: int) -> tuple[DgS2Module, list[str], list[Vec]]:
    """Basis of the bounded submodule as vectors in the alternating-string basis.

    Originals of length at most ``t``, then solid elements up to length
    ``u+1`` and dotted elements up to length ``u`` of length above ``t``.
    """
    if u < 0 or t < 0 or t > u + 1:
        raise ConfigurationError(f"need 0 <= t <= u+1, got t={t}, u={u}")
    sk = make_sigma_sk(n, u + 1)
    names: list[str] = []
    vecs: list[Vec] = []
    for s in range(1, t + 1):
        for first in (">", "<"):
            nm = alternating(s, first)
            names.append(nm)
            vecs.append({sk[nm]: Fraction(1)})
    for s in range(t + 1, u + 2):
        names.append(f"s{s}")
        vecs.append(solid_vector(n, s, sk))
        if s <= u:
            names.append(f"d{s}")
            vecs.append(dotted_vector(n, s, sk))
    return sk, names, vecs


def _solve(basis: list[Vec], target: Vec) -> Vec:
    """Coordinates of ``target`` in the span of ``basis``; raises if outside."""
    keys = sorted({k for vec in basis for k in vec} | set(target))
    rows = [[vec.get(k, Fraction(0)) for vec in basis] + [target.get(k, Fraction(0))]
            for k in keys]
    ncol = len(basis)
    piv_cols: list[int] = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][ncol] != 0 for i in range(r, len(rows))):
        raise ConfigurationError("vector is not in the span of the chosen basis")
    out: Vec = {}
    for i, c in enumerate(piv_cols):
        if rows[i][ncol] != 0:
            out[c] = rows[i][ncol]
    return out


def _apply(sk: DgS2Module, vec: Vec, op: str) -> Vec:
    out: Vec = {}
    for i, c in vec.items():
        if op == "rev":
            j, s = sk.rev[i]
            out[j] = out.get(j, Fraction(0)) + c * s
        else:
            for j, dc in sk.diff[i]:
                out[j] = out.get(j, Fraction(0)) + c * dc
    return {k: c for k, c in out.items() if c}


def make_sigma_u(n: int, u: int, t: int | None = None) -> DgS2Module:
    """Bounded skeleton module spanned by solid up to ``u+1`` and dotted up to ``u``.

    The basis keeps original strings up to length ``t`` (default ``t = u``) and
    uses solid/dotted elements above that.
    """
    t = u if t is None else t
    sk, names, vecs = sigma_tu_vectors(n, t, u)
    degree, rev, diff, contraction = [], [], [], []
    for nm, vec in zip(names, vecs):
        degree.append(skeleton_length(nm) - n)
        r = _solve(vecs, _apply(sk, vec, "rev"))
        if len(r) != 1 or abs(next(iter(r.values()))) != 1:
            raise ConfigurationError(f"reversal does not preserve the basis at {nm}")
        (ri, rc), = r.items()
        rev.append((ri, int(rc)))
        diff.append(_solve(vecs, _apply(sk, vec, "d")))
        contraction.append(sum((c * sk.contraction[i] for i, c in vec.items()), Fraction(0)))
    return _build(n, names, degree, rev, diff, contraction)


def with_thick(mod: DgS2Module) -> DgS2Module:
    """Append the thick edge ``T``: closed, degree ``1-n``, reversal sign ``(-1)^n``."""
    if "T" in mod.index:
        return mod
    return _build(
        mod.n,
        list(mod.names) + ["T"],
        list(mod.degree) + [1 - mod.n],
        list(mod.rev) + [(len(mod), _mu(mod.n))],
        [dict(d) for d in mod.diff] + [{}],
        list(mod.contraction) + [0],
    )


def change_basis(mod: DgS2Module, names: Sequence[str], vectors: Sequence[Mapping[str, Fraction]]
                 ) -> DgS2Module:
    """Re-express ``mod`` in a new basis given by vectors over the old basis names."""
    vecs = [{mod[k]: Fraction(c) for k, c in vec.items() if c} for vec in vectors]
    if len(vecs) != len(mod):
        raise ConfigurationError("a basis change needs exactly dim many vectors")
    degree, rev, diff, contraction = [], [], [], []
    for nm, vec in zip(names, vecs):
        degs = {mod.degree[i] for i in vec}
        if len(degs) != 1:
            raise ConfigurationError(f"{nm} is not homogeneous")
        degree.append(degs.pop())
        r = _solve(vecs, _apply(mod, vec, "rev"))
        if len(r) != 1 or abs(next(iter(r.values()))) != 1:
            raise ConfigurationError(f"reversal does not preserve the basis at {nm}")
        (ri, rc), = r.items()
        rev.append((ri, int(rc)))
        diff.append(_solve(vecs, _apply(mod, vec, "d")))
        contraction.append(sum((c * mod.contraction[i] for i, c in vec.items()), Fraction(0)))
    return _build(mod.n, names, degree, rev, diff, contraction)


def check_module(mod: DgS2Module) -> list[str]:
    """Return the list of violated axioms (empty when the module is valid)."""
    problems = []
    mu = mod.mu
    for i, nm in enumerate(mod.names):
        j, s = mod.rev[i]
        if mod.rev[j] != (i, s):
            problems.append(f"reversal is not an involution at {nm}")
        if mod.degree[j] != mod.degree[i]:
            problems.append(f"reversal changes degree at {nm}")
        for k, _ in mod.diff[i]:
            if mod.degree[k] != mod.degree[i] - 1:
                problems.append(f"differential of {nm} is not of degree -1")
        dd: Vec = {}
        for k, c in mod.diff[i]:
            for m, c2 in mod.diff[k]:
                dd[m] = dd.get(m, Fraction(0)) + c * c2
        if any(dd.values()):
            problems.append(f"d^2 != 0 at {nm}")
        lhs: Vec = {}
        for k, c in mod.diff[j]:
            lhs[k] = lhs.get(k, Fraction(0)) + s * c
        rhs: Vec = {}
        for k, c in mod.diff[i]:
            kk, ss = mod.rev[k]
            rhs[kk] = rhs.get(kk, Fraction(0)) + c * ss
        if {k: c for k, c in lhs.items() if c} != {k: c for k, c in rhs.items() if c}:
            problems.append(f"differential does not commute with reversal at {nm}")
        if s * mod.contraction[j] != mu * mod.contraction[i]:
            problems.append(f"contraction is not (-1)^n-twisted by reversal at {nm}")
        if mod.contraction[i] and mod.degree[i] != 1 - mod.n:
            problems.append(f"contraction nonzero outside degree 1-n at {nm}")
        cd = sum((c * mod.contraction[k] for k, c in mod.diff[i]), Fraction(0))
        if cd:
            problems.append(f"C o d != 0 at {nm}")
    return problems


def format_module(mod: DgS2Module) -> str:
    """One line per basis element: name, degree, reversal image, differential, contraction."""
    lines = [f"module n={mod.n} dim={len(mod)}"]
    for i, nm in enumerate(mod.names):
        j, s = mod.rev[i]
        rev = f"{'+' if s == 1 else '-'}{mod.names[j]}"
        d = " ".join(f"{c}*{mod.names[k]}" for k, c in mod.diff[i]) or "0"
        lines.append(f"{nm}\t{mod.degree[i]}\t{rev}\t{d}\t{mod.contraction[i]}")
    return "\n".join(lines) + "\n"


def parse_module(text: str) -> DgS2Module:
    rows = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = rows[0].split()
    if head[0] != "module":
        raise ConfigurationError("module table must start with 'module n=<n> dim=<d>'")
    n = int(head[1].split("=")[1])
    dim = int(head[2].split("=")[1])
    body = [r.split("\t") for r in rows[1:]]
    if len(body) != dim:
        raise ConfigurationError("dimension mismatch in module table")
    names = [r[0] for r in body]
    idx = {nm: i for i, nm in enumerate(names)}
    degree, rev, diff, contraction = [], [], [], []
    for r in body:
        degree.append(int(r[1]))
        rev.append((idx[r[2][1:]], 1 if r[2][0] == "+" else -1))
        d: dict[int, Fraction] = {}
        if r[3] != "0":
            for term in r[3].split():
                c, nm = term.split("*", 1)
                d[idx[nm]] = Fraction(c)
        diff.append(d)
        contraction.append(Fraction(r[4]))
    return _build(n, names, degree, rev, diff, contraction)
