"""Command line: bases, matrices, homology tables and verification suites.

Exit codes: 0 pass, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import cache
from .complexes import TooLarge, assemble_complex, vertex_range
from .core import ConfigurationError, parse_graph
from .graphspace import Basis, Family, make_family
from .homology import format_homology, homology
from .matrix import DEFAULT_PRIMES, format_matrix

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def family_from_args(a: argparse.Namespace) -> Family:
    return make_family(a.family, a.n, j=a.j, k=a.k, l=a.l, tadpoles=not a.no_tadpoles,
                       truncation=a.truncation, t=a.t)


def parse_family_spec(text: str) -> Family:
    """``NAME:n=2,j=1,t=2`` style spec used by ``compare-homology``."""
    name, _, rest = text.partition(":")
    kw: dict = {}
    for item in filter(None, rest.split(",")):
        k, _, x = item.partition("=")
        if k not in ("n", "j", "k", "l", "t", "truncation", "tadpoles"):
            raise UsageError(f"unknown key {k!r} in family spec {text!r}")
        kw[k] = int(x)
    if "n" not in kw:
        raise UsageError(f"family spec {text!r} needs n=")
    n = kw.pop("n")
    if "tadpoles" in kw:
        kw["tadpoles"] = bool(kw["tadpoles"])
    return make_family(name, n, **kw)


def _basis_job(args: tuple[Family, int, int, str | None, bool]) -> Basis:
    fam, v, e, root, use = args
    return cache.cached_basis(fam, v, e, Path(root) if root else None, use)


class Runner:
    """Fans strata out to a process pool and merges in stratum order."""

    def __init__(self, a: argparse.Namespace):
        self.root = a.cache
        self.use_cache = not a.no_cache
        self.jobs = max(1, a.jobs)

    def bases(self, fam: Family, strata: Sequence[tuple[int, int]]) -> dict[tuple[int, int], Basis]:
        jobs = [(fam, v, e, self.root, self.use_cache) for v, e in strata]
        if self.jobs == 1 or len(jobs) <= 1:
            out = [_basis_job(j) for j in jobs]
        else:
            with ProcessPoolExecutor(self.jobs) as pool:
                out = list(pool.map(_basis_job, jobs))
        return dict(zip(strata, out))

    def basis_fn(self, fam: Family, v: int, e: int) -> Basis:
        return _basis_job((fam, v, e, self.root, self.use_cache))


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _strata_for(a: argparse.Namespace, fam: Family) -> list[tuple[int, int]]:
    if a.v is not None:
        if a.e is None and a.b is None:
            raise UsageError("--v needs --e or --b")
        return [(a.v, a.e if a.e is not None else a.v + a.b)]
    if a.b is None:
        raise UsageError("give --v/--e or --b")
    return [(v, v + a.b) for v in vertex_range(fam, a.b, a.vmax)]


def cmd_basis(a: argparse.Namespace) -> int:
    fam = family_from_args(a)
    bases = Runner(a).bases(fam, _strata_for(a, fam))
    _write("".join(cache.dumps(B) for _, B in sorted(bases.items())), a.out)
    return EXIT_OK


def _loop_complex(a: argparse.Namespace, fam: Family, b: int):
    strata = [(v, v + b) for v in vertex_range(fam, b, a.vmax)]
    bases = Runner(a).bases(fam, strata)
    return assemble_complex(fam, {v: bases[(v, e)] for v, e in strata}, f"{fam.tag()} b={b}")


def cmd_matrix(a: argparse.Namespace) -> int:
    fam = family_from_args(a)
    if a.b is None:
        raise UsageError("matrix needs --b")
    cx = _loop_complex(a, fam, a.b)
    parts = []
    for d in cx.degrees():
        m = cx.boundary[d]
        parts.append(f"# {fam.tag()} b={a.b} degree {d} -> {d - 1}\n" + format_matrix(m))
    _write("".join(parts), a.out)
    return EXIT_OK


def _table(a: argparse.Namespace, fam: Family, bs: Sequence[int]):
    rows = []
    bad = set()
    from .homology import HomologyRow
    for b in bs:
        cx = _loop_complex(a, fam, b)
        res = homology(cx, primes=tuple(a.primes))
        bad |= res.bad_primes()
        rows += [HomologyRow(fam.tag(), fam.n, b, d, x) for d, x in sorted(res.dims.items())]
    return rows, bad


def cmd_homology(a: argparse.Namespace) -> int:
    fam = family_from_args(a)
    bs = a.b_list or ([a.b] if a.b is not None else None)
    if not bs:
        raise UsageError("homology needs --b")
    rows, bad = _table(a, fam, bs)
    text = format_homology(rows)
    if bad:
        text += f"# bad primes: {sorted(bad)}\n"
    _write(text, a.out)
    return EXIT_OK


def cmd_compare(a: argparse.Namespace) -> int:
    left, right = parse_family_spec(a.left), parse_family_spec(a.right)
    bs = a.b_list or ([a.b] if a.b is not None else None)
    if not bs:
        raise UsageError("compare-homology needs --b")
    lrows, _ = _table(a, left, bs)
    rrows, _ = _table(a, right, bs)
    lt = {(r.b, r.degree): r.dim for r in lrows if r.dim}
    rt = {(r.b, r.degree): r.dim for r in rrows if r.dim}
    lines = [f"b degree {left.tag()} {right.tag()}"]
    for key in sorted(set(lt) | set(rt)):
        lines.append(f"{key[0]} {key[1]} {lt.get(key, 0)} {rt.get(key, 0)}")
    same = lt == rt
    lines.append("equal" if same else "DIFFERENT")
    _write("\n".join(lines) + "\n", a.out)
    return EXIT_OK if same else EXIT_FAIL


def cmd_verify(a: argparse.Namespace) -> int:
    from . import verify
    runner = Runner(a)
    progress = (lambda s: print(s, file=sys.stderr)) if a.verbose else None
    if a.suite == "diagram":
        return _verify_diagram(a)
    fam = family_from_args(a)
    if a.suite in ("d2", "anticommute"):
        res = verify.check_d2(fam, a.vmax, a.bmax, basis_fn=runner.basis_fn,
                              max_candidates=a.max_candidates, progress=progress)
        if a.suite == "anticommute":
            for s in res.strata:
                if not s.skipped:
                    s.ok = "anticommute" not in s.detail
    else:
        res = verify.check_chain_map_strata(_chain_map(a, fam), a.vmax, a.bmax,
                                            basis_fn=runner.basis_fn,
                                            max_candidates=a.max_candidates, progress=progress)
    lines = [res.summary()] + [s.line() for s in res.strata]
    lines.append("PASS" if res.passed else "FAIL")
    _write("\n".join(lines) + "\n", a.out)
    return EXIT_OK if res.passed else EXIT_FAIL


def _chain_map(a: argparse.Namespace, fam: Family):
    from . import maps
    if a.map == "h":
        if fam.name != "GC":
            raise UsageError("the map h starts at GC")
        return maps.map_h(fam.n, tadpoles=fam.tadpoles)
    if a.map == "g":
        if fam.name != "GC":
            raise UsageError("the map g starts at GC")
        return maps.map_g(fam.n, tadpoles=fam.tadpoles)
    if a.map == "eta":
        return maps.eta(fam)
    if a.map == "kappa":
        return maps.kappa(fam)
    raise UsageError(f"unknown map {a.map!r}")


def _verify_diagram(a: argparse.Namespace) -> int:
    from .diagram import Fixture, fixtures, verify_commutative_diagram
    if a.graph:
        g = parse_graph(Path(a.graph).read_text())
        fxs = [Fixture(a.n, g.base.v, g.base.endpoints)]
    else:
        fxs = fixtures(a.n, a.vmax, a.bmax)
    ok = True
    lines = []
    for fx in fxs:
        rep = verify_commutative_diagram(fx)
        ok &= rep.passed
        lines.append(f"{fx.endpoints} {rep.summary()}")
        lines.append("  dims " + " ".join(f"{k}={x}" for k, x in rep.dims.items()))
        lines += ["  " + nt for nt in rep.notes]
    lines.append("PASS" if ok else "FAIL")
    _write("\n".join(lines) + "\n", a.out)
    return EXIT_OK if ok else EXIT_FAIL


def _family_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--family", required=required, help="GC, fGC, fGCc, D1GC, O1GC, S2GC, DGC, ...")
    p.add_argument("--n", type=int, required=True, help="graph complex parameter")
    p.add_argument("--j", type=int, default=0, help="oriented colours (default 0)")
    p.add_argument("--k", type=int, default=0, help="sourced colours (default 0)")
    p.add_argument("--l", type=int, default=0, help="plain colours (default 0)")
    p.add_argument("--t", type=int, default=None, help="longest original string in a bounded module")
    p.add_argument("--truncation", type=int, default=None, help="longest skeleton string (DskGC)")
    p.add_argument("--no-tadpoles", action="store_true", help="exclude tadpole edges")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cache", default=None, help=f"cache directory (default ${cache.ENV_VAR} "
                                                  "or ~/.cache/mdgc)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.add_argument("--primes", type=int, nargs=2, default=list(DEFAULT_PRIMES),
                   help="primes for the modular rank check")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdgc", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    for name, fn, help_ in (("basis", cmd_basis, "write canonical bases"),
                            ("matrix", cmd_matrix, "write differential matrices"),
                            ("homology", cmd_homology, "homology table per loop order")):
        p = sub.add_parser(name, help=help_)
        _family_args(p)
        _common(p)
        p.add_argument("--v", type=int, default=None, help="vertex count")
        p.add_argument("--e", type=int, default=None, help="edge count")
        p.add_argument("--b", type=int, default=None, help="loop order e - v")
        p.add_argument("--b-list", type=int, nargs="+", default=None, help="several loop orders")
        p.add_argument("--vmax", type=int, default=None, help="vertex bound (needed with 2-valent vertices)")
        p.set_defaults(func=fn)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=["d2", "anticommute", "chain-map", "diagram"])
    _family_args(p, required=False)
    _common(p)
    p.add_argument("--map", default="h", choices=["h", "g", "eta", "kappa"],
                   help="map for chain-map (default h)")
    p.add_argument("--vmax", type=int, default=4, help="vertex bound (default 4)")
    p.add_argument("--bmax", type=int, default=2, help="loop order bound (default 2)")
    p.add_argument("--graph", default=None, help="core graph file for the diagram suite")
    p.add_argument("--max-candidates", type=int, default=3_000_000,
                   help="skip strata visiting more representatives (default 3000000)")
    p.add_argument("--verbose", action="store_true", help="progress on stderr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare-homology", help="compare two homology tables")
    p.add_argument("--left", required=True, help="family spec, e.g. GC:n=2")
    p.add_argument("--right", required=True, help="family spec, e.g. O1GC:n=3")
    _common(p)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--b-list", type=int, nargs="+", default=None)
    p.add_argument("--vmax", type=int, default=None)
    p.set_defaults(func=cmd_compare)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    if getattr(a, "suite", None) != "diagram" and getattr(a, "cmd", None) == "verify" \
            and not a.family:
        ap.error("--family is required for this suite")
    try:
        return a.func(a)
    except (UsageError, ConfigurationError, ValueError) as exc:
        print(f"mdgc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cache.CacheError as exc:
        print(f"mdgc: cache error: {exc}; delete the file or pass --no-cache to regenerate",
              file=sys.stderr)
        return EXIT_USAGE
    except TooLarge as exc:
        print(f"mdgc: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
