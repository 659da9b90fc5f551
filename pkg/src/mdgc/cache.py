"""On-disk basis cache.

One file per (family, n, v, e, truncation).  The header records the key, the
format version and a sha256 of the body; a file whose version, key or hash
does not match is refused.  Each body line is one canonical representative:
``v e`` followed by ``tail,head,colours,type`` per edge.
"""
from __future__ import annotations

import hashlib
import os
from pathlib import Path

from .graphspace import BaseGraphRep, Basis, Family, generate_basis

FORMAT_VERSION = 1
ENV_VAR = "MDGC_CACHE"


class CacheError(RuntimeError):
    pass


def cache_root() -> Path:
    root = os.environ.get(ENV_VAR)
    if root:
        return Path(root)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "mdgc"


def _key(fam: Family, v: int, e: int) -> dict[str, str]:
    return {"family": fam.tag(), "n": str(fam.n), "v": str(v), "e": str(e),
            "truncation": fam.label or "-", "module": ",".join(fam.module.names)}


def cache_path(fam: Family, v: int, e: int, root: Path | None = None) -> Path:
    k = _key(fam, v, e)
    name = f"{k['family']}_{k['truncation']}_v{v}_e{e}.basis"
    return (root or cache_root()) / name


def format_rep(rep: BaseGraphRep, fam: Family) -> str:
    parts = [str(rep.v), str(rep.e)]
    for t, h, cols, ty in rep.edges:
        cs = "".join("+" if c == 1 else "-" for c in cols)
        parts.append(f"{t},{h},{cs},{fam.module.names[ty]}")
    return " ".join(parts)


def parse_rep(line: str, fam: Family) -> BaseGraphRep:
    fields = line.split()
    v, e = int(fields[0]), int(fields[1])
    edges = []
    for f in fields[2:]:
        t, h, cs, name = f.split(",", 3)
        edges.append((int(t), int(h), tuple(1 if c == "+" else -1 for c in cs),
                      fam.module[name]))
    if len(edges) != e:
        raise CacheError(f"edge count mismatch in line {line!r}")
    return BaseGraphRep(v, tuple(edges))


def dumps(basis: Basis) -> str:
    body = "".join(format_rep(g, basis.family) + "\n" for g in basis.elements)
    head = [f"# mdgc-basis format={FORMAT_VERSION}"]
    head += [f"# {k}={x}" for k, x in _key(basis.family, basis.v, basis.e).items()]
    head += [f"# count={len(basis)}",
             f"# sha256={hashlib.sha256(body.encode()).hexdigest()}"]
    return "\n".join(head) + "\n" + body


def loads(text: str, fam: Family, v: int, e: int) -> Basis:
    lines = text.splitlines(keepends=True)
    head = {}
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        ln = lines[i][1:].strip()
        if ln.startswith("mdgc-basis"):
            head["format"] = ln.split("format=", 1)[1]
        else:
            k, _, x = ln.partition("=")
            head[k] = x
        i += 1
    if head.get("format") != str(FORMAT_VERSION):
        raise CacheError(f"unsupported cache format {head.get('format')!r}")
    for k, x in _key(fam, v, e).items():
        if head.get(k) != x:
            raise CacheError(f"cache header {k}={head.get(k)!r} does not match {x!r}")
    body = "".join(lines[i:])
    if hashlib.sha256(body.encode()).hexdigest() != head.get("sha256"):
        raise CacheError("cache body hash mismatch")
    elements = [parse_rep(ln, fam) for ln in body.splitlines() if ln.strip()]
    if len(elements) != int(head.get("count", -1)):
        raise CacheError("cache element count mismatch")
    return Basis(fam, v, e, elements)


def cached_basis(fam: Family, v: int, e: int, root: Path | None = None,
                 use_cache: bool = True) -> Basis:
    """Load a basis from the cache, generating and storing it on a miss."""
    if not use_cache:
        return generate_basis(fam, v, e)
    path = cache_path(fam, v, e, root)
    if path.exists():
        return loads(path.read_text(), fam, v, e)
    basis = generate_basis(fam, v, e)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(dumps(basis))
    tmp.replace(path)
    return basis
