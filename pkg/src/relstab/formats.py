"""Line-oriented text formats for groups, modules, maps and corpora.

Group file::

    group degree=4
    gen 1 2 3 0

Module file (one row-major ``mat`` line per group generator)::

    module p=2 dim=2
    mat 1 1 0 1

Map file::

    map p=2 rows=2 cols=3
    row 1 0 0
    row 0 1 0

Corpus file: one module file path per line, relative to the corpus file.
Blank lines and ``#`` comments are ignored everywhere.  Printing a parsed
file reproduces it up to whitespace.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from . import linalg as la
from .groups import FiniteGroup, GroupError, build_group
from .modules import GModule, ModuleError, build_module


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        where = f"{source}:" if source else ""
        prefix = f"{where}line {line}: " if line is not None else (f"{source}: " if source else "")
        super().__init__(prefix + message)
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _header(tokens: list[str], no: int, kind: str, keys: tuple[str, ...], source: str) -> dict:
    if tokens[0] != kind:
        raise FormatError(f"expected header '{kind} ...', got '{tokens[0]}'", no, source)
    vals = {}
    for tok in tokens[1:]:
        if "=" not in tok:
            raise FormatError(f"malformed header field '{tok}'", no, source)
        k, v = tok.split("=", 1)
        if k not in keys:
            raise FormatError(f"unknown header field '{k}'", no, source)
        try:
            vals[k] = int(v)
        except ValueError:
            raise FormatError(f"header field '{k}' is not an integer: '{v}'", no, source) from None
    missing = [k for k in keys if k not in vals]
    if missing:
        raise FormatError(f"header lacks {', '.join(missing)}", no, source)
    return vals


def _ints(tokens: list[str], no: int, source: str) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"non-integer entry in '{' '.join(tokens)}'", no, source) from None


def parse_group_file(text: str, source: str = "") -> FiniteGroup:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty group file", None, source)
    no, tokens = lines[0]
    degree = _header(tokens, no, "group", ("degree",), source)["degree"]
    if degree < 1:
        raise FormatError("degree must be positive", no, source)
    gens = []
    for no, tokens in lines[1:]:
        if tokens[0] != "gen":
            raise FormatError(f"expected 'gen', got '{tokens[0]}'", no, source)
        perm = _ints(tokens[1:], no, source)
        if len(perm) != degree:
            raise FormatError(f"permutation has {len(perm)} images, expected {degree}", no, source)
        if sorted(perm) != list(range(degree)):
            raise FormatError(f"not a permutation of 0..{degree - 1} (repeated or missing image)",
                              no, source)
        gens.append(tuple(perm))
    try:
        return build_group(gens, degree=degree)
    except GroupError as exc:
        raise FormatError(str(exc), None, source) from None


def print_group(group: FiniteGroup) -> str:
    out = [f"group degree={group.degree}"]
    out += ["gen " + " ".join(map(str, g)) for g in group.generators]
    return "\n".join(out) + "\n"


def parse_module_file(text: str, group: FiniteGroup, source: str = "") -> GModule:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty module file", None, source)
    no, tokens = lines[0]
    head = _header(tokens, no, "module", ("p", "dim"), source)
    p, dim = head["p"], head["dim"]
    try:
        la.Field(p)
    except la.LinalgError as exc:
        raise FormatError(str(exc), no, source) from None
    mats = []
    for no, tokens in lines[1:]:
        if tokens[0] != "mat":
            raise FormatError(f"expected 'mat', got '{tokens[0]}'", no, source)
        entries = _ints(tokens[1:], no, source)
        if len(entries) != dim * dim:
            raise FormatError(f"matrix has {len(entries)} entries, expected {dim * dim}", no, source)
        mats.append(np.array(entries, dtype=np.int64).reshape(dim, dim) % p)
    if len(mats) != len(group.generators):
        raise FormatError(f"{len(mats)} matrices for {len(group.generators)} generators",
                          None, source)
    try:
        return build_module(group, p, mats, name=Path(source).stem if source else "", dim=dim)
    except (ModuleError, la.LinalgError) as exc:
        raise FormatError(str(exc), None, source) from None


def print_module(m: GModule) -> str:
    out = [f"module p={m.p} dim={m.dim}"]
    out += ["mat " + " ".join(map(str, a.ravel().tolist())) for a in m.action]
    return "\n".join(out) + "\n"


def parse_map_file(text: str, source: str = "") -> tuple[int, np.ndarray]:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty map file", None, source)
    no, tokens = lines[0]
    head = _header(tokens, no, "map", ("p", "rows", "cols"), source)
    rows = []
    for no, tokens in lines[1:]:
        if tokens[0] != "row":
            raise FormatError(f"expected 'row', got '{tokens[0]}'", no, source)
        entries = _ints(tokens[1:], no, source)
        if len(entries) != head["cols"]:
            raise FormatError(f"row has {len(entries)} entries, expected {head['cols']}", no, source)
        rows.append(entries)
    if len(rows) != head["rows"]:
        raise FormatError(f"{len(rows)} rows, expected {head['rows']}", None, source)
    mat = np.array(rows, dtype=np.int64).reshape(head["rows"], head["cols"]) % head["p"]
    return head["p"], mat


def print_map(mat: np.ndarray, p: int) -> str:
    out = [f"map p={p} rows={mat.shape[0]} cols={mat.shape[1]}"]
    out += ["row " + " ".join(map(str, r.tolist())) for r in mat]
    return "\n".join(out) + "\n"


def parse_corpus_file(text: str, base: Path | str = ".", source: str = "") -> list[Path]:
    base = Path(base)
    paths = []
    for no, tokens in _lines(text):
        if len(tokens) != 1:
            raise FormatError("expected a single path per line", no, source)
        paths.append(base / tokens[0])
    return paths


def print_corpus(paths, base: Path | str = ".") -> str:
    base = Path(base)
    out = []
    for p in paths:
        p = Path(p)
        try:
            out.append(str(p.relative_to(base)))
        except ValueError:
            out.append(str(p))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# file helpers


def load_group(path) -> FiniteGroup:
    path = Path(path)
    return parse_group_file(_read(path), str(path))


def load_module(path, group: FiniteGroup) -> GModule:
    path = Path(path)
    return parse_module_file(_read(path), group, str(path))


def load_corpus(path, group: FiniteGroup) -> list[tuple[str, GModule]]:
    path = Path(path)
    files = parse_corpus_file(_read(path), path.parent, str(path))
    return [(f.stem, load_module(f, group)) for f in files]


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", None, str(path)) from None
