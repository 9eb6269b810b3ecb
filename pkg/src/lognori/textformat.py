"""Plain-text presentations of monoids and monoid maps.

Grammar (``#`` starts a comment, blank lines are ignored)::

    monoid   := header generator*
    header   := "ambient" INT INT*        free rank, then torsion factors
    generator:= INT+ | "."                one coordinate per ambient summand;
                                          "." is the empty vector of rank 0
    mapfile  := "source" monoid "target" monoid "map" INT row*
    row      := INT+                      one row per target coordinate

Torsion factors must be at least 2 and form a divisor chain.  Generators
are reduced modulo the torsion factors on input.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

from .errors import PreconditionError
from .lattice import AbelianGroup
from .monoid import AffineMonoid, MonoidMap


class MonoidSyntaxError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class MonoidSemanticError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


_TOKEN = re.compile(r"\S+")


@dataclass
class _Line:
    number: int
    tokens: list[tuple[int, str]]  # (column, text), columns 1-based

    @property
    def words(self) -> list[str]:
        return [t for _, t in self.tokens]


def _lines(text: str) -> list[_Line]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(body)]
        if toks:
            out.append(_Line(i, toks))
    return out


def _ints(line: _Line, start: int = 0) -> list[int]:
    vals = []
    for col, tok in line.tokens[start:]:
        try:
            vals.append(int(tok))
        except ValueError:
            raise MonoidSyntaxError(line.number, col, f"expected an integer, found {tok!r}") from None
    return vals


def _header(line: _Line) -> AbelianGroup:
    col, kw = line.tokens[0]
    if kw != "ambient":
        raise MonoidSyntaxError(line.number, col, f"expected 'ambient', found {kw!r}")
    if len(line.tokens) < 2:
        raise MonoidSyntaxError(line.number, col + len(kw), "missing free rank")
    vals = _ints(line, 1)
    if vals[0] < 0:
        raise MonoidSyntaxError(line.number, line.tokens[1][0], "free rank must be non-negative")
    tors = vals[1:]
    for k, t in enumerate(tors):
        tcol = line.tokens[2 + k][0]
        if t < 2:
            raise MonoidSyntaxError(line.number, tcol, f"torsion factor {t} is less than 2")
        if k and t % tors[k - 1]:
            raise MonoidSyntaxError(line.number, tcol, f"torsion factor {t} is not a multiple of {tors[k - 1]}")
    return AbelianGroup(vals[0], tuple(tors))


def _monoid(lines: list[_Line]) -> AffineMonoid:
    if not lines:
        raise MonoidSyntaxError(1, 1, "empty input")
    amb = _header(lines[0])
    gens = []
    for line in lines[1:]:
        vec = [] if line.words == ["."] else _ints(line)
        if len(vec) != amb.dim:
            raise MonoidSemanticError(line.number, f"generator has {len(vec)} coordinates, ambient {amb} needs {amb.dim}")
        gens.append(tuple(vec))
    return AffineMonoid(amb, tuple(gens))


def parse_monoid(text: str) -> AffineMonoid:
    return _monoid(_lines(text))


def parse_map(text: str) -> MonoidMap:
    lines = _lines(text)
    marks = {}
    for idx, line in enumerate(lines):
        kw = line.words[0]
        if kw in ("source", "target", "map"):
            if kw in marks:
                raise MonoidSyntaxError(line.number, line.tokens[0][0], f"duplicate {kw!r} block")
            marks[kw] = idx
    for kw in ("source", "target", "map"):
        if kw not in marks:
            raise MonoidSyntaxError(lines[-1].number if lines else 1, 1, f"missing {kw!r} block")
    if not marks["source"] < marks["target"] < marks["map"] or marks["source"] != 0:
        raise MonoidSyntaxError(lines[0].number, 1, "blocks must appear as source, target, map")
    for kw in ("source", "target"):
        if len(lines[marks[kw]].tokens) != 1:
            line = lines[marks[kw]]
            raise MonoidSyntaxError(line.number, line.tokens[1][0], f"unexpected text after {kw!r}")
    src = _monoid(lines[marks["source"] + 1 : marks["target"]])
    tgt = _monoid(lines[marks["target"] + 1 : marks["map"]])
    mline = lines[marks["map"]]
    if len(mline.tokens) != 2:
        raise MonoidSyntaxError(mline.number, mline.tokens[0][0], "expected 'map <rows>'")
    (k,) = _ints(mline, 1)
    rows_lines = lines[marks["map"] + 1 :]
    if k != tgt.ambient.dim:
        raise MonoidSemanticError(mline.number, f"map declares {k} rows, target ambient has dimension {tgt.ambient.dim}")
    if len(rows_lines) != k:
        raise MonoidSemanticError(mline.number, f"map declares {k} rows, found {len(rows_lines)}")
    rows = []
    for line in rows_lines:
        r = _ints(line)
        if len(r) != src.ambient.dim:
            raise MonoidSemanticError(line.number, f"row has {len(r)} entries, source ambient needs {src.ambient.dim}")
        rows.append(tuple(r))
    try:
        return MonoidMap(src, tgt, tuple(rows))
    except PreconditionError as e:
        raise MonoidSemanticError(mline.number, str(e)) from None


def parse(source: str | Path | TextIO) -> AffineMonoid | MonoidMap:
    """Read a monoid or a map file (maps start with ``source``)."""
    if isinstance(source, Path):
        text = source.read_text()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    lines = _lines(text)
    if lines and lines[0].words[0] == "source":
        return parse_map(text)
    return parse_monoid(text)


def parse_monoid_file(path: str | Path | TextIO) -> AffineMonoid | MonoidMap:
    if isinstance(path, (str, Path)):
        return parse(Path(path))
    return parse(path)


def _row(v: Iterable[int]) -> str:
    return " ".join(str(x) for x in v)


def serialize_monoid(m: AffineMonoid) -> str:
    head = ["ambient", str(m.ambient.free_rank)] + [str(t) for t in m.ambient.torsion]
    out = io.StringIO()
    out.write(" ".join(head) + "\n")
    for g in m.generators:
        out.write((_row(g) or ".") + "\n")
    return out.getvalue()


def serialize_map(f: MonoidMap) -> str:
    parts = ["source\n", serialize_monoid(f.source), "target\n", serialize_monoid(f.target), f"map {len(f.matrix)}\n"]
    parts += [_row(r) + "\n" for r in f.matrix]
    return "".join(parts)


def serialize(x: AffineMonoid | MonoidMap) -> str:
    return serialize_map(x) if isinstance(x, MonoidMap) else serialize_monoid(x)
