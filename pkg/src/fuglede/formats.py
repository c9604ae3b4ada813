"""Exchange-format parsers and serializers, plus the bundled Hadamard data.

Matrix text format: header line ``m n p``, then m rows of n space-separated
residues.  Point-set format: header ``p d count``, then one point per line.
Sign matrices are ``+``/``-`` character grids or whitespace-separated
``1``/``-1`` rows.  ``#``-prefixed lines and blank lines are ignored in all
three formats.  serialize(parse(text)) == text for canonical files.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

from .deciders import PointSet
from .gfmat import GFMatrix
from .loghad import SignMatrix


class ParseError(ValueError):
    """A malformed exchange file, with file/line (and column) diagnostics."""

    def __init__(self, source: str, line: int, message: str, col: int | None = None):
        self.source = source
        self.line = line
        self.col = col
        where = f"{source}:{line}" + (f":{col}" if col is not None else "")
        super().__init__(f"{where}: {message}")


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append((lineno, stripped))
    return out


def _int_tokens(source: str, lineno: int, line: str, expect: int, what: str) -> list[int]:
    tokens = line.split()
    if len(tokens) != expect:
        raise ParseError(source, lineno, f"expected {expect} {what}, got {len(tokens)}")
    values = []
    for col, tok in enumerate(tokens, start=1):
        try:
            values.append(int(tok))
        except ValueError:
            raise ParseError(source, lineno, f"not an integer: {tok!r}", col) from None
    return values


# ---------------------------------------------------------------------------
# GF matrices


def parse_gf_matrix_text(text: str, source: str = "<string>") -> GFMatrix:
    lines = _content_lines(text)
    if not lines:
        raise ParseError(source, 1, "empty matrix file")
    lineno, header = lines[0]
    m, n, p = _int_tokens(source, lineno, header, 3, "header fields (m n p)")
    if m < 1 or n < 1:
        raise ParseError(source, lineno, f"bad dimensions {m}x{n}")
    body = lines[1:]
    if len(body) != m:
        raise ParseError(source, lineno, f"expected {m} rows, found {len(body)}")
    rows = []
    for lineno, line in body:
        row = _int_tokens(source, lineno, line, n, "entries")
        for col, e in enumerate(row, start=1):
            if not 0 <= e < p:
                raise ParseError(source, lineno, f"residue {e} out of range for Z_{p}", col)
        rows.append(tuple(row))
    try:
        return GFMatrix(p, tuple(rows))
    except ValueError as exc:
        raise ParseError(source, lines[0][0], str(exc)) from None


def parse_gf_matrix_file(path: str | Path) -> GFMatrix:
    path = Path(path)
    return parse_gf_matrix_text(path.read_text(encoding="utf-8"), str(path))


def serialize_gf_matrix(m: GFMatrix) -> str:
    nrows, ncols = m.shape
    lines = [f"{nrows} {ncols} {m.p}"]
    lines.extend(" ".join(str(e) for e in row) for row in m.rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# point sets


def parse_point_set_text(text: str, source: str = "<string>") -> PointSet:
    lines = _content_lines(text)
    if not lines:
        raise ParseError(source, 1, "empty point-set file")
    lineno, header = lines[0]
    p, d, count = _int_tokens(source, lineno, header, 3, "header fields (p d count)")
    body = lines[1:]
    if len(body) != count:
        raise ParseError(source, lineno, f"expected {count} points, found {len(body)}")
    pts = []
    seen = set()
    for lineno, line in body:
        pt = tuple(_int_tokens(source, lineno, line, d, "coordinates"))
        for col, c in enumerate(pt, start=1):
            if not 0 <= c < p:
                raise ParseError(source, lineno, f"coordinate {c} out of range for Z_{p}", col)
        if pt in seen:
            raise ParseError(source, lineno, f"duplicate point {pt}")
        seen.add(pt)
        pts.append(pt)
    try:
        return PointSet(p, d, frozenset(pts))
    except ValueError as exc:
        raise ParseError(source, lines[0][0], str(exc)) from None


def parse_point_set_file(path: str | Path) -> PointSet:
    path = Path(path)
    return parse_point_set_text(path.read_text(encoding="utf-8"), str(path))


def serialize_point_set(ps: PointSet) -> str:
    lines = [f"{ps.p} {ps.d} {ps.size}"]
    lines.extend(" ".join(str(c) for c in pt) for pt in ps.sorted_points())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# sign matrices


def parse_sign_matrix_text(text: str, source: str = "<string>") -> SignMatrix:
    lines = _content_lines(text)
    if not lines:
        raise ParseError(source, 1, "empty sign-matrix file")
    rows: list[tuple[int, ...]] = []
    width: int | None = None
    for lineno, line in lines:
        if " " in line or "\t" in line:
            row = []
            for col, tok in enumerate(line.split(), start=1):
                if tok in ("1", "+1"):
                    row.append(1)
                elif tok == "-1":
                    row.append(-1)
                else:
                    raise ParseError(source, lineno, f"illegal sign token {tok!r}", col)
        else:
            row = []
            for col, ch in enumerate(line, start=1):
                if ch == "+":
                    row.append(1)
                elif ch == "-":
                    row.append(-1)
                else:
                    raise ParseError(source, lineno, f"illegal character {ch!r}", col)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(source, lineno,
                             f"ragged row: {len(row)} entries in a {width}-column grid")
        rows.append(tuple(row))
    return SignMatrix(tuple(rows))


def parse_sign_matrix_file(path: str | Path) -> SignMatrix:
    path = Path(path)
    return parse_sign_matrix_text(path.read_text(encoding="utf-8"), str(path))


def serialize_sign_matrix(h: SignMatrix) -> str:
    return "\n".join("".join("+" if e == 1 else "-" for e in row) for row in h.rows) + "\n"


# ---------------------------------------------------------------------------
# bundled data and Hadamard libraries


def bundled_data_path(name: str) -> Path:
    return Path(str(files("fuglede").joinpath("data", name)))


def bundled_tao12_path() -> Path:
    """Golden file for the dephased 12x12 rank-10 matrix."""
    return bundled_data_path("tao12.txt")


def bundled_hadamard_12() -> SignMatrix:
    """The bundled order-12 Hadamard representative (single equivalence class)."""
    return parse_sign_matrix_file(bundled_data_path("hadamard12.txt"))


@dataclass(frozen=True)
class HadamardLibraryEntry:
    """One representative sign matrix of a given order, with its source."""

    order: int
    index: int
    matrix: SignMatrix
    source: str


@dataclass(frozen=True)
class HadamardLibrary:
    """Representatives per order plus per-order completeness flags.

    ``complete[m]`` means the entries for order m are known to hit every
    equivalence class of m x m Hadamard matrices.  Orders m > 2 with
    m not divisible by 4 admit no Hadamard matrix at all; the library
    reports those as complete-and-empty without needing files.
    """

    entries: dict[int, tuple[HadamardLibraryEntry, ...]]
    complete: dict[int, bool]

    def entries_for(self, order: int) -> tuple[HadamardLibraryEntry, ...]:
        if self._known_empty(order):
            return ()
        return self.entries.get(order, ())

    def is_complete(self, order: int) -> bool:
        if self._known_empty(order):
            return True
        return self.complete.get(order, False)

    def has_data(self, order: int) -> bool:
        return self._known_empty(order) or order in self.entries

    @staticmethod
    def _known_empty(order: int) -> bool:
        return order > 2 and order % 4 != 0


def bundled_library() -> HadamardLibrary:
    """Library holding the order-12 representative; order 12 is complete."""
    entry = HadamardLibraryEntry(12, 0, bundled_hadamard_12(), "bundled:hadamard12.txt")
    return HadamardLibrary({12: (entry,)}, {12: True})


def load_library(directory: str | Path) -> HadamardLibrary:
    """Ingest a directory of sign-matrix files as a Hadamard library.

    Files are read in sorted name order.  An optional ``manifest.json``
    ({"complete": {"20": true, ...}}) declares per-order completeness;
    without it every ingested order is treated as incomplete.
    """
    import json

    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"library directory not found: {directory}")
    entries: dict[int, list[HadamardLibraryEntry]] = {}
    complete: dict[int, bool] = {}
    manifest = directory / "manifest.json"
    if manifest.exists():
        declared = json.loads(manifest.read_text(encoding="utf-8")).get("complete", {})
        complete = {int(k): bool(v) for k, v in declared.items()}
    for path in sorted(directory.iterdir()):
        if path.name == "manifest.json" or path.is_dir():
            continue
        h = parse_sign_matrix_file(path)
        order = h.shape[0]
        bucket = entries.setdefault(order, [])
        bucket.append(HadamardLibraryEntry(order, len(bucket), h, str(path)))
    return HadamardLibrary({k: tuple(v) for k, v in entries.items()}, complete)
