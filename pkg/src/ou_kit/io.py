"""JSON file formats for matrices, hyperbolic forms, words and reports.

All documents carry ``format_version`` and a ring descriptor.  Element
literals are the ring's canonical strings, so writing a parsed file gives back
the same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .decomp import ETA, THETA, ElementaryWord, GeneratorLetter, GeneratorWord
from .matrix import Mat
from .rings import LiteralError, Ring, RingError, ring_from_descriptor
from .vaserstein import HyperbolicFormData, assemble

FORMAT_VERSION = 1


class FileFormatError(ValueError):
    pass


class VersionMismatch(FileFormatError):
    pass


class RingMismatch(FileFormatError):
    pass


class MalformedLiteral(FileFormatError):
    def __init__(self, literal: str, line: int, column: int, reason: str = ""):
        msg = f"malformed literal {literal!r} at line {line}, column {column}"
        super().__init__(msg + (f": {reason}" if reason else ""))
        self.literal = literal
        self.line = line
        self.column = column


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


class _Source:
    """Parsed JSON plus enough of the raw text to locate bad literals."""

    def __init__(self, text: str):
        self.text = text
        self.cursor = 0
        try:
            self.doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(self.doc, dict):
            raise FileFormatError("top level must be an object")

    def locate(self, literal: str) -> tuple[int, int]:
        needle = json.dumps(literal)
        at = self.text.find(needle, self.cursor)
        if at < 0:
            at = self.text.find(needle)
        if at < 0:
            return 0, 0
        line = self.text.count("\n", 0, at) + 1
        col = at - (self.text.rfind("\n", 0, at) + 1) + 1
        return line, col

    def element(self, ring: Ring, literal: Any):
        if not isinstance(literal, str):
            literal = json.dumps(literal)
            line, col = self.locate(literal)
            raise MalformedLiteral(literal, line, col, "element literals must be strings")
        try:
            value = ring.parse(literal)
        except LiteralError as exc:
            line, col = self.locate(literal)
            raise MalformedLiteral(literal, line, col, str(exc)) from None
        needle = json.dumps(literal)
        at = self.text.find(needle, self.cursor)
        if at >= 0:
            self.cursor = at + len(needle)
        return value

    def field(self, name: str):
        if name not in self.doc:
            raise FileFormatError(f"missing field {name!r}")
        return self.doc[name]


def _header(src: _Source, kind: str, ring: Ring | None) -> Ring:
    version = src.field("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"format_version {version!r} unsupported (expected {FORMAT_VERSION})")
    if src.doc.get("kind", "matrix") != kind:
        raise FileFormatError(f"expected a {kind!r} document, got {src.doc.get('kind')!r}")
    desc = src.field("ring")
    try:
        file_ring = ring_from_descriptor(desc)
    except RingError as exc:
        raise FileFormatError(str(exc)) from None
    if ring is not None and file_ring != ring:
        raise RingMismatch(f"file ring {file_ring.descriptor!r} does not match session ring {ring.descriptor!r}")
    return file_ring


def _grid(src: _Source, ring: Ring, grid, rows: int, cols: int, what: str) -> Mat:
    if not isinstance(grid, list) or len(grid) != rows or any(not isinstance(r, list) or len(r) != cols for r in grid):
        raise FileFormatError(f"{what}: entries do not match {rows}x{cols}")
    return Mat(ring, [[src.element(ring, x) for x in r] for r in grid], cols)


def _entries_text(M: Mat, indent: str) -> str:
    fmt = M.ring.format
    if M.nrows == 0:
        return "[]"
    rows = [indent + "  " + json.dumps([fmt(x) for x in r]) for r in M.rows]
    return "[\n" + ",\n".join(rows) + "\n" + indent + "]"


def _dump(fields: list[tuple[str, str]]) -> str:
    """Fixed-order object with pre-rendered values; one field per line."""
    body = ",\n".join(f"  {json.dumps(k)}: {v}" for k, v in fields)
    return "{\n" + body + "\n}\n"


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def matrix_to_text(M: Mat) -> str:
    return _dump(
        [
            ("format_version", str(FORMAT_VERSION)),
            ("kind", json.dumps("matrix")),
            ("ring", json.dumps(M.ring.descriptor)),
            ("rows", str(M.nrows)),
            ("cols", str(M.ncols)),
            ("entries", _entries_text(M, "  ")),
        ]
    )


def matrix_from_text(text: str, ring: Ring | None = None) -> Mat:
    src = _Source(text)
    file_ring = _header(src, "matrix", ring)
    rows, cols = src.field("rows"), src.field("cols")
    if not (isinstance(rows, int) and isinstance(cols, int) and rows >= 0 and cols >= 0):
        raise FileFormatError("rows/cols must be non-negative integers")
    return _grid(src, file_ring, src.field("entries"), rows, cols, "entries")


def write_matrix_file(path, M: Mat) -> None:
    Path(path).write_text(matrix_to_text(M))


def parse_matrix_file(path, ring: Ring | None = None) -> Mat:
    return matrix_from_text(_read(path), ring)


# ---------------------------------------------------------------------------
# hyperbolic form data
# ---------------------------------------------------------------------------


def form_to_text(data: HyperbolicFormData) -> str:
    return _dump(
        [
            ("format_version", str(FORMAT_VERSION)),
            ("kind", json.dumps("hyperbolic-form")),
            ("ring", json.dumps(data.ring.descriptor)),
            ("m", str(data.m)),
            ("n", str(data.n)),
            ("phi", _entries_text(data.phi, "  ")),
            ("phi_inv", _entries_text(data.phi_inv, "  ")),
            ("Psi", _entries_text(data.Psi, "  ")),
        ]
    )


def form_from_text(text: str, ring: Ring | None = None) -> HyperbolicFormData:
    src = _Source(text)
    file_ring = _header(src, "hyperbolic-form", ring)
    m, n = src.field("m"), src.field("n")
    if not (isinstance(m, int) and isinstance(n, int)):
        raise FileFormatError("m and n must be integers")
    phi = _grid(src, file_ring, src.field("phi"), n, n, "phi")
    phi_inv = _grid(src, file_ring, src.field("phi_inv"), n, n, "phi_inv")
    data = assemble(file_ring, m, n, phi, phi_inv)
    if "Psi" in src.doc:
        psi = _grid(src, file_ring, src.doc["Psi"], data.N + 1, data.N + 1, "Psi")
        if psi != data.Psi:
            raise FileFormatError("stored Psi does not match the one assembled from phi")
    return data


def write_form_file(path, data: HyperbolicFormData) -> None:
    Path(path).write_text(form_to_text(data))


def parse_form_file(path, ring: Ring | None = None) -> HyperbolicFormData:
    return form_from_text(_read(path), ring)


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------


def word_to_text(word: ElementaryWord | GeneratorWord) -> str:
    if isinstance(word, ElementaryWord):
        ring, size = word.ring, word.size
        letters = [json.dumps(["E", i, j, ring.format(a)]) for i, j, a in word.letters]
    else:
        ring, size = word.data.ring, word.data.N
        letters = [json.dumps([tag, [ring.format(x) for x in v]]) for tag, v in word.letters]
    body = "[]" if not letters else "[\n" + ",\n".join("    " + s for s in letters) + "\n  ]"
    return _dump(
        [
            ("format_version", str(FORMAT_VERSION)),
            ("kind", json.dumps("word")),
            ("ring", json.dumps(ring.descriptor)),
            ("size", str(size)),
            ("letters", body),
        ]
    )


def word_from_text(text: str, ring: Ring | None = None, data: HyperbolicFormData | None = None):
    """Parse a word; generator letters need the form ``data`` they refer to."""
    if data is not None and ring is None:
        ring = data.ring
    src = _Source(text)
    file_ring = _header(src, "word", ring)
    size = src.field("size")
    letters = src.field("letters")
    if not isinstance(letters, list):
        raise FileFormatError("letters must be a list")
    elem, gens = [], []
    for letter in letters:
        if not isinstance(letter, list) or not letter:
            raise FileFormatError(f"bad letter {letter!r}")
        tag = letter[0]
        if tag == "E" and len(letter) == 4:
            _, i, j, a = letter
            elem.append((i, j, src.element(file_ring, a)))
        elif tag in (THETA, ETA) and len(letter) == 2 and isinstance(letter[1], list):
            gens.append(GeneratorLetter(tag, tuple(src.element(file_ring, x) for x in letter[1])))
        else:
            raise FileFormatError(f"bad letter {letter!r}")
    if elem and gens:
        raise FileFormatError("a word mixes E letters with THETA/ETA letters")
    if gens:
        if data is None:
            raise FileFormatError("THETA/ETA words need a form file")
        if size != data.N:
            raise FileFormatError(f"word size {size} does not match form size {data.N}")
        return GeneratorWord(data, tuple(gens))
    try:
        return ElementaryWord(file_ring, size, tuple(elem))
    except ValueError as exc:
        raise FileFormatError(str(exc)) from None


def write_word_file(path, word) -> None:
    Path(path).write_text(word_to_text(word))


def parse_word_file(path, ring: Ring | None = None, data: HyperbolicFormData | None = None):
    return word_from_text(_read(path), ring, data)


# ---------------------------------------------------------------------------
# reports and counterexamples
# ---------------------------------------------------------------------------


def dumps_stable(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_report(path, report) -> None:
    Path(path).write_text(dumps_stable(report.to_dict()))


def write_json(path, obj: Any) -> None:
    Path(path).write_text(dumps_stable(obj))


def read_json(path) -> Any:
    src = _Source(_read(path))
    return src.doc
