"""Bracketed text form for integer matrices.

The canonical rendering of the 2x2 identity is::

    [[1 0]
    [0 1]
    ]

i.e. an outer ``[`` ... ``]`` pair wrapping one ``[a b ...]`` group per
row, entries separated by whitespace. The reader accepts any whitespace
layout (including everything on one line); the writer always emits the
canonical form, so parse/write/parse is a fixed point.

Entries of arbitrary magnitude round-trip exactly; conversion goes through
gmpy2's mpz, which has no string-length ceiling.
"""

from __future__ import annotations

import re
import sys
from bisect import bisect_right
from typing import List, TextIO, Tuple, Union

from gmpy2 import mpz

from .lattice import Basis

_TOKEN = re.compile(r"\[|\]|[^\s\[\]]+")
_INTEGER = re.compile(r"-?\d+\Z")


class MatrixParseError(ValueError):
    """Malformed matrix text. Carries 1-based line and column of the fault."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self.line_starts.append(i + 1)
        self.tokens: List[Tuple[str, int]] = [
            (m.group(), m.start()) for m in _TOKEN.finditer(text)
        ]
        self.pos = 0

    def location(self, offset: int) -> Tuple[int, int]:
        line = bisect_right(self.line_starts, offset)
        column = offset - self.line_starts[line - 1] + 1
        return line, column

    def fail(self, message: str, offset: int) -> MatrixParseError:
        line, column = self.location(offset)
        return MatrixParseError(message, line, column)

    def peek(self) -> Union[Tuple[str, int], None]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def take(self) -> Union[Tuple[str, int], None]:
        tok = self.peek()
        if tok is not None:
            self.pos += 1
        return tok


def parse_basis(text: str) -> Basis:
    """Parse bracketed matrix text into a :class:`Basis`.

    Raises :class:`MatrixParseError` with line/column diagnostics on ragged
    rows, non-integer tokens, empty matrices, unbalanced brackets, or
    trailing garbage.
    """
    sc = _Scanner(text)
    end = len(text)

    opener = sc.take()
    if opener is None:
        raise sc.fail("empty input, expected '['", 0)
    if opener[0] != "[":
        raise sc.fail(f"expected '[' to open the matrix, found {opener[0]!r}", opener[1])

    rows: List[List[int]] = []
    row_width = None
    while True:
        tok = sc.take()
        if tok is None:
            raise sc.fail("unbalanced brackets: matrix is never closed", end)
        word, offset = tok
        if word == "]":
            break
        if word != "[":
            raise sc.fail(f"expected '[' to open a row, found {word!r}", offset)
        row: List[int] = []
        while True:
            tok = sc.take()
            if tok is None:
                raise sc.fail("unbalanced brackets: row is never closed", end)
            word, offset = tok
            if word == "]":
                break
            if word == "[":
                raise sc.fail("unexpected '[' inside a row", offset)
            if not _INTEGER.match(word):
                raise sc.fail(f"not an integer: {word!r}", offset)
            row.append(int(mpz(word)))
        if not row:
            raise sc.fail("empty row", offset)
        if row_width is None:
            row_width = len(row)
        elif len(row) != row_width:
            raise sc.fail(
                f"ragged rows: row {len(rows) + 1} has {len(row)} entries, "
                f"expected {row_width}",
                offset,
            )
        rows.append(row)

    trailing = sc.peek()
    if trailing is not None:
        raise sc.fail(f"trailing content after matrix: {trailing[0]!r}", trailing[1])
    if not rows:
        raise sc.fail("empty matrix", 0)
    try:
        return Basis(rows)
    except ValueError as exc:
        raise sc.fail(str(exc), 0) from exc


def write_basis(basis: Basis) -> str:
    """Render a basis in canonical bracketed form (see module docstring)."""
    # mpz handles entries of millions of digits; str(int) would refuse
    parts = ["["]
    for row in basis.rows:
        parts.append("[" + " ".join(mpz(x).digits(10) for x in row) + "]\n")
    parts.append("]")
    return "".join(parts)


def read_basis_file(path: str) -> Basis:
    """Read a basis from a file path, or stdin when path is '-'."""
    if path == "-":
        return parse_basis(sys.stdin.read())
    with open(path, "r", encoding="ascii") as fh:
        return parse_basis(fh.read())


def write_basis_file(basis: Basis, path: str) -> None:
    """Write canonical text to a file path, or stdout when path is '-'."""
    text = write_basis(basis) + "\n"
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
