"""Line-oriented text formats for density matrices and Pauli coefficients.

Density matrix file (``.dm``)::

    # optional comments
    n_parties 3
    <re> <im> <re> <im> ...      one line per row, 2 * 2^n numbers

Coefficient file (``.hs``)::

    n_parties 3
    III 1
    IIX 0
    ...                          4^n records, lexicographic I<X<Y<Z

Numbers are written with 17 significant digits so that a write/read cycle
is lossless in double precision.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import GhzError, ValidationError
from .hsdecomp import CoefficientTensor, PauliString, all_pauli_strings
from .qstate import MAX_PARTIES, DensityMatrix


class ParseError(GhzError, ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def fmt(x: float) -> str:
    # + 0.0 folds -0.0 into 0.0
    return "%.17g" % (float(x) + 0.0)


def _tokens(text: str) -> Iterator[tuple[int, list[tuple[int, str]]]]:
    """Yield (line number, [(column, token), ...]) for non-blank, non-comment lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = []
        col = 0
        for tok in line.split():
            col = line.index(tok, col)
            toks.append((col + 1, tok))
            col += len(tok)
        if toks:
            yield lineno, toks


def _number(lineno: int, col: int, tok: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(lineno, col, f"expected a number, got {tok!r}") from None


def _header(lines) -> tuple[int, int]:
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise ParseError(1, 1, "empty file, expected 'n_parties <n>'") from None
    if len(toks) != 2 or toks[0][1] != "n_parties":
        raise ParseError(lineno, toks[0][0], "expected 'n_parties <n>'")
    col, tok = toks[1]
    try:
        n = int(tok)
    except ValueError:
        raise ParseError(lineno, col, f"expected an integer, got {tok!r}") from None
    if not 1 <= n <= MAX_PARTIES:
        raise ParseError(lineno, col, f"n_parties must be in 1..{MAX_PARTIES}")
    return lineno, n


def parse_density(text: str) -> DensityMatrix:
    lines = _tokens(text)
    lineno, n = _header(lines)
    dim = 2**n
    rows = []
    for lineno, toks in lines:
        if len(rows) == dim:
            raise ParseError(lineno, toks[0][0], f"extra row; expected {dim} rows")
        if len(toks) != 2 * dim:
            raise ParseError(lineno, toks[0][0], f"row has {len(toks)} numbers, expected {2 * dim}")
        vals = [_number(lineno, c, t) for c, t in toks]
        rows.append([complex(re, im) for re, im in zip(vals[0::2], vals[1::2])])
    if len(rows) != dim:
        raise ParseError(lineno + 1, 1, f"found {len(rows)} rows, expected {dim}")
    return DensityMatrix(np.array(rows))


def format_density(rho: DensityMatrix) -> str:
    out = [f"n_parties {rho.n_parties}"]
    for row in rho.entries:
        out.append(" ".join(f"{fmt(z.real)} {fmt(z.imag)}" for z in row))
    return "\n".join(out) + "\n"


def parse_coefficients(text: str) -> CoefficientTensor:
    lines = _tokens(text)
    lineno, n = _header(lines)
    values = np.zeros((4,) * n)
    seen = set()
    for lineno, toks in lines:
        if len(toks) != 2:
            raise ParseError(lineno, toks[0][0], "expected '<pauli string> <coefficient>'")
        (scol, label), (vcol, tok) = toks
        try:
            s = PauliString(label)
        except ValidationError:
            raise ParseError(lineno, scol, f"invalid Pauli string {label!r}") from None
        if len(s) != n:
            raise ParseError(lineno, scol, f"{label!r} has length {len(s)}, expected {n}")
        if s in seen:
            raise ValidationError("unique-records", f"duplicate record {label} on line {lineno}")
        seen.add(s)
        values[tuple(s)] = _number(lineno, vcol, tok)
    if len(seen) != 4**n:
        raise ValidationError("record-count", f"found {len(seen)} records, expected {4**n}")
    if values[(0,) * n] != 1.0:
        raise ValidationError("normalization", f"{'I' * n} record is {values[(0,) * n]!r}, expected 1")
    return CoefficientTensor(values)


def format_coefficients(coeffs: CoefficientTensor) -> str:
    out = [f"n_parties {coeffs.n_parties}"]
    for s in all_pauli_strings(coeffs.n_parties):
        out.append(f"{s.label()} {fmt(coeffs.values[tuple(s)])}")
    return "\n".join(out) + "\n"


FIXTURE_PREFIX = "fixture:"


def fixture_text(name: str) -> str:
    return resources.files("ghzhs").joinpath("data", name).read_text()


def read_text(path: str) -> str:
    """Read a file path, or a shipped fixture given as ``fixture:<name>``."""
    if path.startswith(FIXTURE_PREFIX):
        return fixture_text(path[len(FIXTURE_PREFIX):])
    return Path(path).read_text()
