"""Readers for function files, PLA files and cost tables."""

from __future__ import annotations

import csv
import io

from .cube import Cube, check_vars, parse_cube
from .errors import ParseError
from .primes import SumOfProducts


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def read_function(text: str, max_vars: int | None = None) -> SumOfProducts:
    """First content line is the variable count, then one term per line.

    ``#`` starts a comment.  A header with no terms is the constant FALSE
    function.
    """
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("missing variable-count header", 1) from None
    try:
        n = int(header)
        check_vars(n, max_vars)
    except ValueError as exc:
        raise ParseError(f"bad variable count {header!r}: {exc}", lineno) from None
    terms = []
    for lineno, line in lines:
        try:
            terms.append(parse_cube(line, n))
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    return SumOfProducts(n, tuple(terms))


_PLA_LITERAL = {"1": 1, "0": 2, "-": 0}


def read_pla(text: str, max_vars: int | None = None) -> SumOfProducts:
    """Single-output PLA subset: ``.i``, ``.o 1``, optional ``.p``, ``1/0/-`` rows.

    Rows whose output is ``0`` are not part of the ON-set and are skipped.
    Don't-care types are rejected.
    """
    n = None
    declared_rows = None
    rows: list[tuple[int, str, str]] = []
    for lineno, line in _content_lines(text):
        if line.startswith("."):
            key, *args = line.split()
            if key == ".i":
                try:
                    n = int(args[0])
                    check_vars(n, max_vars)
                except (IndexError, ValueError) as exc:
                    raise ParseError(f"bad .i directive: {exc}", lineno) from None
            elif key == ".o":
                if args != ["1"]:
                    raise ParseError("only single-output PLA files are supported", lineno)
            elif key == ".p":
                try:
                    declared_rows = int(args[0])
                except (IndexError, ValueError):
                    raise ParseError("bad .p directive", lineno) from None
            elif key == ".type":
                if args != ["f"]:
                    raise ParseError(f"unsupported PLA type {' '.join(args)!r}", lineno)
            elif key == ".e" or key == ".end":
                break
            elif key in (".ilb", ".ob"):
                continue
            else:
                raise ParseError(f"unknown directive {key}", lineno)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected '<inputs> <output>', got {line!r}", lineno)
        rows.append((lineno, parts[0], parts[1]))
    if n is None:
        raise ParseError("missing .i directive")
    if declared_rows is not None and declared_rows != len(rows):
        raise ParseError(f".p declares {declared_rows} rows but {len(rows)} were found")
    terms = []
    for lineno, inputs, output in rows:
        if len(inputs) != n:
            raise ParseError(f"row has {len(inputs)} inputs, expected {n}", lineno)
        if output not in ("0", "1"):
            raise ParseError(f"unsupported output value {output!r}", lineno)
        if output == "0":
            continue
        try:
            lits = [_PLA_LITERAL[ch] for ch in inputs]
        except KeyError as exc:
            raise ParseError(f"bad input character {exc.args[0]!r}", lineno) from None
        terms.append(Cube.from_literals(lits))
    return SumOfProducts(n, tuple(terms))


def read_cost_table(text: str, n: int) -> dict[Cube, float]:
    """``term,cost`` rows; an optional ``term,cost`` header is skipped."""
    table: dict[Cube, float] = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 'term,cost', got {row!r}", lineno)
        term, value = row[0].strip(), row[1].strip()
        if lineno == 1 and value.lower() == "cost":
            continue
        try:
            cube = parse_cube(term, n)
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        try:
            c = float(value)
        except ValueError:
            raise ParseError(f"cost {value!r} is not a number", lineno) from None
        if not c > 0:
            raise ParseError(f"cost must be positive, got {value}", lineno)
        table[cube] = int(c) if c.is_integer() else c
    return table
