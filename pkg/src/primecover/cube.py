"""Product terms (cubes) over n Boolean variables.

A cube keeps two bit planes: ``pos`` has bit k set when x_{k+1} appears
uncomplemented, ``neg`` when it appears complemented.  A variable is never in
both planes.  The all-absent cube is the constant TRUE product.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError

#: Default upper bound on the variable count.  Python integers are unbounded,
#: so raising it only costs speed.
MAX_VARS = 64


class Literal(enum.IntEnum):
    ABSENT = 0
    POS = 1
    NEG = 2


def check_vars(n: int, max_vars: int | None = None) -> None:
    limit = MAX_VARS if max_vars is None else max_vars
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"variable count must be a positive integer, got {n!r}")
    if n > limit:
        raise ValueError(f"variable count {n} exceeds the configured maximum {limit}")


def _popcount(x: int) -> int:
    return bin(x).count("1")


def consensus_bits(ap: int, an: int, bp: int, bn: int):
    """Consensus on raw planes; returns ``(pos, neg)`` or None."""
    rev = (ap & bn) | (an & bp)
    if not rev or rev & (rev - 1):
        return None
    keep = ~rev
    return (ap | bp) & keep, (an | bn) & keep


@dataclass(frozen=True, slots=True)
class Cube:
    n: int
    pos: int = 0
    neg: int = 0

    def __post_init__(self):
        if self.pos & self.neg:
            raise ValueError("a variable cannot appear both complemented and uncomplemented")
        if (self.pos | self.neg) >> self.n:
            raise ValueError(f"literal outside x1..x{self.n}")

    @classmethod
    def one(cls, n: int) -> Cube:
        return cls(n)

    @classmethod
    def from_literals(cls, literals: Sequence[Literal | int]) -> Cube:
        pos = neg = 0
        for k, lit in enumerate(literals):
            lit = Literal(lit)
            if lit is Literal.POS:
                pos |= 1 << k
            elif lit is Literal.NEG:
                neg |= 1 << k
        return cls(len(literals), pos, neg)

    @property
    def literals(self) -> tuple[Literal, ...]:
        out = []
        for k in range(self.n):
            bit = 1 << k
            if self.pos & bit:
                out.append(Literal.POS)
            elif self.neg & bit:
                out.append(Literal.NEG)
            else:
                out.append(Literal.ABSENT)
        return tuple(out)

    @property
    def bits(self) -> tuple[int, int]:
        return self.pos, self.neg

    def num_literals(self) -> int:
        return _popcount(self.pos | self.neg)

    def is_one(self) -> bool:
        return not (self.pos | self.neg)

    def sort_key(self) -> tuple:
        return tuple(self.literals)

    def _check(self, other: Cube) -> None:
        if self.n != other.n:
            raise ValueError(f"cube dimension mismatch: {self.n} vs {other.n}")

    def consensus(self, other: Cube) -> Cube | None:
        """Consensus with ``other``, or None unless exactly one variable is reversed."""
        self._check(other)
        res = consensus_bits(self.pos, self.neg, other.pos, other.neg)
        if res is None:
            return None
        return Cube(self.n, *res)

    def absorbs(self, other: Cube) -> bool:
        """True iff every literal of ``self`` is also in ``other`` (so self + other == self)."""
        self._check(other)
        return not (self.pos & ~other.pos) and not (self.neg & ~other.neg)

    def conjoin(self, other: Cube) -> Cube | None:
        """Product of the two cubes; None if it contains some x and x'."""
        self._check(other)
        pos, neg = self.pos | other.pos, self.neg | other.neg
        if pos & neg:
            return None
        return Cube(self.n, pos, neg)

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        if len(assignment) != self.n:
            raise ValueError(f"assignment has {len(assignment)} values, cube has {self.n} variables")
        for k, value in enumerate(assignment):
            bit = 1 << k
            if (self.pos & bit and not value) or (self.neg & bit and value):
                return False
        return True

    def __str__(self) -> str:
        return format_cube(self)


_LITERAL_RE = re.compile(r"^x([0-9]+)(')?$")


def parse_cube(text: str, n: int) -> Cube:
    """Parse ``"1"`` or ``x<i>['] (* x<i>['])*``."""
    text = text.strip()
    if not text:
        raise ParseError("empty term")
    if text == "1":
        return Cube(n)
    pos = neg = 0
    for tok in text.split("*"):
        tok = tok.strip()
        if not tok:
            raise ParseError(f"empty literal in term {text!r}")
        m = _LITERAL_RE.match(tok)
        if m is None:
            raise ParseError(f"unknown variable {tok!r}")
        idx = int(m.group(1))
        if idx < 1 or idx > n:
            raise ParseError(f"variable x{idx} outside x1..x{n}")
        bit = 1 << (idx - 1)
        if (pos | neg) & bit:
            raise ParseError(f"variable x{idx} repeated in term {text!r}")
        if m.group(2):
            neg |= bit
        else:
            pos |= bit
    return Cube(n, pos, neg)


def format_cube(c: Cube) -> str:
    parts = []
    for k in range(c.n):
        bit = 1 << k
        if c.pos & bit:
            parts.append(f"x{k + 1}")
        elif c.neg & bit:
            parts.append(f"x{k + 1}'")
    return "*".join(parts) if parts else "1"


def canonical(cubes: Iterable[Cube]) -> list[Cube]:
    """Deduplicated cubes in canonical (literal-sequence) order."""
    return sorted(set(cubes), key=Cube.sort_key)
