"""Prime generation and the indexed product universe.

Everything here works on the consensus closure of a set of cubes.  The hot
loops run on raw ``(pos, neg)`` bit pairs and only wrap results in
:class:`~primecover.cube.Cube` at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .cube import Cube, canonical, consensus_bits
from .errors import ResourceLimitError

#: Default cap on the number of products a single closure may hold.
CLOSURE_CAP = 200_000

Bits = tuple[int, int]


@dataclass(frozen=True)
class SumOfProducts:
    n: int
    terms: tuple[Cube, ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"variable count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if t.n != self.n:
                raise ValueError(f"term {t} has {t.n} variables, expected {self.n}")

    @classmethod
    def parse(cls, n: int, texts: Iterable[str]) -> SumOfProducts:
        from .cube import parse_cube

        return cls(n, tuple(parse_cube(t, n) for t in texts))

    def normalized(self) -> SumOfProducts:
        """Drop duplicate terms and terms absorbed by another term."""
        terms = canonical(self.terms)
        keep = [t for t in terms if not any(o is not t and o.absorbs(t) for o in terms)]
        return SumOfProducts(self.n, tuple(keep))

    def is_false(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms) if self.terms else "0"


def _absorbs(a: Bits, b: Bits) -> bool:
    return not (a[0] & ~b[0]) and not (a[1] & ~b[1])


def _closure(items: list[Bits], start: int, cap: int, target: Bits | None = None) -> bool:
    """Loose iterated consensus in place.

    ``items[:start]`` must already be closed among themselves.  Each later
    item is combined with every item before it and new results are appended.
    Returns True if ``target`` was generated (stopping early), else False.
    """
    seen = set(items)
    if target is not None and target in seen:
        return True
    i = max(start, 1)
    while i < len(items):
        ap, an = items[i]
        for j in range(i):
            bp, bn = items[j]
            rev = (ap & bn) | (an & bp)
            if not rev or rev & (rev - 1):
                continue
            x = ((ap | bp) & ~rev, (an | bn) & ~rev)
            if x in seen:
                continue
            seen.add(x)
            items.append(x)
            if x == target:
                return True
            if len(items) > cap:
                raise ResourceLimitError(
                    f"consensus closure exceeded the cap of {cap} products", cap)
        i += 1
    return False


def loose_consensus_closure(terms: Sequence[Cube], cap: int = CLOSURE_CAP) -> list[Cube]:
    """All products reachable by repeated pairwise consensus, duplicates removed.

    Nothing is absorbed.  Output keeps the order in which products were
    first produced, inputs first.
    """
    if not terms:
        return []
    n = terms[0].n
    items: list[Bits] = []
    seen = set()
    for t in terms:
        if t.n != n:
            raise ValueError("all terms must share the same variable count")
        if t.bits not in seen:
            seen.add(t.bits)
            items.append(t.bits)
    _closure(items, 1, cap)
    return [Cube(n, p, q) for p, q in items]


def complete_primes(f: SumOfProducts, cap: int = CLOSURE_CAP) -> list[Cube]:
    """Complete prime set by iterated consensus with absorption.

    Returned in canonical order.
    """
    f = f.normalized()
    items: list[Bits] = [t.bits for t in f.terms]
    alive = [True] * len(items)
    i = 1
    while i < len(items):
        j = 0
        while alive[i] and j < i:
            if not alive[j]:
                j += 1
                continue
            x = consensus_bits(*items[i], *items[j])
            j += 1
            if x is None:
                continue
            if any(alive[k] and _absorbs(items[k], x) for k in range(len(items))):
                continue
            for k in range(len(items)):
                if alive[k] and _absorbs(x, items[k]):
                    alive[k] = False
            items.append(x)
            alive.append(True)
            if len(items) > cap:
                raise ResourceLimitError(
                    f"iterated consensus exceeded the cap of {cap} products", cap)
        i += 1
    return canonical(Cube(f.n, p, q) for (p, q), a in zip(items, alive) if a)


def is_covered(target: Cube, by: Sequence[Cube], cap: int = CLOSURE_CAP) -> bool:
    """True iff ``target`` belongs to the consensus closure of ``by``."""
    items: list[Bits] = []
    for b in by:
        if b.bits not in items:
            items.append(b.bits)
    return _closure(items, 1, cap, target=target.bits)


def essential_primes(primes: Sequence[Cube], cap: int = CLOSURE_CAP) -> list[Cube]:
    """Essential primes via Sasao's test.

    P is essential iff it is not in the closure of ``P*V`` and ``P o V`` over
    the other primes V.  Contradictory products ``P*V`` are identically FALSE
    and are left out.
    """
    out = []
    for p in primes:
        gens: list[Cube] = []
        for v in primes:
            if v == p:
                continue
            prod = p.conjoin(v)
            if prod is not None:
                gens.append(prod)
            cons = p.consensus(v)
            if cons is not None:
                gens.append(cons)
        if not is_covered(p, gens, cap):
            out.append(p)
    return canonical(out)


def essential_by_definition(primes: Sequence[Cube], cap: int = CLOSURE_CAP) -> list[Cube]:
    """Primes not covered by the consensus closure of the remaining primes."""
    return canonical(
        p for p in primes if not is_covered(p, [q for q in primes if q != p], cap))


@dataclass(frozen=True)
class PrimeSpan:
    """Span of one non-free prime, as NONFREE indices (the prime included)."""

    index: int
    members: frozenset[int]
    maximal: bool = False
    closed: bool = False


@dataclass(frozen=True)
class ProductUniverse:
    n: int
    primes: tuple[Cube, ...]
    essentials: tuple[Cube, ...]
    free: tuple[Cube, ...]
    free_nonessential: tuple[Cube, ...]
    nonfree: tuple[Cube, ...]
    prime_count: int
    costs: tuple[float, ...]
    prime_spans: tuple[PrimeSpan, ...]
    span_seeds: tuple[tuple[int, int, int], ...]
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._index.update({c: k for k, c in enumerate(self.nonfree, 1)})

    @property
    def size(self) -> int:
        return len(self.nonfree)

    def cube(self, index: int) -> Cube:
        """Cube at 1-based NONFREE ``index``."""
        if index < 1:
            raise IndexError("NONFREE index 0 is reserved for free products")
        return self.nonfree[index - 1]

    def index_of(self, cube: Cube) -> int:
        return self._index[cube]

    def is_prime(self, index: int) -> bool:
        return 1 <= index <= self.prime_count

    @property
    def prime_indices(self) -> range:
        return range(1, self.prime_count + 1)

    @property
    def free_primes(self) -> tuple[Cube, ...]:
        """Free primes that are not essential."""
        ps = set(self.primes)
        return tuple(c for c in self.free_nonessential if c in ps)


def _is_closed(prime: Bits, span_bits: list[Bits], free_bits: list[Bits]) -> bool:
    others = span_bits + free_bits
    for a in span_bits:
        if a == prime:
            continue
        for b in others:
            if b != a and consensus_bits(*a, *b) == prime:
                return True
    return False


def build_universe(
    f: SumOfProducts,
    cost: Callable[[Cube], float] | None = None,
    cap: int = CLOSURE_CAP,
    primes: Sequence[Cube] | None = None,
    tie_key: Callable[[Cube], object] | None = None,
) -> ProductUniverse:
    """Compute ALL, the free/non-free split, the ordered NONFREE list and prime spans.

    ``tie_key`` orders equal-cost primes; it defaults to canonical cube
    order and exists so tests can permute ties.
    """
    if cost is None:
        cost = lambda c: 1  # noqa: E731
    if tie_key is None:
        tie_key = Cube.sort_key
    n = f.n
    if primes is None:
        primes = complete_primes(f, cap)
    primes = canonical(primes)
    essentials = essential_primes(primes, cap)
    if not primes:
        return ProductUniverse(n, (), (), (), (), (), 0, (), (), ())

    all_products = loose_consensus_closure(primes, cap)
    free_list = loose_consensus_closure(essentials, cap)
    free_set = set(free_list)
    ess_set = set(essentials)
    free_nonessential = tuple(c for c in canonical(free_set) if c not in ess_set)

    nonfree_primes = sorted(
        (p for p in primes if p not in free_set), key=lambda p: (cost(p), tie_key(p)))
    free_bits = [c.bits for c in free_list]

    raw_spans: list[list[Bits]] = []
    for p in nonfree_primes:
        items = free_bits + [p.bits]
        _closure(items, len(free_bits), cap)
        raw_spans.append(items[len(free_bits):])

    ordered: list[Cube] = []
    placed: set[Bits] = set()
    for p in nonfree_primes:
        ordered.append(p)
        placed.add(p.bits)
    for span in raw_spans:
        for b in span:
            if b not in placed:
                placed.add(b)
                ordered.append(Cube(n, *b))
    rest = [c for c in all_products if c not in free_set and c.bits not in placed]
    ordered.extend(canonical(rest))

    index = {c.bits: k for k, c in enumerate(ordered, 1)}
    k_primes = len(nonfree_primes)
    span_sets = [frozenset(index[b] for b in span) for span in raw_spans]

    prime_spans = []
    for k, (p, members, span) in enumerate(zip(nonfree_primes, span_sets, raw_spans), 1):
        has_other_prime = any(m != k and m <= k_primes for m in members)
        contained = any(other > members for q, other in enumerate(span_sets, 1) if q != k)
        maximal = has_other_prime and not contained
        closed = _is_closed(p.bits, span, free_bits)
        prime_spans.append(PrimeSpan(k, members, maximal, closed))

    seeds = []
    for ps in prime_spans:
        if ps.maximal and ps.closed:
            seeds.extend((r, ps.index, 0) for r in sorted(ps.members) if r != ps.index)

    return ProductUniverse(
        n=n,
        primes=tuple(primes),
        essentials=tuple(essentials),
        free=tuple(free_list),
        free_nonessential=free_nonessential,
        nonfree=tuple(ordered),
        prime_count=k_primes,
        costs=tuple(cost(p) for p in nonfree_primes),
        prime_spans=tuple(prime_spans),
        span_seeds=tuple(seeds),
    )
