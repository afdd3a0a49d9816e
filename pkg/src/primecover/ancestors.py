"""Ancestor sets and the canonical partition of the non-free primes.

Prime indices are the leading NONFREE indices ``1..prime_count``, already in
increasing cost order, so "cheaper" simply means "smaller index".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cube import Cube
from .primes import ProductUniverse
from .triples import TriplesTable, cascade, prune


def parents(t: TriplesTable) -> dict[int, frozenset[int]]:
    """Parent sets for every index occurring in ``t`` (empty if it is never an r)."""
    out: dict[int, set[int]] = {k: set() for k in t.indices()}
    for e in t.entries:
        out[e.r].update(e.parents)
    return {k: frozenset(v) for k, v in out.items()}


def _ancestors(x: int, pmap: dict[int, frozenset[int]]) -> frozenset[int]:
    seen: set[int] = set()
    stack = list(pmap.get(x, ()))
    while stack:
        y = stack.pop()
        if y not in seen:
            seen.add(y)
            stack.extend(pmap.get(y, ()))
    return frozenset(seen)


@dataclass(frozen=True)
class AncestorSet:
    members: frozenset[int]
    primeset: frozenset[int]
    sub_table: TriplesTable
    representative: int

    @property
    def closed(self) -> bool:
        return self.representative in self.members

    def sort_key(self):
        return min(self.members, default=0), self.representative


def ancestor_set(x: int, t: TriplesTable, prime_count: int) -> AncestorSet:
    """Anc(x) in ``t``; closed when x is its own ancestor."""
    if x not in t.indices():
        raise KeyError(f"index {x} does not occur in the table")
    members = _ancestors(x, parents(t))
    return AncestorSet(
        members=members,
        primeset=frozenset(m for m in members if m <= prime_count),
        sub_table=t.restrict(members),
        representative=x,
    )


def _primes_in(t: TriplesTable, prime_count: int) -> list[int]:
    return sorted(k for k in t.indices() if k <= prime_count)


def _finish(t: TriplesTable, chosen: dict[int, frozenset[int]], prime_count: int):
    # one pass over the table, bucketing each entry under every set holding its r
    owners: dict[int, list[int]] = {}
    for q, anc in chosen.items():
        for m in anc:
            owners.setdefault(m, []).append(q)
    buckets: dict[int, list] = {q: [] for q in chosen}
    for e in t.entries:
        for q in owners.get(e.r, ()):
            anc = chosen[q]
            if e.i in anc and (e.j == 0 or e.j in anc):
                buckets[q].append(e)
    out = [
        AncestorSet(anc, frozenset(m for m in anc if m <= prime_count),
                    TriplesTable(buckets[q]), q)
        for q, anc in chosen.items()
    ]
    out.sort(key=AncestorSet.sort_key)
    return out


def independent_batch(t: TriplesTable, prime_count: int) -> list[AncestorSet]:
    """One batch of Independent Ancestor Sets, smallest-first selection.

    Builds every Prime Ancestor Set, drops those not containing their own
    prime, then repeatedly takes the smallest and discards every set holding
    its prime.
    """
    pmap = parents(t)
    anc = {p: _ancestors(p, pmap) for p in _primes_in(t, prime_count)}
    candidates = sorted((p for p in anc if p in anc[p]), key=lambda p: (len(anc[p]), p))
    chosen: dict[int, frozenset[int]] = {}
    while candidates:
        q = candidates[0]
        chosen[q] = anc[q]
        candidates = [p for p in candidates[1:] if q not in anc[p]]
    return _finish(t, chosen, prime_count)


def independent_batch_fast(t: TriplesTable, prime_count: int) -> list[AncestorSet]:
    """Same batch as :func:`independent_batch`, most primes rejected early.

    Primes are visited from the most costly down.  Ancestors are expanded one
    generation at a time and a prime is dropped as soon as a cheaper prime
    shows up among them: that cheaper prime's set is contained in this one,
    and if the two are equal the cheaper prime represents it.  Among the
    survivors, a prime whose set contains another survivor cannot be
    independent either.
    """
    pmap = parents(t)
    primes = _primes_in(t, prime_count)
    survivors: dict[int, frozenset[int]] = {}
    for p in reversed(primes):
        seen: set[int] = set()
        frontier = set(pmap.get(p, ()))
        rejected = False
        while frontier:
            if any(q < p for q in frontier if q <= prime_count):
                rejected = True
                break
            seen |= frontier
            nxt: set[int] = set()
            for y in frontier:
                nxt |= pmap.get(y, frozenset())
            frontier = nxt - seen
        if not rejected:
            survivors[p] = frozenset(seen)

    chosen = {}
    for p in sorted(survivors):
        anc = survivors[p]
        if p not in anc:
            continue
        if any(q != p and q in survivors for q in anc):
            continue
        chosen[p] = anc
    return _finish(t, chosen, prime_count)


@dataclass(frozen=True)
class Partition:
    essentials: tuple[Cube, ...]
    unnecessary_free: tuple[Cube, ...]
    surplus: tuple[int, ...]
    components: tuple[AncestorSet, ...]
    universe: ProductUniverse = field(repr=False, compare=False)
    table: TriplesTable = field(repr=False, compare=False)
    batches: tuple[int, ...] = ()

    def primeset_cubes(self, component: AncestorSet) -> list[Cube]:
        return [self.universe.cube(k) for k in sorted(component.primeset)]

    @property
    def surplus_cubes(self) -> list[Cube]:
        return [self.universe.cube(k) for k in self.surplus]

    @property
    def unnecessary(self) -> list[Cube]:
        return list(self.unnecessary_free) + self.surplus_cubes


def iterate_independents(t: TriplesTable, prime_count: int, fast: bool = True):
    """Run the batch/extract/cascade loop until the table is empty.

    Yields ``(batch_number, AncestorSet)`` in discovery order.
    """
    find = independent_batch_fast if fast else independent_batch
    batch_no = 0
    while True:
        t, _ = prune(t)
        if not t:
            return
        batch = find(t, prime_count)
        if not batch:
            raise RuntimeError(
                "no Independent Ancestor Set found in a non-empty table; "
                "some product has no prime ancestor")
        extracted = set()
        union: set[int] = set()
        for a in batch:
            extracted |= a.sub_table.entries
            union |= a.members
        before = len(t)
        t = t.without(extracted)
        _, t = cascade(union, t)
        assert len(t) < before
        for a in batch:
            yield batch_no, a
        batch_no += 1


def partition(t: TriplesTable, u: ProductUniverse, fast: bool = True) -> Partition:
    """Canonical partition of the complete prime set."""
    components = []
    batches = []
    for b, a in iterate_independents(t, u.prime_count, fast):
        components.append(a)
        batches.append(b)
    in_ps = set().union(*(a.primeset for a in components))
    surplus = tuple(k for k in u.prime_indices if k not in in_ps)
    return Partition(
        essentials=u.essentials,
        unnecessary_free=u.free_primes,
        surplus=surplus,
        components=tuple(components),
        universe=u,
        table=t,
        batches=tuple(batches),
    )
