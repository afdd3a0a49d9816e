"""The covering-relationship table over NONFREE indices.

An entry ``(r, i, j)`` reads "if i and j are covered then r is covered";
index 0 stands for a free (already covered) product.  Entries are stored in
a canonical form: a lone parent always sits in the i slot and two parents
are kept in increasing order.
"""

from __future__ import annotations

from collections import defaultdict, deque
from typing import Iterable, Iterator, NamedTuple

from .cube import consensus_bits
from .primes import ProductUniverse


class Triple(NamedTuple):
    r: int
    i: int
    j: int = 0

    @classmethod
    def make(cls, r: int, i: int, j: int = 0) -> Triple:
        if i == 0 and j != 0:
            i, j = j, 0
        elif j and i > j:
            i, j = j, i
        if r < 1 or i < 0 or j < 0:
            raise ValueError(f"bad triple ({r}, {i}, {j})")
        if i == 0:
            raise ValueError(f"triple ({r}, 0, 0) has no parent; {r} is already covered")
        if r in (i, j):
            raise ValueError(f"triple ({r}, {i}, {j}) lists {r} as its own parent")
        assert not (j and i == j), "consensus of a product with itself cannot occur"
        return cls(r, i, j)

    @property
    def parents(self) -> tuple[int, ...]:
        return tuple(p for p in (self.i, self.j) if p)

    def __str__(self) -> str:
        return f"({self.r}, {self.i}, {self.j})"


class TriplesTable:
    """Immutable, deduplicated set of triples."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable = ()):
        self._entries = frozenset(
            e if isinstance(e, Triple) else Triple.make(*e) for e in entries)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __contains__(self, item) -> bool:
        return Triple.make(*item) in self._entries

    def __eq__(self, other) -> bool:
        if isinstance(other, TriplesTable):
            return self._entries == other._entries
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        return f"TriplesTable({self.sorted()!r})"

    @property
    def entries(self) -> frozenset[Triple]:
        return self._entries

    def sorted(self) -> list[Triple]:
        return sorted(self._entries)

    def dump(self) -> str:
        """One ``(r, i, j)`` per line, sorted."""
        return "\n".join(str(e) for e in self.sorted())

    def r_indices(self) -> set[int]:
        return {e.r for e in self._entries}

    def parent_indices(self) -> set[int]:
        return {p for e in self._entries for p in e.parents}

    def indices(self) -> set[int]:
        return self.r_indices() | self.parent_indices()

    def restrict(self, members) -> TriplesTable:
        """Entries whose r and non-zero parents all lie in ``members``."""
        members = set(members)
        return TriplesTable(
            e for e in self._entries
            if e.r in members and e.i in members and (e.j == 0 or e.j in members))

    def without(self, other: Iterable[Triple]) -> TriplesTable:
        drop = other.entries if isinstance(other, TriplesTable) else set(other)
        return TriplesTable(self._entries - drop)

    def union(self, other: Iterable[Triple]) -> TriplesTable:
        return TriplesTable(self._entries | set(other))


def build_table(u: ProductUniverse) -> TriplesTable:
    """Generate triples(f) from a product universe.

    Contents: the maximal-closed-span seeds recorded on ``u``, every
    non-free/free consensus as ``(r, i, 0)``, and every useful non-free pair
    consensus as ``(r, i, j)``.  Relationships producing a free product are
    left out.
    """
    index = {c.bits: k for k, c in enumerate(u.nonfree, 1)}
    nonfree = [c.bits for c in u.nonfree]
    free = [c.bits for c in u.free]
    t0: set[Triple] = {Triple.make(*s) for s in u.span_seeds}

    for i, (ap, an) in enumerate(nonfree, 1):
        for bp, bn in free:
            x = consensus_bits(ap, an, bp, bn)
            if x is None:
                continue
            r = index.get(x)
            if r is not None:
                t0.add(Triple.make(r, i))

    single = {(e.r, e.i) for e in t0}
    t3: set[Triple] = set()
    for i in range(len(nonfree)):
        ap, an = nonfree[i]
        for j in range(i + 1, len(nonfree)):
            x = consensus_bits(ap, an, *nonfree[j])
            if x is None:
                continue
            r = index.get(x)
            if r is None:
                continue
            if (r, i + 1) in single or (r, j + 1) in single:
                continue
            t3.add(Triple.make(r, i + 1, j + 1))
    return TriplesTable(t0 | t3)


def remove_useless(t: TriplesTable) -> TriplesTable:
    single = {(e.r, e.i) for e in t.entries if e.j == 0}
    return TriplesTable(
        e for e in t.entries
        if e.j == 0 or ((e.r, e.i) not in single and (e.r, e.j) not in single))


def prune(t: TriplesTable) -> tuple[TriplesTable, list[int]]:
    """Drop useless entries, then inactive r-indices until none are left.

    Returns the pruned table and the inactive indices removed, in removal
    order.
    """
    entries = set(remove_useless(t).entries)
    removed: list[int] = []
    while True:
        parents = {p for e in entries for p in e.parents}
        inactive = sorted({e.r for e in entries} - parents)
        if not inactive:
            break
        dead = set(inactive)
        removed.extend(inactive)
        entries = {e for e in entries if e.r not in dead}
    return TriplesTable(entries), removed


class Propagator:
    """A table compiled for repeated coverage queries.

    A state is ``(covered, need)``: the covered indices and, per entry, how
    many of its parents are still uncovered.  :meth:`extend` never mutates
    its input state, so search code can branch from any state cheaply.
    """

    def __init__(self, t: TriplesTable):
        self.rows = t.sorted()
        self.heads = [e.r for e in self.rows]
        self.by_parent: dict[int, list[int]] = defaultdict(list)
        for k, e in enumerate(self.rows):
            for p in e.parents:
                self.by_parent[p].append(k)
        self.start = (frozenset(), [len(e.parents) for e in self.rows])

    def extend(self, state, seed: Iterable[int]):
        covered, need = state
        covered = set(covered)
        need = list(need)
        queue = deque()
        for s in sorted(set(seed) - covered):
            covered.add(s)
            queue.append(s)
        heads, by_parent = self.heads, self.by_parent
        empty = ()
        while queue:
            for k in by_parent.get(queue.popleft(), empty):
                need[k] -= 1
                if not need[k]:
                    r = heads[k]
                    if r not in covered:
                        covered.add(r)
                        queue.append(r)
        return frozenset(covered), need

    def span(self, seed: Iterable[int]) -> frozenset[int]:
        return self.extend(self.start, seed)[0]


def _collapse(r: int, i: int, j: int) -> Triple:
    if not i:
        return Triple(r, j, 0)
    if j and i > j:
        return Triple(r, j, i)
    return Triple(r, i, j)


def cascade(seed: Iterable[int], t: TriplesTable) -> tuple[list[int], TriplesTable]:
    """Propagate coverage from ``seed`` through ``t``.

    Returns the cascade list (seed in increasing order, then indices in the
    order they became covered) and the reduced table, in which covered
    parents have been replaced by 0.
    """
    entries = [list(e) for e in t.entries]
    by_r = defaultdict(list)
    by_parent = defaultdict(list)
    for k, (r, i, j) in enumerate(entries):
        by_r[r].append(k)
        if i:
            by_parent[i].append(k)
        if j:
            by_parent[j].append(k)
    alive = [True] * len(entries)

    order: list[int] = []
    covered: set[int] = set()
    queue: deque[int] = deque()
    for s in sorted(set(seed)):
        covered.add(s)
        order.append(s)
        queue.append(s)
    while queue:
        s = queue.popleft()
        for k in by_r[s]:
            alive[k] = False
        for k in by_parent[s]:
            if not alive[k]:
                continue
            e = entries[k]
            if e[1] == s:
                e[1] = 0
            if e[2] == s:
                e[2] = 0
            if e[1] == 0 and e[2] == 0 and e[0] not in covered:
                covered.add(e[0])
                order.append(e[0])
                queue.append(e[0])
    reduced = TriplesTable(
        _collapse(*e) for e, a in zip(entries, alive) if a and e[0] not in covered)
    return order, reduced


def span(seed: Iterable[int], t: TriplesTable) -> frozenset[int]:
    """Seed plus everything it covers in ``t``; ``t`` is left untouched."""
    return Propagator(t).span(seed)


def covers(seed: Iterable[int], t: TriplesTable) -> bool:
    """True iff cascading ``seed`` through ``t`` empties it."""
    return t.r_indices() <= Propagator(t).span(seed)
