import pytest
from hypothesis import given, settings

from primecover.ancestors import (ancestor_set, independent_batch, independent_batch_fast,
                                  iterate_independents, parents, partition)
from primecover.oracle import corpus
from primecover.primes import build_universe
from primecover.triples import TriplesTable, build_table, cascade, covers, prune

from conftest import sop
from strategies import functions

ANC_32 = {25, 27, 30, 31, 32, 35, 37}


def closure_oracle(x, rows):
    """Transitive closure of the parent relation by repeated relaxation."""
    out = set()
    changed = True
    while changed:
        changed = False
        for r, i, j in rows:
            if r == x or r in out:
                for p in (i, j):
                    if p and p not in out:
                        out.add(p)
                        changed = True
    return out


def pruned_table(f):
    u = build_universe(f.normalized())
    return u, prune(build_table(u))[0]


def member_sets(batch):
    return {a.members for a in batch}


class TestParents:
    def test_fig1(self, fig1):
        pmap = parents(fig1)
        assert pmap[30] == {32, 35, 37}
        assert pmap[24] == {67}
        assert pmap[67] == frozenset()

    def test_empty(self):
        assert parents(TriplesTable()) == {}


class TestAncestorSet:
    def test_fig1_32(self, fig1):
        a = ancestor_set(32, fig1, prime_count=40)
        assert a.members == ANC_32 and a.closed
        assert a.members == closure_oracle(32, fig1.entries)

    def test_fig1_24(self, fig1):
        a = ancestor_set(24, fig1, prime_count=40)
        assert a.members == {67} and not a.closed

    def test_no_parents(self, fig1):
        a = ancestor_set(67, fig1, prime_count=70)
        assert a.members == frozenset() and not a.closed

    def test_unknown_index(self, fig1):
        with pytest.raises(KeyError):
            ancestor_set(99, fig1, prime_count=99)

    def test_sub_table(self, fig1):
        a = ancestor_set(32, fig1, prime_count=40)
        assert all(e.r in ANC_32 and set(e.parents) <= ANC_32 for e in a.sub_table)
        assert a.primeset == ANC_32

    @settings(max_examples=60, deadline=None)
    @given(functions())
    def test_matches_oracle(self, f):
        _, t = pruned_table(f)
        for x in t.indices():
            assert ancestor_set(x, t, 0).members == closure_oracle(x, t.entries)


class TestBatch:
    def test_fig1_component(self, fig1):
        t = fig1.restrict(ANC_32)
        for find in (independent_batch, independent_batch_fast):
            (a,) = find(t, prime_count=27)
            assert a.members == ANC_32
            assert a.representative == 25
            assert a.primeset == {25, 27}

    def test_shared_ancestor_set(self):
        # every prime has ancestor set {1, 2, 3}
        t = TriplesTable([(1, 2, 0), (2, 3, 0), (3, 1, 0)])
        for find in (independent_batch, independent_batch_fast):
            (a,) = find(t, prime_count=3)
            assert a.members == {1, 2, 3} and a.representative == 1

    def test_single_prime(self):
        t = TriplesTable([(1, 2, 0), (2, 1, 0)])
        for find in (independent_batch, independent_batch_fast):
            (a,) = find(t, prime_count=1)
            assert a.members == {1, 2} and a.primeset == {1}

    def test_equivalent_pair_takes_cheaper(self):
        # primes 1 and 2 lie in each other's span; index 1 is the cheaper one
        t = TriplesTable([(1, 2, 0), (2, 1, 0), (3, 1, 0), (3, 2, 0)])
        t, _ = prune(t)
        for find in (independent_batch, independent_batch_fast):
            (a,) = find(t, prime_count=2)
            assert a.representative == 1 and a.primeset == {1, 2}

    def test_nested_sets(self):
        # Anc(1) = {1, 2} is inside Anc(3) = {1, 2, 3, 4}
        t = TriplesTable([(1, 2, 0), (2, 1, 0), (3, 1, 4), (4, 3, 0)])
        assert ancestor_set(3, t, 3).members == {1, 2, 3, 4}
        for find in (independent_batch, independent_batch_fast):
            assert member_sets(find(t, prime_count=3)) == {ancestor_set(1, t, 3).members}

    def test_disjoint_union(self):
        pieces = []
        for f in corpus(21, 400, (4, 5)):
            u, t = pruned_table(f)
            if t:
                pieces.append((u.prime_count, u.size, t))
            if len(pieces) == 6:
                break
        for (k1, n1, t1), (k2, n2, t2) in zip(pieces[::2], pieces[1::2]):
            # primes of both tables first, then the non-primes
            def shift1(x):
                return x if x <= k1 else x + k2

            def shift2(x):
                return x + k1 if x <= k2 else x + n1

            def remap(t, fn):
                return TriplesTable((fn(e.r), fn(e.i), fn(e.j) if e.j else 0) for e in t)

            joined = remap(t1, shift1).union(remap(t2, shift2))
            expect = ({frozenset(map(shift1, a.members)) for a in independent_batch(t1, k1)}
                      | {frozenset(map(shift2, a.members)) for a in independent_batch(t2, k2)})
            for find in (independent_batch, independent_batch_fast):
                batch = find(joined, k1 + k2)
                assert member_sets(batch) == expect
                sets = [a.members for a in batch]
                assert sum(map(len, sets)) == len(frozenset().union(*sets))

    @settings(max_examples=120, deadline=None)
    @given(functions())
    def test_fast_equals_slow(self, f):
        u, t = pruned_table(f)
        while t:
            slow = independent_batch(t, u.prime_count)
            fast = independent_batch_fast(t, u.prime_count)
            assert member_sets(slow) == member_sets(fast)
            assert [a.representative for a in slow] == [a.representative for a in fast]
            union = set().union(*(a.members for a in slow))
            extracted = set().union(*(a.sub_table.entries for a in slow))
            _, t = cascade(union, t.without(extracted))
            t, _ = prune(t)

    @settings(max_examples=80, deadline=None)
    @given(functions())
    def test_batch_is_independent(self, f):
        u, t = pruned_table(f)
        if not t:
            return
        batch = independent_batch(t, u.prime_count)
        assert batch
        every = [ancestor_set(p, t, u.prime_count) for p in t.indices() if p <= u.prime_count]
        closed = [a.members for a in every if a.closed]
        for a in batch:
            assert a.closed
            assert not any(other < a.members for other in closed)
        for a, b in zip(batch, batch[1:]):
            assert a.members.isdisjoint(b.members)


class TestIterate:
    @settings(max_examples=80, deadline=None)
    @given(functions())
    def test_open_primes_stay_open(self, f):
        # deleting entries only shrinks ancestor sets, so P never joins Anc(P) later
        u, t = pruned_table(f)
        k = u.prime_count
        ever_open: set[int] = set()
        while t:
            for p in (q for q in t.indices() if q <= k):
                a = ancestor_set(p, t, k)
                assert not (a.closed and p in ever_open)
                if not a.closed:
                    ever_open.add(p)
            batch = independent_batch(t, k)
            union = set().union(*(a.members for a in batch))
            extracted = set().union(*(a.sub_table.entries for a in batch))
            _, t = cascade(union, t.without(extracted))
            t, _ = prune(t)

    def test_terminates_on_fig1_component(self, fig1):
        t = fig1.restrict(ANC_32)
        out = list(iterate_independents(t, prime_count=27))
        assert [b for b, _ in out] == [0]


class TestPartition:
    def test_no_nonfree(self):
        u = build_universe(sop(3, "x1*x2", "x1'*x3"))
        p = partition(build_table(u), u)
        assert p.components == () and p.surplus == ()
        assert [str(c) for c in p.unnecessary_free] == ["x2*x3"]

    def test_cyclic(self):
        u = build_universe(sop(3, "x1'*x2", "x2'*x3", "x1*x3'"))
        p = partition(build_table(u), u)
        assert len(p.components) == 1
        assert p.components[0].primeset == set(range(1, 7))

    @settings(max_examples=120, deadline=None)
    @given(functions())
    def test_invariants(self, f):
        u = build_universe(f.normalized())
        t = build_table(u)
        p = partition(t, u)
        groups = (list(p.essentials) + list(p.unnecessary_free) + p.surplus_cubes
                  + [c for a in p.components for c in p.primeset_cubes(a)])
        assert sorted(groups, key=lambda c: c.sort_key()) == sorted(
            u.primes, key=lambda c: c.sort_key())
        seen: set[int] = set()
        for a in p.components:
            assert seen.isdisjoint(a.members)
            seen |= a.members
            for q in a.primeset:
                assert ancestor_set(q, a.sub_table, u.prime_count).members == a.members
        union_ps = set().union(*(a.primeset for a in p.components))
        assert covers(union_ps, prune(t)[0])

    @settings(max_examples=60, deadline=None)
    @given(functions())
    def test_fast_and_slow_partitions_agree(self, f):
        u = build_universe(f.normalized())
        t = build_table(u)
        fast, slow = partition(t, u), partition(t, u, fast=False)
        assert [a.members for a in fast.components] == [a.members for a in slow.components]
        assert fast.surplus == slow.surplus
