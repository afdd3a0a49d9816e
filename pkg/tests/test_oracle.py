import itertools
import random

import pytest

from primecover.cover import CostFunction
from primecover.cube import Cube, Literal, canonical
from primecover.errors import OracleLimitError
from primecover.formats import read_function
from primecover.oracle import (ORACLE_ENV, brute_min_bases, brute_primes, corpus, cube_mask,
                               equivalent, essentials_by_minterm, random_sop, truth_table)
from primecover.primes import SumOfProducts, complete_primes

from conftest import DATA, cubes, sop


class TestTruthTable:
    def test_and(self):
        assert truth_table(sop(2, "x1*x2")).bits == (False, False, False, True)

    def test_tautology(self):
        assert truth_table(sop(1, "x1", "x1'")).bits == (True, True)

    def test_false(self):
        assert truth_table(SumOfProducts(3)).popcount() == 0

    def test_bit_order(self):
        # x1 is the low bit of the assignment index
        assert truth_table(sop(2, "x1*x2'")).bits == (False, True, False, False)

    def test_eq1_active_variables(self):
        eq1 = read_function((DATA / "eq1.txt").read_text())
        active = [1, 2, 4, 5, 6, 8, 9, 10, 11]
        f9 = SumOfProducts(9, tuple(
            Cube.from_literals([t.literals[v - 1] for v in active]) for t in eq1.terms))
        assert truth_table(f9).popcount() == 78

    def test_matches_evaluate(self):
        rng = random.Random(3)
        for _ in range(30):
            f = random_sop(rng, 4)
            table = truth_table(f)
            for s in range(16):
                a = [bool(s >> k & 1) for k in range(4)]
                assert table[s] == any(t.evaluate(a) for t in f.terms)

    def test_cap(self, monkeypatch):
        monkeypatch.setenv(ORACLE_ENV, "3")
        with pytest.raises(OracleLimitError):
            truth_table(sop(4, "x1"))
        monkeypatch.setenv(ORACLE_ENV, "4")
        assert truth_table(sop(4, "x1")).popcount() == 8

    def test_cube_mask(self):
        assert cube_mask(Cube.one(2)) == 0b1111


class TestEquivalent:
    def test_consensus_identity(self):
        assert equivalent(sop(3, "x1*x2", "x1'*x3"), sop(3, "x1*x2", "x1'*x3", "x2*x3"))

    def test_different(self):
        assert not equivalent(sop(1, "x1"), sop(1, "x1'"))

    def test_n_mismatch(self):
        with pytest.raises(ValueError):
            equivalent(sop(1, "x1"), sop(2, "x1"))


class TestBrutePrimes:
    def test_consensus_identity(self):
        assert brute_primes(sop(3, "x1*x2", "x1'*x3")) == canonical(
            cubes(3, "x1*x2", "x1'*x3", "x2*x3"))

    def test_false(self):
        assert brute_primes(SumOfProducts(3)) == []

    def test_cap(self):
        with pytest.raises(OracleLimitError, match="cap of 8"):
            brute_primes(sop(9, "x1"))

    def test_matches_consensus_on_corpus(self):
        for f in corpus(41, 100):
            assert brute_primes(f) == complete_primes(f)


class TestMinBases:
    def test_consensus_identity(self):
        r = brute_min_bases(sop(3, "x1*x2", "x1'*x3"), CostFunction.unit())
        assert r.min_cost == 2
        assert r.bases == (tuple(canonical(cubes(3, "x1*x2", "x1'*x3"))),)

    def test_single_prime(self):
        r = brute_min_bases(sop(3, "x1*x2'*x3"), CostFunction.literal_count())
        assert r.min_cost == 3

    def test_false(self):
        assert brute_min_bases(SumOfProducts(2), CostFunction.unit()).min_cost == 0

    def test_all_optima(self):
        f = sop(3, "x1'*x2", "x2'*x3", "x1*x3'")
        r = brute_min_bases(f, CostFunction.unit(), all_optima=True)
        assert r.min_cost == 3 and len(r.bases) == 2
        for basis in r.bases:
            assert truth_table(basis, 3) == truth_table(f)

    def test_exhaustive_agreement(self):
        # compare against a plain itertools enumeration
        for f in corpus(42, 40, (3, 4)):
            primes = brute_primes(f)
            target = truth_table(f)
            cost = CostFunction.literal_count()
            best = min(
                sum(cost(p) for p in sub)
                for r in range(len(primes) + 1)
                for sub in itertools.combinations(primes, r)
                if truth_table(sub, f.n) == target)
            assert brute_min_bases(f, cost).min_cost == best

    def test_more_than_sixteen_primes(self):
        # exercises the looped high-prime half of the enumeration
        rng = random.Random(9)
        for _ in range(200):
            f = random_sop(rng, 6, 12)
            primes = brute_primes(f)
            if 16 < len(primes) <= 20:
                r = brute_min_bases(f, CostFunction.unit(), primes=primes)
                assert truth_table(r.bases[0], 6) == truth_table(f)
                assert len(r.bases[0]) == r.min_cost
                return
        pytest.skip("no function with 17-20 primes drawn")

    def test_prime_cap(self):
        primes = [Cube.from_literals([Literal.POS] * k + [Literal.ABSENT] * (23 - k))
                  for k in range(1, 24)]
        with pytest.raises(OracleLimitError):
            brute_min_bases(sop(23, "x1"), CostFunction.unit(), primes=primes)


class TestEssentialsByMinterm:
    def test_consensus_identity(self):
        primes = cubes(3, "x1*x2", "x1'*x3", "x2*x3")
        assert essentials_by_minterm(primes, 3) == canonical(cubes(3, "x1*x2", "x1'*x3"))


class TestCorpus:
    def test_deterministic(self):
        a = [f.terms for f in corpus(7, 50)]
        b = [f.terms for f in corpus(7, 50)]
        assert a == b

    def test_shape(self):
        for f in corpus(8, 200, (3, 4), max_terms=8):
            assert f.n in (3, 4) and 1 <= len(f.terms) <= 8
