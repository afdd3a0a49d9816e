"""Brute-force ground truth for small functions.

Nothing here touches consensus: truth tables are built minterm by minterm
and minimum bases are found by exhaustive subset enumeration over minterm
coverage.  Assignment ``s`` sets x_{k+1} to bit k of s.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .cube import Cube, Literal, canonical
from .errors import OracleLimitError
from .primes import SumOfProducts

ORACLE_ENV = "PRIMECOVER_ORACLE_MAX_VARS"
ORACLE_MAX_VARS = 12
BRUTE_PRIMES_MAX_VARS = 8
BRUTE_BASES_MAX_PRIMES = 22


def oracle_max_vars() -> int:
    value = os.environ.get(ORACLE_ENV)
    return int(value) if value else ORACLE_MAX_VARS


def _check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise OracleLimitError(f"{what}: n={n} exceeds the oracle cap of {cap}", cap)


@lru_cache(maxsize=None)
def _var_masks(n: int) -> tuple[int, ...]:
    masks = []
    for k in range(n):
        block = (1 << (1 << k)) - 1  # 2^k zeros then 2^k ones, repeated
        pattern = block << (1 << k)
        period = 1 << (k + 1)
        m = 0
        for start in range(0, 1 << n, period):
            m |= pattern << start
        masks.append(m)
    return tuple(masks)


def cube_mask(c: Cube) -> int:
    """Minterms of ``c`` as a 2^n-bit integer."""
    full = (1 << (1 << c.n)) - 1
    m = full
    for k, vm in enumerate(_var_masks(c.n)):
        bit = 1 << k
        if c.pos & bit:
            m &= vm
        elif c.neg & bit:
            m &= full ^ vm
    return m


@dataclass(frozen=True)
class TruthTable:
    n: int
    mask: int

    def __len__(self) -> int:
        return 1 << self.n

    def __getitem__(self, s: int) -> bool:
        if not 0 <= s < len(self):
            raise IndexError(s)
        return bool(self.mask >> s & 1)

    @property
    def bits(self) -> tuple[bool, ...]:
        return tuple(self[s] for s in range(len(self)))

    def popcount(self) -> int:
        return bin(self.mask).count("1")


def truth_table(f: SumOfProducts | Iterable[Cube], n: int | None = None) -> TruthTable:
    if isinstance(f, SumOfProducts):
        n, terms = f.n, f.terms
    else:
        terms = tuple(f)
        if n is None:
            if not terms:
                raise ValueError("variable count needed for an empty product list")
            n = terms[0].n
    _check_cap(n, oracle_max_vars(), "truth_table")
    m = 0
    for t in terms:
        m |= cube_mask(t)
    return TruthTable(n, m)


def equivalent(a: SumOfProducts, b: SumOfProducts) -> bool:
    if a.n != b.n:
        raise ValueError(f"variable counts differ: {a.n} vs {b.n}")
    return truth_table(a) == truth_table(b)


def _all_cubes(n: int) -> Iterator[Cube]:
    for lits in itertools.product((Literal.ABSENT, Literal.POS, Literal.NEG), repeat=n):
        yield Cube.from_literals(lits)


def brute_primes(f: SumOfProducts, max_vars: int = BRUTE_PRIMES_MAX_VARS) -> list[Cube]:
    """Implicants that stop being implicants when any literal is dropped.

    Sweeps all 3^n cubes, so ``max_vars`` is a hard cap.
    """
    _check_cap(f.n, max_vars, "brute_primes")
    on = truth_table(f).mask
    out = []
    for c in _all_cubes(f.n):
        if cube_mask(c) & ~on:
            continue
        prime = True
        for k in range(f.n):
            bit = 1 << k
            if (c.pos | c.neg) & bit:
                bigger = Cube(c.n, c.pos & ~bit, c.neg & ~bit)
                if not cube_mask(bigger) & ~on:
                    prime = False
                    break
        if prime:
            out.append(c)
    return canonical(out)


def essentials_by_minterm(primes: Sequence[Cube], n: int) -> list[Cube]:
    """Primes owning at least one ON-minterm no other prime covers."""
    masks = [cube_mask(p) for p in primes]
    out = []
    for k, p in enumerate(primes):
        others = 0
        for q, m in enumerate(masks):
            if q != k:
                others |= m
        if masks[k] & ~others:
            out.append(p)
    return canonical(out)


@dataclass(frozen=True)
class MinBases:
    min_cost: float
    bases: tuple[tuple[Cube, ...], ...]


def _words(mask: int, width: int) -> np.ndarray:
    return np.array([(mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(width)],
                    dtype=np.uint64)


def brute_min_bases(
    f: SumOfProducts,
    cost: Callable[[Cube], float],
    all_optima: bool = False,
    primes: Sequence[Cube] | None = None,
    rel_tol: float = 1e-9,
) -> MinBases:
    """Minimum-cost sets of primes whose union of minterms equals f's ON-set.

    Every subset of the primes is scored; ``bases`` holds one optimum (the
    first in enumeration order) unless ``all_optima`` is set.
    """
    if primes is None:
        primes = brute_primes(f)
    primes = canonical(primes)
    k = len(primes)
    if k > BRUTE_BASES_MAX_PRIMES:
        raise OracleLimitError(
            f"brute_min_bases: {k} primes exceeds the cap of {BRUTE_BASES_MAX_PRIMES}",
            BRUTE_BASES_MAX_PRIMES)
    on = truth_table(f).mask
    if not primes:
        return MinBases(0, ((),))

    width = max(1, ((1 << f.n) + 63) // 64)
    full = _words(on, width)
    masks = [_words(cube_mask(p), width) for p in primes]
    costs = [float(cost(p)) for p in primes]

    low = min(k, 16)
    cov = np.zeros((1, width), dtype=np.uint64)
    tot = np.zeros(1)
    for m, c in zip(masks[:low], costs[:low]):
        cov = np.concatenate([cov, cov | m])
        tot = np.concatenate([tot, tot + c])

    best = None
    found: list[tuple[int, int]] = []
    high = k - low
    for hi in range(1 << high):
        hm = np.zeros(width, dtype=np.uint64)
        hc = 0.0
        for b in range(high):
            if hi >> b & 1:
                hm |= masks[low + b]
                hc += costs[low + b]
        ok = np.all((cov | hm) == full, axis=1)
        if not ok.any():
            continue
        total = tot + hc
        cand = float(total[ok].min())
        tol = rel_tol * max(1.0, abs(cand))
        if best is None or cand < best - tol:
            best, found = cand, []
        if cand <= best + tol:
            hits = np.nonzero(ok & (np.abs(total - best) <= rel_tol * max(1.0, abs(best))))[0]
            found.extend((hi, int(lo)) for lo in hits)

    if best is None:
        raise ValueError("the primes do not cover the function")
    bases = []
    for hi, lo in found:
        sel = [primes[b] for b in range(low) if lo >> b & 1]
        sel += [primes[low + b] for b in range(high) if hi >> b & 1]
        bases.append(tuple(canonical(sel)))
        if not all_optima:
            break
    return MinBases(best, tuple(bases))


def random_sop(rng: random.Random, n: int, max_terms: int = 8) -> SumOfProducts:
    """1..max_terms terms, each variable uniformly positive, negated or absent."""
    count = rng.randint(1, max_terms)
    terms = [Cube.from_literals([rng.choice(tuple(Literal)) for _ in range(n)])
             for _ in range(count)]
    return SumOfProducts(n, tuple(terms))


def corpus(seed: int, count: int, n_values: Sequence[int] = (3, 4, 5, 6),
           max_terms: int = 8) -> Iterator[SumOfProducts]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_sop(rng, rng.choice(tuple(n_values)), max_terms)
