"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from primecover.cube import Cube, Literal
from primecover.primes import SumOfProducts


def cube_of(n):
    return st.lists(st.sampled_from(list(Literal)), min_size=n, max_size=n).map(
        Cube.from_literals)


def functions(min_n=2, max_n=5, max_terms=7):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.lists(cube_of(n), min_size=1, max_size=max_terms).map(
            lambda ts: SumOfProducts(n, tuple(ts))))
