"""Invariant checks run by the ``verify`` command."""

from __future__ import annotations

from dataclasses import dataclass

from .ancestors import ancestor_set
from .cover import CostFunction, MinimizeResult, min_cost_cover, minimize
from .errors import OracleLimitError
from .oracle import (BRUTE_BASES_MAX_PRIMES, BRUTE_PRIMES_MAX_VARS, brute_min_bases,
                     brute_primes, essentials_by_minterm, truth_table)
from .primes import SumOfProducts, complete_primes, essential_by_definition, essential_primes
from .triples import covers, prune


@dataclass(frozen=True)
class Check:
    name: str
    status: str  # "pass", "fail" or "skip"
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"


def _check(name, ok, detail=""):
    return Check(name, "pass" if ok else "fail", "" if ok else detail)


def check_function(f: SumOfProducts, cost_fn: CostFunction | None = None) -> list[Check]:
    cost_fn = cost_fn or CostFunction.unit()
    f = f.normalized()
    out: list[Check] = []
    primes = complete_primes(f)

    if f.n <= BRUTE_PRIMES_MAX_VARS:
        out.append(_check("primes_match_oracle", primes == brute_primes(f),
                          "iterated consensus and brute force disagree"))
    else:
        out.append(Check("primes_match_oracle", "skip", f"n > {BRUTE_PRIMES_MAX_VARS}"))

    table_f = truth_table(f)
    out.append(_check("primes_equivalent", truth_table(primes, f.n) == table_f,
                      "sum of primes differs from f"))

    sasao = essential_primes(primes)
    ok = sasao == essential_by_definition(primes) == essentials_by_minterm(primes, f.n)
    out.append(_check("essentials_agree", ok, "essential-prime methods disagree"))

    result: MinimizeResult = minimize(f, cost_fn)
    part = result.partition
    u = result.universe
    ps_cubes = [c for comp in part.components for c in part.primeset_cubes(comp)]
    groups = list(part.essentials) + list(part.unnecessary_free) + part.surplus_cubes + ps_cubes
    out.append(_check("partition_exact",
                      len(groups) == len(set(groups)) and set(groups) == set(primes),
                      "Essentials/primesets/Unnecessary do not partition the primes"))

    seen: set[int] = set()
    entries: set = set()
    disjoint = True
    for comp in part.components:
        disjoint &= seen.isdisjoint(comp.members) and entries.isdisjoint(comp.sub_table.entries)
        seen |= comp.members
        entries |= comp.sub_table.entries
    out.append(_check("components_disjoint", disjoint, "components overlap"))

    lemma = all(
        ancestor_set(q, comp.sub_table, u.prime_count).members == comp.members
        for comp in part.components for q in comp.primeset)
    out.append(_check("independence_lemma", lemma, "Anc(Q) differs from its component"))

    union_ps = set().union(*(c.primeset for c in part.components))
    pruned, _ = prune(part.table)
    out.append(_check("cascade_list", covers(union_ps, pruned),
                      "union of primesets leaves table entries uncovered"))

    basis_ok = truth_table(result.basis, f.n) == table_f
    out.append(_check("basis_equivalent", basis_ok, "minimized basis differs from f"))

    cost_of = lambda k: u.costs[k - 1]  # noqa: E731
    consistent = all(
        abs(min_cost_cover(comp, cost_fn, cost_of, u.prime_count, "branch_and_bound").cost
            - sol.cost) <= 1e-9
        for comp, sol in zip(part.components, result.solutions)
        if sol.method != "branch_and_bound")
    out.append(_check("shortcut_consistency", consistent,
                      "shortcut cost differs from branch-and-bound"))

    if len(primes) <= BRUTE_BASES_MAX_PRIMES:
        try:
            best = brute_min_bases(f, cost_fn, primes=primes)
        except OracleLimitError as exc:
            out.append(Check("optimal", "skip", str(exc)))
        else:
            out.append(_check("optimal", abs(best.min_cost - result.full_cost) <= 1e-9,
                              f"cost {result.full_cost} but oracle minimum {best.min_cost}"))
    else:
        out.append(Check("optimal", "skip", f"more than {BRUTE_BASES_MAX_PRIMES} primes"))
    return out
