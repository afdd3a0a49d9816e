"""Cost functions, per-component exact covers and the minimize pipeline."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .ancestors import AncestorSet, Partition, iterate_independents, parents, partition
from .cube import Cube, canonical
from .errors import BudgetExceeded, ConfigurationError
from .primes import CLOSURE_CAP, ProductUniverse, SumOfProducts, build_universe
from .triples import Propagator, TriplesTable, build_table, cascade, covers

log = logging.getLogger(__name__)

NODE_BUDGET = 10_000_000
COST_KINDS = ("unit", "literal_count", "table")
#: Kinds for which a full-span prime is provably a minimum cover on its own.
SPAN_BASIS_KINDS = ("unit", "literal_count")


@dataclass(frozen=True)
class CostFunction:
    kind: str = "unit"
    table: Mapping[Cube, float] | None = None

    def __post_init__(self):
        if self.kind not in COST_KINDS:
            raise ConfigurationError(f"unknown cost kind {self.kind!r}")
        if self.kind == "table":
            if self.table is None:
                raise ConfigurationError("table cost needs a table")
            for c, v in self.table.items():
                if not v > 0:
                    raise ConfigurationError(f"cost of {c} must be positive, got {v}")

    @classmethod
    def unit(cls) -> CostFunction:
        return cls("unit")

    @classmethod
    def literal_count(cls) -> CostFunction:
        return cls("literal_count")

    @classmethod
    def from_table(cls, table: Mapping[Cube, float]) -> CostFunction:
        return cls("table", dict(table))

    def __call__(self, c: Cube) -> float:
        if self.kind == "unit":
            return 1
        if self.kind == "literal_count":
            # the constant-TRUE cube has no literals but costs must stay positive
            return max(1, c.num_literals())
        try:
            return self.table[c]
        except KeyError:
            raise ConfigurationError(f"no cost given for product {c}") from None

    @property
    def span_basis_ok(self) -> bool:
        return self.kind in SPAN_BASIS_KINDS


def cost(c: CostFunction, x: Cube) -> float:
    return c(x)


@dataclass(frozen=True)
class CoverSolution:
    component: int
    chosen: tuple[int, ...]
    cost: float
    method: str
    parts: tuple[CoverSolution, ...] = ()
    nodes: int = 0
    optimal: bool = True
    lower_bound: float | None = None


@dataclass(frozen=True)
class Decomposition:
    prime: int
    span_part: AncestorSet
    residual: tuple[AncestorSet, ...]


def _tol(x: float) -> float:
    return 1e-9 * max(1.0, abs(x))


def span_basis_shortcut(a: AncestorSet, cost_fn: CostFunction,
                        cost_of: Callable[[int], float], component: int = 0):
    """Single-prime cover when some prime spans the whole set, else None.

    Every full-span prime is equivalent to every other one, so the cheapest
    of them (lowest index on ties) is the representative.
    """
    if not cost_fn.span_basis_ok:
        return None
    prop = Propagator(a.sub_table)
    full = [p for p in sorted(a.primeset) if prop.span((p,)) == a.members]
    if not full:
        return None
    best = min(full, key=lambda p: (cost_of(p), p))
    return CoverSolution(component, (best,), cost_of(best), "span_basis")


def _is_closed(p: int, members: frozenset[int], t: TriplesTable) -> bool:
    return any(
        e.r == p and e.i in members and (e.j == 0 or e.j in members) for e in t.entries)


def split_independent_prime(a: AncestorSet, prime_count: int):
    """Split off the span of an Independent prime, or return None.

    Candidates have a maximal, closed span that falls short of the whole
    set; they are tried largest span first.  A candidate is independent when
    the rest of the set cannot cover it.
    """
    t = a.sub_table
    prop = Propagator(t)
    spans = {p: prop.span((p,)) for p in sorted(a.primeset)}
    candidates = []
    for p, s in spans.items():
        if s == a.members:
            continue
        if not any(q != p and q in a.primeset for q in s):
            continue
        if any(q != p and s < other for q, other in spans.items()):
            continue
        if not _is_closed(p, s, t):
            continue
        candidates.append(p)
    candidates.sort(key=lambda p: (-len(spans[p]), p))
    for p in candidates:
        s = spans[p]
        if p in prop.span(a.members - s):
            continue
        inner = t.restrict(s)
        _, rest = cascade(s, t.without(inner))
        span_part = AncestorSet(s, frozenset(q for q in s if q <= prime_count), inner, p)
        residual = tuple(x for _, x in iterate_independents(rest, prime_count))
        return Decomposition(p, span_part, residual)
    return None


def branch_and_bound(a: AncestorSet, cost_of: Callable[[int], float],
                     node_budget: int = NODE_BUDGET, component: int = 0) -> CoverSolution:
    """Exact minimum-cost subset of the primeset whose cascade empties the table.

    Branches on the uncovered index with the fewest candidate primes (its
    prime ancestors, plus itself if it is a prime).  The bound sums the
    cheapest candidate of uncovered indices whose candidate sets are
    pairwise disjoint.  Ties between optima go to the lexicographically
    smallest index tuple.
    """
    t = a.sub_table
    primes = sorted(a.primeset, key=lambda p: (cost_of(p), p))
    rank = {p: k for k, p in enumerate(primes)}
    if not covers(primes, t):
        raise ValueError("the primeset does not cover its table")
    targets = t.r_indices()
    pmap = parents(t)
    cand: dict[int, frozenset[int]] = {}
    for x in targets:
        seen, stack = set(), list(pmap.get(x, ()))
        while stack:
            y = stack.pop()
            if y not in seen:
                seen.add(y)
                stack.extend(pmap.get(y, ()))
        seen.add(x)
        cand[x] = frozenset(q for q in seen if q in rank)

    best_cost = math.fsum(cost_of(p) for p in primes)
    best = tuple(sorted(primes))
    nodes = 0
    root_bound = None
    # candidates of each target, cheapest first
    ordered = {x: sorted(cs, key=rank.__getitem__) for x, cs in cand.items()}

    def bound(open_targets, allowed):
        used: set[int] = set()
        total = 0.0
        mins = []
        for x in open_targets:
            first = next((q for q in ordered[x] if q in allowed), None)
            if first is None:
                return None
            mins.append((cost_of(first), x))
        mins.sort(key=lambda m: (-m[0], m[1]))
        for c, x in mins:
            cs = cand[x]
            if used.isdisjoint(cs):
                used |= cs & allowed
                total += c
        return total

    prop = Propagator(t)

    def visit(chosen: list[int], state, allowed: frozenset[int], spent: float):
        nonlocal nodes, best, best_cost, root_bound
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded(
                f"branch-and-bound exceeded its budget of {node_budget} nodes",
                node_budget, best, best_cost, root_bound)
        open_targets = sorted(targets - state[0])
        if not open_targets:
            key = tuple(sorted(chosen))
            if spent < best_cost - _tol(best_cost) or (
                    abs(spent - best_cost) <= _tol(best_cost) and key < best):
                best, best_cost = key, spent
            return
        lb = bound(open_targets, allowed)
        if lb is None:
            return
        if root_bound is None:
            root_bound = spent + lb
        if spent + lb > best_cost + _tol(best_cost):
            return
        pivot = min(open_targets, key=lambda x: (len(cand[x] & allowed), x))
        options = [q for q in ordered[pivot] if q in allowed]
        remaining = allowed
        for q in options:
            remaining = remaining - {q}
            visit(chosen + [q], prop.extend(state, (q,)), remaining, spent + cost_of(q))

    visit([], prop.start, frozenset(primes), 0.0)
    return CoverSolution(component, best, best_cost, "branch_and_bound", nodes=nodes)


def min_cost_cover(a: AncestorSet, cost_fn: CostFunction, cost_of: Callable[[int], float],
                   prime_count: int, strategy: str = "auto",
                   node_budget: int = NODE_BUDGET, component: int = 0) -> CoverSolution:
    """Minimum-cost cover of one component.

    ``strategy="auto"`` tries the span-basis shortcut, then an Independent
    prime split (recursing on the pieces), then branch-and-bound.
    ``"branch_and_bound"`` forces the last.
    """
    if strategy not in ("auto", "branch_and_bound"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "auto":
        sol = span_basis_shortcut(a, cost_fn, cost_of, component)
        if sol is not None:
            return sol
        dec = split_independent_prime(a, prime_count)
        if dec is not None:
            parts = [min_cost_cover(p, cost_fn, cost_of, prime_count, "auto",
                                    node_budget, component)
                     for p in (dec.span_part, *dec.residual)]
            chosen = tuple(sorted(q for s in parts for q in s.chosen))
            return CoverSolution(
                component, chosen, math.fsum(s.cost for s in parts), "decomposition",
                parts=tuple(parts), nodes=sum(s.nodes for s in parts))
    return branch_and_bound(a, cost_of, node_budget, component)


@dataclass(frozen=True)
class MinimizeResult:
    basis: tuple[Cube, ...]
    total_cost: float
    essentials_cost: float
    partition: Partition | None
    solutions: tuple[CoverSolution, ...]
    universe: ProductUniverse | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return all(s.optimal for s in self.solutions)

    @property
    def full_cost(self) -> float:
        return self.total_cost + self.essentials_cost


def minimize(f: SumOfProducts, cost_fn: CostFunction | None = None, *,
             node_budget: int = NODE_BUDGET, strategy: str = "auto",
             parallel: bool = False, cap: int = CLOSURE_CAP) -> MinimizeResult:
    """Minimum-cost basis of ``f``.

    ``total_cost`` counts only the non-free primes chosen; the essential
    primes' cost is reported apart in ``essentials_cost``.  If any component
    exhausts its node budget the best-known result is still assembled and
    raised as :class:`BudgetExceeded` with the result in ``best``.
    """
    if cost_fn is None:
        cost_fn = CostFunction.unit()
    f = f.normalized()
    u = build_universe(f, cost_fn, cap)
    part = partition(build_table(u), u)
    cost_of = lambda k: u.costs[k - 1]  # noqa: E731

    def solve(item):
        k, comp = item
        try:
            return min_cost_cover(comp, cost_fn, cost_of, u.prime_count, strategy,
                                  node_budget, k)
        except BudgetExceeded as exc:
            log.warning("component %d: %s", k, exc)
            return CoverSolution(k, tuple(exc.best), exc.best_cost, "branch_and_bound",
                                 optimal=False, lower_bound=exc.lower_bound)

    items = list(enumerate(part.components))
    if parallel and len(items) > 1:
        with ThreadPoolExecutor() as pool:
            solutions = tuple(pool.map(solve, items))
    else:
        solutions = tuple(map(solve, items))

    chosen = [u.cube(q) for s in solutions for q in s.chosen]
    result = MinimizeResult(
        basis=tuple(canonical(list(u.essentials) + chosen)),
        total_cost=math.fsum(s.cost for s in solutions),
        essentials_cost=math.fsum(cost_fn(e) for e in u.essentials),
        partition=part,
        solutions=solutions,
        universe=u,
    )
    if not result.optimal:
        lb = math.fsum(s.lower_bound if s.lower_bound is not None else s.cost
                       for s in solutions)
        raise BudgetExceeded("node budget exhausted; best-known basis attached",
                             node_budget, result, result.total_cost, lb)
    return result
