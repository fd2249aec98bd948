"""Two-component preferences and the responsive set extension.

Agents rank houses and tenants separately; an outcome beats another only
when both components weakly agree (with one strict), which yields a partial
order over outcomes.  This module provides the comparison, the axiom
oracles under that partial order, the polynomial-time acceptability
matching (every agent gets an acceptable house and an acceptable tenant),
and the refinement algorithm that turns the matching subroutine into an
individually rational, Pareto-optimal allocation under the extension.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .axioms import DEFAULT_MAX_N, DEFAULT_NODE_BUDGET, all_allocations
from .cycles import Budget, Options, find_exchange_cycle
from .errors import OracleLimitError
from .matching import max_bipartite_matching
from .model import Allocation, Outcome
from .rng import SplitMix64

ComponentClasses = tuple[tuple[frozenset[int], ...], ...]


class RsOrdering(enum.Enum):
    BETTER = "strictly-better"
    INDIFFERENT = "indifferent"
    WORSE = "strictly-worse"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class ResponsiveProfile:
    """Per-agent weak orders over houses and over tenants.

    ``house_classes[i]`` lists agent i's acceptable houses as indifference
    classes, best first, and must mention the agent's own house somewhere;
    ``tenant_classes[i]`` does the same for tenants and must mention the
    agent itself.  Unlisted items are unacceptable: mutually indifferent and
    below everything listed.
    """

    n: int
    endowment: tuple[int, ...]
    house_classes: ComponentClasses
    tenant_classes: ComponentClasses

    def __post_init__(self):
        n = self.n
        if len(self.endowment) != n or sorted(self.endowment) != list(range(n)):
            raise ValueError("endowment must be a bijection onto house indices")
        for label, per_agent, required in (
            ("house", self.house_classes, lambda i: self.endowment[i]),
            ("tenant", self.tenant_classes, lambda i: i),
        ):
            if len(per_agent) != n:
                raise ValueError(f"need one {label} order per agent")
            for i, classes in enumerate(per_agent):
                seen: set[int] = set()
                for cls in classes:
                    if not cls:
                        raise ValueError(f"agent {i} has an empty {label} class")
                    for item in cls:
                        if not 0 <= item < n:
                            raise ValueError(f"agent {i} lists out-of-range {label} {item}")
                        if item in seen:
                            raise ValueError(f"agent {i} lists {label} {item} twice")
                        seen.add(item)
                if required(i) not in seen:
                    raise ValueError(f"agent {i} must find its own {label} acceptable")

    @cached_property
    def owner(self) -> tuple[int, ...]:
        inverse = [0] * self.n
        for agent, house in enumerate(self.endowment):
            inverse[house] = agent
        return tuple(inverse)

    @cached_property
    def _house_ranks(self) -> tuple[dict[int, int], ...]:
        return tuple(
            {h: rank for rank, cls in enumerate(classes) for h in cls}
            for classes in self.house_classes
        )

    @cached_property
    def _tenant_ranks(self) -> tuple[dict[int, int], ...]:
        return tuple(
            {t: rank for rank, cls in enumerate(classes) for t in cls}
            for classes in self.tenant_classes
        )

    def house_rank(self, agent: int, house: int) -> int:
        return self._house_ranks[agent].get(house, len(self.house_classes[agent]))

    def tenant_rank(self, agent: int, tenant: int) -> int:
        return self._tenant_ranks[agent].get(tenant, len(self.tenant_classes[agent]))

    def acceptable_houses(self, agent: int) -> frozenset[int]:
        return frozenset(h for cls in self.house_classes[agent] for h in cls)

    def acceptable_tenants(self, agent: int) -> frozenset[int]:
        return frozenset(t for cls in self.tenant_classes[agent] for t in cls)


def rs_compare(prof: ResponsiveProfile, agent: int, a: Outcome, b: Outcome) -> RsOrdering:
    """Compare two outcomes under the responsive set extension: one outcome
    strictly beats another only when it is weakly better on both the house
    and the tenant component and strictly better on at least one."""
    a, b = Outcome(*a), Outcome(*b)
    for o in (a, b):
        if not (0 <= o.house < prof.n and 0 <= o.tenant < prof.n):
            raise ValueError(f"outcome {o.text()} out of range")
    hc = prof.house_rank(agent, b.house) - prof.house_rank(agent, a.house)
    tc = prof.tenant_rank(agent, b.tenant) - prof.tenant_rank(agent, a.tenant)
    if hc == 0 and tc == 0:
        return RsOrdering.INDIFFERENT
    if hc >= 0 and tc >= 0:
        return RsOrdering.BETTER
    if hc <= 0 and tc <= 0:
        return RsOrdering.WORSE
    return RsOrdering.INCOMPARABLE


def _weakly_better(prof: ResponsiveProfile, agent: int, a: Outcome, b: Outcome) -> bool:
    return rs_compare(prof, agent, a, b) in (RsOrdering.BETTER, RsOrdering.INDIFFERENT)


def _outcome(prof: ResponsiveProfile, alloc: Allocation, agent: int) -> Outcome:
    return Outcome(alloc[agent], alloc.inverse[prof.endowment[agent]])


def is_rs_ir(prof: ResponsiveProfile, alloc: Allocation) -> bool:
    """Every agent's outcome weakly dominates its endowment outcome on both
    components."""
    return all(
        _weakly_better(prof, i, _outcome(prof, alloc, i), Outcome(prof.endowment[i], i))
        for i in range(prof.n)
    )


def is_rs_pareto_optimal(prof: ResponsiveProfile, alloc: Allocation, *,
                         max_n: int = DEFAULT_MAX_N) -> bool:
    """No allocation weakly dominates this one for all agents (both
    components, with one strict somewhere) under the set extension."""
    if prof.n > max_n:
        raise OracleLimitError(
            f"exact scan needs n <= {max_n}, got n = {prof.n}; raise the bound explicitly"
        )
    current = [_outcome(prof, alloc, i) for i in range(prof.n)]
    for q in all_allocations(prof.n):
        strict = False
        for i in range(prof.n):
            ordering = rs_compare(prof, i, _outcome(prof, q, i), current[i])
            if ordering in (RsOrdering.WORSE, RsOrdering.INCOMPARABLE):
                strict = False
                break
            if ordering is RsOrdering.BETTER:
                strict = True
        if strict:
            return False
    return True


def is_rs_core_stable(prof: ResponsiveProfile, alloc: Allocation, *,
                      node_budget: int | None = DEFAULT_NODE_BUDGET) -> bool:
    """No coalition can reallocate its own endowments so that every member
    strictly improves under the set extension."""
    options: Options = []
    for i in range(prof.n):
        cur = _outcome(prof, alloc, i)
        steps = [
            (t, prof.owner[h])
            for h in range(prof.n)
            for t in range(prof.n)
            if rs_compare(prof, i, Outcome(h, t), cur) is RsOrdering.BETTER
        ]
        options.append(steps)
    return find_exchange_cycle(options, Budget(node_budget)) is None


def rs_aa(n: int, endowment: tuple[int, ...],
          acceptable_houses: list[frozenset[int]] | list[set[int]],
          acceptable_tenants: list[frozenset[int]] | list[set[int]]) -> Allocation | None:
    """An allocation giving every agent an acceptable house and every house
    an acceptable tenant, or None.

    Mutual acceptability is symmetrized first: agent i may take house h only
    if h's owner also accepts i as a tenant.  A perfect matching in the
    resulting agent-house graph is exactly such an allocation.
    """
    owner = [0] * n
    for agent, house in enumerate(endowment):
        owner[house] = agent
    adj = [
        sorted(h for h in acceptable_houses[i] if i in acceptable_tenants[owner[h]])
        for i in range(n)
    ]
    size, match = max_bipartite_matching(n, n, adj)
    if size < n:
        return None
    return Allocation(tuple(match))


def acceptable_component_classes(prof: ResponsiveProfile) -> tuple[ComponentClasses, ComponentClasses]:
    """The classes the refinement operates on: each component order truncated
    at the class holding the agent's own house (or itself), since an agent
    is never interested in trading down a component below what it starts
    with."""
    houses = []
    tenants = []
    for i in range(prof.n):
        own = prof.house_rank(i, prof.endowment[i])
        houses.append(prof.house_classes[i][:own + 1])
        self_rank = prof.tenant_rank(i, i)
        tenants.append(prof.tenant_classes[i][:self_rank + 1])
    return tuple(houses), tuple(tenants)


@dataclass(frozen=True)
class PraResult:
    """Outcome of the preference-refinement run: the allocation, how many
    matching calls it used, and how many classes of each component order
    survive (counted against :func:`acceptable_component_classes`)."""

    allocation: Allocation
    rs_aa_calls: int
    house_kept: tuple[int, ...]
    tenant_kept: tuple[int, ...]


_POLICIES = ("round-robin", "reverse", "random")


def pra_rs(prof: ResponsiveProfile, *, order: str = "round-robin",
           seed: int | None = None) -> PraResult:
    """Refine dichotomous acceptability sets until no component can shrink.

    Starting from full indifference over the acceptable items of each
    component, repeatedly pick an agent and component (per the order
    policy), tentatively drop the worst remaining indifference class, and
    keep the drop only if an acceptability matching still exists; otherwise
    that component is saturated for good.  The final matching is
    individually rational and Pareto optimal with respect to the responsive
    set extension.
    """
    if order not in _POLICIES:
        raise ValueError(f"unknown order policy {order!r}; choose from {_POLICIES}")
    n = prof.n
    house_classes, tenant_classes = acceptable_component_classes(prof)
    kept = {("H", i): len(house_classes[i]) for i in range(n)}
    kept.update({("N", i): len(tenant_classes[i]) for i in range(n)})
    sets_h = [set().union(*house_classes[i]) for i in range(n)]
    sets_t = [set().union(*tenant_classes[i]) for i in range(n)]

    pairs = [(comp, i) for i in range(n) for comp in ("H", "N")]
    if order == "reverse":
        pairs = list(reversed(pairs))
    rng = SplitMix64(seed if seed is not None else 0)

    # Staying put is always feasible at the start: every agent accepts its
    # own house and itself as tenant.
    allocation = Allocation(tuple(range(n)))

    saturated: set[tuple[str, int]] = set()
    calls = 0
    cursor = 0
    while len(saturated) < 2 * n:
        if order == "random":
            pair = rng.choice([p for p in pairs if p not in saturated])
        else:
            while pairs[cursor % len(pairs)] in saturated:
                cursor += 1
            pair = pairs[cursor % len(pairs)]
            cursor += 1
        comp, agent = pair
        classes = house_classes[agent] if comp == "H" else tenant_classes[agent]
        remaining = kept[pair]
        dropped = classes[remaining - 1]
        target = sets_h if comp == "H" else sets_t
        target[agent] = target[agent] - dropped
        calls += 1
        result = rs_aa(n, prof.endowment, sets_h, sets_t)
        if result is None:
            target[agent] = target[agent] | dropped
            saturated.add(pair)
        else:
            kept[pair] = remaining - 1
            allocation = result
    return PraResult(
        allocation=allocation,
        rs_aa_calls=calls,
        house_kept=tuple(kept[("H", i)] for i in range(n)),
        tenant_kept=tuple(kept[("N", i)] for i in range(n)),
    )
