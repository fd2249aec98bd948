"""Lexicographic preferences with a dominant component, and the two
top-trading-cycle mechanisms they support.

House-primary agents hold a strict total order over houses and break ties
with a weak order over tenants; tenant-primary agents do the reverse.  The
induced ordering over outcomes is lexicographic, so it is a weak order over
all n*n outcomes and every oracle in :mod:`tep.axioms` applies to the
materialized instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .model import Allocation, Instance, Outcome, make_instance

HOUSE = "house"
TENANT = "tenant"


@dataclass(frozen=True)
class PredominantProfile:
    """Strict primary order plus weak tie-break order, per agent.

    In house mode ``primary[i]`` is a strict ranking of all houses (best
    first) and ``tiebreak[i]`` partitions the agents into indifference
    classes; tenant mode swaps the two roles.
    """

    n: int
    endowment: tuple[int, ...]
    mode: str
    primary: tuple[tuple[int, ...], ...]
    tiebreak: tuple[tuple[frozenset[int], ...], ...]

    def __post_init__(self):
        n = self.n
        if self.mode not in (HOUSE, TENANT):
            raise ValueError(f"mode must be {HOUSE!r} or {TENANT!r}")
        if len(self.endowment) != n or sorted(self.endowment) != list(range(n)):
            raise ValueError("endowment must be a bijection onto house indices")
        if len(self.primary) != n or len(self.tiebreak) != n:
            raise ValueError("need one primary order and one tie-break per agent")
        for i in range(n):
            if sorted(self.primary[i]) != list(range(n)):
                raise ValueError(f"agent {i}: primary order must rank all {n} items strictly")
            flat = [x for cls in self.tiebreak[i] for x in cls]
            if sorted(flat) != list(range(n)):
                raise ValueError(f"agent {i}: tie-break classes must partition all {n} items")

    @cached_property
    def owner(self) -> tuple[int, ...]:
        inverse = [0] * self.n
        for agent, house in enumerate(self.endowment):
            inverse[house] = agent
        return tuple(inverse)

    @cached_property
    def _primary_rank(self) -> tuple[dict[int, int], ...]:
        return tuple({x: r for r, x in enumerate(order)} for order in self.primary)

    @cached_property
    def _tiebreak_rank(self) -> tuple[dict[int, int], ...]:
        return tuple(
            {x: r for r, cls in enumerate(classes) for x in cls}
            for classes in self.tiebreak
        )

    def outcome_key(self, agent: int, outcome: Outcome) -> tuple[int, int]:
        """Sort key (lower is better) of an outcome for one agent."""
        o = Outcome(*outcome)
        if self.mode == HOUSE:
            return (self._primary_rank[agent][o.house], self._tiebreak_rank[agent][o.tenant])
        return (self._primary_rank[agent][o.tenant], self._tiebreak_rank[agent][o.house])


def lex_compare(prof: PredominantProfile, agent: int, a: Outcome, b: Outcome) -> int:
    """+1 if a is lexicographically preferred (primary first), -1 or 0 otherwise."""
    ka, kb = prof.outcome_key(agent, a), prof.outcome_key(agent, b)
    return (kb > ka) - (ka > kb)


def lex_instance(prof: PredominantProfile) -> Instance:
    """Materialize the full weak order over outcomes as an ordinary instance.

    Every outcome is listed (the order is total), grouped into classes by
    (primary rank, tie-break rank).
    """
    n = prof.n
    prefs = []
    for i in range(n):
        buckets: dict[tuple[int, int], set[Outcome]] = {}
        for h in range(n):
            for t in range(n):
                o = Outcome(h, t)
                buckets.setdefault(prof.outcome_key(i, o), set()).add(o)
        prefs.append([buckets[key] for key in sorted(buckets)])
    return make_instance(n, prefs, prof.endowment)


def _strict_order(prof: PredominantProfile, expected_mode: str) -> None:
    if prof.mode != expected_mode:
        raise ValueError(f"mechanism needs a {expected_mode}-primary profile, got {prof.mode}")


def ttc(prof: PredominantProfile, *, start: str = "min") -> Allocation:
    """Top trading cycles driven by the strict house orders.

    Each remaining agent points at its best remaining house and each house
    at its owner; some cycle always exists, its agents take the houses they
    point at, and the cycle leaves the market.  Cycles in this pointer graph
    are vertex-disjoint, so the result does not depend on removal order
    (``start`` picks the walk's starting agent and exists for the tests that
    assert exactly that).
    """
    _strict_order(prof, HOUSE)
    return _trade_cycles(prof, start, house_driven=True)[0]


def tttc(prof: PredominantProfile, *, start: str = "min") -> Allocation:
    """Top trading cycles driven by the owners' strict tenant orders.

    Each remaining agent points at its own house and each house at the agent
    its owner most prefers as a tenant; within a removed cycle each house is
    taken by the agent it points at.
    """
    _strict_order(prof, TENANT)
    return _trade_cycles(prof, start, house_driven=False)[0]


def _trade_cycles(prof: PredominantProfile, start: str,
                  house_driven: bool) -> tuple[Allocation, list[list[int]]]:
    if start not in ("min", "max"):
        raise ValueError("start must be 'min' or 'max'")
    n = prof.n
    remaining_agents = set(range(n))
    remaining_houses = set(range(n))
    assignment = [-1] * n
    rounds: list[list[int]] = []

    def best_house(agent: int) -> int:
        for h in prof.primary[agent]:
            if h in remaining_houses:
                return h
        raise AssertionError("no remaining house")

    def best_tenant(agent: int) -> int:
        for t in prof.primary[agent]:
            if t in remaining_agents:
                return t
        raise AssertionError("no remaining agent")

    # House-driven, the walk goes agent -> favourite remaining house -> its
    # owner; tenant-driven it goes agent -> own house -> owner's favourite
    # remaining tenant (the agent who will take that house).
    while remaining_agents:
        pivot = min(remaining_agents) if start == "min" else max(remaining_agents)
        seen: dict[int, int] = {}
        walk: list[int] = []
        cur = pivot
        while cur not in seen:
            seen[cur] = len(walk)
            walk.append(cur)
            cur = prof.owner[best_house(cur)] if house_driven else best_tenant(cur)
        cycle = walk[seen[cur]:]
        rounds.append(cycle)
        for agent in cycle:
            if house_driven:
                assignment[agent] = best_house(agent)
            else:
                assignment[best_tenant(agent)] = prof.endowment[agent]
        for agent in cycle:
            remaining_agents.remove(agent)
            remaining_houses.remove(prof.endowment[agent])
    return Allocation(tuple(assignment)), rounds


def trade_rounds(prof: PredominantProfile) -> list[list[int]]:
    """The cycles removed by :func:`ttc`, in removal order (house mode only);
    exposed for the round-structure checks."""
    _strict_order(prof, HOUSE)
    return _trade_cycles(prof, "min", house_driven=True)[1]
