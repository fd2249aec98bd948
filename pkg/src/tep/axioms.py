"""Exact, desk-scale oracles for allocation axioms.

Everything here is exponential-time by nature (the underlying existence
questions are NP-hard), so each oracle carries an explicit bound: full
scans over all n! allocations refuse to run above ``max_n`` and the
backtracking searches consume a node budget.  Within those bounds the
answers are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterator

from .cycles import Budget, Options, find_exchange_cycle, has_cycle_through, iter_exchange_cycles
from .errors import OracleLimitError
from .model import Allocation, Instance, Outcome, outcome_of

DEFAULT_MAX_N = 8
DEFAULT_NODE_BUDGET = 10_000_000


def all_allocations(n: int) -> Iterator[Allocation]:
    """All n! allocations in lexicographic assignment order."""
    for perm in permutations(range(n)):
        yield Allocation(perm)


def _check_max_n(inst: Instance, max_n: int) -> None:
    if inst.n > max_n:
        raise OracleLimitError(
            f"exact scan needs n <= {max_n}, got n = {inst.n}; raise the bound explicitly"
        )


def _rank_vector(inst: Instance, alloc: Allocation) -> tuple[int, ...]:
    return tuple(inst.rank(i, outcome_of(inst, alloc, i)) for i in range(inst.n))


def is_individually_rational(inst: Instance, alloc: Allocation) -> bool:
    """Every agent weakly prefers its outcome to keeping its own house."""
    return all(
        inst.rank(i, outcome_of(inst, alloc, i)) <= inst.endowment_rank(i)
        for i in range(inst.n)
    )


def pareto_dominates(inst: Instance, q: Allocation, p: Allocation) -> bool:
    """True when q weakly improves every agent and strictly improves one."""
    strict = False
    for i in range(inst.n):
        rq = inst.rank(i, outcome_of(inst, q, i))
        rp = inst.rank(i, outcome_of(inst, p, i))
        if rq > rp:
            return False
        if rq < rp:
            strict = True
    return strict


def is_pareto_optimal(inst: Instance, alloc: Allocation, *,
                      max_n: int = DEFAULT_MAX_N) -> bool:
    _check_max_n(inst, max_n)
    p_ranks = _rank_vector(inst, alloc)
    for q in all_allocations(inst.n):
        q_ranks = _rank_vector(inst, q)
        if q_ranks != p_ranks and all(a <= b for a, b in zip(q_ranks, p_ranks)):
            return False
    return True


def is_weakly_pareto_optimal(inst: Instance, alloc: Allocation, *,
                             max_n: int = DEFAULT_MAX_N) -> bool:
    """No other allocation strictly improves every agent at once."""
    _check_max_n(inst, max_n)
    p_ranks = _rank_vector(inst, alloc)
    for q in all_allocations(inst.n):
        q_ranks = _rank_vector(inst, q)
        if all(a < b for a, b in zip(q_ranks, p_ranks)):
            return False
    return True


@dataclass(frozen=True)
class BlockingWitness:
    """A coalition that can strictly improve all of its members by
    reallocating its own endowments along ``cycle``."""

    coalition: tuple[int, ...]          # sorted members
    internal: tuple[tuple[int, int], ...]  # (member, house) pairs, sorted by member
    cycle: tuple[int, ...]              # trading order: cycle[t] takes cycle[t+1]'s house

    def internal_map(self) -> dict[int, int]:
        return dict(self.internal)


def _witness_from_cycle(inst: Instance, cycle: list[int]) -> BlockingWitness:
    k = len(cycle)
    internal = {cycle[t]: inst.endowment[cycle[(t + 1) % k]] for t in range(k)}
    return BlockingWitness(
        coalition=tuple(sorted(cycle)),
        internal=tuple(sorted(internal.items())),
        cycle=tuple(cycle),
    )


def witness_blocks(inst: Instance, alloc: Allocation, witness: BlockingWitness) -> bool:
    """Re-check a witness against the definitions (used by tests and callers
    that do not trust the search)."""
    members = set(witness.coalition)
    internal = witness.internal_map()
    if set(internal) != members:
        return False
    houses = sorted(internal.values())
    if houses != sorted(inst.endowment[m] for m in members):
        return False
    receiver = {house: member for member, house in internal.items()}
    for m in members:
        new = Outcome(internal[m], receiver[inst.endowment[m]])
        old = outcome_of(inst, alloc, m)
        if inst.rank(m, new) >= inst.rank(m, old):
            return False
    return True


def improvement_options(inst: Instance, alloc: Allocation) -> Options:
    """Per agent, the (predecessor, successor) exchange steps it strictly
    prefers to its current outcome.  A listed outcome (h, t) means taking
    the house of h's owner while t becomes the agent's own tenant."""
    opts: Options = []
    for i in range(inst.n):
        cur = inst.rank(i, outcome_of(inst, alloc, i))
        steps: list[tuple[int, int]] = []
        for rank, cls in enumerate(inst.prefs[i]):
            if rank >= cur:
                break
            for o in sorted(cls):
                steps.append((o.tenant, inst.owner[o.house]))
        opts.append(steps)
    return opts


def find_blocking_coalition(inst: Instance, alloc: Allocation, *,
                            node_budget: int | None = DEFAULT_NODE_BUDGET
                            ) -> BlockingWitness | None:
    """A minimal-cardinality blocking coalition, or None.

    Minimal blocking coalitions are single trading cycles (any blocking
    coalition's internal allocation decomposes into cycles, each of which
    blocks on its own), so the search enumerates improvement cycles and
    keeps the smallest; ties break on the sorted member list, then on the
    internal house vector.
    """
    options = improvement_options(inst, alloc)
    budget = Budget(node_budget)
    best: tuple | None = None
    best_cycle: list[int] | None = None
    for cycle in iter_exchange_cycles(options, budget):
        witness = _witness_from_cycle(inst, cycle)
        key = (len(cycle), witness.coalition, witness.internal)
        if best is None or key < best:
            best, best_cycle = key, cycle
    return _witness_from_cycle(inst, best_cycle) if best_cycle is not None else None


def is_core_stable(inst: Instance, alloc: Allocation, *,
                   node_budget: int | None = DEFAULT_NODE_BUDGET) -> bool:
    """No coalition can strictly improve all members with an internal exchange."""
    options = improvement_options(inst, alloc)
    return find_exchange_cycle(options, Budget(node_budget)) is None


def _assignment_search(inst: Instance, rank_limits: list[int],
                       prune_blocking: bool, budget: Budget) -> Iterator[Allocation]:
    """Backtracking over agents in index order, assigning each a listed
    outcome of rank <= its limit, with bijection and tenant-consistency
    propagation.  With ``prune_blocking`` any partial assignment already
    containing an improvement cycle among fully-determined agents is cut,
    so every yielded leaf is core stable.
    """
    n = inst.n
    owner = inst.owner
    endow = inst.endowment
    got = [-1] * n  # house received
    ten = [-1] * n  # tenant of own house
    candidates: list[list[Outcome]] = []
    for i in range(n):
        opts: list[Outcome] = []
        for rank, cls in enumerate(inst.prefs[i]):
            if rank > rank_limits[i]:
                break
            opts.extend(sorted(cls))
        candidates.append(opts)

    determined: set[int] = set()
    imp_options: Options = [[] for _ in range(n)]

    def settle(trail_agents: list[int]) -> list[int] | None:
        """Validate agents that just became fully determined; returns the
        list added to ``determined`` or None when one fails its rank limit
        or completes an improvement cycle."""
        added: list[int] = []
        for x in sorted(set(trail_agents)):
            if x in determined or got[x] < 0 or ten[x] < 0:
                continue
            outcome = Outcome(got[x], ten[x])
            if inst.rank(x, outcome) > rank_limits[x]:
                for y in added:
                    determined.remove(y)
                    imp_options[y] = []
                return None
            determined.add(x)
            added.append(x)
            if prune_blocking:
                cur = inst.rank(x, outcome)
                steps: list[tuple[int, int]] = []
                for rank, cls in enumerate(inst.prefs[x]):
                    if rank >= cur:
                        break
                    for o in sorted(cls):
                        steps.append((o.tenant, owner[o.house]))
                imp_options[x] = steps
                if has_cycle_through(imp_options, x, determined, budget):
                    for y in added:
                        determined.remove(y)
                        imp_options[y] = []
                    return None
        return added

    def assign(i: int) -> Iterator[Allocation]:
        if i == n:
            yield Allocation(tuple(got))
            return
        if got[i] >= 0 and ten[i] >= 0:
            yield from assign(i + 1)
            return
        for o in candidates[i]:
            if (got[i] >= 0 and got[i] != o.house) or (ten[i] >= 0 and ten[i] != o.tenant):
                continue
            budget.tick()
            trail: list[tuple[str, int]] = []

            def put(kind: str, x: int, value: int) -> bool:
                arr = got if kind == "g" else ten
                if arr[x] < 0:
                    arr[x] = value
                    trail.append((kind, x))
                    return True
                return arr[x] == value

            ok = (put("g", i, o.house) and put("t", i, o.tenant)
                  and put("t", owner[o.house], i) and put("g", o.tenant, endow[i]))
            added = settle([x for _, x in trail]) if ok else None
            if ok and added is not None:
                yield from assign(i + 1)
                for y in added:
                    determined.remove(y)
                    imp_options[y] = []
            for kind, x in reversed(trail):
                (got if kind == "g" else ten)[x] = -1

    return assign(0)


def enumerate_ir_allocations(inst: Instance, *,
                             node_budget: int | None = DEFAULT_NODE_BUDGET
                             ) -> list[Allocation]:
    """Exactly the allocations giving every agent an outcome weakly above
    its endowment outcome, found by backtracking over listed outcomes."""
    limits = [inst.endowment_rank(i) for i in range(inst.n)]
    budget = Budget(node_budget)
    return list(_assignment_search(inst, limits, False, budget))


def core_exists(inst: Instance, *,
                node_budget: int | None = DEFAULT_NODE_BUDGET) -> Allocation | None:
    """A core-stable allocation if one exists, else None.

    Core-stable allocations are individually rational (a singleton coalition
    blocks anything below the endowment outcome), so the search runs over
    IR assignments only, pruning branches that already contain a blocking
    cycle.  Leaves are re-checked before being returned.
    """
    limits = [inst.endowment_rank(i) for i in range(inst.n)]
    budget = Budget(node_budget)
    for alloc in _assignment_search(inst, limits, True, budget):
        options = improvement_options(inst, alloc)
        if find_exchange_cycle(options, budget) is None:
            return alloc
    return None


def find_top_allocation(inst: Instance, *,
                        node_budget: int | None = DEFAULT_NODE_BUDGET
                        ) -> Allocation | None:
    """An allocation giving every agent a top-class outcome, or None."""
    limits = [0] * inst.n
    budget = Budget(node_budget)
    return next(_assignment_search(inst, limits, False, budget), None)


def enumerate_pareto_optimal(inst: Instance, *,
                             max_n: int = DEFAULT_MAX_N) -> list[Allocation]:
    _check_max_n(inst, max_n)
    allocs = list(all_allocations(inst.n))
    vectors = [_rank_vector(inst, a) for a in allocs]
    out = []
    for i, p_ranks in enumerate(vectors):
        dominated = any(
            q_ranks != p_ranks and all(a <= b for a, b in zip(q_ranks, p_ranks))
            for q_ranks in vectors
        )
        if not dominated:
            out.append(allocs[i])
    return out


def enumerate_ir_pareto_optimal(inst: Instance, *,
                                max_n: int = DEFAULT_MAX_N) -> list[Allocation]:
    _check_max_n(inst, max_n)
    return [a for a in enumerate_pareto_optimal(inst, max_n=max_n)
            if is_individually_rational(inst, a)]


def enumerate_core_stable(inst: Instance, *, max_n: int = DEFAULT_MAX_N,
                          node_budget: int | None = DEFAULT_NODE_BUDGET
                          ) -> list[Allocation]:
    _check_max_n(inst, max_n)
    return [a for a in all_allocations(inst.n)
            if is_core_stable(inst, a, node_budget=node_budget)]
