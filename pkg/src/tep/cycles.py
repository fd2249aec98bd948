"""Search for exchange cycles subject to per-agent (predecessor, successor) options.

An exchange among agents c0 -> c1 -> ... -> ck-1 -> c0 hands each agent the
house of its successor and makes its predecessor the tenant of its own
house.  Callers describe, per agent, which (predecessor, successor) pairs
the agent would accept; a simple cycle consistent with those options is
exactly a coalition that can reallocate its own endowments to the stated
effect.  Blocking-coalition searches build options from strict-improvement
sets, so any cycle found here is a blocking witness.
"""

from __future__ import annotations

from typing import Iterator

from .errors import BudgetExceededError

Options = list[list[tuple[int, int]]]


class Budget:
    """Decrementing node counter; raises once exhausted.  ``None`` = unlimited."""

    __slots__ = ("left",)

    def __init__(self, nodes: int | None):
        self.left = nodes

    def tick(self) -> None:
        if self.left is not None:
            self.left -= 1
            if self.left < 0:
                raise BudgetExceededError("search node budget exhausted")


def iter_exchange_cycles(options: Options, budget: Budget | None = None,
                         members: set[int] | None = None) -> Iterator[list[int]]:
    """Yield every simple exchange cycle, smallest member first.

    ``options[i]`` lists the (predecessor, successor) pairs agent i accepts.
    ``members`` restricts the search to a subset of agents.  Cycles are
    canonical: position 0 holds the smallest member, so each cycle appears
    exactly once.
    """
    allowed = members if members is not None else set(range(len(options)))

    def extend(start: int, closing_prev: int, cur: int, prev: int,
               path: list[int], on_path: set[int]) -> Iterator[list[int]]:
        for p, nxt in options[cur]:
            if p != prev:
                continue
            if budget is not None:
                budget.tick()
            if nxt == start:
                if cur == closing_prev:
                    yield path.copy()
            elif nxt > start and nxt in allowed and nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                yield from extend(start, closing_prev, nxt, cur, path, on_path)
                on_path.remove(nxt)
                path.pop()

    for start in sorted(allowed):
        for p0, n0 in options[start]:
            if budget is not None:
                budget.tick()
            if n0 == start:
                if p0 == start:
                    yield [start]
                continue
            if n0 <= start or p0 <= start or n0 not in allowed or p0 not in allowed:
                continue
            yield from extend(start, p0, n0, start, [start, n0], {start, n0})


def find_exchange_cycle(options: Options, budget: Budget | None = None,
                        members: set[int] | None = None) -> list[int] | None:
    """First exchange cycle in canonical enumeration order, or None."""
    return next(iter_exchange_cycles(options, budget, members), None)


def has_cycle_through(options: Options, pivot: int, allowed: set[int],
                      budget: Budget | None = None) -> bool:
    """Whether a simple exchange cycle containing ``pivot`` exists in ``allowed``.

    Used for incremental pruning: after one more agent's exchange options
    become known, any newly completed cycle must pass through that agent.
    """

    def extend(cur: int, prev: int, closing_prev: int, on_path: set[int]) -> bool:
        for p, nxt in options[cur]:
            if p != prev:
                continue
            if budget is not None:
                budget.tick()
            if nxt == pivot:
                if cur == closing_prev:
                    return True
            elif nxt in allowed and nxt not in on_path:
                on_path.add(nxt)
                if extend(nxt, cur, closing_prev, on_path):
                    return True
                on_path.remove(nxt)
        return False

    for p0, n0 in options[pivot]:
        if budget is not None:
            budget.tick()
        if n0 == pivot:
            if p0 == pivot:
                return True
            continue
        if n0 in allowed and p0 in allowed and extend(n0, pivot, p0, {pivot, n0}):
            return True
    return False
