"""Mechanisms, misreport search, and executable impossibility case analyses.

A mechanism is any deterministic callable from a market description (plain
instance, predominant profile, or responsive profile) to an allocation.
:func:`find_manipulation` replays a mechanism against a space of candidate
misreports for one agent and returns the first report that strictly
improves the agent under its true preferences.

The two ``verify_*`` functions re-derive, with the exact oracles, every
step of the case analyses showing that no mechanism combines
strategyproofness with individual rationality plus Pareto optimality, or
with core consistency, on the 4-agent witness market.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator

from .axioms import (DEFAULT_MAX_N, enumerate_core_stable, enumerate_ir_pareto_optimal)
from .errors import BudgetExceededError, ProofError
from .generators import sp_instance
from .model import Allocation, Instance, Outcome, compare, make_instance, outcome_of
from .predominant import PredominantProfile, lex_compare
from .responsive import ResponsiveProfile, RsOrdering, rs_compare

Mechanism = Callable


@dataclass(frozen=True)
class ManipulationWitness:
    agent: int
    report: object
    outcome_before: Outcome
    outcome_after: Outcome


def replace_prefs(inst: Instance, agent: int, classes) -> Instance:
    """The instance with one agent's preference list swapped out (the
    endowment outcome is appended when the report omits it)."""
    prefs = [
        [set(c) for c in (classes if i == agent else inst.prefs[i])]
        for i in range(inst.n)
    ]
    return make_instance(inst.n, prefs, inst.endowment)


def _apply_report(truth, agent: int, report):
    if isinstance(truth, Instance):
        return replace_prefs(truth, agent, report)
    if isinstance(truth, PredominantProfile):
        primary = list(truth.primary)
        primary[agent] = tuple(report)
        return replace(truth, primary=tuple(primary))
    if isinstance(truth, ResponsiveProfile):
        houses, tenants = report
        hc = list(truth.house_classes)
        tc = list(truth.tenant_classes)
        hc[agent] = tuple(frozenset(c) for c in houses)
        tc[agent] = tuple(frozenset(c) for c in tenants)
        return replace(truth, house_classes=tuple(hc), tenant_classes=tuple(tc))
    raise TypeError(f"unsupported truth type {type(truth).__name__}")


def _strictly_better(truth, agent: int, after: Outcome, before: Outcome) -> bool:
    if isinstance(truth, Instance):
        return compare(truth, agent, after, before) > 0
    if isinstance(truth, PredominantProfile):
        return lex_compare(truth, agent, after, before) > 0
    if isinstance(truth, ResponsiveProfile):
        return rs_compare(truth, agent, after, before) is RsOrdering.BETTER
    raise TypeError(f"unsupported truth type {type(truth).__name__}")


def _agent_outcome(truth, alloc: Allocation, agent: int) -> Outcome:
    return Outcome(alloc[agent], alloc.inverse[truth.endowment[agent]])


def find_manipulation(mechanism: Mechanism, truth, agent: int,
                      reports: Iterable, *,
                      max_reports: int = 100_000) -> ManipulationWitness | None:
    """First report in enumeration order that strictly improves the agent
    under its true preferences, or None when the space is exhausted.

    ``truth`` may be an :class:`Instance` (reports are preference class
    lists), a :class:`PredominantProfile` (reports are strict primary
    orders), or a :class:`ResponsiveProfile` (reports are (house classes,
    tenant classes) pairs).
    """
    before = _agent_outcome(truth, mechanism(truth), agent)
    for count, report in enumerate(reports):
        if count >= max_reports:
            raise BudgetExceededError(f"misreport space cap {max_reports} exceeded")
        after = _agent_outcome(truth, mechanism(_apply_report(truth, agent, report)), agent)
        if _strictly_better(truth, agent, after, before):
            return ManipulationWitness(agent, report, before, after)
    return None


def strict_primary_reports(n: int) -> Iterator[tuple[int, ...]]:
    """All strict total orders over n items, lexicographically."""
    return permutations(range(n))


def sublist_reports(inst: Instance, agent: int) -> Iterator[list[list[Outcome]]]:
    """All order-preserving sub-lists of the agent's listed outcomes, as
    strict rankings, by increasing length.  The endowment outcome is
    restored automatically when a sub-list drops it."""
    outcomes = inst.listed_outcomes(agent)
    for size in range(1, len(outcomes) + 1):
        for keep in combinations(range(len(outcomes)), size):
            yield [[outcomes[k]] for k in keep]


def _ordered_partitions(items: tuple[int, ...]) -> Iterator[tuple[frozenset[int], ...]]:
    if not items:
        yield ()
        return
    rest = set(items)
    for size in range(1, len(items) + 1):
        for cls in combinations(sorted(rest), size):
            remainder = tuple(sorted(rest - set(cls)))
            for tail in _ordered_partitions(remainder):
                yield (frozenset(cls),) + tail


def component_order_reports(prof: ResponsiveProfile, agent: int) -> Iterator[tuple]:
    """Every pair of component weak orders for one agent: each component
    ranges over all ordered partitions of every subset that contains the
    agent's own house (respectively itself).  Sizable even for small n; pair
    with the report cap."""
    n = prof.n

    def component(required: int):
        others = [x for x in range(n) if x != required]
        for size in range(len(others) + 1):
            for extra in combinations(others, size):
                for part in _ordered_partitions(tuple(sorted(extra + (required,)))):
                    yield part

    for houses in component(prof.endowment[agent]):
        for tenants in component(agent):
            yield (houses, tenants)


def table_mechanism(cases: dict[Instance, Allocation],
                    fallback: Mechanism) -> Mechanism:
    """Mechanism stub that answers from a lookup table and defers to a
    fallback elsewhere; used to pin a mechanism's choice in case replays."""

    def mech(inst: Instance) -> Allocation:
        hit = cases.get(inst)
        return hit if hit is not None else fallback(inst)

    return mech


def first_ir_pareto_mechanism(*, max_n: int = DEFAULT_MAX_N) -> Mechanism:
    """The mechanism returning the lexicographically first allocation that is
    individually rational and Pareto optimal."""

    def mech(inst: Instance) -> Allocation:
        return enumerate_ir_pareto_optimal(inst, max_n=max_n)[0]

    return mech


@dataclass(frozen=True)
class ProofReport:
    """Record of an executable case analysis; construction succeeds only if
    every branch closed."""

    name: str
    lines: tuple[str, ...]

    @property
    def closed(self) -> bool:
        return True

    def __str__(self) -> str:
        return "\n".join(self.lines)


def _fmt(alloc: Allocation) -> str:
    return " ".join(str(h) for h in alloc.assignment)


# The 4-agent witness market: its two IR + Pareto-optimal allocations, and
# the truncation reports used in the case analyses.
_P = Allocation((1, 2, 3, 0))      # the four-way trade
_Q = Allocation((3, 2, 1, 0))      # swaps {1,2} and {0,3}
_B = Allocation((1, 0, 3, 2))      # swaps {0,1} and {2,3}
_S = Allocation((0, 1, 3, 2))      # swap {2,3} only
_REPORT_2 = [[Outcome(3, 3)], [Outcome(2, 2)]]
_REPORT_1 = [[Outcome(2, 2)], [Outcome(1, 1)]]
_REPORT_3 = [[Outcome(0, 0)], [Outcome(3, 3)]]
_REPORT_0 = [[Outcome(1, 1)], [Outcome(0, 0)]]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ProofError(message)


def _check_root(inst: Instance) -> None:
    if inst != sp_instance():
        raise ValueError("the case analysis is specific to the 4-agent witness market")


def _improves(inst: Instance, agent: int, alloc: Allocation, baseline: Outcome) -> bool:
    return compare(inst, agent, outcome_of(inst, alloc, agent), baseline) > 0


def verify_sp_impossibility_tree(inst: Instance | None = None) -> ProofReport:
    """Exhaust every choice an individually rational, Pareto-optimal
    mechanism could make on the witness market and close each branch with a
    profitable misreport.

    One branch goes beyond the published analysis: after agent 2's
    truncation the sub-instance has a second IR + Pareto-optimal allocation
    (the {0,3} swap), which the published argument overlooks; that branch
    closes via a further truncation by agent 0.  The report flags it.
    """
    inst = sp_instance() if inst is None else inst
    _check_root(inst)
    lines: list[str] = []

    root = set(enumerate_ir_pareto_optimal(inst))
    _require(root == {_P, _Q}, f"root IR+PO set is {sorted(_fmt(a) for a in root)}")
    lines.append(f"root: IR+PO choices are [{_fmt(_P)}] and [{_fmt(_Q)}]")

    # Choice Q: agent 2 truncates.
    inst2 = replace_prefs(inst, 2, _REPORT_2)
    cands2 = set(enumerate_ir_pareto_optimal(inst2))
    _require(cands2 == {_B, Allocation((3, 1, 2, 0))},
             f"unexpected IR+PO set after agent 2's report: {sorted(_fmt(a) for a in cands2)}")
    base_q = outcome_of(inst, _Q, 2)
    _require(_improves(inst, 2, _B, base_q), "agent 2 fails to improve at the bold choice")
    lines.append(f"choice [{_fmt(_Q)}]: agent 2 truncates; choice [{_fmt(_B)}] improves 2: closed")
    lines.append(f"choice [{_fmt(_Q)}]: sub-instance has 2 IR+PO allocations, published analysis expects 1")
    extra = Allocation((3, 1, 2, 0))
    _require(not _improves(inst, 2, extra, base_q),
             "the overlooked allocation should not help agent 2")
    # Repair: in the truncated instance, agent 0 profits by truncating too.
    inst20 = replace_prefs(inst2, 0, _REPORT_0)
    cands20 = set(enumerate_ir_pareto_optimal(inst20))
    _require(cands20 == {_B}, f"agent 0's repair report is not decisive: {sorted(_fmt(a) for a in cands20)}")
    base_extra = outcome_of(inst2, extra, 0)
    _require(_improves(inst2, 0, _B, base_extra), "agent 0 fails to improve in the repair branch")
    lines.append(f"choice [{_fmt(_Q)}] -> [{_fmt(extra)}]: agent 0 truncates; unique choice [{_fmt(_B)}] improves 0: closed")

    # Choice P: agent 1 truncates.
    inst1 = replace_prefs(inst, 1, _REPORT_1)
    cands1 = set(enumerate_ir_pareto_optimal(inst1))
    _require(cands1 == {_Q, _S},
             f"unexpected IR+PO set after agent 1's report: {sorted(_fmt(a) for a in cands1)}")
    base_p = outcome_of(inst, _P, 1)
    _require(_improves(inst, 1, _Q, base_p), "agent 1 fails to improve at the swap choice")
    lines.append(f"choice [{_fmt(_P)}]: agent 1 truncates; choice [{_fmt(_Q)}] improves 1: closed")
    inst13 = replace_prefs(inst1, 3, _REPORT_3)
    cands13 = set(enumerate_ir_pareto_optimal(inst13))
    _require(cands13 == {_Q}, f"agent 3's report is not decisive: {sorted(_fmt(a) for a in cands13)}")
    base_s = outcome_of(inst1, _S, 3)
    _require(_improves(inst1, 3, _Q, base_s), "agent 3 fails to improve")
    lines.append(f"choice [{_fmt(_P)}] -> [{_fmt(_S)}]: agent 3 truncates; unique choice [{_fmt(_Q)}] improves 3: closed")

    lines.append("all branches closed: no IR + Pareto-optimal mechanism is strategyproof here")
    return ProofReport("sp", tuple(lines))


def verify_core_consistency_impossibility(inst: Instance | None = None) -> ProofReport:
    """Same branch structure with core-stable sets at every node: a
    core-consistent mechanism must pick a core-stable allocation whenever
    one exists, and each pick opens a profitable misreport."""
    inst = sp_instance() if inst is None else inst
    _check_root(inst)
    lines: list[str] = []

    root = set(enumerate_core_stable(inst))
    _require(root == {_P, _Q}, f"root core set is {sorted(_fmt(a) for a in root)}")
    lines.append(f"root: core-stable choices are [{_fmt(_P)}] and [{_fmt(_Q)}]")

    inst2 = replace_prefs(inst, 2, _REPORT_2)
    cands2 = set(enumerate_core_stable(inst2))
    _require(cands2 == {_B}, f"core set after agent 2's report: {sorted(_fmt(a) for a in cands2)}")
    _require(_improves(inst, 2, _B, outcome_of(inst, _Q, 2)), "agent 2 fails to improve")
    lines.append(f"choice [{_fmt(_Q)}]: agent 2 truncates; unique core choice [{_fmt(_B)}] improves 2: closed")

    inst1 = replace_prefs(inst, 1, _REPORT_1)
    cands1 = set(enumerate_core_stable(inst1))
    _require(cands1 == {_Q}, f"core set after agent 1's report: {sorted(_fmt(a) for a in cands1)}")
    _require(_improves(inst, 1, _Q, outcome_of(inst, _P, 1)), "agent 1 fails to improve")
    lines.append(f"choice [{_fmt(_P)}]: agent 1 truncates; unique core choice [{_fmt(_Q)}] improves 1: closed")

    lines.append("all branches closed: no core-consistent mechanism is strategyproof here")
    return ProofReport("core-consistency", tuple(lines))
