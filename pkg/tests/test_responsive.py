"""Responsive set extension: comparison, oracles, matching, refinement."""

from itertools import permutations

import pytest

from tep import (
    Allocation,
    Outcome,
    ResponsiveProfile,
    RsOrdering,
    identity_allocation,
    is_rs_core_stable,
    is_rs_ir,
    is_rs_pareto_optimal,
    pra_rs,
    rs_aa,
    rs_compare,
)
from tep.generators import random_responsive_profile
from tep.responsive import acceptable_component_classes


def profile(n, houses, tenants, endowment=None):
    endow = tuple(endowment) if endowment else tuple(range(n))
    return ResponsiveProfile(
        n, endow,
        tuple(tuple(frozenset(c) for c in houses[i]) for i in range(n)),
        tuple(tuple(frozenset(c) for c in tenants[i]) for i in range(n)),
    )


def everyone_top(n):
    """Own house and self are everyone's unique favourites."""
    houses = [[[i]] + [[h] for h in range(n) if h != i] for i in range(n)]
    tenants = [[[i]] + [[t] for t in range(n) if t != i] for i in range(n)]
    return profile(n, houses, tenants)


def mutual_improvement_2():
    """Both agents prefer the other's house and the other as tenant."""
    houses = [[[1], [0]], [[0], [1]]]
    tenants = [[[1], [0]], [[0], [1]]]
    return profile(2, houses, tenants)


# ---------------------------------------------------------------- comparison


def test_rs_compare_componentwise():
    prof = profile(3, [[[2], [0], [1]], [[1]], [[2]]],
                   [[[2], [0], [1]], [[1]], [[2]]])
    assert rs_compare(prof, 0, Outcome(2, 2), Outcome(0, 0)) is RsOrdering.BETTER
    assert rs_compare(prof, 0, Outcome(2, 0), Outcome(0, 2)) is RsOrdering.INCOMPARABLE
    assert rs_compare(prof, 0, Outcome(2, 0), Outcome(2, 0)) is RsOrdering.INDIFFERENT
    assert rs_compare(prof, 0, Outcome(0, 0), Outcome(2, 2)) is RsOrdering.WORSE
    with pytest.raises(ValueError):
        rs_compare(prof, 0, Outcome(5, 0), Outcome(0, 0))


def test_rs_compare_is_a_partial_order():
    prof = random_responsive_profile(4, 0.7, 0.4, 3)
    outcomes = [Outcome(h, t) for h in range(4) for t in range(4)]
    for agent in range(4):
        for a in outcomes:
            for b in outcomes:
                ab = rs_compare(prof, agent, a, b)
                ba = rs_compare(prof, agent, b, a)
                flips = {RsOrdering.BETTER: RsOrdering.WORSE,
                         RsOrdering.WORSE: RsOrdering.BETTER,
                         RsOrdering.INDIFFERENT: RsOrdering.INDIFFERENT,
                         RsOrdering.INCOMPARABLE: RsOrdering.INCOMPARABLE}
                assert ba is flips[ab]
                for c in outcomes[::3]:
                    if (ab is RsOrdering.BETTER
                            and rs_compare(prof, agent, b, c) is RsOrdering.BETTER):
                        assert rs_compare(prof, agent, a, c) is RsOrdering.BETTER


def test_strict_dominance_survives_lexicographic_completion():
    # with a strict house order, the house-primary lexicographic order is a
    # completion of the set extension: strict RS dominance must persist
    from tep.generators import random_predominant_profile
    from tep.predominant import lex_compare

    outcomes = [Outcome(h, t) for h in range(4) for t in range(4)]
    for seed in range(6):
        pred = random_predominant_profile(4, "house", 0.5, 50 + seed)
        prof = ResponsiveProfile(
            4, tuple(range(4)),
            tuple(tuple(frozenset([h]) for h in pred.primary[i]) for i in range(4)),
            pred.tiebreak,
        )
        for agent in range(4):
            for a in outcomes:
                for b in outcomes:
                    if rs_compare(prof, agent, a, b) is RsOrdering.BETTER:
                        assert lex_compare(pred, agent, a, b) > 0
    # and dually for strict tenant orders under the tenant-primary completion
    for seed in range(6):
        pred = random_predominant_profile(4, "tenant", 0.5, 70 + seed)
        prof = ResponsiveProfile(
            4, tuple(range(4)),
            pred.tiebreak,
            tuple(tuple(frozenset([t]) for t in pred.primary[i]) for i in range(4)),
        )
        for agent in range(4):
            for a in outcomes:
                for b in outcomes:
                    if rs_compare(prof, agent, a, b) is RsOrdering.BETTER:
                        assert lex_compare(pred, agent, a, b) > 0


# ---------------------------------------------------------------- RS axioms


def test_rs_ir_basics():
    prof = mutual_improvement_2()
    assert is_rs_ir(prof, identity_allocation(2))
    assert is_rs_ir(prof, Allocation((1, 0)))
    # a profile where agent 0 finds house 1 unacceptable
    prof2 = profile(2, [[[0]], [[1], [0]]], [[[0], [1]], [[1]]])
    assert not is_rs_ir(prof2, Allocation((1, 0)))


def test_rs_po_basics():
    assert is_rs_pareto_optimal(everyone_top(3), identity_allocation(3))
    assert not is_rs_pareto_optimal(mutual_improvement_2(), identity_allocation(2))
    assert is_rs_pareto_optimal(mutual_improvement_2(), Allocation((1, 0)))


def test_rs_core_basics():
    assert not is_rs_core_stable(mutual_improvement_2(), identity_allocation(2))
    assert is_rs_core_stable(mutual_improvement_2(), Allocation((1, 0)))
    assert is_rs_core_stable(everyone_top(3), identity_allocation(3))


# ---------------------------------------------------------------- matching


def test_rs_aa_universal_sets():
    n = 4
    full = [set(range(n)) for _ in range(n)]
    alloc = rs_aa(n, tuple(range(n)), full, full)
    assert alloc is not None


def test_rs_aa_isolates_vertex_after_symmetrization():
    # agent 0 accepts only house 1, but house 1's owner rejects tenant 0
    alloc = rs_aa(2, (0, 1), [{1}, {0, 1}], [{0, 1}, {1}])
    assert alloc is None
    # brute force agrees
    for p in permutations(range(2)):
        inv = {h: a for a, h in enumerate(p)}
        assert not (p[0] in {1} and p[1] in {0, 1}
                    and inv[0] in {0, 1} and inv[1] in {1})


def test_rs_aa_unique_swap():
    alloc = rs_aa(2, (0, 1), [{1}, {0}], [{1}, {0}])
    assert alloc == Allocation((1, 0))


def test_rs_aa_matches_exhaustive_search():
    from tep.rng import SplitMix64

    for seed in range(60):
        n = 1 + seed % 7
        rng = SplitMix64(900 + seed)
        houses = [set(h for h in range(n) if rng.random() < 0.5) for _ in range(n)]
        tenants = [set(t for t in range(n) if rng.random() < 0.5) for _ in range(n)]
        got = rs_aa(n, tuple(range(n)), houses, tenants)
        brute = None
        for p in permutations(range(n)):
            inv = [0] * n
            for a, h in enumerate(p):
                inv[h] = a
            if all(p[i] in houses[i] and inv[i] in tenants[i] for i in range(n)):
                brute = p
                break
        assert (got is None) == (brute is None)
        if got is not None:
            inv = got.inverse
            assert all(got[i] in houses[i] and inv[i] in tenants[i] for i in range(n))


# ---------------------------------------------------------------- refinement


def test_pra_everyone_top_returns_identity():
    result = pra_rs(everyone_top(4))
    assert result.allocation == identity_allocation(4)


def test_pra_mutual_improvement_returns_swap():
    result = pra_rs(mutual_improvement_2())
    assert result.allocation == Allocation((1, 0))
    # the swap is the unique RS-IR + RS-PO allocation here
    prof = mutual_improvement_2()
    winners = [a for a in (identity_allocation(2), Allocation((1, 0)))
               if is_rs_ir(prof, a) and is_rs_pareto_optimal(prof, a)]
    assert winners == [Allocation((1, 0))]


def test_pra_rejects_unknown_policy():
    with pytest.raises(ValueError):
        pra_rs(everyone_top(2), order="sideways")


def test_pra_outputs_rs_ir_and_rs_po_under_all_policies():
    for seed in range(30):
        n = 1 + seed % 7
        prof = random_responsive_profile(n, 0.6, 0.3, 400 + seed)
        for order, s in (("round-robin", None), ("reverse", None), ("random", seed)):
            result = pra_rs(prof, order=order, seed=s)
            assert is_rs_ir(prof, result.allocation)
            assert is_rs_pareto_optimal(prof, result.allocation)


def test_pra_call_count_and_saturation_permanence():
    for seed in range(12):
        n = 2 + seed % 6
        prof = random_responsive_profile(n, 0.7, 0.3, 500 + seed)
        hcls, tcls = acceptable_component_classes(prof)
        total = sum(map(len, hcls)) + sum(map(len, tcls))
        result = pra_rs(prof)
        assert result.rs_aa_calls <= total
        sets_h = [set().union(*hcls[i][:result.house_kept[i]]) for i in range(n)]
        sets_t = [set().union(*tcls[i][:result.tenant_kept[i]]) for i in range(n)]
        # every pair ended saturated: re-dropping its worst class must stay
        # infeasible at termination
        for i in range(n):
            trial = [set(s) for s in sets_h]
            trial[i] = trial[i] - hcls[i][result.house_kept[i] - 1]
            assert rs_aa(n, prof.endowment, trial, sets_t) is None
            trial_t = [set(s) for s in sets_t]
            trial_t[i] = trial_t[i] - tcls[i][result.tenant_kept[i] - 1]
            assert rs_aa(n, prof.endowment, sets_h, trial_t) is None


def test_pra_prunes_items_below_own_class():
    # a listed house strictly below the own house never survives refinement
    prof = profile(3,
                   [[[1], [0], [2]], [[1]], [[2]]],
                   [[[0, 1, 2]], [[1]], [[2]]])
    hcls, _ = acceptable_component_classes(prof)
    assert hcls[0] == (frozenset({1}), frozenset({0}))
    result = pra_rs(prof)
    assert is_rs_ir(prof, result.allocation)


def test_profile_validation():
    with pytest.raises(ValueError):
        profile(2, [[[1]], [[1], [0]]], [[[0], [1]], [[1]]])  # own house missing
    with pytest.raises(ValueError):
        profile(2, [[[0], [0]], [[1]]], [[[0]], [[1]]])  # duplicate item
    with pytest.raises(ValueError):
        profile(2, [[[0]], [[1]]], [[[0]], [[0]]])  # self missing
