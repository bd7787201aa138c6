import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctp_outerplanar import RoadMap, ekey, opt_cost, simulate, validate
from ctp_outerplanar.graph import is_unbalanced
from ctp_outerplanar.instances import (NotUnbalanced, TooLarge, TooManyConfigurations, admissible_configurations,
                                       gen_shell, gen_weighted_family, gen_westphal, maximal_feasible_subsets,
                                       minimax_ratio, random_outerplanar, sequences, shell_adversary,
                                       shell_ratio, transform_t)
from ctp_outerplanar.strategies import BudgetSequence, doubling


def test_westphal_shape():
    inst = gen_westphal(3, Fraction(1, 10))
    assert len(inst.graph.vertices) == 6 and len(inst.graph.edges) == 8
    assert inst.k == 3 and len(inst.universe) == 4
    assert all(inst.graph.weight(*e) == Fraction(1, 10) for e in inst.universe)
    with pytest.raises(ValueError):
        gen_westphal(0, "1/10")
    with pytest.raises(ValueError):
        gen_westphal(1, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_shell_shape(n):
    inst = gen_shell(n)
    assert len(inst.graph.vertices) == 2 * n
    assert len(inst.graph.edges) == 2 * n + 2 * n - 4
    assert validate(inst.graph, inst.embedding) == []
    assert not inst.graph.has_edge("v0", f"v{n}")
    assert len(inst.universe) == 2 * n - 2 and inst.k == 2 * n - 3


def test_admissible_configurations_order_and_guard():
    inst = gen_shell(3)
    configs = list(admissible_configurations(inst.graph, inst.source, inst.target, inst.universe, 1))
    assert configs[0] == frozenset() and len(configs) == 1 + len(inst.universe)
    big = gen_shell(14)
    with pytest.raises(TooManyConfigurations):
        list(admissible_configurations(big.graph, big.source, big.target, big.universe, None))


def test_maximal_subsets_leave_one_target_edge():
    inst = gen_shell(3)
    subsets = maximal_feasible_subsets(inst.graph, inst.source, inst.target, inst.universe)
    assert len(subsets) == len(inst.universe)
    assert all(len(c) == len(inst.universe) - 1 for c in subsets)


def brute_minimax_westphal1(eps):
    """Hand game tree on the 4-cycle: block the first t-edge seen, open the other.

    The traveller walks s-v1 (1), back (1), s-v2 (1) and v2-t (eps).
    """
    return (1 + 1 + 1 + eps) / (1 + eps)


def test_minimax_values():
    eps = Fraction(1, 100)
    assert minimax_ratio(gen_westphal(1, eps)) == brute_minimax_westphal1(eps) == Fraction(301, 101)
    assert minimax_ratio(gen_weighted_family(1, eps)) == Fraction(200, 101)
    assert [minimax_ratio(gen_shell(n)) for n in range(2, 6)] == [2, 3, Fraction(7, 2), 4]
    with pytest.raises(TooLarge):
        minimax_ratio(gen_shell(11))


@pytest.mark.parametrize("j", [1, 2, 3, 4, 5])
def test_shell_adversary_matches_closed_form(j):
    xs = [2 ** i for i in range(j + 2)]
    inst = gen_shell(2 ** (j - 1) + 2)
    rm = inst.roadmap
    res = simulate(BudgetSequence(rm.graph, rm.embedding, rm.source, rm.target, doubling()), rm,
                   adversary=shell_adversary(inst, release=j))
    assert res.reached
    assert res.traversed / opt_cost(res.roadmap) == shell_ratio(xs, j)


def test_shell_adversary_keeps_target_reachable():
    inst = gen_shell(5)
    rm = inst.roadmap
    res = simulate(BudgetSequence(rm.graph, rm.embedding, rm.source, rm.target, doubling()), rm,
                   adversary=shell_adversary(inst))
    assert res.reached
    assert len(res.roadmap.blocked) == inst.k


def test_sequences_frozen():
    assert [sequences(i).k for i in range(1, 7)] == [1, 12, 156, 3140, 94230, 3957702]
    assert [sequences(i).S for i in range(1, 5)] == [2, 6, 24, 120]
    assert [sequences(i).N for i in range(1, 5)] == [2, 6, 12, 20]
    assert sequences(3, Fraction(1, 10)).r_eps == Fraction(39, 10)
    for i in range(1, 7):
        assert sequences(i).k <= math.factorial(i + 1) ** 2


def test_weighted_family_two():
    inst = gen_weighted_family(2, Fraction(1, 100))
    assert (len(inst.graph.vertices), len(inst.graph.edges), inst.k, len(inst.universe)) == (14, 25, 12, 12)
    assert validate(inst.graph, inst.embedding) == []
    assert is_unbalanced(inst.graph, inst.embedding, "s", "t")
    assert inst.graph.weight("s", "t") == 6
    assert ekey("s", "t") not in inst.universe


def test_transform_requires_unbalanced_input():
    inst = gen_shell(3)
    with pytest.raises(NotUnbalanced):
        transform_t((inst.graph, inst.embedding, inst.source, inst.target), 2, 2, Fraction(1, 10))


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 16), st.integers(0, 10**6), st.sampled_from(["unit", "arbitrary", ("stretch", 5)]))
def test_random_outerplanar_properties(n, seed, mode):
    g, emb = random_outerplanar(n, seed, mode)
    assert validate(g, emb) == []
    assert len(g.vertices) == n and n <= len(g.edges) <= 2 * n - 3
    if mode == "unit":
        assert set(g.edges.values()) == {1}
    if isinstance(mode, tuple):
        assert max(g.edges.values()) / min(g.edges.values()) <= 5


@settings(max_examples=15, deadline=None)
@given(st.integers(3, 8), st.integers(0, 10**6))
def test_minimax_never_exceeds_exhaustive_reposition(n, seed):
    from ctp_outerplanar.instance import Instance
    from ctp_outerplanar.instances import exhaustive_worst_ratio
    from ctp_outerplanar.strategies import reposition
    g, emb = random_outerplanar(n, seed, "unit")
    t = f"v{n // 2}"
    universe = frozenset(sorted(g.edges)[:6])
    inst = Instance("r", RoadMap(g, emb, "v0", t), universe, 2)
    assert exhaustive_worst_ratio(reposition, inst)[0] >= minimax_ratio(inst)
