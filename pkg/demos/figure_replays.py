"""
Replaying the bundled figure instances
======================================

Runs the side-balancing strategy on the three bundled road maps and prints
the walk, the cost and the automaton states it passed through.
"""

from ctp_outerplanar import check_levels, fixture, opt_cost, simulate
from ctp_outerplanar.strategies import decompose_wrapper, exp_balancing_any

for name in ("fig5", "fig6", "fig3"):
    inst = fixture(name)
    rm = inst.roadmap
    strat = decompose_wrapper(exp_balancing_any)(rm.graph, rm.embedding, rm.source, rm.target)
    res = simulate(strat, rm)
    d = opt_cost(rm)
    print(f"{name}: traversed {res.traversed}, optimum {d}, ratio {res.traversed / d}")
    print("  walk:", " ".join(res.walk))
    marks = [ev.get("state") or ev.get("kind") for ev in res.annotations()]
    print("  states:", " ".join(marks))
    print("  level checks ok:", check_levels(res.trace, rm).ok)
