"""
Doubling against the shell adversary
====================================

The adversary blocks every target edge the traveller sees during the first j
attempts and opens the next one.  The realized ratio climbs towards 9.
"""

from ctp_outerplanar import opt_cost, simulate
from ctp_outerplanar.instances import gen_shell, shell_adversary, shell_ratio
from ctp_outerplanar.strategies import BudgetSequence, doubling

for j in range(1, 11):
    inst = gen_shell(2 ** (j - 1) + 2)
    rm = inst.roadmap
    strat = BudgetSequence(rm.graph, rm.embedding, rm.source, rm.target, doubling())
    res = simulate(strat, rm, adversary=shell_adversary(inst, release=j))
    ratio = res.traversed / opt_cost(res.roadmap)
    closed = shell_ratio([2 ** i for i in range(j + 1)], j)
    print(f"j={j:2d}  ratio={str(ratio):>10}  ({float(ratio):.4f})  closed form agrees: {ratio == closed}")
