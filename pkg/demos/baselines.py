"""
Strategies against the game value
=================================

Exhaustive worst cases of both strategies next to the adaptive game value
on small instances.
"""

from fractions import Fraction

from ctp_outerplanar import validate
from ctp_outerplanar.instances import (exhaustive_worst_ratio, gen_shell, gen_weighted_family, gen_westphal,
                                       minimax_ratio)
from ctp_outerplanar.strategies import decompose_wrapper, exp_balancing_any, reposition

eps = Fraction(1, 100)
cases = [gen_westphal(1, eps), gen_westphal(3, eps), gen_weighted_family(1, eps)]
cases += [gen_shell(n) for n in range(2, 6)]
print(f"{'instance':<12} {'game':>9} {'balancing':>10} {'reposition':>11}")
for inst in cases:
    game = minimax_ratio(inst)
    rep = exhaustive_worst_ratio(reposition, inst)[0]
    if validate(inst.graph, inst.embedding):
        bal = "-"
    else:
        bal = str(exhaustive_worst_ratio(decompose_wrapper(exp_balancing_any), inst)[0])
    print(f"{inst.name:<12} {str(game):>9} {bal:>10} {str(rep):>11}")
