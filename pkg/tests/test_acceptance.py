"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are collected in
the terminal summary.  ``python tests/test_acceptance.py`` prints them directly.
"""

import math
import random
import time
from fractions import Fraction

from ctp_outerplanar import RoadMap, check_levels, fixture, opt_cost, simulate, validate
from ctp_outerplanar.certificate import (build_system, construct_y, g_of_k, j_search, max_i_for_k,
                                         verify_certificate)
from ctp_outerplanar.graph import is_unbalanced
from ctp_outerplanar.instances import (admissible_configurations, exhaustive_worst_ratio, gen_shell,
                                       gen_weighted_family, gen_westphal, maximal_feasible_subsets,
                                       minimax_ratio, random_outerplanar, sequences, shell_adversary,
                                       shell_ratio)
from ctp_outerplanar.strategies import (BudgetSequence, ExpBalancing, decompose_wrapper, doubling,
                                        exp_balancing_any, reposition)

try:
    from conftest import record
except ImportError:  # run as a script
    def record(n, ok, detail):
        pass


def _report(n, ok, detail):
    record(n, ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def _run_exp(rm):
    strat = ExpBalancing(rm.graph, rm.embedding, rm.source, rm.target)
    return simulate(strat, rm)


def _criterion2_corpus():
    """Shell maps with every feasible subset of target edges, then seeded random maps."""
    for n in range(2, 7):
        sh = gen_shell(n)
        for c in admissible_configurations(sh.graph, sh.source, sh.target, sh.universe, None):
            yield sh.roadmap.with_blocked(c)
    for seed in range(1000):
        rng = random.Random(seed)
        n = rng.randint(3, 12)
        g, emb = random_outerplanar(n, seed, "unit")
        t = f"v{rng.randint(1, n - 1)}"
        edges = sorted(g.edges)
        universe = rng.sample(edges, min(8, len(edges)))
        for c in maximal_feasible_subsets(g, "v0", t, universe):
            yield RoadMap(g, emb, "v0", t, c)


_CORPUS_CACHE = []


def _corpus_results():
    if not _CORPUS_CACHE:
        for rm in _criterion2_corpus():
            _CORPUS_CACHE.append((rm, _run_exp(rm)))
    return _CORPUS_CACHE


def test_criterion_1_figure_replays():
    t0 = time.perf_counter()
    f5 = fixture("fig5")
    r5 = _run_exp(f5.roadmap)
    d5 = opt_cost(f5.roadmap)
    f6 = fixture("fig6")
    r6 = _run_exp(f6.roadmap)
    d6 = opt_cost(f6.roadmap)
    elapsed = time.perf_counter() - t0
    fig5_ok = r5.traversed == 4 and d5 == 2
    # The reference walk for fig6 costs 22; other tie-breaks only need the 9x bound.
    fig6_exact = r6.traversed == 22
    fig6_ok = d6 == 6 and r6.reached and (fig6_exact or r6.traversed <= 9 * d6)
    ok = fig5_ok and fig6_ok and elapsed < 1
    note = "" if fig6_exact else " (fig6 divergence from 22, fallback bound holds)"
    _report(1, ok, f"fig5 T={r5.traversed} d_opt={d5}; fig6 T={r6.traversed} d_opt={d6}{note}; "
                   f"{elapsed:.2f}s")
    assert ok


def test_criterion_2_ratio_sweep():
    t0 = time.perf_counter()
    worst = Fraction(0)
    violations = 0
    runs = _corpus_results()
    for rm, res in runs:
        if not res.reached:
            violations += 1
            continue
        ratio = res.traversed / opt_cost(rm)
        worst = max(worst, ratio)
        if ratio > 9:
            violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < 600
    _report(2, ok, f"{len(runs)} runs, {violations} violations, worst ratio {worst}; {elapsed:.1f}s")
    assert ok


def test_criterion_3_level_instrumentation():
    runs = _corpus_results()
    failed = sum(1 for rm, res in runs if not check_levels(res.trace, rm).ok)
    ok = failed == 0
    _report(3, ok, f"{len(runs) - failed}/{len(runs)} traces pass the level checks")
    assert ok


def test_criterion_4_reposition_baseline():
    t0 = time.perf_counter()
    eps = Fraction(1, 1000)
    got = {}
    for k in range(1, 5):
        ratio, _ = exhaustive_worst_ratio(reposition, gen_westphal(k, eps))
        got[k] = ratio
    elapsed = time.perf_counter() - t0
    exact = all(got[k] == (2 * k + 1 + eps) / (1 + eps) for k in got)
    close = all(abs(got[k] - (2 * k + 1)) <= Fraction(5, 1000) * (2 * k + 1) for k in got)
    ok = exact and close and elapsed < 60
    _report(4, ok, "ratios " + ", ".join(f"k={k}: {v}" for k, v in got.items()) + f"; {elapsed:.2f}s")
    assert ok


def test_criterion_5_lower_bound_evidence():
    t0 = time.perf_counter()
    j = 12
    inst = gen_shell(2 ** (j - 1) + 2)
    rm = inst.roadmap
    strat = BudgetSequence(rm.graph, rm.embedding, rm.source, rm.target, doubling())
    res = simulate(strat, rm, adversary=shell_adversary(inst, release=j))
    realized = res.traversed / opt_cost(res.roadmap)
    closed = Fraction(2 ** (j + 1) + 2 ** (j - 2), 2 ** (j - 2) + 2)
    prong_a = res.reached and realized == closed == shell_ratio([2 ** i for i in range(j + 1)], j) \
        and realized >= Fraction(89, 10)
    certs = {}
    for e in ("1/20", "1/10", "1/4", "1/2"):
        eps = Fraction(e)
        choice = j_search(eps)
        cert = construct_y(choice.j, eps, expected_clamps=None)
        certs[e] = (choice.j, verify_certificate(build_system(choice.j, eps), cert))
    prong_b = all(v for _, v in certs.values())
    elapsed = time.perf_counter() - t0
    ok = prong_a and prong_b and elapsed < 60
    _report(5, ok, f"doubling vs shell adversary ratio {realized} (~{float(realized):.4f}); certificates "
                   + ", ".join(f"eps={e}: j={jj} {'ok' if v else 'bad'}" for e, (jj, v) in certs.items())
                   + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_6_weighted_family_base():
    t0 = time.perf_counter()
    h1 = minimax_ratio(gen_weighted_family(1, Fraction(1, 100)))
    h2 = gen_weighted_family(2, Fraction(1, 100))
    shape = (len(h2.graph.vertices), len(h2.graph.edges), h2.k)
    valid = not validate(h2.graph, h2.embedding) and is_unbalanced(h2.graph, h2.embedding, "s", "t")
    seq_ok = all(sequences(i).k <= math.factorial(i + 1) ** 2 for i in range(1, 7))
    elapsed = time.perf_counter() - t0
    ok = h1 == Fraction(200, 101) and shape == (14, 25, 12) and valid and seq_ok and elapsed < 60
    _report(6, ok, f"H1 minimax {h1}; H2 (vertices, edges, k) = {shape}, valid={valid}; "
                   f"k_i bound {'holds' if seq_ok else 'fails'}; {elapsed:.2f}s")
    assert ok


def _w_bisect(x):
    lo, hi = 0.0, max(1.0, x)
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid * math.exp(mid) < x:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def test_criterion_7_g_numerics():
    g1 = g_of_k(1)
    ge2 = g_of_k(math.e ** 2)
    oracle = math.exp(_w_bisect(1.0)) - 1
    below_ln = all(g_of_k(2 ** n) <= math.log(2 ** n) for n in range(1, 41))
    flip = max_i_for_k(575) == 2 and max_i_for_k(576) == 3
    k = 10 ** 6
    lhs = math.log(k) / math.log(math.log(k))
    ok = g1 == 0 and abs(ge2 - oracle) <= 1e-9 and below_ln and flip
    _report(7, ok, f"g(1)={g1}; g(e^2)={ge2:.12g} vs {oracle:.12g}; g <= ln k on 2^n: {below_ln}; "
                   f"i flips at 576: {flip}; k=1e6: ln k/ln ln k={lhs:.6g}, g={g_of_k(k):.6g} (reported only)")
    assert ok


def test_criterion_8_oracle_consistency():
    eps = Fraction(1, 100)
    cases = [gen_westphal(1, eps), gen_weighted_family(1, eps)] + [gen_shell(n) for n in range(2, 5)]
    strategies = {"expbalancing": decompose_wrapper(exp_balancing_any), "reposition": reposition}
    rows = []
    ok = True
    for inst in cases:
        mm = minimax_ratio(inst)
        for name, factory in strategies.items():
            if name == "expbalancing" and validate(inst.graph, inst.embedding):
                continue
            worst, _ = exhaustive_worst_ratio(factory, inst)
            ok &= worst >= mm
            rows.append(f"{inst.name}/{name} {worst}>={mm}")
    w1 = minimax_ratio(gen_westphal(1, eps))
    ok &= w1 == (3 + eps) / (1 + eps)
    _report(8, ok, f"westphal k=1 minimax {w1}; " + "; ".join(rows))
    assert ok


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
