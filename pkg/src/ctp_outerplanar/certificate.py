"""Infeasibility certificates for budget sequences on shell graphs, and the g(k) bound.

A budget sequence x_1..x_j (each x_i >= 1) keeping the traveller below
ratio 9 - 2*eps on every shell road map satisfies ``M x <= b`` with
``b = (8 - 2 eps) 1``.  Substituting ``x = x' + 1`` gives ``M x' <= b'`` with
``x' >= 0``.  A vector ``y >= 0`` with ``M^T y >= 0`` and ``b'^T y < 0``
proves that no such sequence exists.
"""

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .instance import rational

__all__ = [
    "InvalidJ",
    "DimensionMismatch",
    "NonConvergence",
    "TooSmall",
    "FarkasSystem",
    "Certificate",
    "JChoice",
    "build_system",
    "recurrence",
    "construct_y",
    "choose_j_seed",
    "choose_j",
    "j_search",
    "verify_certificate",
    "certificate_json",
    "lambert_w",
    "g_of_k",
    "max_i_for_k",
    "EXPECTED_CLAMPS",
]

EXPECTED_CLAMPS = 11


class InvalidJ(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class NonConvergence(ArithmeticError):
    pass


class TooSmall(ValueError):
    pass


@dataclass(frozen=True)
class FarkasSystem:
    j: int
    eps: Fraction
    M: tuple
    b_prime: tuple

    def row_sums(self):
        return tuple(sum(row) for row in self.M)


@dataclass(frozen=True)
class Certificate:
    j: int
    eps: Fraction
    y_prime: tuple
    residual: tuple
    objective: Fraction
    clamped: int
    pattern_ok: bool


def build_system(j, eps):
    """Lower-triangular M (ones below the diagonal, -(3 - eps) on the subdiagonal) and b'."""
    eps = Fraction(eps)
    if j < 1:
        raise ValueError("j must be positive")
    sub = -(3 - eps)
    M = []
    for i in range(j):
        M.append(tuple(Fraction(1) if c < i - 1 or c == i else (sub if c == i - 1 else Fraction(0))
                       for c in range(j)))
    b = 8 - 2 * eps
    b_prime = tuple(b - sum(row) for row in M)
    return FarkasSystem(j, eps, tuple(M), b_prime)


def recurrence(n, eps):
    """u_0 .. u_{n-1} with u_0 = 1, u_1 = 3 - eps, u_{m+2} = (4 - eps)(u_{m+1} - u_m)."""
    eps = Fraction(eps)
    u = [Fraction(1), 3 - eps]
    while len(u) < n:
        u.append((4 - eps) * (u[-1] - u[-2]))
    return u[:n]


def _raw_y(j, eps):
    u = recurrence(j, eps)
    return [u[j - 1 - i] for i in range(j)]


def _leading_negatives(y):
    n = 0
    while n < len(y) and y[n] < 0:
        n += 1
    return n


def _pattern(y, clamps):
    return _leading_negatives(y) == clamps and all(v > 0 for v in y[clamps:])


def construct_y(j, eps, expected_clamps=EXPECTED_CLAMPS):
    """Certificate from the recurrence with the leading negative block set to zero.

    ``y_i = u_{j-i}``, so ``y_j = 1`` and ``y_{j-1} = 3 - eps``.  With
    `expected_clamps` set, a sign pattern other than that many negatives
    followed by positives raises :class:`InvalidJ`.  Pass None to clamp
    whatever leading negative block appears.
    """
    eps = Fraction(eps)
    y = _raw_y(j, eps)
    lead = _leading_negatives(y)
    pattern_ok = _pattern(y, EXPECTED_CLAMPS)
    if expected_clamps is not None and not _pattern(y, expected_clamps):
        raise InvalidJ(f"j={j}, eps={eps}: {lead} leading negatives, expected {expected_clamps}")
    yp = [Fraction(0)] * lead + [max(v, Fraction(0)) for v in y[lead:]]
    system = build_system(j, eps)
    residual = tuple(sum(system.M[r][c] * yp[r] for r in range(j)) for c in range(j))
    objective = sum(b * v for b, v in zip(system.b_prime, yp))
    return Certificate(j, eps, tuple(yp), residual, objective, lead, pattern_ok)


def choose_j_seed(eps):
    """Closed-form j with alpha (j - 11) - beta <= pi/2 < alpha (j - 10) - beta."""
    e = float(eps)
    if not 0 < e < 1:
        raise ValueError("eps must lie in (0, 1)")
    alpha = math.atan(math.sqrt(e / (4 - e)))
    beta = math.atan((2 - e) / math.sqrt(e * (4 - e)))
    return math.floor((math.pi / 2 + beta) / alpha) + 11


@dataclass(frozen=True)
class JChoice:
    seed: int
    j: int
    pattern_ok: bool


def j_search(eps):
    """Refine the closed-form seed by at most 2 using the exact sign pattern.

    Candidates are tried in the order seed, +1, -1, +2, -2.  The first one
    with exactly 11 leading negatives then positives wins.  Failing that,
    the first candidate whose clamped certificate verifies is returned with
    ``pattern_ok = False``.
    """
    eps = Fraction(eps)
    seed = choose_j_seed(eps)
    cands = [c for c in (seed, seed + 1, seed - 1, seed + 2, seed - 2) if c >= 12]
    for c in cands:
        if _pattern(_raw_y(c, eps), EXPECTED_CLAMPS):
            return JChoice(seed, c, True)
    for c in cands:
        cert = construct_y(c, eps, expected_clamps=None)
        if verify_certificate(build_system(c, eps), cert):
            return JChoice(seed, c, False)
    return JChoice(seed, seed, False)


def choose_j(eps):
    return j_search(eps).j


def verify_certificate(system, cert):
    """True iff y' >= 0, M^T y' >= 0 and b'^T y' < 0, all recomputed exactly."""
    j = system.j
    if len(cert.y_prime) != j:
        raise DimensionMismatch(f"system has dimension {j}, certificate {len(cert.y_prime)}")
    y = cert.y_prime
    if any(v < 0 for v in y):
        return False
    for c in range(j):
        if sum(system.M[r][c] * y[r] for r in range(j)) < 0:
            return False
    return sum(b * v for b, v in zip(system.b_prime, y)) < 0


def certificate_json(cert):
    return json.dumps({
        "j": cert.j,
        "eps": rational(cert.eps),
        "yPrime": [rational(v) for v in cert.y_prime],
        "objective": rational(cert.objective),
        "residualMin": rational(min(cert.residual)),
        "clamped": cert.clamped,
        "patternOk": cert.pattern_ok,
    }, indent=2) + "\n"


# -- Lambert W and g(k) --------------------------------------------------


def lambert_w(x, max_iter=100):
    """Principal branch of W for x >= 0 by damped Halley iteration.

    Converges to ``|w e^w - x| <= 1e-12 * max(1, x)``.
    """
    x = float(x)
    if x < 0 or math.isnan(x):
        raise ValueError("lambert_w needs x >= 0")
    if x == 0:
        return 0.0
    tol = 1e-12 * max(1.0, x)
    w = math.log1p(x) if x < 3 else math.log(x) - math.log(math.log(x))
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= tol:
            return w
        denom = ew * (w + 1) - (w + 2) * f / (2 * w + 2)
        step = f / denom
        nxt = w - step
        if nxt <= -1:
            nxt = (w - 1) / 2
        w = nxt
    if abs(w * math.exp(w) - x) <= tol:
        return w
    raise NonConvergence(f"lambert_w({x}) did not converge")


def g_of_k(k):
    """e^{W(ln k / 2)} - 1."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return math.exp(lambert_w(math.log(k) / 2)) - 1


def max_i_for_k(k):
    """Largest i with ((i + 1)!)^2 <= k."""
    if k < 4:
        raise TooSmall("k must be at least 4")
    i = 1
    while math.factorial(i + 2) ** 2 <= k:
        i += 1
    return i
