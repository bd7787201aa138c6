"""
Infeasibility certificates
==========================

For each eps, find the sequence length j at which no budget sequence can
stay below ratio 9 - 2 eps, and check the certificate exactly.
"""

from fractions import Fraction

from ctp_outerplanar.certificate import build_system, construct_y, j_search, verify_certificate

for eps in ("1/20", "1/10", "1/4", "1/2", "3/5"):
    eps = Fraction(eps)
    choice = j_search(eps)
    cert = construct_y(choice.j, eps, expected_clamps=None)
    ok = verify_certificate(build_system(choice.j, eps), cert)
    print(f"eps={eps}: seed {choice.seed}, j={choice.j}, clamped {cert.clamped}, "
          f"objective {float(cert.objective):.6g}, verified {ok}")
