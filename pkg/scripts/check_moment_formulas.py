#!/usr/bin/env python3
"""Standalone sanity gate for the uniform-input moment formulas.

Evaluates the two concentration bounds on the fixed 1-D example
(delta_L(x) = 0.09x - 0.45, delta_U(x) = 0.03x + 0.40, X ~ U(-1, 1),
eps = 0.5) using nothing but the closed-form moments of a linear
function of independent uniform variables. The expected outputs are
gamma_min = 0.139 (Hoeffding) and 0.236 (Bernstein). If either number
is off, the variance / max-deviation formulas are wrong and the main
engine must not be trusted.

Deliberately does not import the diffcert package.
"""

import math
import sys


def moments(c, d, lo, hi):
    mu = c * (lo + hi) / 2.0 + d
    var = c * c * (hi - lo) ** 2 / 12.0
    max_dev = abs(c) * (hi - lo) / 2.0
    k = hi - lo
    range_norm = k * abs(c)
    return mu, var, max_dev, range_norm


def hoeffding_gamma_min(eps, mu_l, rn_l, mu_u, rn_u):
    # F_{dU}(eps) lower tail bound
    t_u = eps - mu_u
    f_du = 1.0 - math.exp(-2.0 * t_u**2 / rn_u**2) if t_u >= 0 else 0.0
    t_l = eps + mu_l
    f_ndl = 1.0 - math.exp(-2.0 * t_l**2 / rn_l**2) if t_l >= 0 else 0.0
    return f_du + f_ndl - 1.0


def bernstein_gamma_min(eps, mu_l, var_l, m_l, mu_u, var_u, m_u):
    t_u = eps - mu_u
    if t_u >= 0:
        f_du = 1.0 - math.exp(-(t_u**2) / (2.0 * var_u + 2.0 / 3.0 * m_u * t_u))
    else:
        f_du = 0.0
    t_l = eps + mu_l
    if t_l >= 0:
        f_ndl = 1.0 - math.exp(-(t_l**2) / (2.0 * var_l + 2.0 / 3.0 * m_l * t_l))
    else:
        f_ndl = 0.0
    return f_du + f_ndl - 1.0


def main():
    eps = 0.5
    mu_l, var_l, m_l, rn_l = moments(0.09, -0.45, -1.0, 1.0)
    mu_u, var_u, m_u, rn_u = moments(0.03, 0.40, -1.0, 1.0)

    g_hoeff = hoeffding_gamma_min(eps, mu_l, rn_l, mu_u, rn_u)
    g_bern = bernstein_gamma_min(eps, mu_l, var_l, m_l, mu_u, var_u, m_u)

    print(f"moments delta_L: mu={mu_l:.6f} var={var_l:.6f} max_dev={m_l:.6f}")
    print(f"moments delta_U: mu={mu_u:.6f} var={var_u:.6f} max_dev={m_u:.6f}")
    print(f"gamma_min (Hoeffding) = {g_hoeff:.6f}  expected 0.139")
    print(f"gamma_min (Bernstein) = {g_bern:.6f}  expected 0.236")

    ok = abs(g_hoeff - 0.139) <= 1e-3 and abs(g_bern - 0.236) <= 1e-3
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
