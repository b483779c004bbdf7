"""Coefficients for the large-argument amplitude/phase form of J0 and J1.

Generated exactly from the Hankel symbols

    a_m(nu) = prod_{j=1..m} (4 nu^2 - (2j-1)^2) / (m! 8^m)

so that for x -> infinity

    J_nu(x) ~ sqrt(2/(pi x)) * (P_nu(x) cos(chi) - Q_nu(x) sin(chi)),
    chi = x - nu*pi/2 - pi/4,
    P_nu(x) = sum_k (-1)^k a_{2k}   x^{-2k},
    Q_nu(x) = sum_k (-1)^k a_{2k+1} x^{-(2k+1)}.

The series are asymptotic (divergent); evaluation must stop at the
smallest term. Eleven terms keep the truncation floor below 1e-12 for
x >= 12, which is where the callers switch away from the Taylor series.
"""

from fractions import Fraction


def _hankel_symbols(four_nu_sq, m_max):
    out = [Fraction(1)]
    for m in range(1, m_max + 1):
        out.append(out[-1] * Fraction(four_nu_sq - (2 * m - 1) ** 2, 8 * m))
    return out


def _pq(four_nu_sq, n_terms):
    a = _hankel_symbols(four_nu_sq, 2 * n_terms + 1)
    p = tuple(float((-1) ** k * a[2 * k]) for k in range(n_terms))
    q = tuple(float((-1) ** k * a[2 * k + 1]) for k in range(n_terms))
    return p, q


P0, Q0 = _pq(0, 11)
P1, Q1 = _pq(4, 11)

# Taylor/asymptotic crossover; both branches stay under ~1e-12 here.
SERIES_CUTOFF = 12.0
