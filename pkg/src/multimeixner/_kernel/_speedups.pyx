# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled kernel: typed loops around the series product and the
terminating quadruple sum.  Denominators are cleared up front so the hot
loops run on plain big integers; results are rebuilt as exact rationals
once per output.  Must stay semantically identical to pure.py.
"""

from fractions import Fraction
from math import lcm


cdef _scaled_items(dict coeffs):
    cdef object denom = 1
    for c in coeffs.values():
        denom = lcm(denom, c.denominator)
    items = [
        (sum(e), e, c.numerator * (denom // c.denominator)) for e, c in coeffs.items()
    ]
    items.sort()
    return denom, items


cdef _scaled_list(list values):
    cdef object denom = 1
    for v in values:
        denom = lcm(denom, v.denominator)
    return denom, [v.numerator * (denom // v.denominator) for v in values]


def mul_trunc(dict a, dict b, int cutoff):
    if not a or not b:
        return {}
    da, a_items = _scaled_items(a)
    db, b_items = _scaled_items(b)
    cdef object scale = da * db
    cdef dict raw = {}
    cdef dict out = {}
    cdef int deg_a, deg_b, budget, g, j
    cdef tuple ea, eb, key
    cdef object ia, ib, acc, value
    for deg_a, ea, ia in a_items:
        budget = cutoff - deg_a
        if budget < 0:
            break
        g = len(ea)
        for deg_b, eb, ib in b_items:
            if deg_b > budget:
                break
            key = tuple([ea[j] + eb[j] for j in range(g)])
            acc = raw.get(key)
            raw[key] = ia * ib if acc is None else acc + ia * ib
    for key, value in raw.items():
        if value:
            out[key] = Fraction(value, scale)
    return out


def hyp_sum(int m, int n, int i, int k,
            list negm, list negn, list negi, list negk,
            list invbeta, list p11, list p21, list p12, list p22):
    dm, jm = _scaled_list(negm)
    dn, jn = _scaled_list(negn)
    di, ji = _scaled_list(negi)
    dk, jk = _scaled_list(negk)
    db, jb = _scaled_list(invbeta)
    d11, j11 = _scaled_list(p11)
    d21, j21 = _scaled_list(p21)
    d12, j12 = _scaled_list(p12)
    d22, j22 = _scaled_list(p22)
    cdef object total = 0
    cdef object outer, a
    cdef int mu, nu, rho, sigma, mu_max, rho_max, nu_max, sigma_max
    mu_max = m if m < i else i
    for mu in range(mu_max + 1):
        rho_max = n if n < i - mu else i - mu
        for rho in range(rho_max + 1):
            outer = ji[mu + rho] * j11[mu] * j12[rho]
            if not outer:
                continue
            nu_max = m - mu if m - mu < k else k
            for nu in range(nu_max + 1):
                a = outer * jm[mu + nu] * j21[nu]
                if not a:
                    continue
                sigma_max = n - rho if n - rho < k - nu else k - nu
                for sigma in range(sigma_max + 1):
                    total = total + (
                        a
                        * jn[rho + sigma]
                        * jk[nu + sigma]
                        * jb[mu + nu + rho + sigma]
                        * j22[sigma]
                    )
    return Fraction(total, dm * dn * di * dk * db * d11 * d21 * d12 * d22)
