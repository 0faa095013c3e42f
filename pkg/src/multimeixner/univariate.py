"""One-variable Meixner and Krawtchouk polynomials, evaluated exactly.

These are the classical terminating Gauss hypergeometric sums; they feed
the closed-form factorizations of the two-variable polynomials.  All
evaluation is exact rational term accumulation with iterative term
ratios; no gamma functions, no floats.
"""

from __future__ import annotations

from fractions import Fraction

from .numerics import as_rational


def _hyp2f1_terminating(n: int, x, denom_param, z) -> Fraction:
    """Sum_{j=0..n} (-n)_j (-x)_j / ((denom)_j j!) z^j via term ratios.

    Stops early once a numerator factor kills all remaining terms; raises
    if a denominator factor vanishes while terms are still alive.
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    total = Fraction(1)
    term = Fraction(1)
    for j in range(n):
        num = (-n + j) * (-x + j) * z
        if num == 0:
            break
        den = denom_param + j
        if den == 0:
            raise ZeroDivisionError(
                f"vanishing Pochhammer factor in denominator at j={j + 1}"
            )
        term = term * num / (den * (j + 1))
        total += term
    return total


def meixner(n: int, x, delta, c) -> Fraction:
    """Meixner polynomial M_n(x; delta; c) as a terminating 2F1 at 1 - 1/c."""
    x = as_rational(x)
    delta = as_rational(delta)
    c = as_rational(c)
    if c == 0:
        raise ZeroDivisionError("c must be nonzero")
    z = 1 - 1 / c
    return _hyp2f1_terminating(n, x, delta, z)


def monic_meixner(n: int, x, delta, c) -> Fraction:
    """Monic Meixner polynomial m_n(x) built from its three-term recurrence.

    Linked to meixner() by M_n(x; delta; c) = ((c-1)/c)^n / (delta)_n * m_n(x).
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    x = as_rational(x)
    delta = as_rational(delta)
    c = as_rational(c)
    if c == 1:
        raise ZeroDivisionError("recurrence coefficients are singular at c = 1")
    prev = Fraction(0)  # m_{-1}
    cur = Fraction(1)  # m_0
    for j in range(n):
        diag = (j + (j + delta) * c) / (1 - c)
        sub = j * (j + delta - 1) * c / (1 - c) ** 2
        cur, prev = (x - diag) * cur - sub * prev, cur
    return cur


def krawtchouk(n: int, x, p, N: int) -> Fraction:
    """Krawtchouk polynomial K_n(x; p; N) as a terminating 2F1 at 1/p.

    Requires n <= N so the (-N)_j factors stay nonzero across the needed
    range; x may be any rational (the sum is polynomial in x).
    """
    if N < 0:
        raise ValueError("N must be a non-negative integer")
    if n > N:
        raise ValueError(f"degree n={n} exceeds N={N}: denominator Pochhammer vanishes")
    x = as_rational(x)
    p = as_rational(p)
    if p == 0:
        raise ZeroDivisionError("p must be nonzero")
    return _hyp2f1_terminating(n, x, Fraction(-N), 1 / p)
