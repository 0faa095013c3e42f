"""General-d extension: negative multinomial weight, generating-function
oracle, the d-direction raising recursion, and truncated orthogonality.

The raising recursion here is the d-variable analog of the bivariate one,

  R[b, n + e_j](x) = ( (|x|+b) R[b+1, n](x)
                       - sum_i u[i][j] x_i R[b+1, n](x - e_i) ) / b,

derived by the same normalization push-through; its wholesale agreement
with the generating function is the correctness gate.  Recurrence,
difference, duality, and addition checkers are deliberately bivariate-only.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from .errors import ModeError, NonConvergence
from .lorentz import PseudoRotation, require_generic
from .numerics import (
    ScalarMode,
    as_rational,
    coefficient,
    pochhammer,
    series_geom_pow,
    series_mul,
    solve_linear_system,
)
from .reports import EvalReport

SHELL_CAP = 400

MultiIndex = Tuple[int, ...]


def _as_multi_index(value: Sequence[int], d: int, what: str) -> MultiIndex:
    idx = tuple(int(v) for v in value)
    if len(idx) != d or any(v < 0 for v in idx):
        raise ValueError(f"{what} must be {d} non-negative integers, got {value!r}")
    return idx


class MeixnerSystemD:
    """A (beta, Lambda) bundle in d variables with derived c and u parameters."""

    def __init__(self, beta, lam: PseudoRotation, mode=ScalarMode.EXACT):
        require_generic(lam)
        beta = as_rational(beta)
        if beta <= 0:
            raise ValueError(f"beta must be positive, got {beta}")
        self.d = lam.d
        self.beta = beta
        self.lam = lam
        self.mode = ScalarMode(mode)

        e = lam.entries
        last = self.d
        corner = e[last][last]
        self.c = tuple((e[i][last] / corner) ** 2 for i in range(self.d))
        if not (all(ci > 0 for ci in self.c) and sum(self.c) < 1):
            raise ValueError("weight parameters escaped the unit simplex")
        self.u = tuple(
            tuple(e[i][j] * corner / (e[i][last] * e[last][j]) for j in range(self.d))
            for i in range(self.d)
        )

        self._gf_cache: Dict[MultiIndex, object] = {}
        self._raising_cache: Dict[Tuple, Fraction] = {}
        self._poly_cache: Dict[MultiIndex, Dict[MultiIndex, Fraction]] = {}

    def with_mode(self, mode) -> "MeixnerSystemD":
        return MeixnerSystemD(self.beta, self.lam, mode)

    def require_mode(self, mode: ScalarMode, what: str):
        if self.mode is not mode:
            raise ModeError(f"{what} requires {mode.value} mode, system is {self.mode.value}")

    def __repr__(self):
        return f"MeixnerSystemD(d={self.d}, beta={self.beta}, mode={self.mode.value})"


def weight_d(sys: MeixnerSystemD, x: Sequence[int]):
    """Negative multinomial mass at the lattice point x."""
    x = _as_multi_index(x, sys.d, "x")
    b = sys.beta
    total = sum(x)
    base = 1 - sum(sys.c)
    fact = math.prod(math.factorial(v) for v in x)
    if sys.mode is ScalarMode.EXACT:
        if b.denominator != 1:
            raise ModeError(f"exact weight needs integer beta, got {b}; use float mode")
        value = pochhammer(b, total) / fact * base ** int(b)
        for ci, xi in zip(sys.c, x):
            value *= ci**xi
        return value
    value = float(pochhammer(b, total) / fact) * float(base) ** float(b)
    for ci, xi in zip(sys.c, x):
        value *= float(ci) ** xi
    return value


def _gf_series_d(sys: MeixnerSystemD, x: MultiIndex, cutoff: int):
    cached = sys._gf_cache.get(x)
    if cached is not None and cached.cutoff >= cutoff:
        return cached
    product = series_geom_pow([1] * sys.d, -(sys.beta + sum(x)), cutoff)
    for i in range(sys.d):
        if x[i]:
            product = series_mul(product, series_geom_pow(sys.u[i], x[i], cutoff))
    sys._gf_cache[x] = product
    return product


def monic_eval_gf_d(sys: MeixnerSystemD, n: Sequence[int], x: Sequence[int]) -> Fraction:
    """Coefficient extraction from the (d+1)-factor generating product."""
    n = _as_multi_index(n, sys.d, "n")
    x = _as_multi_index(x, sys.d, "x")
    total = sum(n)
    series = _gf_series_d(sys, x, total)
    raw = coefficient(series, n)
    fact = math.prod(math.factorial(v) for v in n)
    return raw * fact / pochhammer(sys.beta, total)


def monic_eval_raising_d(sys: MeixnerSystemD, n: Sequence[int], x: Sequence[int]) -> Fraction:
    n = _as_multi_index(n, sys.d, "n")
    x = _as_multi_index(x, sys.d, "x")
    return _raising_value_d(sys, n, x, 0)


def _raising_value_d(sys: MeixnerSystemD, n: MultiIndex, x: MultiIndex, shift: int) -> Fraction:
    if not any(n):
        return Fraction(1)
    key = (n, x, shift)
    cached = sys._raising_cache.get(key)
    if cached is not None:
        return cached
    gamma = sys.beta + shift
    j = next(idx for idx, v in enumerate(n) if v)
    lower = n[:j] + (n[j] - 1,) + n[j + 1 :]
    acc = (sum(x) + gamma) * _raising_value_d(sys, lower, x, shift + 1)
    for i in range(sys.d):
        if x[i]:
            shifted = x[:i] + (x[i] - 1,) + x[i + 1 :]
            acc -= sys.u[i][j] * x[i] * _raising_value_d(sys, lower, shifted, shift + 1)
    value = acc / gamma
    sys._raising_cache[key] = value
    return value


def _simplex_lattice(total: int, d: int):
    if d == 1:
        for t in range(total + 1):
            yield (t,)
        return
    for first in range(total + 1):
        for rest in _simplex_lattice(total - first, d - 1):
            yield (first,) + rest


def monic_poly_coeffs_d(sys: MeixnerSystemD, n: Sequence[int]) -> Dict[MultiIndex, Fraction]:
    """Exact monomial coefficients of the degree-|n| polynomial in x."""
    n = _as_multi_index(n, sys.d, "n")
    cached = sys._poly_cache.get(n)
    if cached is not None:
        return cached
    deg = sum(n)
    nodes = sorted(_simplex_lattice(deg, sys.d))
    monomials = nodes
    rows = [
        [Fraction(math.prod(a**p for a, p in zip(node, mono))) for mono in monomials]
        for node in nodes
    ]
    rhs = [monic_eval_gf_d(sys, n, node) for node in nodes]
    solution = solve_linear_system(rows, rhs)
    coeffs = {mono: c for mono, c in zip(monomials, solution) if c}
    sys._poly_cache[n] = coeffs
    return coeffs


def _orthonormal_prefactor_d(sys: MeixnerSystemD, n: MultiIndex) -> float:
    total = sum(n)
    fact = math.prod(math.factorial(v) for v in n)
    scale = pochhammer(sys.beta, total) / fact
    last = sys.d
    geom = Fraction(1)
    for i in range(sys.d):
        geom *= sys.lam.entries[last][i] ** n[i]
    geom /= sys.lam.entries[last][last] ** total
    return (-1) ** total * math.sqrt(float(scale)) * float(geom)


def check_orthogonality_d(sys: MeixnerSystemD, degree_box: int, tol: float) -> EvalReport:
    """Gram matrix of the orthonormal family {|n| <= degree_box} against the
    identity, summed over growing cube surfaces until a full surface
    contributes less than tol/100."""
    sys.require_mode(ScalarMode.FLOAT, "check_orthogonality_d")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if degree_box < 0:
        raise ValueError("degree_box must be non-negative")
    exact_sys = MeixnerSystemD(sys.beta, sys.lam, ScalarMode.EXACT)
    degrees = sorted(
        n
        for total in range(degree_box + 1)
        for n in _simplex_lattice(total, sys.d)
        if sum(n) == total
    )
    prefs = {n: _orthonormal_prefactor_d(sys, n) for n in degrees}
    # flatten each polynomial to (monomial, prefactor * coeff) pairs for the hot loop
    polys = {
        n: [
            (mono, prefs[n] * float(c))
            for mono, c in monic_poly_coeffs_d(exact_sys, n).items()
        ]
        for n in degrees
    }

    bf = float(sys.beta)
    cf = [float(ci) for ci in sys.c]
    base = 1.0 - sum(cf)
    w: Dict[MultiIndex, float] = {}
    count = len(degrees)
    poly_list = [polys[n] for n in degrees]
    gram = [[0.0] * count for _ in range(count)]
    threshold = tol / 100.0
    # Points whose weight is this small cannot move any Gram entry or the
    # shell test at the working tolerance (polynomial growth of the values
    # is dwarfed by the geometric weight decay).
    negligible = threshold * 1e-10

    shell = 0
    while True:
        if shell > SHELL_CAP:
            raise NonConvergence(
                f"orthogonality sum did not settle within {SHELL_CAP} shells"
            )
        shell_max = 0.0
        for x in sorted(_cube_surface(shell, sys.d)):
            if not any(x):
                w[x] = base**bf
            else:
                i = next(idx for idx, v in enumerate(x) if v)
                prev = x[:i] + (x[i] - 1,) + x[i + 1 :]
                w[x] = w[prev] * (bf + sum(x) - 1) / x[i] * cf[i]
            wt = w[x]
            if wt < negligible:
                continue
            pow_table = []
            for v in x:
                vf = float(v)
                col = [1.0]
                for _ in range(degree_box):
                    col.append(col[-1] * vf)
                pow_table.append(col)
            values = []
            for terms in poly_list:
                acc = 0.0
                for mono, c in terms:
                    term = c
                    for axis, p in enumerate(mono):
                        if p:
                            term *= pow_table[axis][p]
                    acc += term
                values.append(acc)
            for a in range(count):
                va = wt * values[a]
                row = gram[a]
                for b in range(a, count):
                    contrib = va * values[b]
                    row[b] += contrib
                    mag = abs(contrib)
                    if mag > shell_max:
                        shell_max = mag
        if shell >= 1 and shell_max < threshold:
            break
        shell += 1

    max_disc = 0.0
    counter = None
    for a in range(count):
        for b in range(a, count):
            target = 1.0 if a == b else 0.0
            disc = abs(gram[a][b] - target)
            if disc > max_disc:
                max_disc = disc
            if disc > tol and counter is None:
                counter = (degrees[a], degrees[b])
    return EvalReport(
        identity="orthogonality-d",
        box={"d": sys.d, "max_total_degree": degree_box},
        mode=ScalarMode.FLOAT,
        max_abs_discrepancy=max_disc,
        counterexample=counter,
        tol=tol,
    )


def _cube_surface(shell: int, d: int):
    """Lattice points of [0, shell]^d with max coordinate exactly shell."""
    if shell == 0:
        yield (0,) * d
        return

    def rec(prefix, saw_max, remaining):
        if remaining == 0:
            if saw_max:
                yield tuple(prefix)
            return
        for v in range(shell + 1):
            prefix.append(v)
            yield from rec(prefix, saw_max or v == shell, remaining - 1)
            prefix.pop()

    yield from rec([], False, d)
