"""Harmonic tails, the alternating tail-square series, and accelerated sums.

The central quantity is the tail

    a_n = ln2 - (1/(n+1) + ... + 1/(2n)),

which equals both the alternating tail sum_{k>=2n+1} (-1)^(k-1)/k and the
integral of x^(2n)/(1+x) over [0,1].  All three routes are implemented and
cross-validated; the harmonic route keeps its rational part exact so that
the only rounding comes from the single ln2 subtraction.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from mpmath import mpf, workprec

from . import accel
from .errors import PreconditionError
from .numeric import BasisConstant, HPReal, constant_value
from .quadrature import Integrand, TanhSinh, integrate


class TailRoute(Enum):
    HARMONIC = "harmonic"
    ALT_TAIL = "alt_tail"
    INTEGRAL = "integral"


@dataclass(frozen=True)
class TailTerm:
    n: int
    value: HPReal
    route: TailRoute
    # absolute bound on |value - a_n| where the route has one (None for
    # HARMONIC, whose only error is the final rounding)
    error_bound: Optional[HPReal] = None


@dataclass(frozen=True)
class Direct:
    terms: int


@dataclass(frozen=True)
class Euler:
    terms: int


@dataclass(frozen=True)
class Crz:
    terms: int


AccelMethod = Union[Direct, Euler, Crz]


@dataclass(frozen=True)
class SeriesResult:
    value: HPReal
    terms_used: int
    error_bound: Optional[HPReal] = None


# Truncation point of the explicit alternating-tail route.  This route exists
# for cross-validation, not precision: its remainder bound 1/(M+1) is attached
# to the result instead of being driven below the working precision.
ALT_TAIL_EXTRA_TERMS = 20_000


@lru_cache(maxsize=512)
def harmonic_tail_fraction(n):
    """Exact rational sum 1/(n+1) + ... + 1/(2n)."""
    total = Fraction(0)
    for k in range(n + 1, 2 * n + 1):
        total += Fraction(1, k)
    return total


def tail_integrand(n):
    """The integral route's integrand x^(2n)/(1+x) on [0, 1]."""
    e = 2 * n
    return Integrand(
        id=f"tail_integral_n{n}",
        dimension=1,
        evaluator=lambda x: x**e / (1 + x),
        domain=(0, 1),
    )


def tail(n, route, p, scheme=None):
    """Compute a_n by the requested route at precision p."""
    if n < 1:
        raise ValueError("tail index must be >= 1")
    g = p.guarded
    if route is TailRoute.HARMONIC:
        frac = harmonic_tail_fraction(n)
        with workprec(g):
            v = constant_value(BasisConstant.LN2, g) - mpf(frac.numerator) / frac.denominator
        return TailTerm(n, HPReal.from_raw(v, p), route)
    if route is TailRoute.ALT_TAIL:
        m = 2 * n + ALT_TAIL_EXTRA_TERMS
        with workprec(g):
            # terms pair up as 1/k - 1/(k+1) = 1/(k(k+1)), k odd
            s = mpf(0)
            k = 2 * n + 1
            while k + 1 <= m:
                s += mpf(1) / (k * (k + 1))
                k += 2
            if k <= m:  # odd leftover term
                s += mpf(1) / k
            bound = mpf(1) / (m + 1)
        return TailTerm(n, HPReal.from_raw(s, p), route, HPReal.from_raw(bound, p))
    if route is TailRoute.INTEGRAL:
        q = integrate(tail_integrand(n), scheme or TanhSinh(), p)
        return TailTerm(n, q.value, route, q.error_estimate)
    raise ValueError(f"unknown tail route {route!r}")


def _tail_values(count, g):
    """a_1 .. a_count at g working bits, via the exact harmonic route."""
    ln2 = constant_value(BasisConstant.LN2, g)
    out = []
    with workprec(g):
        for n in range(1, count + 1):
            frac = harmonic_tail_fraction(n)
            out.append(ln2 - mpf(frac.numerator) / frac.denominator)
    return out


def sigma_partial(N, p):
    """Partial sum  sum_{n=1}^{N} (-1)^n a_n^2  with its remainder bound.

    Consecutive partials bracket the full sum; the bound is a_{N+1}^2.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    g = p.guarded
    vals = _tail_values(N + 1, g)
    with workprec(g):
        s = mpf(0)
        sign = -1
        for n in range(1, N + 1):
            s += sign * vals[n - 1] ** 2
            sign = -sign
        bound = vals[N] ** 2
    return SeriesResult(HPReal.from_raw(s, p), N, HPReal.from_raw(bound, p))


def _scan_coefficients(coeff, count):
    """Evaluate and check positivity + (non-strict) monotone decrease.

    Coefficient callbacks may return either raw mpf values or HPReal.
    """
    vals = []
    for k in range(count):
        v = coeff(k)
        vals.append(v.value if isinstance(v, HPReal) else v)
    for k, v in enumerate(vals):
        if not v > 0:
            raise PreconditionError(f"coefficient {k} is not positive ({v})")
        if k and v > vals[k - 1]:
            raise PreconditionError(f"coefficients increase at index {k}")
    return vals


def sum_alternating(coeffs, m, p):
    """Sum  sum_{k>=0} (-1)^k coeffs(k)  by the chosen method.

    DIRECT attaches the alternating-series remainder bound.  EULER and CRZ
    return accelerated values without a computed bound; CRZ additionally
    assumes the coefficients are totally monotone (a moment sequence), which
    is documented rather than checked -- the scan only covers positivity and
    decrease over the terms actually used.
    """
    terms = m.terms
    if terms < 1:
        raise ValueError("method needs terms >= 1")
    g = p.guarded
    if isinstance(m, Direct):
        with workprec(g):
            vals = _scan_coefficients(coeffs, terms + 1)
            s, bound = accel.direct_sum(lambda k: vals[k], terms)
        return SeriesResult(HPReal.from_raw(s, p), terms, HPReal.from_raw(bound, p))
    if isinstance(m, Euler):
        # the difference table cancels ~1 bit per column; widen the guard
        with workprec(g + terms):
            vals = _scan_coefficients(coeffs, terms)
            s = accel.euler_sum(lambda k: vals[k], terms)
        return SeriesResult(HPReal.from_raw(s, p), terms)
    if isinstance(m, Crz):
        with workprec(g + 16):
            vals = _scan_coefficients(coeffs, terms)
            s = accel.crz_sum(lambda k: vals[k], terms)
        return SeriesResult(HPReal.from_raw(s, p), terms)
    raise ValueError(f"unknown acceleration method {m!r}")


def sigma_series(p, method=None):
    """The full alternating tail-square sum  sum_{n>=1} (-1)^n a_n^2.

    a_{k+1}^2 is a moment sequence (a_n is itself a moment integral of
    x^(2n)/(1+x)), so CRZ converges geometrically; 30 terms already give
    ~28 correct digits.  Returns the (negative) sum itself.
    """
    method = method or Crz(30)
    g = p.guarded
    vals = _tail_values(method.terms + 1, g)
    with workprec(g):
        sq = [v * v for v in vals]  # sq[k] = a_{k+1}^2
    result = sum_alternating(lambda k: sq[k], method, p)
    with workprec(g):
        v = -result.value.value
    return SeriesResult(HPReal.from_raw(v, p), result.terms_used, result.error_bound)


def ln2_direct_partial(terms, p):
    """Partial sum of the alternating harmonic series with its remainder bound.

    Far too slow to *compute* ln2 with -- kept as the bracketing certificate
    that the accelerated constant agrees with the defining series.
    """
    g = p.guarded
    with workprec(g):
        s = mpf(0)
        k = 1
        while k + 1 <= terms:
            s += mpf(1) / (k * (k + 1))
            k += 2
        if k <= terms:
            s += mpf(1) / k
        bound = mpf(1) / (terms + 1)
    return SeriesResult(HPReal.from_raw(s, p), terms, HPReal.from_raw(bound, p))


def ln1pt_over_t(p, terms=None):
    """The dilogarithm-at-minus-one value  sum (-1)^(n-1)/n^2  = int_0^1 ln(1+t)/t dt.

    Accelerated series route; the quadrature route is exposed separately via
    `ln1pt_integrand` so the two can be cross-checked.
    """
    n = terms or accel.crz_terms_for_bits(p.guarded + 16)
    result = sum_alternating(lambda k: mpf(1) / (k + 1) ** 2, Crz(n), p)
    return result.value


def ln1pt_integrand():
    """ln(1+t)/t on [0, 1]; the t -> 0 endpoint is removable with limit 1."""
    from mpmath import log1p

    def f(t):
        if t == 0:
            return mpf(1)
        return log1p(t) / t

    return Integrand(id="ln1p_t_over_t", dimension=1, evaluator=f, domain=(0, 1))
