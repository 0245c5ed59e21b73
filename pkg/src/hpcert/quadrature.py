"""Deterministic 1D and tensor-2D quadrature with error estimates.

Two rules are provided.  Tanh-sinh (double-exponential) handles integrable
logarithmic endpoint singularities and is the default for every 1D check;
Gauss-Legendre is the building block for smooth integrands and the 2D tensor
rule.  Both report ``error_estimate = |T_k - T_{k-1}|`` for the final
refinement step and stop early once that difference falls below
``2^-(bits-8)``; reaching the refinement cap first raises
`NonconvergenceError`.

Node tables are cached per precision and are immutable once built, so
repeated integrations share the (comparatively expensive) table setup.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from mpmath import exp, isfinite, ldexp, mp, mpf, pi, workprec

from .errors import DomainError, NonconvergenceError
from .numeric import GUARD_BITS, HPReal

MIN_LEVEL, MAX_LEVEL = 3, 15
MIN_ORDER, MAX_ORDER = 2, 4096


@dataclass(frozen=True)
class PiMultiple:
    """An interval endpoint of the form (rational) * pi, e.g. pi/2."""

    coef: Fraction

    def resolve(self):
        c = Fraction(self.coef)
        return pi * c.numerator / c.denominator


def _endpoint_value(e):
    if isinstance(e, PiMultiple):
        return e.resolve()
    f = Fraction(e)
    return mpf(f.numerator) / f.denominator


@dataclass(frozen=True)
class Integrand:
    """A registered integrand over a finite interval or square.

    The evaluator is a pure function defined on the *open* domain; an
    endpoint whose singular flag is False must also evaluate finite at the
    closed endpoint (removable singularities must return their limit).
    """

    id: str
    dimension: int
    evaluator: Callable
    domain: tuple
    singular_left: bool = False
    singular_right: bool = False


@dataclass(frozen=True)
class TanhSinh:
    max_level: int = 12

    def __post_init__(self):
        if not MIN_LEVEL <= self.max_level <= MAX_LEVEL:
            raise ValueError(f"max_level must lie in [{MIN_LEVEL}, {MAX_LEVEL}]")


@dataclass(frozen=True)
class GaussLegendre:
    order: int = 256

    def __post_init__(self):
        if not MIN_ORDER <= self.order <= MAX_ORDER:
            raise ValueError(f"order must lie in [{MIN_ORDER}, {MAX_ORDER}]")


@dataclass(frozen=True)
class Tensor2D:
    inner: object = field(default_factory=TanhSinh)


@dataclass(frozen=True)
class QuadResult:
    value: HPReal
    error_estimate: HPReal
    evaluations: int
    level_or_order: int


def _target(bits):
    return ldexp(1, -(bits - 8))


# ---------------------------------------------------------------------------
# Tanh-sinh node tables.
#
# Transformation x = tanh((pi/2) sinh t) on the trapezoid grid t = k*2^-level.
# Each positive-t node is stored as (t, s, delta, omega) with s = tanh(u),
# delta = 1 - s computed stably as 2q/(1+q) for q = e^(-2u), and
# omega = (pi/2) cosh(t) / cosh(u)^2.  Keeping delta separate is what lets a
# singular evaluator see the true distance to the endpoint instead of a
# catastrophically rounded one.
#
# Tables are cumulative: level k holds only the nodes new at step 2^-k, so
# the trapezoid sums refine incrementally.  Truncation: nodes are generated
# until the canonical weight h*omega drops below 2^-(bits+32).
# ---------------------------------------------------------------------------

_TS_TABLES = {}  # bits -> list per level of tuple[(t, s, delta, omega), ...]


def _ts_levels(bits, up_to_level):
    levels = _TS_TABLES.get(bits)
    if levels is None:
        levels = [()]  # level 0 contributes only the center node
        _TS_TABLES[bits] = levels
    gen_bits = bits + GUARD_BITS + 16
    threshold = ldexp(1, -(bits + 32))
    with workprec(gen_bits):
        piq = pi / 2
        while len(levels) <= up_to_level:
            lev = len(levels)
            h = ldexp(1, -lev)
            new = []
            k = 1
            while True:
                # level 1 takes every multiple of 1/2; deeper levels add the
                # odd multiples of their step
                if lev > 1 and k % 2 == 0:
                    k += 1
                    continue
                # t = k*2^-lev is an exact dyadic; kept (as a float) so that
                # assembled grids can be ordered even where the rounded
                # abscissae collide at +-1
                t = k * h
                et = exp(t)
                ch = (et + 1 / et) / 2
                sh = (et - 1 / et) / 2
                q = exp(-2 * piq * sh)
                delta = 2 * q / (1 + q)
                s = 1 - delta
                omega = piq * ch * 4 * q / ((1 + q) * (1 + q))
                if h * omega < threshold:
                    break
                new.append((float(t), s, delta, omega))
                k += 1
            levels.append(tuple(new))
    return levels


def tanh_sinh_nodes(level, p):
    """Abscissa/weight pairs on [-1, 1] for the given refinement level.

    Level 0 is the single center node t = 0; level k >= 1 is the full grid
    of step 2^-k, truncated where the weights underflow 2^-(bits+32).  The
    list is symmetric about 0 and all weights are positive.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    levels = _ts_levels(p.bits, max(level, 1) if level else 0)
    with workprec(p.bits):
        h = ldexp(1, -level)
        center = (mpf(0), +(h * pi / 2))
        if level == 0:
            return [center]
        tagged = []
        for lev in range(1, level + 1):
            for t, s, delta, omega in levels[lev]:
                tagged.append((t, +s, +(h * omega)))
        tagged.sort(key=lambda tsw: tsw[0])  # exact dyadic t: total order
        pos = [(s, w) for _, s, w in tagged]
        neg = [(-s, w) for s, w in reversed(pos)]
        return neg + [center] + pos


def _eval_checked(f, x, integrand):
    y = f(x)
    if not isfinite(y):
        raise DomainError(
            f"integrand {integrand.id!r} returned non-finite value at x={mp.nstr(x, 12)}"
        )
    return y


def _integrate_ts(integrand, max_level, bits, tau):
    a = _endpoint_value(integrand.domain[0])
    b = _endpoint_value(integrand.domain[1])
    halfw = (b - a) / 2
    mid = (a + b) / 2
    f = integrand.evaluator
    levels = _ts_levels(bits, max_level)

    S = (pi / 2) * _eval_checked(f, mid, integrand)
    evals = 1
    prev = None
    est = None
    for lev in range(1, max_level + 1):
        for _t, s, delta, omega in levels[lev]:
            xm = a + halfw * delta
            xp = b - halfw * delta
            if integrand.singular_left and xm == a:
                fm = mpf(0)  # weight already below truncation noise
            else:
                fm = _eval_checked(f, xm, integrand)
                evals += 1
            if integrand.singular_right and xp == b:
                fp = mpf(0)
            else:
                fp = _eval_checked(f, xp, integrand)
                evals += 1
            S += omega * (fm + fp)
        T = ldexp(halfw * S, -lev)
        if prev is not None:
            est = abs(T - prev)
            if est <= tau:
                return T, est, evals, lev
        prev = T
    raise NonconvergenceError(
        f"tanh-sinh on {integrand.id!r} did not reach 2^-{bits - 8} by level {max_level}"
        f" (last difference {mp.nstr(est, 8)})",
        value=T,
        error_estimate=est,
        evaluations=evals,
    )


# ---------------------------------------------------------------------------
# Gauss-Legendre nodes: float64 seeds from numpy, polished by Newton steps on
# the recurrence-evaluated Legendre polynomial at working precision.
# ---------------------------------------------------------------------------

_GL_TABLES = {}  # (order, bits) -> tuple[(x, w), ...] for x >= 0


def _legendre_pair(n, x):
    p0, p1 = mpf(1), x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1)
    return p1, dp


def _gl_halfline(order, bits):
    key = (order, bits)
    cached = _GL_TABLES.get(key)
    if cached is not None:
        return cached
    gen_bits = bits + 16
    with workprec(gen_bits):
        seeds = np.polynomial.legendre.leggauss(order)[0]
        out = []
        for x0 in seeds:
            if x0 < -1e-12:
                continue
            x = mpf(0) if abs(x0) < 1e-12 else mpf(float(x0))
            for _ in range(12):
                pn, dp = _legendre_pair(order, x)
                dx = pn / dp
                x -= dx
                if abs(dx) <= ldexp(1, -(gen_bits - 4)):
                    break
            pn, dp = _legendre_pair(order, x)
            w = 2 / ((1 - x * x) * dp * dp)
            out.append((x, w))
        out.sort(key=lambda nw: nw[0])
        table = tuple(out)
    _GL_TABLES[key] = table
    return table


def gauss_legendre_nodes(order, p):
    """Full symmetric node/weight list of the n-point rule on [-1, 1]."""
    if not MIN_ORDER <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in [{MIN_ORDER}, {MAX_ORDER}]")
    half = _gl_halfline(order, p.bits + GUARD_BITS)
    with workprec(p.bits):
        pos = [(+x, +w) for x, w in half if x != 0]
        center = [(mpf(0), +w) for x, w in half if x == 0]
        neg = [(-x, w) for x, w in reversed(pos)]
        return neg + center + pos


def _gl_ladder(cap):
    # the error estimate needs at least two rungs
    orders = []
    n = 8
    while n <= cap:
        orders.append(n)
        n *= 2
    if len(orders) < 2:
        orders = sorted({max(MIN_ORDER, cap // 2), cap})
    return orders


def _gl_sum_1d(integrand, order, bits, a, b, halfw, mid):
    f = integrand.evaluator
    S = mpf(0)
    evals = 0
    for x, w in _gl_halfline(order, bits):
        if x == 0:
            S += w * _eval_checked(f, mid, integrand)
            evals += 1
        else:
            S += w * (
                _eval_checked(f, mid + halfw * x, integrand)
                + _eval_checked(f, mid - halfw * x, integrand)
            )
            evals += 2
    return halfw * S, evals


def _integrate_gl(integrand, order_cap, bits, tau):
    a = _endpoint_value(integrand.domain[0])
    b = _endpoint_value(integrand.domain[1])
    halfw = (b - a) / 2
    mid = (a + b) / 2
    prev = None
    est = None
    evals = 0
    for order in _gl_ladder(order_cap):
        T, n = _gl_sum_1d(integrand, order, bits, a, b, halfw, mid)
        evals += n
        if prev is not None:
            est = abs(T - prev)
            if est <= tau:
                return T, est, evals, order
        prev = T
    raise NonconvergenceError(
        f"Gauss-Legendre on {integrand.id!r} did not converge by order {order_cap}",
        value=T,
        error_estimate=est,
        evaluations=evals,
    )


def integrate(f, s, p):
    """Integrate a 1D integrand with the given scheme at precision p.

    Arithmetic runs at the guarded width; the refinement loop stops once
    the level/order difference reaches 2^-(p.bits - 8).
    """
    if f.dimension != 1:
        raise ValueError(f"integrate() needs a 1D integrand, got dimension {f.dimension}")
    bits = p.guarded
    tau = _target(p.bits)
    with workprec(bits):
        if isinstance(s, TanhSinh):
            value, est, evals, step = _integrate_ts(f, s.max_level, bits, tau)
        elif isinstance(s, GaussLegendre):
            if f.singular_left or f.singular_right:
                raise DomainError(
                    f"Gauss-Legendre refuses singular integrand {f.id!r}; use tanh-sinh"
                )
            value, est, evals, step = _integrate_gl(f, s.order, bits, tau)
        else:
            raise ValueError(f"scheme {s!r} does not apply to a 1D integrand")
    return QuadResult(
        value=HPReal.from_raw(value, p),
        error_estimate=HPReal.from_raw(abs(est), p),
        evaluations=evals,
        level_or_order=step,
    )


# ---------------------------------------------------------------------------
# 2D tensor rule over a rectangle (in practice: the closed unit square).
# ---------------------------------------------------------------------------


def _materialize_1d(axis_dom, nodes_pos, center_w, bits):
    a = _endpoint_value(axis_dom[0])
    b = _endpoint_value(axis_dom[1])
    halfw = (b - a) / 2
    mid = (a + b) / 2
    pts = [(mid, center_w)]
    for _t, s, delta, omega in nodes_pos:
        pts.append((a + halfw * delta, omega))
        pts.append((b - halfw * delta, omega))
    return pts, halfw


def _tensor_ts(integrand, max_level, bits, tau):
    f = integrand.evaluator
    levels = _ts_levels(bits, max_level)
    domx, domy = integrand.domain
    prev = None
    est = None
    evals = 0
    for lev in range(2, max_level + 1):
        cumulative = [n for l in range(1, lev + 1) for n in levels[l]]
        ptsx, halfx = _materialize_1d(domx, cumulative, pi / 2, bits)
        ptsy, halfy = _materialize_1d(domy, cumulative, pi / 2, bits)
        S = mpf(0)
        for x, wx in ptsx:
            row = mpf(0)
            for y, wy in ptsy:
                row += wy * _eval_checked_2d(f, x, y, integrand)
                evals += 1
            S += wx * row
        T = ldexp(halfx * halfy * S, -2 * lev)
        if prev is not None:
            est = abs(T - prev)
            if est <= tau:
                return T, est, evals, lev
        prev = T
    raise NonconvergenceError(
        f"2D tanh-sinh on {integrand.id!r} did not converge by level {max_level}",
        value=T,
        error_estimate=est,
        evaluations=evals,
    )


def _eval_checked_2d(f, x, y, integrand):
    v = f(x, y)
    if not isfinite(v):
        raise DomainError(
            f"integrand {integrand.id!r} returned non-finite value at "
            f"({mp.nstr(x, 12)}, {mp.nstr(y, 12)})"
        )
    return v


def _tensor_gl(integrand, order_cap, bits, tau):
    f = integrand.evaluator
    domx, domy = integrand.domain
    ax, bx = (_endpoint_value(e) for e in domx)
    ay, by = (_endpoint_value(e) for e in domy)
    halfx, midx = (bx - ax) / 2, (ax + bx) / 2
    halfy, midy = (by - ay) / 2, (ay + by) / 2
    prev = None
    est = None
    evals = 0
    for order in _gl_ladder(order_cap):
        half = _gl_halfline(order, bits)
        xs, wxs = _axis_points(half, midx, halfx)
        ys, wys = _axis_points(half, midy, halfy)
        S = mpf(0)
        for x, wx in zip(xs, wxs):
            row = mpf(0)
            for y, wy in zip(ys, wys):
                row += wy * _eval_checked_2d(f, x, y, integrand)
                evals += 1
            S += wx * row
        T = halfx * halfy * S
        if prev is not None:
            est = abs(T - prev)
            if est <= tau:
                return T, est, evals, order
        prev = T
    raise NonconvergenceError(
        f"2D Gauss-Legendre on {integrand.id!r} did not converge by order {order_cap}",
        value=T,
        error_estimate=est,
        evaluations=evals,
    )


def _axis_points(half_nodes, mid, halfw):
    pts, ws = [], []
    for x, w in half_nodes:
        if x == 0:
            pts.append(mid)
            ws.append(w)
        else:
            pts.extend((mid + halfw * x, mid - halfw * x))
            ws.extend((w, w))
    return pts, ws


def integrate_2d(f, s, p):
    """Integrate a 2D integrand with a tensor-product scheme at precision p."""
    if f.dimension != 2:
        raise ValueError(f"integrate_2d() needs a 2D integrand, got dimension {f.dimension}")
    if not isinstance(s, Tensor2D):
        raise ValueError("2D integration requires a Tensor2D scheme")
    if f.singular_left or f.singular_right:
        raise DomainError(f"2D tensor rule requires a smooth integrand, got flags on {f.id!r}")
    bits = p.guarded
    tau = _target(p.bits)
    with workprec(bits):
        if isinstance(s.inner, TanhSinh):
            value, est, evals, step = _tensor_ts(f, s.inner.max_level, bits, tau)
        elif isinstance(s.inner, GaussLegendre):
            value, est, evals, step = _tensor_gl(f, s.inner.order, bits, tau)
        else:
            raise ValueError(f"unsupported inner scheme {s.inner!r}")
    return QuadResult(
        value=HPReal.from_raw(value, p),
        error_estimate=HPReal.from_raw(abs(est), p),
        evaluations=evals,
        level_or_order=step,
    )
