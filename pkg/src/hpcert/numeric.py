"""Extended-precision values, fundamental constants, and closed forms.

Everything the verifier certifies against lives here: `HPReal` (a value
pinned to an explicit mantissa size), the seven-constant basis
{1, ln2, (ln2)^2, pi, pi*ln2, pi^2, G}, and `ClosedForm` -- an exact
rational-coefficient combination over that basis.

Internal computation runs at ``bits + GUARD_BITS`` and results are rounded
once at the boundary, which keeps every constant within 4 ulp of the true
value without per-operation error analysis.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import math

from mpmath import mp, mpf, isfinite, ldexp, mag, workprec

from .accel import crz_sum, crz_terms_for_bits
from .errors import BasisError, DomainError

GUARD_BITS = 32


@dataclass(frozen=True, order=True)
class Precision:
    """Working mantissa size in bits.  Minimum 64."""

    bits: int

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 64:
            raise ValueError(f"precision must be an integer >= 64 bits, got {self.bits!r}")

    @property
    def guarded(self):
        return self.bits + GUARD_BITS

    @property
    def decimal_digits(self):
        """Decimal digits carrying the same information as `bits` bits."""
        return int(math.ceil(self.bits * math.log10(2)))


@dataclass(frozen=True)
class HPReal:
    """A finite real value together with the precision it was rounded to."""

    value: mpf
    precision: Precision

    @classmethod
    def from_raw(cls, x, precision):
        """Round an ambient-precision value to `precision` bits."""
        if not isfinite(x):
            raise DomainError(f"non-finite value {x!r} cannot cross the module boundary")
        with workprec(precision.bits):
            return cls(+x, precision)

    def round_to(self, precision):
        """Re-round to a (typically lower) precision; error grows monotonically."""
        return HPReal.from_raw(self.value, precision)

    def __float__(self):
        return float(self.value)

    def __str__(self):
        return mp.nstr(self.value, self.precision.decimal_digits)


def ulp(x, bits):
    """Unit in the last place of x at a mantissa of `bits` bits."""
    if x == 0:
        return ldexp(1, -bits)
    return ldexp(1, mag(x) - bits)


class BasisConstant(Enum):
    ONE = "1"
    LN2 = "ln2"
    LN2_SQ = "ln2^2"
    PI = "pi"
    PI_LN2 = "pi*ln2"
    PI_SQ = "pi^2"
    CATALAN = "G"


# ---------------------------------------------------------------------------
# Raw constants.  Fixed-point integer series for pi and ln2; the Catalan
# constant comes from the accelerated series sum_{k>=0} (-1)^k/(2k+1)^2
# (termwise integration of -int_0^1 ln x/(1+x^2) dx); the quadrature of that
# integral is kept as a cross-check only, never as the primary path.
# ---------------------------------------------------------------------------


def _arccot_fixed(m, bits):
    # arccot(m) * 2^bits by the alternating inverse-odd-power series.
    one = 1 << bits
    term = one // m
    total = term
    m2 = m * m
    n = 3
    sign = -1
    while term:
        term //= m2
        total += sign * (term // n)
        sign = -sign
        n += 2
    return total


def _atanh_inv_fixed(m, bits):
    # atanh(1/m) * 2^bits; all terms positive.
    one = 1 << bits
    term = one // m
    total = term
    m2 = m * m
    n = 3
    while term:
        term //= m2
        total += term // n
        n += 2
    return total


def _fixed_to_mpf(total, bits, out_bits):
    with workprec(out_bits):
        return ldexp(mpf(total), -bits)


def _pi_raw(bits):
    # Machin's formula; floor-division noise stays below the 16 extra bits.
    fb = bits + 16
    total = 4 * (4 * _arccot_fixed(5, fb) - _arccot_fixed(239, fb))
    return _fixed_to_mpf(total, fb, bits)


def _ln2_raw(bits):
    fb = bits + 16
    total = 2 * _atanh_inv_fixed(3, fb)
    return _fixed_to_mpf(total, fb, bits)


def _catalan_raw(bits):
    wb = bits + 16
    terms = crz_terms_for_bits(wb)
    with workprec(wb):
        value = crz_sum(lambda k: 1 / mpf(2 * k + 1) ** 2, terms)
    with workprec(bits):
        return +value


_RAW_CACHE = {}


def constant_value(tag, bits):
    """Raw basis-constant value at `bits` bits (cached; population idempotent)."""
    key = (tag, bits)
    cached = _RAW_CACHE.get(key)
    if cached is not None:
        return cached
    if tag is BasisConstant.ONE:
        value = mpf(1)
    elif tag is BasisConstant.PI:
        value = _pi_raw(bits)
    elif tag is BasisConstant.LN2:
        value = _ln2_raw(bits)
    elif tag is BasisConstant.CATALAN:
        value = _catalan_raw(bits)
    else:
        with workprec(bits + 8):
            if tag is BasisConstant.LN2_SQ:
                r = constant_value(BasisConstant.LN2, bits + 8)
                value = r * r
            elif tag is BasisConstant.PI_LN2:
                value = constant_value(BasisConstant.PI, bits + 8) * constant_value(
                    BasisConstant.LN2, bits + 8
                )
            elif tag is BasisConstant.PI_SQ:
                r = constant_value(BasisConstant.PI, bits + 8)
                value = r * r
            else:
                raise BasisError(f"unknown basis tag {tag!r}")
        with workprec(bits):
            value = +value
    _RAW_CACHE[key] = value
    return value


def const_pi(p):
    """pi to within 4 ulp at p bits."""
    return HPReal.from_raw(constant_value(BasisConstant.PI, p.guarded), p)


def const_ln2(p):
    """ln 2 to within 4 ulp at p bits.

    Computed from 2*atanh(1/3), not from the alternating harmonic series:
    that series converges far too slowly to be a computation route and is
    instead certified separately as a catalog check.
    """
    return HPReal.from_raw(constant_value(BasisConstant.LN2, p.guarded), p)


def const_catalan(p):
    """Catalan's constant G to within 4 ulp at p bits."""
    return HPReal.from_raw(constant_value(BasisConstant.CATALAN, p.guarded), p)


# ---------------------------------------------------------------------------
# Closed forms: exact rational coefficients over the seven-constant basis.
# ---------------------------------------------------------------------------

_TAG_ORDER = {tag: i for i, tag in enumerate(BasisConstant)}


@dataclass(frozen=True)
class ClosedForm:
    """Immutable map BasisConstant -> Fraction; absent key means zero."""

    items: tuple

    def __init__(self, coefficients=()):
        if isinstance(coefficients, ClosedForm):
            items = coefficients.items
        else:
            mapping = dict(coefficients)
            for tag in mapping:
                if not isinstance(tag, BasisConstant):
                    raise BasisError(f"{tag!r} is not a basis constant")
            items = tuple(
                sorted(
                    ((tag, Fraction(v)) for tag, v in mapping.items() if Fraction(v) != 0),
                    key=lambda kv: _TAG_ORDER[kv[0]],
                )
            )
        object.__setattr__(self, "items", items)

    @classmethod
    def zero(cls):
        return cls()

    @property
    def coefficients(self):
        return dict(self.items)

    def coefficient(self, tag):
        for t, v in self.items:
            if t is tag:
                return v
        return Fraction(0)

    def is_zero(self):
        return not self.items

    def __add__(self, other):
        return cf_add(self, other)

    def __str__(self):
        if not self.items:
            return "0"
        return " + ".join(f"({v})*{t.value}" for t, v in self.items)


def cf_add(a, b):
    """Exact sum of two closed forms."""
    out = dict(a.items)
    for tag, v in b.items:
        out[tag] = out.get(tag, Fraction(0)) + v
    return ClosedForm(out)


def cf_scale(a, r):
    """Exact rational scaling of a closed form."""
    r = Fraction(r)
    return ClosedForm({tag: v * r for tag, v in a.items})


# Multiplication by ln2 moves coefficients between slots.  Only the three
# listed source slots keep the product inside the basis; anything else is a
# hard error rather than a silent basis extension.
_LN2_SLOT = {
    BasisConstant.ONE: BasisConstant.LN2,
    BasisConstant.LN2: BasisConstant.LN2_SQ,
    BasisConstant.PI: BasisConstant.PI_LN2,
}


def cf_mul_ln2(a):
    """Exact product (closed form) * ln2, when it stays inside the basis."""
    out = {}
    for tag, v in a.items:
        target = _LN2_SLOT.get(tag)
        if target is None:
            raise BasisError(f"ln2 * {tag.value} leaves the seven-constant basis")
        out[target] = out.get(target, Fraction(0)) + v
    return ClosedForm(out)


def eval_closed_form(cf, p):
    """Evaluate a closed form numerically at precision p (guarded internally)."""
    g = p.guarded
    with workprec(g + 8):
        total = mpf(0)
        for tag, coeff in cf.items:
            c = constant_value(tag, g)
            total += mpf(coeff.numerator) / coeff.denominator * c
    return HPReal.from_raw(total, p)
