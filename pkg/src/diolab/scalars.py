"""Exact and error-tracked scalar arithmetic.

Three number representations share one protocol:

* exact rationals -- ``fractions.Fraction`` (plain ``int`` accepted and
  coerced),
* quadratic surds -- :class:`Surd`, ``(a + b*sqrt(D))/c`` over integers with
  ``D`` square-free, closed under ring operations within one ``D``,
* decimals with a rigorous absolute error bound -- :class:`Dec`, backed by
  mpmath at a configurable working precision (default 50 significant digits)
  with first-order error propagation.

Comparisons are *certified*: they either return a definite answer or raise
:class:`~diolab.errors.PrecisionExhausted`.  Surd-vs-rational and
same-``D`` surd comparisons are exact integer arithmetic; mixed-``D``
comparisons escalate decimal precision (distinct square-free parts can never
be equal, so escalation terminates in practice).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

from .errors import PrecisionExhausted

DEFAULT_DIGITS = 50

# precision ladder (decimal digits) used when escalating exact-but-mixed
# comparisons; Dec inputs never escalate past their intrinsic error.
_ESCALATION_DPS = (DEFAULT_DIGITS, 140, 350, 800)


# ---------------------------------------------------------------------------
# small integer helpers


def isqrt(n: int) -> int:
    return math.isqrt(n)


def nth_root_exact(n: int, k: int):
    """Integer k-th root of n >= 0 if n is a perfect k-th power, else None."""
    if n < 0:
        raise ValueError("nth_root_exact expects n >= 0")
    if n in (0, 1) or k == 1:
        return n
    r = round(n ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # float estimate can be off for very large n; fix with bisection
    lo, hi = 0, 1 << (n.bit_length() // k + 2)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**k
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def square_free_split(n: int) -> tuple[int, int]:
    """Write n = d * k**2 with d square-free; returns (d, k).

    Trial division up to sqrt(n); this doubles as the square-freeness
    certificate for surd radicands.
    """
    if n <= 0:
        raise ValueError("radicand must be positive")
    d, k = 1, 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            if e % 2:
                d *= p
            k *= p ** (e // 2)
        p += 1 if p == 2 else 2
    d *= m
    return d, k


def rational_pow_exact(x: Fraction, e: Fraction):
    """x**e as an exact Fraction when representable, else None. x > 0."""
    if x <= 0:
        raise ValueError("rational_pow_exact expects x > 0")
    num, den = e.numerator, e.denominator
    if num < 0:
        x = 1 / x
        num = -num
    if den == 1:
        return x**num
    rn = nth_root_exact(x.numerator, den)
    if rn is None:
        return None
    rd = nth_root_exact(x.denominator, den)
    if rd is None:
        return None
    return Fraction(rn, rd) ** num


# ---------------------------------------------------------------------------
# decimals with tracked absolute error


def _workdps(extra: int = 10):
    return mpmath.workdps(DEFAULT_DIGITS + extra)


def _ulp_bound(x) -> mpmath.mpf:
    """Conservative bound on the rounding error of one mpf operation."""
    ax = abs(x)
    if ax == 0:
        return mp.mpf(10) ** (-4 * DEFAULT_DIGITS)
    return ax * mp.mpf(2) ** (3 - mp.prec)


@dataclass(frozen=True)
class Dec:
    """A decimal value with a rigorous absolute error bound.

    ``err`` bounds ``|val - true|``.  Arithmetic propagates errors to first
    order plus a conservative rounding slack per operation.
    """

    val: mpmath.mpf
    err: mpmath.mpf

    def __post_init__(self):
        object.__setattr__(self, "val", mp.mpf(self.val))
        object.__setattr__(self, "err", abs(mp.mpf(self.err)))

    # -- constructors -------------------------------------------------

    @staticmethod
    def exact(x) -> "Dec":
        with _workdps():
            if isinstance(x, Fraction):
                v = mp.mpf(x.numerator) / mp.mpf(x.denominator)
            else:
                v = mp.mpf(x)
            return Dec(v, _ulp_bound(v))

    @staticmethod
    def from_str(digits: str, err=None) -> "Dec":
        """Parse a decimal literal; default error is half a unit in the last
        place of the fractional part."""
        with _workdps():
            v = mp.mpf(digits)
            if err is None:
                if "." in digits:
                    places = len(digits.split(".")[1])
                else:
                    places = 0
                e = mp.mpf(10) ** (-places) / 2
            else:
                e = mp.mpf(err)
            return Dec(v, e + _ulp_bound(v))

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Dec):
            return other
        if isinstance(other, (int, Fraction)):
            return Dec.exact(other)
        if isinstance(other, Surd):
            return other.to_dec()
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        with _workdps():
            v = self.val + o.val
            return Dec(v, self.err + o.err + _ulp_bound(v))

    __radd__ = __add__

    def __neg__(self):
        return Dec(-self.val, self.err)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        with _workdps():
            v = self.val * o.val
            e = (
                abs(self.val) * o.err
                + abs(o.val) * self.err
                + self.err * o.err
                + _ulp_bound(v)
            )
            return Dec(v, e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.definitely_nonzero():
            raise PrecisionExhausted("division by a possibly-zero Dec")
        with _workdps():
            v = self.val / o.val
            lo = abs(o.val) - o.err
            e = (self.err + abs(v) * o.err) / lo + _ulp_bound(v)
            return Dec(v, e)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __abs__(self):
        return Dec(abs(self.val), self.err)

    def pow_frac(self, e: Fraction) -> "Dec":
        """self**e for rational e; requires a certainly-positive base for
        non-integer exponents."""
        if e.denominator != 1 and not self.definitely_positive():
            raise PrecisionExhausted("fractional power of a possibly-nonpositive Dec")
        with _workdps():
            ef = mp.mpf(e.numerator) / e.denominator
            v = mp.power(self.val, ef)
            if self.val == 0:
                return Dec(v, self.err)  # e integer >= 1 here
            rel = self.err / abs(self.val)
            e_prop = abs(v) * abs(ef) * rel * (1 + rel)
            return Dec(v, e_prop + _ulp_bound(v))

    # -- predicates -----------------------------------------------------

    def definitely_positive(self) -> bool:
        return self.val - self.err > 0

    def definitely_negative(self) -> bool:
        return self.val + self.err < 0

    def definitely_nonzero(self) -> bool:
        return self.definitely_positive() or self.definitely_negative()

    def sign_certain(self) -> int:
        if self.definitely_positive():
            return 1
        if self.definitely_negative():
            return -1
        if self.err == 0:
            return 0
        raise PrecisionExhausted(
            f"sign of {mpmath.nstr(self.val, 8)} +/- {mpmath.nstr(self.err, 3)} is ambiguous"
        )

    def bounds(self) -> tuple[Fraction, Fraction]:
        """Exact rational lower/upper bounds for the represented real."""
        lo = mpf_to_fraction(self.val - self.err)
        hi = mpf_to_fraction(self.val + self.err)
        return lo, hi

    def __float__(self):
        return float(self.val)

    def __repr__(self):
        return f"Dec({mpmath.nstr(self.val, 20)}, err={mpmath.nstr(self.err, 3)})"


def mpf_to_fraction(x) -> Fraction:
    """Exact conversion of a finite mpf to Fraction."""
    if x == 0:
        return Fraction(0)
    m, e = mpmath.mpf(x).man_exp
    m, e = int(m), int(e)  # the gmpy2 backend hands back mpz
    return Fraction(m) * Fraction(2) ** e


# ---------------------------------------------------------------------------
# quadratic surds


@dataclass(frozen=True)
class Surd:
    """(a + b*sqrt(D))/c with integer a, b != 0, c > 0, D >= 2 square-free,
    gcd(a, b, c) = 1.  Use :func:`make_surd` to construct in canonical form.
    """

    a: int
    b: int
    c: int
    D: int

    # ring operations within one D -------------------------------------

    def __add__(self, other):
        if isinstance(other, Surd):
            if other.D != self.D:
                return NotImplemented
            a = self.a * other.c + other.a * self.c
            b = self.b * other.c + other.b * self.c
            return make_surd(a, b, self.c * other.c, self.D)
        if isinstance(other, (int, Fraction)):
            fr = Fraction(other)
            a = self.a * fr.denominator + fr.numerator * self.c
            return make_surd(a, self.b * fr.denominator, self.c * fr.denominator, self.D)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.c, self.D)

    def __sub__(self, other):
        res = self + (-other if isinstance(other, Surd) else -Fraction(other))
        return res

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Surd):
            if other.D != self.D:
                return NotImplemented
            a = self.a * other.a + self.b * other.b * self.D
            b = self.a * other.b + self.b * other.a
            return make_surd(a, b, self.c * other.c, self.D)
        if isinstance(other, (int, Fraction)):
            fr = Fraction(other)
            return make_surd(
                self.a * fr.numerator, self.b * fr.numerator, self.c * fr.denominator, self.D
            )
        return NotImplemented

    __rmul__ = __mul__

    def reciprocal(self):
        n = self.a * self.a - self.b * self.b * self.D
        if n == 0:
            raise ZeroDivisionError("surd is zero")
        return make_surd(self.a * self.c, -self.b * self.c, n, self.D)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            fr = Fraction(other)
            if fr == 0:
                raise ZeroDivisionError
            return self * Fraction(fr.denominator, fr.numerator)
        if isinstance(other, Surd) and other.D == self.D:
            return self * other.reciprocal()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    # exact structure ----------------------------------------------------

    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a >= 0 and b > 0:
            return 1
        if a <= 0 and b < 0:
            return -1
        lhs, rhs = a * a, b * b * self.D
        if a > 0:  # b < 0 here
            return 1 if lhs > rhs else (0 if lhs == rhs else -1)
        return -1 if lhs > rhs else (0 if lhs == rhs else 1)

    def cmp_fraction(self, fr: Fraction) -> int:
        diff = self + (-fr)
        if isinstance(diff, Surd):
            return diff.sign()
        return (diff > 0) - (diff < 0)

    def floor(self) -> int:
        # estimate with isqrt, then certify with exact comparisons
        s = isqrt(self.b * self.b * self.D)
        if self.b >= 0:
            m = (self.a + s) // self.c
        else:
            m = (self.a - s - 1) // self.c
        while self.cmp_fraction(Fraction(m + 1)) >= 0:
            m += 1
        while self.cmp_fraction(Fraction(m)) < 0:
            m -= 1
        return m

    def pow_int(self, k: int):
        if k < 0:
            return self.reciprocal().pow_int(-k)
        result: Union[Surd, Fraction] = Fraction(1)
        base: Union[Surd, Fraction] = self
        while k:
            if k & 1:
                result = base * result if isinstance(base, Surd) else result * base
            base = base * base
            k >>= 1
        return result

    def to_dec(self, extra: int = 10) -> Dec:
        with _workdps(extra):
            r = mp.sqrt(self.D)
            v = (self.a + self.b * r) / self.c
            e = abs(mp.mpf(self.b) / self.c) * _ulp_bound(r) + 4 * _ulp_bound(v)
            return Dec(v, e)

    def __float__(self):
        return float(self.to_dec().val)

    def __repr__(self):
        return f"Surd(({self.a}{self.b:+d}*sqrt({self.D}))/{self.c})"


def make_surd(a, b, c, D) -> Union[Surd, Fraction]:
    """Canonical surd constructor; collapses to Fraction when rational."""
    a, b, c, D = int(a), int(b), int(c), int(D)
    if c == 0:
        raise ZeroDivisionError("surd denominator is zero")
    if b == 0:
        return Fraction(a, c)
    d0, k = square_free_split(D)
    b *= k
    D = d0
    if D == 1:
        return Fraction(a + b, c)
    if c < 0:
        a, b, c = -a, -b, -c
    g = math.gcd(math.gcd(abs(a), abs(b)), c)
    return Surd(a // g, b // g, c // g, D)


def sqrt_of(x, err_ok: bool = True):
    """sqrt of a nonnegative rational as Surd/Fraction (exact)."""
    fr = Fraction(x)
    if fr < 0:
        raise ValueError("sqrt of negative rational")
    n = fr.numerator * fr.denominator
    r = nth_root_exact(n, 2)
    if r is not None:
        return Fraction(r, fr.denominator)
    return make_surd(0, 1, fr.denominator, n)


# ---------------------------------------------------------------------------
# the Scalar union and generic operations

Scalar = Union[int, Fraction, Surd, Dec]


def as_scalar(x) -> Scalar:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, Surd, Dec)):
        return x
    if isinstance(x, float):
        raise TypeError(
            "raw floats are not accepted as scalars; use Fraction, Surd, or Dec"
        )
    raise TypeError(f"not a scalar: {x!r}")


def is_exact(x: Scalar) -> bool:
    return isinstance(x, (int, Fraction, Surd))


def to_dec(x: Scalar, extra: int = 10) -> Dec:
    x = as_scalar(x)
    if isinstance(x, Dec):
        return x
    if isinstance(x, Surd):
        return x.to_dec(extra)
    with _workdps(extra):
        v = mp.mpf(x.numerator) / mp.mpf(x.denominator)
        return Dec(v, _ulp_bound(v))


def to_float(x: Scalar) -> float:
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return x.numerator / x.denominator
    return float(x)


def smart_add(x: Scalar, y: Scalar) -> Scalar:
    """Exact addition where the representations allow it, Dec otherwise."""
    x, y = as_scalar(x), as_scalar(y)
    try:
        r = x + y
    except TypeError:
        r = NotImplemented
    if r is NotImplemented:
        r = to_dec(x) + to_dec(y)
    return r


def smart_mul(x: Scalar, y: Scalar) -> Scalar:
    x, y = as_scalar(x), as_scalar(y)
    try:
        r = x * y
    except TypeError:
        r = NotImplemented
    if r is NotImplemented:
        r = to_dec(x) * to_dec(y)
    return r


def smart_sub(x: Scalar, y: Scalar) -> Scalar:
    return smart_add(x, smart_mul(y, Fraction(-1)))


def _exact_sign(x) -> int:
    if isinstance(x, Fraction):
        return (x > 0) - (x < 0)
    return x.sign()


def ssign(x: Scalar) -> int:
    """Certified sign (-1, 0, +1); raises PrecisionExhausted if undecidable."""
    x = as_scalar(x)
    if is_exact(x):
        return _exact_sign(x)
    return x.sign_certain()


def scmp(x: Scalar, y: Scalar) -> int:
    """Certified three-way comparison."""
    x, y = as_scalar(x), as_scalar(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return (x > y) - (x < y)
    if isinstance(x, Surd) and isinstance(y, Fraction):
        return x.cmp_fraction(y)
    if isinstance(x, Fraction) and isinstance(y, Surd):
        return -y.cmp_fraction(x)
    if isinstance(x, Surd) and isinstance(y, Surd) and x.D == y.D:
        return (x - y).sign() if isinstance(x - y, Surd) else _exact_sign(x - y)
    if is_exact(x) and is_exact(y):
        # mixed square-free parts: never equal unless structurally so
        if x == y:
            return 0
        for dps_extra in (10, 100, 300, 760):
            dx = to_dec(x, dps_extra)
            dy = to_dec(y, dps_extra)
            d = dx - dy
            if d.definitely_positive():
                return 1
            if d.definitely_negative():
                return -1
        raise PrecisionExhausted("mixed-surd comparison did not separate")
    d = to_dec(x) - to_dec(y)
    return d.sign_certain()


def slt(x: Scalar, y: Scalar) -> bool:
    return scmp(x, y) < 0

def sle(x: Scalar, y: Scalar) -> bool:
    return scmp(x, y) <= 0


def smin(*xs: Scalar) -> Scalar:
    best = as_scalar(xs[0])
    for x in xs[1:]:
        if scmp(as_scalar(x), best) < 0:
            best = as_scalar(x)
    return best


def smax(*xs: Scalar) -> Scalar:
    best = as_scalar(xs[0])
    for x in xs[1:]:
        if scmp(as_scalar(x), best) > 0:
            best = as_scalar(x)
    return best


def sabs(x: Scalar) -> Scalar:
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return abs(x)
    if isinstance(x, Surd):
        return abs(x)
    return abs(x)


def floor_scalar(x: Scalar) -> int:
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    if isinstance(x, Surd):
        return x.floor()
    lo, hi = x.bounds()
    flo = lo.numerator // lo.denominator
    fhi = hi.numerator // hi.denominator
    if flo != fhi:
        raise PrecisionExhausted("floor is ambiguous at this error bound")
    return flo


def scalar_pow(x: Scalar, e) -> Scalar:
    """x**e for rational e; exact when representable, Dec otherwise."""
    e = Fraction(e)
    x = as_scalar(x)
    if isinstance(x, Fraction):
        if x > 0:
            r = rational_pow_exact(x, e)
            if r is not None:
                return r
            if e.denominator == 2:
                s = sqrt_of(x**e.numerator if e.numerator >= 0 else (1 / x) ** (-e.numerator))
                return s
            return to_dec(x).pow_frac(e)
        if x == 0:
            if e <= 0:
                raise ZeroDivisionError("0 ** nonpositive exponent")
            return Fraction(0)
        if e.denominator == 1:
            return x**e.numerator
        raise ValueError("fractional power of a negative rational")
    if isinstance(x, Surd):
        if e.denominator == 1:
            return x.pow_int(e.numerator)
        return x.to_dec().pow_frac(e)
    return x.pow_frac(e)


def nearest_integer_distance(x: Scalar) -> Scalar:
    """Distance from x to the nearest integer; always in [0, 1/2].

    Exact for rationals and surds.  For Dec, the distance function is
    1-Lipschitz, so the result carries the same error bound (the rounding
    point may be ambiguous; the distance never is).
    """
    x = as_scalar(x)
    if isinstance(x, Fraction):
        f = x - (x.numerator // x.denominator)
        return f if 2 * f <= 1 else 1 - f
    if isinstance(x, Surd):
        f = x - x.floor()
        if isinstance(f, Fraction):
            return f if 2 * f <= 1 else 1 - f
        return f if f.cmp_fraction(Fraction(1, 2)) <= 0 else 1 - f
    # Dec: compute at the stored value, error bound carries over
    with _workdps():
        v = x.val
        fv = v - mpmath.floor(v)
        d = fv if fv <= mp.mpf(1) / 2 else 1 - fv
        return Dec(d, x.err + _ulp_bound(v))


def dist_vec(xs) -> Scalar:
    """Sup-norm nearest-integer distance of a vector of scalars."""
    return smax(*[nearest_integer_distance(x) for x in xs])


def floor_scaled(x: Scalar, bits: int = 128) -> tuple[int, int]:
    """(fl, slack) with fl <= x * 2**bits < fl + 1 + slack, both integers.

    Exact rationals and surds give slack 0 (fl is the exact floor); Dec
    inputs widen slack by their error bound.
    """
    x = as_scalar(x)
    scale = 1 << bits
    if isinstance(x, Fraction):
        return (x.numerator * scale) // x.denominator, 0
    if isinstance(x, Surd):
        scaled = x * scale
        if isinstance(scaled, Fraction):
            return scaled.numerator // scaled.denominator, 0
        return scaled.floor(), 0
    lo, hi = x.bounds()
    fl = (lo.numerator * scale) // lo.denominator
    fh = (hi.numerator * scale) // hi.denominator
    return fl, fh - fl


# ---------------------------------------------------------------------------
# weight vectors


@dataclass(frozen=True)
class WeightVector:
    """(i_1, ..., i_n) with each i_j in [0, 1] and sum exactly 1 (exact
    entries) or within 1e-12 (decimal entries)."""

    weights: tuple

    def __post_init__(self):
        ws = tuple(as_scalar(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        total = Fraction(0)
        exact = True
        for w in ws:
            if isinstance(w, Dec):
                exact = False
            if ssign(w) < 0 or scmp(w, Fraction(1)) > 0:
                raise ValueError("weights must lie in [0, 1]")
        if exact:
            s = ws[0]
            for w in ws[1:]:
                s = smart_add(s, w)
            if scmp(s, Fraction(1)) != 0:
                raise ValueError(f"weights must sum to 1, got {s}")
        else:
            s = sum(to_float(w) for w in ws)
            if abs(s - 1.0) > 1e-12:
                raise ValueError(f"weights must sum to 1 within 1e-12, got {s}")

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, j):
        return self.weights[j]

    @staticmethod
    def uniform(n: int) -> "WeightVector":
        return WeightVector(tuple(Fraction(1, n) for _ in range(n)))


def parse_weights(text: str) -> WeightVector:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    return WeightVector(tuple(Fraction(p) for p in parts))
