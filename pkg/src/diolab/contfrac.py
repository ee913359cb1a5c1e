"""Continued fractions: certified expansion, convergents, best-approximation
verification, and bounded-partial-quotient diagnostics.

Expansion backends:

* rationals -- Euclidean algorithm, canonical form (last partial >= 2),
* quadratic surds -- the classical reduced-triple iteration on integer
  states (P, Q) with radicand N; the period is detected by state repetition
  and is minimal,
* decimals -- interval expansion over [val - err, val + err]; a partial is
  emitted only if every real in the interval shares it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .errors import EmptyRange, PrecisionExhausted
from .scalars import (
    Dec,
    Scalar,
    Surd,
    as_scalar,
    isqrt,
    nearest_integer_distance,
    sabs,
    scmp,
    smart_mul,
    smart_sub,
    ssign,
)


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError("convergent denominator must be positive")
        if math.gcd(abs(self.p), self.q) != 1:
            raise ValueError("convergent must be in lowest terms")

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class CFExpansion:
    """a0 + partial quotients, plus how far the list is certified.

    status is one of:
      * "finite"    -- exact rational, canonical form, complete;
      * "periodic"  -- quadratic surd; partials hold the pre-period plus one
                       full period, `periodic_from` marks where the (minimal)
                       period starts;
      * "truncated" -- all stored partials certified, more exist.
    """

    a0: int
    partials: tuple
    status: str
    periodic_from: Optional[int] = None

    def __post_init__(self):
        if any(a < 1 for a in self.partials):
            raise ValueError("partial quotients must be >= 1")
        if self.status == "periodic":
            if self.periodic_from is None or not (0 <= self.periodic_from < len(self.partials)):
                raise ValueError("periodic expansion needs a valid period start")

    @property
    def period(self) -> Optional[tuple]:
        if self.status != "periodic":
            return None
        return self.partials[self.periodic_from :]

    def partial(self, k: int) -> int:
        """k-th partial quotient a_k, k >= 1; unrolls the period."""
        if k < 1:
            raise ValueError("partials are indexed from 1")
        idx = k - 1
        if idx < len(self.partials):
            return self.partials[idx]
        if self.status == "periodic":
            per = self.period
            off = (idx - self.periodic_from) % len(per)
            return per[off]
        raise EmptyRange(f"partial a_{k} exceeds certified depth {len(self.partials)}")

    def depth_available(self) -> float:
        return math.inf if self.status == "periodic" else len(self.partials)

    def as_dict(self):
        d = {"a0": self.a0, "partials": list(self.partials), "status": self.status}
        if self.periodic_from is not None:
            d["periodic_from"] = self.periodic_from
        return d


# ---------------------------------------------------------------------------
# expansion backends


def _expand_rational(x: Fraction, max_depth: int):
    a0 = x.numerator // x.denominator
    partials = []
    p, q = x.numerator - a0 * x.denominator, x.denominator  # 0 <= p < q
    while p != 0:
        a, r = divmod(q, p)
        partials.append(a)
        q, p = p, r
    # canonical form: last partial >= 2
    if len(partials) >= 2 and partials[-1] == 1:
        partials = partials[:-2] + [partials[-2] + 1]
    complete = True
    if max_depth < len(partials):
        partials = partials[:max_depth]
        complete = False
    return a0, partials, ("finite" if complete else "truncated")


def _surd_state(x: Surd):
    """Normalize x = (P + sqrt(N)) / Q with Q | N - P**2."""
    if x.b > 0:
        P, Q, N = x.a, x.c, x.b * x.b * x.D
    else:
        P, Q, N = -x.a, -x.c, x.b * x.b * x.D
    if (N - P * P) % Q != 0:
        P, N, Q = P * abs(Q), N * Q * Q, Q * abs(Q)
    return P, Q, N


def _surd_partials(x: Surd, max_depth: int):
    P, Q, N = _surd_state(x)
    sN = isqrt(N)

    def floor_state(P, Q):
        # floor((P + sqrt(N))/Q); estimate with sqrt(N) in [sN, sN+1),
        # then certify by exact integer comparison
        m = (P + sN) // Q
        while not _le_state(m, P, Q, N):
            m -= 1
        while _le_state(m + 1, P, Q, N):
            m += 1
        return m

    a0 = floor_state(P, Q)
    P = a0 * Q - P
    Q = (N - P * P) // Q
    partials = []
    seen = {}
    periodic_from = None
    while len(partials) < max_depth:
        key = (P, Q)
        if key in seen:
            periodic_from = seen[key]
            break
        seen[key] = len(partials)
        a = floor_state(P, Q)
        partials.append(a)
        P = a * Q - P
        Q = (N - P * P) // Q
    if periodic_from is not None:
        return a0, partials, "periodic", periodic_from
    return a0, partials, "truncated", None


def _le_state(m: int, P: int, Q: int, N: int) -> bool:
    """m <= (P + sqrt(N))/Q, exact (sign of Q handled)."""
    t = m * Q - P
    if Q > 0:
        # m <= x  <=>  t <= sqrt(N)
        return True if t <= 0 else t * t <= N
    # Q < 0:  m <= x  <=>  t >= sqrt(N)
    return False if t < 0 else t * t >= N


def _expand_decimal(x: Dec, max_depth: int):
    lo, hi = x.bounds()
    if lo > hi:
        lo, hi = hi, lo
    a0_lo, a0_hi = lo.numerator // lo.denominator, hi.numerator // hi.denominator
    if a0_lo != a0_hi:
        raise PrecisionExhausted("integer part of the decimal is uncertified")
    a0 = a0_lo
    lo -= a0
    hi -= a0
    partials = []
    while len(partials) < max_depth:
        if lo == 0 or hi == 0:
            break  # a rational in the interval terminates here
        lo, hi = 1 / hi, 1 / lo
        fl, fh = lo.numerator // lo.denominator, hi.numerator // hi.denominator
        if fl != fh or fl < 1:
            break
        partials.append(fl)
        lo, hi = lo - fl, hi - fl
    return a0, partials, "truncated"


def cf_expand(x: Scalar, max_depth: int = 64) -> CFExpansion:
    """Continued fraction expansion with every emitted partial certified."""
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    x = as_scalar(x)
    if isinstance(x, Fraction):
        a0, partials, status = _expand_rational(x, max_depth)
        return CFExpansion(a0, tuple(partials), status)
    if isinstance(x, Surd):
        a0, partials, status, pf = _surd_partials(x, max_depth)
        return CFExpansion(a0, tuple(partials), status, pf)
    if x.err == 0:
        a0, partials, status = _expand_rational(x.bounds()[0], max_depth)
        return CFExpansion(a0, tuple(partials), status)
    a0, partials, status = _expand_decimal(x, max_depth)
    return CFExpansion(a0, tuple(partials), status)


def reconstruct(cf: CFExpansion) -> Fraction:
    """Exact value of a finite expansion (for round trips)."""
    if cf.status != "finite":
        raise ValueError("only finite expansions reconstruct exactly")
    v = Fraction(0)
    for a in reversed(cf.partials):
        v = 1 / (a + v)
    return cf.a0 + v


def convergents(cf: CFExpansion, k: int) -> list[Convergent]:
    """Convergents p_0/q_0 .. p_k/q_k via the standard recurrences."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if cf.status != "periodic" and k > len(cf.partials):
        raise EmptyRange(f"k={k} exceeds certified depth {len(cf.partials)}")
    out = []
    p_prev, q_prev = 1, 0
    p, q = cf.a0, 1
    out.append(Convergent(p, q))
    for j in range(1, k + 1):
        a = cf.partial(j)
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append(Convergent(p, q))
    return out


def convergent_stream(x: Scalar) -> Iterator[Convergent]:
    """Convergents of x in order of increasing denominator, as far as the
    expansion can be certified."""
    cf = cf_expand(x, max_depth=10_000)
    p_prev, q_prev = 1, 0
    p, q = cf.a0, 1
    yield Convergent(p, q)
    j = 1
    while True:
        try:
            a = cf.partial(j)
        except EmptyRange:
            return
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        yield Convergent(p, q)
        j += 1


def convergent_denominators_upto(x: Scalar, Q: int) -> list[Convergent]:
    """All convergents with denominator <= Q (requires certifiable depth)."""
    out = []
    for c in convergent_stream(x):
        if c.q > Q:
            break
        out.append(c)
    return out


def verify_convergent_quality(x: Scalar, c: Convergent) -> bool:
    """|x - p/q| < 1/q**2, decided exactly or raising PrecisionExhausted."""
    diff = sabs(smart_sub(as_scalar(x), Fraction(c.p, c.q)))
    return scmp(diff, Fraction(1, c.q * c.q)) < 0


def verify_best_approx(x: Scalar, c: Convergent, q_scan_limit: int) -> bool:
    """True iff no fraction with denominator 1 <= q' < c.q lies strictly
    closer to x.  The scan must cover all q' < c.q, so q_scan_limit must be
    at least c.q - 1."""
    if q_scan_limit < c.q - 1:
        raise ValueError("scan limit must cover every denominator below c.q")
    x = as_scalar(x)
    # compare |q'x - p'| * q  vs  |qx - p| * q'  (cross-multiplied distances)
    base = sabs(smart_sub(smart_mul(Fraction(c.q), x), Fraction(c.p)))
    for qq in range(1, min(q_scan_limit, c.q - 1) + 1):
        d = nearest_integer_distance(smart_mul(Fraction(qq), x))
        lhs = smart_mul(d, Fraction(c.q))
        rhs = smart_mul(base, Fraction(qq))
        if scmp(lhs, rhs) < 0:
            return False
    return True


@dataclass(frozen=True)
class BadScore:
    max_partial: int
    certified_depth: int
    exact: bool  # True when a full period certifies all partials

    def as_dict(self):
        return {
            "max_partial": self.max_partial,
            "certified_depth": self.certified_depth,
            "exact": self.exact,
        }


def bad_score(x: Scalar, depth: int) -> BadScore:
    """max over certified partials a_1..a_depth; for quadratic surds the
    maximum over one full period is exact for the whole expansion."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    cf = cf_expand(as_scalar(x), max_depth=max(depth, 64))
    if cf.status == "periodic":
        m = max(cf.partials) if cf.partials else 0
        return BadScore(m, depth, True)
    avail = min(depth, len(cf.partials))
    if avail == 0:
        raise PrecisionExhausted("no partial quotient could be certified")
    m = max(cf.partials[:avail])
    exact = cf.status == "finite" and avail == len(cf.partials)
    return BadScore(m, avail, exact)


def hurwitz_count(x: Scalar, eps, Q: int) -> int:
    """Number of q <= Q with q * ||q x|| < (1 + eps) / sqrt(5)."""
    from .scalars import make_surd

    if Q < 1:
        raise ValueError("Q must be >= 1")
    eps = Fraction(eps) if not isinstance(eps, Dec) else eps
    if isinstance(eps, Dec):
        raise TypeError("eps must be exact")
    if eps <= 0:
        raise ValueError("eps must be positive")
    # (1+eps)/sqrt(5) = (1+eps) * sqrt(5) / 5
    thr = smart_mul(Fraction(1) + eps, make_surd(0, 1, 5, 5))
    x = as_scalar(x)
    count = 0
    for q in range(1, Q + 1):
        v = smart_mul(Fraction(q), nearest_integer_distance(smart_mul(Fraction(q), x)))
        if scmp(v, thr) < 0:
            count += 1
    return count


def best_distance_upto(x: Scalar, Q: int) -> tuple[int, Scalar]:
    """(q*, ||q* x||) minimizing ||q x|| over 1 <= q <= Q, smallest q on
    ties; exact inputs only.

    Best approximations of the second kind are exactly the convergents, so
    the minimum sits at the largest certified convergent denominator <= Q.
    """
    x = as_scalar(x)
    if isinstance(x, Dec) and x.err != 0:
        raise PrecisionExhausted("best_distance_upto needs an exact input")
    best_c = None
    for c in convergent_stream(x):
        if c.q > Q:
            break
        best_c = c
    if best_c is None:
        raise PrecisionExhausted("no certified convergent available")
    d = nearest_integer_distance(smart_mul(Fraction(best_c.q), x))
    return best_c.q, d
