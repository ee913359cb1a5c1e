"""Approximating-function families and series tooling.

A family evaluates to a positive non-increasing value for q >= q_min and
carries enough structure to classify the series  sum q^(n-s) psi(q)^s
analytically where possible.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from mpmath import mp
import mpmath

from .errors import EmptyRange, NonMonotonePsi
from .scalars import (
    DEFAULT_DIGITS,
    Dec,
    Scalar,
    Surd,
    as_scalar,
    dist_vec,
    is_exact,
    rational_pow_exact,
    scalar_pow,
    scmp,
    smart_add,
    smart_mul,
    ssign,
    to_dec,
)

# default cap on the number of exactly-accumulated terms; beyond it sums
# switch to error-tracked decimals (exact harmonic-type denominators grow
# like lcm(1..Q) and become unusable long before they become wrong)
EXACT_TERM_LIMIT = 2000


class Verdict(enum.Enum):
    CONVERGES = "converges"
    DIVERGES = "diverges"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Power:
    """q -> q**(-tau), tau > 0."""

    tau: Fraction

    def __post_init__(self):
        object.__setattr__(self, "tau", Fraction(self.tau))
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    q_min = 1

    def eval(self, q: int) -> Scalar:
        return scalar_pow(Fraction(q), -self.tau)

    def spec(self) -> str:
        return f"power:{self.tau}"


@dataclass(frozen=True)
class ScaledPower:
    """q -> c * q**(-tau), c > 0, tau > 0."""

    coeff: Fraction
    tau: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "tau", Fraction(self.tau))
        if self.coeff <= 0 or self.tau <= 0:
            raise ValueError("coefficient and tau must be positive")

    q_min = 1

    def eval(self, q: int) -> Scalar:
        return smart_mul(self.coeff, scalar_pow(Fraction(q), -self.tau))

    def spec(self) -> str:
        return f"scaled:{self.coeff},{self.tau}"


@dataclass(frozen=True)
class LogPower:
    """q -> (q * (log q)**a)**(-b), b > 0.

    Domain starts at q = 3 so that the family is non-increasing on its whole
    domain; this additionally requires a >= -log 3.
    """

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.b <= 0:
            raise ValueError("outer exponent b must be positive")
        # monotone from q = 3 iff log q + a >= 0 there
        if self.a < 0 and float(self.a) < -math.log(3.0):
            raise ValueError("a < -log 3 breaks monotonicity on q >= 3")

    q_min = 3

    def eval(self, q: int) -> Scalar:
        if q < self.q_min:
            raise ValueError(f"log-power family needs q >= {self.q_min}")
        with mpmath.workdps(DEFAULT_DIGITS + 10):
            base = Dec.exact(q) * Dec(mp.log(q), abs(mp.log(q)) * mp.mpf(2) ** (6 - mp.prec)).pow_frac(self.a)
            return base.pow_frac(-self.b)

    def spec(self) -> str:
        return f"logpow:{self.a},{self.b}"


@dataclass(frozen=True)
class PsiK:
    """q -> (1/k) * q**(-1/n)."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError("k and n must be positive integers")

    q_min = 1

    def eval(self, q: int) -> Scalar:
        return smart_mul(Fraction(1, self.k), scalar_pow(Fraction(q), Fraction(-1, self.n)))

    def spec(self) -> str:
        return f"psik:{self.k},{self.n}"


@dataclass(frozen=True)
class Table:
    """Finite table of (q, value) pairs; must be non-increasing in q."""

    pairs: tuple

    def __post_init__(self):
        ps = tuple(sorted((int(q), Fraction(v)) for q, v in self.pairs))
        if not ps:
            raise ValueError("table must be non-empty")
        for (q1, v1), (q2, v2) in zip(ps, ps[1:]):
            if q1 == q2:
                raise ValueError(f"duplicate table entry q={q1}")
            if v2 > v1:
                raise NonMonotonePsi(f"table increases between q={q1} and q={q2}")
        for q, v in ps:
            if q < 1 or v <= 0:
                raise ValueError("table needs q >= 1 and positive values")
        object.__setattr__(self, "pairs", ps)

    @property
    def q_min(self):
        return self.pairs[0][0]

    @property
    def q_max(self):
        return self.pairs[-1][0]

    def eval(self, q: int) -> Scalar:
        for qq, v in self.pairs:
            if qq == q:
                return v
        raise EmptyRange(f"q={q} outside table domain")

    def domain(self):
        return [q for q, _ in self.pairs]

    def spec(self) -> str:
        return "table:<inline>"


@dataclass(frozen=True)
class Restricted:
    """base(q) where ||q*alpha|| < base(q), else exactly 0."""

    base: "ApproxFunction"
    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(as_scalar(a) for a in self.alpha))

    @property
    def q_min(self):
        return self.base.q_min

    def eval(self, q: int) -> Scalar:
        v = self.base.eval(q)
        d = dist_vec([smart_mul(Fraction(q), a) for a in self.alpha])
        if scmp(d, v) < 0:
            return v
        return Fraction(0)

    def spec(self) -> str:
        return f"restricted:{self.base.spec()}@<alpha>"


ApproxFunction = Union[Power, ScaledPower, LogPower, PsiK, Table, Restricted]


def eval_psi(psi: ApproxFunction, q: int) -> Scalar:
    if q < 1:
        raise ValueError("q must be a positive integer")
    if q < psi.q_min:
        raise ValueError(f"{psi.spec()} is defined for q >= {psi.q_min}")
    return psi.eval(q)


# ---------------------------------------------------------------------------
# series classification and partial sums


def _power_exponent(psi: ApproxFunction, n: int, s: Fraction):
    """Exponent e with q^(n-s) psi(q)^s = C * q^e * (log q)^(-g) for the
    analytic families; returns (e, g, C-as-Fraction-or-None)."""
    if isinstance(psi, Power):
        return n - s - psi.tau * s, Fraction(0), Fraction(1)
    if isinstance(psi, ScaledPower):
        return n - s - psi.tau * s, Fraction(0), psi.coeff
    if isinstance(psi, PsiK):
        return n - s - Fraction(s, psi.n), Fraction(0), Fraction(1, psi.k)
    if isinstance(psi, LogPower):
        return n - s - psi.b * s, psi.a * psi.b * s, Fraction(1)
    return None


def classify_series(psi: ApproxFunction, n: int, s) -> Verdict:
    """Verdict for sum_{q} q^(n-s) psi(q)^s.

    Analytic for the power-type families (a log-factor refinement applies at
    the critical exponent); Unknown for tables and restricted families.
    """
    s = as_scalar(s)
    if ssign(s) <= 0 or scmp(s, Fraction(n)) > 0:
        raise ValueError("s must lie in (0, n]")
    if isinstance(psi, (Table, Restricted)):
        return Verdict.UNKNOWN
    if isinstance(s, Dec):
        # classify only when the verdict is stable over the error interval
        lo, hi = s.bounds()
        va = classify_series(psi, n, lo)
        vb = classify_series(psi, n, hi)
        return va if va == vb else Verdict.UNKNOWN
    e, g, _ = _power_exponent(psi, n, Fraction(s))
    if e < -1:
        return Verdict.CONVERGES
    if e > -1:
        return Verdict.DIVERGES
    # critical exponent: sum behaves like sum 1/(q (log q)^g)
    return Verdict.CONVERGES if g > 1 else Verdict.DIVERGES


def series_partial_sum(
    psi: ApproxFunction, n: int, s, Q: int, exact_limit: int = EXACT_TERM_LIMIT
) -> Scalar:
    """sum_{q_min <= q <= Q} q^(n-s) psi(q)^s.

    Exact where every term is exact and Q is small enough for exact
    accumulation to stay usable; error-tracked decimal otherwise.
    """
    s = as_scalar(s)
    if ssign(s) <= 0 or scmp(s, Fraction(n)) > 0:
        raise ValueError("s must lie in (0, n]")
    if Q < 1:
        raise ValueError("Q must be >= 1")
    sf = Fraction(s) if isinstance(s, Fraction) else None
    total: Scalar = Fraction(0)
    use_exact = sf is not None and (Q - psi.q_min + 1) <= exact_limit
    info = _power_exponent(psi, n, sf) if sf is not None else None
    for q in range(psi.q_min, Q + 1):
        if isinstance(psi, Table) and q not in dict(psi.pairs):
            continue
        if info is not None and not isinstance(psi, (Table, Restricted)):
            e, g, coeff = info
            term = _analytic_term(psi, q, e, g, coeff, sf, use_exact)
        else:
            v = eval_psi(psi, q)
            if ssign(v) == 0:
                continue
            term = smart_mul(scalar_pow(Fraction(q), Fraction(n) - Fraction(s) if sf is not None else smart_sub_dec(n, s)),
                             scalar_pow(v, Fraction(s) if sf is not None else s))
        if not use_exact and is_exact(term):
            term = to_dec(term)
        total = smart_add(total, term)
    return total


def smart_sub_dec(n, s):
    return smart_add(Fraction(n), smart_mul(as_scalar(s), Fraction(-1)))


def _analytic_term(psi, q, e, g, coeff, s, use_exact) -> Scalar:
    c = rational_pow_exact(coeff, s) if coeff > 0 else None
    qe = rational_pow_exact(Fraction(q), e)
    if g == 0 and c is not None and qe is not None and use_exact:
        return c * qe
    # decimal path
    t = to_dec(coeff).pow_frac(s) * to_dec(Fraction(q)).pow_frac(e)
    if g != 0:
        with mpmath.workdps(DEFAULT_DIGITS + 10):
            lg = Dec(mp.log(q), abs(mp.log(q)) * mp.mpf(2) ** (6 - mp.prec))
        t = t * lg.pow_frac(-g)
    return t


@dataclass
class CondensationReport:
    """Two-sided comparison between a direct partial sum and its condensed
    (geometric-block) counterpart."""

    k: int
    J: int
    q_start: int
    j_start: int
    direct: Scalar
    condensed_from_j_start: Scalar
    condensed_tail: Scalar  # blocks fully inside the summed range
    lower: Scalar
    upper: Scalar
    sandwich_holds: bool

    def as_dict(self):
        from .report import scalar_json

        return {
            "k": self.k,
            "J": self.J,
            "direct": scalar_json(self.direct),
            "condensed": scalar_json(self.condensed_from_j_start),
            "lower": scalar_json(self.lower),
            "upper": scalar_json(self.upper),
            "sandwich_holds": self.sandwich_holds,
        }


def condensation_check(
    psi: ApproxFunction, n: int, k: int, J: int, exact_limit: int = EXACT_TERM_LIMIT
) -> CondensationReport:
    """Check the two-sided comparison between sum phi(q) and
    sum k^j phi(k^j) with phi(q) = psi(q)^n.

    With q0 = q_min and j0 the first index with k^j0 >= q0:

        direct >= (1 - 1/k) * sum_{j0 < j <= J} k^j phi(k^j)
        direct <= head(q0 .. k^j0) + (k - 1) * sum_{j0 <= j < J} k^j phi(k^j)
                  + phi(k^J) terms folded into the last block

    Monotonicity of phi is verified on every evaluated point.
    """
    if k < 2 or J < 1:
        raise ValueError("need k >= 2 and J >= 1")
    q0 = psi.q_min
    if isinstance(psi, Table) and k**J > psi.q_max:
        raise EmptyRange("condensation range exceeds table domain")
    j0 = 0
    while k**j0 < q0:
        j0 += 1

    Qtop = k**J
    use_exact = (Qtop - q0 + 1) <= exact_limit

    def phi(q: int) -> Scalar:
        v = eval_psi(psi, q)
        t = scalar_pow(v, Fraction(n)) if ssign(v) != 0 else Fraction(0)
        if not use_exact and is_exact(t):
            t = to_dec(t)
        return t

    direct: Scalar = Fraction(0)
    prev = None
    for q in range(q0, Qtop + 1):
        if isinstance(psi, Table):
            dom = dict(psi.pairs)
            if q not in dom:
                raise EmptyRange(f"table missing q={q} inside condensation range")
        v = phi(q)
        if prev is not None and scmp(v, prev) > 0:
            raise NonMonotonePsi(f"phi increased at q={q}")
        prev = v
        direct = smart_add(direct, v)

    condensed_all: Scalar = Fraction(0)  # j = j0 .. J
    condensed_tail: Scalar = Fraction(0)  # j = j0+1 .. J
    cond_head: Scalar = Fraction(0)  # j = j0 .. J-1
    for j in range(j0, J + 1):
        t = smart_mul(Fraction(k**j), phi(k**j))
        condensed_all = smart_add(condensed_all, t)
        if j > j0:
            condensed_tail = smart_add(condensed_tail, t)
        if j < J:
            cond_head = smart_add(cond_head, t)

    head: Scalar = Fraction(0)  # q0 .. k^j0 inclusive
    for q in range(q0, k**j0 + 1):
        head = smart_add(head, phi(q))

    lower = smart_mul(Fraction(k - 1, k), condensed_tail)
    upper = smart_add(head, smart_mul(Fraction(k - 1), condensed_all))
    holds = scmp(direct, lower) >= 0 and scmp(direct, upper) <= 0
    return CondensationReport(
        k=k,
        J=J,
        q_start=q0,
        j_start=j0,
        direct=direct,
        condensed_from_j_start=condensed_all,
        condensed_tail=condensed_tail,
        lower=lower,
        upper=upper,
        sandwich_holds=holds,
    )


# ---------------------------------------------------------------------------
# canonical text form


def parse_scalar_spec(text: str) -> Scalar:
    """rat:p/q | surd:a,b,c,D | dec:<digits>[@err]."""
    from .scalars import make_surd

    kind, _, rest = text.partition(":")
    if kind == "rat":
        return Fraction(rest)
    if kind == "surd":
        a, b, c, D = (int(t) for t in rest.split(","))
        return as_scalar(make_surd(a, b, c, D))
    if kind == "dec":
        digits, _, err = rest.partition("@")
        return Dec.from_str(digits, err or None)
    raise ValueError(f"unknown scalar spec {text!r}")


def parse_psi(text: str, base_dir: Path | None = None) -> ApproxFunction:
    """power:2 | scaled:0.5,1 | logpow:1,1 | psik:3,2 | table:<path> |
    restricted:<base>@<alpha-spec>[;<alpha-spec>...]"""
    kind, _, rest = text.partition(":")
    if kind == "power":
        return Power(Fraction(rest))
    if kind == "scaled":
        c, tau = rest.split(",")
        return ScaledPower(_frac_from_text(c), _frac_from_text(tau))
    if kind == "logpow":
        a, b = rest.split(",")
        return LogPower(_frac_from_text(a), _frac_from_text(b))
    if kind == "psik":
        k, n = rest.split(",")
        return PsiK(int(k), int(n))
    if kind == "table":
        path = Path(rest)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return load_table(path)
    if kind == "restricted":
        base_text, _, alpha_text = rest.partition("@")
        base = parse_psi(base_text, base_dir)
        alphas = tuple(parse_scalar_spec(t) for t in alpha_text.split(";"))
        return Restricted(base, alphas)
    raise ValueError(f"unknown approximating-function spec {text!r}")


def _frac_from_text(t: str) -> Fraction:
    t = t.strip()
    return Fraction(t)


def load_table(path) -> Table:
    """Table file: one `q,value` pair per line; '#' comments allowed; values
    may be decimals or fractions like 1/3."""
    pairs = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        q_text, v_text = (t.strip() for t in line.split(","))
        pairs.append((int(q_text), Fraction(v_text)))
    return Table(tuple(pairs))
