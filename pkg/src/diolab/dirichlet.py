"""Weighted Dirichlet searches, improvability profiles, and the finite-scale
rationality probe.

Search contracts are exact: scans use a float prefilter with conservative
slack to narrow the argmin down to a handful of candidate q, which are then
compared in exact (or certified-decimal) arithmetic.  One-dimensional exact
inputs skip the scan entirely: best approximations of the second kind are
exactly the convergents, so minima of ||q*alpha|| live on convergent
denominators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .contfrac import convergent_stream
from .errors import PrecisionExhausted
from .scalars import (
    Dec,
    Scalar,
    Surd,
    WeightVector,
    as_scalar,
    floor_scaled,
    is_exact,
    nearest_integer_distance,
    scalar_pow,
    scmp,
    smart_mul,
    ssign,
    to_float,
)

_SCAN_BITS = 128
_SCALE = 1 << _SCAN_BITS


@dataclass(frozen=True)
class DirichletResult:
    q_star: int
    value: Scalar
    per_coordinate: tuple

    def as_dict(self):
        from .report import scalar_json

        return {
            "q_star": self.q_star,
            "value": scalar_json(self.value),
            "per_coordinate": [scalar_json(d) for d in self.per_coordinate],
        }


@dataclass(frozen=True)
class ProfileSeries:
    schedule: tuple
    values: tuple
    kind: str  # "dirichlet-constant" | "bad-score" | "littlewood"
    witnesses: tuple = ()

    def as_dict(self):
        from .report import scalar_json

        return {
            "kind": self.kind,
            "schedule": list(self.schedule),
            "values": [scalar_json(v) for v in self.values],
            "witnesses": list(self.witnesses),
        }


# ---------------------------------------------------------------------------
# incremental coordinate scanners


class _Coord:
    """Per-coordinate state for incremental residue scanning at fixed scale.

    Exact Fractions iterate their true residue; surds and decimals iterate a
    scaled-integer proxy whose error after q steps is at most q * unit_slack
    scaled units.
    """

    __slots__ = ("kind", "num", "den", "res", "alpha", "slack_unit")

    def __init__(self, alpha: Scalar):
        self.alpha = as_scalar(alpha)
        if isinstance(self.alpha, Fraction):
            self.kind = "frac"
            self.num = self.alpha.numerator % self.alpha.denominator
            self.den = self.alpha.denominator
            self.res = 0
            self.slack_unit = 0
        else:
            self.kind = "scaled"
            fl, slack = floor_scaled(self.alpha, _SCAN_BITS)
            self.num = fl % _SCALE
            self.den = _SCALE
            self.res = 0
            self.slack_unit = slack + 1

    def step(self) -> tuple[int, int]:
        """Advance q by one; return (dist_scaled_num, den) where the true
        distance lies in [max(0, num - q*slack)/den, (num + q*slack)/den]."""
        self.res = (self.res + self.num) % self.den
        return min(self.res, self.den - self.res), self.den

    def exact_dist(self, q: int) -> Scalar:
        return nearest_integer_distance(smart_mul(Fraction(q), self.alpha))


def _exact_weighted_value(alphas, weights, q: int) -> tuple[Scalar, tuple]:
    per = tuple(
        nearest_integer_distance(smart_mul(Fraction(q), as_scalar(a))) for a in alphas
    )
    vals = [smart_mul(w, d) for w, d in zip(weights, per)]
    best = vals[0]
    for v in vals[1:]:
        if scmp(v, best) > 0:
            best = v
    return best, per


def _argmin_scan(alphas, weight_scalars, Q: int) -> int:
    """Smallest q in [1, Q] minimizing max_j w_j * ||q a_j||, exact."""
    coords = [_Coord(a) for a in alphas]
    wf = [max(to_float(w), 0.0) for w in weight_scalars]
    best_up = float("inf")  # upper bound on the minimal value
    candidates: list[int] = []
    # pass 1: upper bound on the minimum
    for q in range(1, Q + 1):
        vmax_lo = 0.0
        vmax_up = 0.0
        exact_zero = True
        for c, w in zip(coords, wf):
            num, den = c.step()
            slack = q * c.slack_unit
            d_up = (num + slack) / den
            d_lo = max(0, num - slack) / den
            vmax_up = max(vmax_up, w * d_up * (1 + 1e-12))
            vmax_lo = max(vmax_lo, w * d_lo * (1 - 1e-12))
            if num != 0 or c.slack_unit != 0:
                exact_zero = False
        if exact_zero:
            return q  # certified zero; no later q can beat it, earlier were larger
        if vmax_up < best_up:
            best_up = vmax_up
    # pass 2: candidates whose lower bound does not exceed the best upper bound
    coords = [_Coord(a) for a in alphas]
    for q in range(1, Q + 1):
        vmax_lo = 0.0
        for c, w in zip(coords, wf):
            num, den = c.step()
            slack = q * c.slack_unit
            d_lo = max(0, num - slack) / den
            vmax_lo = max(vmax_lo, w * d_lo * (1 - 1e-12))
        if vmax_lo <= best_up * (1 + 1e-9) + 1e-300:
            candidates.append(q)
    # exact comparison of the (few) candidates
    best_q = None
    best_val: Optional[Scalar] = None
    for q in candidates:
        v, _ = _exact_weighted_value(alphas, weight_scalars, q)
        if best_val is None or scmp(v, best_val) < 0:
            best_q, best_val = q, v
    assert best_q is not None
    return best_q


def _argmin_1d_exact(alpha: Scalar, Q: int) -> int:
    """Smallest q <= Q minimizing ||q alpha|| for exact alpha, via
    convergents (first convergent attaining the minimum)."""
    best_q, best_d = None, None
    for conv in convergent_stream(alpha):
        if conv.q > Q:
            break
        d = nearest_integer_distance(smart_mul(Fraction(conv.q), as_scalar(alpha)))
        if best_d is None or scmp(d, best_d) < 0:
            best_q, best_d = conv.q, d
        if ssign(d) == 0:
            break
    if best_q is None:
        raise PrecisionExhausted("no certified convergent below the bound")
    return best_q


def dirichlet_search(alphas: Sequence, i: WeightVector, Q: int) -> DirichletResult:
    """argmin_{1 <= q <= Q} max_j Q^{i_j} ||q alpha_j||, smallest q on ties.

    The returned value is strictly below 1 -- that is the weighted
    pigeonhole guarantee and is asserted, not hoped for.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    alphas = [as_scalar(a) for a in alphas]
    if len(alphas) != len(i):
        raise ValueError("alpha and weight dimensions differ")
    weights = [scalar_pow(Fraction(Q), w if not isinstance(w, Dec) else w) for w in i.weights]
    if len(alphas) == 1 and is_exact(alphas[0]):
        q_star = _argmin_1d_exact(alphas[0], Q)
    else:
        q_star = _argmin_scan(alphas, weights, Q)
    value, per = _exact_weighted_value(alphas, weights, q_star)
    assert scmp(value, Fraction(1)) < 0, "weighted Dirichlet guarantee violated"
    return DirichletResult(q_star=q_star, value=value, per_coordinate=per)


# ---------------------------------------------------------------------------
# profiles


def _prefix_min_maxdist(alphas, checkpoints: Sequence[int]):
    """For each checkpoint Q, the smallest q <= Q minimizing
    max_j ||q a_j|| (uniform-weight prefix minimum), exact."""
    coords = [_Coord(a) for a in alphas]
    cps = sorted(checkpoints)
    out = {}
    best_q: Optional[int] = None
    best_val: Optional[Scalar] = None
    best_up = float("inf")
    ci = 0
    Qmax = cps[-1]
    for q in range(1, Qmax + 1):
        vmax_lo, vmax_up = 0.0, 0.0
        for c in coords:
            num, den = c.step()
            slack = q * c.slack_unit
            vmax_up = max(vmax_up, ((num + slack) / den) * (1 + 1e-12))
            vmax_lo = max(vmax_lo, (max(0, num - slack) / den) * (1 - 1e-12))
        if best_val is None or vmax_lo <= best_up:
            v, _ = _exact_weighted_value(alphas, [Fraction(1)] * len(alphas), q)
            if best_val is None or scmp(v, best_val) < 0:
                best_q, best_val = q, v
                best_up = min(best_up, vmax_up)
        while ci < len(cps) and q == cps[ci]:
            out[cps[ci]] = (best_q, best_val)
            ci += 1
        if best_val is not None and ssign(best_val) == 0:
            break
    for cp in cps[ci:]:
        out[cp] = (best_q, best_val)
    return out


def dirichlet_profile(alphas: Sequence, i: WeightVector, schedule: Sequence[int]) -> ProfileSeries:
    """c(Q) = min_{q <= Q} max_j Q^{i_j} ||q alpha_j|| over the schedule.

    Reported verbatim; the weighted pigeonhole argument forces c(Q) < 1 and
    that much is asserted, but no singularity classification is baked in.
    """
    schedule = list(schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be non-empty and strictly increasing")
    alphas = [as_scalar(a) for a in alphas]
    uniform = all(w == Fraction(1, len(alphas)) for w in i.weights)
    values, witnesses = [], []
    if uniform and (len(alphas) == 1 or max(schedule) > 10_000):
        if len(alphas) == 1 and is_exact(alphas[0]):
            pre = {}
            for Q in schedule:
                qs = _argmin_1d_exact(alphas[0], Q)
                pre[Q] = (qs, nearest_integer_distance(smart_mul(Fraction(qs), alphas[0])))
        else:
            pre = _prefix_min_maxdist(alphas, schedule)
        for Q in schedule:
            q_star, dmax = pre[Q]
            w = scalar_pow(Fraction(Q), Fraction(1, len(alphas)))
            v = smart_mul(w, dmax)
            assert scmp(v, Fraction(1)) < 0
            values.append(v)
            witnesses.append(q_star)
    else:
        for Q in schedule:
            r = dirichlet_search(alphas, i, Q)
            values.append(r.value)
            witnesses.append(r.q_star)
    return ProfileSeries(tuple(schedule), tuple(values), "dirichlet-constant", tuple(witnesses))


def bad_profile(alphas: Sequence, i: WeightVector, schedule: Sequence[int]) -> ProfileSeries:
    """m(Q) = min_{q <= Q} max_j q^{i_j} ||q alpha_j||; non-increasing in Q."""
    schedule = list(schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be non-empty and strictly increasing")
    alphas = [as_scalar(a) for a in alphas]
    n = len(alphas)
    if n != len(i):
        raise ValueError("alpha and weight dimensions differ")
    Qmax = schedule[-1]
    values, witnesses = [], []
    if n == 1 and is_exact(alphas[0]):
        # candidates: convergent denominators (others have q||q a|| >= 1/2
        # while q=1, itself a convergent, already gives ||a|| <= 1/2)
        convs = []
        for conv in convergent_stream(alphas[0]):
            if conv.q > Qmax:
                break
            convs.append(conv.q)
            d = nearest_integer_distance(smart_mul(Fraction(conv.q), alphas[0]))
            if ssign(d) == 0:
                break
        best_q, best_val = None, None
        ci = 0
        for Q in schedule:
            while ci < len(convs) and convs[ci] <= Q:
                q = convs[ci]
                v = smart_mul(
                    Fraction(q), nearest_integer_distance(smart_mul(Fraction(q), alphas[0]))
                )
                if best_val is None or scmp(v, best_val) < 0:
                    best_q, best_val = q, v
                ci += 1
            values.append(best_val)
            witnesses.append(best_q)
        return ProfileSeries(tuple(schedule), tuple(values), "bad-score", tuple(witnesses))
    # general scan with per-q weights q^{i_j}
    coords = [_Coord(a) for a in alphas]
    wexp = [w for w in i.weights]
    best_q, best_val = None, None
    best_up = float("inf")
    ci = 0
    cps = schedule
    for q in range(1, Qmax + 1):
        vmax_lo, vmax_up = 0.0, 0.0
        for c, e in zip(coords, wexp):
            num, den = c.step()
            slack = q * c.slack_unit
            wq = q ** to_float(e)
            vmax_up = max(vmax_up, wq * ((num + slack) / den) * (1 + 1e-11))
            vmax_lo = max(vmax_lo, wq * (max(0, num - slack) / den) * (1 - 1e-11))
        if best_val is None or vmax_lo <= best_up:
            weights = [scalar_pow(Fraction(q), e) for e in wexp]
            v, _ = _exact_weighted_value(alphas, weights, q)
            if best_val is None or scmp(v, best_val) < 0:
                best_q, best_val = q, v
                best_up = min(best_up, vmax_up)
        while ci < len(cps) and q == cps[ci]:
            values.append(best_val)
            witnesses.append(best_q)
            ci += 1
        if best_val is not None and ssign(best_val) == 0:
            break
    while ci < len(cps):
        values.append(best_val)
        witnesses.append(best_q)
        ci += 1
    return ProfileSeries(tuple(schedule), tuple(values), "bad-score", tuple(witnesses))


# ---------------------------------------------------------------------------
# rationality probe


@dataclass(frozen=True)
class RationalityVerdict:
    kind: str  # "stable-rational" | "no-stable-fraction" | "inconclusive"
    fraction: Optional[Fraction] = None
    failed_at: Optional[int] = None

    def as_dict(self):
        d = {"verdict": self.kind}
        if self.fraction is not None:
            d["fraction"] = f"{self.fraction.numerator}/{self.fraction.denominator}"
        if self.failed_at is not None:
            d["failed_at"] = self.failed_at
        return d


def rationality_probe(alpha: Scalar, Q0: int, Q1: int) -> RationalityVerdict:
    """For every Q in [Q0, Q1] find the best (p, q) with q <= Q and test
    |q*alpha - p| < 1/(3Q).

    All Q passing with one and the same reduced fraction certifies
    StableRational; any failing Q certifies NoStableFraction; an undecidable
    comparison (decimal input) yields Inconclusive.
    """
    if Q0 < 1 or Q1 <= Q0:
        raise ValueError("need 1 <= Q0 < Q1")
    alpha = as_scalar(alpha)
    if isinstance(alpha, Dec) and alpha.err > 0:
        return _rationality_probe_dec(alpha, Q0, Q1)
    # exact input: walk convergent intervals
    convs = []
    for conv in convergent_stream(alpha):
        convs.append(conv)
        if conv.q > Q1:
            break
        d = nearest_integer_distance(smart_mul(Fraction(conv.q), alpha))
        if ssign(d) == 0:
            break
    stable: Optional[Fraction] = None
    Q = Q0
    while Q <= Q1:
        # best convergent with denominator <= Q and the reach of this interval
        k = max(j for j, c in enumerate(convs) if c.q <= Q)
        c = convs[k]
        upper = min(Q1, convs[k + 1].q - 1) if k + 1 < len(convs) else Q1
        dist = sabs_qdist(alpha, c)
        if ssign(dist) == 0:
            frac = Fraction(c.p, c.q)
            if stable is None:
                stable = frac
            elif stable != frac:
                raise AssertionError("distinct stable fractions cannot both pass")
            Q = upper + 1
            continue
        # dist < 1/(3Q)  <=>  Q < 1/(3 dist); fails first at Q_fail
        # compute Q_cap = floor(1/(3 dist)) when finite
        inv3 = scalar_pow(smart_mul(Fraction(3), dist), Fraction(-1))
        from .scalars import floor_scalar

        q_cap = floor_scalar(inv3)
        if scmp(smart_mul(Fraction(3 * q_cap), dist), Fraction(1)) == 0:
            q_cap -= 1  # strict inequality
        if Q > q_cap:
            return RationalityVerdict("no-stable-fraction", failed_at=Q)
        if upper > q_cap:
            return RationalityVerdict("no-stable-fraction", failed_at=q_cap + 1)
        frac = Fraction(c.p, c.q)
        if stable is None:
            stable = frac
        elif stable != frac:
            raise AssertionError("distinct stable fractions cannot both pass")
        Q = upper + 1
    return RationalityVerdict("stable-rational", fraction=stable)


def sabs_qdist(alpha: Scalar, conv) -> Scalar:
    return nearest_integer_distance(smart_mul(Fraction(conv.q), as_scalar(alpha)))


def _rationality_probe_dec(alpha: Dec, Q0: int, Q1: int) -> RationalityVerdict:
    lo, hi = alpha.bounds()
    stable: Optional[Fraction] = None
    for Q in range(Q0, Q1 + 1):
        # best q for the midpoint guides the candidate fraction
        ok_candidates = []
        ambiguous = False
        for q in range(1, Q + 1):
            mid_lo = lo * q
            p = round((mid_lo + hi * q) / 2)
            # worst-case distance over the interval
            d_hi = max(abs(lo * q - p), abs(hi * q - p))
            d_lo_val = min(abs(lo * q - p), abs(hi * q - p))
            d_lo_val = Fraction(0) if (lo * q - p) * (hi * q - p) < 0 else d_lo_val
            bound = Fraction(1, 3 * Q)
            if d_hi < bound:
                ok_candidates.append((q, p))
            elif d_lo_val < bound:
                ambiguous = True
        if ok_candidates:
            q, p = ok_candidates[0]
            g = Fraction(p, q)
            if stable is None:
                stable = g
            elif stable != g:
                return RationalityVerdict("inconclusive", failed_at=Q)
            continue
        if ambiguous:
            return RationalityVerdict("inconclusive", failed_at=Q)
        return RationalityVerdict("no-stable-fraction", failed_at=Q)
    return RationalityVerdict("stable-rational", fraction=stable)


# ---------------------------------------------------------------------------
# aggregation


@dataclass(frozen=True)
class ImprovabilityReport:
    c_profile: ProfileSeries
    m_profile: ProfileSeries
    c_min: Scalar
    m_min: Scalar
    c_trend: str  # "decreasing" | "flat" | "mixed"

    def as_dict(self):
        from .report import scalar_json

        return {
            "c_profile": self.c_profile.as_dict(),
            "m_profile": self.m_profile.as_dict(),
            "c_min": scalar_json(self.c_min),
            "m_min": scalar_json(self.m_min),
            "c_trend": self.c_trend,
        }


def improvability_report(alphas: Sequence, i: WeightVector, schedule: Sequence[int]) -> ImprovabilityReport:
    """Aggregates both profiles; deliberately emits no asymptotic
    set-membership booleans (those are limits, not finite observations)."""
    cp = dirichlet_profile(alphas, i, schedule)
    mp = bad_profile(alphas, i, schedule)
    c_min = cp.values[0]
    for v in cp.values[1:]:
        if scmp(v, c_min) < 0:
            c_min = v
    m_min = mp.values[-1]  # non-increasing
    diffs = [scmp(b, a) for a, b in zip(cp.values, cp.values[1:])]
    if all(d < 0 for d in diffs):
        trend = "decreasing"
    elif all(d == 0 for d in diffs):
        trend = "flat"
    else:
        trend = "mixed"
    return ImprovabilityReport(cp, mp, c_min, m_min, trend)
