"""Exact counting of nearest-integer-distance hits along arithmetic orbits.

Everything here reduces to the classical Euclidean-style lattice sum

    floor_sum(n, m, a, b) = sum_{i=0}^{n-1} floor((a*i + b) / m)

which evaluates in O(log max(a, m)) arbitrary-precision steps.  On top of it
sit exact counters for

    #{ 1 <= q <= N : || (q*u - w) / v || < t }          (constant threshold)
    #{ 1 <= q <= N : || q*u / v || < c * q }             (linear threshold)

with strict inequalities and exact rational thresholds.  These power the
per-sample block decisions in the measure experiments and the fast paths of
the counting module; per-q direct scans remain available everywhere as the
independent oracle.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def floor_sum(n: int, m: int, a: int, b: int) -> int:
    """sum_{i=0}^{n-1} floor((a*i + b)/m), m > 0; a, b may be negative."""
    if n <= 0:
        return 0
    if m <= 0:
        raise ValueError("modulus must be positive")
    ans = 0
    if a < 0:
        a2 = a % m
        ans -= n * (n - 1) // 2 * ((a2 - a) // m)
        a = a2
    if b < 0:
        b2 = b % m
        ans -= n * ((b2 - b) // m)
        b = b2
    while True:
        if a >= m:
            ans += n * (n - 1) // 2 * (a // m)
            a %= m
        if b >= m:
            ans += n * (b // m)
            b %= m
        y_max = a * n + b
        if y_max < m:
            return ans
        n = y_max // m
        b = y_max % m
        m, a = a, m


def _count_window_prefix(N: int, u: int, v: int, w: int, T: int) -> int:
    """#{ 1 <= q <= N : (q*u - w) mod v in [0, T) }, 0 <= T <= v."""
    if T <= 0:
        return 0
    if T > v:
        raise ValueError("window wider than modulus")
    # [x mod v < T] = floor(x/v) - floor((x-T)/v)
    # sum over q = 1..N with x = q*u - w: substitute i = q - 1
    return floor_sum(N, v, u, u - w) - floor_sum(N, v, u, u - w - T)


def _strict_window(v: int, t: Fraction) -> int:
    """Largest T with (r < t*v  <=>  r in [0, T)) for integer residues r."""
    x = t * v
    if x.denominator == 1:
        return x.numerator
    return x.numerator // x.denominator + 1


def count_dist_lt_const(N: int, u: int, v: int, t: Fraction, w: int = 0) -> int:
    """#{ 1 <= q <= N : || (q*u - w)/v || < t }, exact, strict.

    u, w integers, v > 0; t an exact rational threshold.
    """
    if N <= 0 or t <= 0:
        return 0
    if t > Fraction(1, 2):
        return N  # distances never exceed 1/2
    if 2 * t == 1:
        # all q except those with residue exactly v/2
        half = _count_residue_eq(N, u, v, w, v // 2) if v % 2 == 0 else 0
        return N - half
    T = _strict_window(v, t)
    c1 = _count_window_prefix(N, u, v, w, T)
    c2 = _count_window_prefix(N, -u, v, -w, T)
    zeros = _count_residue_eq(N, u, v, w, 0)
    return c1 + c2 - zeros


def _count_residue_eq(N: int, u: int, v: int, w: int, r: int) -> int:
    """#{ 1 <= q <= N : q*u ≡ w + r (mod v) }."""
    g = gcd(u, v)
    rhs = (w + r) % v
    if rhs % g:
        return 0
    vv, uu, rr = v // g, (u // g) % (v // g), (rhs // g) % (v // g)
    if vv == 1:
        return N
    inv = pow(uu, -1, vv)
    q0 = (rr * inv) % vv
    if q0 == 0:
        q0 = vv
    if q0 > N:
        return 0
    return (N - q0) // vv + 1


def count_dist_lt_linear(N: int, u: int, v: int, c: Fraction) -> int:
    """#{ 1 <= q <= N : || q*u/v || < c*q }, exact, strict, c > 0.

    For q with c*q > 1/2 every q hits (distances never exceed 1/2); the
    remaining range is counted through the scaled window identity
    [ (q*u*cd) mod (v*cd) < q*v*cn ], whose threshold is linear in q and
    stays within the modulus exactly when c*q <= 1/2.
    """
    if N <= 0 or c <= 0:
        return 0
    cn, cd = c.numerator, c.denominator
    q_half = cd // (2 * cn)  # q <= q_half  <=>  c*q <= 1/2
    total = 0
    Nw = min(N, q_half)
    if Nw > 0:
        V, U, W = v * cd, u * cd, v * cn
        c1 = floor_sum(Nw, V, U, U) - floor_sum(Nw, V, U - W, U - W)
        c2 = floor_sum(Nw, V, -U, -U) - floor_sum(Nw, V, -U - W, -U - W)
        zeros = _count_residue_eq(Nw, u, v, 0, 0)
        total += c1 + c2 - zeros
    if q_half + 1 <= N:
        total += N - q_half
    return total


def scan_dist_lt_const(N: int, u: int, v: int, t: Fraction, w: int = 0) -> int:
    """Direct-scan oracle for count_dist_lt_const."""
    cnt = 0
    tn, td = t.numerator, t.denominator
    for q in range(1, N + 1):
        r = (q * u - w) % v
        d = min(r, v - r)
        if d * td < tn * v:
            cnt += 1
    return cnt


def scan_dist_lt_linear(N: int, u: int, v: int, c: Fraction) -> int:
    """Direct-scan oracle for count_dist_lt_linear."""
    cnt = 0
    cn, cd = c.numerator, c.denominator
    for q in range(1, N + 1):
        r = (q * u) % v
        d = min(r, v - r)
        if d * cd < cn * q * v:
            cnt += 1
    return cnt


def count_block_const(A: int, B: int, u: int, v: int, t: Fraction, w: int = 0) -> int:
    """#{ A < q <= B : || (q u - w)/v || < t }."""
    return count_dist_lt_const(B, u, v, t, w) - count_dist_lt_const(A, u, v, t, w)


def count_block_linear(A: int, B: int, u: int, v: int, c: Fraction) -> int:
    return count_dist_lt_linear(B, u, v, c) - count_dist_lt_linear(A, u, v, c)


# ---------------------------------------------------------------------------
# block existence for monotone per-q thresholds


def exists_hit_const(A: int, B: int, u: int, v: int, t: Fraction, w: int = 0) -> bool:
    return count_block_const(A, B, u, v, t, w) > 0


def exists_hit_monotone(
    A: int,
    B: int,
    u: int,
    v: int,
    t_at,
    w: int = 0,
    direct_limit: int = 64,
) -> bool:
    """Does some q in (A, B] satisfy ||(q u - w)/v|| < t_at(q)?

    ``t_at(q)`` must be monotone (either direction) in q and return exact
    Fractions.  Certified: bracketing constant-threshold counts decide fast,
    disagreement bisects down to direct per-q checks.
    """
    if A >= B:
        return False
    t_lo_end, t_hi_end = t_at(A + 1), t_at(B)
    t_min, t_max = min(t_lo_end, t_hi_end), max(t_lo_end, t_hi_end)
    if t_min > 0 and count_block_const(A, B, u, v, t_min, w) > 0:
        return True
    if t_max <= 0 or count_block_const(A, B, u, v, t_max, w) == 0:
        return False
    if B - A <= direct_limit:
        for q in range(A + 1, B + 1):
            r = (q * u - w) % v
            d = Fraction(min(r, v - r), v)
            if d < t_at(q):
                return True
        return False
    mid = (A + B) // 2
    return exists_hit_monotone(A, mid, u, v, t_at, w, direct_limit) or exists_hit_monotone(
        mid, B, u, v, t_at, w, direct_limit
    )
