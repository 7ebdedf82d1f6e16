"""Exact combinatorics of the Farey graph.

Vertices are reduced slopes p/q (q >= 0, gcd = 1, infinity = 1/0); p/q and
r/s are adjacent iff |ps - qr| = 1.  This is the curve graph of the
once-punctured torus.

Distances are computed exactly by dynamic programming over continued
fraction digits: the two Farey parents of a vertex are its only neighbours
of smaller denominator, and (by planarity of the Farey tessellation) some
geodesic to any fixed basepoint always descends through a parent.  This
scales to slopes with thousands of digits, far beyond any search-based
method.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator

Slope = tuple[int, int]

INF: Slope = (1, 0)


def make_slope(p: int, q: int) -> Slope:
    """Canonical reduced slope: q >= 0; q == 0 forces p == 1."""
    if q == 0:
        if p == 0:
            raise ValueError("0/0 is not a slope")
        return INF
    if q < 0:
        p, q = -p, -q
    g = gcd(abs(p), q)
    return (p // g, q // g)


def slope_of_fraction(x: Fraction) -> Slope:
    return make_slope(x.numerator, x.denominator)


def parse_slope(text: str) -> Slope:
    """Parse "p/q" or a bare integer."""
    s = text.strip()
    if "/" in s:
        ps, qs = s.split("/", 1)
        return make_slope(int(ps), int(qs))
    return make_slope(int(s), 1)


def format_slope(v: Slope) -> str:
    return f"{v[0]}/{v[1]}"


def adjacent(u: Slope, v: Slope) -> bool:
    return abs(u[0] * v[1] - u[1] * v[0]) == 1


def cf_digits(p: int, q: int) -> list[int]:
    """Canonical continued fraction [a0; a1, ...] of p/q, q >= 1."""
    ds = []
    while q:
        a = p // q
        ds.append(a)
        p, q = q, p - a * q
    return ds


def convergents(digits: list[int]) -> list[Slope]:
    """Convergents p_k/q_k of a digit list (digits[0] may be any integer)."""
    out: list[Slope] = []
    pm1, qm1 = 1, 0
    pm2, qm2 = 0, 1
    for a in digits:
        p = a * pm1 + pm2
        q = a * qm1 + qm2
        out.append((p, q))
        pm2, qm2 = pm1, qm1
        pm1, qm1 = p, q
    return out


@lru_cache(maxsize=None)
def _dist_from_infinity(p: int, q: int) -> int:
    """d(1/0, p/q) for a reduced slope with q >= 0."""
    if q == 0:
        return 0
    ds = cf_digits(p, q)
    m = len(ds) - 1
    if m == 0:
        return 1
    g_prev2, g_prev1 = 0, 1  # G(-1) sentinel (infinity), G(0) = integers
    for k in range(1, m + 1):
        a = ds[k]
        fan = 1 + min(g_prev1, g_prev2)  # cost entering the fan at digit 1
        gk = fan if a == 1 else min(fan + (a - 1), g_prev1 + 1)
        g_prev2, g_prev1 = g_prev1, gk
    return g_prev1


def _extgcd(a: int, b: int) -> tuple[int, int]:
    """(x, y) with x*a + y*b = gcd(a, b), iterative (deep inputs)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return (x0, y0)


def normalizer_to_infinity(v: Slope) -> tuple[int, int, int, int]:
    """An SL(2,Z) matrix (a,b;c,d) with M.v = 1/0."""
    p, q = v
    x, y = _extgcd(p, q)  # x*p + y*q = 1
    return (x, y, -q, p)


def apply_matrix(m: tuple[int, int, int, int], v: Slope) -> Slope:
    a, b, c, d = m
    return make_slope(a * v[0] + b * v[1], c * v[0] + d * v[1])


def matrix_inverse(m: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    a, b, c, d = m
    det = a * d - b * c
    if det == 1:
        return (d, -b, -c, a)
    if det == -1:
        return (-d, b, c, -a)
    raise ValueError("matrix not in GL(2,Z)")


@lru_cache(maxsize=1 << 18)
def distance(u: Slope, v: Slope) -> int:
    """Exact Farey-graph distance."""
    if u == v:
        return 0
    m = normalizer_to_infinity(u)
    w = apply_matrix(m, v)
    return _dist_from_infinity(*w)


def parents(v: Slope) -> tuple[Slope, Slope]:
    """The two Farey parents (the only neighbours of smaller denominator).

    For integers the parents are the neighbouring integer and infinity.
    """
    p, q = v
    if q == 0:
        raise ValueError("infinity has no parents")
    if q == 1:
        return ((p - 1, 1) if p > 0 else (p + 1, 1), INF)
    x, _y = _extgcd(p, q)
    # x is the inverse of p mod q; the parent denominators are w and q - w
    w = x % q
    a = (p * w - 1) // q  # p*w - q*a = 1 exactly
    return (make_slope(a, w), make_slope(p - a, q - w))


def geodesic(u: Slope, v: Slope) -> list[Slope]:
    """The canonical distance-realizing vertex path from u to v.

    Parent descent in coordinates normalizing v to infinity; tied parents
    are compared by their serialized labels and the lexicographically
    least is taken (reproducible certificates).
    """
    out = geodesic_prefix(u, v, distance(u, v))
    assert out[0] == u and out[-1] == v
    return out


def geodesic_prefix(u: Slope, v: Slope, k: int) -> list[Slope]:
    """First min(k, d(u,v)) + 1 vertices of the canonical geodesic u -> v.

    Normalizes v to infinity and parent-descends from u's image, so the
    cost is k steps regardless of d(u, v).
    """
    if u == v or k <= 0:
        return [u]
    m = normalizer_to_infinity(v)
    minv = matrix_inverse(m)
    z = apply_matrix(m, u)
    path = [z]
    while z != INF and len(path) <= k:
        if _dist_from_infinity(*z) == 1:
            z = INF
        else:
            cands = list(parents(z))
            dbest = min(_dist_from_infinity(*c) for c in cands)
            tied = [c for c in cands if _dist_from_infinity(*c) == dbest]
            z = min(tied, key=lambda c: format_slope(apply_matrix(minv, c)))
        path.append(z)
    return [apply_matrix(minv, w) for w in path[:k + 1]]


def neighbors(v: Slope, num_bound: int, den_bound: int) -> Iterator[Slope]:
    """Neighbours r/s of v with |r| <= num_bound and 0 <= s <= den_bound."""
    p, q = v
    if q == 0:
        for n in range(-num_bound, num_bound + 1):
            yield (n, 1)
        return
    x, y = _extgcd(p, q)
    seen: set[Slope] = set()
    for sgn in (1, -1):
        # p*s - q*r = sgn; base solution (r0, s0) = (-sgn*y, sgn*x)
        r0, s0 = -sgn * y, sgn * x
        # all solutions: (r0 + t*p, s0 + t*q); keep |s| <= den_bound
        t_lo = -((den_bound + s0) // q) - 1
        t_hi = (den_bound - s0) // q + 1
        for t in range(t_lo, t_hi + 1):
            r, s = r0 + t * p, s0 + t * q
            if s < 0 or (s == 0 and r < 0):
                r, s = -r, -s
            if s <= den_bound and abs(r) <= num_bound and (r, s) not in seen:
                seen.add((r, s))
                yield (r, s)


def mediant(u: Slope, v: Slope) -> Slope:
    return make_slope(u[0] + v[0], u[1] + v[1])


def slope_value(v: Slope) -> Fraction | None:
    """Fraction value, or None for infinity."""
    if v[1] == 0:
        return None
    return Fraction(v[0], v[1])
