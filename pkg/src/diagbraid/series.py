"""Truncated Z^theta-graded Hilbert series and their root-factor form.

A series is a coefficient table up to a total-degree cap; the factors are
the q_h(X^alpha) building blocks: q_h(t) = 1 + t + ... + t^(h-1) for a
finite height h and 1/(1-t) for h = infinity.  `factor_series` recovers
the factor multiset from the table, greedily from the lowest degrees,
which is the constructive content of the uniqueness lemma for such
products.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvariantError

INFINITY = None  # height encoding: positive int, or None for infinite


@dataclass(frozen=True)
class RootFactor:
    """One PBW-generator contribution: degree vector alpha and height h."""

    alpha: tuple[int, ...]
    height: int | None = INFINITY

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        if any(a < 0 for a in self.alpha) or not any(self.alpha):
            raise InvariantError("factor degree must be nonzero and nonnegative")
        if self.height is not None and self.height < 1:
            raise InvariantError("finite heights are positive")


@dataclass
class GradedSeries:
    """Coefficients gamma -> nonnegative int, up to total degree <= cap."""

    theta: int
    cap: int
    coeffs: dict[tuple[int, ...], int]

    def __post_init__(self):
        clean = {}
        for gamma, c in self.coeffs.items():
            gamma = tuple(gamma)
            if len(gamma) != self.theta:
                raise InvariantError("coefficient key of wrong rank")
            if sum(gamma) <= self.cap and c:
                clean[gamma] = c
        self.coeffs = clean

    def coefficient(self, gamma) -> int:
        return self.coeffs.get(tuple(gamma), 0)

    def total_degree_dims(self) -> list[int]:
        out = [0] * (self.cap + 1)
        for gamma, c in self.coeffs.items():
            out[sum(gamma)] += c
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (self.theta, self.cap, self.coeffs) == (other.theta, other.cap, other.coeffs)


def expand_product(factors, theta: int, cap: int) -> GradedSeries:
    """Multiply out prod q_{h_i}(X^{alpha_i}) through total degree cap.

    The coefficient of X^gamma counts tuples (s_1..s_N) with
    sum s_i alpha_i = gamma and 0 <= s_i < h_i.
    """
    acc = {(0,) * theta: 1}
    for f in factors:
        f = f if isinstance(f, RootFactor) else RootFactor(*f)
        step = sum(f.alpha)
        nxt: dict = {}
        max_s = cap // step if f.height is None else min(f.height - 1, cap // step)
        for gamma, c in acc.items():
            base = sum(gamma)
            for s in range(0, max_s + 1):
                if base + s * step > cap:
                    break
                key = tuple(g + s * a for g, a in zip(gamma, f.alpha))
                nxt[key] = nxt.get(key, 0) + c
        acc = nxt
    return GradedSeries(theta, cap, acc)


def _lattice_points(theta: int, cap: int):
    """All of N_0^theta with total degree <= cap, ascending (sum, lex)."""
    def rec(prefix, remaining, slots):
        if slots == 0:
            yield tuple(prefix)
            return
        for v in range(remaining + 1):
            yield from rec(prefix + [v], remaining - v, slots - 1)
    pts = list(rec([], cap, theta))
    pts.sort(key=lambda g: (sum(g), g))
    return pts


def _series_div(coeffs: dict, factor: RootFactor, theta: int, cap: int):
    """Exact truncated division by q_h(X^alpha).

    The divisor has constant term 1, so the quotient through the cap is
    unique; coefficients are computed in ascending total degree.  The
    caller interprets negative quotient coefficients as a failed guess.
    """
    alpha = factor.alpha
    step = sum(alpha)
    top = cap // step if factor.height is None else min(factor.height - 1,
                                                        cap // step)
    divisor_tail = []
    for s in range(1, top + 1):
        divisor_tail.append(tuple(a * s for a in alpha))
    out: dict = {}
    for gamma in _lattice_points(theta, cap):
        value = coeffs.get(gamma, 0)
        for delta in divisor_tail:
            prev = tuple(g - d for g, d in zip(gamma, delta))
            if any(x < 0 for x in prev):
                continue
            c = out.get(prev)
            if c:
                value -= c
        if value:
            out[gamma] = value
    return out


class FactorizationError(InvariantError):
    """The table is not a product of root factors within the cap."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


def factor_series(series: GradedSeries, max_height: int | None = None):
    """Recover the factor multiset of a product of q_h(X^alpha) terms.

    Greedy per the uniqueness argument: the minimal-degree nonzero
    coefficient gamma (lexicographically smallest on ties) pins down
    c_gamma identical factors of degree gamma; heights are found by exact
    truncated division with backtracking over the finitely many candidate
    heights.  Heights are assumed constant per degree vector; finite
    heights are only distinguishable from infinite ones when
    h * |alpha| <= cap, otherwise the infinite height is reported.
    """
    if series.coefficient((0,) * series.theta) != 1:
        raise FactorizationError("constant term must be 1", 0)
    if max_height is None:
        max_height = series.cap
    table = dict(series.coeffs)
    result = _factor_rec(table, series.theta, series.cap, max_height)
    if result is None:
        first_bad = min((sum(g) for g in table if any(g)), default=None)
        raise FactorizationError(
            "series does not factor into root factors within the cap",
            first_bad)
    return sorted(result, key=lambda f: (sum(f.alpha), f.alpha,
                                         f.height is None, f.height or 0))


def _factor_rec(table: dict, theta: int, cap: int, max_height: int):
    rest = {g: c for g, c in table.items() if any(g) and c}
    if not rest:
        return []
    gamma = min(rest, key=lambda g: (sum(g), g))
    mult = rest[gamma]
    if mult < 0:
        return None
    step = sum(gamma)
    # Infinite height first: products like q_2(t) q_oo(t^2) = q_oo(t) are
    # genuinely ambiguous, and the infinite-height choice is the minimal
    # factorization; finite heights then in increasing order.
    candidates: list[int | None] = [INFINITY]
    candidates.extend(h for h in range(2, max_height + 1) if h * step <= cap)
    for h in candidates:
        f = RootFactor(gamma, h)
        quotient = dict(table)
        for _ in range(mult):
            quotient = _series_div(quotient, f, theta, cap)
        if quotient.get(gamma, 0) != 0 or any(c < 0 for c in quotient.values()):
            continue
        sub = _factor_rec(quotient, theta, cap, max_height)
        if sub is not None:
            return [f] * mult + sub
    return None


def reflect_series(factors, i: int, m_row) -> list[RootFactor]:
    """The root-system transform at index i on a factor multiset.

    Applies alpha -> s_i(alpha) with s_i(e_j) = e_j + m_ij e_i (m_ii = -2)
    to every factor degree, drops the single resulting -e_i factor, and
    adds e_i with the height of the dropped one.
    """
    factors = [f if isinstance(f, RootFactor) else RootFactor(*f) for f in factors]
    if not factors:
        raise InvariantError("empty factor multiset")
    theta = len(factors[0].alpha)
    m_row = tuple(m_row)
    if len(m_row) != theta:
        raise InvariantError("m-row of wrong rank")
    if m_row[i - 1] != -2:
        raise InvariantError("m_ii must be -2")
    if any(m is None for m in m_row):
        raise InvariantError(f"reflection s_{i} undefined: missing m value")

    def s_i(alpha):
        coeff = sum(a * m for a, m in zip(alpha, m_row))
        return tuple(a + (coeff if j == i - 1 else 0)
                     for j, a in enumerate(alpha))

    minus_ei = tuple(-1 if j == i - 1 else 0 for j in range(theta))
    e_i = tuple(1 if j == i - 1 else 0 for j in range(theta))
    reflected = [(s_i(f.alpha), f.height) for f in factors]
    dropped = [k for k, (alpha, _) in enumerate(reflected) if alpha == minus_ei]
    if not dropped:
        raise InvariantError(f"no factor of degree e_{i} to reflect")
    keep = dropped[0]
    out = [RootFactor(e_i, reflected[keep][1])]
    for k, (alpha, h) in enumerate(reflected):
        if k == keep:
            continue
        out.append(RootFactor(alpha, h))
    return sorted(out, key=lambda f: (sum(f.alpha), f.alpha,
                                      f.height is None, f.height or 0))


def enumerate_counts(factors, gamma) -> int:
    """Independent brute-force count of bounded tuples summing to gamma.

    Test oracle for expand_product; intentionally a plain nested loop.
    """
    factors = [f if isinstance(f, RootFactor) else RootFactor(*f) for f in factors]
    gamma = tuple(gamma)
    total = sum(gamma)
    ranges = []
    for f in factors:
        top = total // sum(f.alpha)
        if f.height is not None:
            top = min(top, f.height - 1)
        ranges.append(range(top + 1))
    count = 0
    for combo in itertools.product(*ranges):
        acc = [0] * len(gamma)
        for s, f in zip(combo, factors):
            for idx, a in enumerate(f.alpha):
                acc[idx] += s * a
        if tuple(acc) == gamma:
            count += 1
    return count
