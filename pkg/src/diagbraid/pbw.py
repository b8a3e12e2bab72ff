"""Degree-truncated Nichols algebras and their PBW data.

The Nichols ideal is computed degree by degree as the joint kernel of the
right skew derivations: an element of T^n(V) lies in the ideal iff all its
derivatives vanish in degree n-1 of the quotient, seeded with I_1 = 0.
Basis words are selected greedily against the deg-lex order, so the basis
in each degree consists exactly of the words that are not congruent to
combinations of lexicographically greater words modulo the ideal.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from . import words as W
from .errors import CapExceeded, DiagbraidError, InternalError, InvariantError
from .freealg import BraidingSpec, FreeElement
from .scalars import Scalar, unit_order, solve_power
from .series import RootFactor, expand_product

Word = W.Word


@dataclass
class TruncatedQuotient:
    """Basis words and reduction maps of T(V)/I(V) through a degree cap."""

    spec: BraidingSpec
    max_degree: int
    dims: list[int]
    basis_by_mdeg: dict[tuple[int, ...], list[Word]]
    reductions: dict[Word, dict[Word, Scalar]]

    def basis_of_degree(self, n: int) -> list[Word]:
        """Basis words of total degree n, deg-lex greatest first."""
        out = []
        for mdeg, ws in self.basis_by_mdeg.items():
            if sum(mdeg) == n:
                out.extend(ws)
        return sorted(out, reverse=True)

    def is_basis_word(self, u: Word) -> bool:
        u = tuple(u)
        mdeg = W.degree(u, self.spec.theta)
        return u in self.basis_by_mdeg.get(mdeg, ())

    def reduce_word(self, u: Word) -> dict[Word, Scalar]:
        """Express a word in basis words modulo the ideal (idempotent)."""
        u = tuple(u)
        if len(u) > self.max_degree:
            raise CapExceeded(f"word of degree {len(u)} beyond cap {self.max_degree}")
        red = self.reductions.get(u)
        if red is not None:
            return dict(red)
        if not self.is_basis_word(u):
            raise InternalError(f"word {u} missing from the quotient data")
        return {u: self.spec.field.one()}

    def reduce_element(self, a: FreeElement) -> FreeElement:
        """The canonical-form image of an element of T(V) in the quotient."""
        terms: dict = {}
        for word, coeff in a.terms.items():
            for bw, rc in self.reduce_word(word).items():
                add = coeff * rc
                cur = terms.get(bw)
                s = add if cur is None else cur + add
                if s.is_zero():
                    terms.pop(bw, None)
                else:
                    terms[bw] = s
        return FreeElement(self.spec, terms)

    def is_zero_in_quotient(self, a: FreeElement) -> bool:
        return self.reduce_element(a).is_zero()


def _mdeg_words(mdeg: tuple[int, ...]) -> list[Word]:
    letters = []
    for i, count in enumerate(mdeg, start=1):
        letters.extend([i] * count)
    return sorted(set(itertools.permutations(letters)), reverse=True)


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for head in range(n + 1):
        for tail in _compositions(n - head, parts - 1):
            yield (head,) + tail


def nichols_truncate(B: BraidingSpec, D: int) -> TruncatedQuotient:
    """Compute the truncated Nichols algebra B(V) through total degree D."""
    if D < 1:
        raise InvariantError("max degree must be >= 1")
    if D > B.max_degree:
        raise CapExceeded(f"degree cap {D} exceeds the spec cap {B.max_degree}")
    theta = B.theta
    one = B.field.one()
    zero_mdeg = (0,) * theta
    basis_by_mdeg: dict[tuple[int, ...], list[Word]] = {zero_mdeg: [()]}
    reductions: dict[Word, dict[Word, Scalar]] = {}
    dims = [1]
    if D >= 1:
        for i in range(1, theta + 1):
            e_i = tuple(1 if k == i - 1 else 0 for k in range(theta))
            basis_by_mdeg[e_i] = [(i,)]
        dims.append(theta)
    chi = B.chi
    for n in range(2, D + 1):
        dim_n = 0
        for mdeg in _compositions(n, theta):
            if not any(mdeg):
                continue
            basis_here = _reduce_block(B, mdeg, basis_by_mdeg, reductions, chi, one)
            dim_n += len(basis_here)
            basis_by_mdeg[mdeg] = basis_here
        dims.append(dim_n)
    return TruncatedQuotient(B, D, dims, basis_by_mdeg, reductions)


def _reduce_block(B, mdeg, basis_by_mdeg, reductions, chi, one):
    """Process one multidegree block; fills `reductions`, returns basis."""
    theta = B.theta
    cols: dict = {}
    for i in range(1, theta + 1):
        if mdeg[i - 1] == 0:
            continue
        sub = tuple(m - 1 if k == i - 1 else m for k, m in enumerate(mdeg))
        for w in basis_by_mdeg.get(sub, ()):
            cols[(i, w)] = len(cols)
    e_vecs = [tuple(1 if k == i else 0 for k in range(theta))
              for i in range(theta)]
    pivots: list[tuple[int, dict, dict]] = []
    basis_here: list[Word] = []
    for u in _mdeg_words(mdeg):
        row: dict[int, Scalar] = {}
        for k, letter in enumerate(u):
            suffix_deg = W.degree(u[k + 1:], theta)
            factor = chi(e_vecs[letter - 1], suffix_deg)
            rest = u[:k] + u[k + 1:]
            red = reductions.get(rest)
            if red is None:
                _row_add(row, cols[(letter, rest)], factor)
            else:
                for bw, rc in red.items():
                    _row_add(row, cols[(letter, bw)], factor * rc)
        expr: dict[Word, Scalar] = {u: one}
        for pc, prow, pexpr in pivots:
            a = row.get(pc)
            if a is None:
                continue
            for c, v in prow.items():
                _row_add(row, c, -(a * v))
            for w, v in pexpr.items():
                cur = expr.get(w)
                s = -(a * v) if cur is None else cur - a * v
                if s.is_zero():
                    expr.pop(w, None)
                else:
                    expr[w] = s
        if row:
            pc = min(row)
            pv = row[pc]
            inv = pv.inverse()
            prow = {c: v * inv for c, v in row.items()}
            pexpr = {w: v * inv for w, v in expr.items()}
            pivots.append((pc, prow, pexpr))
            basis_here.append(u)
        else:
            lead = expr.pop(u, None)
            if lead is None or not lead.is_one():
                raise InternalError("leading coefficient lost during elimination")
            reductions[u] = {w: -c for w, c in expr.items()}
    return sorted(basis_here, reverse=True)


def _row_add(row: dict, col: int, value: Scalar) -> None:
    cur = row.get(col)
    s = value if cur is None else cur + value
    if s.is_zero():
        row.pop(col, None)
    else:
        row[col] = s


# --------------------------------------------------------------------------
# PBW extraction
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PBWGenerator:
    """One PBW generator: a Lyndon basis word with its height data."""

    word: Word
    degree: tuple[int, ...]
    q_uu: Scalar
    height: int | None  # None encodes infinite height
    truncated: bool  # finite height not certifiable within the cap


@dataclass
class PBWReport:
    generators: list[PBWGenerator]
    roots: list[tuple[tuple[int, ...], int]]  # (degree vector, multiplicity)
    dims: list[int]
    max_degree: int
    truncated: bool

    def root_factors(self) -> list[RootFactor]:
        return [RootFactor(g.degree, g.height) for g in self.generators]


def pbw_extract(T: TruncatedQuotient) -> PBWReport:
    """PBW generators S_I = Lyndon basis words, heights per the order rule.

    A generator's height is finite iff 2 <= ord(q_uu) < infinity, and then
    equals that order; an entry is flagged truncated when its finite
    height cannot be corroborated below the degree cap.
    """
    spec = T.spec
    gens: list[PBWGenerator] = []
    for mdeg in sorted(T.basis_by_mdeg, key=lambda m: (sum(m), m)):
        if not any(mdeg):
            continue
        for u in sorted(T.basis_by_mdeg[mdeg]):
            if W.is_lyndon(u):
                q_uu = spec.chi(mdeg, mdeg)
                order = unit_order(q_uu)
                height = order.order if order.is_finite and order.order >= 2 else None
                flagged = height is not None and height * sum(mdeg) > T.max_degree
                gens.append(PBWGenerator(u, mdeg, q_uu, height, flagged))
    gens.sort(key=lambda g: (sum(g.degree), g.word))
    roots = Counter(g.degree for g in gens)
    return PBWReport(
        generators=gens,
        roots=sorted(roots.items(), key=lambda kv: (sum(kv[0]), kv[0])),
        dims=list(T.dims),
        max_degree=T.max_degree,
        truncated=any(g.truncated for g in gens),
    )


class PBWCountMismatch(InternalError):
    def __init__(self, degree, predicted, actual):
        super().__init__(
            f"PBW monomial count disagrees with computed dimension at degree "
            f"{degree}: predicted {predicted}, actual {actual}")
        self.degree = degree


def pbw_count_check(T: TruncatedQuotient, R: PBWReport) -> list[tuple[int, int, int]]:
    """Compare PBW-predicted dimensions with the computed ones per degree.

    Any mismatch is an implementation bug and raises; the table of
    (degree, predicted, actual) rows is returned when all degrees agree.
    """
    predicted = expand_product(R.root_factors(), T.spec.theta,
                               T.max_degree).total_degree_dims()
    table = []
    for n, (p, a) in enumerate(zip(predicted, T.dims)):
        table.append((n, p, a))
        if p != a:
            raise PBWCountMismatch(n, p, a)
    return table


# --------------------------------------------------------------------------
# the 2^(n-1) growth bound
# --------------------------------------------------------------------------

class GrowthInapplicable(DiagbraidError):
    """No pair (i, j) with all adjoint powers certified nonzero."""


@dataclass
class GrowthWitness:
    pair: tuple[int, int]
    degree: int
    bound: int
    families: list[tuple[Word, ...]]  # hyperletter words, weakly increasing


def growth_witness(B: BraidingSpec, n: int) -> GrowthWitness:
    """Certify dim B^n(V) >= 2^(n-1) from a pair with unbounded ad-powers.

    Applicable when some pair (i, j) has (ad_c x_i)^r(x_j) != 0 for all r
    by the scalar criterion; the witnesses are the monotone hyperwords in
    the letters [x_i^k x_j], which are linearly independent PBW monomials.
    """
    if B.theta < 2:
        raise InvariantError("growth witness needs theta >= 2")
    if n < 1:
        raise InvariantError("degree must be >= 1")
    pair = None
    for i in range(1, B.theta + 1):
        q_ii = B.q[i - 1][i - 1]
        order = unit_order(q_ii)
        if order.is_finite and order.order >= 2:
            continue  # (r)!_{q_ii} eventually vanishes
        for j in range(1, B.theta + 1):
            if i == j:
                continue
            target = (B.q[i - 1][j - 1] * B.q[j - 1][i - 1]).inverse()
            status, _ = solve_power(q_ii, target, cap=max(50, 4 * n))
            if status == "none":
                pair = (i, j)
                break
        if pair:
            break
    if pair is None:
        raise GrowthInapplicable(
            "every pair (i, j) has a vanishing adjoint power or an "
            "uncertified scan; the 2^(n-1) bound does not apply")
    i, j = pair
    families: list[tuple[Word, ...]] = []
    for r in range(1, n + 1):
        # weakly increasing (n_1 <= ... <= n_r) with sum n_k = n - r
        for partition in _weakly_increasing(n - r, r):
            family = tuple((i,) * k + (j,) for k in partition)
            families.append(family)
    bound = len(families)
    if bound != 2 ** (n - 1):
        raise InternalError("witness family count must be 2^(n-1)")
    return GrowthWitness(pair, n, bound, families)


def _weakly_increasing(total: int, parts: int):
    def rec(remaining, slots, minimum):
        if slots == 0:
            if remaining == 0:
                yield ()
            return
        for v in range(minimum, remaining + 1):
            for rest in rec(remaining - v, slots - 1, v):
                yield (v,) + rest
    yield from rec(total, parts, 0)
