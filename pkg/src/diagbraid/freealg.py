"""The Z^theta-graded free algebra T(V) with a diagonal braiding.

Elements are finite scalar combinations of words; the braiding matrix
(q_ij) induces the bilinear form chi on Z^theta, the braided bracket
[a,b]_c = ab - chi(deg a, deg b) ba, the hyperletter construction on
Lyndon words, the braided coproduct, and the skew derivations that
cut out the Nichols ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import words as W
from .errors import CapExceeded, InvariantError
from .scalars import FieldSpec, Scalar

Word = W.Word


@dataclass
class BraidingSpec:
    """A theta x theta matrix of nonzero scalars over a common field.

    ``max_degree`` caps the total degree of elements produced by algebra
    operations; word counts grow as theta^n, so the cap is a guard rail,
    not a tuning knob.
    """

    theta: int
    field: FieldSpec
    q: tuple[tuple[Scalar, ...], ...]
    max_degree: int = 12
    _chi_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.theta < 1:
            raise InvariantError("theta must be >= 1")
        self.q = tuple(tuple(row) for row in self.q)
        if len(self.q) != self.theta or any(len(r) != self.theta for r in self.q):
            raise InvariantError("braiding matrix must be theta x theta")
        for row in self.q:
            for entry in row:
                if not isinstance(entry, Scalar) or entry.field != self.field:
                    raise InvariantError("matrix entries must share the field spec")
                if entry.is_zero():
                    raise InvariantError("braiding matrix entries must be nonzero")

    def chi(self, alpha, beta) -> Scalar:
        """The bilinear form with chi(e_i, e_j) = q_ij, on all of Z^theta."""
        key = (tuple(alpha), tuple(beta))
        cached = self._chi_cache.get(key)
        if cached is not None:
            return cached
        out = self.field.one()
        for i, a in enumerate(key[0]):
            if not a:
                continue
            for j, b in enumerate(key[1]):
                if b:
                    out = out * self.q[i][j] ** (a * b)
        self._chi_cache[key] = out
        return out

    # convenient generators
    def x(self, i: int) -> "FreeElement":
        if not 1 <= i <= self.theta:
            raise InvariantError(f"generator index {i} out of range")
        return FreeElement(self, {(i,): self.field.one()})

    def unit(self) -> "FreeElement":
        return FreeElement(self, {(): self.field.one()})

    def zero_element(self) -> "FreeElement":
        return FreeElement(self, {})

    def element(self, terms) -> "FreeElement":
        return FreeElement(self, dict(terms))


def chi(alpha, beta, B: BraidingSpec) -> Scalar:
    return B.chi(alpha, beta)


class FreeElement:
    """A finite map word -> nonzero scalar, tied to a braiding spec."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: BraidingSpec, terms: dict):
        self.spec = spec
        clean = {}
        for word, coeff in terms.items():
            word = tuple(word)
            W.check_word(word, spec.theta)
            if not coeff.is_zero():
                clean[word] = coeff
        self.terms = clean

    # -- basics --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.spec is other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"FreeElement({render_element(self)})"

    def coefficient(self, word: Word) -> Scalar:
        return self.terms.get(tuple(word), self.spec.field.zero())

    def support(self) -> list[Word]:
        return sorted(self.terms, key=lambda w: (len(w), w))

    def total_degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def multidegrees(self) -> set[tuple[int, ...]]:
        return {W.degree(w, self.spec.theta) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.multidegrees()) <= 1

    def degree(self) -> tuple[int, ...]:
        degs = self.multidegrees()
        if len(degs) != 1:
            raise InvariantError("element is not Z^theta-homogeneous")
        return next(iter(degs))

    def homogeneous_components(self) -> dict[tuple[int, ...], "FreeElement"]:
        out: dict[tuple[int, ...], dict] = {}
        for word, coeff in self.terms.items():
            out.setdefault(W.degree(word, self.spec.theta), {})[word] = coeff
        return {deg: FreeElement(self.spec, terms) for deg, terms in out.items()}

    # -- linear structure ------------------------------------------------------

    def _check(self, other: "FreeElement"):
        if self.spec is not other.spec:
            raise InvariantError("elements from different braiding specs")

    def __add__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            cur = terms.get(word)
            s = coeff if cur is None else cur + coeff
            if s.is_zero():
                terms.pop(word, None)
            else:
                terms[word] = s
        return FreeElement(self.spec, terms)

    def __neg__(self):
        return FreeElement(self.spec, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self + (-other)

    def scale(self, coeff: Scalar) -> "FreeElement":
        if coeff.is_zero():
            return FreeElement(self.spec, {})
        return FreeElement(self.spec, {w: c * coeff for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        if isinstance(other, int):
            return self.scale(self.spec.field.from_int(other))
        if isinstance(other, FreeElement):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.__mul__(other)
        return NotImplemented


def multiply(a: FreeElement, b: FreeElement) -> FreeElement:
    """Concatenation product, extended bilinearly."""
    a._check(b)
    spec = a.spec
    if a.terms and b.terms:
        top = max(len(w) for w in a.terms) + max(len(w) for w in b.terms)
        if top > spec.max_degree:
            raise CapExceeded(
                f"product degree {top} exceeds max_degree {spec.max_degree}")
    terms: dict = {}
    for u, cu in a.terms.items():
        for v, cv in b.terms.items():
            word = u + v
            coeff = cu * cv
            cur = terms.get(word)
            s = coeff if cur is None else cur + coeff
            if s.is_zero():
                terms.pop(word, None)
            else:
                terms[word] = s
    return FreeElement(spec, terms)


def braided_bracket(a: FreeElement, b: FreeElement) -> FreeElement:
    """[a, b]_c = ab - chi(deg a, deg b) ba on homogeneous components."""
    a._check(b)
    spec = a.spec
    out = spec.zero_element()
    for da, ca in a.homogeneous_components().items():
        for db, cb in b.homogeneous_components().items():
            out = out + (multiply(ca, cb) - multiply(cb, ca).scale(spec.chi(da, db)))
    return out


def hyperletter(l: Word, spec: BraidingSpec) -> FreeElement:
    """The iterated braided commutator [l]_c of a Lyndon word."""
    l = tuple(l)
    if not l:
        raise InvariantError("hyperletter of the empty word")
    cache = _hyper_cache(spec)
    cached = cache.get(l)
    if cached is not None:
        return cached
    if not W.is_lyndon(l):
        raise InvariantError(f"{l} is not a Lyndon word")
    if len(l) == 1:
        result = spec.x(l[0])
    else:
        left, right = W.shirshov_split(l)
        result = braided_bracket(hyperletter(left, spec), hyperletter(right, spec))
    cache[l] = result
    return result


def hyperword(u: Word, spec: BraidingSpec) -> FreeElement:
    """[u]_c: the product of hyperletters over the Lyndon decomposition."""
    u = tuple(u)
    if not u:
        return spec.unit()
    out = spec.unit()
    for factor in W.lyndon_factorize(u):
        out = multiply(out, hyperletter(factor, spec))
    return out


def _hyper_cache(spec: BraidingSpec) -> dict:
    cache = getattr(spec, "_hyperletters", None)
    if cache is None:
        cache = {}
        spec._hyperletters = cache
    return cache


def ad_power(i: int, j: int, r: int, spec: BraidingSpec) -> FreeElement:
    """(ad_c x_i)^r (x_j), computed by iterating the braided bracket."""
    if i == j:
        raise InvariantError("ad_power needs i != j")
    if r < 0:
        raise InvariantError("ad_power needs r >= 0")
    xi = spec.x(i)
    out = spec.x(j)
    for _ in range(r):
        out = braided_bracket(xi, out)
    return out


def hyperword_expand(a: FreeElement) -> dict[Word, Scalar]:
    """Expand an element in the monotone-hyperword basis.

    Returns a map u -> coefficient meaning sum coeff * [u]_c (hyperword of
    the Lyndon decomposition of u).  Triangular elimination on the leading
    word: [u]_c is u plus lexicographically greater words of equal length.
    """
    spec = a.spec
    remaining = FreeElement(spec, dict(a.terms))
    out: dict[Word, Scalar] = {}
    while remaining.terms:
        word = min(remaining.terms, key=lambda w: (len(w), w))
        coeff = remaining.terms[word]
        out[word] = coeff
        remaining = remaining - hyperword(word, spec).scale(coeff)
        if word in remaining.terms:
            raise InvariantError("hyperword expansion failed to cancel")
    return out


# --------------------------------------------------------------------------
# coproduct and skew derivations
# --------------------------------------------------------------------------

class TensorSquareElement:
    """A finite map (word, word) -> nonzero scalar inside T(V) (x) T(V)."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: BraidingSpec, terms: dict):
        self.spec = spec
        self.terms = {(tuple(u), tuple(v)): c
                      for (u, v), c in terms.items() if not c.is_zero()}

    def __eq__(self, other):
        if not isinstance(other, TensorSquareElement):
            return NotImplemented
        return self.spec is other.spec and self.terms == other.terms

    def __repr__(self):
        items = sorted(self.terms, key=lambda p: (len(p[0]) + len(p[1]), p))
        body = " + ".join(
            f"({self.terms[p]!r})*{W.render_word(p[0])}(x){W.render_word(p[1])}"
            for p in items)
        return f"TensorSquare({body or '0'})"

    def coefficient(self, u: Word, v: Word) -> Scalar:
        return self.terms.get((tuple(u), tuple(v)), self.spec.field.zero())

    def component(self, left_degree) -> "TensorSquareElement":
        """Terms whose left slot has the given Z^theta degree."""
        ld = tuple(left_degree)
        return TensorSquareElement(self.spec, {
            p: c for p, c in self.terms.items()
            if W.degree(p[0], self.spec.theta) == ld})

    def __add__(self, other):
        if not isinstance(other, TensorSquareElement):
            return NotImplemented
        terms = dict(self.terms)
        for p, c in other.terms.items():
            cur = terms.get(p)
            s = c if cur is None else cur + c
            if s.is_zero():
                terms.pop(p, None)
            else:
                terms[p] = s
        return TensorSquareElement(self.spec, terms)

    def __sub__(self, other):
        if not isinstance(other, TensorSquareElement):
            return NotImplemented
        return self + TensorSquareElement(other.spec,
                                          {p: -c for p, c in other.terms.items()})


def coproduct(a: FreeElement) -> TensorSquareElement:
    """The braided-Hopf coproduct of T(V).

    Generators are primitive and the coproduct is an algebra map for the
    braided product (u (x) v)(u' (x) v') = chi(deg v, deg u') uu' (x) vv'.
    """
    spec = a.spec
    out: dict = {}
    for word, coeff in a.terms.items():
        if len(word) > spec.max_degree:
            raise CapExceeded(
                f"coproduct degree {len(word)} exceeds max_degree {spec.max_degree}")
        for (u, v), c in _coproduct_word(spec, word).items():
            key = (u, v)
            add = c * coeff
            cur = out.get(key)
            s = add if cur is None else cur + add
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
    return TensorSquareElement(spec, out)


def _coproduct_word(spec: BraidingSpec, word: Word) -> dict:
    cache = getattr(spec, "_copro_cache", None)
    if cache is None:
        cache = {}
        spec._copro_cache = cache
    cached = cache.get(word)
    if cached is not None:
        return cached
    acc = {((), ()): spec.field.one()}
    for letter in word:
        nxt: dict = {}
        e = tuple(1 if i == letter - 1 else 0 for i in range(spec.theta))
        for (u, v), c in acc.items():
            # (u (x) v) * (x_letter (x) 1): the letter crosses v
            cross = c * spec.chi(W.degree(v, spec.theta), e)
            key = (u + (letter,), v)
            cur = nxt.get(key)
            s = cross if cur is None else cur + cross
            if s.is_zero():
                nxt.pop(key, None)
            else:
                nxt[key] = s
            # (u (x) v) * (1 (x) x_letter)
            key = (u, v + (letter,))
            cur = nxt.get(key)
            s = c if cur is None else cur + c
            if s.is_zero():
                nxt.pop(key, None)
            else:
                nxt[key] = s
        acc = nxt
    cache[word] = acc
    return acc


def skew_derivative(i: int, a: FreeElement, side: str = "right") -> FreeElement:
    """The skew derivation reading off the x_i slot of the coproduct.

    side="right": the (deg - e_i, e_i) component of Delta; side="left":
    the (e_i, deg - e_i) component.  Both lower the degree by e_i.
    """
    spec = a.spec
    if not 1 <= i <= spec.theta:
        raise InvariantError(f"index {i} out of range")
    if side not in ("right", "left"):
        raise InvariantError("side must be 'right' or 'left'")
    e = tuple(1 if k == i - 1 else 0 for k in range(spec.theta))
    out: dict = {}
    for word, coeff in a.terms.items():
        for k, letter in enumerate(word):
            if letter != i:
                continue
            rest = word[:k] + word[k + 1:]
            if side == "right":
                factor = spec.chi(e, W.degree(word[k + 1:], spec.theta))
            else:
                factor = spec.chi(W.degree(word[:k], spec.theta), e)
            add = coeff * factor
            cur = out.get(rest)
            s = add if cur is None else cur + add
            if s.is_zero():
                out.pop(rest, None)
            else:
                out[rest] = s
    return FreeElement(spec, out)


def render_element(a: FreeElement) -> str:
    """Human-readable sum of scalar-weighted words, e.g. x1*x2 - (q)*x2*x1."""
    from .scalars import render_scalar

    if not a.terms:
        return "0"
    parts = []
    for word in a.support():
        coeff = a.terms[word]
        w = W.render_word(word)
        if coeff.is_one():
            text = w
        elif (-coeff).is_one():
            text = f"-{w}"
        else:
            text = f"({render_scalar(coeff)})*{w}" if word else f"({render_scalar(coeff)})"
        parts.append(text)
    out = parts[0]
    for t in parts[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out
