"""Exact arithmetic in the field Q(zeta_N)(q_1, ..., q_m).

A scalar is a reduced fraction of polynomials in the formal parameters
q_1..q_m whose coefficients live in the cyclotomic field Q(zeta_N).
Cyclotomic numbers are stored in the power basis 1, zeta, ..., zeta^(d-1)
(d = deg Phi_N) and reduced modulo the N-th cyclotomic polynomial; the
parameters are multiplicatively independent transcendentals over Q(zeta_N).

Fractions are kept canonical (numerator and denominator coprime, common
monomial factors removed, denominator with leading coefficient 1), so
`==` on scalars is structural and still decides mathematical equality.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantError, ParseError

_ZERO = Fraction(0)
_ONE = Fraction(1)


# --------------------------------------------------------------------------
# cyclotomic ground field Q(zeta_N)
# --------------------------------------------------------------------------

def _cyclotomic_poly(n: int) -> list[int]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, all divisions exact.
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d:
            continue
        phi_d = _cyclotomic_poly_cached(d)
        poly = _int_poly_divexact(poly, phi_d)
    return poly


_CYCLO_POLY_CACHE: dict[int, list[int]] = {1: [-1, 1]}


def _cyclotomic_poly_cached(n: int) -> list[int]:
    if n not in _CYCLO_POLY_CACHE:
        _CYCLO_POLY_CACHE[n] = _cyclotomic_poly(n)
    return _CYCLO_POLY_CACHE[n]


def _int_poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c, r = divmod(num[k + len(den) - 1], den[-1])
        if r:
            raise ArithmeticError("inexact cyclotomic division")
        out[k] = c
        for i, d in enumerate(den):
            num[k + i] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact cyclotomic division")
    return out


class _CycloData:
    """Multiplication tables for Q(zeta_N) in the power basis."""

    def __init__(self, n: int):
        self.n = n
        phi = _cyclotomic_poly_cached(n)
        self.degree = len(phi) - 1
        self.torsion = n if n % 2 == 0 else 2 * n  # lcm(2, N)
        d = self.degree
        # table[k] = coordinates of zeta^k in the power basis, as ints
        table = [[0] * d for _ in range(max(n, 2 * d - 1))]
        for k in range(d):
            table[k][k] = 1
        for k in range(d, len(table)):
            prev = table[k - 1]
            shifted = [0] + prev[:-1]
            top = prev[-1]
            if top:
                for i in range(d):
                    shifted[i] -= top * phi[i]
            table[k] = shifted
        self.table = [tuple(row) for row in table]

    def zeta_power(self, k: int) -> tuple[Fraction, ...]:
        k %= self.n
        return tuple(Fraction(c) for c in self.table[k])


_CYCLO_DATA_CACHE: dict[int, _CycloData] = {}


def _cyclo(n: int) -> _CycloData:
    if n not in _CYCLO_DATA_CACHE:
        _CYCLO_DATA_CACHE[n] = _CycloData(n)
    return _CYCLO_DATA_CACHE[n]


# Cyc values are tuples of Fractions of length d.

def _cyc_zero(d: int) -> tuple[Fraction, ...]:
    return (_ZERO,) * d


def _cyc_one(d: int) -> tuple[Fraction, ...]:
    return (_ONE,) + (_ZERO,) * (d - 1)


def _cyc_is_zero(a) -> bool:
    return not any(a)


def _cyc_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _cyc_neg(a):
    return tuple(-x for x in a)


def _cyc_scale(a, r: Fraction):
    return tuple(x * r for x in a)


def _cyc_mul(cd: _CycloData, a, b):
    d = cd.degree
    if d == 1:
        return (a[0] * b[0],)
    conv = [_ZERO] * (2 * d - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                conv[i + j] += x * y
    out = list(conv[:d])
    for k in range(d, 2 * d - 1):
        c = conv[k]
        if c:
            row = cd.table[k]
            for i in range(d):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(out)


def _frac_poly_divmod(a: list[Fraction], b: list[Fraction]):
    """Division with remainder for dense Fraction polynomials (ascending)."""
    a = list(a)
    db = len(b) - 1
    while b and not b[-1]:
        b = b[:-1]
        db -= 1
    q = [_ZERO] * max(len(a) - db, 0)
    inv_lead = 1 / b[-1]
    for k in range(len(a) - db - 1, -1, -1):
        c = a[k + db] * inv_lead
        if c:
            q[k] = c
            for i, bc in enumerate(b):
                a[k + i] -= c * bc
    while a and not a[-1]:
        a.pop()
    return q, a


def _cyc_inv(cd: _CycloData, a):
    """Inverse in Q(zeta_N) via the extended Euclidean algorithm mod Phi_N."""
    if _cyc_is_zero(a):
        raise ZeroDivisionError("inverse of zero cyclotomic number")
    d = cd.degree
    if d == 1:
        return (1 / a[0],)
    phi = [Fraction(c) for c in _cyclotomic_poly_cached(cd.n)]
    r0, r1 = phi, [x for x in a]
    while r1 and not r1[-1]:
        r1.pop()
    s0, s1 = [], [_ONE]  # coefficients of `a` in r0, r1
    while True:
        if len(r1) == 1:
            inv = 1 / r1[0]
            res = [x * inv for x in s1] + [_ZERO] * d
            return tuple(res[:d])
        q, r2 = _frac_poly_divmod(r0, r1)
        s2 = list(s1)
        # s2 = s0 - q * s1
        s2 = [_ZERO] * max(len(s0), len(q) + len(s1) - 1)
        for i, x in enumerate(s0):
            s2[i] += x
        for i, qc in enumerate(q):
            if qc:
                for j, sc in enumerate(s1):
                    if sc:
                        s2[i + j] -= qc * sc
        while s2 and not s2[-1]:
            s2.pop()
        r0, r1, s0, s1 = r1, r2, s1, s2
        if not r1:
            raise ArithmeticError("element not invertible mod Phi_N")


def _cyc_div(cd: _CycloData, a, b):
    return _cyc_mul(cd, a, _cyc_inv(cd, b))


# --------------------------------------------------------------------------
# field specification
# --------------------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


@dataclass(frozen=True)
class FieldSpec:
    """The computable coefficient field Q(zeta_N)(q_1, ..., q_m).

    ``cyclotomic_order`` N >= 1 (N = 1 means plain rationals); the
    parameter names are distinct identifiers, each treated as a
    transcendental of infinite multiplicative order.
    """

    cyclotomic_order: int = 1
    parameter_names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.cyclotomic_order < 1:
            raise InvariantError("cyclotomic order must be >= 1")
        object.__setattr__(self, "parameter_names", tuple(self.parameter_names))
        names = self.parameter_names
        if len(set(names)) != len(names):
            raise InvariantError("parameter names must be distinct")
        for name in names:
            if not _NAME_RE.match(name or ""):
                raise InvariantError(f"bad parameter name: {name!r}")
            if name == "zeta":
                raise InvariantError("'zeta' is reserved for the root of unity")

    @property
    def nparams(self) -> int:
        return len(self.parameter_names)

    @property
    def _cyclo(self) -> _CycloData:
        return _cyclo(self.cyclotomic_order)

    # -- constructors ------------------------------------------------------

    def zero(self) -> "Scalar":
        return Scalar._make(self, {}, self._poly_one())

    def one(self) -> "Scalar":
        return self.from_fraction(_ONE)

    def from_fraction(self, r) -> "Scalar":
        r = Fraction(r)
        d = self._cyclo.degree
        num = {} if r == 0 else {(0,) * self.nparams: (r,) + (_ZERO,) * (d - 1)}
        return Scalar._make(self, num, self._poly_one())

    def from_int(self, n: int) -> "Scalar":
        return self.from_fraction(Fraction(n))

    def zeta(self, power: int = 1) -> "Scalar":
        vec = self._cyclo.zeta_power(power)
        if _cyc_is_zero(vec):  # cannot happen; defensive
            return self.zero()
        return Scalar._make(self, {(0,) * self.nparams: vec}, self._poly_one())

    def parameter(self, name: str) -> "Scalar":
        try:
            idx = self.parameter_names.index(name)
        except ValueError:
            raise InvariantError(f"unknown parameter {name!r}") from None
        exps = tuple(1 if i == idx else 0 for i in range(self.nparams))
        d = self._cyclo.degree
        return Scalar._make(self, {exps: _cyc_one(d)}, self._poly_one())

    def _poly_one(self) -> dict:
        return {(0,) * self.nparams: _cyc_one(self._cyclo.degree)}


# --------------------------------------------------------------------------
# polynomial layer: dict[mono, cyc] with nonnegative exponents
# --------------------------------------------------------------------------

def _p_is_zero(f: dict) -> bool:
    return not f


def _p_is_one(f: dict, d: int) -> bool:
    if len(f) != 1:
        return False
    (mono, vec), = f.items()
    return not any(mono) and vec == _cyc_one(d)


def _p_add(f: dict, g: dict) -> dict:
    out = dict(f)
    for mono, vec in g.items():
        cur = out.get(mono)
        if cur is None:
            out[mono] = vec
        else:
            s = _cyc_add(cur, vec)
            if _cyc_is_zero(s):
                del out[mono]
            else:
                out[mono] = s
    return out


def _p_neg(f: dict) -> dict:
    return {mono: _cyc_neg(vec) for mono, vec in f.items()}


def _p_mul(cd: _CycloData, f: dict, g: dict) -> dict:
    if not f or not g:
        return {}
    if len(g) > len(f):
        f, g = g, f
    out: dict = {}
    for m1, v1 in f.items():
        for m2, v2 in g.items():
            prod = _cyc_mul(cd, v1, v2)
            if _cyc_is_zero(prod):
                continue
            mono = tuple(a + b for a, b in zip(m1, m2))
            cur = out.get(mono)
            if cur is None:
                out[mono] = prod
            else:
                s = _cyc_add(cur, prod)
                if _cyc_is_zero(s):
                    del out[mono]
                else:
                    out[mono] = s
    return out


def _p_scale(cd: _CycloData, f: dict, vec) -> dict:
    out = {}
    for mono, v in f.items():
        prod = _cyc_mul(cd, v, vec)
        if not _cyc_is_zero(prod):
            out[mono] = prod
    return out


def _p_mono_shift(f: dict, shift: tuple[int, ...]) -> dict:
    if not any(shift):
        return f
    return {tuple(e - s for e, s in zip(mono, shift)): vec for mono, vec in f.items()}


def _p_min_exps(f: dict, m: int) -> tuple[int, ...]:
    mins = [None] * m
    for mono in f:
        for i, e in enumerate(mono):
            if mins[i] is None or e < mins[i]:
                mins[i] = e
    return tuple(0 if v is None else v for v in mins)


def _p_leading_mono(f: dict) -> tuple[int, ...]:
    return max(f)


def _p_divexact(cd: _CycloData, f: dict, g: dict):
    """Exact division f / g in Q(zeta_N)[q..]; returns None if inexact."""
    if not f:
        return {}
    if not g:
        return None
    lg = _p_leading_mono(g)
    lg_inv = _cyc_inv(cd, g[lg])
    rem = dict(f)
    out: dict = {}
    while rem:
        lf = _p_leading_mono(rem)
        qm = tuple(a - b for a, b in zip(lf, lg))
        if any(e < 0 for e in qm):
            return None
        qc = _cyc_mul(cd, rem[lf], lg_inv)
        out[qm] = qc
        for mono, vec in g.items():
            t = tuple(a + b for a, b in zip(qm, mono))
            prod = _cyc_mul(cd, qc, vec)
            cur = rem.get(t)
            if cur is None:
                rem[t] = _cyc_neg(prod)
            else:
                s = _cyc_add(cur, _cyc_neg(prod))
                if _cyc_is_zero(s):
                    del rem[t]
                else:
                    rem[t] = s
        if not _cyc_is_zero(rem.get(lf, _cyc_zero(cd.degree))):
            return None
    return out


# ---- gcd ------------------------------------------------------------------

def _p_gcd(cd: _CycloData, f: dict, g: dict, m: int) -> dict:
    """A gcd of f and g in Q(zeta_N)[q_1..q_m] (normalization arbitrary)."""
    if not f:
        return dict(g)
    if not g:
        return dict(f)
    if len(f) == 1 or len(g) == 1:
        mins = tuple(min(a, b) for a, b in
                     zip(_p_min_exps(f, m), _p_min_exps(g, m)))
        return {mins: _cyc_one(cd.degree)}
    if m == 0:
        return {(): _cyc_one(cd.degree)}
    active = [i for i in range(m)
              if any(mono[i] for mono in f) or any(mono[i] for mono in g)]
    if not active:
        return {(0,) * m: _cyc_one(cd.degree)}
    if len(active) == 1:
        return _p_gcd_uni(cd, f, g, m, active[0])
    return _p_gcd_multi(cd, f, g, m, active[-1])


def _p_gcd_uni(cd: _CycloData, f: dict, g: dict, m: int, v: int) -> dict:
    """gcd of polynomials univariate in variable v over the field Q(zeta_N)."""
    a = _p_to_dense(f, v)
    b = _p_to_dense(g, v)
    while b:
        _, r = _cyc_poly_divmod(cd, a, b)
        _primitivize_dense(cd, r)
        a, b = b, r
    _primitivize_dense(cd, a)
    return _p_from_dense(a, m, v, cd)


def _p_to_dense(f: dict, v: int) -> list:
    deg = max(mono[v] for mono in f)
    out = [None] * (deg + 1)
    for mono, vec in f.items():
        out[mono[v]] = vec
    d = len(next(iter(f.values())))
    return [x if x is not None else _cyc_zero(d) for x in out]


def _p_from_dense(a: list, m: int, v: int, cd: _CycloData) -> dict:
    out = {}
    for e, vec in enumerate(a):
        if not _cyc_is_zero(vec):
            mono = tuple(e if i == v else 0 for i in range(m))
            out[mono] = vec
    return out


def _cyc_poly_divmod(cd: _CycloData, a: list, b: list):
    a = list(a)
    while b and _cyc_is_zero(b[-1]):
        b = b[:-1]
    db = len(b) - 1
    inv_lead = _cyc_inv(cd, b[-1])
    q = [_cyc_zero(cd.degree)] * max(len(a) - db, 0)
    for k in range(len(a) - db - 1, -1, -1):
        c = _cyc_mul(cd, a[k + db], inv_lead)
        if _cyc_is_zero(c):
            continue
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] = _cyc_add(a[k + i], _cyc_neg(_cyc_mul(cd, c, bc)))
    while a and _cyc_is_zero(a[-1]):
        a.pop()
    return q, a


def _primitivize_dense(cd: _CycloData, a: list) -> None:
    """Rescale a dense cyc-coefficient polynomial to keep fractions small."""
    if not a:
        return
    nums = []
    dens = []
    for vec in a:
        for x in vec:
            if x:
                nums.append(abs(x.numerator))
                dens.append(x.denominator)
    if not nums:
        return
    gn = 0
    for x in nums:
        gn = math.gcd(gn, x)
    ld = 1
    for x in dens:
        ld = ld * x // math.gcd(ld, x)
    scale = Fraction(ld, gn)
    if scale != 1:
        for i, vec in enumerate(a):
            a[i] = _cyc_scale(vec, scale)


def _p_gcd_multi(cd: _CycloData, f: dict, g: dict, m: int, v: int) -> dict:
    """Primitive PRS gcd, univariate in v over Q(zeta_N)[other vars]."""
    fu = _p_to_uni(f, v)
    gu = _p_to_uni(g, v)
    cf = _uni_content(cd, fu, m)
    cg = _uni_content(cd, gu, m)
    cont = _p_gcd(cd, cf, cg, m)
    a = _uni_divexact(cd, fu, cf)
    b = _uni_divexact(cd, gu, cg)
    if max(a) < max(b):
        a, b = b, a
    while b:
        r = _uni_prem(cd, a, b, m)
        if not r:
            a = b
            break
        rc = _uni_content(cd, r, m)
        a, b = b, _uni_divexact(cd, r, rc)
    ca = _uni_content(cd, a, m)
    a = _uni_divexact(cd, a, ca)
    result = _uni_mul_poly(cd, a, cont)
    return _p_from_uni(result, v)


def _p_to_uni(f: dict, v: int) -> dict[int, dict]:
    out: dict[int, dict] = {}
    for mono, vec in f.items():
        e = mono[v]
        rest = tuple(x if i != v else 0 for i, x in enumerate(mono))
        out.setdefault(e, {})[rest] = vec
    return out


def _p_from_uni(fu: dict[int, dict], v: int) -> dict:
    out = {}
    for e, coeff in fu.items():
        for mono, vec in coeff.items():
            out[tuple(x if i != v else e for i, x in enumerate(mono))] = vec
    return out


def _uni_content(cd: _CycloData, fu: dict[int, dict], m: int) -> dict:
    cont: dict = {}
    for coeff in fu.values():
        cont = _p_gcd(cd, cont, coeff, m)
    return cont


def _uni_divexact(cd: _CycloData, fu: dict[int, dict], c: dict) -> dict[int, dict]:
    out = {}
    for e, coeff in fu.items():
        q = _p_divexact(cd, coeff, c)
        if q is None:
            raise ArithmeticError("content division failed")
        if q:
            out[e] = q
    return out


def _uni_mul_poly(cd: _CycloData, fu: dict[int, dict], c: dict) -> dict[int, dict]:
    out = {}
    for e, coeff in fu.items():
        p = _p_mul(cd, coeff, c)
        if p:
            out[e] = p
    return out


def _uni_prem(cd: _CycloData, a: dict[int, dict], b: dict[int, dict], m: int):
    """Pseudo-remainder of a by b with respect to the chosen variable."""
    da, db = max(a), max(b)
    lb = b[db]
    r = {e: dict(c) for e, c in a.items()}
    for k in range(da - db, -1, -1):
        lead = r.get(k + db)
        # r := lb * r - lead * x^k * b
        r = {e: _p_mul(cd, c, lb) for e, c in r.items()}
        r = {e: c for e, c in r.items() if c}
        if lead:
            for e, c in b.items():
                t = e + k
                sub = _p_mul(cd, lead, c)
                cur = r.get(t)
                if cur is None:
                    r[t] = _p_neg(sub)
                else:
                    s = _p_add(cur, _p_neg(sub))
                    if s:
                        r[t] = s
                    else:
                        del r[t]
    return r


# --------------------------------------------------------------------------
# Scalar
# --------------------------------------------------------------------------

class Scalar:
    """An element of Q(zeta_N)(q_1..q_m) in canonical reduced form.

    Immutable; supports +, -, *, /, ** with integers, == and hashing.
    Arithmetic between scalars requires identical field specs.
    """

    __slots__ = ("field", "_num", "_den", "_key", "_hash")

    def __init__(self, *args, **kwargs):
        raise TypeError("use FieldSpec constructors or scalar_parse")

    @classmethod
    def _raw(cls, field: FieldSpec, num: dict, den: dict) -> "Scalar":
        self = object.__new__(cls)
        self.field = field
        self._num = num
        self._den = den
        self._key = None
        self._hash = None
        return self

    @classmethod
    def _make(cls, field: FieldSpec, num: dict, den: dict) -> "Scalar":
        cd = field._cyclo
        m = field.nparams
        if _p_is_zero(den):
            raise ZeroDivisionError("zero denominator")
        if _p_is_zero(num):
            return cls._raw(field, {}, field._poly_one())
        # strip the common monomial factor
        mins = tuple(min(a, b) for a, b in
                     zip(_p_min_exps(num, m), _p_min_exps(den, m)))
        num = _p_mono_shift(num, mins)
        den = _p_mono_shift(den, mins)
        # cancel the polynomial gcd
        if not _p_is_one(den, cd.degree) and len(num) > 1 and len(den) > 1:
            g = _p_gcd(cd, num, den, m)
            if len(g) > 1 or any(_p_leading_mono(g)):
                num = _p_divexact(cd, num, g)
                den = _p_divexact(cd, den, g)
                if num is None or den is None:
                    raise ArithmeticError("gcd division failed")
        elif len(den) == 1 and len(num) >= 1:
            pass  # monomial denominator already handled by the shift
        # make the denominator lead-monic
        lead = den[_p_leading_mono(den)]
        if lead != _cyc_one(cd.degree):
            inv = _cyc_inv(cd, lead)
            num = _p_scale(cd, num, inv)
            den = _p_scale(cd, den, inv)
        return cls._raw(field, num, den)

    # -- basics -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._num

    def is_one(self) -> bool:
        return (_p_is_one(self._num, self.field._cyclo.degree)
                and _p_is_one(self._den, self.field._cyclo.degree))

    def __bool__(self) -> bool:
        return bool(self._num)

    def key(self):
        if self._key is None:
            self._key = (tuple(sorted(self._num.items())),
                         tuple(sorted(self._den.items())))
        return self._key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.field == other.field and self.key() == other.key()

    def __repr__(self):
        return f"Scalar({render_scalar(self)!r})"

    def _check(self, other: "Scalar"):
        if self.field != other.field:
            raise InvariantError("scalars from different fields")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        self._check(other)
        cd = self.field._cyclo
        if self._den == other._den:
            return Scalar._make(self.field,
                                _p_add(self._num, other._num), dict(self._den))
        num = _p_add(_p_mul(cd, self._num, other._den),
                     _p_mul(cd, other._num, self._den))
        den = _p_mul(cd, self._den, other._den)
        return Scalar._make(self.field, num, den)

    def __neg__(self):
        return Scalar._raw(self.field, _p_neg(self._num), dict(self._den))

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self * self.field.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        self._check(other)
        cd = self.field._cyclo
        num = _p_mul(cd, self._num, other._num)
        den = _p_mul(cd, self._den, other._den)
        return Scalar._make(self.field, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self._num:
            raise ZeroDivisionError("scalar inverse of zero")
        return Scalar._make(self.field, dict(self._den), dict(self._num))

    def __truediv__(self, other):
        if isinstance(other, int):
            return self / self.field.from_int(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- structure queries ----------------------------------------------------

    def is_monomial(self) -> bool:
        """True if the scalar is a unit of the Laurent polynomial ring."""
        return len(self._num) == 1 and len(self._den) == 1

    def monomial_parts(self):
        """For a monomial scalar, (cyclotomic coefficient, exponent vector).

        The exponent vector lives in Z^m; returns None for non-monomials.
        """
        if not self.is_monomial():
            return None
        (mn, vn), = self._num.items()
        (md, vd), = self._den.items()
        cd = self.field._cyclo
        coeff = _cyc_div(cd, vn, vd)
        return coeff, tuple(a - b for a, b in zip(mn, md))

    def var_spread(self, v: int) -> int:
        """max minus min exponent of parameter v over numerator+denominator."""
        exps = [mono[v] for mono in self._num] + [mono[v] for mono in self._den]
        return max(exps) - min(exps)


# --------------------------------------------------------------------------
# orders of scalars as multiplicative units
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitOrder:
    """Tagged multiplicative order: Finite(h), Infinite, or NotAUnit."""

    kind: str  # "finite" | "infinite" | "not_a_unit"
    order: int | None = None

    @classmethod
    def finite(cls, h: int) -> "UnitOrder":
        return cls("finite", h)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def __repr__(self):
        if self.kind == "finite":
            return f"Finite({self.order})"
        return "Infinite" if self.kind == "infinite" else "NotAUnit"


INFINITE = UnitOrder("infinite")
NOT_A_UNIT = UnitOrder("not_a_unit")


def unit_order(s: Scalar) -> UnitOrder:
    """Decide whether s is a root of unity, and of which exact order.

    Roots of unity of Q(zeta_N)(q..) are the +-zeta_N^k; everything else
    is either a unit monomial of infinite order or not a unit of the
    Laurent polynomial ring at all.
    """
    if s.is_zero():
        raise InvariantError("unit order of zero")
    parts = s.monomial_parts()
    if parts is None:
        return NOT_A_UNIT
    coeff, exps = parts
    if any(exps):
        return INFINITE
    cd = s.field._cyclo
    one = _cyc_one(cd.degree)
    acc = coeff
    # torsion of Q(zeta_N)^x has order lcm(2, N)
    for h in range(1, cd.torsion + 1):
        if acc == one:
            return UnitOrder.finite(h)
        acc = _cyc_mul(cd, acc, coeff)
    return INFINITE


def solve_power(base: Scalar, target: Scalar, cap: int):
    """Search for k >= 0 with base**k == target.

    Returns ("found", k) with the minimal such k, ("none", None) when
    certified impossible, or ("unknown", None) when the scan cap was hit
    without a certificate.
    """
    if base.is_zero() or target.is_zero():
        raise InvariantError("solve_power needs nonzero scalars")
    if target.is_one():
        return ("found", 0)
    order = unit_order(base)
    if order.is_finite:
        acc = base.field.one()
        for k in range(1, order.order):
            acc = acc * base
            if acc == target:
                return ("found", k)
        return ("none", None)
    bparts = base.monomial_parts()
    tparts = target.monomial_parts()
    if bparts is not None and any(bparts[1]):
        # base is a monomial with a genuine parameter part: exponents decide
        if tparts is None:
            return ("none", None)
        be, te = bparts[1], tparts[1]
        k = None
        for b, t in zip(be, te):
            if b == 0:
                if t != 0:
                    return ("none", None)
                continue
            if t % b:
                return ("none", None)
            kk = t // b
            if k is None:
                k = kk
            elif k != kk:
                return ("none", None)
        if k is None or k < 0:
            return ("none", None)
        return ("found", k) if base ** k == target else ("none", None)
    if bparts is None:
        # non-monomial base: the exponent spread of powers grows linearly
        for v in range(base.field.nparams):
            sv = base.var_spread(v)
            if sv:
                tv = target.var_spread(v)
                if tv % sv:
                    return ("none", None)
                k = tv // sv
                return ("found", k) if base ** k == target else ("none", None)
        raise ArithmeticError("non-monomial scalar without parameter spread")
    # base is a pure cyclotomic number of infinite multiplicative order:
    # its powers stay pure cyclotomic numbers
    coeff = bparts[0]
    if tparts is None or any(tparts[1]):
        return ("none", None)
    tc = tparts[0]
    if _is_rational_vec(coeff):
        if not _is_rational_vec(tc):
            return ("none", None)
        b = coeff[0]
        t = tc[0]
        acc = _ONE
        k = 0
        growing = abs(b) > 1
        while True:
            if acc == t:
                return ("found", k)
            if growing and abs(acc) > abs(t):
                return ("none", None)
            if not growing and abs(acc) < abs(t):
                return ("none", None)
            acc *= b
            k += 1
    acc = base.field.one()
    for k in range(1, cap + 1):
        acc = acc * base
        if acc == target:
            return ("found", k)
    return ("unknown", None)


def _is_rational_vec(vec) -> bool:
    return not any(vec[1:])


# --------------------------------------------------------------------------
# q-combinatorics
# --------------------------------------------------------------------------

def q_number(n: int, s: Scalar) -> Scalar:
    """(n)_s = 1 + s + ... + s^(n-1)."""
    if n < 0:
        raise InvariantError("q_number needs n >= 0")
    total = s.field.zero()
    power = s.field.one()
    for _ in range(n):
        total = total + power
        power = power * s
    return total


def q_factorial(n: int, s: Scalar) -> Scalar:
    out = s.field.one()
    for k in range(1, n + 1):
        out = out * q_number(k, s)
    return out


def q_binomial(n: int, k: int, s: Scalar) -> Scalar:
    """Gaussian binomial coefficient, computed by the Pascal recursion.

    The recursion avoids divisions, so root-of-unity s is safe.
    """
    if k < 0 or k > n:
        return s.field.zero()
    row = [s.field.one()]
    for i in range(1, n + 1):
        new = [s.field.one()]
        for j in range(1, i):
            new.append(row[j - 1] + (s ** j) * row[j])
        new.append(s.field.one())
        row = new
    return row[k]


# --------------------------------------------------------------------------
# expression grammar: parse and render
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|/|\+|-|\(|\)))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for the scalar expression grammar."""

    def __init__(self, text: str, field: FieldSpec):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.field = field

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.next()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse(self) -> Scalar:
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while True:
            kind, op, _ = self.peek()
            if kind == "op" and op in "+-":
                self.next()
                rhs = self.term()
                value = value + rhs if op == "+" else value - rhs
            else:
                return value

    def term(self) -> Scalar:
        value = self.factor()
        while True:
            kind, op, pos = self.peek()
            if kind == "op" and op in "*/":
                self.next()
                rhs = self.factor()
                if op == "/":
                    if rhs.is_zero():
                        raise ParseError("division by zero", pos)
                    value = value / rhs
                else:
                    value = value * rhs
            else:
                return value

    def factor(self) -> Scalar:
        kind, value, pos = self.peek()
        if kind == "op" and value == "-":
            self.next()
            return -self.factor()
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.next()
            exp = self.signed_int()
            return base ** exp
        return base

    def signed_int(self) -> int:
        kind, value, pos = self.next()
        sign = 1
        if kind == "op" and value == "-":
            sign = -1
            kind, value, pos = self.next()
        if kind != "int":
            raise ParseError("expected integer exponent", pos)
        return sign * value

    def atom(self) -> Scalar:
        kind, value, pos = self.next()
        if kind == "int":
            return self.field.from_int(value)
        if kind == "name":
            if value == "zeta":
                return self.field.zeta(1)
            if value in self.field.parameter_names:
                return self.field.parameter(value)
            raise ParseError(f"unknown parameter {value!r}", pos)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError("expected a rational, name, or parenthesis", pos)


def scalar_parse(text: str, spec: FieldSpec) -> Scalar:
    """Parse an expression over rationals, zeta, and the declared parameters."""
    return _Parser(text, spec).parse()


def _render_term(coef: Fraction, zexp: int, exps: tuple[int, ...],
                 names: tuple[str, ...]) -> str:
    parts = []
    if zexp:
        parts.append("zeta" if zexp == 1 else f"zeta^{zexp}")
    for name, e in zip(names, exps):
        if e:
            parts.append(name if e == 1 else f"{name}^{e}")
    coef_str = str(coef) if coef.denominator > 1 or not parts \
        else (None if coef == 1 else ("-" if coef == -1 else str(coef)))
    if coef_str is None:
        return "*".join(parts)
    if coef_str == "-":
        return "-" + "*".join(parts)
    if parts:
        return coef_str + "*" + "*".join(parts)
    return coef_str


def _render_poly(field: FieldSpec, poly: dict, shift: tuple[int, ...] | None = None) -> str:
    names = field.parameter_names
    m = field.nparams
    if shift is None:
        shift = (0,) * m
    terms = []
    for mono in sorted(poly, reverse=True):
        vec = poly[mono]
        exps = tuple(a - b for a, b in zip(mono, shift))
        for zexp, coef in enumerate(vec):
            if coef:
                terms.append(_render_term(coef, zexp, exps, names))
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def render_scalar(s: Scalar) -> str:
    """Serialize in the input grammar; scalar_parse(render_scalar(s)) == s."""
    if s.is_zero():
        return "0"
    field = s.field
    den = s._den
    if _p_is_one(den, field._cyclo.degree):
        return _render_poly(field, s._num)
    if len(den) == 1:
        (mono, _), = den.items()
        body = _render_poly(field, s._num, shift=mono)
        return body
    num_str = _render_poly(field, s._num)
    den_str = _render_poly(field, den)
    return f"({num_str})/({den_str})"
