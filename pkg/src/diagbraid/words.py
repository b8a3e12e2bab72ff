"""Words over the ordered alphabet x_1 < ... < x_theta.

A word is a tuple of 1-based letter indices; the empty tuple is the unit.
Provides the lexicographic and deg-lex orders, Lyndon tests, the
non-increasing Lyndon factorization, and the Shirshov decomposition.
"""

from __future__ import annotations

from .errors import InvariantError, ParseError

Word = tuple[int, ...]


def check_word(u: Word, theta: int) -> None:
    if any(not (1 <= a <= theta) for a in u):
        raise InvariantError(f"letter out of range in {u} (theta={theta})")


def degree(u: Word, theta: int) -> tuple[int, ...]:
    """Z^theta degree of a word: letter multiplicities."""
    counts = [0] * theta
    for a in u:
        counts[a - 1] += 1
    return tuple(counts)


def lex_less(u: Word, v: Word) -> bool:
    """Strict lexicographic order with the prefix rule (u < uv)."""
    return tuple(u) < tuple(v)


def deglex_less(u: Word, v: Word) -> bool:
    """True iff v is deg-lex greater than u.

    Orientation: shorter words are greater, the empty word is the maximum,
    and among words of equal length the lexicographically greater one is
    the deg-lex greater one.  This is the order whose *smallest* word in a
    homogeneous element is the leading term used throughout `pbw`.
    """
    if len(u) != len(v):
        return len(u) > len(v)
    return tuple(v) > tuple(u)


def is_lyndon(u: Word) -> bool:
    """True iff u is strictly smaller than every proper nonempty end."""
    if not u:
        raise InvariantError("the empty word is not eligible")
    u = tuple(u)
    return all(u < u[i:] for i in range(1, len(u)))


def lyndon_factorize(u: Word) -> list[Word]:
    """The unique non-increasing factorization into Lyndon words.

    Uses Duval's linear scan; the contract is uniqueness, not the
    particular algorithm.
    """
    if not u:
        raise InvariantError("cannot factorize the empty word")
    u = tuple(u)
    factors: list[Word] = []
    k = 0
    n = len(u)
    while k < n:
        i, j = k, k + 1
        while j < n and u[i] <= u[j]:
            i = k if u[i] < u[j] else i + 1
            j += 1
        period = j - i
        while k <= i:
            factors.append(u[k:k + period])
            k += period
    return factors


def shirshov_split(u: Word) -> tuple[Word, Word]:
    """Split a Lyndon word at its lexicographically smallest proper end."""
    u = tuple(u)
    if len(u) < 2:
        raise InvariantError("need a Lyndon word of length >= 2")
    if not is_lyndon(u):
        raise InvariantError(f"{u} is not a Lyndon word")
    best = 1
    for i in range(2, len(u)):
        if u[i:] < u[best:]:
            best = i
    return u[:best], u[best:]


def render_word(u: Word) -> str:
    """Words print as products of generators, e.g. ``x1*x2*x1``."""
    if not u:
        return "1"
    return "*".join(f"x{a}" for a in u)


def parse_word(text: str, theta: int) -> Word:
    """Inverse of render_word."""
    text = text.strip()
    if text == "1":
        return ()
    letters = []
    for part in text.split("*"):
        part = part.strip()
        if not part.startswith("x"):
            raise ParseError(f"bad letter {part!r}")
        try:
            idx = int(part[1:])
        except ValueError:
            raise ParseError(f"bad letter {part!r}") from None
        if not 1 <= idx <= theta:
            raise ParseError(f"letter index out of range: {part!r}")
        letters.append(idx)
    return tuple(letters)
