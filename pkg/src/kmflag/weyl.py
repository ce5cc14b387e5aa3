"""Weyl group elements, Bruhat order, finite open ideals and the dot action.

Elements act on simple-root coordinates as integer matrices; identity of an
element is identity of its matrix.  The canonical reduced word of an element
is the one produced by greedily peeling the smallest-index left descent,
which is the lexicographically least greedy word.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotInIdeal, NotRealRoot, SizeLimitExceeded, UnsupportedKind
from .root_datum import (
    FINITE,
    RootDatum,
    RootVector,
    is_negative_vector,
    is_positive_vector,
)

DEFAULT_SIZE_LIMIT = 100_000


def _matmul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _identity_matrix(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


class WeylElement:
    """Group element as a matrix acting on simple-root coordinates.

    Carries its inverse matrix so descent tests never trigger a matrix
    inversion; length and the canonical reduced word are computed lazily.
    """

    __slots__ = ("datum", "matrix", "inv_matrix", "_length", "_word")

    def __init__(self, datum: RootDatum, matrix, inv_matrix):
        self.datum = datum
        self.matrix = matrix
        self.inv_matrix = inv_matrix
        self._length = None
        self._word = None

    def __eq__(self, other):
        return (
            isinstance(other, WeylElement)
            and self.datum is other.datum
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"WeylElement({format_word(self)})"

    def is_identity(self) -> bool:
        return self.matrix == _identity_matrix(self.datum.rank)

    def apply(self, beta) -> tuple:
        m = self.matrix
        n = self.datum.rank
        return tuple(sum(m[i][j] * beta[j] for j in range(n)) for i in range(n))

    def apply_inverse(self, beta) -> tuple:
        m = self.inv_matrix
        n = self.datum.rank
        return tuple(sum(m[i][j] * beta[j] for j in range(n)) for i in range(n))

    def _image_of_simple(self, i: int, inverse: bool = False) -> RootVector:
        m = self.inv_matrix if inverse else self.matrix
        return tuple(row[i] for row in m)

    def left_descents(self) -> list[int]:
        """Indices i with l(s_i w) < l(w), i.e. w^{-1}(alpha_i) negative."""
        return [
            i
            for i in range(self.datum.rank)
            if is_negative_vector(self._image_of_simple(i, inverse=True))
        ]

    def right_descents(self) -> list[int]:
        return [
            i
            for i in range(self.datum.rank)
            if is_negative_vector(self._image_of_simple(i))
        ]

    def _compute_word(self):
        word = []
        w = self
        while True:
            ds = w.left_descents()
            if not ds:
                break
            i = ds[0]
            word.append(i)
            w = multiply(simple_reflection(w.datum, i), w)
        if not w.is_identity():
            raise AssertionError("descent peeling did not reach the identity")
        self._word = tuple(word)
        self._length = len(word)

    def length(self) -> int:
        if self._length is None:
            self._compute_word()
        return self._length

    def reduced_word(self) -> tuple[int, ...]:
        if self._word is None:
            self._compute_word()
        return self._word

    def sort_key(self):
        return (self.length(), self.reduced_word())


def identity(datum: RootDatum) -> WeylElement:
    m = _identity_matrix(datum.rank)
    return WeylElement(datum, m, m)


def simple_reflection(datum: RootDatum, i: int) -> WeylElement:
    n = datum.rank
    a = datum.cartan
    m = tuple(
        tuple((1 if r == c else 0) - (a[i][c] if r == i else 0) for c in range(n))
        for r in range(n)
    )
    return WeylElement(datum, m, m)


def multiply(u: WeylElement, v: WeylElement) -> WeylElement:
    if u.datum is not v.datum:
        raise ValueError("elements belong to different root data")
    return WeylElement(
        u.datum, _matmul(u.matrix, v.matrix), _matmul(v.inv_matrix, u.inv_matrix)
    )


def inverse(u: WeylElement) -> WeylElement:
    return WeylElement(u.datum, u.inv_matrix, u.matrix)


def from_word(datum: RootDatum, word) -> WeylElement:
    w = identity(datum)
    for i in word:
        w = multiply(w, simple_reflection(datum, i))
    return w


def format_word(u: WeylElement) -> str:
    """Serialize as 1-based reflection indices, identity as "e"."""
    word = u.reduced_word()
    return "e" if not word else ",".join(str(i + 1) for i in word)


def parse_word(datum: RootDatum, text: str) -> WeylElement:
    text = text.strip()
    if text in ("e", ""):
        return identity(datum)
    word = []
    for part in text.split(","):
        i = int(part) - 1
        if not 0 <= i < datum.rank:
            raise ValueError(f"reflection index {part} out of range 1..{datum.rank}")
        word.append(i)
    return from_word(datum, word)


def bruhat_leq(y: WeylElement, w: WeylElement) -> bool:
    """Bruhat order test by the right-to-left scan over w's canonical word.

    Peeling the rightmost letter s of w, the lifting property gives
    y <= w  iff  min(y, ys) <= ws; iterating down to the identity leaves
    exactly the identity when y <= w.
    """
    if y.datum is not w.datum:
        raise ValueError("elements belong to different root data")
    if y.length() > w.length():
        return False
    v = y
    for i in reversed(w.reduced_word()):
        if is_negative_vector(v._image_of_simple(i)):
            v = multiply(v, simple_reflection(v.datum, i))
    return v.is_identity()


def reflection(datum: RootDatum, beta) -> WeylElement:
    """The reflection s_beta for a positive real root beta."""
    if not is_positive_vector(beta):
        raise NotRealRoot(f"{beta} is not a positive vector")
    if not datum.is_real_root(beta):
        raise NotRealRoot(f"{beta} is not a real root")
    norm = datum.bilinear(beta, beta)
    n = datum.rank
    cols = []
    for j in range(n):
        pairing = Fraction(2 * datum.bilinear(datum.simple_root(j), beta), norm)
        if pairing.denominator != 1:
            raise AssertionError(f"non-integral coroot pairing for {beta}")
        cols.append(
            tuple(
                (1 if r == j else 0) - int(pairing) * beta[r] for r in range(n)
            )
        )
    m = tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))
    return WeylElement(datum, m, m)


def is_reflection(t: WeylElement) -> RootVector | None:
    """The positive real root beta with t = s_beta, or None.

    beta is recovered as a primitive integer spanning vector of the
    (-1)-eigenspace; the candidate is then verified against the
    reflection formula.
    """
    n = t.datum.rank
    if t.is_identity() or _matmul(t.matrix, t.matrix) != _identity_matrix(n):
        return None
    rows = [[Fraction(t.matrix[i][j] + (1 if i == j else 0)) for j in range(n)]
            for i in range(n)]
    # kernel of (M + I)
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, n) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    sol = [Fraction(0)] * n
    sol[free[0]] = Fraction(1)
    for i, col in enumerate(pivots):
        sol[col] = -rows[i][free[0]]
    scale = 1
    for x in sol:
        scale = scale * x.denominator // gcd(scale, x.denominator)
    ints = [int(x * scale) for x in sol]
    g = 0
    for x in ints:
        g = gcd(g, x)
    beta = tuple(x // g for x in ints)
    if is_negative_vector(beta):
        beta = tuple(-c for c in beta)
    if not is_positive_vector(beta):
        return None
    if not t.datum.is_real_root(beta):
        return None
    if reflection(t.datum, beta) != t:
        return None
    return beta


# -- finite open ideals ---------------------------------------------------


@dataclass(frozen=True)
class BruhatIdeal:
    """A finite downward-closed subset of the Weyl group."""

    datum: RootDatum
    elements: tuple[WeylElement, ...]
    description: str

    def __post_init__(self):
        object.__setattr__(self, "_set", frozenset(self.elements))

    def __contains__(self, w) -> bool:
        return w in self._set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def max_length(self) -> int:
        return max(w.length() for w in self.elements)

    def require(self, *ws):
        for w in ws:
            if w not in self:
                raise NotInIdeal(f"element {format_word(w)} not in the ideal")

    def is_downward_closed(self) -> bool:
        """Check closure via single-letter deletions: every cover of an
        element arises by deleting one letter of its canonical word."""
        for w in self.elements:
            word = w.reduced_word()
            for p in range(len(word)):
                sub = from_word(self.datum, word[:p] + word[p + 1 :])
                if sub not in self:
                    return False
        return True


def _canonical_sort(elements) -> tuple[WeylElement, ...]:
    return tuple(sorted(elements, key=WeylElement.sort_key))


def enumerate_ideal(
    datum: RootDatum, max_length: int, size_limit: int = DEFAULT_SIZE_LIMIT
) -> BruhatIdeal:
    """All elements of length <= max_length, by BFS on right multiplication."""
    if max_length < 0:
        raise ValueError("max_length must be >= 0")
    e = identity(datum)
    e._length, e._word = 0, ()
    found = {e}
    frontier = [e]
    length = 0
    while frontier and length < max_length:
        nxt = []
        for w in frontier:
            for i in range(datum.rank):
                if is_positive_vector(w._image_of_simple(i)):
                    ws = multiply(w, simple_reflection(datum, i))
                    if ws not in found:
                        ws._length = length + 1
                        found.add(ws)
                        nxt.append(ws)
                        if len(found) > size_limit:
                            raise SizeLimitExceeded(
                                f"ideal exceeds size limit {size_limit}"
                            )
        frontier = nxt
        length += 1
    return BruhatIdeal(datum, _canonical_sort(found), f"max_length={max_length}")


def full_weyl_group(
    datum: RootDatum, size_limit: int = DEFAULT_SIZE_LIMIT
) -> BruhatIdeal:
    """The whole Weyl group as an ideal (finite kind only)."""
    if datum.kind != FINITE:
        raise UnsupportedKind("full enumeration requires finite kind")
    e = identity(datum)
    found = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(datum.rank):
                ws = multiply(w, simple_reflection(datum, i))
                if ws not in found:
                    found.add(ws)
                    nxt.append(ws)
                    if len(found) > size_limit:
                        raise SizeLimitExceeded(f"group exceeds size limit {size_limit}")
        frontier = nxt
    return BruhatIdeal(datum, _canonical_sort(found), "full")


def ideal_from_generators(
    datum: RootDatum, generators, size_limit: int = DEFAULT_SIZE_LIMIT
) -> BruhatIdeal:
    """Downward closure of explicit generators, via subword products."""
    found = set()
    for g in generators:
        word = g.reduced_word()
        n = len(word)
        if n > 20:
            raise SizeLimitExceeded("generator word too long for subword closure")
        for mask in range(1 << n):
            sub = tuple(word[k] for k in range(n) if mask >> k & 1)
            found.add(from_word(datum, sub))
            if len(found) > size_limit:
                raise SizeLimitExceeded(f"ideal exceeds size limit {size_limit}")
    desc = "generators=" + ";".join(format_word(g) for g in generators)
    return BruhatIdeal(datum, _canonical_sort(found), desc)


# -- inversion sets and stratum dimensions --------------------------------


def inversion_set(u: WeylElement) -> set[RootVector]:
    """{alpha > 0 : u^{-1}(alpha) < 0}, read off the reduced word."""
    word = u.reduced_word()
    datum = u.datum
    prefix = identity(datum)
    out = set()
    for i in word:
        out.add(prefix.apply(datum.simple_root(i)))
        prefix = multiply(prefix, simple_reflection(datum, i))
    if len(out) != len(word):
        raise AssertionError("inversion set size must equal the length")
    return out


def sj_complement(ideal: BruhatIdeal) -> set[RootVector]:
    """R^+ minus the cofinite stable set of the ideal: the finite union of
    the inversion sets of its elements."""
    out = set()
    for x in ideal:
        out |= inversion_set(x)
    return out


def stratum_dimension(x: WeylElement, ideal: BruhatIdeal) -> int:
    """Dimension of the stratum quotient for x inside the ideal.

    Both descriptions are computed and must agree:
    |{alpha in complement : x^{-1}(alpha) > 0}|  ==  |complement| - l(x).
    """
    ideal.require(x)
    comp = sj_complement(ideal)
    direct = sum(1 for alpha in comp if is_positive_vector(x.apply_inverse(alpha)))
    counted = len(comp) - x.length()
    if direct != counted:
        raise AssertionError("stratum dimension formulas disagree")
    return direct


# -- weights and the dot action -------------------------------------------


@dataclass(frozen=True)
class WeightCoords:
    """Integral weight recorded by its simple-coroot pairings plus the
    root-lattice offset from a block base point."""

    pairings: tuple[int, ...]
    offset: tuple[int, ...]

    @staticmethod
    def base(pairings) -> "WeightCoords":
        p = tuple(int(x) for x in pairings)
        return WeightCoords(p, tuple(0 for _ in p))


def dot_action(w: WeylElement, lam: WeightCoords) -> WeightCoords:
    """w.lambda = w(lambda + rho) - rho, iterated along a reduced word via
    s_i . mu = mu - (<mu, alpha_i^vee> + 1) alpha_i."""
    a = w.datum.cartan
    n = w.datum.rank
    pairings = list(lam.pairings)
    offset = list(lam.offset)
    for i in reversed(w.reduced_word()):
        c = pairings[i] + 1
        for j in range(n):
            pairings[j] -= c * a[j][i]
        offset[i] -= c
    return WeightCoords(tuple(pairings), tuple(offset))
