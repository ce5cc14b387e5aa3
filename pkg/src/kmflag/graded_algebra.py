"""Exact graded commutative algebra over the rationals.

S is the polynomial ring on the images of the simple roots, graded so that
each generator sits in degree 2.  Modules are finite direct sums of cyclic
pieces - free, or cut by a single linear form - with explicit homogeneous
generators, exact below a configured degree cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._linalg import RowSpan
from .errors import CapBoundaryGenerator, DegreeCapExceeded, DegreeMismatch, ZeroForm


class SPoly:
    """Multivariate polynomial with rational coefficients; terms is a map
    from exponent tuples to nonzero Fractions."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(exp)] = c
        self.terms = clean

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        exp = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {exp: 1})

    @classmethod
    def linear(cls, coords) -> "SPoly":
        n = len(coords)
        return cls(
            n,
            {
                tuple(1 if j == i else 0 for j in range(n)): c
                for i, c in enumerate(coords)
                if c
            },
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, SPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __add__(self, other):
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return SPoly(self.nvars, out)

    def __neg__(self):
        return SPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return SPoly(self.nvars, out)

    __rmul__ = __mul__

    def poly_degree(self):
        """Total degree in the generators, None for zero."""
        return max((sum(e) for e in self.terms), default=None)

    def s_degree(self):
        """Graded degree (generators live in degree 2), None for zero."""
        d = self.poly_degree()
        return None if d is None else 2 * d

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "SPoly(0)"
        bits = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                f"x{i+1}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp)
                if e
            )
            bits.append(f"{c}" + ("*" + mono if mono else ""))
        return "SPoly(" + " + ".join(bits) + ")"


def _linear_coords(alpha: SPoly):
    coords = [Fraction(0)] * alpha.nvars
    for exp, c in alpha.terms.items():
        if sum(exp) != 1:
            raise ZeroForm("expected a homogeneous linear form")
        coords[exp.index(1)] = c
    if not any(coords):
        raise ZeroForm("zero linear form")
    return tuple(coords)


def reduce_mod_linear(p: SPoly, alpha: SPoly) -> SPoly:
    """Canonical normal form of p in S/(alpha): eliminate the first
    generator carried by alpha by substitution."""
    coords = _linear_coords(alpha)
    quot = linear_quotient(p.nvars, coords)
    out: dict = {}
    for exp, c in p.terms.items():
        for tgt, f in quot.expand_monomial(exp):
            v = out.get(tgt, 0) + c * f
            if v:
                out[tgt] = v
            else:
                out.pop(tgt, None)
    return SPoly(p.nvars, out)


def divide_by_linear(p: SPoly, alpha: SPoly):
    """(q, r) with p = q*alpha + r and r free of alpha's leading generator."""
    coords = _linear_coords(alpha)
    j = next(i for i, c in enumerate(coords) if c)
    cj = coords[j]
    quot = SPoly.zero(p.nvars)
    while True:
        upper = {e: c for e, c in p.terms.items() if e[j] > 0}
        if not upper:
            return quot, p
        a = SPoly(
            p.nvars,
            {
                tuple(x - (1 if i == j else 0) for i, x in enumerate(e)): Fraction(c) / cj
                for e, c in upper.items()
            },
        )
        quot = quot + a
        p = p - a * alpha


# -- monomial machinery ----------------------------------------------------


class PolyRing:
    """Monomial bookkeeping for a fixed number of generators."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self._monos: dict[int, tuple] = {}
        self._index: dict[int, dict] = {}
        self._shift: dict = {}

    def monomials(self, k: int) -> tuple:
        got = self._monos.get(k)
        if got is None:
            got = tuple(sorted(_compositions(k, self.nvars)))
            self._monos[k] = got
        return got

    def mono_index(self, k: int) -> dict:
        got = self._index.get(k)
        if got is None:
            got = {m: i for i, m in enumerate(self.monomials(k))}
            self._index[k] = got
        return got

    def mul_var_map(self, k: int, var: int) -> tuple:
        """Index of x_var * m in monomials(k+1) for each m in monomials(k)."""
        key = (k, var)
        got = self._shift.get(key)
        if got is None:
            idx = self.mono_index(k + 1)
            got = tuple(
                idx[tuple(e + (1 if i == var else 0) for i, e in enumerate(m))]
                for m in self.monomials(k)
            )
            self._shift[key] = got
        return got


def _compositions(k: int, n: int):
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(k - first, n - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def poly_ring(nvars: int) -> PolyRing:
    return PolyRing(nvars)


class LinearQuotient:
    """Normal-form arithmetic in S/(alpha) for a linear form alpha.

    The first generator with a nonzero coefficient is substituted away, so
    normal forms are spanned by the monomials avoiding it.
    """

    def __init__(self, ring: PolyRing, coords):
        self.ring = ring
        self.coords = coords
        self.elim = next(i for i, c in enumerate(coords) if c)
        cj = Fraction(coords[self.elim])
        self.sub = {
            i: -Fraction(c) / cj for i, c in enumerate(coords) if c and i != self.elim
        }
        self._reduced: dict[int, tuple] = {}
        self._reduced_index: dict[int, dict] = {}
        self._powers: dict[int, dict] = {0: {(0,) * ring.nvars: Fraction(1)}}
        self._mulmaps: dict = {}

    def reduced_monomials(self, k: int) -> tuple:
        got = self._reduced.get(k)
        if got is None:
            got = tuple(m for m in self.ring.monomials(k) if m[self.elim] == 0)
            self._reduced[k] = got
        return got

    def reduced_index(self, k: int) -> dict:
        got = self._reduced_index.get(k)
        if got is None:
            got = {m: i for i, m in enumerate(self.reduced_monomials(k))}
            self._reduced_index[k] = got
        return got

    def dim(self, k: int) -> int:
        return len(self.reduced_monomials(k))

    def _power(self, e: int) -> dict:
        """Expansion of x_elim^e as a normal-form polynomial."""
        got = self._powers.get(e)
        if got is None:
            prev = self._power(e - 1)
            out: dict = {}
            for mono, c in prev.items():
                for i, f in self.sub.items():
                    tgt = tuple(x + (1 if t == i else 0) for t, x in enumerate(mono))
                    v = out.get(tgt, 0) + c * f
                    if v:
                        out[tgt] = v
                    else:
                        out.pop(tgt, None)
            self._powers[e] = out
            got = out
        return got

    def expand_monomial(self, exp):
        """Normal form of a monomial as ((monomial, coeff), ...)."""
        e = exp[self.elim]
        if e == 0:
            return ((exp, Fraction(1)),)
        rest = tuple(x if i != self.elim else 0 for i, x in enumerate(exp))
        return tuple(
            (tuple(a + b for a, b in zip(rest, mono)), c)
            for mono, c in self._power(e).items()
        )

    def reduce_terms(self, terms: dict, k: int):
        """Coefficient vector over reduced_monomials(k) of a degree-k
        polynomial given as an exponent->coefficient map."""
        idx = self.reduced_index(k)
        out = [0] * len(idx)
        for exp, c in terms.items():
            for tgt, f in self.expand_monomial(exp):
                out[idx[tgt]] += c * f
        return out

    def reduce_full_vec(self, vec, k: int):
        """Reduce a coefficient vector over all monomials(k)."""
        monos = self.ring.monomials(k)
        return self.reduce_terms(
            {m: c for m, c in zip(monos, vec) if c}, k
        )

    def reduce_map_indexed(self, k: int) -> tuple:
        """Reduction matrix in sparse index form: per source monomial index,
        ((reduced index, coeff), ...)."""
        key = ("red", k)
        got = self._mulmaps.get(key)
        if got is None:
            idx = self.reduced_index(k)
            got = tuple(
                tuple((idx[tgt], f) for tgt, f in self.expand_monomial(m))
                for m in self.ring.monomials(k)
            )
            self._mulmaps[key] = got
        return got

    def reduce_vec_indexed(self, vec, k: int):
        out = [0] * self.dim(k)
        rmap = self.reduce_map_indexed(k)
        for i, c in enumerate(vec):
            if c:
                for tgt, f in rmap[i]:
                    out[tgt] += c * f
        return out

    def mul_var_map(self, k: int, var: int) -> tuple:
        """Multiplication by x_var from reduced degree k to reduced degree
        k+1, as ((target, coeff), ...) per source monomial."""
        key = (k, var)
        got = self._mulmaps.get(key)
        if got is None:
            idx = self.reduced_index(k + 1)
            rows = []
            for m in self.reduced_monomials(k):
                if var != self.elim:
                    tgt = tuple(e + (1 if i == var else 0) for i, e in enumerate(m))
                    rows.append(((idx[tgt], Fraction(1)),))
                else:
                    row = []
                    for i, f in self.sub.items():
                        tgt = tuple(e + (1 if t == i else 0) for t, e in enumerate(m))
                        row.append((idx[tgt], f))
                    rows.append(tuple(row))
            got = tuple(rows)
            self._mulmaps[key] = got
        return got


@lru_cache(maxsize=None)
def linear_quotient(nvars: int, coords) -> LinearQuotient:
    return LinearQuotient(poly_ring(nvars), coords)


# -- graded module representations -----------------------------------------


@dataclass(frozen=True)
class CyclicPiece:
    """One cyclic summand: S(-shift), or (S/alpha)(-shift) for a linear
    form given by its coordinate tuple."""

    shift: int
    annihilator: tuple | None = None


class ModuleAmbient:
    """A finite direct sum of cyclic pieces with degreewise coordinates."""

    def __init__(self, nvars: int, pieces):
        self.nvars = nvars
        self.ring = poly_ring(nvars)
        self.pieces = tuple(pieces)
        self.quotients = tuple(
            linear_quotient(nvars, tuple(Fraction(c) for c in p.annihilator))
            if p.annihilator is not None
            else None
            for p in self.pieces
        )

    def _piece_k(self, piece: CyclicPiece, d: int):
        """Polynomial degree of the degree-d slice of a piece, or None."""
        rel = d - piece.shift
        if rel < 0 or rel % 2:
            return None
        return rel // 2

    def piece_dim(self, t: int, d: int) -> int:
        k = self._piece_k(self.pieces[t], d)
        if k is None:
            return 0
        q = self.quotients[t]
        return len(self.ring.monomials(k)) if q is None else q.dim(k)

    def dims(self, d: int) -> list[int]:
        return [self.piece_dim(t, d) for t in range(len(self.pieces))]

    def dim(self, d: int) -> int:
        return sum(self.dims(d))

    def element_degree(self, element) -> int | None:
        degs = set()
        for p, piece in zip(element, self.pieces):
            if p and not p.is_zero():
                if not p.is_homogeneous():
                    raise DegreeMismatch("element coordinates must be homogeneous")
                degs.add(p.s_degree() + piece.shift)
        if len(degs) > 1:
            raise DegreeMismatch(f"mixed degrees {sorted(degs)} in one element")
        return degs.pop() if degs else None

    def flatten(self, element, d: int):
        """Coordinates of a homogeneous degree-d element."""
        out = []
        for t, (p, piece) in enumerate(zip(element, self.pieces)):
            k = self._piece_k(piece, d)
            if k is None:
                if p and not p.is_zero():
                    raise DegreeMismatch("coordinate in a zero slice")
                continue
            q = self.quotients[t]
            if q is None:
                idx = self.ring.mono_index(k)
                block = [0] * len(idx)
                for exp, c in p.terms.items():
                    if sum(exp) != k:
                        raise DegreeMismatch("coordinate degree mismatch")
                    block[idx[exp]] += c
                out.extend(block)
            else:
                for exp in p.terms:
                    if sum(exp) != k:
                        raise DegreeMismatch("coordinate degree mismatch")
                out.extend(q.reduce_terms(p.terms, k))
        return out

    def unflatten(self, vec, d: int):
        out = []
        pos = 0
        for t, piece in enumerate(self.pieces):
            k = self._piece_k(piece, d)
            if k is None:
                out.append(SPoly.zero(self.nvars))
                continue
            q = self.quotients[t]
            monos = self.ring.monomials(k) if q is None else q.reduced_monomials(k)
            block = vec[pos : pos + len(monos)]
            pos += len(monos)
            out.append(SPoly(self.nvars, dict(zip(monos, block))))
        return tuple(out)

    def mul_var_vec(self, vec, d: int, var: int):
        """Multiply a flattened degree-d vector by x_var (degree d+2)."""
        out = [0] * self.dim(d + 2)
        src_pos = 0
        tgt_pos = 0
        for t, piece in enumerate(self.pieces):
            k = self._piece_k(piece, d)
            tdim = self.piece_dim(t, d + 2)
            if k is None:
                tgt_pos += tdim
                continue
            q = self.quotients[t]
            sdim = self.piece_dim(t, d)
            if q is None:
                shift = self.ring.mul_var_map(k, var)
                for i in range(sdim):
                    c = vec[src_pos + i]
                    if c:
                        out[tgt_pos + shift[i]] += c
            else:
                rows = q.mul_var_map(k, var)
                for i in range(sdim):
                    c = vec[src_pos + i]
                    if c:
                        for tgt, f in rows[i]:
                            out[tgt_pos + tgt] += c * f
            src_pos += sdim
            tgt_pos += tdim
        return out


@dataclass
class GradedModuleRep:
    """Submodule of an ambient sum of cyclic pieces, given by homogeneous
    generators; all degreewise data is exact up to degree_cap."""

    ambient: ModuleAmbient
    generators: tuple
    degree_cap: int

    def generator_degrees(self) -> list[int]:
        degs = []
        for g in self.generators:
            d = self.ambient.element_degree(g)
            if d is None:
                continue
            degs.append(d)
        return degs


def _degree_candidates(module: GradedModuleRep, d: int):
    """Flattened spanning vectors {monomial * generator} of the degree-d
    slice, in deterministic (generator, monomial) order."""
    amb = module.ambient
    out = []
    for g in module.generators:
        e = amb.element_degree(g)
        if e is None or e > d or (d - e) % 2:
            continue
        base = amb.flatten(g, e)
        for mono in amb.ring.monomials((d - e) // 2):
            vec = base
            deg = e
            for var, count in enumerate(mono):
                for _ in range(count):
                    vec = amb.mul_var_vec(vec, deg, var)
                    deg += 2
            out.append(vec)
    return out


def degree_basis(module: GradedModuleRep, d: int):
    """Basis of the degree-d slice of the generated submodule."""
    if d > module.degree_cap:
        raise DegreeCapExceeded(f"degree {d} above cap {module.degree_cap}")
    amb = module.ambient
    span = RowSpan(amb.dim(d))
    for v in _degree_candidates(module, d):
        span.add(v)
    return [amb.unflatten(row, d) for row in span.rows]


def minimal_generators(module: GradedModuleRep):
    """Degrees of a minimal homogeneous generating set, with representatives.

    Degreewise sweep: in each degree the new generators are a basis of the
    slice modulo everything reachable from lower degrees.  A generator
    within one even step of the cap means the answer cannot be trusted.
    """
    amb = module.ambient
    gen_degrees = module.generator_degrees()
    if not gen_degrees:
        return (), []
    start = min(gen_degrees)
    degrees = []
    reps = []
    prev_basis: list = []
    d = start
    while d <= module.degree_cap:
        span = RowSpan(amb.dim(d))
        # (S+ M)_d = S_2 . M_{d-2}; every monomial*generator candidate of
        # positive monomial degree already lies in this span
        for v in prev_basis:
            for var in range(amb.nvars):
                span.add(amb.mul_var_vec(v, d - 2, var))
        news = 0
        for g in module.generators:
            if amb.element_degree(g) == d and span.add(amb.flatten(g, d)):
                degrees.append(d)
                reps.append(g)
                news += 1
        if news and d >= module.degree_cap - 2:
            raise CapBoundaryGenerator(
                f"generator in degree {d} within one step of cap {module.degree_cap}"
            )
        prev_basis = span.rows
        d += 2
    return tuple(degrees), reps


def image_module(source: GradedModuleRep, images, target: ModuleAmbient,
                 degree_cap: int | None = None) -> GradedModuleRep:
    """The submodule of the target generated by the per-generator images."""
    if len(images) != len(source.generators):
        raise DegreeMismatch("one image per source generator required")
    for g, im in zip(source.generators, images):
        dg = source.ambient.element_degree(g)
        di = target.element_degree(im)
        if di is not None and di != dg:
            raise DegreeMismatch(f"image degree {di} != source degree {dg}")
    cap = source.degree_cap if degree_cap is None else degree_cap
    return GradedModuleRep(target, tuple(images), cap)


def debug_dump(module: GradedModuleRep) -> dict:
    """JSON-friendly dump: pieces and generators as sorted term lists."""

    def poly_terms(p: SPoly):
        return [[list(exp), str(c)] for exp, c in p.sorted_terms()]

    return {
        "nvars": module.ambient.nvars,
        "degree_cap": module.degree_cap,
        "pieces": [
            {
                "shift": piece.shift,
                "annihilator": list(piece.annihilator)
                if piece.annihilator is not None
                else None,
            }
            for piece in module.ambient.pieces
        ],
        "generators": [[poly_terms(c) for c in g] for g in module.generators],
    }
