"""L-functions of Z-constructible sheaves on P^1 over F_q.

A sheaf is a virtual combination of two kinds of atoms: pushforwards of
lattices along abelian covers and skyscrapers of Frobenius modules at a
closed point. L-functions are computed as Euler products to a finite
depth and then reconstructed exactly as rational functions in t = q^(-s).
"""

from __future__ import annotations

import contextvars
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import (
    FunctionalEquationViolated,
    NoSolution,
    OddConductor,
    ReconstructionUnstable,
    ValidationError,
)
from .exact import (
    Poly,
    RationalFunctionQ,
    TruncatedSeries,
    count_real_roots,
    reversed_charpoly,
    squarefree_part,
    pade_reconstruct,
)
from .fields import (
    AbelianCover,
    Fq,
    Place,
    decomposition,
    frobenius_counts,
    genus_of_cover,
    place_count,
    places_of_degree,
)
from .galois import (
    FrobModule,
    GaloisLattice,
    dual_lattice,
    induced_lattice,
    invariants,
    restricted_action,
)


# ---------------------------------------------------------------------------
# run settings


@dataclass(frozen=True)
class Settings:
    max_depth: int = 24
    threads: int = 1


_SETTINGS = contextvars.ContextVar("ffweil_settings", default=Settings())


def current_settings() -> Settings:
    return _SETTINGS.get()


@contextmanager
def configured(max_depth=None, threads=None):
    """Temporarily change the reconstruction depth cap and thread count."""
    old = _SETTINGS.get()
    new = Settings(
        old.max_depth if max_depth is None else int(max_depth),
        old.threads if threads is None else max(1, int(threads)),
    )
    token = _SETTINGS.set(new)
    try:
        yield new
    finally:
        _SETTINGS.reset(token)


# ---------------------------------------------------------------------------
# sheaves


@dataclass(frozen=True)
class Pushforward:
    """j_* of a lattice along an abelian cover."""

    cover: AbelianCover
    lattice: GaloisLattice

    def __post_init__(self):
        if tuple(self.lattice.orders) != tuple(self.cover.orders):
            raise ValidationError("lattice group does not match the cover group")

    @property
    def field(self):
        return self.cover.field


@dataclass(frozen=True)
class Skyscraper:
    """A Frobenius module placed at one closed point."""

    place: Place
    module: FrobModule
    field: Fq


@dataclass(frozen=True)
class VirtualSheaf:
    """Formal integer combination of atoms; ``terms`` holds (multiplicity, atom)."""

    field: Fq
    terms: tuple

    def __post_init__(self):
        for mult, atom in self.terms:
            if atom.field != self.field:
                raise ValidationError("all atoms of a sheaf must live over the same field")

    @classmethod
    def of(cls, atom, mult=1):
        return cls(atom.field, ((mult, atom),))

    def __add__(self, other):
        return VirtualSheaf(self.field, self.terms + other.terms)

    def __neg__(self):
        return VirtualSheaf(self.field, tuple((-m, a) for m, a in self.terms))

    def __sub__(self, other):
        return self + (-other)


def as_sheaf(z):
    if isinstance(z, VirtualSheaf):
        return z
    return VirtualSheaf.of(z)


# ---------------------------------------------------------------------------
# local factors


def _local_factor(lattice_dual: GaloisLattice, inertia_gen, frob) -> tuple:
    """Integer coefficients of det(1 - Frob u | (L')^I)."""
    fixed = invariants(lattice_dual, [inertia_gen])
    if not fixed:
        return (1,)
    a = restricted_action(lattice_dual, fixed, frob)
    return tuple(reversed_charpoly(a).int_coeffs())


class _LocalData:
    """Per-atom cache of local factors keyed by decomposition data."""

    def __init__(self, atom: Pushforward):
        self.atom = atom
        self.dual = dual_lattice(atom.lattice)
        self.cache = {}

    def factor(self, inertia_gen, frob):
        key = (inertia_gen, frob)
        if key not in self.cache:
            self.cache[key] = _local_factor(self.dual, inertia_gen, frob)
        return self.cache[key]

    def at(self, v: Place):
        d = decomposition(self.atom.cover, v)
        return self.factor(d.inertia_generator, d.frobenius)


_LOCAL = {}


def _local_data(atom):
    if atom not in _LOCAL:
        _LOCAL[atom] = _LocalData(atom)
    return _LOCAL[atom]


def euler_factor(atom, v: Place) -> Poly:
    """Local factor det(1 - Frob t^deg(v) | stalk^I) as a polynomial in t."""
    if isinstance(atom, Skyscraper):
        if atom.place != v:
            return Poly.one()
        return reversed_charpoly(atom.module.free_block()).substitute_power(v.degree)
    return Poly(_local_data(atom).at(v)).substitute_power(v.degree)


# ---------------------------------------------------------------------------
# integer power series


def _mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j in range(min(len(b), n + 1 - i)):
                out[i + j] += x * b[j]
    return out


def _inv(a, n):
    out = [1] + [0] * n
    for k in range(1, n + 1):
        s = 0
        for i in range(1, min(k, len(a) - 1) + 1):
            s += a[i] * out[k - i]
        out[k] = -s
    return out


def _pow(a, k, n):
    if k < 0:
        a, k = _inv(a, n), -k
    result = [1] + [0] * n
    base = list(a[: n + 1]) + [0] * max(0, n + 1 - len(a))
    while k:
        if k & 1:
            result = _mul(result, base, n)
        k >>= 1
        if k:
            base = _mul(base, base, n)
    return result


def _spread(a, d, n):
    """a(t^d) truncated at degree n."""
    out = [0] * (n + 1)
    for i, c in enumerate(a):
        if i * d > n:
            break
        out[i * d] = c
    return out


def _degree_counts(atom, d):
    """Counter of local factors (in u = t^d) over the places of degree d."""
    if isinstance(atom, Skyscraper):
        if atom.place.degree != d:
            return Counter()
        f = tuple(reversed_charpoly(atom.module.free_block()).int_coeffs())
        return Counter({f: 1})
    local = _local_data(atom)
    cover = atom.cover
    if cover.is_constant:
        ident = tuple(0 for _ in cover.orders)
        frob = (d % cover.constant_degree,)
        return Counter({local.factor(ident, frob): place_count(cover.field.q, d)})
    counts = Counter()
    for (inert, frob), n in frobenius_counts(cover, d).items():
        counts[local.factor(inert, frob)] += n
    return counts


def _degree_contribution(atom, d, n):
    """prod over places of degree d of 1/factor, as a series in t to degree n."""
    m = n // d
    acc = [1] + [0] * m
    for poly, count in sorted(_degree_counts(atom, d).items()):
        acc = _mul(acc, _pow(list(poly), -count, m), m)
    return _spread(acc, d, n)


def _atom_series_int(atom, n, threads=1):
    degrees = list(range(1, n + 1))
    if threads > 1 and len(degrees) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda d: _degree_contribution(atom, d, n), degrees))
    else:
        parts = [_degree_contribution(atom, d, n) for d in degrees]
    acc = [1] + [0] * n
    for part in parts:
        acc = _mul(acc, part, n)
    return acc


_SERIES_CACHE = {}


def _atom_series(atom, n, threads=1):
    # a deeper cached series can always be truncated
    best = _SERIES_CACHE.get(atom)
    if best is not None and len(best) > n:
        return best[: n + 1]
    s = _atom_series_int(atom, n, threads)
    _SERIES_CACHE[atom] = s
    return s


def l_truncated(z, depth: int, threads=None) -> TruncatedSeries:
    """Euler product of the sheaf modulo t^(depth + 1)."""
    z = as_sheaf(z)
    threads = current_settings().threads if threads is None else threads
    acc = [1] + [0] * depth
    for mult, atom in z.terms:
        acc = _mul(acc, _pow(_atom_series(atom, depth, threads), mult, depth), depth)
    return TruncatedSeries(acc, depth)


# ---------------------------------------------------------------------------
# conductors


@dataclass(frozen=True)
class ConductorData:
    exponents: tuple  # (place, exponent) pairs at ramified places
    degree: int

    def to_json(self):
        return {
            "exponents": [{"place": v.to_json(), "degree": v.degree, "f": f} for v, f in self.exponents],
            "degree": self.degree,
        }


def artin_conductor(cover: AbelianCover, lattice: GaloisLattice) -> ConductorData:
    """Tame Artin conductor: f_v = rank L - rank L^(I_v), weighted by deg v."""
    out = []
    for v in cover.ramified_places:
        d = decomposition(cover, v)
        f = lattice.rank - len(invariants(lattice, [d.inertia_generator]))
        if f:
            out.append((v, f))
    return ConductorData(tuple(out), sum(v.degree * f for v, f in out))


def structural_denominator(atom: Pushforward) -> Poly:
    """det(1 - F t | L^H) * det(1 - F q t | L^H), H the geometric part of the group."""
    cover = atom.cover
    lat = dual_lattice(atom.lattice)
    r = len(cover.orders)
    geo = [tuple(int(i == j) for j in range(r)) for i in range(1, r)]
    fixed = invariants(lat, geo)
    if not fixed:
        return Poly.one()
    const = tuple(int(j == 0) for j in range(r))
    p0 = reversed_charpoly(restricted_action(lat, fixed, const))
    return p0 * p0.scale(cover.field.q)


# ---------------------------------------------------------------------------
# exact L-functions


@dataclass(frozen=True)
class Reconstruction:
    value: RationalFunctionQ
    depth: int
    check_depth: int


def _skyscraper_l(atom: Skyscraper) -> RationalFunctionQ:
    den = reversed_charpoly(atom.module.free_block()).substitute_power(atom.place.degree)
    return RationalFunctionQ(Poly.one(), den)


# Euler products enumerate every place up to the check depth; beyond this
# many polynomials of top degree the sieve no longer fits in memory
PLACE_BUDGET = 20_000_000


def reconstruction_depths(atom: Pushforward, max_depth=None):
    """(numerator degree, denominator degree, depth, check depth) for an atom."""
    cap = current_settings().max_depth if max_depth is None else max_depth
    dden = structural_denominator(atom).degree
    cond = artin_conductor(atom.cover, atom.lattice).degree
    dnum = dden + cond - 2 * atom.lattice.rank
    if dnum < 0:
        raise AssertionError("negative numerator degree")
    depth = dnum + dden
    return dnum, dden, depth, min(depth + atom.lattice.rank + 2, cap)


@lru_cache(maxsize=None)
def _pushforward_l(atom: Pushforward, max_depth: int) -> Reconstruction:
    den = structural_denominator(atom)
    dnum, dden, depth, check = reconstruction_depths(atom, max_depth)
    if depth > max_depth or check <= depth:
        raise ReconstructionUnstable(
            f"degree bounds ({dnum}, {dden}) need depth beyond the cap {max_depth}"
        )
    if not atom.cover.is_constant and atom.field.q**check > PLACE_BUDGET:
        raise ReconstructionUnstable(f"certification needs places of degree {check} over F_{atom.field.q}")
    series = TruncatedSeries(_atom_series(atom, check, current_settings().threads), check)
    try:
        first = pade_reconstruct(series.truncate(depth), dnum, dden)
        second = pade_reconstruct(series, dnum, dden)
    except NoSolution as exc:
        raise ReconstructionUnstable(f"no rational function fits the Euler product: {exc}") from None
    if first != second or not second.is_integral() or second.den != den:
        raise ReconstructionUnstable(f"candidates disagree: {first} versus {second}")
    return Reconstruction(second, depth, check)


def atom_l_function(atom, max_depth=None) -> RationalFunctionQ:
    if isinstance(atom, Skyscraper):
        return _skyscraper_l(atom)
    cap = current_settings().max_depth if max_depth is None else max_depth
    return _pushforward_l(atom, cap).value


def l_function(z, max_depth=None) -> RationalFunctionQ:
    """Exact L(Z, t) as a reduced rational function with value 1 at t = 0."""
    z = as_sheaf(z)
    out = RationalFunctionQ.one()
    for mult, atom in z.terms:
        out = out * atom_l_function(atom, max_depth) ** mult
    return out


def zeta_of_cover(cover: AbelianCover, max_depth=None) -> RationalFunctionQ:
    """Zeta function of the cover curve, as L of the pushforward of Z[G]."""
    z = atom_l_function(Pushforward(cover, induced_lattice(cover.orders)), max_depth)
    g = genus_of_cover(cover)
    n0 = cover.constant_degree
    if z.num.degree != 2 * g * n0:
        raise ReconstructionUnstable("zeta numerator degree disagrees with the genus")
    if not satisfies_weil_bound(z.num, cover.field.q, n0):
        raise ReconstructionUnstable("zeta numerator violates the Weil bound")
    return z


# ---------------------------------------------------------------------------
# Weil bound


def weil_polynomial_trace_form(w: Poly, q: int):
    """h with z^(2g) w(1/z) = z^g h(z + q/z), or None if w is not q-reciprocal."""
    if w.degree % 2:
        return None
    g = w.degree // 2
    rev = [w[2 * g - i] for i in range(2 * g + 1)]  # z^(2g) w(1/z), low first
    for k in range(g + 1):
        if rev[g + k] * q**k != rev[g - k]:
            return None
    # express sum_{k=-g}^{g} c_k z^k in powers of x = z + q/z
    c = {k: Fraction(rev[g + k]) for k in range(-g, g + 1)}
    h = [Fraction(0)] * (g + 1)
    for k in range(g, -1, -1):
        a = c.get(k, Fraction(0))
        h[k] = a
        if not a:
            continue
        # subtract a * (z + q/z)^k
        for j in range(k + 1):
            c[k - 2 * j] = c.get(k - 2 * j, Fraction(0)) - a * comb(k, j) * q**j
    return Poly(h)


def satisfies_weil_bound(numerator: Poly, q: int, n0: int = 1) -> bool:
    """Exact test that numerator(t) = w(t^n0) with all inverse roots of w of size sqrt(q^n0)."""
    if numerator.degree == 0:
        return True
    if any(numerator[i] for i in range(numerator.degree + 1) if i % n0):
        return False
    w = Poly(numerator[i * n0] for i in range(numerator.degree // n0 + 1))
    qq = q**n0
    h = weil_polynomial_trace_form(w, qq)
    if h is None:
        return False
    if h.degree <= 0:
        return True
    sq = squarefree_part(h)
    if count_real_roots(sq) != sq.degree:
        return False
    # roots x satisfy x^2 <= 4 qq: write h(x) = E(x^2) + x O(x^2), then y = x^2 solves E^2 - y O^2
    even = Poly(sq[i] for i in range(0, sq.degree + 1, 2))
    odd = Poly(sq[i] for i in range(1, sq.degree + 1, 2))
    k = even * even - Poly([0, 1]) * odd * odd
    return count_real_roots(squarefree_part(k), Fraction(4 * qq), "+inf") == 0


# ---------------------------------------------------------------------------
# Lie algebra Euler characteristic and functional equation


def chi_lie(torus) -> int:
    """chi(P^1, Lie T) = rank Y - f(Y)/2 for a torus with character lattice Y."""
    f = artin_conductor(torus.cover, torus.lattice).degree
    if f % 2:
        raise OddConductor(f"conductor degree {f} is odd")
    return torus.lattice.rank - f // 2


def _reflect(p: Poly, q: int) -> Poly:
    """(q t)^deg p * p(1/(q t))."""
    d = p.degree
    return Poly(p[d - i] * q**i for i in range(d + 1))


@dataclass(frozen=True)
class FunctionalEquation:
    sign: int
    chi: int

    def to_json(self):
        return {"sign": self.sign, "chi": self.chi}


def functional_equation_sign(l_dual: RationalFunctionQ, l_lattice: RationalFunctionQ, q: int):
    """(sign, chi) with L'(1/(q t)) = sign * (q t^2)^chi * L(t), or None if no such identity."""
    p1, q1 = l_dual.num, l_dual.den
    p2, q2 = l_lattice.num, l_lattice.den
    twice = q1.degree - p1.degree
    if twice % 2 or (q2.degree - p2.degree) != twice:
        return None
    chi = twice // 2
    lhs = _reflect(p1, q) * q2 * Fraction(q) ** chi
    rhs = p2 * _reflect(q1, q)
    if lhs == rhs:
        return 1, chi
    if lhs == -rhs:
        return -1, chi
    return None


def check_functional_equation(torus) -> FunctionalEquation:
    """Verify L(Y')(1/(q t)) = (q t^2)^chi L(Y)(t) with sign +1."""
    l_dual = l_function(Pushforward(torus.cover, dual_lattice(torus.lattice)))
    l_lat = l_function(Pushforward(torus.cover, torus.lattice))
    found = functional_equation_sign(l_dual, l_lat, torus.cover.field.q)
    chi = chi_lie(torus)
    if found is None:
        raise FunctionalEquationViolated("no functional equation relates L(Y') and L(Y)")
    sign, got = found
    if sign != 1 or got != chi:
        raise FunctionalEquationViolated(f"sign {sign}, exponent {got} against chi = {chi}")
    return FunctionalEquation(sign, chi)
