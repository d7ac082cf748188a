"""Shared hypothesis strategies and brute-force oracles for the test suite."""

from math import prod

from hypothesis import assume
from hypothesis import strategies as st

from ffweil.errors import NotGeometricallyConnected
from ffweil.exact import Poly, TruncatedSeries, identity, mat_mul
from ffweil.fields import AbelianCover, get_field
from ffweil.galois import GaloisLattice, product_lattice, standard_lattice


def divisors_of(n):
    return [d for d in range(2, n + 1) if n % d == 0]


@st.composite
def kummer_covers(draw, qs=(3, 5), max_factors=2, max_group=8, n0s=(1, 2)):
    q = draw(st.sampled_from(qs))
    f = get_field(q)
    n0 = draw(st.sampled_from(n0s))
    k = draw(st.integers(0, max_factors))
    factors = []
    for _ in range(k):
        m = draw(st.sampled_from(divisors_of(q - 1)))
        lead = draw(st.integers(1, q - 1))
        low = draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=3))
        factors.append((m, list(low) + [lead]))
    assume(n0 * prod(m for m, _ in factors) <= max_group)
    try:
        return AbelianCover.build(f, n0, factors)
    except NotGeometricallyConnected:
        assume(False)


def _conjugate(lat, ops):
    n = lat.rank
    p, pinv = identity(n), identity(n)
    for i, j, c in ops:
        if n > 1 and i % n != j % n:
            e, einv = identity(n), identity(n)
            e[i % n][j % n] = c
            einv[i % n][j % n] = -c
            p, pinv = mat_mul(e, p), mat_mul(pinv, einv)
    return GaloisLattice(lat.orders, tuple(mat_mul(mat_mul(p, a), pinv) for a in lat.matrices))


@st.composite
def lattices_for(draw, orders, max_rank=4):
    kinds = ["split", "norm_one", "augmentation"] + (["induced"] if prod(orders) <= max_rank else [])
    kinds = [k for k in kinds if k == "split" or prod(orders) - 1 <= max_rank]
    picks = draw(st.lists(st.sampled_from(kinds), min_size=1, max_size=2))
    lat = standard_lattice(picks[0], orders)
    for k in picks[1:]:
        extra = standard_lattice(k, orders)
        if lat.rank + extra.rank <= max_rank:
            lat = product_lattice(lat, extra)
    ops = draw(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(-2, 2)), max_size=3))
    return _conjugate(lat, ops)


def power_sums(numerator: Poly, n):
    """s_k = sum of alpha^k over reciprocal roots alpha of a polynomial with constant term 1."""
    order = n
    p = TruncatedSeries(numerator.coeffs, order)
    dp = TruncatedSeries([0] + [k * numerator[k] for k in range(1, numerator.degree + 1)], order)
    ratio = dp * p.inverse()
    return [-ratio.coeffs[k] for k in range(1, n + 1)]


def count_hyperelliptic_points(p, coeffs, n):
    """Points of the smooth model of y^2 = f(t) over F_{p^n}, f squarefree with coefficients in F_p."""
    f = get_field(p**n)
    squares = {f.mul[a][a] for a in range(1, f.q)}
    affine = 0
    for x in range(f.q):
        v = f.p_eval(list(coeffs), x)
        affine += 1 if v == 0 else (2 if v in squares else 0)
    deg = len(coeffs) - 1
    if deg % 2:
        return affine + 1
    return affine + (2 if coeffs[-1] % p in squares else 0)


def cheap(atom, limit=300_000):
    """True when certifying the atom's L-function enumerates at most ``limit`` top-degree polynomials."""
    from ffweil.lfunctions import reconstruction_depths

    return atom.cover.is_constant or atom.field.q ** reconstruction_depths(atom)[3] <= limit


FINITE_ORDER_BLOCKS = [
    [[1]],
    [[-1]],
    [[0, 1], [1, 0]],
    [[0, -1], [1, 0]],
    [[0, -1], [1, -1]],
    [[1, -1], [1, 0]],
    [[-1, 0], [0, 1]],
    [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
    [[0, 0, -1], [1, 0, 0], [0, 1, 0]],
]


@st.composite
def frob_modules(draw, max_rank=3):
    """Random finitely generated modules with an automorphism whose free part has finite order."""
    from ffweil.galois import FrobModule

    blocks = draw(st.lists(st.sampled_from(FINITE_ORDER_BLOCKS), max_size=2))
    free = []
    for b in blocks:
        n = len(free)
        if n + len(b) > max_rank:
            break
        free = [r + [0] * len(b) for r in free] + [[0] * n + list(r) for r in b]
    ops = draw(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-1, 1)), max_size=2))
    if free:
        free = [list(r) for r in _conjugate(GaloisLattice((12,), (free,)), ops).matrices[0]]
    tors = draw(st.lists(st.sampled_from([2, 3, 4, 5, 6]), max_size=max(0, min(2, max_rank - len(free)))))
    nf, nt = len(free), len(tors)
    mat = [[0] * (nf + nt) for _ in range(nf + nt)]
    for i in range(nf):
        for j in range(nf):
            mat[i][j] = free[i][j]
    for i, a in enumerate(tors):
        units = [u for u in range(1, a) if __import__("math").gcd(u, a) == 1]
        mat[nf + i][nf + i] = draw(st.sampled_from(units))
        for j in range(nf):
            mat[nf + i][j] = draw(st.integers(0, a - 1))
    return FrobModule(tuple([0] * nf + tors), mat)


@st.composite
def motives(draw, qs=(2, 3, 5), max_k=3, max_d=3):
    """1-motives [Z^k -> G_m^d] whose entries are constants times products of linear factors."""
    from ffweil.fields import FqRat
    from ffweil.motives import OneMotive

    q = draw(st.sampled_from(qs))
    f = get_field(q)
    k = draw(st.integers(0, max_k))
    d = draw(st.integers(1 if k == 0 else 1, max_d))
    rows = []
    for _ in range(k):
        row = []
        for _ in range(d):
            c = draw(st.integers(1, q - 1))
            val = FqRat(f, (c,))
            for a in draw(st.lists(st.integers(0, q - 1), max_size=2, unique=True)):
                e = draw(st.sampled_from([-2, -1, 1, 2]))
                val = val * FqRat(f, ((-a) % q if f.e == 1 else f.neg[a], 1)) ** e
            row.append(val)
        rows.append(tuple(row))
    return OneMotive(f, k, d, tuple(rows))
