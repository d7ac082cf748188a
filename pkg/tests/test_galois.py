from itertools import product
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffweil.errors import ValidationError
from ffweil.exact import identity, kernel_basis, mat_mul, mat_sub, mat_vec
from ffweil.fields import AbelianCover, decomposition, get_field
from ffweil.galois import (
    FrobModule,
    GaloisLattice,
    coinvariants,
    dual_lattice,
    group_h1,
    induced_lattice,
    invariants,
    norm_one_lattice,
    product_lattice,
    sha_kernel,
    split_lattice,
    standard_lattice,
    tate_cohomology_cyclic,
)

SIGN = GaloisLattice((2,), ([[-1]],))


def order_of(group):
    return group.order


def test_invariants_examples():
    assert invariants(induced_lattice((2,))) in ([[1, 1]], [[-1, -1]])
    assert invariants(SIGN) == []
    assert invariants(norm_one_lattice((3,))) == []


def test_coinvariants_examples():
    assert coinvariants(SIGN).torsion == (2,) and coinvariants(SIGN).free_rank == 0
    assert coinvariants(split_lattice((2,))).free_rank == 1
    g = coinvariants(induced_lattice((2,)))
    assert (g.free_rank, g.torsion) == (1, ())


def test_h1_examples():
    assert group_h1(split_lattice((2,))).order == 1
    assert group_h1(SIGN).torsion == (2,)
    for n in (2, 3, 4):
        assert group_h1(norm_one_lattice((n,))).torsion == (n,)


def test_tate_examples():
    t = tate_cohomology_cyclic(split_lattice((2,)), (1,))
    assert t.h0.torsion == (2,) and t.h_minus1.order == 1
    t = tate_cohomology_cyclic(SIGN, (1,))
    assert t.h0.order == 1 and t.h_minus1.torsion == (2,)
    t = tate_cohomology_cyclic(induced_lattice((3,)), (1,))
    assert t.h0.order == 1 and t.h_minus1.order == 1


def test_standard_lattices():
    lat = norm_one_lattice((2,))
    assert lat.rank == 1 and lat.matrices[0] == ((-1,),)
    ind = induced_lattice((2, 2))
    assert dual_lattice(ind) == ind
    with pytest.raises(ValidationError):
        standard_lattice("bogus", (2,))
    with pytest.raises(ValidationError):
        GaloisLattice((2,), ([[1, 1], [0, 1]],))


def test_sha_examples():
    f5 = get_field(5)
    cyclic = AbelianCover.build(f5, 1, [(2, "t")])
    assert sha_kernel(cyclic, norm_one_lattice(cyclic.orders)).order == 1
    bi = AbelianCover.build(f5, 1, [(2, "t"), (2, "t-1")])
    assert sha_kernel(bi, induced_lattice(bi.orders)).order == 1
    # every decomposition group of this cover is proper; the locally trivial class lives on the augmentation side
    assert sha_kernel(bi, norm_one_lattice(bi.orders)).order == 1
    assert sha_kernel(bi, standard_lattice("augmentation", bi.orders)).torsion == (2,)


# ---------------------------------------------------------------------------
# random lattices and a brute-force oracle

ORDERS = [(2,), (3,), (4,), (1, 2), (2, 2), (1, 3)]


def unimodular(n, ops):
    p = identity(n)
    for i, j, c in ops:
        if n > 1 and i % n != j % n:
            e = identity(n)
            e[i % n][j % n] = c
            p = mat_mul(e, p)
    return p


def inverse_unimodular(n, ops):
    p = identity(n)
    for i, j, c in ops:
        if n > 1 and i % n != j % n:
            e = identity(n)
            e[i % n][j % n] = -c
            p = mat_mul(p, e)
    return p


@st.composite
def lattices(draw, max_rank=4):
    orders = draw(st.sampled_from(ORDERS))
    kinds = ["split", "norm_one", "augmentation"] + (["induced"] if prod(orders) <= 4 else [])
    parts = [standard_lattice(k, orders) for k in draw(st.lists(st.sampled_from(kinds), min_size=1, max_size=2))]
    if 2 in orders and draw(st.booleans()):
        parts.append(GaloisLattice(orders, tuple([[-1]] if n == 2 else [[1]] for n in orders)))
    lat = parts[0]
    for p in parts[1:]:
        if lat.rank + p.rank <= max_rank:
            lat = product_lattice(lat, p)
    ops = draw(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(-2, 2)), max_size=4))
    n = lat.rank
    p, pinv = unimodular(n, ops), inverse_unimodular(n, ops)
    assert mat_mul(p, pinv) == identity(n)
    return GaloisLattice(orders, tuple(mat_mul(mat_mul(p, a), pinv) for a in lat.matrices))


def fixed_mod(lat, gens, n):
    """Vectors of (Z/n)^rank fixed by the given group elements."""
    acts = [lat.action(g) for g in gens]
    return [
        x
        for x in product(range(n), repeat=lat.rank)
        if all(tuple(v % n for v in mat_vec(a, list(x))) == x for a in acts)
    ]


def residues(basis, n, rank):
    out = set()
    for c in product(range(n), repeat=len(basis)):
        out.add(tuple(sum(ci * b[i] for ci, b in zip(c, basis)) % n for i in range(rank)))
    return out if basis else {tuple([0] * rank)}


def gens_of(lat):
    return [tuple(int(i == j) for j in range(len(lat.orders))) for i in range(len(lat.orders))]


def fixed_basis(lat, gens):
    n = lat.rank
    blocks = []
    for g in gens:
        blocks.extend(mat_sub(lat.action(g), identity(n)))
    return kernel_basis(blocks, n)


@settings(max_examples=80, deadline=None)
@given(lattices())
def test_h1_order_brute_force(lat):
    # 0 -> L -n-> L -> L/nL -> 0 gives |H^1| = |(L/nL)^G| / n^rank(L^G)
    n = prod(lat.orders)
    brute = len(fixed_mod(lat, gens_of(lat), n)) // n ** len(invariants(lat))
    assert group_h1(lat).order == brute


@settings(max_examples=80, deadline=None)
@given(lattices())
def test_rank_invariants_equals_rank_coinvariants(lat):
    assert len(invariants(lat)) == coinvariants(lat).free_rank


@pytest.mark.parametrize("orders", [(2,), (3,), (4,), (2, 2), (1, 2), (2, 3)])
def test_induced_h1_vanishes(orders):
    assert group_h1(induced_lattice(orders)).order == 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_norm_one_h1_has_order_n(n):
    assert group_h1(norm_one_lattice((n,))).order == n


@settings(max_examples=80, deadline=None)
@given(lattices().filter(lambda l: len([o for o in l.orders if o > 1]) == 1))
def test_cyclic_h1_equals_tate_minus_one(lat):
    gen = tuple(int(o > 1) for o in lat.orders)
    assert group_h1(lat).order == tate_cohomology_cyclic(lat, gen).h_minus1.order
    assert group_h1(lat).torsion == tate_cohomology_cyclic(lat, gen).h_minus1.torsion


COVERS = [
    (5, [(2, "t"), (2, "t-1")]),
    (5, [(2, "t")]),
    (5, [(4, "t")]),
    (3, [(2, "t^3-t")]),
    (7, [(3, "t"), (2, "t+1")]),
]


@pytest.mark.parametrize("q, kummer", COVERS)
@pytest.mark.parametrize("kind", ["norm_one", "augmentation", "induced", "split"])
def test_sha_brute_force(q, kummer, kind):
    cover = AbelianCover.build(get_field(q), 1, kummer)
    lat = standard_lattice(kind, cover.orders)
    if lat.rank > 6:
        pytest.skip("brute force too large")
    n = cover.group_order
    grp = cover.group()
    subgroups = [[g] for g in grp.elements()]
    for v in cover.ramified_places:
        d = decomposition(cover, v)
        subgroups.append([d.inertia_generator, d.frobenius])
    glob = fixed_mod(lat, gens_of(lat), n)
    local = [residues(fixed_basis(lat, gens), n, lat.rank) for gens in subgroups]
    kept = [x for x in glob if all(x in s for s in local)]
    image = residues(invariants(lat), n, lat.rank)
    assert sha_kernel(cover, lat).order == len(kept) // len(image)


def test_frob_module_validation():
    FrobModule((2, 0), [[1, 0], [0, -1]])
    with pytest.raises(ValidationError):
        FrobModule((0,), [[2]])
    with pytest.raises(ValidationError):
        FrobModule((2, 0), [[1, 0], [1, 1]])
    with pytest.raises(ValidationError):
        FrobModule((0, 0), [[1, 0], [1, 1]])
    with pytest.raises(ValidationError):
        FrobModule((0, 0), [[1, 1], [1, 2]])
