from fractions import Fraction

import pytest
from helpers import cheap, kummer_covers, lattices_for
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ffweil.errors import UnsupportedFamily, VerificationFailed
from ffweil.exact import Base, Poly, RationalFunctionQ, laurent_lead
from ffweil.fields import AbelianCover, get_field
from ffweil.lfunctions import Pushforward, check_functional_equation
from ffweil.galois import dual_lattice
from ffweil.tori import (
    ClassData,
    chi_w_torus,
    class_data,
    custom_torus,
    h1_ky,
    induced_torus,
    l_torus,
    norm_one_torus,
    product_torus,
    rho_t,
    sha_of_torus,
    split_torus,
    tamagawa_modern,
    tamagawa_ono,
    verify_ono,
    verify_torus_theorem,
)

F3 = get_field(3)


def const(q, n):
    return AbelianCover(get_field(q), n)


def test_l_torus_examples():
    assert l_torus(split_torus(F3)) == RationalFunctionQ([1], [1, -4, 3])
    for n in (2, 3):
        z = RationalFunctionQ(Poly([1, -1]) * Poly([1, -3]), (Poly([1, -1]) * Poly([1, -(3**n)])).substitute_power(n))
        assert l_torus(norm_one_torus(const(3, n))) == z
    assert l_torus(norm_one_torus(AbelianCover.build(F3, 1, [(2, "t")]))) == RationalFunctionQ.one()


def test_rho_examples():
    assert rho_t(split_torus(F3)) == Fraction(3, 2)
    assert rho_t(norm_one_torus(const(3, 2))) == Fraction(3, 8)
    assert rho_t(norm_one_torus(AbelianCover.build(F3, 1, [(2, "t")]))) == 1


@pytest.mark.parametrize("q", [2, 3, 5])
def test_chi_w_torus_examples(q):
    assert chi_w_torus(split_torus(get_field(q))).chi_torus == q - 1
    assert chi_w_torus(split_torus(get_field(q), 3)).chi_torus == (q - 1) ** 3
    for n in (2, 3, 4):
        c = chi_w_torus(norm_one_torus(const(q, n)))
        assert c.chi_torus == Fraction(n * (q**n - 1), q - 1)
        assert c.consistent


def test_class_data_examples():
    assert class_data(split_torus(F3, 2)).to_json()["units"] == 4
    cd = class_data(induced_torus(const(2, 3)))
    assert (cd.cl_tor, cd.disc, cd.units) == (1, 3, 7)
    cd = class_data(norm_one_torus(const(3, 2)))
    assert (cd.cl_tor, cd.disc, cd.units) == (1, 1, 4)
    with pytest.raises(UnsupportedFamily):
        class_data(norm_one_torus(AbelianCover.build(F3, 1, [(2, "t")])))


def test_h1_examples():
    assert h1_ky(split_torus(F3)).order == 1
    assert h1_ky(induced_torus(const(3, 3))).order == 1
    for n in (2, 3, 4):
        assert h1_ky(norm_one_torus(const(3, n))).torsion == (n,)


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_split_theorem(q, d):
    t = split_torus(get_field(q), d)
    rep = verify_torus_theorem(t)
    assert rep.passed
    assert rho_t(t) == Fraction(q, q - 1) ** d


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_norm_one_theorem_and_ono(q, n):
    t = norm_one_torus(const(q, n))
    rep = verify_torus_theorem(t)
    assert rep.labels["sha_route"] == "lattice_kernel"
    assert rho_t(t) == Fraction((q - 1) * q ** (n - 1), n * (q**n - 1))
    assert tamagawa_ono(t) == tamagawa_modern(t) == n
    assert verify_ono(t).passed


@pytest.mark.parametrize("q", [2, 3, 5])
def test_split_and_induced_have_tau_one(q):
    f = get_field(q)
    assert tamagawa_ono(split_torus(f)) == tamagawa_modern(split_torus(f)) == 1
    for n in (2, 3):
        t = induced_torus(const(q, n))
        assert tamagawa_ono(t) == tamagawa_modern(t) == 1


def test_biquadratic_sha():
    cover = AbelianCover.build(get_field(5), 1, [(2, "t"), (2, "t-1")])
    t = norm_one_torus(cover)
    assert h1_ky(t).torsion == (2, 2)
    assert sha_of_torus(t).torsion == (2,)
    assert tamagawa_ono(t) == 2
    with pytest.raises(UnsupportedFamily):
        tamagawa_modern(t)


def test_kummer_induced_class_data():
    # Pic^0 of the genus-one curve y^2 = t^3 - t over F_3 has 4 points
    t = induced_torus(AbelianCover.build(F3, 1, [(2, "t^3-t")]))
    assert class_data(t).cl_tor == 4
    assert verify_torus_theorem(t).passed
    assert tamagawa_ono(t) == tamagawa_modern(t) == 1


def test_supplied_class_data_reports_mismatch():
    kummer = AbelianCover.build(F3, 1, [(2, "t")])
    lat = norm_one_torus(kummer).lattice
    wrong = custom_torus(kummer, lat, ClassData(1, 1, 1))
    with pytest.raises(VerificationFailed) as info:
        verify_torus_theorem(wrong)
    assert info.value.lhs != info.value.rhs


@pytest.mark.parametrize("q", [3, 5])
def test_products_multiply(q):
    a = norm_one_torus(const(q, 2))
    b = split_torus(get_field(q), 1, const(q, 2))
    p = product_torus(a, b)
    assert tamagawa_ono(p) == tamagawa_ono(a) * tamagawa_ono(b)
    assert tamagawa_modern(p) == tamagawa_modern(a) * tamagawa_modern(b)
    assert rho_t(p) == rho_t(a) * rho_t(b)
    assert verify_torus_theorem(p).passed


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize(
    "make",
    [
        lambda f: split_torus(f, 2),
        lambda f: induced_torus(AbelianCover(f, 2)),
        lambda f: norm_one_torus(AbelianCover(f, 3)),
        lambda f: norm_one_torus(AbelianCover(f, 4)),
        lambda f: norm_one_torus(AbelianCover.build(f, 1, [(2, "t")])),
        lambda f: norm_one_torus(AbelianCover.build(f, 1, [(2, "t^3-t")])),
    ],
)
def test_functional_equation_sign(q, make):
    t = make(get_field(q))
    fe = check_functional_equation(t)
    assert fe.sign == 1


@st.composite
def tori(draw):
    cover = draw(kummer_covers(max_group=4))
    lat = draw(lattices_for(cover.orders, max_rank=3))
    assume(cheap(Pushforward(cover, lat)) and cheap(Pushforward(cover, dual_lattice(lat))))
    return custom_torus(cover, lat)


@settings(max_examples=30, deadline=None)
@given(tori())
def test_pole_order_and_duality(t):
    lead = laurent_lead(l_torus(t), Base.ONE_MINUS_QT, t.field.q)
    assert lead.order == -t.rank
    assert chi_w_torus(t).consistent
    assert check_functional_equation(t).sign == 1
