"""Algebraic tori over F_q(t): L-functions, leading terms and Tamagawa numbers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .errors import OrderMismatch, UnsupportedFamily, ValidationError
from .exact import Base, laurent_lead
from .fields import AbelianCover, Fq
from .galois import (
    GaloisLattice,
    dual_lattice,
    group_h1,
    induced_lattice,
    invariants,
    norm_one_lattice,
    product_lattice,
    sha_kernel,
    split_lattice,
)
from .lfunctions import Pushforward, chi_lie, l_function, zeta_of_cover
from .reports import VerificationReport
from .weil_etale import chi_w_virtual

SHA_ROUTE = "lattice_kernel"


@dataclass(frozen=True)
class ClassData:
    """#Cl(T)_tor, the discriminant of the height pairing and #T(S)."""

    cl_tor: int
    disc: int
    units: int
    provenance: str = "supplied"

    def __post_init__(self):
        if min(self.cl_tor, self.disc, self.units) < 1:
            raise ValidationError("class data entries must be positive integers")

    def to_json(self):
        return {"cl_tor": self.cl_tor, "disc": self.disc, "units": self.units, "provenance": self.provenance}


@dataclass(frozen=True)
class Torus:
    """A torus split by ``cover`` with character lattice ``lattice``."""

    cover: AbelianCover
    lattice: GaloisLattice
    family: str = "Custom"
    factors: tuple = ()
    supplied: ClassData | None = None
    degree: int = 0  # d for Split, unused otherwise

    def __post_init__(self):
        if tuple(self.lattice.orders) != tuple(self.cover.orders):
            raise ValidationError("character lattice does not match the cover group")

    @property
    def field(self) -> Fq:
        return self.cover.field

    @property
    def dimension(self):
        return self.lattice.rank

    @property
    def rank(self):
        """r = rank of the Galois-invariant characters."""
        return len(invariants(self.lattice))

    def describe(self):
        return f"{self.family} torus of dimension {self.dimension} over F_{self.field.q}"


def split_torus(field: Fq, d: int = 1, cover: AbelianCover | None = None) -> Torus:
    cover = AbelianCover(field) if cover is None else cover
    return Torus(cover, split_lattice(cover.orders, d), "Split", degree=d)


def induced_torus(cover: AbelianCover) -> Torus:
    return Torus(cover, induced_lattice(cover.orders), "Induced")


def norm_one_torus(cover: AbelianCover) -> Torus:
    return Torus(cover, norm_one_lattice(cover.orders), "NormOne")


def product_torus(a: Torus, b: Torus) -> Torus:
    if a.cover != b.cover:
        raise ValidationError("product factors must share a cover")
    return Torus(a.cover, product_lattice(a.lattice, b.lattice), "Product", factors=(a, b))


def custom_torus(cover: AbelianCover, lattice: GaloisLattice, class_data: ClassData | None = None) -> Torus:
    return Torus(cover, lattice, "Custom", supplied=class_data)


# ---------------------------------------------------------------------------


def l_torus(torus: Torus):
    return l_function(Pushforward(torus.cover, dual_lattice(torus.lattice)))


def rho_t(torus: Torus) -> Fraction:
    """Leading value of L(T) at t = 1/q, with the pole order certified."""
    q = torus.field.q
    lead = laurent_lead(l_torus(torus), Base.ONE_MINUS_QT, q)
    if lead.order != -torus.rank:
        raise OrderMismatch(f"pole order {-lead.order} at t = 1/q, expected {torus.rank}")
    return lead.value


@dataclass(frozen=True)
class TorusChi:
    chi_torus: Fraction
    chi_lattice: Fraction
    chi_lie: int

    @property
    def consistent(self):
        return self.chi_torus * self.chi_lattice == 1

    def to_json(self):
        return {
            "chi_w_torus": f"{self.chi_torus.numerator}/{self.chi_torus.denominator}",
            "chi_w_lattice": f"{self.chi_lattice.numerator}/{self.chi_lattice.denominator}",
            "chi_lie": self.chi_lie,
            "duality_product_is_one": self.consistent,
        }


def chi_w_torus(torus: Torus) -> TorusChi:
    """chi_W(T) = q^chi / rho_t, alongside chi_W(j_* Y); their product must be 1."""
    q = torus.field.q
    chi = chi_lie(torus)
    value = Fraction(q) ** chi / rho_t(torus)
    lat = chi_w_virtual(Pushforward(torus.cover, torus.lattice)).chi_w
    return TorusChi(value, lat, chi)


def class_data(torus: Torus) -> ClassData:
    """Closed-form class data for the supported families, or the supplied data."""
    if torus.supplied is not None:
        return torus.supplied
    q = torus.field.q
    cover = torus.cover
    fam = torus.family
    if fam == "Split":
        return ClassData(1, 1, (q - 1) ** torus.dimension, "closed form: split")
    if fam == "Induced":
        n = cover.constant_degree
        cl = zeta_of_cover(cover).num(1)
        return ClassData(int(cl), n, q**n - 1, "closed form: induced")
    if fam == "NormOne" and cover.is_constant:
        n = cover.constant_degree
        return ClassData(1, 1, (q**n - 1) // (q - 1), "closed form: constant norm-one")
    if fam == "Product":
        parts = [class_data(f) for f in torus.factors]
        return ClassData(
            prod(p.cl_tor for p in parts), prod(p.disc for p in parts), prod(p.units for p in parts), "product"
        )
    raise UnsupportedFamily(f"no closed-form class data for a {fam} torus over this cover")


def h1_ky(torus: Torus):
    return group_h1(torus.lattice)


def sha_of_torus(torus: Torus):
    """Stand-in for Sha(T): locally trivial classes in H^1(G, Y')."""
    return sha_kernel(torus.cover, dual_lattice(torus.lattice))


def class_side(torus: Torus, data: ClassData | None = None) -> Fraction:
    """chi_W(T)^(-1) from class data: cl_tor * #Sha / (units * #H^1 * disc)."""
    data = class_data(torus) if data is None else data
    return Fraction(data.cl_tor * sha_of_torus(torus).order, data.units * h1_ky(torus).order * data.disc)


def verify_torus_theorem(torus: Torus, data: ClassData | None = None) -> VerificationReport:
    q = torus.field.q
    data = class_data(torus) if data is None else data
    lead = laurent_lead(l_torus(torus), Base.ONE_MINUS_QT, q)
    chi = chi_lie(torus)
    r = torus.rank
    rhs = class_side(torus, data) * Fraction(q) ** chi
    report = VerificationReport("torus")
    report.add("pole order", lead.order, -r)
    report.add("leading value", lead.value, rhs)
    if r == 0:
        report.add("empty pairing has discriminant 1", data.disc, 1)
    report.labels.update(sha_route=SHA_ROUTE, family=torus.family, class_data=data.provenance)
    report.values.update(chi_lie=chi, rank=r, dimension=torus.dimension)
    return report.raise_if_failed()


def tamagawa_ono(torus: Torus) -> Fraction:
    return Fraction(h1_ky(torus).order, sha_of_torus(torus).order)


def tamagawa_modern(torus: Torus, data: ClassData | None = None) -> Fraction:
    q = torus.field.q
    data = class_data(torus) if data is None else data
    return Fraction(data.cl_tor) * Fraction(q) ** chi_lie(torus) / (data.units * rho_t(torus) * data.disc)


def verify_ono(torus: Torus, data: ClassData | None = None) -> VerificationReport:
    report = VerificationReport("ono")
    ono = tamagawa_ono(torus)
    modern = tamagawa_modern(torus, data)
    report.add("tamagawa number", ono, modern)
    report.labels.update(sha_route=SHA_ROUTE, family=torus.family)
    report.values.update(tau_ono=ono, tau_modern=modern)
    return report.raise_if_failed()


def ono_table(qs, ns):
    """Rows (q, n, tau_ono, tau_modern, verdict) for constant-field norm-one tori."""
    from .fields import get_field

    rows = []
    for q in qs:
        for n in ns:
            torus = norm_one_torus(AbelianCover(get_field(q), n))
            ono, modern = tamagawa_ono(torus), tamagawa_modern(torus)
            rows.append((q, n, ono, modern, "pass" if ono == modern else "fail"))
    return rows
