"""1-motives [X -> T] with X a constant lattice and T a split torus over F_q(t)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .exact import Base, kernel_basis, laurent_lead, smith_normal_form
from .fields import AbelianCover, Fq, FqRat, Place, parse_fq_rational
from .galois import FrobModule, split_lattice
from .lfunctions import Pushforward, Skyscraper, VirtualSheaf, l_function
from .reports import VerificationReport
from .tori import class_side, l_torus, split_torus
from .weil_etale import chi_w_virtual


@dataclass(frozen=True)
class OneMotive:
    """X = Z^k mapped into T = G_m^d; ``entries[i][j]`` is coordinate j of the image of x_i."""

    field: Fq
    k: int
    d: int
    entries: tuple

    def __post_init__(self):
        ents = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", ents)
        if self.k < 0 or self.d < 0:
            raise ValidationError("ranks must be non-negative")
        if len(ents) != self.k or any(len(r) != self.d for r in ents):
            raise ValidationError("map must be a k x d matrix")
        for row in ents:
            for f in row:
                if f.is_zero():
                    raise ValidationError("map entries must be nonzero")

    @classmethod
    def parse(cls, field: Fq, rows):
        """Build from nested lists of parseable rational functions."""
        ents = tuple(tuple(parse_fq_rational(field, f) for f in row) for row in rows)
        k = len(ents)
        d = len(ents[0]) if ents else 0
        return cls(field, k, d, ents)


@dataclass(frozen=True)
class LocalDelta:
    place: Place
    valuation: tuple  # d x k
    kernel: tuple  # basis of the kernel in Z^k
    image_rank: int

    def to_json(self):
        return {
            "place": self.place.to_json(),
            "degree": self.place.degree,
            "valuation": [list(r) for r in self.valuation],
            "kernel": [list(v) for v in self.kernel],
            "image_rank": self.image_rank,
        }


@dataclass(frozen=True)
class XDeltaData:
    places: tuple

    def to_json(self):
        return {"support": [p.to_json() for p in self.places]}


def x_delta(motive: OneMotive) -> XDeltaData:
    """Valuation matrices, kernels and image ranks at the places where the map degenerates."""
    q = motive.field.q
    support = set()
    for row in motive.entries:
        for f in row:
            support.update(f.support())
    out = []
    for v in sorted(support, key=lambda p: p.sort_key(q)):
        val = tuple(tuple(motive.entries[i][j].valuation(v) for i in range(motive.k)) for j in range(motive.d))
        if not any(any(r) for r in val):
            continue
        kern = tuple(tuple(x) for x in kernel_basis([list(r) for r in val], motive.k))
        rank = smith_normal_form([list(r) for r in val]).rank
        out.append(LocalDelta(v, val, kern, rank))
    return XDeltaData(tuple(out))


def r_m(motive: OneMotive) -> int:
    return -motive.k - motive.d + sum(p.image_rank for p in x_delta(motive).places)


def x_delta_sheaf(motive: OneMotive) -> VirtualSheaf:
    """Constant Z^k minus the skyscrapers Z^(rank C_v) with trivial Frobenius."""
    field = motive.field
    terms = []
    if motive.k:
        terms.append((1, Pushforward(AbelianCover(field), split_lattice((1,), motive.k))))
    for p in x_delta(motive).places:
        terms.append((-1, Skyscraper(p.place, FrobModule.trivial(p.image_rank), field)))
    return VirtualSheaf(field, tuple(terms))


def l_motive(motive: OneMotive):
    """L(X^Delta)(q t) * L(T)(t)."""
    q = motive.field.q
    lx = l_function(x_delta_sheaf(motive)).scale(q)
    if motive.d == 0:
        return lx
    return lx * l_torus(split_torus(motive.field, motive.d))


def chi_w_motive(motive: OneMotive) -> Fraction:
    """chi_W(M^Delta) = chi_W(X^Delta)^(-1) * chi_W(T)."""
    chi_x = chi_w_virtual(x_delta_sheaf(motive)).chi_w
    chi_t = 1 / class_side(split_torus(motive.field, motive.d)) if motive.d else Fraction(1)
    return chi_t / chi_x


def verify_theorem_main(motive: OneMotive) -> VerificationReport:
    """Order and leading value of L(M) at t = 1/q against r_M and chi_W(M^Delta)."""
    q = motive.field.q
    lead = laurent_lead(l_motive(motive), Base.ONE_MINUS_QT, q)
    chi = chi_w_motive(motive)
    magnitude = Fraction(q) ** motive.d / chi
    report = VerificationReport("one-motive")
    report.add("zero order", lead.order, r_m(motive))
    report.add("leading value", lead.value, (-1) ** motive.k * magnitude)
    report.labels["sign_convention"] = "rank X(K)"
    report.values.update(
        chi_w=chi,
        lie_euler_characteristic=motive.d,
        sign_from_torus_rank_matches=lead.value == (-1) ** motive.d * magnitude,
    )
    return report.raise_if_failed()
