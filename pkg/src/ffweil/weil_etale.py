"""Weil-etale Euler characteristics and ranks of constructible sheaves on P^1."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .exact import (
    Base,
    determinant,
    identity,
    kernel_basis,
    lattice_basis,
    lattice_intersection,
    lattice_quotient,
    lattice_sum,
    laurent_lead,
    mat_sub,
    transpose,
)
from .galois import FrobModule, GaloisLattice, invariants
from .lfunctions import Pushforward, Skyscraper, as_sheaf, atom_l_function, l_function
from .reports import VerificationReport

FROB_COMPLEX = "FrobComplex"
LEADING_COEFFICIENT = "LeadingCoefficient"
MULTIPLICATIVITY = "Multiplicativity"


@dataclass(frozen=True)
class ChiReport:
    chi_w: Fraction
    r: int
    sign_exponent: int
    route: str
    terms: tuple = field(default=(), compare=False)

    def to_json(self):
        from .exact import format_fraction

        return {
            "chi_w": format_fraction(self.chi_w),
            "r": self.r,
            "sign_exponent": self.sign_exponent,
            "route": self.route,
            "terms": [dict(t) for t in self.terms],
        }


def _e_complex_orders(invariant_list, frob):
    """(#ker, #coker) of M^F -> M_F for M = Z^n / diag(invariants)."""
    n = len(invariant_list)
    if n == 0:
        return 1, 1
    rel = [[invariant_list[i] if j == i else 0 for j in range(n)] for i in range(n)]
    rel = [r for r in rel if any(r)]
    fm1 = mat_sub(frob, identity(n))
    # preimage of M^F: x with (F - 1) x in the relation lattice
    cols = [list(c) for c in transpose(fm1)] + [[-x for x in r] for r in rel]
    kern = kernel_basis(transpose(cols), len(cols))
    fixed = lattice_basis([k[:n] for k in kern], n)
    image = lattice_basis(transpose(fm1) + rel, n)
    rel_basis = lattice_basis(rel, n)
    free_k, tors_k = lattice_quotient(lattice_intersection(fixed, image, n), rel_basis)
    total = lattice_sum(fixed, image, n)
    unit = [[int(i == j) for j in range(n)] for i in range(n)]
    free_c, tors_c = lattice_quotient(unit, total)
    if free_k or free_c:
        raise ValueError("e-complex has infinite cohomology; Frobenius must have finite order")
    return prod(tors_k), prod(tors_c)


def chi_w_frobmodule(module: FrobModule) -> Fraction:
    """Euler characteristic #ker(e) / #coker(e) of e: M^F -> M_F."""
    k, c = _e_complex_orders(module.invariants, module.frobenius)
    return Fraction(k, c)


def frob_fixed_rank(module: FrobModule) -> int:
    block = module.free_block()
    n = len(block)
    return len(kernel_basis(mat_sub(block, identity(n)), n)) if n else 0


def chi_w_skyscraper(place, module: FrobModule) -> ChiReport:
    r = frob_fixed_rank(module)
    chi = chi_w_frobmodule(module) / Fraction(place.degree) ** r
    return ChiReport(chi, r, 0, FROB_COMPLEX)


def _generic_rank(atom):
    if isinstance(atom, Skyscraper):
        return 0
    return len(invariants(atom.lattice))


def _atom_r(atom):
    if isinstance(atom, Skyscraper):
        return frob_fixed_rank(atom.module)
    return len(invariants(atom.lattice))


def r_of(z) -> int:
    z = as_sheaf(z)
    return sum(m * _atom_r(a) for m, a in z.terms)


def chi_w_constant_pushforward(atom: Pushforward) -> Fraction:
    """Cohomological route for a lattice over a pure constant-field cover.

    H^0 and H^1 of the geometric curve contribute the e-complex of the lattice
    with its Frobenius; H^3 contributes a finite group of order |det(qF - 1)|.
    """
    if not atom.cover.is_constant:
        raise ValueError("only pure constant-field covers have this route")
    lat = atom.lattice
    n = lat.rank
    frob = lat.matrices[0]
    module = FrobModule.free(frob)
    q = atom.cover.field.q
    h3 = abs(determinant([[q * frob[i][j] - (i == j) for j in range(n)] for i in range(n)]))
    return chi_w_frobmodule(module) / h3


def _atom_chi(atom, prefer_independent=True):
    if isinstance(atom, Skyscraper):
        rep = chi_w_skyscraper(atom.place, atom.module)
        return rep.chi_w, FROB_COMPLEX
    if prefer_independent and atom.cover.is_constant:
        return chi_w_constant_pushforward(atom), FROB_COMPLEX
    lead = laurent_lead(atom_l_function(atom), Base.ONE_MINUS_T)
    sign = (-1) ** _generic_rank(atom)
    return sign * lead.value, LEADING_COEFFICIENT


def chi_w_virtual(z, prefer_independent=True) -> ChiReport:
    """chi_W, r and the sign exponent of a virtual sheaf, assembled term by term."""
    z = as_sheaf(z)
    chi, r, sign = Fraction(1), 0, 0
    terms, routes = [], set()
    for mult, atom in z.terms:
        c, route = _atom_chi(atom, prefer_independent)
        ar, gr = _atom_r(atom), _generic_rank(atom)
        chi *= c**mult
        r += mult * ar
        sign += mult * gr
        routes.add(route)
        terms.append(
            {
                "kind": "skyscraper" if isinstance(atom, Skyscraper) else "pushforward",
                "mult": mult,
                "chi_w": f"{c.numerator}/{c.denominator}",
                "r": ar,
                "route": route,
                "label": "independent" if route == FROB_COMPLEX else "definitional",
            }
        )
    if len(z.terms) > 1:
        route = MULTIPLICATIVITY
    else:
        route = routes.pop() if routes else FROB_COMPLEX
    return ChiReport(chi, r, sign, route, tuple(terms))


def verify_theorem_constructible(z) -> VerificationReport:
    """Check pole order and leading value of L(Z) at t = 1 against r and chi_W."""
    z = as_sheaf(z)
    rep = chi_w_virtual(z)
    lead = laurent_lead(l_function(z), Base.ONE_MINUS_T)
    report = VerificationReport("constructible")
    report.add("pole order", lead.order, -rep.r)
    report.add("leading value", lead.value, (-1) ** rep.sign_exponent * rep.chi_w)
    report.labels["terms"] = [t["label"] for t in rep.terms]
    report.values.update(chi_w=rep.chi_w, r=rep.r, sign_exponent=rep.sign_exponent, lead=lead)
    return report.raise_if_failed()
