"""Integral representations of finite abelian groups and their cohomology.

A lattice is Z^n with one integer matrix per cyclic factor of the group
prod Z/orders[i]; group elements are tuples of exponents.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd, lcm, prod

from .errors import ValidationError
from .exact import (
    cokernel,
    determinant,
    identity,
    kernel_basis,
    lattice_basis,
    mat_mul,
    mat_pow,
    mat_sub,
    mat_vec,
    smith_normal_form,
    solve_integer,
    transpose,
    freeze,
)
from .fields import AbelianCover, CoverGroup, decomposition


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank x Z/torsion[0] x ... with torsion[i] | torsion[i+1]."""

    free_rank: int = 0
    torsion: tuple = ()
    generators: tuple = field(default=(), compare=False, repr=False)

    @property
    def is_finite(self):
        return self.free_rank == 0

    @property
    def order(self):
        if self.free_rank:
            raise ValueError("infinite group has no order")
        return prod(self.torsion)

    def __str__(self):
        parts = ([f"Z^{self.free_rank}"] if self.free_rank > 1 else ["Z"] if self.free_rank else [])
        parts += [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "0"

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


# finite groups travel in the same shape
FiniteGroupData = AbelianGroup


def group_from_cokernel(matrix, nrows):
    free, tors = cokernel(matrix, nrows)
    return AbelianGroup(free, tors)


def subgroup_invariants(vectors, moduli):
    """Invariants of the subgroup of prod Z/moduli generated by ``vectors``."""
    k = len(moduli)
    rel = [[moduli[i] if j == i else 0 for j in range(k)] for i in range(k)]
    basis = lattice_basis(list(vectors) + rel, k)
    bmat = transpose(basis)
    coords = [solve_integer(bmat, r, len(basis)) for r in rel]
    free, tors = cokernel(transpose(coords), len(basis))
    return AbelianGroup(free, tors)


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class GaloisLattice:
    """Z^rank with commuting actions of the cyclic factors of prod Z/orders."""

    orders: tuple
    matrices: tuple

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        object.__setattr__(self, "matrices", tuple(freeze(m) for m in self.matrices))
        if len(self.orders) != len(self.matrices):
            raise ValidationError("one matrix per cyclic factor is required")
        n = self.rank
        for a, order in zip(self.matrices, self.orders):
            if len(a) != n or any(len(r) != n for r in a):
                raise ValidationError("lattice matrices must be square of a common size")
            if n and abs(determinant(a)) != 1:
                raise ValidationError("lattice matrices must be invertible over Z")
            if n and mat_pow(a, order) != identity(n):
                raise ValidationError(f"matrix does not have order dividing {order}")
        for a, b in itertools.combinations(self.matrices, 2):
            if mat_mul(a, b) != mat_mul(b, a):
                raise ValidationError("lattice matrices must commute")

    @property
    def rank(self):
        return len(self.matrices[0]) if self.matrices else 0

    def group(self):
        return CoverGroup(self.orders)

    def action(self, g):
        out = identity(self.rank)
        for a, k in zip(self.matrices, g):
            if k:
                out = mat_mul(out, mat_pow(a, k))
        return out

    def to_json(self):
        return {"orders": list(self.orders), "matrices": [[list(r) for r in m] for m in self.matrices]}


def _stack(blocks):
    out = []
    for b in blocks:
        out.extend(list(r) for r in b)
    return out


def invariants(lattice: GaloisLattice, subgroup_gens=None) -> list:
    """Z-basis of the sublattice fixed by the given group elements (default: all of G)."""
    n = lattice.rank
    gens = _default_gens(lattice) if subgroup_gens is None else list(subgroup_gens)
    blocks = [mat_sub(lattice.action(g), identity(n)) for g in gens]
    return kernel_basis(_stack(blocks), n)


def coinvariants(lattice: GaloisLattice, subgroup_gens=None) -> AbelianGroup:
    n = lattice.rank
    gens = _default_gens(lattice) if subgroup_gens is None else list(subgroup_gens)
    cols = []
    for g in gens:
        cols.extend(transpose(mat_sub(lattice.action(g), identity(n))))
    return group_from_cokernel(transpose(cols) if cols else [], n)


def _default_gens(lattice):
    r = len(lattice.orders)
    return [tuple(int(i == j) for j in range(r)) for i in range(r) if lattice.orders[i] > 1]


def restricted_action(lattice: GaloisLattice, basis, g):
    """Matrix of g on the sublattice spanned by ``basis`` (which g must preserve)."""
    a = lattice.action(g)
    bmat = transpose(basis)
    cols = [solve_integer(bmat, mat_vec(a, b), len(basis)) for b in basis]
    if any(c is None for c in cols):
        raise ValidationError("sublattice is not stable under the action")
    return transpose(cols)


# ---------------------------------------------------------------------------
# H^1 through the cocycle complex


def _norm_partial(a, k):
    n = len(a)
    acc, power = [[0] * n for _ in range(n)], identity(n)
    for _ in range(k):
        acc = [[x + y for x, y in zip(r, s)] for r, s in zip(acc, power)]
        power = mat_mul(power, a)
    return acc


class H1Data:
    """H^1(G, L) with explicit cocycle representatives.

    A cocycle is stored by its values on the generators of the nontrivial
    cyclic factors, concatenated into one vector.
    """

    def __init__(self, lattice: GaloisLattice):
        self.lattice = lattice
        n = lattice.rank
        self.factor_index = [i for i, o in enumerate(lattice.orders) if o > 1]
        sig = [lattice.matrices[i] for i in self.factor_index]
        r = len(sig)
        self.dim = n * r
        rows = []
        for a, (i, s) in enumerate(zip(self.factor_index, sig)):
            norm = _norm_partial(s, lattice.orders[i])
            for row in norm:
                full = [0] * self.dim
                full[a * n : (a + 1) * n] = row
                rows.append(full)
        for a, b in itertools.combinations(range(r), 2):
            sa, sb = mat_sub(sig[a], identity(n)), mat_sub(sig[b], identity(n))
            for k in range(n):
                full = [0] * self.dim
                # (s_b - 1) x_a - (s_a - 1) x_b = 0
                full[a * n : (a + 1) * n] = sb[k]
                full[b * n : (b + 1) * n] = [-x for x in sa[k]]
                rows.append(full)
        self.z1 = kernel_basis(rows, self.dim) if rows else [
            [int(i == j) for i in range(self.dim)] for j in range(self.dim)
        ]
        boundary = []
        for j in range(n):
            col = []
            for s in sig:
                col.extend(s[k][j] - (k == j) for k in range(n))
            boundary.append(col)
        zmat = transpose(self.z1) if self.z1 else []
        coords = [solve_integer(zmat, b, len(self.z1)) for b in boundary]
        k = len(self.z1)
        if k == 0:
            self.group = AbelianGroup()
            self.generators = []
            self.moduli = []
            self._snf = None
            return
        cmat = transpose(coords) if coords else [[] for _ in range(k)]
        if not coords:
            cmat = [[0] for _ in range(k)]
        snf = smith_normal_form(cmat, len(cmat[0]))
        self._snf = snf
        diag = list(snf.diagonal) + [0] * (k - len(snf.diagonal))
        if any(d == 0 for d in diag):
            raise AssertionError("H^1 of a finite group must be finite")
        self._slots = [i for i, d in enumerate(diag) if d > 1]
        self.moduli = [diag[i] for i in self._slots]
        self.generators = []
        for i in self._slots:
            coeff = [snf.left_inv[j][i] for j in range(k)]
            self.generators.append([sum(c * z[t] for c, z in zip(coeff, self.z1)) for t in range(self.dim)])
        self.group = AbelianGroup(0, tuple(self.moduli), tuple(tuple(g) for g in self.generators))

    def elements(self):
        """(coefficients, cocycle) for every class."""
        for coeff in itertools.product(*(range(d) for d in self.moduli)):
            z = [0] * self.dim
            for c, g in zip(coeff, self.generators):
                if c:
                    z = [x + c * y for x, y in zip(z, g)]
            yield coeff, z

    def value(self, cocycle, g):
        """c(g) for a group element g."""
        n = self.lattice.rank
        out = [0] * n
        prefix = identity(n)
        for a, i in enumerate(self.factor_index):
            k = g[i] % self.lattice.orders[i]
            s = self.lattice.matrices[i]
            x = cocycle[a * n : (a + 1) * n]
            term = mat_vec(mat_mul(prefix, _norm_partial(s, k)), x)
            out = [u + w for u, w in zip(out, term)]
            prefix = mat_mul(prefix, mat_pow(s, k))
        return out

    def restricts_trivially(self, cocycle, subgroup_gens) -> bool:
        n = self.lattice.rank
        rows, rhs = [], []
        for d in subgroup_gens:
            rows.extend(mat_sub(self.lattice.action(d), identity(n)))
            rhs.extend(self.value(cocycle, d))
        if not rows:
            return True
        return solve_integer(rows, rhs, n) is not None


def group_h1(lattice: GaloisLattice) -> AbelianGroup:
    return H1Data(lattice).group


@dataclass(frozen=True)
class TateCohomology:
    h0: AbelianGroup
    h_minus1: AbelianGroup

    def to_json(self):
        return {"H0": self.h0.to_json(), "H-1": self.h_minus1.to_json()}


def tate_cohomology_cyclic(lattice: GaloisLattice, generator) -> TateCohomology:
    """Tate cohomology in degrees 0 and -1 of the cyclic subgroup generated by ``generator``."""
    n = lattice.rank
    grp = lattice.group()
    c = grp.element_order(generator)
    s = lattice.action(generator)
    norm = _norm_partial(s, c)
    fixed = kernel_basis(mat_sub(s, identity(n)), n)
    fmat = transpose(fixed)
    cols = [solve_integer(fmat, [norm[i][j] for i in range(n)], len(fixed)) for j in range(n)]
    h0 = group_from_cokernel(transpose(cols) if fixed else [], len(fixed))
    kern = kernel_basis(norm, n)
    kmat = transpose(kern)
    sm1 = mat_sub(s, identity(n))
    cols = [solve_integer(kmat, [sm1[i][j] for i in range(n)], len(kern)) for j in range(n)]
    hm1 = group_from_cokernel(transpose(cols) if kern else [], len(kern))
    return TateCohomology(h0, hm1)


def local_subgroups(cover: AbelianCover):
    """Generator lists of the subgroups that test local triviality.

    Every cyclic subgroup occurs as a decomposition group at infinitely many
    unramified places, and each ramified place adds its own group.
    """
    grp = cover.group()
    out = [[g] for g, _ in grp.cyclic_subgroups()]
    for v in cover.ramified_places:
        d = decomposition(cover, v)
        out.append([d.inertia_generator, d.frobenius])
    return out


def sha_kernel(cover: AbelianCover, lattice: GaloisLattice) -> AbelianGroup:
    """Classes in H^1(G, L) that vanish on every local subgroup."""
    if tuple(lattice.orders) != tuple(cover.orders):
        raise ValidationError("lattice group does not match the cover group")
    h1 = H1Data(lattice)
    if not h1.moduli:
        return AbelianGroup()
    tests = local_subgroups(cover)
    kept = [coeff for coeff, z in h1.elements() if all(h1.restricts_trivially(z, gens) for gens in tests)]
    return subgroup_invariants(kept, h1.moduli)


# ---------------------------------------------------------------------------
# standard lattices


def split_lattice(orders, d: int = 1) -> GaloisLattice:
    return GaloisLattice(tuple(orders), tuple(identity(d) for _ in orders))


def induced_lattice(orders) -> GaloisLattice:
    """Z[G] with basis the group elements in lexicographic order."""
    grp = CoverGroup(orders)
    elems = grp.elements()
    pos = {g: i for i, g in enumerate(elems)}
    mats = []
    for i in range(len(orders)):
        e = tuple(int(i == j) for j in range(len(orders)))
        m = [[0] * len(elems) for _ in elems]
        for h in elems:
            m[pos[grp.add(e, h)]][pos[h]] = 1
        mats.append(m)
    return GaloisLattice(tuple(orders), tuple(mats))


def norm_one_lattice(orders) -> GaloisLattice:
    """Z[G]/(sum of g) on the basis of images of g != 1."""
    grp = CoverGroup(orders)
    elems = [g for g in grp.elements() if g != grp.identity()]
    pos = {g: i for i, g in enumerate(elems)}
    n = len(elems)
    mats = []
    for i in range(len(orders)):
        e = tuple(int(i == j) for j in range(len(orders)))
        m = [[0] * n for _ in range(n)]
        for h in elems:
            img = grp.add(e, h)
            if img == grp.identity():
                for r in range(n):
                    m[r][pos[h]] = -1
            else:
                m[pos[img]][pos[h]] = 1
        mats.append(m)
    return GaloisLattice(tuple(orders), tuple(mats))


def dual_lattice(lattice: GaloisLattice) -> GaloisLattice:
    """Hom(L, Z): each matrix replaced by its inverse transpose."""
    mats = [transpose(mat_pow(a, order - 1)) if lattice.rank else a for a, order in zip(lattice.matrices, lattice.orders)]
    return GaloisLattice(lattice.orders, tuple(mats))


def product_lattice(a: GaloisLattice, b: GaloisLattice) -> GaloisLattice:
    if a.orders != b.orders:
        raise ValidationError("lattices over different groups")
    n, m = a.rank, b.rank
    mats = []
    for x, y in zip(a.matrices, b.matrices):
        blk = [list(r) + [0] * m for r in x] + [[0] * n + list(r) for r in y]
        mats.append(blk)
    return GaloisLattice(a.orders, tuple(mats))


def standard_lattice(kind: str, orders, d: int = 1) -> GaloisLattice:
    if kind == "split":
        return split_lattice(orders, d)
    if kind == "induced":
        return induced_lattice(orders)
    if kind == "norm_one":
        return norm_one_lattice(orders)
    if kind == "augmentation":
        return dual_lattice(norm_one_lattice(orders))
    raise ValidationError(f"unknown lattice kind {kind!r}")


# ---------------------------------------------------------------------------
# modules with a Frobenius automorphism


def _order_bound(n):
    """lcm of the orders of finite-order elements of GL_n(Z): all k with phi(k) <= n."""
    # phi(k) >= sqrt(k / 2), so k <= 2 n^2 covers every candidate
    orders = [k for k in range(1, 2 * n * n + 3) if sum(gcd(j, k) == 1 for j in range(1, k + 1)) <= n]
    return lcm(*orders)


@dataclass(frozen=True)
class FrobModule:
    """Z^n / diag(invariants) with an automorphism given by an integer matrix.

    An invariant 0 marks a free coordinate.
    """

    invariants: tuple
    frobenius: tuple

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, "invariants", inv)
        object.__setattr__(self, "frobenius", freeze(self.frobenius))
        n = len(inv)
        f = self.frobenius
        if len(f) != n or any(len(r) != n for r in f):
            raise ValidationError("Frobenius matrix has the wrong shape")
        if any(d < 0 for d in inv):
            raise ValidationError("invariants must be non-negative")
        for i in range(n):
            for j in range(n):
                x = inv[j] * f[i][j]
                if (inv[i] == 0 and x != 0) or (inv[i] and x % inv[i]):
                    raise ValidationError("Frobenius does not preserve the relations")
        if n:
            cols = [list(r) + [inv[i] if k == i else 0 for k in range(n)] for i, r in enumerate(f)]
            free, tors = cokernel(cols, n)
            if free or tors:
                raise ValidationError("Frobenius is not surjective on the module")
        block = self.free_block()
        if block and mat_pow(block, _order_bound(len(block))) != identity(len(block)):
            raise ValidationError("Frobenius must have finite order on the free part")

    @classmethod
    def free(cls, matrix):
        return cls(tuple(0 for _ in matrix), matrix)

    @classmethod
    def trivial(cls, rank):
        return cls(tuple(0 for _ in range(rank)), identity(rank))

    @property
    def free_indices(self):
        return [i for i, d in enumerate(self.invariants) if d == 0]

    @property
    def rank(self):
        return len(self.free_indices)

    def free_block(self):
        idx = self.free_indices
        return [[self.frobenius[i][j] for j in idx] for i in idx]

    def to_json(self):
        return {"invariants": list(self.invariants), "frobenius": [list(r) for r in self.frobenius]}
