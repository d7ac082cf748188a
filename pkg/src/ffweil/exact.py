"""Exact arithmetic over Z and Q.

Polynomials and rational functions in one variable ``t`` with rational
coefficients, truncated power series, integer matrices with Smith normal
form, Pade reconstruction and Laurent leading terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import NoSolution, SingularMatrix


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def format_fraction(x) -> str:
    """Rationals travel as ``num/den`` strings."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# polynomials in t over Q


class Poly:
    """Dense polynomial over Q, coefficients stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def one(cls):
        return cls([1])

    @classmethod
    def monomial(cls, coeff, degree):
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return Poly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_fraction(other)
            return Poly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.lc
        for i in range(dq, -1, -1):
            c = rem[i + other.degree] / lead
            quo[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(quo), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Poly) else Poly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self):
        return self * (1 / self.lc) if self.coeffs else self

    def derivative(self):
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def scale(self, c):
        """p(c t)."""
        c = as_fraction(c)
        return Poly(a * c**i for i, a in enumerate(self.coeffs))

    def substitute_power(self, n: int):
        """p(t^n)."""
        out = [Fraction(0)] * (n * self.degree + 1) if self.coeffs else []
        for i, a in enumerate(self.coeffs):
            out[n * i] = a
        return Poly(out)

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self):
        return [int(c) for c in self.coeffs]

    def __repr__(self):
        return f"Poly({[format_fraction(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = str(abs(c)) + ("*" + mono if mono else "")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


# ---------------------------------------------------------------------------
# rational functions with value 1 at t = 0


class RationalFunctionQ:
    """Reduced quotient num/den of polynomials with num(0) = den(0) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly(num)
        den = Poly.one() if den is None else (den if isinstance(den, Poly) else Poly(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        d0 = den[0]
        if d0 == 0:
            raise ValueError("denominator vanishes at t = 0")
        num, den = num * (1 / d0), den * (1 / d0)
        if num[0] != 1:
            raise ValueError("rational function must take the value 1 at t = 0")
        self.num = num
        self.den = den

    @classmethod
    def one(cls):
        return cls(Poly.one())

    def __eq__(self, other):
        return isinstance(other, RationalFunctionQ) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RF", self.num, self.den))

    def __mul__(self, other):
        return RationalFunctionQ(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        return RationalFunctionQ(self.num * other.den, self.den * other.num)

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunctionQ(self.num**k, self.den**k)
        return RationalFunctionQ(self.den ** (-k), self.num ** (-k))

    def inverse(self):
        return RationalFunctionQ(self.den, self.num)

    def scale(self, c):
        """f(c t)."""
        return RationalFunctionQ(self.num.scale(c), self.den.scale(c))

    def substitute_power(self, n):
        return RationalFunctionQ(self.num.substitute_power(n), self.den.substitute_power(n))

    def series(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.num.coeffs, order) * TruncatedSeries(self.den.coeffs, order).inverse()

    def is_integral(self):
        return self.num.is_integral() and self.den.is_integral()

    def __repr__(self):
        return f"RationalFunctionQ({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.degree == 0:
            return f"{self.num}"
        return f"({self.num}) / ({self.den})"

    def to_json(self):
        return {
            "num": [format_fraction(c) for c in self.num.coeffs],
            "den": [format_fraction(c) for c in self.den.coeffs],
        }


# ---------------------------------------------------------------------------
# truncated power series


class TruncatedSeries:
    """Power series known modulo t^(order + 1)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int):
        c = [as_fraction(x) for x in list(coeffs)[: order + 1]]
        c += [Fraction(0)] * (order + 1 - len(c))
        self.coeffs = tuple(c)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("TS", self.coeffs))

    def __getitem__(self, i):
        return self.coeffs[i]

    def truncate(self, order):
        return TruncatedSeries(self.coeffs, min(order, self.order))

    def __mul__(self, other):
        d = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(d + 1)]
        return TruncatedSeries(out, d)

    def inverse(self):
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term")
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, self.order + 1):
            s = sum((a[i] * out[k - i] for i in range(1, k + 1)), Fraction(0))
            out.append(-s * inv0)
        return TruncatedSeries(out, self.order)

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = TruncatedSeries([1], self.order)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self):
        return f"TruncatedSeries({[format_fraction(c) for c in self.coeffs]})"


# ---------------------------------------------------------------------------
# integer matrices


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_pow(a, k):
    result, base = identity(len(a)), [list(r) for r in a]
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def transpose(a, ncols=None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def freeze(a):
    return tuple(tuple(int(x) for x in row) for row in a)


def determinant(a) -> Fraction:
    """Determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [[as_fraction(x) for x in row] for row in a]
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """U M V = D with D diagonal, d1 | d2 | ..., U and V unimodular.

    ``left_inv`` and ``right_inv`` are the inverses of U and V.
    """

    diagonal: tuple
    left: tuple
    right: tuple
    left_inv: tuple
    right_inv: tuple
    shape: tuple

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)

    def cokernel(self):
        """(free rank, torsion invariants > 1) of Z^m / M Z^n."""
        m = self.shape[0]
        torsion = tuple(d for d in self.diagonal if d > 1)
        return m - self.rank, torsion


def smith_normal_form(matrix: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    a = [[int(x) for x in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if a else (ncols or 0)
    u, ui = identity(m), identity(m)
    v, vi = identity(n), identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for r in ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vi[i], vi[j] = vi[j], vi[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]
        for r in ui:
            r[src] -= c * r[dst]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]
        vi[src] = [x - c * y for x, y in zip(vi[src], vi[dst])]

    for s in range(min(m, n)):
        while True:
            best = None
            for i in range(s, m):
                for j in range(s, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(s, best[0])
            swap_cols(s, best[1])
            p = a[s][s]
            clean = True
            for i in range(s + 1, m):
                if a[i][s]:
                    add_row(i, s, -(a[i][s] // p))
                    clean = clean and a[i][s] == 0
            for j in range(s + 1, n):
                if a[s][j]:
                    add_col(j, s, -(a[s][j] // p))
                    clean = clean and a[s][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(s + 1, m) for j in range(s + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(s, bad, 1)
        if a[s][s] < 0:
            a[s] = [-x for x in a[s]]
            u[s] = [-x for x in u[s]]
            for r in ui:
                r[s] = -r[s]
    diag = tuple(a[i][i] for i in range(min(m, n)))
    return SmithForm(diag, freeze(u), freeze(v), freeze(ui), freeze(vi), (m, n))


def kernel_basis(matrix, ncols: int) -> list:
    """Z-basis of {x in Z^ncols : M x = 0}; saturated by construction."""
    if not matrix:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    snf = smith_normal_form(matrix, ncols)
    r = snf.rank
    return [[snf.right[i][j] for i in range(ncols)] for j in range(r, ncols)]


def lattice_basis(vectors, dim: int) -> list:
    """Z-basis of the span of ``vectors`` in Z^dim."""
    vectors = [list(v) for v in vectors if any(v)]
    if not vectors:
        return []
    cols = transpose(vectors)  # dim x k
    snf = smith_normal_form(cols)
    out = []
    for i, d in enumerate(snf.diagonal):
        if d:
            out.append([d * snf.left_inv[row][i] for row in range(dim)])
    return out


def cokernel(matrix, nrows: int):
    """(free rank, torsion invariants) of Z^nrows / (column span of M)."""
    if not matrix or not matrix[0]:
        return nrows, ()
    return smith_normal_form(matrix).cokernel()


def solve_integer(matrix, b, ncols: int):
    """Some x in Z^ncols with M x = b, or None."""
    m = len(b)
    if m == 0:
        return [0] * ncols
    if ncols == 0:
        return [] if not any(b) else None
    snf = smith_normal_form(matrix, ncols)
    ub = mat_vec(snf.left, b)
    y = [0] * ncols
    for i in range(m):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if d == 0:
            if ub[i]:
                return None
        elif ub[i] % d:
            return None
        else:
            y[i] = ub[i] // d
    return mat_vec(snf.right, y)


def solve_rational(matrix, b, ncols: int):
    """Some x in Q^ncols with M x = b (free variables set to 0), or None."""
    rows = [[as_fraction(x) for x in row] + [as_fraction(c)] for row, c in zip(matrix, b)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][ncols]
    return x


def lattice_index(sub_basis, dim: int) -> int:
    """[Z^dim : L] for a full-rank sublattice L; 0 if L has lower rank."""
    if len(sub_basis) < dim:
        return 0
    return abs(int(determinant(transpose(sub_basis))))


def reversed_charpoly(matrix) -> Poly:
    """det(1 - M t) for an integer matrix invertible over Q."""
    n = len(matrix)
    if n == 0:
        return Poly.one()
    if determinant(matrix) == 0:
        raise SingularMatrix("reversed_charpoly needs an invertible matrix")
    # interpolate the degree-n polynomial through t = 0..n
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        ys.append(determinant([[int(i == j) - x * matrix[i][j] for j in range(n)] for i in range(n)]))
    # Newton divided differences
    coef = list(ys)
    for level in range(1, n + 1):
        for i in range(n, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    result = Poly([coef[n]])
    for i in range(n - 1, -1, -1):
        result = result * Poly([-xs[i], 1]) + coef[i]
    return result


# ---------------------------------------------------------------------------
# Pade reconstruction and leading terms


def pade_reconstruct(series: TruncatedSeries, dnum: int, dden: int) -> RationalFunctionQ:
    """P/Q with deg P <= dnum, deg Q <= dden, Q(0) = 1, matching the series.

    The match is required through the full order of ``series``, which must
    be at least dnum + dden so that the answer is unique.
    """
    s = series.coeffs
    order = series.order
    if order < dnum + dden:
        raise ValueError("series too short for the requested degree bounds")
    if s[0] != 1:
        raise NoSolution("series must start with 1")
    rows, rhs = [], []
    for k in range(dnum + 1, order + 1):
        rows.append([s[k - j] if k - j >= 0 else Fraction(0) for j in range(1, dden + 1)])
        rhs.append(-s[k])
    b = solve_rational(rows, rhs, dden) if dden else ([] if not any(rhs) else None)
    if b is None:
        raise NoSolution("no rational function with these degree bounds matches")
    q = Poly([1] + list(b))
    qs = [q[j] for j in range(dnum + 1)]
    p = Poly(sum((qs[j] * s[k - j] for j in range(k + 1)), Fraction(0)) for k in range(dnum + 1))
    return RationalFunctionQ(p, q)


class Base(str, Enum):
    ONE_MINUS_T = "OneMinusT"
    ONE_MINUS_QT = "OneMinusQT"


@dataclass(frozen=True)
class LaurentLead:
    """L(t) ~ value * (base)^order near the root of the base."""

    order: int
    value: Fraction
    base: Base

    def to_json(self):
        return {"order": self.order, "value": format_fraction(self.value), "base": self.base.value}


def _strip_root(p: Poly, factor: Poly):
    m = 0
    while not p.is_zero():
        quo, rem = divmod(p, factor)
        if not rem.is_zero():
            break
        p, m = quo, m + 1
    return p, m


def laurent_lead(f: RationalFunctionQ, base: Base | str, q: int = 1) -> LaurentLead:
    base = Base(base)
    factor = Poly([1, -1]) if base is Base.ONE_MINUS_T else Poly([1, -q])
    root = Fraction(1) if base is Base.ONE_MINUS_T else Fraction(1, q)
    num, mn = _strip_root(f.num, factor)
    den, md = _strip_root(f.den, factor)
    return LaurentLead(mn - md, num(root) / den(root), base)


# ---------------------------------------------------------------------------
# real roots


def sturm_sequence(p: Poly) -> list:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_changes(values):
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _eval_at(p: Poly, x):
    if x == "-inf":
        return p.lc * (-1) ** p.degree if p.coeffs else 0
    if x == "+inf":
        return p.lc
    return p(x)


def count_real_roots(p: Poly, lo="-inf", hi="+inf") -> int:
    """Number of distinct real roots of p in the interval (lo, hi]."""
    if p.degree <= 0:
        return 0
    seq = sturm_sequence(p)
    return _sign_changes([_eval_at(s, lo) for s in seq]) - _sign_changes([_eval_at(s, hi) for s in seq])


def squarefree_part(p: Poly) -> Poly:
    g = poly_gcd(p, p.derivative())
    return p // g if g.degree > 0 else p


def lattice_sum(a_basis, b_basis, dim: int) -> list:
    return lattice_basis(list(a_basis) + list(b_basis), dim)


def lattice_intersection(a_basis, b_basis, dim: int) -> list:
    if not a_basis or not b_basis:
        return []
    ka = len(a_basis)
    cols = [list(v) for v in a_basis] + [[-x for x in v] for v in b_basis]
    kern = kernel_basis(transpose(cols), len(cols))
    vecs = [[sum(k[j] * a_basis[j][i] for j in range(ka)) for i in range(dim)] for k in kern]
    return lattice_basis(vecs, dim)


def lattice_quotient(a_basis, b_vectors):
    """(free rank, torsion) of A/B for lattices B inside A."""
    k = len(a_basis)
    if k == 0:
        return 0, ()
    amat = transpose(a_basis)
    coords = []
    for b in b_vectors:
        c = solve_integer(amat, list(b), k)
        if c is None:
            raise ValueError("sublattice is not contained in the lattice")
        coords.append(c)
    if not coords:
        return k, ()
    return cokernel(transpose(coords), k)
