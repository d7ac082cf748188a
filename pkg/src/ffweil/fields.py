"""Finite fields, places of F_q(t) and abelian Kummer covers of P^1.

Elements of F_q are ints in [0, q). With q = p^e the base-p digits of an
element are its coefficients on 1, x, ..., x^(e-1), where x is a root of
the chosen modulus. Polynomials over F_q are tuples of such ints, lowest
degree first, with no trailing zeros.
"""

from __future__ import annotations

import ast
import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, prod

import numpy as np

from .errors import NotGeometricallyConnected, NotKummerCompatible, ParseError, ValidationError


def prime_power(q: int):
    """(p, e) with q = p^e, or raise ValidationError."""
    if q < 2:
        raise ValidationError(f"q = {q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValidationError(f"q = {q} is not a prime power")
    return p, e


def mobius(n: int) -> int:
    result, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    return -result if n > 1 else result


def necklace_count(q: int, n: int) -> int:
    """Number of monic irreducible polynomials of degree n over F_q."""
    return sum(mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def place_count(q: int, n: int) -> int:
    """Number of places of F_q(t) of degree n, infinity included."""
    return necklace_count(q, n) + (1 if n == 1 else 0)


def _digits(values, base, width):
    values = np.asarray(values, dtype=np.int64)
    out = np.empty((values.shape[0], width), dtype=np.int64)
    for j in range(width):
        out[:, j] = values % base
        values = values // base
    return out


class Fq:
    """The field with q elements, built from the lowest irreducible modulus."""

    def __init__(self, q: int):
        self.q = q
        self.p, self.e = prime_power(q)
        p, e = self.p, self.e
        self.modulus = self._lowest_prime_field_modulus(p, e)
        digits = [self._to_digits(a) for a in range(q)]
        self.add = [[self._from_digits([(x + y) % p for x, y in zip(da, db)]) for db in digits] for da in digits]
        self.mul = [[self._mul_digits(da, db) for db in digits] for da in digits]
        self.neg = [self._from_digits([(-x) % p for x in da]) for da in digits]
        self.inv = [None] + [next(b for b in range(1, q) if self.mul[a][b] == 1) for a in range(1, q)]
        self.generator = next(g for g in range(1, q) if self._order(g) == q - 1)
        self.dlog = [None] * q
        self.exp = []
        x = 1
        for k in range(q - 1):
            self.dlog[x] = k
            self.exp.append(x)
            x = self.mul[x][self.generator]
        self.add_np = np.array(self.add, dtype=np.int64)
        self.mul_np = np.array(self.mul, dtype=np.int64)
        self.neg_np = np.array(self.neg, dtype=np.int64)
        self._irreducibles = {}

    # -- element arithmetic

    def _to_digits(self, a):
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def _from_digits(self, d):
        return sum(c * self.p**i for i, c in enumerate(d))

    def _mul_digits(self, da, db):
        p, e = self.p, self.e
        prod_ = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod_[i + j] = (prod_[i + j] + x * y) % p
        mod = self.modulus
        for k in range(len(prod_) - 1, e - 1, -1):
            c = prod_[k]
            if c:
                for i in range(e + 1):
                    prod_[k - e + i] = (prod_[k - e + i] - c * mod[i]) % p
        return self._from_digits(prod_[:e])

    @staticmethod
    def _lowest_prime_field_modulus(p, e):
        if e == 1:
            return (0, 1)
        for idx in range(p**e):
            low = []
            r = idx
            for _ in range(e):
                low.append(r % p)
                r //= p
            cand = tuple(low) + (1,)
            if _is_irreducible_prime_field(cand, p):
                return cand
        raise AssertionError("no irreducible modulus found")

    def _order(self, a):
        k, x = 1, a
        while x != 1:
            x = self.mul[x][a]
            k += 1
        return k

    def power(self, a, k):
        if a == 0:
            return 0 if k else 1
        return self.element_of_log(self.dlog[a] * k)

    def element_of_log(self, k):
        return self.exp[k % (self.q - 1)]

    def from_int(self, n: int):
        """Image of an integer in the prime subfield."""
        return n % self.p

    def __eq__(self, other):
        return isinstance(other, Fq) and other.q == self.q

    def __hash__(self):
        return hash(("Fq", self.q))

    def __repr__(self):
        return f"Fq({self.q})"

    # -- polynomial arithmetic

    @staticmethod
    def trim(a):
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        return tuple(a)

    def p_add(self, a, b):
        n = max(len(a), len(b))
        ad = self.add
        return self.trim(ad[a[i] if i < len(a) else 0][b[i] if i < len(b) else 0] for i in range(n))

    def p_neg(self, a):
        return tuple(self.neg[c] for c in a)

    def p_sub(self, a, b):
        return self.p_add(a, self.p_neg(b))

    def p_scale(self, a, c):
        return self.trim(self.mul[c][x] for x in a)

    def p_mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        ad, mu = self.add, self.mul
        for i, x in enumerate(a):
            if x:
                row = mu[x]
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = ad[out[i + j]][row[y]]
        return self.trim(out)

    def p_divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(a)
        db = len(b) - 1
        if len(rem) - 1 < db:
            return (), tuple(a)
        inv = self.inv[b[-1]]
        quo = [0] * (len(rem) - db)
        ad, mu, ng = self.add, self.mul, self.neg
        for i in range(len(rem) - 1 - db, -1, -1):
            c = mu[rem[i + db]][inv]
            quo[i] = c
            if c:
                nc = ng[c]
                for j, y in enumerate(b):
                    rem[i + j] = ad[rem[i + j]][mu[nc][y]]
        return self.trim(quo), self.trim(rem)

    def p_mod(self, a, b):
        return self.p_divmod(a, b)[1]

    def p_monic(self, a):
        return self.p_scale(a, self.inv[a[-1]]) if a else a

    def p_gcd(self, a, b):
        while b:
            a, b = b, self.p_mod(a, b)
        return self.p_monic(a)

    def p_pow(self, a, k):
        result, base = (1,), a
        while k:
            if k & 1:
                result = self.p_mul(result, base)
            base = self.p_mul(base, base)
            k >>= 1
        return result

    def p_powmod(self, a, k, m):
        result, base = (1,), self.p_mod(a, m)
        while k:
            if k & 1:
                result = self.p_mod(self.p_mul(result, base), m)
            base = self.p_mod(self.p_mul(base, base), m)
            k >>= 1
        return result

    def p_eval(self, a, x):
        acc = 0
        for c in reversed(a):
            acc = self.add[self.mul[acc][x]][c]
        return acc

    def p_resultant(self, a, b):
        """Res(a, b); for monic irreducible a this is the norm of b mod a."""
        if not a or not b:
            return 0
        sign_flip = False
        scale = 1
        while True:
            m, n = len(a) - 1, len(b) - 1
            if n == 0:
                r = self.power(b[0], m)
                break
            rem = self.p_mod(a, b)
            if not rem:
                return 0
            k = len(rem) - 1
            if (m * n) % 2:
                sign_flip = not sign_flip
            scale = self.mul[scale][self.power(b[-1], m - k)]
            a, b = b, rem
        r = self.mul[r][scale]
        return self.neg[r] if sign_flip else r

    def p_is_irreducible(self, a):
        d = len(a) - 1
        if d <= 0:
            return False
        if d == 1:
            return True
        a = self.p_monic(a)
        for k in range(1, d // 2 + 1):
            for g in self.irreducibles(k):
                if not self.p_mod(a, g):
                    return False
        return True

    def p_factor(self, a):
        """Monic irreducible factorisation: (unit, [(P, exponent), ...])."""
        if not a:
            raise ValueError("cannot factor zero")
        unit = a[-1]
        rest = self.p_monic(a)
        out = []
        k = 1
        while len(rest) - 1 >= 2 * k:
            for g in self.irreducibles(k):
                e = 0
                while True:
                    quo, rem = self.p_divmod(rest, g)
                    if rem:
                        break
                    rest, e = quo, e + 1
                if e:
                    out.append((g, e))
            k += 1
        if len(rest) > 1:
            merged = False
            for i, (g, e) in enumerate(out):
                if g == rest:
                    out[i] = (g, e + 1)
                    merged = True
            if not merged:
                out.append((rest, 1))
        out.sort(key=lambda ge: (len(ge[0]), poly_index(self.q, ge[0])))
        return unit, out

    def p_format(self, a, var="t"):
        if not a:
            return "0"
        terms = []
        for i in range(len(a) - 1, -1, -1):
            c = a[i]
            if not c:
                continue
            cs = self.element_str(c)
            if i == 0:
                terms.append(cs)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                terms.append(mono if c == 1 else f"{cs}*{mono}")
        return "+".join(terms)

    def element_str(self, c):
        if self.e == 1:
            return str(c)
        d = self._to_digits(c)
        parts = []
        for i in range(self.e - 1, -1, -1):
            if d[i]:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                parts.append(str(d[i]) if not mono else (mono if d[i] == 1 else f"{d[i]}{mono}"))
        s = "+".join(parts)
        return f"({s})" if len(parts) > 1 else s

    # -- enumeration of irreducibles

    def irreducibles(self, n: int):
        """Monic irreducibles of degree n in lex order (coefficients compared from the top)."""
        if n not in self._irreducibles:
            rows = self.irreducible_array(n).tolist()
            self._irreducibles[n] = [tuple(row) + (1,) for row in rows]
        return self._irreducibles[n]

    def irreducible_array(self, n: int):
        """The same polynomials as an (N, n) array of low coefficients, monic term omitted."""
        key = ("array", n)
        if key not in self._irreducibles:
            self._irreducibles[key] = _digits(self._irreducible_indices(n), self.q, n)
        return self._irreducibles[key]

    def _poly_products(self, gs, h, n):
        """Coefficient arrays (len(gs) * len(h), n + 1) of all products g * h."""
        c, k = len(gs), h.shape[1] - 1
        d = gs.shape[1] - 1
        if self.e == 1:
            h8 = h.astype(np.int32)
            out = np.zeros((c, len(h), n + 1), dtype=np.int32)
            for i in range(d + 1):
                out[:, :, i : i + k + 1] += gs[:, i, None, None].astype(np.int32) * h8[None, :, :]
            out %= self.q
        else:
            out = np.zeros((c, len(h), n + 1), dtype=np.int64)
            for i in range(d + 1):
                for j in range(k + 1):
                    term = self.mul_np[gs[:, i, None], h[None, :, j]]
                    out[:, :, i + j] = self.add_np[out[:, :, i + j], term]
        return out.reshape(c * len(h), n + 1)

    def _irreducible_indices(self, n):
        q = self.q
        if n == 1:
            return np.arange(q)
        reducible = np.zeros(q**n, dtype=bool)
        for d in range(1, n // 2 + 1):
            k = n - d
            low = self.irreducible_array(d)
            gs = np.concatenate([low, np.ones((len(low), 1), dtype=np.int64)], axis=1)
            hchunk = min(q**k, 400_000)
            chunk = max(1, 400_000 // hchunk)
            for t in range(0, q**k, hchunk):
                block = np.arange(t, min(t + hchunk, q**k))
                h = np.concatenate([_digits(block, q, k), np.ones((len(block), 1), dtype=np.int64)], axis=1)
                for s in range(0, len(gs), chunk):
                    prods = self._poly_products(gs[s : s + chunk], h, n)
                    idx = np.zeros(len(prods), dtype=np.int64)
                    for j in range(n - 1, -1, -1):
                        idx *= q
                        idx += prods[:, j]
                    reducible[idx] = True
        return np.nonzero(~reducible)[0]

    def reduce_rows(self, rows, m):
        """Remainders of the monic polynomials with low coefficients ``rows`` modulo m."""
        n = rows.shape[1]
        k = len(m) - 1
        work = np.concatenate([rows, np.ones((len(rows), 1), dtype=np.int64)], axis=1)
        inv_lc = self.inv[m[-1]]
        for i in range(n, k - 1, -1):
            c = work[:, i]
            if self.e == 1:
                c = (c * inv_lc) % self.q
                for j in range(k + 1):
                    work[:, i - k + j] = (work[:, i - k + j] - c * m[j]) % self.q
            else:
                c = self.mul_np[c, inv_lc]
                for j in range(k + 1):
                    sub = self.neg_np[self.mul_np[c, m[j]]]
                    work[:, i - k + j] = self.add_np[work[:, i - k + j], sub]
        return work[:, :k]


def _is_irreducible_prime_field(a, p):
    d = len(a) - 1
    for k in range(1, d // 2 + 1):
        for idx in range(p**k):
            g = []
            r = idx
            for _ in range(k):
                g.append(r % p)
                r //= p
            g.append(1)
            rem = list(a)
            for i in range(d - k, -1, -1):
                c = rem[i + k]
                if c:
                    for j in range(k + 1):
                        rem[i + j] = (rem[i + j] - c * g[j]) % p
            if not any(rem[:k]):
                return False
    return True


def poly_index(q, a):
    return sum(c * q**i for i, c in enumerate(a))


@lru_cache(maxsize=None)
def get_field(q: int) -> Fq:
    return Fq(q)


# ---------------------------------------------------------------------------
# places


@dataclass(frozen=True)
class Place:
    """A finite place (monic irreducible ``poly``) or infinity (``poly`` None)."""

    poly: tuple | None
    degree: int

    @classmethod
    def infinity(cls):
        return cls(None, 1)

    @classmethod
    def finite(cls, poly):
        poly = tuple(int(c) for c in poly)
        return cls(poly, len(poly) - 1)

    @property
    def is_infinite(self):
        return self.poly is None

    def label(self, field=None):
        if self.poly is None:
            return "inf"
        if field is None:
            return "[" + ",".join(str(c) for c in self.poly) + "]"
        return field.p_format(self.poly)

    def to_json(self):
        return "inf" if self.poly is None else list(self.poly)

    def sort_key(self, q):
        if self.poly is None:
            return (0, -1)
        return (self.degree, poly_index(q, self.poly))


def enumerate_places(field: Fq, max_degree: int):
    """Places of degree <= max_degree: infinity first, then by degree and lex order."""
    yield Place.infinity()
    for n in range(1, max_degree + 1):
        for g in field.irreducibles(n):
            yield Place(g, n)


def places_of_degree(field: Fq, n: int):
    out = [Place(g, n) for g in field.irreducibles(n)]
    if n == 1:
        out.insert(0, Place.infinity())
    return out


# ---------------------------------------------------------------------------
# rational functions over F_q


class FqRat:
    """Nonzero-denominator quotient num/den in F_q(t), reduced with den monic."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: Fq, num, den=(1,)):
        num, den = field.trim(num), field.trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = field.p_gcd(num, den) if num else den
        if len(g) > 1:
            num = field.p_divmod(num, g)[0]
            den = field.p_divmod(den, g)[0]
        c = field.inv[den[-1]]
        self.field = field
        self.num = field.p_scale(num, c)
        self.den = field.p_scale(den, c)

    def __eq__(self, other):
        return isinstance(other, FqRat) and (self.field, self.num, self.den) == (other.field, other.num, other.den)

    def __hash__(self):
        return hash((self.field.q, self.num, self.den))

    def is_zero(self):
        return not self.num

    def __mul__(self, other):
        f = self.field
        return FqRat(f, f.p_mul(self.num, other.num), f.p_mul(self.den, other.den))

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by zero in F_q(t)")
        f = self.field
        return FqRat(f, f.p_mul(self.num, other.den), f.p_mul(self.den, other.num))

    def __add__(self, other):
        f = self.field
        num = f.p_add(f.p_mul(self.num, other.den), f.p_mul(other.num, self.den))
        return FqRat(f, num, f.p_mul(self.den, other.den))

    def __neg__(self):
        return FqRat(self.field, self.field.p_neg(self.num), self.den)

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, k):
        f = self.field
        if k >= 0:
            return FqRat(f, f.p_pow(self.num, k), f.p_pow(self.den, k))
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return FqRat(f, f.p_pow(self.den, -k), f.p_pow(self.num, -k))

    def valuation(self, place: Place) -> int:
        f = self.field
        if place.poly is None:
            return (len(self.den) - 1) - (len(self.num) - 1)
        return _ord(f, self.num, place.poly) - _ord(f, self.den, place.poly)

    def unit_norm(self, place: Place) -> int:
        """Norm to F_q of the residue of f * pi^(-ord f), pi the canonical uniformizer."""
        f = self.field
        if place.poly is None:
            return f.mul[self.num[-1]][f.inv[self.den[-1]]]
        num, den = _strip(f, self.num, place.poly), _strip(f, self.den, place.poly)
        a = f.p_resultant(place.poly, num)
        b = f.p_resultant(place.poly, den)
        return f.mul[a][f.inv[b]]

    def support(self):
        """Places where the valuation is nonzero, sorted canonically."""
        f = self.field
        out = []
        for poly in (self.num, self.den):
            if len(poly) > 1:
                out.extend(Place(g, len(g) - 1) for g, _ in f.p_factor(poly)[1])
        if len(self.num) != len(self.den):
            out.append(Place.infinity())
        uniq = sorted(set(out), key=lambda v: v.sort_key(f.q))
        return uniq

    def __repr__(self):
        return f"FqRat(q={self.field.q}, {self.text()})"

    def text(self):
        f = self.field
        if self.den == (1,):
            return f.p_format(self.num)
        return f"({f.p_format(self.num)})/({f.p_format(self.den)})"

    def to_json(self):
        return {"num": list(self.num), "den": list(self.den)}


def _ord(field, a, poly):
    k = 0
    while a:
        quo, rem = field.p_divmod(a, poly)
        if rem:
            break
        a, k = quo, k + 1
    return k


def _strip(field, a, poly):
    while True:
        quo, rem = field.p_divmod(a, poly)
        if rem:
            return a
        a = quo


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_fq_rational(field: Fq, spec) -> FqRat:
    """Parse an element of F_q(t).

    Accepts a list of coefficients (an F_q[t] polynomial), a mapping with
    ``num`` and ``den`` lists, or an expression string in ``t`` and ``x``
    (the field generator) built from integers, + - * / ^ and parentheses.
    """
    if isinstance(spec, FqRat):
        return spec
    if isinstance(spec, (list, tuple)):
        return FqRat(field, _check_coeffs(field, spec))
    if isinstance(spec, dict):
        if "num" not in spec:
            raise ParseError("rational function mapping needs 'num'")
        return FqRat(field, _check_coeffs(field, spec["num"]), _check_coeffs(field, spec.get("den", [1])))
    if not isinstance(spec, str):
        raise ParseError(f"cannot read a rational function from {spec!r}")
    try:
        tree = ast.parse(spec.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad expression {spec!r}: {exc.msg}") from None

    def const(c):
        return FqRat(field, (c,))

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            if isinstance(node.op, ast.Pow):
                exp = _int_literal(node.right)
                if exp is None:
                    raise ParseError(f"exponent must be an integer in {spec!r}")
                return walk(node.left) ** exp
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return const(field.from_int(node.value))
        if isinstance(node, ast.Name):
            if node.id == "t":
                return FqRat(field, (0, 1))
            if node.id == "x":
                if field.e == 1:
                    raise ParseError("'x' only names the generator of a non-prime field")
                return const(field.p)
            raise ParseError(f"unknown name {node.id!r} in {spec!r}")
        raise ParseError(f"unsupported syntax in {spec!r}")

    try:
        value = walk(tree)
    except ZeroDivisionError:
        raise ParseError(f"division by zero in {spec!r}") from None
    return value


def _int_literal(node):
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        inner = _int_literal(node.operand)
        return None if inner is None else -inner
    return None


def _check_coeffs(field, coeffs):
    out = []
    for c in coeffs:
        if not isinstance(c, int) or isinstance(c, bool) or not 0 <= c < field.q:
            raise ParseError(f"F_{field.q} coefficient out of range: {c!r}")
        out.append(c)
    return out


# ---------------------------------------------------------------------------
# abelian covers


@dataclass(frozen=True)
class KummerFactor:
    m: int
    f: FqRat


@dataclass(frozen=True)
class AbelianCover:
    """Cover of P^1 with group Z/n0 x prod Z/m_i.

    The first factor is the constant field extension of degree n0, the
    others are the Kummer extensions K(f_i^(1/m_i)).
    """

    field: Fq
    constant_degree: int = 1
    kummer: tuple = ()

    def __post_init__(self):
        q = self.field.q
        if self.constant_degree < 1:
            raise ValidationError("constant_degree must be positive")
        for k in self.kummer:
            if k.m < 2:
                raise ValidationError("Kummer exponent must be at least 2")
            if (q - 1) % k.m:
                raise NotKummerCompatible(f"m = {k.m} does not divide q - 1 = {q - 1}")
            if k.f.is_zero():
                raise ValidationError("Kummer function must be nonzero")
        if self.kummer:
            self._check_independent()

    @classmethod
    def build(cls, field, constant_degree=1, kummer=()):
        """Convenience constructor; ``kummer`` holds (m, f) pairs with f parseable."""
        factors = tuple(KummerFactor(int(m), parse_fq_rational(field, f)) for m, f in kummer)
        return cls(field, constant_degree, factors)

    @property
    def orders(self):
        return (self.constant_degree,) + tuple(k.m for k in self.kummer)

    @property
    def group_order(self):
        return prod(self.orders)

    @property
    def geometric_order(self):
        return prod(k.m for k in self.kummer)

    @property
    def is_constant(self):
        return not self.kummer

    @cached_property
    def ramification_support(self):
        places = set()
        for k in self.kummer:
            places.update(k.f.support())
        return sorted(places, key=lambda v: v.sort_key(self.field.q))

    @cached_property
    def ramified_places(self):
        return [v for v in self.ramification_support if any(k.f.valuation(v) % k.m for k in self.kummer)]

    def _check_independent(self):
        big = 1
        for k in self.kummer:
            big = big * k.m // gcd(big, k.m)
        support = self.ramification_support
        vals = [[k.f.valuation(v) for k in self.kummer] for v in support]
        for b in itertools.product(*(range(k.m) for k in self.kummer)):
            if not any(b):
                continue
            if all(
                sum(bi * (big // k.m) * a for bi, k, a in zip(b, self.kummer, row)) % big == 0 for row in vals
            ):
                raise NotGeometricallyConnected(
                    "Kummer functions are dependent modulo powers; the cover is not geometrically connected"
                )

    def group(self):
        return CoverGroup(self.orders)

    def describe(self):
        parts = [f"n0={self.constant_degree}"]
        parts += [f"({k.m}, {k.f.text()})" for k in self.kummer]
        return f"cover over F_{self.field.q}: " + ", ".join(parts)

    def to_json(self):
        return {
            "q": self.field.q,
            "constant_degree": self.constant_degree,
            "kummer": [{"m": k.m, "f": k.f.to_json()} for k in self.kummer],
        }


class CoverGroup:
    """Finite abelian group prod Z/orders[i]; elements are tuples."""

    def __init__(self, orders):
        self.orders = tuple(orders)

    def __eq__(self, other):
        return isinstance(other, CoverGroup) and self.orders == other.orders

    def __hash__(self):
        return hash(self.orders)

    @property
    def order(self):
        return prod(self.orders)

    def identity(self):
        return tuple(0 for _ in self.orders)

    def add(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def scale(self, a, k):
        return tuple((x * k) % n for x, n in zip(a, self.orders))

    def elements(self):
        return [tuple(e) for e in itertools.product(*(range(n) for n in self.orders))]

    def element_order(self, a):
        o = 1
        for x, n in zip(a, self.orders):
            c = n // gcd(x, n)
            o = o * c // gcd(o, c)
        return o

    def span(self, gens):
        seen = {self.identity()}
        frontier = [self.identity()]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.add(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(seen)

    def cyclic_subgroups(self):
        """Distinct cyclic subgroups, each with a chosen generator."""
        out = {}
        for g in self.elements():
            h = self.span([g])
            if h not in out:
                out[h] = g
        return [(g, h) for h, g in sorted(out.items(), key=lambda kv: (len(kv[0]), kv[1]))]


@dataclass(frozen=True)
class DecompositionData:
    """Local Galois data at a place; ``frobenius`` is the arithmetic Frobenius."""

    place: Place
    inertia_generator: tuple
    inertia: frozenset
    decomposition: frozenset
    frobenius: tuple

    @property
    def e(self):
        return len(self.inertia)

    @property
    def f(self):
        return len(self.decomposition) // len(self.inertia)

    def to_json(self):
        return {
            "place": self.place.to_json(),
            "degree": self.place.degree,
            "e": self.e,
            "f": self.f,
            "inertia_generator": list(self.inertia_generator),
            "frobenius": list(self.frobenius),
        }


def decomposition(cover: AbelianCover, v: Place) -> DecompositionData:
    field = cover.field
    grp = cover.group()
    inert = [0]
    frob = [v.degree % cover.constant_degree]
    for k in cover.kummer:
        a = k.f.valuation(v)
        inert.append(a % k.m)
        norm = k.f.unit_norm(v)
        frob.append(field.dlog[norm] % k.m)
    inert, frob = tuple(inert), tuple(frob)
    inertia = grp.span([inert])
    return DecompositionData(v, inert, inertia, grp.span([inert, frob]), frob)


def _residue_norms(field: Fq, m, d):
    """Res(P, m) for monic P of degree d > deg m, indexed by the residue of P mod m."""
    k = len(m) - 1
    base = field.p_sub([0] * d + [1], field.p_mod([0] * d + [1], m))
    out = np.empty(field.q**k, dtype=np.int64)
    for idx, r in enumerate(_digits(np.arange(field.q**k), field.q, k).tolist()):
        out[idx] = field.p_resultant(field.p_add(base, field.trim(r)), m)
    return out


def frobenius_counts(cover: AbelianCover, d: int) -> dict:
    """Number of degree-d places for each (inertia generator, Frobenius) pair."""
    field = cover.field
    polys = [poly for k in cover.kummer for poly in (k.f.num, k.f.den)]
    top = max((len(a) - 1 for a in polys), default=0)
    if d <= top or field.q**top > 100_000:
        counts = {}
        for v in places_of_degree(field, d):
            dd = decomposition(cover, v)
            key = (dd.inertia_generator, dd.frobenius)
            counts[key] = counts.get(key, 0) + 1
        return counts
    # every degree-d place is unramified; the Frobenius needs only P mod f
    rows = field.irreducible_array(d)
    dlog = np.array([-1] + field.dlog[1:], dtype=np.int64)
    code = np.zeros(len(rows), dtype=np.int64)
    for k in cover.kummer:
        logs = np.zeros(len(rows), dtype=np.int64)
        for poly, sgn in ((k.f.num, 1), (k.f.den, -1)):
            if len(poly) == 1:
                logs += sgn * d * field.dlog[poly[0]]  # Res(P, c) = c^d
                continue
            table = _residue_norms(field, poly, d)
            resid = field.reduce_rows(rows, poly)
            idx = np.zeros(len(rows), dtype=np.int64)
            for j in range(resid.shape[1] - 1, -1, -1):
                idx = idx * field.q + resid[:, j]
            logs += sgn * dlog[table[idx]]
        code = code * k.m + logs % k.m
    values, freq = np.unique(code, return_counts=True)
    inert = tuple(0 for _ in cover.orders)
    counts = {}
    for value, n in zip(values.tolist(), freq.tolist()):
        frob = []
        for k in reversed(cover.kummer):
            frob.append(value % k.m)
            value //= k.m
        key = (inert, (d % cover.constant_degree,) + tuple(reversed(frob)))
        counts[key] = n
    return counts


def genus_of_cover(cover: AbelianCover) -> int:
    """Genus of the cover via Riemann-Hurwitz over the geometric part of the group."""
    h = cover.geometric_order
    total = -2 * h
    for v in cover.ramified_places:
        e = decomposition(cover, v).e
        total += v.degree * (h // e) * (e - 1)
    if total % 2:
        raise AssertionError("Riemann-Hurwitz produced an odd degree")
    return total // 2 + 1


def constant_field_of_cover(cover: AbelianCover) -> int:
    """Degree over F_q of the exact constant field of the cover."""
    cover._check_independent()
    return cover.constant_degree
