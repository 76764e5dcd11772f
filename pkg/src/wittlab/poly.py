"""Dense univariate polynomials over any supported field, gcd and exact
factorization, plus the two derived ring constructions that need them:
rational function fields k(x) and simple extensions k[theta]/(g).

Factorization follows the classical pipeline: squarefree decomposition,
then distinct-degree / equal-degree splitting over finite fields
(Cantor-Zassenhaus with a seeded deterministic randomness source), or a
mod-p + Hensel lift + subset recombination over Q (degree <= 8 by
default).
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (
    DegreeBoundExceeded,
    InseparableExtension,
    NotAPthPowerError,
    NotAUnit,
    RingMismatch,
    UnsupportedField,
)
from .fields import El, FiniteField, PrimeField, QQ, Rationals, Ring, field_order

QQ_FACTOR_DEGREE_BOUND = 8


class Poly:
    """Dense polynomial over a field; coefficients indexed by degree."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Ring, coeffs: Sequence[El]):
        trimmed = list(coeffs)
        zero = field.zero()
        while trimmed and trimmed[-1] == zero:
            trimmed.pop()
        self.field = field
        self.coeffs = tuple(trimmed)

    @classmethod
    def from_ints(cls, field: Ring, ints: Sequence[int]) -> "Poly":
        return cls(field, [field.from_int(n) for n in ints])

    @classmethod
    def zero(cls, field: Ring) -> "Poly":
        return cls(field, [])

    @classmethod
    def one(cls, field: Ring) -> "Poly":
        return cls(field, [field.one()])

    @classmethod
    def x(cls, field: Ring) -> "Poly":
        return cls(field, [field.zero(), field.one()])

    @classmethod
    def constant(cls, c: El) -> "Poly":
        return cls(c.ring, [c])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def lead(self) -> El:
        if self.is_zero():
            return self.field.zero()
        return self.coeffs[-1]

    def coeff(self, i: int) -> El:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def is_monic(self) -> bool:
        return not self.is_zero() and self.lead().is_one()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.lead().inv()
        return Poly(self.field, [c * inv for c in self.coeffs])

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.field.key == other.field.key
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.key, tuple(hash(c) for c in self.coeffs)))

    def __add__(self, other: "Poly") -> "Poly":
        if isinstance(other, El):
            other = Poly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field,
                    [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        if isinstance(other, El):
            other = Poly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field,
                    [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self) -> "Poly":
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, El):
            return Poly(self.field, [c * other for c in self.coeffs])
        if isinstance(other, int):
            return Poly(self.field,
                        [c * self.field.from_int(other) for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        do = other.degree()
        rem = list(self.coeffs)
        if len(rem) - 1 < do:
            return Poly.zero(self.field), self
        zero = self.field.zero()
        q = [zero] * (len(rem) - do)
        inv_lead = other.lead().inv()
        for shift in range(len(rem) - 1 - do, -1, -1):
            c = rem[shift + do] * inv_lead
            if not c.is_zero():
                q[shift] = c
                for i in range(do + 1):
                    rem[shift + i] = rem[shift + i] - c * other.coeffs[i]
        return Poly(self.field, q), Poly(self.field, rem[:do])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.field, [self.field.zero()] * k + list(self.coeffs))

    def derivative(self) -> "Poly":
        return Poly(self.field,
                    [self.coeffs[i] * i for i in range(1, len(self.coeffs))])

    def evaluate(self, x: El) -> El:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def map_coeffs(self, fn, new_field: Optional[Ring] = None) -> "Poly":
        return Poly(new_field or self.field, [fn(c) for c in self.coeffs])

    def reverse(self) -> "Poly":
        """x^deg * f(1/x)."""
        return Poly(self.field, list(reversed(self.coeffs)))

    def compose_scale(self, a: El) -> "Poly":
        """f(a*x)."""
        out = []
        power = self.field.one()
        for c in self.coeffs:
            out.append(c * power)
            power = power * a
        return Poly(self.field, out)

    def render(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            cs = repr(c)
            wrapped = f"({cs})" if ("+" in cs or "-" in cs[1:] or "/" in cs
                                    or "*" in cs) else cs
            if i == 0:
                parts.append(wrapped)
            else:
                xpow = var if i == 1 else f"{var}^{i}"
                if wrapped == "1":
                    parts.append(xpow)
                elif wrapped == "-1":
                    parts.append(f"-{xpow}")
                else:
                    parts.append(f"{wrapped}*{xpow}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return self.render()


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    if f.field.key != g.field.key:
        raise RingMismatch("gcd over different fields")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def poly_xgcd(f: Poly, g: Poly) -> Tuple[Poly, Poly, Poly]:
    """(d, s, t) with s f + t g = d, d monic gcd."""
    field = f.field
    r0, r1 = f, g
    s0, s1 = Poly.one(field), Poly.zero(field)
    t0, t1 = Poly.zero(field), Poly.one(field)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = r0.lead().inv()
    return r0 * c, s0 * c, t0 * c


def _stable_seed(f: Poly, salt: int = 0) -> int:
    blob = repr((f.field.key, [repr(c) for c in f.coeffs], salt)).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


# ---------------------------------------------------------------------------
# squarefree decomposition
# ---------------------------------------------------------------------------

def squarefree_decomposition(f: Poly) -> List[Tuple[Poly, int]]:
    """Yun-style decomposition; returns [(g_i, i)] with f = lc * prod g_i^i.

    Handles the char-p collapse f' = 0 by taking p-th roots of the
    coefficients (possible over perfect coefficient fields).
    """
    field = f.field
    p = field.characteristic()
    f = f.monic()
    if f.degree() <= 0:
        return []
    out: List[Tuple[Poly, int]] = []

    def pth_root_poly(g: Poly) -> Poly:
        from .fields import pth_root as elt_pth_root
        coeffs = []
        for i in range(0, g.degree() + 1, p):
            coeffs.append(elt_pth_root(g.coeff(i)))
        return Poly(field, coeffs)

    def rec(g: Poly, mult: int):
        if g.degree() <= 0:
            return
        dg = g.derivative()
        if dg.is_zero():
            # g = h(x^p)
            rec(pth_root_poly(g), mult * p)
            return
        c = poly_gcd(g, dg)
        w = g // c
        i = 1
        while w.degree() > 0:
            y = poly_gcd(w, c)
            z = w // y
            if z.degree() > 0:
                _merge(out, z, i * mult)
            w = y
            c = c // y
            i += 1
        if c.degree() > 0:
            rec(c, mult * p if p else mult)

    def _merge(acc, g, m):
        for idx, (h, e) in enumerate(acc):
            if e == m:
                acc[idx] = (h * g, e)
                return
        acc.append((g, m))

    rec(f, 1)
    return out


# ---------------------------------------------------------------------------
# finite field factorization: distinct degree + Cantor-Zassenhaus
# ---------------------------------------------------------------------------

def _powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(base.field)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def _frobenius_power(h: Poly, q: int, mod: Poly) -> Poly:
    """h(x)^q mod `mod`."""
    return _powmod(h, q, mod)


def _distinct_degree(f: Poly) -> List[Tuple[Poly, int]]:
    """Split monic squarefree f into products of irreducibles of one degree."""
    q = field_order(f.field)
    out = []
    h = Poly.x(f.field)
    g = f
    d = 0
    while g.degree() > 0:
        d += 1
        if 2 * d > g.degree():
            out.append((g, g.degree()))
            break
        h = _frobenius_power(h, q, g)
        gd = poly_gcd(g, h - Poly.x(f.field))
        if gd.degree() > 0:
            out.append((gd, d))
            g = g // gd
            h = h % g
    return out


def _equal_degree_split(f: Poly, d: int, rng: random.Random) -> List[Poly]:
    """Cantor-Zassenhaus on a monic squarefree product of degree-d factors."""
    field = f.field
    q = field_order(field)
    n = f.degree()
    if n == d:
        return [f]
    while True:
        # deterministic random polynomial of degree < n
        if isinstance(field, PrimeField):
            a = Poly(field, [field.from_int(rng.randrange(q))
                             for _ in range(n)])
        else:
            a = Poly(field, [El(field, tuple(rng.randrange(field.p)
                                             for _ in range(field.d)))
                             for _ in range(n)])
        if a.degree() < 1:
            continue
        g = poly_gcd(f, a)
        if 0 < g.degree() < n:
            pass  # lucky split
        elif q % 2 == 1:
            b = _powmod(a, (q ** d - 1) // 2, f) - Poly.one(field)
            g = poly_gcd(f, b)
        else:
            # char 2: trace map sum_{i<d*k} a^(2^i), k = extension degree of field
            k = field.d if isinstance(field, FiniteField) else 1
            t = a
            acc = a
            for _ in range(d * k - 1):
                t = (t * t) % f
                acc = (acc + t) % f
            g = poly_gcd(f, acc)
        if 0 < g.degree() < n:
            return (_equal_degree_split(g, d, rng)
                    + _equal_degree_split(f // g, d, rng))


def _factor_finite(f: Poly) -> List[Tuple[Poly, int]]:
    out: List[Tuple[Poly, int]] = []
    for g, mult in squarefree_decomposition(f):
        rng = random.Random(_stable_seed(g, salt=0xC2))
        for prod, d in _distinct_degree(g.monic()):
            for irr in _equal_degree_split(prod, d, rng):
                out.append((irr.monic(), mult))
    return out


# ---------------------------------------------------------------------------
# rational factorization: mod-p lift and recombination
# ---------------------------------------------------------------------------

def _q_to_int_poly(f: Poly) -> Tuple[List[int], Fraction]:
    """Clear denominators: returns (primitive int coeff list, unit scale)."""
    from math import gcd as igcd

    den = 1
    for c in f.coeffs:
        den = den * c.data.denominator // igcd(den, c.data.denominator)
    ints = [int(c.data * den) for c in f.coeffs]
    content = 0
    for v in ints:
        content = igcd(content, abs(v))
    content = content or 1
    ints = [v // content for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
        scale = Fraction(-content, den)
    else:
        scale = Fraction(content, den)
    return ints, scale


def _pmul(a, b, mod):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai % mod:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % mod
    return out


def _padd(a, b, mod):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % mod
            for i in range(n)]


def _psub(a, b, mod):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % mod
            for i in range(n)]


def _ptrim(a, mod):
    a = [c % mod for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _hensel_lift_pair(f: List[int], g: List[int], h: List[int],
                      p: int, target: int) -> Tuple[List[int], List[int]]:
    """Lift f = g*h (mod p), g, h monic coprime, to mod `target` = p^k.

    Quadratic Hensel with Bezout-cofactor lifting (s*g + t*h = 1 carried
    along), following the classical algorithm.
    """
    fld = PrimeField(p)
    gp = Poly.from_ints(fld, g)
    hp = Poly.from_ints(fld, h)
    d, s, t = poly_xgcd(gp, hp)
    assert d.degree() == 0, "factors are not coprime mod p"
    dinv = d.coeff(0).inv()
    s_cur = [c.data for c in (s * dinv).coeffs]
    t_cur = [c.data for c in (t * dinv).coeffs]
    g_cur, h_cur = list(g), list(h)
    m = p
    while m < target:
        m2 = min(m * m, target * target)
        e = _psub(f, _pmul(g_cur, h_cur, m2), m2)
        q_, r_ = _int_poly_divmod(_pmul(s_cur, e, m2), h_cur, m2)
        g_cur = _ptrim(_padd(_padd(g_cur, _pmul(t_cur, e, m2), m2),
                             _pmul(q_, g_cur, m2), m2), m2)
        h_cur = _ptrim(_padd(h_cur, r_, m2), m2)
        b = _psub(_padd(_pmul(s_cur, g_cur, m2), _pmul(t_cur, h_cur, m2), m2),
                  [1], m2)
        c_, d_ = _int_poly_divmod(_pmul(s_cur, b, m2), h_cur, m2)
        s_cur = _ptrim(_psub(s_cur, d_, m2), m2)
        t_cur = _ptrim(_psub(_psub(t_cur, _pmul(t_cur, b, m2), m2),
                             _pmul(c_, g_cur, m2), m2), m2)
        m = m2
    return g_cur, h_cur


def _int_poly_divmod(a: List[int], b: List[int], mod: int):
    """Division mod `mod` with monic b."""
    a = [c % mod for c in a]
    b = [c % mod for c in b]
    while b and b[-1] == 0:
        b.pop()
    assert b and b[-1] == 1, "divisor must be monic"
    q = [0] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and any(r):
        while r and r[-1] % mod == 0:
            r.pop()
        if len(r) < len(b):
            break
        c = r[-1] % mod
        shift = len(r) - len(b)
        q[shift] = c
        for i in range(len(b)):
            r[shift + i] = (r[shift + i] - c * b[i]) % mod
        while r and r[-1] % mod == 0:
            r.pop()
    return q, r


def _factor_rationals(f: Poly, bound: int) -> List[Tuple[Poly, int]]:
    if f.degree() > bound:
        raise DegreeBoundExceeded(
            f"degree {f.degree()} exceeds configured bound {bound}")
    out: List[Tuple[Poly, int]] = []
    for g, mult in squarefree_decomposition(f):
        for irr in _factor_squarefree_q(g.monic()):
            out.append((irr, mult))
    return out


def _next_prime(p: int) -> int:
    from .fields import _is_prime
    p += 1
    while not _is_prime(p):
        p += 1
    return p


def _lift_to_symmetric(ints, mod):
    return [((c + mod // 2) % mod) - mod // 2 for c in ints]


def _factor_squarefree_q(f: Poly) -> List[Poly]:
    """Factor a monic squarefree rational polynomial into monic irreducibles.

    Zassenhaus: factor the primitive integer model mod a good prime,
    Hensel-lift past the Mignotte-style bound, recombine factor subsets.
    """
    if f.degree() <= 1:
        return [f] if f.degree() == 1 else []
    ints, _ = _q_to_int_poly(f)
    n = len(ints) - 1
    lc = ints[-1]
    p = 2
    while True:
        p = _next_prime(p)
        if lc % p == 0:
            continue
        fld = PrimeField(p)
        fp = Poly.from_ints(fld, ints).monic()
        if poly_gcd(fp, fp.derivative()).degree() == 0:
            break
    fld = PrimeField(p)
    fp = Poly.from_ints(fld, ints).monic()
    modular = [g for g, _ in _factor_finite(fp)]
    if len(modular) == 1:
        return [f]
    height = max(abs(c) for c in ints)
    bound = 2 ** n * height * abs(lc) * (n + 1)
    k = 1
    while p ** k <= 2 * bound:
        k += 1
    target = p ** k
    # lift the whole factorization by a factor tree: (g, product of rest)
    monic_ints = [(c * pow(lc, -1, target)) % target for c in ints]
    lifted: List[List[int]] = []

    def lift_tree(f_mod: List[int], factors: List[Poly]):
        if len(factors) == 1:
            lifted.append(f_mod)
            return
        half = factors[: len(factors) // 2]
        rest = factors[len(factors) // 2:]
        g_p = half[0]
        for extra in half[1:]:
            g_p = g_p * extra
        h_p = rest[0]
        for extra in rest[1:]:
            h_p = h_p * extra
        g_lift, h_lift = _hensel_lift_pair(
            f_mod, [c.data for c in g_p.coeffs],
            [c.data for c in h_p.coeffs], p, target)
        lift_tree(g_lift, half)
        lift_tree(h_lift, rest)

    lift_tree(monic_ints, modular)

    remaining = list(range(len(lifted)))
    current = f.monic()
    found: List[Poly] = []
    size = 1
    while remaining and size <= len(remaining):
        changed = True
        while changed and size <= len(remaining):
            changed = False
            import itertools as it
            for subset in it.combinations(remaining, size):
                prod = [lc]
                for i in subset:
                    prod = _pmul(prod, lifted[i], target)
                cand = _lift_to_symmetric(prod, target)
                g = Poly(QQ, [QQ.from_fraction(Fraction(c)) for c in cand])
                if g.degree() < 1:
                    continue
                q, r = current.divmod(g.monic())
                if r.is_zero():
                    found.append(g.monic())
                    current = q
                    remaining = [i for i in remaining if i not in subset]
                    changed = True
                    break
        size += 1
    if current.degree() > 0:
        found.append(current)
    found.sort(key=lambda h: (h.degree(), [repr(c) for c in h.coeffs]))
    return found


def poly_factor(f: Poly, degree_bound: int = QQ_FACTOR_DEGREE_BOUND
                ) -> List[Tuple[Poly, int]]:
    """Factor f into monic irreducibles with multiplicities.

    The returned factors times the leading unit re-multiply to f exactly.
    Deterministic output order: degree, then coefficient text.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    field = f.field
    if isinstance(field, (PrimeField, FiniteField)):
        out = _factor_finite(f)
    elif isinstance(field, Rationals):
        out = _factor_rationals(f, degree_bound)
    else:
        raise UnsupportedField(f"factorization over {field} is unsupported")
    out.sort(key=lambda pair: (pair[0].degree(),
                               [repr(c) for c in pair[0].coeffs]))
    return out


def is_irreducible(f: Poly) -> bool:
    if f.degree() <= 0:
        return False
    if f.degree() == 1:
        return True
    factors = poly_factor(f)
    return len(factors) == 1 and factors[0][1] == 1


# ---------------------------------------------------------------------------
# rational function fields
# ---------------------------------------------------------------------------

class RationalFunctionField(Ring):
    """k(x): fractions of polynomials over a constants field.

    Payload: (num_coeff_tuple, den_coeff_tuple) with the denominator monic
    and gcd(num, den) = 1.  Towers such as Q(x)(y) are supported by using a
    RationalFunctionField as the constants field.
    """

    def __init__(self, constants: Ring, var: str):
        if not constants.is_field():
            raise ValueError("constants must form a field")
        if var in constants.form_variables():
            raise ValueError(f"variable {var} already used in {constants}")
        self.constants = constants
        self.var = var
        self.key = ("RatFun", constants.key, var)

    def _make(self, num: Poly, den: Poly) -> El:
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return El(self, ((), (self.constants.one(),)))
        g = poly_gcd(num, den)
        if g.degree() > 0:
            num = num // g
            den = den // g
        c = den.lead().inv()
        num = num * c
        den = den * c
        return El(self, (num.coeffs, den.coeffs))

    def num(self, a: El) -> Poly:
        return Poly(self.constants, list(a.data[0]))

    def den(self, a: El) -> Poly:
        return Poly(self.constants, list(a.data[1]))

    def from_poly(self, p: Poly) -> El:
        return self._make(p, Poly.one(self.constants))

    def x(self) -> El:
        return self.from_poly(Poly.x(self.constants))

    def from_constant(self, c: El) -> El:
        if c.ring.key != self.constants.key:
            raise RingMismatch("not a constant of this function field")
        return self.from_poly(Poly.constant(c))

    def var_element(self, name: str) -> El:
        """The tower variable `name` as an element of this field."""
        if name == self.var:
            return self.x()
        if isinstance(self.constants, RationalFunctionField):
            return self.from_constant(self.constants.var_element(name))
        raise ValueError(f"{name} is not a variable of {self}")

    def zero(self):
        return El(self, ((), (self.constants.one(),)))

    def from_int(self, n):
        return self.from_poly(Poly.constant(self.constants.from_int(n)))

    def add(self, a, b):
        na, da = self.num(a), self.den(a)
        nb, db = self.num(b), self.den(b)
        return self._make(na * db + nb * da, da * db)

    def neg(self, a):
        return El(self, (tuple(-c for c in a.data[0]), a.data[1]))

    def mul(self, a, b):
        return self._make(self.num(a) * self.num(b), self.den(a) * self.den(b))

    def inv(self, a):
        if not a.data[0]:
            raise NotAUnit("0 is not invertible")
        return self._make(self.den(a), self.num(a))

    def is_unit(self, a):
        return bool(a.data[0])

    def characteristic(self):
        return self.constants.characteristic()

    def is_field(self):
        return True

    def render(self, a):
        num = self.num(a).render(self.var)
        if len(a.data[1]) == 1:  # denominator 1
            return num
        den = self.den(a).render(self.var)
        return f"({num})/({den})"

    def describe(self):
        return f"RatFun({self.constants.describe()}, {self.var})"

    def form_variables(self):
        return self.constants.form_variables() + (self.var,)

    def partial(self, a: El, var: str) -> El:
        """Partial derivative with respect to one tower variable."""
        num, den = self.num(a), self.den(a)
        if var == self.var:
            dn, dd = num.derivative(), den.derivative()
        elif var in self.constants.form_variables():
            part = self.constants.partial  # type: ignore[attr-defined]
            dn = num.map_coeffs(lambda c: part(c, var))
            dd = den.map_coeffs(lambda c: part(c, var))
        else:
            raise ValueError(f"{var} is not a variable of {self}")
        return self._make(dn * den - num * dd, den * den)

    def pth_root(self, a: El) -> El:
        """p-th root when a lies in k(x^p); otherwise NotAPthPowerError."""
        p = self.characteristic()
        if p == 0:
            raise NotAPthPowerError("characteristic 0")
        num, den = self.num(a), self.den(a)
        if a.is_zero():
            return a
        # a = num*den^(p-1) / den^p; den^p = D(x^p) by Frobenius
        top = num * den ** (p - 1)
        comps = _p_power_split(top, p)
        for i in range(1, p):
            if not comps[i].is_zero():
                raise NotAPthPowerError(f"{self.render(a)} is not a p-th power")
        return self._make(comps[0], den)


def _p_power_split(f: Poly, p: int) -> List[Poly]:
    """Write f = sum_i comps[i](x)^p * x^i for 0 <= i < p.

    Requires the coefficient field to be perfect of characteristic p
    (finite fields); the i-th component collects exponents = i mod p with
    p-th roots of the coefficients.
    """
    from .fields import pth_root as elt_pth_root

    field = f.field
    buckets: List[List[El]] = [[] for _ in range(p)]
    for e in range(f.degree() + 1):
        c = f.coeff(e)
        i = e % p
        k = e // p
        bucket = buckets[i]
        while len(bucket) <= k:
            bucket.append(field.zero())
        if not c.is_zero():
            bucket[k] = elt_pth_root(c)
    return [Poly(field, b) for b in buckets]


# ---------------------------------------------------------------------------
# simple extensions k[theta]/(g)
# ---------------------------------------------------------------------------

class SimpleExtension(Ring):
    """k[theta]/(g) for a monic irreducible g; payload: coefficient tuple."""

    def __init__(self, base: Ring, modulus: Poly, gen_name: str = "theta"):
        if modulus.field.key != base.key:
            raise RingMismatch("modulus not over the base field")
        if not modulus.is_monic():
            raise ValueError("modulus must be monic")
        self.base = base
        self.modulus = modulus
        self.gen_name = gen_name
        self.deg = modulus.degree()
        self.key = ("SimpleExt", base.key,
                    tuple(hash(c) for c in modulus.coeffs), gen_name)

    def zero(self):
        return El(self, (self.base.zero(),) * self.deg)

    def from_int(self, n):
        return El(self, (self.base.from_int(n),)
                  + (self.base.zero(),) * (self.deg - 1))

    def from_base(self, c: El) -> El:
        return El(self, (c,) + (self.base.zero(),) * (self.deg - 1))

    def gen(self) -> El:
        if self.deg == 1:
            return self.from_base(-self.modulus.coeff(0))
        return El(self, (self.base.zero(), self.base.one())
                  + (self.base.zero(),) * (self.deg - 2))

    def from_poly(self, p: Poly) -> El:
        r = p % self.modulus
        coeffs = [r.coeff(i) for i in range(self.deg)]
        return El(self, tuple(coeffs))

    def to_poly(self, a: El) -> Poly:
        return Poly(self.base, list(a.data))

    def add(self, a, b):
        return El(self, tuple(x + y for x, y in zip(a.data, b.data)))

    def neg(self, a):
        return El(self, tuple(-x for x in a.data))

    def mul(self, a, b):
        return self.from_poly(self.to_poly(a) * self.to_poly(b))

    def inv(self, a):
        pa = self.to_poly(a)
        if pa.is_zero():
            raise NotAUnit("0 is not invertible")
        d, s, _ = poly_xgcd(pa, self.modulus)
        if d.degree() != 0:
            raise NotAUnit(f"{a} is a zero divisor")
        return self.from_poly(s * d.coeff(0).inv())

    def is_unit(self, a):
        return any(not c.is_zero() for c in a.data)

    def characteristic(self):
        return self.base.characteristic()

    def is_field(self):
        return True  # modulus irreducible by construction contract

    def hash_data(self, data):
        return tuple(hash(c) for c in data)

    def render(self, a):
        return self.to_poly(a).render(self.gen_name)

    def describe(self):
        return (f"{self.base.describe()}[{self.gen_name}]/"
                f"({self.modulus.render(self.gen_name)})")

    def form_variables(self):
        return self.base.form_variables()

    def conjugates_via_frobenius(self, a: El) -> List[El]:
        """Galois conjugates for finite-field towers."""
        p = self.characteristic()
        if p == 0:
            raise UnsupportedField("Frobenius conjugates need char p")
        out = [a]
        cur = a
        for _ in range(self.deg - 1):
            cur = cur ** (_base_order(self.base))
            out.append(cur)
        return out


def _base_order(base: Ring) -> int:
    return field_order(base)


def is_separable(modulus: Poly) -> bool:
    return poly_gcd(modulus, modulus.derivative()).degree() == 0
