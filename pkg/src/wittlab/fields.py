"""Exact base rings: Q, prime fields, finite fields, rational function
fields, simple extensions, and the integer polynomial rings used by the
ghost-map oracle.

Every ring is an immutable object implementing the small `Ring` protocol;
elements are `El` wrappers around plain payloads (Fraction, int, tuples,
dicts) so that all higher layers can use ordinary operators.  Elements are
always stored in canonical form: reduced fractions, reduced residues,
normalized numerator/denominator pairs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence, Tuple

from .errors import CharZero, NotAPthPowerError, NotAUnit, RingMismatch


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class El:
    """An element of a `Ring`, with operator overloading.

    Integers coerce on the fly, so `x + 1` and `3 * x` work everywhere.
    """

    __slots__ = ("ring", "data")

    def __init__(self, ring: "Ring", data: Any):
        self.ring = ring
        self.data = data

    def _coerce(self, other) -> "El":
        if isinstance(other, El):
            if other.ring.key != self.ring.key:
                raise RingMismatch(f"{other.ring} vs {self.ring}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, Fraction) and self.ring.characteristic() == 0:
            return self.ring.from_fraction(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.add(self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.add(self, self.ring.neg(o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.add(o, self.ring.neg(self))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.mul(self, self.ring.inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.mul(o, self.ring.inv(self))

    def __neg__(self):
        return self.ring.neg(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.ring.inv(self) ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = self.ring.mul(result, base)
            base = self.ring.mul(base, base)
            n >>= 1
        return result

    def inv(self) -> "El":
        return self.ring.inv(self)

    def is_zero(self) -> bool:
        return self.ring.eq(self, self.ring.zero())

    def is_one(self) -> bool:
        return self.ring.eq(self, self.ring.one())

    def is_unit(self) -> bool:
        return self.ring.is_unit(self)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, El):
            return NotImplemented
        if other.ring.key != self.ring.key:
            return False
        return self.ring.eq(self, other)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((self.ring.key, self.ring.hash_data(self.data)))

    def __repr__(self):
        return self.ring.render(self)


class Ring:
    """Abstract commutative ring with canonical element forms."""

    key: tuple

    def zero(self) -> El:
        raise NotImplementedError

    def one(self) -> El:
        return self.from_int(1)

    def from_int(self, n: int) -> El:
        raise NotImplementedError

    def from_fraction(self, q: Fraction) -> El:
        num = self.from_int(q.numerator)
        den = self.from_int(q.denominator)
        return num * den.inv()

    def add(self, a: El, b: El) -> El:
        raise NotImplementedError

    def neg(self, a: El) -> El:
        raise NotImplementedError

    def mul(self, a: El, b: El) -> El:
        raise NotImplementedError

    def inv(self, a: El) -> El:
        raise NotImplementedError

    def eq(self, a: El, b: El) -> bool:
        return a.data == b.data

    def is_unit(self, a: El) -> bool:
        raise NotImplementedError

    def characteristic(self) -> int:
        raise NotImplementedError

    def is_field(self) -> bool:
        return False

    def hash_data(self, data) -> Any:
        return data

    def render(self, a: El) -> str:
        raise NotImplementedError

    # Variables whose differentials generate the absolute Kahler forms of
    # this ring (transcendental generators through the tower).
    def form_variables(self) -> Tuple[str, ...]:
        return ()

    def __repr__(self):
        return self.describe()

    def describe(self) -> str:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


class Rationals(Ring):
    """The field Q with Fraction payloads."""

    def __init__(self):
        self.key = ("QQ",)

    def zero(self):
        return El(self, Fraction(0))

    def from_int(self, n):
        return El(self, Fraction(n))

    def from_fraction(self, q):
        return El(self, Fraction(q))

    def add(self, a, b):
        return El(self, a.data + b.data)

    def neg(self, a):
        return El(self, -a.data)

    def mul(self, a, b):
        return El(self, a.data * b.data)

    def inv(self, a):
        if a.data == 0:
            raise NotAUnit("0 is not invertible")
        return El(self, 1 / a.data)

    def is_unit(self, a):
        return a.data != 0

    def characteristic(self):
        return 0

    def is_field(self):
        return True

    def render(self, a):
        return str(a.data)

    def describe(self):
        return "QQ"


class PrimeField(Ring):
    """GF(p) with int payloads in [0, p)."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.key = ("GF", p)

    def zero(self):
        return El(self, 0)

    def from_int(self, n):
        return El(self, n % self.p)

    def add(self, a, b):
        return El(self, (a.data + b.data) % self.p)

    def neg(self, a):
        return El(self, (-a.data) % self.p)

    def mul(self, a, b):
        return El(self, (a.data * b.data) % self.p)

    def inv(self, a):
        if a.data == 0:
            raise NotAUnit("0 is not invertible")
        return El(self, pow(a.data, self.p - 2, self.p))

    def is_unit(self, a):
        return a.data != 0

    def characteristic(self):
        return self.p

    def is_field(self):
        return True

    def render(self, a):
        return str(a.data)

    def describe(self):
        return f"GF({self.p})"

    def elements(self):
        return [El(self, i) for i in range(self.p)]


def _gfp_poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _gfp_poly_mod(a, m, p):
    # m monic; returns a mod m as list of length < len(m)-1 padded
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        c = a[-1] % p
        if c:
            shift = len(a) - 1 - dm
            for i in range(dm):
                a[shift + i] = (a[shift + i] - c * m[i]) % p
        a.pop()
    while len(a) < dm:
        a.append(0)
    return a


def _gfp_irreducible(coeffs, p) -> bool:
    # coeffs: monic poly as list low->high over GF(p); Rabin test
    d = len(coeffs) - 1
    if d == 1:
        return True
    # x^(p^k) mod f by repeated squaring on polynomials
    def powmod_x(exp_p_power):
        # computes x^(p^exp_p_power) mod f via iterated Frobenius of x
        r = [0, 1] + [0] * (d - 2) if d >= 2 else [0]
        r = r[:d]
        for _ in range(exp_p_power):
            # raise r to the p-th power mod f
            acc = [1] + [0] * (d - 1)
            base = r
            e = p
            while e:
                if e & 1:
                    acc = _gfp_poly_mod(_gfp_poly_mul(acc, base, p), coeffs, p)
                base = _gfp_poly_mod(_gfp_poly_mul(base, base, p), coeffs, p)
                e >>= 1
            r = acc
        return r

    x = [0, 1] + [0] * max(0, d - 2)
    x = x[:d]
    # necessary: x^(p^d) == x mod f
    if powmod_x(d) != x:
        return False
    # for each prime divisor q of d: gcd(x^(p^(d/q)) - x, f) == 1
    dd = d
    prime_divs = []
    f = 2
    while f * f <= dd:
        if dd % f == 0:
            prime_divs.append(f)
            while dd % f == 0:
                dd //= f
        f += 1
    if dd > 1:
        prime_divs.append(dd)
    for q in prime_divs:
        r = powmod_x(d // q)
        diff = [(r[i] - x[i]) % p for i in range(d)]
        # gcd(diff, coeffs) over GF(p)
        a = [c % p for c in coeffs]
        b = list(diff)
        while any(b):
            while b and b[-1] % p == 0:
                b.pop()
            if not b:
                break
            # a mod b
            inv_lead = pow(b[-1], p - 2, p)
            a = list(a)
            while len(a) >= len(b) and any(a):
                while a and a[-1] % p == 0:
                    a.pop()
                if len(a) < len(b):
                    break
                c = (a[-1] * inv_lead) % p
                shift = len(a) - len(b)
                for i in range(len(b)):
                    a[shift + i] = (a[shift + i] - c * b[i]) % p
                while a and a[-1] % p == 0:
                    a.pop()
            a, b = b, a
        while a and a[-1] % p == 0:
            a.pop()
        if len(a) > 1:
            return False
    return True


_MODULUS_CACHE: dict = {}


def lexicographically_least_modulus(p: int, d: int) -> Tuple[int, ...]:
    """Least monic irreducible of degree d over GF(p), by coefficient order.

    Ordering: constant coefficient varies slowest... actually plain base-p
    counter on (c_0, ..., c_{d-1}), smallest integer vector first.  This is
    deterministic and reproducible across runs.
    """
    cache_key = (p, d)
    if cache_key in _MODULUS_CACHE:
        return _MODULUS_CACHE[cache_key]
    for counter in range(p ** d):
        coeffs = []
        c = counter
        for _ in range(d):
            coeffs.append(c % p)
            c //= p
        full = coeffs + [1]
        if _gfp_irreducible(full, p):
            result = tuple(full)
            _MODULUS_CACHE[cache_key] = result
            return result
    raise RuntimeError("no irreducible polynomial found (unreachable)")


class FiniteField(Ring):
    """GF(p, d) = GF(p)[theta]/(modulus), payloads are coefficient tuples.

    The modulus defaults to the lexicographically least monic irreducible
    of degree d, so the field is reproducible across runs.
    """

    def __init__(self, p: int, d: int, modulus: Optional[Sequence[int]] = None,
                 gen_name: str = "theta"):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if d < 1:
            raise ValueError("degree must be >= 1")
        self.p = p
        self.d = d
        if modulus is None:
            modulus = lexicographically_least_modulus(p, d)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree d")
        if not _gfp_irreducible(list(modulus), p):
            raise ValueError("modulus is not irreducible")
        self.modulus = modulus
        self.gen_name = gen_name
        self.key = ("GF", p, d, modulus)

    @property
    def q(self) -> int:
        return self.p ** self.d

    def zero(self):
        return El(self, (0,) * self.d)

    def from_int(self, n):
        return El(self, (n % self.p,) + (0,) * (self.d - 1))

    def gen(self) -> El:
        if self.d == 1:
            raise ValueError("prime field has no generator element")
        return El(self, (0, 1) + (0,) * (self.d - 2))

    def add(self, a, b):
        return El(self, tuple((x + y) % self.p for x, y in zip(a.data, b.data)))

    def neg(self, a):
        return El(self, tuple((-x) % self.p for x in a.data))

    def mul(self, a, b):
        prod = _gfp_poly_mul(list(a.data), list(b.data), self.p)
        return El(self, tuple(_gfp_poly_mod(prod, list(self.modulus), self.p)))

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit("0 is not invertible")
        # a^(q-2)
        return a ** (self.q - 2)

    def is_unit(self, a):
        return any(a.data)

    def characteristic(self):
        return self.p

    def is_field(self):
        return True

    def render(self, a):
        name = self.gen_name
        parts = []
        for i in range(self.d - 1, -1, -1):
            c = a.data[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(name if c == 1 else f"{c}*{name}")
            else:
                parts.append(f"{name}^{i}" if c == 1 else f"{c}*{name}^{i}")
        return " + ".join(parts) if parts else "0"

    def describe(self):
        return f"GF({self.p},{self.d})" if self.d > 1 else f"GF({self.p})"

    def elements(self):
        out = []
        for tup in itertools.product(range(self.p), repeat=self.d):
            out.append(El(self, tup))
        return out

    def frobenius(self, a: El) -> El:
        return a ** self.p


class UniversalRing(Ring):
    """Z[a_1, ..., a_v]: exact multivariate integer polynomials.

    Payload: dict mapping exponent tuples to nonzero int coefficients.
    Torsion-free, so ghost-map identities verified here certify the Witt
    ring laws over every coefficient ring.
    """

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        self.key = ("ZZpoly", self.names)

    def zero(self):
        return El(self, {})

    def from_int(self, n):
        return El(self, {(0,) * len(self.names): n} if n else {})

    def var(self, name: str) -> El:
        i = self.names.index(name)
        exp = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return El(self, {exp: 1})

    def gens(self):
        return [self.var(n) for n in self.names]

    def add(self, a, b):
        out = dict(a.data)
        for e, c in b.data.items():
            nc = out.get(e, 0) + c
            if nc:
                out[e] = nc
            else:
                out.pop(e, None)
        return El(self, out)

    def neg(self, a):
        return El(self, {e: -c for e, c in a.data.items()})

    def mul(self, a, b):
        out: dict = {}
        for e1, c1 in a.data.items():
            for e2, c2 in b.data.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                nc = out.get(e, 0) + c1 * c2
                if nc:
                    out[e] = nc
                else:
                    out.pop(e, None)
        return El(self, out)

    def inv(self, a):
        if a.data == {(0,) * len(self.names): 1}:
            return a
        if a.data == {(0,) * len(self.names): -1}:
            return a
        raise NotAUnit(f"{a} is not a unit of {self}")

    def is_unit(self, a):
        c = a.data.get((0,) * len(self.names), 0)
        return len(a.data) == 1 and c in (1, -1)

    def characteristic(self):
        return 0

    def hash_data(self, data):
        return tuple(sorted(data.items()))

    def render(self, a):
        if not a.data:
            return "0"
        parts = []
        for e, c in sorted(a.data.items()):
            vars_part = "*".join(
                (f"{n}^{k}" if k > 1 else n)
                for n, k in zip(self.names, e) if k
            )
            if not vars_part:
                parts.append(str(c))
            elif c == 1:
                parts.append(vars_part)
            elif c == -1:
                parts.append(f"-{vars_part}")
            else:
                parts.append(f"{c}*{vars_part}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def describe(self):
        return "Z[" + ",".join(self.names) + "]"


QQ = Rationals()


def GF(p: int, d: int = 1) -> Ring:
    """Finite field constructor; GF(p) is a PrimeField, GF(p,d) extended."""
    if d == 1:
        return PrimeField(p)
    return FiniteField(p, d)


def field_elements(field: Ring) -> list:
    """All elements of a finite field (enumeration order is canonical)."""
    if isinstance(field, (PrimeField, FiniteField)):
        return field.elements()
    raise ValueError(f"{field} is not a finite field")


def field_order(field: Ring) -> int:
    if isinstance(field, PrimeField):
        return field.p
    if isinstance(field, FiniteField):
        return field.q
    raise ValueError(f"{field} is not a finite field")


def pth_root(a: El) -> El:
    """The p-th root of a, when it exists.

    Over a finite field the Frobenius is bijective so the root always
    exists and is unique.  Over GF(q)(x) the element must lie in
    GF(q)(x^p); otherwise NotAPthPowerError is raised.  Characteristic 0
    is rejected.
    """
    ring = a.ring
    p = ring.characteristic()
    if p == 0:
        raise CharZero("p-th roots need positive characteristic")
    if isinstance(ring, PrimeField):
        return a  # x^p = x
    if isinstance(ring, FiniteField):
        # Frobenius inverse: a^(q/p)
        return a ** (ring.q // p)
    # rational function field: delegate to its own method
    from .poly import RationalFunctionField  # cycle-free at call time

    if isinstance(ring, RationalFunctionField):
        return ring.pth_root(a)
    raise NotAPthPowerError(f"p-th roots unsupported over {ring}")
