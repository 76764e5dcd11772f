"""Truncated big Witt vectors over an arbitrary coefficient ring.

The canonical coordinates of a vector are the (alpha_i) of the unit-series
factorization prod_i (1 - alpha_i t^i); with this convention the ghost
components w_n = sum_{d|n} d * alpha_d^(n/d) already form a ring
homomorphism, which the universal-ring tests certify.  Addition is series
multiplication; the product is the bilinear extension of the rule

    (1 - a t^m) * (1 - b t^n) = (1 - a^(n/r) b^(m/r) t^(mn/r))^r,

with r = gcd(m, n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (
    NonInvertibleInteger,
    NotAOneUnit,
    NotDivisorClosed,
    RingMismatch,
)
from .fields import El, Ring


@dataclass(frozen=True)
class TruncationSet:
    """A finite set of positive integers closed under taking divisors."""

    members: Tuple[int, ...]

    def __init__(self, members: Iterable[int]):
        ms = sorted(set(members))
        if not ms or ms[0] < 1:
            raise NotDivisorClosed("truncation set must contain positive integers")
        slots = set(ms)
        for n in ms:
            for d in range(1, n + 1):
                if n % d == 0 and d not in slots:
                    raise NotDivisorClosed(f"{d} divides {n} but is missing")
        object.__setattr__(self, "members", tuple(ms))

    @classmethod
    def full(cls, m: int) -> "TruncationSet":
        return cls(range(1, m + 1))

    @classmethod
    def p_typical(cls, p: int, r: int) -> "TruncationSet":
        return cls(p ** i for i in range(r + 1))

    def is_full(self) -> bool:
        return self.members == tuple(range(1, len(self.members) + 1))

    def max(self) -> int:
        return self.members[-1]

    def __contains__(self, n: int) -> bool:
        return n in self.members

    def __iter__(self):
        return iter(self.members)

    def subset_of(self, other: "TruncationSet") -> bool:
        return set(self.members) <= set(other.members)


class WittVector:
    """Element of W_S(R) in factorization coordinates."""

    __slots__ = ("ring", "trunc", "coords")

    def __init__(self, ring: Ring, trunc: TruncationSet,
                 coords: Dict[int, El]):
        self.ring = ring
        self.trunc = trunc
        zero = ring.zero()
        self.coords = {i: coords.get(i, zero) for i in trunc}

    @classmethod
    def from_coords(cls, ring: Ring, coords: Sequence[El]) -> "WittVector":
        trunc = TruncationSet.full(len(coords))
        return cls(ring, trunc, {i + 1: c for i, c in enumerate(coords)})

    @classmethod
    def zero(cls, ring: Ring, m: int) -> "WittVector":
        return cls(ring, TruncationSet.full(m), {})

    def coord(self, i: int) -> El:
        return self.coords[i]

    def coord_list(self) -> List[El]:
        return [self.coords[i] for i in self.trunc]

    @property
    def m(self) -> int:
        return self.trunc.max()

    def _check_compatible(self, other: "WittVector"):
        if self.ring.key != other.ring.key:
            raise RingMismatch("Witt vectors over different rings")
        if self.trunc != other.trunc:
            raise RingMismatch("Witt vectors with different truncations")

    def _require_full(self):
        if not self.trunc.is_full():
            raise NotDivisorClosed(
                "ring operations require a full truncation {1..m}")

    def __eq__(self, other):
        return (isinstance(other, WittVector)
                and self.ring.key == other.ring.key
                and self.trunc == other.trunc
                and all(self.coords[i] == other.coords[i] for i in self.trunc))

    def __hash__(self):
        return hash((self.ring.key, self.trunc.members,
                     tuple(hash(self.coords[i]) for i in self.trunc)))

    def __add__(self, other: "WittVector") -> "WittVector":
        self._check_compatible(other)
        self._require_full()
        return from_series(to_series(self) * to_series(other), self.ring)

    def __neg__(self) -> "WittVector":
        self._require_full()
        return from_series(_series_inverse(to_series(self)), self.ring)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scalar(other)
        return witt_mul(self, other)

    __rmul__ = __mul__

    def scalar(self, n: int) -> "WittVector":
        if n == 0:
            return WittVector.zero(self.ring, self.m)
        a = self if n > 0 else -self
        result = WittVector.zero(self.ring, self.m)
        for _ in range(abs(n)):
            result = result + a
        return result

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords.values())

    def __repr__(self):
        inner = ",".join(repr(self.coords[i]) for i in self.trunc)
        return f"W{{m={self.m}; [{inner}]}}"


@dataclass(frozen=True)
class GhostVector:
    ring: Ring
    trunc: TruncationSet
    values: Tuple[El, ...]

    def value(self, n: int) -> El:
        return self.values[self.trunc.members.index(n)]

    def __repr__(self):
        return "gh(" + ", ".join(repr(v) for v in self.values) + ")"


class _Series:
    """Power series mod t^(m+1) over an arbitrary ring (internal helper)."""

    __slots__ = ("ring", "m", "coeffs")

    def __init__(self, ring: Ring, m: int, coeffs: Sequence[El]):
        cs = list(coeffs)[: m + 1]
        zero = ring.zero()
        while len(cs) < m + 1:
            cs.append(zero)
        self.ring = ring
        self.m = m
        self.coeffs = cs

    def __mul__(self, other: "_Series") -> "_Series":
        zero = self.ring.zero()
        out = [zero] * (self.m + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(self.m + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return _Series(self.ring, self.m, out)

    def __eq__(self, other):
        return (isinstance(other, _Series) and self.m == other.m
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            cs = repr(c)
            if i == 0:
                parts.append(cs)
            else:
                t = "t" if i == 1 else f"t^{i}"
                if cs == "1":
                    parts.append(t)
                elif cs == "-1":
                    parts.append(f"-{t}")
                else:
                    wrapped = f"({cs})" if ("+" in cs or "-" in cs[1:]) else cs
                    parts.append(f"{wrapped}*{t}")
        return (" + ".join(parts) if parts else "0").replace("+ -", "- ")


def series(ring: Ring, m: int, coeffs: Sequence[El]) -> _Series:
    return _Series(ring, m, coeffs)


def _series_one_minus(ring: Ring, m: int, a: El, i: int) -> _Series:
    zero = ring.zero()
    cs = [zero] * (m + 1)
    cs[0] = ring.one()
    if i <= m:
        cs[i] = -a
    return _Series(ring, m, cs)


def _series_inverse(s: _Series) -> _Series:
    ring = s.ring
    if not s.coeffs[0].is_one():
        # general unit-series inverse only needed for 1-units here
        c0inv = s.coeffs[0].inv()
        scaled = _Series(ring, s.m, [c * c0inv for c in s.coeffs])
        inv = _series_inverse(scaled)
        return _Series(ring, s.m, [c * c0inv for c in inv.coeffs])
    out = [ring.one()]
    for n in range(1, s.m + 1):
        acc = ring.zero()
        for i in range(1, n + 1):
            acc = acc + s.coeffs[i] * out[n - i]
        out.append(-acc)
    return _Series(ring, s.m, out)


def to_series(w: WittVector) -> _Series:
    """prod (1 - alpha_i t^i) truncated mod t^(m+1)."""
    w._require_full()
    m = w.m
    acc = _Series(w.ring, m, [w.ring.one()])
    for i in w.trunc:
        a = w.coords[i]
        if not a.is_zero():
            acc = acc * _series_one_minus(w.ring, m, a, i)
    return acc


def from_series(u: _Series, ring: Optional[Ring] = None) -> WittVector:
    """Greedy factorization of a 1-unit series into Witt coordinates.

    alpha_i := -(coefficient of t^i in the residual), then the factor
    (1 - alpha_i t^i) is divided off; exact round trip with to_series.
    """
    ring = ring or u.ring
    if not u.coeffs[0].is_one():
        raise NotAOneUnit("series must be = 1 mod t")
    m = u.m
    coords: Dict[int, El] = {}
    residual = u
    for i in range(1, m + 1):
        a = -residual.coeffs[i]
        coords[i] = a
        if not a.is_zero():
            residual = residual * _series_inverse(
                _series_one_minus(ring, m, a, i))
    return WittVector(ring, TruncationSet.full(m), coords)


def witt_from_unit(u: El) -> WittVector:
    """Witt vector of a 1-unit of a truncated polynomial ring k_{m+1}."""
    from .truncated import TruncatedPolyRing

    ring = u.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("expected a truncated-ring element")
    if not ring.is_one_unit(u):
        raise NotAOneUnit("unit must be = 1 mod t")
    s = _Series(ring.base, ring.m, list(u.data))
    return from_series(s, ring.base)


def witt_to_unit(w: WittVector, trunc_ring) -> El:
    """Unit series of w inside the given k_{m+1}."""
    s = to_series(w)
    return trunc_ring.element(s.coeffs)


def teichmuller(a: El, m: int) -> WittVector:
    """[a]: the series 1 - a t, coordinates (a, 0, ..., 0)."""
    coords = {1: a}
    return WittVector(a.ring, TruncationSet.full(m), coords)


def ghost(w: WittVector) -> GhostVector:
    """w_n = sum_{d | n, d in S} d * alpha_d^(n/d)."""
    ring = w.ring
    values = []
    for n in w.trunc:
        acc = ring.zero()
        for d in w.trunc:
            if d > n:
                break
            if n % d == 0:
                acc = acc + (w.coords[d] ** (n // d)) * d
        values.append(acc)
    return GhostVector(ring, w.trunc, tuple(values))


def witt_add(x: WittVector, y: WittVector) -> WittVector:
    return x + y


def _star_generator(ring: Ring, m: int, a: El, i: int, b: El, j: int
                    ) -> _Series:
    """(1 - a t^i) * (1 - b t^j) as a series, by the gcd rule."""
    r = math.gcd(i, j)
    deg = i * j // r
    acc = _Series(ring, m, [ring.one()])
    if deg <= m:
        c = (a ** (j // r)) * (b ** (i // r))
        factor = _series_one_minus(ring, m, c, deg)
        for _ in range(r):
            acc = acc * factor
    return acc


def witt_mul(x: WittVector, y: WittVector) -> WittVector:
    """Bilinear extension of the generator rule over both factorizations."""
    x._check_compatible(y)
    x._require_full()
    ring = x.ring
    m = x.m
    acc = _Series(ring, m, [ring.one()])
    for i in x.trunc:
        a = x.coords[i]
        if a.is_zero():
            continue
        for j in y.trunc:
            if i * j // math.gcd(i, j) > m:
                continue
            b = y.coords[j]
            if b.is_zero():
                continue
            acc = acc * _star_generator(ring, m, a, i, b, j)
    return from_series(acc, ring)


def witt_one(ring: Ring, m: int) -> WittVector:
    return teichmuller(ring.one(), m)


def verschiebung(r: int, w: WittVector, target_m: Optional[int] = None
                 ) -> WittVector:
    """V_r: series action u(t) -> u(t^r); default target is {1..r*m}."""
    w._require_full()
    if target_m is None:
        target_m = r * w.m
    if target_m < r * w.m:
        # dropping coordinates is a restriction; do it explicitly afterwards
        raise NotDivisorClosed("target truncation must contain r * source")
    coords = {r * i: w.coords[i] for i in w.trunc}
    return WittVector(w.ring, TruncationSet.full(target_m), coords)


def frobenius(r: int, w: WittVector, target_m: Optional[int] = None
              ) -> WittVector:
    """F_r, computed on generators: F_r(1 - a t^s) = (1 - a^(r/g) t^(s/g))^g.

    Default target is floor(M / r) (the ghost-maximal choice); the
    Witt-complex indexing E_{rm+r-1} -> E_m is the special case
    M = r*m + r - 1.
    """
    w._require_full()
    M = w.m
    if target_m is None:
        target_m = M // r
    if target_m > M // r:
        raise NotDivisorClosed("Frobenius target too large for the source")
    if target_m == 0:
        raise NotDivisorClosed("Frobenius target is empty")
    ring = w.ring
    acc = _Series(ring, target_m, [ring.one()])
    for s in w.trunc:
        a = w.coords[s]
        if a.is_zero():
            continue
        g = math.gcd(r, s)
        deg = s // g
        if deg > target_m:
            continue
        c = a ** (r // g)
        factor = _series_one_minus(ring, target_m, c, deg)
        for _ in range(g):
            acc = acc * factor
    return from_series(acc, ring)


def restrict(w: WittVector, sub: TruncationSet) -> WittVector:
    """Coordinate projection onto a divisor-closed subset."""
    if not sub.subset_of(w.trunc):
        raise NotDivisorClosed("target truncation set is not contained")
    return WittVector(w.ring, sub, {i: w.coords[i] for i in sub})


def restriction(w: WittVector, m: int) -> WittVector:
    """The pro-system restriction to {1..m}."""
    return restrict(w, TruncationSet.full(m))


# ---------------------------------------------------------------------------
# formal Log / Exp (characteristic 0 or > m)
# ---------------------------------------------------------------------------

def _check_invertible_range(ring: Ring, m: int):
    p = ring.characteristic()
    if p and p <= m:
        raise NonInvertibleInteger(
            f"{p} = char is not invertible but {p} <= {m}")


def formal_log(u: _Series, classical: bool = False) -> _Series:
    """Log(1 + tg) = sum_i (1/i) (-tg)^i, exactly as printed.

    The printed series is the negative of the classical logarithm; pass
    classical=True to flip the sign.
    """
    ring = u.ring
    m = u.m
    if not u.coeffs[0].is_one():
        raise NotAOneUnit("Log needs a 1-unit")
    _check_invertible_range(ring, m)
    h = _Series(ring, m, [ring.zero()] + list(u.coeffs[1:]))  # tg
    zero = ring.zero()
    acc = _Series(ring, m, [zero])
    minus_h = _Series(ring, m, [-c for c in h.coeffs])
    power = _Series(ring, m, [ring.one()])
    for i in range(1, m + 1):
        power = power * minus_h
        inv_i = ring.from_int(i).inv()
        acc = _Series(ring, m,
                      [acc.coeffs[k] + power.coeffs[k] * inv_i
                       for k in range(m + 1)])
    if classical:
        acc = _Series(ring, m, [-c for c in acc.coeffs])
    return acc


def formal_exp(s: _Series, classical: bool = False) -> _Series:
    """Compositional inverse of formal_log mod t^(m+1)."""
    ring = s.ring
    m = s.m
    if not s.coeffs[0].is_zero():
        raise NotAOneUnit("Exp needs a series in t*R[t]")
    _check_invertible_range(ring, m)
    arg = s if classical else _Series(ring, m, [-c for c in s.coeffs])
    acc = _Series(ring, m, [ring.one()])
    power = _Series(ring, m, [ring.one()])
    fact = 1
    for j in range(1, m + 1):
        power = power * arg
        fact *= j
        inv_f = ring.from_int(fact).inv()
        acc = _Series(ring, m,
                      [acc.coeffs[k] + power.coeffs[k] * inv_f
                       for k in range(m + 1)])
    return acc
