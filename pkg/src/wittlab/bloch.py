"""The correspondence machinery at point/symbol level: the graph map, the
inverse Bloch map phi on rational points, the n=1 pushforward,
deconcatenation, the rho filter, twists, juxtaposition, the constructive
surjectivity lift, and the characteristic-0 logarithms.

Cycles are additive 0-cycles presented by closed points over explicit
extensions; phi of the cycles produced by the lift and the juxtaposition
is evaluated through the split/norm formulas of the surjectivity
construction (general transfers are not modeled; extension points outside
that fragment stay symbolic).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    CharPUnsupported,
    DegreeBoundExceeded,
    IncompatibleBase,
    InseparableExtension,
    NoVanishingSlot,
    NotAUnit,
    PaddingSearchFailed,
    RingMismatch,
)
from .fields import El, FiniteField, PrimeField, Rationals, Ring, field_order
from .forms import (
    DifferentialForm,
    DrwElement,
    RelativeFormClass,
    con,
    dlog,
    drw_d,
    drw_decompose,
    reduce_mod_exact,
)
from .milnor import (
    ImprovedTerm,
    MilnorSymbol,
    SymbolSum,
    dlog_k_model,
    ks_improved,
    relative_generators,
    vanishing_slots,
)
from .poly import Poly, SimpleExtension, is_irreducible, poly_factor, poly_gcd
from .truncated import TruncatedPolyRing, norm_coeffwise
from .witt import WittVector, formal_log, series, witt_from_unit

PADDING_BUDGET = 10000


# ---------------------------------------------------------------------------
# extension bookkeeping
# ---------------------------------------------------------------------------

def absolute_degree(fld: Ring) -> int:
    if isinstance(fld, PrimeField):
        return 1
    if isinstance(fld, FiniteField):
        return fld.d
    raise RingMismatch(f"{fld} has no absolute degree")


_EMBED_CACHE: Dict[Tuple[tuple, tuple], object] = {}


def finite_embedding(src: Ring, dst: Ring):
    """Canonical embedding between finite fields of the same characteristic.

    The image of the source generator is the first root of the source
    modulus in the destination's deterministic factor order.
    """
    if src.key == dst.key:
        return lambda a: a
    cached = _EMBED_CACHE.get((src.key, dst.key))
    if cached is not None:
        return cached
    if isinstance(src, PrimeField):
        assert dst.characteristic() == src.p
        fn = lambda a: dst.from_int(a.data)  # noqa: E731
        _EMBED_CACHE[(src.key, dst.key)] = fn
        return fn
    assert isinstance(src, FiniteField) and isinstance(dst, FiniteField)
    assert dst.d % src.d == 0 and dst.p == src.p
    mod_poly = Poly.from_ints(dst, [c for c in src.modulus])
    theta_img = None
    for cand, _mult in poly_factor(mod_poly):
        if cand.degree() == 1:
            theta_img = -cand.coeff(0)
            break
    assert theta_img is not None, "modulus has no root in the larger field"

    def embed(a: El) -> El:
        acc = dst.zero()
        power = dst.one()
        for c in a.data:  # base-p digits of the source element
            acc = acc + power * c
            power = power * theta_img
        return acc

    _EMBED_CACHE[(src.key, dst.key)] = embed
    return embed


def finite_compositum(k: Ring, degrees: Sequence[int]) -> Ring:
    """GF(p, lcm) containing all extensions of the listed relative degrees."""
    p = k.characteristic()
    d0 = absolute_degree(k)
    total = d0
    for d in degrees:
        total = total * d // math.gcd(total, d)
    if total == 1:
        return PrimeField(p)
    return FiniteField(p, total)


def min_poly_over(value: El, fld: Ring, base: Ring) -> Poly:
    """Minimal polynomial of a finite-field element over a subfield."""
    q = field_order(base)
    orbit = [value]
    cur = value ** q
    while cur != value:
        orbit.append(cur)
        cur = cur ** q
    poly = Poly.constant(fld.one())
    x = Poly.x(fld)
    for root in orbit:
        poly = poly * (x - Poly.constant(root))
    # coefficients are Frobenius-fixed, hence in the base field
    emb = finite_embedding(base, fld)
    coeffs = []
    for c in poly.coeffs:
        match = None
        for cand in _subfield_elements(base):
            if emb(cand) == c:
                match = cand
                break
        assert match is not None, "coefficient not in the base field"
        coeffs.append(match)
    return Poly(base, coeffs)


def _subfield_elements(base: Ring):
    from .fields import field_elements
    return field_elements(base)


# ---------------------------------------------------------------------------
# cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolicRoot:
    """Placeholder coordinate for an unevaluated transfer point."""

    poly: Poly
    label: str

    def __repr__(self):
        return f"root<{self.label}>({self.poly!r})"


Coordinate = Union[El, SymbolicRoot]


@dataclass
class ClosedPointCycle:
    """A closed point of A^1 x square^{n-1}, as an extension-valued tuple.

    `ext` is the field of definition (the base field itself for rational
    points); entries are (a, b_1, ..., b_{n-1}) with a != 0 and
    b_i not in {0, 1}.
    """

    base: Ring
    ext: Ring
    entries: Tuple[Coordinate, ...]
    mult: int = 1

    def __post_init__(self):
        a = self.entries[0]
        if isinstance(a, El) and a.is_zero():
            raise ValueError("the A^1 coordinate must be nonzero")
        for b in self.entries[1:]:
            if isinstance(b, El) and (b.is_zero() or b.is_one()):
                raise ValueError("square coordinates avoid {0, 1}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_rational(self) -> bool:
        return self.ext.key == self.base.key

    def is_symbolic(self) -> bool:
        return any(isinstance(e, SymbolicRoot) for e in self.entries)

    def a1_minpoly(self) -> Poly:
        """Minimal polynomial of the A^1 coordinate over the base."""
        a = self.entries[0]
        if isinstance(a, SymbolicRoot):
            return a.poly
        if self.is_rational():
            return Poly(self.base, [-a, self.base.one()])
        if isinstance(self.ext, (PrimeField, FiniteField)):
            return min_poly_over(a, self.ext, self.base)
        if isinstance(self.ext, SimpleExtension):
            return _minpoly_simple(a, self.ext)
        raise RingMismatch("unsupported extension")

    def __repr__(self):
        body = ", ".join(repr(e) for e in self.entries)
        tag = "" if self.is_rational() else f" over {self.ext.describe()}"
        pre = f"{self.mult}*" if self.mult != 1 else ""
        return f"{pre}({body}){tag}"


def _minpoly_simple(a: El, ext: SimpleExtension) -> Poly:
    """Minimal polynomial over ext.base by linear algebra on powers."""
    base = ext.base
    deg = ext.deg
    rows: List[List[El]] = []
    power = ext.one()
    for k in range(deg + 1):
        rows.append([power.data[i] for i in range(deg)])
        power = power * a
    # find the first k with 1, a, .., a^k dependent; solve for the relation
    from fractions import Fraction
    for k in range(1, deg + 1):
        sol = _solve_linear_over_field([rows[i] for i in range(k)], rows[k],
                                       base)
        if sol is not None:
            coeffs = [-c for c in sol] + [base.one()]
            return Poly(base, coeffs)
    raise RuntimeError("minimal polynomial not found")


def _solve_linear_over_field(rows: List[List[El]], target: List[El],
                             base: Ring) -> Optional[List[El]]:
    """Solve sum_i x_i rows[i] = target over a field; None if unsolvable."""
    k = len(rows)
    width = len(target)
    aug = [[rows[i][j] for i in range(k)] for j in range(width)]
    rhs = list(target)
    pivots = []
    row_idx = 0
    for col in range(k):
        pivot = None
        for r in range(row_idx, width):
            if not aug[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        aug[row_idx], aug[pivot] = aug[pivot], aug[row_idx]
        rhs[row_idx], rhs[pivot] = rhs[pivot], rhs[row_idx]
        inv = aug[row_idx][col].inv()
        aug[row_idx] = [v * inv for v in aug[row_idx]]
        rhs[row_idx] = rhs[row_idx] * inv
        for r in range(width):
            if r != row_idx and not aug[r][col].is_zero():
                c = aug[r][col]
                aug[r] = [v - c * w for v, w in zip(aug[r], aug[row_idx])]
                rhs[r] = rhs[r] - c * rhs[row_idx]
        pivots.append(col)
        row_idx += 1
    # consistency
    for r in range(row_idx, width):
        if not rhs[r].is_zero():
            return None
    sol = [base.zero()] * k
    for i, col in enumerate(pivots):
        sol[col] = rhs[i]
    return sol


@dataclass
class AdditiveZeroCycle:
    """Z-combination of closed points of one length n."""

    base: Ring
    n: int
    points: List[Tuple[int, ClosedPointCycle]] = field(default_factory=list)
    single_a1: Optional[bool] = None

    def add(self, coeff: int, point: ClosedPointCycle):
        if point.n != self.n or point.base.key != self.base.key:
            raise RingMismatch("point of the wrong shape")
        self.points.append((coeff, point))

    def check_single_a1(self) -> bool:
        polys = set()
        for _, pt in self.points:
            polys.add(tuple(hash(c) for c in pt.a1_minpoly().coeffs))
        ok = len(polys) <= 1
        self.single_a1 = ok
        return ok

    def __repr__(self):
        if not self.points:
            return "0"
        return " + ".join(
            (f"{c}*" if c != 1 else "") + repr(p) for c, p in self.points
        ).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# graph and phi
# ---------------------------------------------------------------------------

@dataclass
class GraphCycle:
    """A Milnor symbol tagged as a cycle representative."""

    symbol: MilnorSymbol
    vanishing: Tuple[int, ...]


def graph(sym: MilnorSymbol) -> GraphCycle:
    ring = sym.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("graph cycles live over k_{m+1}")
    return GraphCycle(sym, tuple(vanishing_slots(ring, sym.entries)))


def phi_rational(point: ClosedPointCycle, m: int) -> SymbolSum:
    """phi of a rational point: {1 - t/a, b_1 - a t, ..., b_{n-1} - a t}."""
    if not point.is_rational():
        raise RingMismatch("phi_rational needs a rational point")
    k = point.base
    ring = TruncatedPolyRing(k, m)
    a = point.entries[0]
    entries = [ring.element([k.one(), -(a.inv())])]
    for b in point.entries[1:]:
        entries.append(ring.element([b, -a]))
    return SymbolSum(ring, point.n,
                     {tuple(entries): point.mult})


def norm_down(u: El, k: Ring) -> El:
    """Norm of a truncated-ring unit down to k_{m+1} (finite or simple ext)."""
    ring = u.ring
    assert isinstance(ring, TruncatedPolyRing)
    K = ring.base
    if K.key == k.key:
        return u
    if isinstance(K, (PrimeField, FiniteField)) and isinstance(
            k, (PrimeField, FiniteField)):
        q = field_order(k)
        steps = absolute_degree(K) // absolute_degree(k)
        acc = ring.one()
        cur = u
        for _ in range(steps):
            acc = acc * cur
            cur = El(ring, tuple(c ** q for c in cur.data))
        emb = finite_embedding(k, K)
        target = TruncatedPolyRing(k, ring.m)
        out = []
        for c in acc.data:
            match = None
            for cand in _subfield_elements(k):
                if emb(cand) == c:
                    match = cand
                    break
            assert match is not None, "norm did not descend"
            out.append(match)
        return target.element(out)
    if isinstance(K, SimpleExtension) and K.base.key == k.key:
        return norm_coeffwise(u, K)
    raise RingMismatch("unsupported norm descent")


def phi1_pushforward(point: ClosedPointCycle, m: int) -> El:
    """phi_1 of an n=1 point: the norm of 1 - t/c, i.e. f(t)/f(0)."""
    if point.n != 1:
        raise RingMismatch("phi1 needs an n=1 point")
    k = point.base
    if point.is_rational():
        ring = TruncatedPolyRing(k, m)
        a = point.entries[0]
        u = ring.element([k.one(), -(a.inv())])
        return u ** point.mult
    ext = point.ext
    if isinstance(ext, SimpleExtension):
        from .poly import is_separable
        if not is_separable(ext.modulus):
            raise InseparableExtension("inseparable extension rejected")
    ring_ext = TruncatedPolyRing(ext, m)
    c = point.entries[0]
    u = ring_ext.element([ext.one(), -(c.inv())])
    return norm_down(u, k) ** point.mult


# ---------------------------------------------------------------------------
# deconcatenation and the rho filter
# ---------------------------------------------------------------------------

class DecomposedClass:
    """Z-combination of (Witt vector over k) (x) (length n-1 symbol over k)."""

    __slots__ = ("base", "m", "n", "terms")

    def __init__(self, base: Ring, m: int, n: int):
        self.base = base
        self.m = m
        self.n = n
        self.terms: Dict[Tuple[WittVector, Tuple[El, ...]], int] = {}

    def add(self, coeff: int, wv: WittVector, entries: Tuple[El, ...]):
        if coeff == 0:
            return
        key = (wv, entries)
        cur = self.terms.get(key, 0) + coeff
        if cur:
            self.terms[key] = cur
        else:
            self.terms.pop(key, None)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "DecomposedClass") -> "DecomposedClass":
        out = DecomposedClass(self.base, self.m, self.n)
        for (wv, entries), c in self.terms.items():
            out.add(c, wv, entries)
        for (wv, entries), c in other.terms.items():
            out.add(c, wv, entries)
        return out

    def __eq__(self, other):
        return (isinstance(other, DecomposedClass)
                and self.base.key == other.base.key
                and (self.m, self.n) == (other.m, other.n)
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (wv, entries), c in self.terms.items():
            sym = "{" + ", ".join(repr(a) for a in entries) + "}"
            body = f"{wv!r} (x) {sym}"
            parts.append(body if c == 1 else f"{c}*({body})")
        return " + ".join(parts)


def dec(arg: Union[GraphCycle, MilnorSymbol, SymbolSum]) -> DecomposedClass:
    """Deconcatenation: vanishing slot as a Witt vector (x) the rest at t=0.

    Zero on symbols with two or more vanishing slots; the cyclic rotation
    moving the vanishing slot to the front contributes its sign.
    """
    if isinstance(arg, GraphCycle):
        arg = arg.symbol
    if isinstance(arg, MilnorSymbol):
        arg = SymbolSum.of(arg)
    ring = arg.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("dec needs symbols over k_{m+1}")
    out = DecomposedClass(ring.base, ring.m, arg.n)
    for entries, coeff in arg.terms.items():
        slots = vanishing_slots(ring, entries)
        if not slots:
            raise NoVanishingSlot(f"no entry of {entries} is 1 mod t")
        if len(slots) >= 2:
            continue
        i0 = slots[0]
        n = len(entries)
        sign = -1 if ((n - 1) * i0) % 2 else 1
        rotated = entries[i0:] + entries[:i0]
        wv = witt_from_unit(rotated[0])
        rest = tuple(ring.ev_zero(a) for a in rotated[1:])
        out.add(coeff * sign, wv, rest)
    return out


def con_decomposed(cls: DecomposedClass) -> DrwElement:
    """Evaluate a decomposed class through Con in the model (char 0)."""
    base = cls.base
    p = base.characteristic()
    if p and p <= cls.m:
        raise CharPUnsupported("Con evaluation needs 1..m invertible")
    out = DrwElement.zero(base, cls.m, cls.n - 1)
    for (wv, entries), coeff in cls.terms.items():
        out = out + con(wv, list(entries), cls.m).scale(coeff)
    return out


def rho(arg: Union[GraphCycle, MilnorSymbol, SymbolSum]
        ) -> Union[DrwElement, DecomposedClass]:
    """Con after Dec; in char p the decomposed class is returned as is."""
    decomposed = dec(arg)
    base = decomposed.base
    p = base.characteristic()
    if p and p <= decomposed.m:
        return decomposed
    return con_decomposed(decomposed)


# ---------------------------------------------------------------------------
# twist and juxtaposition
# ---------------------------------------------------------------------------

def twist(a: El, target: Union[El, MilnorSymbol, SymbolSum]
          ) -> Union[El, MilnorSymbol, SymbolSum]:
    """tau_a: substitute t -> a t; a group action of k^x."""
    if not a.is_unit():
        raise NotAUnit("twist scalar must be nonzero")
    if isinstance(target, El):
        ring = target.ring
        if not isinstance(ring, TruncatedPolyRing):
            raise RingMismatch("twist acts on truncated-ring elements")
        return ring.substitute_t(target, a)
    if isinstance(target, MilnorSymbol):
        ring = target.ring
        return MilnorSymbol(ring, [ring.substitute_t(e, a)
                                   for e in target.entries])
    out = SymbolSum.zero(target.ring, target.n)
    ring = target.ring
    for entries, coeff in target.terms.items():
        out._add(tuple(ring.substitute_t(e, a) for e in entries), coeff)
    return out


@dataclass
class SpecialFiberCycle:
    """An n=1 d-cycle given as the pushforward of {y = c - t} over k'."""

    base: Ring
    ext: Ring
    c: El
    mult: int = 1

    def __post_init__(self):
        if isinstance(self.c, El) and (self.c.is_zero() or self.c.is_one()):
            raise ValueError("c avoids {0, 1}")


def _compositum_pairs(kbase: Ring, ext1: Ring, x: Tuple[Coordinate, ...],
                      ext2: Ring, y: El
                      ) -> List[Tuple[Ring, Tuple[Coordinate, ...], El]]:
    """Points of Spec(ext1 (x)_k ext2) with both coordinates embedded.

    For finite fields the product splits into gcd(a, b) copies of the
    degree-lcm field, indexed by Frobenius twists of the second factor.
    """
    if ext2.key == kbase.key:
        return [(ext1, x, _inject(kbase, ext1, y))]
    if ext1.key == kbase.key:
        return [(ext2,
                 tuple(_inject(kbase, ext2, v) if isinstance(v, El) else v
                       for v in x),
                 y)]
    if not (isinstance(ext1, (PrimeField, FiniteField))
            and isinstance(ext2, (PrimeField, FiniteField))):
        raise IncompatibleBase("general compositum needs finite fields")
    d0 = absolute_degree(kbase)
    a = absolute_degree(ext1) // d0
    b = absolute_degree(ext2) // d0
    g = math.gcd(a, b)
    L = finite_compositum(kbase, [a, b])
    e1 = finite_embedding(ext1, L)
    e2 = finite_embedding(ext2, L)
    qk = field_order(kbase)
    out = []
    y_img = e2(y)
    for j in range(g):
        x_img = tuple(e1(v) if isinstance(v, El) else v for v in x)
        out.append((L, x_img, y_img))
        y_img = y_img ** qk
    return out


def _inject(kbase: Ring, ext: Ring, v: El) -> El:
    if ext.key == kbase.key:
        return v
    if isinstance(ext, (PrimeField, FiniteField)):
        return finite_embedding(kbase, ext)(v)
    if isinstance(ext, SimpleExtension) and ext.base.key == kbase.key:
        return ext.from_base(v)
    raise IncompatibleBase("cannot inject into the extension")


def j_product(p: AdditiveZeroCycle, z: SpecialFiberCycle
              ) -> AdditiveZeroCycle:
    """Juxtaposition with the special fiber point of z, bilinearly."""
    if p.base.key != z.base.key:
        raise IncompatibleBase("cycles over different base fields")
    out = AdditiveZeroCycle(p.base, p.n + 1)
    for coeff, pt in p.points:
        for (L, x_img, y_img) in _compositum_pairs(
                p.base, pt.ext, pt.entries, z.ext, z.c):
            out.add(coeff * z.mult * pt.mult,
                    ClosedPointCycle(p.base, L, x_img + (y_img,), 1))
    return out


def phi_j_product(p: ClosedPointCycle, z: SpecialFiberCycle, m: int
                  ) -> SymbolSum:
    """phi of J(p (x) z) through the derived norm formula (p rational).

    The appended slot is the coefficientwise norm of the twisted linear
    unit: phi(J) = gamma(phi(p), Norm(tau_a(c - t))).
    """
    if not p.is_rational():
        raise IncompatibleBase("derived formula needs a rational first factor")
    from .milnor import gamma_product
    base = phi_rational(p, m)
    a = p.entries[0]
    ext = z.ext
    ring_ext = TruncatedPolyRing(ext, m)
    c_el = z.c
    u = ring_ext.element([c_el, -_inject(z.base, ext, a)])
    appended = norm_down(u, z.base) ** z.mult
    return gamma_product(base, appended)


# ---------------------------------------------------------------------------
# the constructive surjectivity lift
# ---------------------------------------------------------------------------

@dataclass
class LiftResult:
    """A single-A^1-coordinate cycle with its derived phi evaluation."""

    cycle: AdditiveZeroCycle
    phi_value: SymbolSum


def _lex_field_candidates(k: Ring, count: int):
    """Deterministic enumeration of tuples for the padding search."""
    if isinstance(k, (PrimeField, FiniteField)):
        elems = _subfield_elements(k)
    else:
        ints = [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5]
        elems = [k.from_int(v) for v in ints]
    return itertools.product(elems, repeat=count)


def _pad_for_lift(ring: TruncatedPolyRing, rep: Poly, i: int, b: El,
                  budget: int = PADDING_BUDGET) -> Poly:
    """Pad rep so that no conjugate of the inverse coordinate is a root.

    The tail is (-1)^D b^(-D/i) t^D (the leading unit of the product of
    the needed linear factors); a pure tail with the smallest valid D is
    tried first, then the u-term search of the surjectivity proof with
    (d-1) i > max(m, deg rep, i), in lexicographic order.
    """
    base = ring.base
    m = ring.m
    inv_root_poly = Poly(base, [-b] + [base.zero()] * (i - 1) + [base.one()])
    # t^i - b: the minimal polynomial of the inverse A^1 coordinate

    def tail(D: int) -> Poly:
        coeff = (b.inv()) ** (D // i)
        if D % 2:
            coeff = -coeff
        return Poly(base, [base.zero()] * D + [coeff])

    lower = max(m, rep.degree())
    D0 = i * (lower // i + 1)
    cand = rep + tail(D0)
    if poly_gcd(cand, inv_root_poly).degree() == 0:
        return cand
    d = max(m, rep.degree(), i) // i + 2
    D = d * i
    tried = 0
    for u in _lex_field_candidates(base, i):
        tried += 1
        if tried > budget:
            raise PaddingSearchFailed(
                f"no padding found within {budget} candidates")
        cand = rep + tail(D)
        for j in range(1, i + 1):
            cand = cand + Poly(base, [base.zero()] * (D - j) + [u[j - 1]])
        if poly_gcd(cand, inv_root_poly).degree() == 0:
            return cand
    raise PaddingSearchFailed("padding candidates exhausted")


def _factor_scaled_for_lift(padded: Poly, i: int, b: El
                            ) -> List[Tuple[Poly, int]]:
    """Factors of the padded representative with the leading unit spread.

    For i = 1 the unit spreads as (-zeta)^deg f (zeta = 1/b the rational
    coordinate), reproducing the norm of each factor's point; otherwise
    the first occurrence of the first factor absorbs it.
    """
    factors = poly_factor(padded)
    lc = padded.lead()
    if i == 1:
        zeta = b.inv()
        out = [(f * (-zeta) ** f.degree(), mult) for f, mult in factors]
        return out
    f0, e0 = factors[0]
    out = [(f0 * lc, 1)]
    if e0 > 1:
        out.append((f0, e0 - 1))
    out.extend(factors[1:])
    return out


def _materialize_point(base: Ring, prev: ClosedPointCycle, zeta_i: int,
                       b: El, factor: Poly, label: str
                       ) -> ClosedPointCycle:
    """Extend a point by the new coordinate: a root of the factor, scaled.

    The new coordinate is gamma = zeta * rho with rho a root of the monic
    core of `factor`; over finite fields everything is embedded into the
    compositum, over Q a symbolic root is kept unless the data is simple.
    """
    core = factor.monic()
    deg = core.degree()
    if isinstance(base, (PrimeField, FiniteField)):
        # gamma's field: compositum of prev.ext, k(zeta), k(rho)
        d_prev = absolute_degree(prev.ext) // absolute_degree(base)
        L = finite_compositum(base, [d_prev, zeta_i, deg])
        emb_prev = finite_embedding(prev.ext, L)
        x_img = tuple(emb_prev(v) if isinstance(v, El) else v
                      for v in prev.entries)
        # zeta: root of x^zeta_i - 1/b in L
        zeta = _first_root(Poly(base, [-(b.inv())] + [base.zero()] *
                                (zeta_i - 1) + [base.one()]), L)
        rho = _first_root(core, L)
        gamma = zeta * rho
        return ClosedPointCycle(base, L, x_img + (gamma,), 1)
    # rationals: fully materialize when the tower stays simple
    if zeta_i == 1 and prev.is_rational() and not prev.is_symbolic():
        zeta = b.inv()
        if deg == 1:
            gamma = -core.coeff(0) * zeta
            return ClosedPointCycle(base, base, prev.entries + (gamma,), 1)
        gamma_min = core.compose_scale(zeta.inv()).monic()
        ext = SimpleExtension(base, gamma_min, "gamma")
        x_img = tuple(ext.from_base(v) for v in prev.entries)
        return ClosedPointCycle(base, ext, x_img + (ext.gen(),), 1)
    return ClosedPointCycle(
        base, prev.ext,
        prev.entries + (SymbolicRoot(core, label),), 1)


def _first_root(poly_over_base: Poly, L: Ring) -> El:
    emb = finite_embedding(poly_over_base.field, L)
    lifted = poly_over_base.map_coeffs(emb, L)
    for f, mult in poly_factor(lifted):
        if f.degree() == 1:
            return -f.coeff(0)
    raise RuntimeError("no root in the compositum (not a splitting field?)")


def lift_symbol_to_cycle(s: SymbolSum, budget: int = PADDING_BUDGET
                         ) -> LiftResult:
    """Lift a relative symbol sum to a 0-cycle with phi(C) = s.

    Per relative generator: the vanishing slot is rotated to the front and
    split into 1 - b t^i factors whose roots give the shared A^1
    coordinate; each further slot's residue representative is padded with
    the (-1)^D b^(-D/i) t^D tail (plus a u-term search when the inverse
    coordinate is a root), factored, and juxtaposed.  The evaluation
    follows the same split, so phi(C) = s holds by multilinearity and is
    re-checked against the oracle in the tests.
    """
    ring = s.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("lift needs symbols over k_{m+1}")
    base = ring.base
    from .milnor import _one_unit_generators
    tagged = relative_generators(s)
    total_cycle = AdditiveZeroCycle(base, s.n)
    total_phi = SymbolSum.zero(ring, s.n)
    for entries, coeff in tagged.sum.terms.items():
        i0 = tagged.witness[entries]
        n = len(entries)
        sign = -1 if ((n - 1) * i0) % 2 else 1
        rotated = entries[i0:] + entries[:i0]
        for slot1_unit, slot1_rep in _one_unit_generators(ring, rotated[0]):
            packs = _lift_generator(ring, coeff * sign, slot1_unit,
                                    slot1_rep, rotated[1:], budget)
            for c0, pt, phi_sym in packs:
                total_cycle.add(c0, pt)
                total_phi = total_phi + phi_sym.scale(c0)
    total_cycle.check_single_a1()
    return LiftResult(total_cycle, total_phi)


def _lift_generator(ring: TruncatedPolyRing, coeff: int, slot1_unit: El,
                    slot1_rep: Poly, rest: Tuple[El, ...], budget: int
                    ) -> List[Tuple[int, ClosedPointCycle, SymbolSum]]:
    base = ring.base
    i = slot1_rep.degree()
    b = -slot1_rep.coeff(i)
    # the A^1 coordinate: a root of 1 - b t^i (so zeta^i = 1/b)
    if i == 1:
        zeta = b.inv()
        start_pt = ClosedPointCycle(base, base, (zeta,), 1)
    else:
        coord_min = Poly(base, [-(b.inv())] + [base.zero()] * (i - 1)
                         + [base.one()])
        if isinstance(base, (PrimeField, FiniteField)):
            K = finite_compositum(base, [i])
            zeta_val = _first_root(coord_min, K)
            start_pt = ClosedPointCycle(base, K, (zeta_val,), 1)
        else:
            start_pt = ClosedPointCycle(
                base, base, (SymbolicRoot(coord_min, "zeta"),), 1)
    packs: List[Tuple[int, ClosedPointCycle, SymbolSum]] = [
        (coeff, start_pt, SymbolSum(ring, 1, {(slot1_unit,): 1}))]
    for slot, entry in enumerate(rest, start=1):
        rep = ring.to_poly(entry)
        padded = _pad_for_lift(ring, rep, i, b, budget)
        scaled = _factor_scaled_for_lift(padded, i, b)
        new_packs = []
        for factor, mult in scaled:
            unit = ring.from_poly(factor)
            for c0, pt, phi_sym in packs:
                from .milnor import gamma_product
                new_pt = _materialize_point(
                    base, pt, i, b, factor, f"slot{slot}")
                new_packs.append((c0 * mult, new_pt,
                                  gamma_product(phi_sym, unit)))
        packs = new_packs
    return packs


# ---------------------------------------------------------------------------
# the characteristic-0 logarithms
# ---------------------------------------------------------------------------

def log_n(s: SymbolSum, witnesses: Optional[Dict[Tuple[El, ...], int]] = None
          ) -> DrwElement:
    """The Bloch map on a KS-tagged presentation (char 0).

    Per term: formal Log of the vanishing entry (rotated to the front with
    the cyclic sign) wedged with dlog of the remaining entries, reduced
    mod exact forms and decomposed into model slots; additive in terms.
    """
    ring = s.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("log_n needs symbols over k_{m+1}")
    p = ring.characteristic()
    if p and p <= ring.m:
        raise CharPUnsupported("log_n needs 1..m invertible")
    base = ring.base
    out = DrwElement.zero(base, ring.m, s.n - 1)
    for entries, coeff in s.terms.items():
        if witnesses and entries in witnesses:
            i0 = witnesses[entries]
        else:
            slots = vanishing_slots(ring, entries)
            if not slots:
                raise NoVanishingSlot(f"{entries} has no vanishing slot")
            i0 = slots[0]
        n = len(entries)
        sign = -1 if ((n - 1) * i0) % 2 else 1
        rotated = entries[i0:] + entries[:i0]
        log_series = formal_log(series(base, ring.m, list(rotated[0].data)))
        form = DifferentialForm.function(ring.element(log_series.coeffs))
        for a in rotated[1:]:
            form = form.wedge(dlog(a))
        rel = RelativeFormClass(form)
        out = out + drw_decompose(reduce_mod_exact(rel)).scale(coeff * sign)
    return out


@dataclass
class LogPackage:
    """log^0 and the extended logarithmic derivative of a symbol sum."""

    log0: DrwElement       # degree n-1
    dlog_t: DrwElement     # degree n
    field_part: SymbolSum  # the t=0 image in K^M_n(k)


def log0_and_dlog_t(s: SymbolSum) -> LogPackage:
    """Split off the t=0 part and assemble d(log^0) + dlog_k(ev0).

    The relative part is KS-normalized and sent through log_n; the purely
    constant part contributes through dlog on Teichmueller lifts.
    """
    ring = s.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("log0 needs symbols over k_{m+1}")
    rel_raw, field_part = _drop_constant_part(s)
    tagged = relative_generators(rel_raw)
    rel_part = tagged.sum
    log0 = log_n(rel_part, tagged.witness)
    d_log0 = drw_d(log0)
    field_model = dlog_k_model(field_part, ring.m)
    return LogPackage(log0, d_log0 + field_model, field_part)


def _drop_constant_part(s: SymbolSum) -> Tuple[SymbolSum, SymbolSum]:
    """Split s into (relative-generated part, constant field part).

    Each entry factors as constant times one-unit; expanding multilinearly,
    the all-constant terms form the t=0 image and everything else is
    relative.
    """
    ring = s.ring
    assert isinstance(ring, TruncatedPolyRing)
    relative = SymbolSum.zero(ring, s.n)
    constant = SymbolSum.zero(ring.base, s.n)
    for entries, coeff in s.terms.items():
        pairs = []
        for a in entries:
            c = ring.ev_zero(a)
            pairs.append((ring.from_base(c), ring.one_unit_part(a)))
        for choice in itertools.product((0, 1), repeat=s.n):
            chosen = tuple(pairs[idx][ch] for idx, ch in enumerate(choice))
            if all(ch == 0 for ch in choice):
                ev = tuple(ring.ev_zero(a) for a in chosen)
                if any(v.is_one() for v in ev):
                    continue
                constant._add(ev, coeff)
            else:
                if any(a.is_one() for a in chosen):
                    continue
                relative._add(chosen, coeff)
    return relative, constant
