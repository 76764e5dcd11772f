"""Absolute Kahler differential forms over the supported rings, relative
forms for (k_{m+1}, (t)), and the characteristic-0 de Rham-Witt model
bigoplus_{i=1}^m t^i Omega^{n-1}_k.

Form normal form: a dict from sorted generator tuples to nonzero
coefficients, generators ordered dt < dx_1 < dx_2 < ...; over k_{m+1} the
dt-coefficients are reduced mod t^m (from d(t^{m+1}) = 0 when m+1 is
invertible).

The model operators are the unique ones satisfying the restricted
Witt-complex axioms with lambda = the printed formal Log: product
(x*y)_N = N * x_N wedge y_N, V_r slot i -> slot ri, F_r slot i = r * slot
ri, d slot i = (1/i) d(slot i).  These multipliers are frozen here and
exercised axiom-by-axiom in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CharPUnsupported, NotAUnit, RingMismatch
from .fields import El, FiniteField, PrimeField, Rationals, Ring
from .poly import RationalFunctionField
from .truncated import TruncatedPolyRing
from .witt import WittVector, formal_log, ghost, series, to_series


def form_generators(ring: Ring) -> Tuple[str, ...]:
    """Basis differentials of the ring, in wedge order (dt first)."""
    if isinstance(ring, TruncatedPolyRing):
        return (ring.var,) + ring.base.form_variables()
    return ring.form_variables()


def _sort_key(ring: Ring, key: Tuple[str, ...]):
    order = form_generators(ring)
    return tuple(order.index(g) for g in key)


def _normalize_wedge(ring: Ring, gens: Sequence[str]) -> Tuple[Optional[Tuple[str, ...]], int]:
    """Sort generators, tracking the permutation sign; None if repeated."""
    if len(set(gens)) != len(gens):
        return None, 0
    order = form_generators(ring)
    idx = [order.index(g) for g in gens]
    sign = 1
    lst = list(idx)
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                sign = -sign
    return tuple(order[i] for i in lst), sign


class DifferentialForm:
    """A degree-n absolute Kahler form in normal form."""

    __slots__ = ("ring", "degree", "terms")

    def __init__(self, ring: Ring, degree: int,
                 terms: Optional[Dict[Tuple[str, ...], El]] = None):
        self.ring = ring
        self.degree = degree
        self.terms: Dict[Tuple[str, ...], El] = {}
        if terms:
            for key, coeff in terms.items():
                self._add_term(key, coeff)

    @classmethod
    def zero(cls, ring: Ring, degree: int) -> "DifferentialForm":
        return cls(ring, degree)

    @classmethod
    def function(cls, value: El) -> "DifferentialForm":
        return cls(value.ring, 0, {(): value})

    def _reduce_coeff(self, key: Tuple[str, ...], coeff: El) -> El:
        ring = self.ring
        if (isinstance(ring, TruncatedPolyRing) and ring.var in key):
            p = ring.characteristic()
            if p == 0 or (ring.m + 1) % p != 0:
                # t^m dt = 0
                data = list(coeff.data)
                data[ring.m] = ring.base.zero()
                coeff = El(ring, tuple(data))
        return coeff

    def _add_term(self, key: Tuple[str, ...], coeff: El):
        if len(key) != self.degree:
            raise ValueError("term degree mismatch")
        sorted_key, sign = _normalize_wedge(self.ring, key)
        if sorted_key is None:
            return
        coeff = coeff if sign == 1 else -coeff
        coeff = self._reduce_coeff(sorted_key, coeff)
        cur = self.terms.get(sorted_key)
        new = coeff if cur is None else cur + coeff
        if new.is_zero():
            self.terms.pop(sorted_key, None)
        else:
            self.terms[sorted_key] = new

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, DifferentialForm)
                and self.ring.key == other.ring.key
                and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self):
        items = tuple(sorted((k, hash(v)) for k, v in self.terms.items()))
        return hash((self.ring.key, self.degree, items))

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        if other.degree != self.degree or other.ring.key != self.ring.key:
            raise RingMismatch("cannot add forms of different type")
        out = DifferentialForm(self.ring, self.degree, dict(self.terms))
        for key, coeff in other.terms.items():
            out._add_term(key, coeff)
        return out

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm(self.ring, self.degree,
                                {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def scale(self, c) -> "DifferentialForm":
        if isinstance(c, int):
            c = self.ring.from_int(c)
        return DifferentialForm(self.ring, self.degree,
                                {k: c * v for k, v in self.terms.items()})

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        if other.ring.key != self.ring.key:
            raise RingMismatch("wedge over different rings")
        out = DifferentialForm(self.ring, self.degree + other.degree)
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out._add_term(k1 + k2, c1 * c2)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=lambda k: _sort_key(self.ring, k)):
            c = repr(self.terms[key])
            wedge = "^".join(f"d{g}" for g in key)
            if not key:
                parts.append(c)
            else:
                wrapped = f"({c})" if ("+" in c or "-" in c[1:] or "/" in c
                                       or "*" in c) else c
                parts.append(f"{wrapped}*{wedge}" if wrapped != "1" else wedge)
        return " + ".join(parts).replace("+ -", "- ")


def differential_of_element(c: El) -> DifferentialForm:
    """dc as a 1-form over c's ring."""
    ring = c.ring
    if isinstance(ring, (Rationals, PrimeField, FiniteField)):
        return DifferentialForm.zero(ring, 1)
    if isinstance(ring, RationalFunctionField):
        out = DifferentialForm.zero(ring, 1)
        for var in ring.form_variables():
            dc = ring.partial(c, var)
            if not dc.is_zero():
                out = out + DifferentialForm(ring, 1, {(var,): dc})
        return out
    if isinstance(ring, TruncatedPolyRing):
        base = ring.base
        out = DifferentialForm.zero(ring, 1)
        # dt part: derivative in t
        deriv = [c.data[j] * j for j in range(1, ring.m + 1)]
        dt_coeff = ring.element(deriv)
        if not dt_coeff.is_zero():
            out = out + DifferentialForm(ring, 1, {(ring.var,): dt_coeff})
        # base differentials of the coefficients
        for var in base.form_variables():
            coeffs = []
            for j in range(ring.m + 1):
                cj = c.data[j]
                dj = base.partial(cj, var)  # type: ignore[attr-defined]
                coeffs.append(dj)
            v_coeff = ring.element(coeffs)
            if not v_coeff.is_zero():
                out = out + DifferentialForm(ring, 1, {(var,): v_coeff})
        return out
    raise RingMismatch(f"forms over {ring} are unsupported")


def d(form: DifferentialForm) -> DifferentialForm:
    """Exterior derivative; d(c * dK) = dc wedge dK."""
    out = DifferentialForm.zero(form.ring, form.degree + 1)
    for key, coeff in form.terms.items():
        dc = differential_of_element(coeff)
        for (var,), c2 in dc.terms.items():
            out._add_term((var,) + key, c2)
    return out


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    return a.wedge(b)


def dlog(u: El) -> DifferentialForm:
    """du / u for a unit u."""
    if not u.is_unit():
        raise NotAUnit(f"{u} is not a unit")
    return differential_of_element(u).scale(u.inv())


# ---------------------------------------------------------------------------
# relative forms over k_{m+1} and the exact-form normalization
# ---------------------------------------------------------------------------

def is_relative(form: DifferentialForm) -> bool:
    """Vanishes under t = 0, dt = 0."""
    ring = form.ring
    if not isinstance(ring, TruncatedPolyRing):
        return False
    for key, coeff in form.terms.items():
        if ring.var in key:
            continue
        if not coeff.data[0].is_zero():
            return False
    return True


@dataclass
class RelativeFormClass:
    """A class in Omega^n_{(k_{m+1},(t))} / d Omega^{n-1}, by representative."""

    form: DifferentialForm
    reduced: bool = False

    def __post_init__(self):
        if not isinstance(self.form.ring, TruncatedPolyRing):
            raise RingMismatch("relative forms live over k_{m+1}")
        if not is_relative(self.form):
            raise RingMismatch("representative is not in the relative part")


def _check_char_zero_range(ring: TruncatedPolyRing):
    p = ring.characteristic()
    if p and p <= ring.m:
        raise CharPUnsupported(
            f"char {p} <= m = {ring.m}: integers 1..m are not invertible")


def _lift_base_form(trunc: TruncatedPolyRing, form: DifferentialForm,
                    t_power: int, scalar: El) -> DifferentialForm:
    """scalar * t^j * (base-field form), living over k_{m+1}."""
    out = DifferentialForm.zero(trunc, form.degree)
    if t_power > trunc.m:
        return out
    for key, coeff in form.terms.items():
        coeffs = [trunc.base.zero()] * (trunc.m + 1)
        coeffs[t_power] = coeff * scalar
        out._add_term(key, trunc.element(coeffs))
    return out


def reduce_mod_exact(rel: RelativeFormClass) -> RelativeFormClass:
    """Canonical dt-free representative of the class mod exact forms.

    Each t^j dt wedge eta (eta with constant coefficients) is traded for
    -t^(j+1)/(j+1) d(eta) using d(t^(j+1)/(j+1) eta); the output has no dt
    and zero constant t-coefficient, and is the unique such representative.
    """
    form = rel.form
    ring = form.ring
    assert isinstance(ring, TruncatedPolyRing)
    _check_char_zero_range(ring)
    base = ring.base
    out = DifferentialForm.zero(ring, form.degree)
    for key, coeff in form.terms.items():
        if ring.var not in key:
            out._add_term(key, coeff)
            continue
        rest = tuple(g for g in key if g != ring.var)
        # sign from moving dt to the front of the wedge
        pos = key.index(ring.var)
        sign = -1 if pos % 2 else 1
        for j in range(ring.m):  # t^m dt is already 0 in normal form
            cj = coeff.data[j]
            if cj.is_zero():
                continue
            eta = DifferentialForm(base, len(rest), {rest: cj})
            d_eta = d(eta)
            denom = base.from_int(j + 1).inv()
            for ekey, ecoeff in d_eta.terms.items():
                lifted = _lift_base_form(ring, DifferentialForm(
                    base, len(ekey), {ekey: ecoeff}), j + 1,
                    -(denom) if sign == 1 else denom)
                out = out + lifted
    return RelativeFormClass(out, reduced=True)


# ---------------------------------------------------------------------------
# the de Rham-Witt model
# ---------------------------------------------------------------------------

class DrwElement:
    """Element of the model bigoplus_{i=1}^m t^i Omega^deg_k.

    Slot i holds a degree-`deg` form over k; the element models a class in
    W_m Omega^deg.
    """

    __slots__ = ("base", "m", "deg", "slots")

    def __init__(self, base: Ring, m: int, deg: int,
                 slots: Optional[Sequence[DifferentialForm]] = None):
        self.base = base
        self.m = m
        self.deg = deg
        if slots is None:
            slots = [DifferentialForm.zero(base, deg) for _ in range(m)]
        slots = list(slots)
        if len(slots) != m:
            raise ValueError("need one slot per 1 <= i <= m")
        self.slots = slots

    def slot(self, i: int) -> DifferentialForm:
        return self.slots[i - 1]

    @classmethod
    def zero(cls, base: Ring, m: int, deg: int) -> "DrwElement":
        return cls(base, m, deg)

    def is_zero(self) -> bool:
        return all(s.is_zero() for s in self.slots)

    def __eq__(self, other):
        return (isinstance(other, DrwElement) and self.base.key == other.base.key
                and self.m == other.m and self.deg == other.deg
                and self.slots == other.slots)

    def __add__(self, other: "DrwElement") -> "DrwElement":
        self._check(other)
        return DrwElement(self.base, self.m, self.deg,
                          [a + b for a, b in zip(self.slots, other.slots)])

    def __neg__(self):
        return DrwElement(self.base, self.m, self.deg,
                          [-a for a in self.slots])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n: int) -> "DrwElement":
        return DrwElement(self.base, self.m, self.deg,
                          [s.scale(n) for s in self.slots])

    def _check(self, other: "DrwElement"):
        if (self.base.key != other.base.key or self.m != other.m
                or self.deg != other.deg):
            raise RingMismatch("incompatible model elements")

    def __mul__(self, other: "DrwElement") -> "DrwElement":
        """Graded product: (x*y)_N = N * x_N wedge y_N."""
        if self.base.key != other.base.key or self.m != other.m:
            raise RingMismatch("incompatible model elements")
        slots = []
        for n in range(1, self.m + 1):
            slots.append(self.slot(n).wedge(other.slot(n)).scale(n))
        return DrwElement(self.base, self.m, self.deg + other.deg, slots)

    def __repr__(self):
        inner = "; ".join(f"t^{i}:{self.slots[i - 1]!r}"
                          for i in range(1, self.m + 1)
                          if not self.slots[i - 1].is_zero())
        return f"Drw[m={self.m},deg={self.deg}]({inner or '0'})"


def drw_decompose(rel: RelativeFormClass) -> DrwElement:
    """Split a reduced relative form into its t-degree slots."""
    if not rel.reduced:
        rel = reduce_mod_exact(rel)
    form = rel.form
    ring = form.ring
    assert isinstance(ring, TruncatedPolyRing)
    base = ring.base
    m = ring.m
    slots = [DifferentialForm.zero(base, form.degree) for _ in range(m)]
    for key, coeff in form.terms.items():
        for i in range(1, m + 1):
            ci = coeff.data[i]
            if not ci.is_zero():
                slots[i - 1] = slots[i - 1] + DifferentialForm(
                    base, form.degree, {key: ci})
    return DrwElement(base, m, form.degree, slots)


def drw_recompose(el: DrwElement, trunc: Optional[TruncatedPolyRing] = None
                  ) -> RelativeFormClass:
    """Inverse of drw_decompose: sum of t^i * slot_i."""
    ring = trunc or TruncatedPolyRing(el.base, el.m)
    out = DifferentialForm.zero(ring, el.deg)
    for i in range(1, el.m + 1):
        out = out + _lift_base_form(ring, el.slot(i), i, el.base.one())
    return RelativeFormClass(out, reduced=True)


def drw_verschiebung(r: int, el: DrwElement) -> DrwElement:
    """V_r: slot i -> slot r*i; target modulus r*m + r - 1."""
    m_out = r * el.m + r - 1
    out = DrwElement.zero(el.base, m_out, el.deg)
    for i in range(1, el.m + 1):
        out.slots[r * i - 1] = el.slot(i)
    return out


def drw_frobenius(r: int, el: DrwElement,
                  target_m: Optional[int] = None) -> DrwElement:
    """F_r: slot i = r * (source slot r*i); source modulus r*m + r - 1."""
    if target_m is None:
        target_m = (el.m - r + 1) // r
    if target_m < 0 or r * target_m > el.m:
        raise RingMismatch("Frobenius target too large")
    out = DrwElement.zero(el.base, target_m, el.deg)
    for i in range(1, target_m + 1):
        out.slots[i - 1] = el.slot(r * i).scale(r)
    return out


def drw_d(el: DrwElement) -> DrwElement:
    """d: slot i -> (1/i) d(slot i)."""
    p = el.base.characteristic()
    if p and p <= el.m:
        raise CharPUnsupported("model d needs 1..m invertible")
    slots = []
    for i in range(1, el.m + 1):
        inv_i = el.base.from_int(i).inv()
        slots.append(d(el.slot(i)).scale(inv_i))
    return DrwElement(el.base, el.m, el.deg + 1, slots)


def drw_restrict(el: DrwElement, m: int) -> DrwElement:
    if m > el.m:
        raise RingMismatch("restriction target is larger than the source")
    return DrwElement(el.base, m, el.deg, el.slots[:m])


def drw_lambda(w: WittVector) -> DrwElement:
    """lambda: W_m(k) -> model degree 0, slots of the printed formal Log."""
    base = w.ring
    p = base.characteristic()
    if p and p <= w.m:
        raise CharPUnsupported("lambda needs 1..m invertible")
    log_series = formal_log(to_series(w))
    slots = [DifferentialForm.function(log_series.coeffs[i])
             for i in range(1, w.m + 1)]
    return DrwElement(base, w.m, 0, slots)


def drw_teich_dlog(c: El, m: int) -> DrwElement:
    """dlog[c] = [c]^(-1) d[c] in the model: slot N = (1/N) dlog(c)."""
    base = c.ring
    p = base.characteristic()
    if p and p <= m:
        raise CharPUnsupported("dlog[c] in the model needs 1..m invertible")
    base_dlog = dlog(c)
    slots = [base_dlog.scale(base.from_int(i).inv()) for i in range(1, m + 1)]
    return DrwElement(base, m, 1, slots)


def con(b: WittVector, symbol_entries: Sequence[El], m: Optional[int] = None
        ) -> DrwElement:
    """Concatenation b (x) {a_1..a_{n-1}} -> b dlog[a_1] ... dlog[a_{n-1}].

    Model slots: ghost_N(b)/N * dlog(a_1) wedge ... wedge dlog(a_{n-1}).
    """
    base = b.ring
    m = m or b.m
    p = base.characteristic()
    if p and p <= m:
        raise CharPUnsupported("Con evaluation needs 1..m invertible")
    gh = ghost(b)
    wedge_part = DifferentialForm.function(base.one())
    for a in symbol_entries:
        wedge_part = wedge_part.wedge(dlog(a))
    slots = []
    for n in range(1, m + 1):
        coeff = gh.value(n) * base.from_int(n).inv()
        slots.append(wedge_part.scale(coeff))
    return DrwElement(base, m, len(symbol_entries), slots)
