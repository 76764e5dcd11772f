"""Inverse Cartier calculus on 1-forms of one-variable function fields
GF(q)(x): the operators C and C^{-1}, the additivity-defect polynomial P,
the B_s filtration with decidable membership, and the gr_m^q class
arithmetic.

Scope is fixed to one variable so Omega^2 = 0 and Z_s is all of Omega^1;
membership in B_s is decided by iterating C, and the kernel identity
ker C = dR is witnessed constructively by antidifferentiation through the
p-power decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import (
    BadDecomposition,
    CharZero,
    NotIntegrable,
    NotPrime,
    RingMismatch,
)
from .fields import El, Ring, _is_prime, pth_root
from .forms import DifferentialForm, d, differential_of_element
from .poly import Poly, RationalFunctionField, _p_power_split


def _require_function_field(ring: Ring) -> RationalFunctionField:
    if not isinstance(ring, RationalFunctionField):
        raise RingMismatch("Cartier calculus lives over GF(q)(x)")
    if ring.characteristic() == 0:
        raise CharZero("Cartier calculus needs characteristic p")
    if ring.form_variables() != (ring.var,):
        raise RingMismatch("only one-variable function fields are supported")
    return ring


@dataclass
class PDecomposition:
    """f = sum_i components[i]^p * x^i with 0 <= i < p; unique."""

    ring: RationalFunctionField
    components: Tuple[El, ...]

    def reassemble(self) -> El:
        ring = self.ring
        p = ring.characteristic()
        x = ring.x()
        acc = ring.zero()
        for i, f in enumerate(self.components):
            acc = acc + (f ** p) * x ** i
        return acc


def p_decompose(f: El) -> PDecomposition:
    """Unique p-power decomposition of a rational function.

    Denominators are cleared by f = (A B^(p-1)) / B^p; the numerator
    splits monomial-by-monomial with p-th roots of the coefficients.
    """
    ring = _require_function_field(f.ring)
    p = ring.characteristic()
    num, den = ring.num(f), ring.den(f)
    top = num * den ** (p - 1)
    comps = _p_power_split(top, p)
    out = []
    den_el = ring.from_poly(den)
    for comp in comps:
        out.append(ring.from_poly(comp) / den_el)
    result = PDecomposition(ring, tuple(out))
    assert result.reassemble() == f, "p-decomposition reassembly failed"
    return result


def one_form(coeff: El) -> DifferentialForm:
    """coeff * dx over GF(q)(x)."""
    ring = _require_function_field(coeff.ring)
    return DifferentialForm(ring, 1, {(ring.var,): coeff})


def form_coefficient(omega: DifferentialForm) -> El:
    ring = _require_function_field(omega.ring)
    if omega.degree != 1:
        raise RingMismatch("expected a 1-form")
    return omega.terms.get((ring.var,), ring.zero())


def cartier_C(omega: DifferentialForm) -> DifferentialForm:
    """The Cartier operator: C(f dx) = f_(p-1) dx.

    Kernel is exactly the exact forms dg; inverse to C^{-1} on classes.
    """
    ring = _require_function_field(omega.ring)
    p = ring.characteristic()
    f = form_coefficient(omega)
    comp = p_decompose(f).components[p - 1]
    return one_form(comp)


@dataclass
class FormClassModBs:
    """A 1-form considered mod B_s (s = 0 means literal equality)."""

    rep: DifferentialForm
    level: int

    def __eq__(self, other):
        if not isinstance(other, FormClassModBs):
            return NotImplemented
        if self.level != other.level:
            return False
        return bs_member(self.rep - other.rep, self.level)

    def __add__(self, other: "FormClassModBs") -> "FormClassModBs":
        assert self.level == other.level
        return FormClassModBs(self.rep + other.rep, self.level)

    def __sub__(self, other: "FormClassModBs") -> "FormClassModBs":
        assert self.level == other.level
        return FormClassModBs(self.rep - other.rep, self.level)


def inverse_cartier(r: El) -> FormClassModBs:
    """C^{-1}(r) = r^(p-1) dr, a class mod B_1."""
    ring = _require_function_field(r.ring)
    p = ring.characteristic()
    dr = differential_of_element(r)
    rep = dr.scale(r ** (p - 1))
    return FormClassModBs(rep, 1)


def inverse_cartier_form(omega: DifferentialForm) -> FormClassModBs:
    """The R-module extension: a db maps to a^p b^(p-1) db mod B_1."""
    ring = _require_function_field(omega.ring)
    p = ring.characteristic()
    f = form_coefficient(omega)
    # omega = f dx = (f) d(x): a = f, b = x
    x = ring.x()
    rep = one_form((f ** p) * x ** (p - 1))
    return FormClassModBs(rep, 1)


def p_polynomial(p: int):
    """P(X, Y) = sum_{i=1}^{p-1} (1/p) C(p, i) X^(p-i) Y^i, exact integers."""
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    import math
    coeffs = []
    for i in range(1, p):
        c = math.comb(p, i)
        assert c % p == 0
        coeffs.append((p - i, i, c // p))
    return coeffs


def p_polynomial_eval(p: int, r1: El, r2: El) -> El:
    acc = r1.ring.zero()
    for e1, e2, c in p_polynomial(p):
        acc = acc + (r1 ** e1) * (r2 ** e2) * c
    return acc


def bs_member(omega: DifferentialForm, s: int) -> bool:
    """omega in B_s iff C^s(omega) = 0 (B_0 = 0; B_1 = exact forms)."""
    if s == 0:
        return omega.is_zero()
    cur = omega
    for _ in range(s):
        cur = cartier_C(cur)
    return cur.is_zero()


def zs_member(omega: DifferentialForm, s: int) -> bool:
    """Z_s = Omega^1 in one variable (d lands in Omega^2 = 0)."""
    _require_function_field(omega.ring)
    return True


def antidifferentiate(omega: DifferentialForm) -> El:
    """A g with dg = omega, when C(omega) = 0; NotIntegrable otherwise.

    With f = sum_{i<p-1} f_i^p x^i (no x^(p-1) component), g is obtained
    termwise: g = sum f_i^p x^(i+1) / (i+1).
    """
    ring = _require_function_field(omega.ring)
    p = ring.characteristic()
    f = form_coefficient(omega)
    comps = p_decompose(f).components
    if not comps[p - 1].is_zero():
        raise NotIntegrable("the x^(p-1) component obstructs integration")
    x = ring.x()
    g = ring.zero()
    for i in range(p - 1):
        fi = comps[i]
        if fi.is_zero():
            continue
        g = g + (fi ** p) * (x ** (i + 1)) * ring.from_int(i + 1).inv()
    assert differential_of_element(g) == omega, "antiderivative check failed"
    return g


# ---------------------------------------------------------------------------
# iterated inverse Cartier and gr_m^q
# ---------------------------------------------------------------------------

def iterated_inverse_cartier(omega: DifferentialForm, s: int
                             ) -> DifferentialForm:
    """A representative of C^{-s}(omega) in Omega^1 / B_s."""
    rep = omega
    for _ in range(s):
        rep = inverse_cartier_form(rep).rep
    return rep


def frobenius_power(r: El, s: int) -> El:
    """C^{-s} in degree 0 is the iterated p-th power map."""
    p = r.ring.characteristic()
    return r ** (p ** s)


@dataclass
class GrClass:
    """An element of (Omega^1/B_s) + (Omega^0/B_s) for q = 1.

    Parameters m = m' p^s with p not dividing m'; equality is decided
    modulo the image of theta.
    """

    omega: DifferentialForm
    beta: El
    m_prime: int
    s: int


def theta(alpha: El, m: int) -> GrClass:
    """theta(alpha) = (C^{-s}(d alpha), m' C^{-s}(alpha)) for q = 1."""
    ring = _require_function_field(alpha.ring)
    p = ring.characteristic()
    s = 0
    m_prime = m
    while m_prime % p == 0:
        m_prime //= p
        s += 1
    if m_prime % p == 0:
        raise BadDecomposition("p divides m'")
    d_alpha = differential_of_element(alpha)
    first = iterated_inverse_cartier(d_alpha, s)
    second = frobenius_power(alpha, s) * m_prime
    return GrClass(first, second, m_prime, s)


def grm_equal(c1: GrClass, c2: GrClass) -> bool:
    """Equality in gr_m^q = coker(theta), decided constructively.

    The second coordinate determines alpha by p^s-th root extraction (the
    difference must be m' times a p^s-th power); the first coordinates
    must then agree mod B_s after subtracting C^{-s}(d alpha).
    """
    if (c1.m_prime, c1.s) != (c2.m_prime, c2.s):
        return False
    s = c1.s
    m_prime = c1.m_prime
    ring = _require_function_field(c1.beta.ring)
    from .errors import NotAPthPowerError
    diff_beta = (c1.beta - c2.beta) * ring.from_int(m_prime).inv()
    alpha = diff_beta
    for _ in range(s):
        try:
            alpha = pth_root(alpha)
        except NotAPthPowerError:
            return False
    # check: theta(alpha) matches the difference
    d_alpha = differential_of_element(alpha)
    first = iterated_inverse_cartier(d_alpha, s)
    return bs_member((c1.omega - c2.omega) - first, s)
