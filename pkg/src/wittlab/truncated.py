"""Truncated polynomial rings k_{m+1} = k[t]/(t^{m+1}) and coefficientwise
norms down finite extensions.

Elements are represented as coefficient tuples of length m+1 over the base
field; a residue is a unit iff its constant term is nonzero, and inverses
come from exact series inversion.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

from .errors import InseparableExtension, NotAUnit, RingMismatch
from .fields import El, FiniteField, PrimeField, Ring, field_order
from .poly import Poly, SimpleExtension, is_separable


class TruncatedPolyRing(Ring):
    """k[t]/(t^{m+1}); payload: tuple of m+1 base-field elements."""

    def __init__(self, base: Ring, m: int, var: str = "t"):
        if m < 0:
            raise ValueError("m must be >= 0")
        self.base = base
        self.m = m
        self.var = var
        self.key = ("Trunc", base.key, m, var)

    def _pad(self, coeffs) -> tuple:
        coeffs = list(coeffs)[: self.m + 1]
        while len(coeffs) < self.m + 1:
            coeffs.append(self.base.zero())
        return tuple(coeffs)

    def element(self, coeffs) -> El:
        return El(self, self._pad(coeffs))

    def from_poly(self, p: Poly) -> El:
        if p.field.key != self.base.key:
            raise RingMismatch("polynomial not over the base field")
        return self.element(list(p.coeffs))

    def to_poly(self, a: El) -> Poly:
        return Poly(self.base, list(a.data))

    def t(self) -> El:
        return self.element([self.base.zero(), self.base.one()])

    def from_base(self, c: El) -> El:
        return self.element([c])

    def zero(self):
        return self.element([])

    def from_int(self, n):
        return self.element([self.base.from_int(n)])

    def add(self, a, b):
        return El(self, tuple(x + y for x, y in zip(a.data, b.data)))

    def neg(self, a):
        return El(self, tuple(-x for x in a.data))

    def mul(self, a, b):
        out = [self.base.zero()] * (self.m + 1)
        for i, x in enumerate(a.data):
            if x.is_zero():
                continue
            for j, y in enumerate(b.data):
                if i + j > self.m:
                    break
                out[i + j] = out[i + j] + x * y
        return El(self, tuple(out))

    def inv(self, a):
        # series inversion: exact u * u^-1 = 1 mod t^(m+1)
        c0 = a.data[0]
        if not self.base.is_unit(c0):
            raise NotAUnit("constant term is not a unit")
        inv0 = c0.inv()
        out: List[El] = [inv0]
        for n in range(1, self.m + 1):
            acc = self.base.zero()
            for i in range(1, n + 1):
                acc = acc + a.data[i] * out[n - i]
            out.append(-inv0 * acc)
        return El(self, tuple(out))

    def is_unit(self, a):
        return self.base.is_unit(a.data[0])

    def characteristic(self):
        return self.base.characteristic()

    def hash_data(self, data):
        return tuple(hash(c) for c in data)

    def render(self, a):
        return self.to_poly(a).render(self.var)

    def describe(self):
        return f"{self.base.describe()}[{self.var}]/({self.var}^{self.m + 1})"

    def form_variables(self):
        return self.base.form_variables()

    # -- helpers used throughout the symbol calculus --

    def ev_zero(self, a: El) -> El:
        """Evaluation at t = 0 (reduction to the base field)."""
        return a.data[0]

    def is_one_unit(self, a: El) -> bool:
        """True iff a = 1 mod t."""
        return a.data[0].is_one()

    def constant_part(self, a: El) -> El:
        return self.from_base(a.data[0])

    def one_unit_part(self, a: El) -> El:
        """u with a = a(0) * u and u = 1 mod t (a must be a unit)."""
        return self.mul(a, self.from_base(a.data[0].inv()))

    def substitute_t(self, a: El, scale: El) -> El:
        """t -> scale * t, reduced mod t^(m+1)."""
        out = []
        power = self.base.one()
        for i, c in enumerate(a.data):
            out.append(c * power)
            power = power * scale
        return El(self, tuple(out))

    def units(self) -> List[El]:
        """All units, for finite base fields (canonical order)."""
        from .fields import field_elements
        base_elems = field_elements(self.base)
        nonzero = [c for c in base_elems if not c.is_zero()]
        out = []
        import itertools
        for c0 in nonzero:
            for rest in itertools.product(base_elems, repeat=self.m):
                out.append(El(self, (c0,) + tuple(rest)))
        return out

    def one_units(self) -> List[El]:
        """All units = 1 mod t, for finite base fields."""
        from .fields import field_elements
        base_elems = field_elements(self.base)
        out = []
        import itertools
        for rest in itertools.product(base_elems, repeat=self.m):
            out.append(El(self, (self.base.one(),) + tuple(rest)))
        return out


def truncated(base: Ring, m: int) -> TruncatedPolyRing:
    return TruncatedPolyRing(base, m)


# ---------------------------------------------------------------------------
# coefficientwise norm along a simple extension
# ---------------------------------------------------------------------------

def _resultant_in_theta(g: Poly, u_coeffs: List[Poly], base: Ring) -> Poly:
    """Res_theta(g(theta), U(theta)) where U has Poly-in-t coefficients.

    Computed as the Sylvester determinant over k[t] by fraction-free
    Bareiss elimination (exact divisions hold over the integral domain
    k[t]).  Equals the product of U over the roots of monic g.
    """
    n = g.degree()
    u_coeffs = list(u_coeffs)
    while len(u_coeffs) > 1 and u_coeffs[-1].is_zero():
        u_coeffs.pop()
    d = len(u_coeffs) - 1
    if d == 0:
        return u_coeffs[0] ** n
    size = n + d
    zero = Poly.zero(base)
    g_in_t = [Poly.constant(c) for c in g.coeffs]
    matrix: List[List[Poly]] = []
    for i in range(d):
        row = [zero] * size
        for j in range(n + 1):
            row[i + j] = g_in_t[n - j]
        matrix.append(row)
    for i in range(n):
        row = [zero] * size
        for j in range(d + 1):
            row[i + j] = u_coeffs[d - j]
        matrix.append(row)
    return _bareiss_det(matrix, base)


def _bareiss_det(matrix: List[List[Poly]], field_t) -> Poly:
    """Fraction-free determinant; entries are Poly over a field."""
    n = len(matrix)
    m = [row[:] for row in matrix]
    sign = 1
    prev = Poly.one(field_t)
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot_row = None
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    pivot_row = i
                    break
            if pivot_row is None:
                return Poly.zero(field_t)
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q, r = num.divmod(prev)
                assert r.is_zero(), "Bareiss exact division failed"
                m[i][j] = q
            m[i][k] = Poly.zero(field_t)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def norm_coeffwise(u: El, ext: SimpleExtension) -> El:
    """Norm of a truncated-ring unit down a simple extension k'/k.

    u lives in k'_{m+1} where k' = k[theta]/(g); the result is the product
    of u over all conjugate embeddings, an element of k_{m+1}.  Computed as
    a resultant in the auxiliary variable (or by Frobenius orbits over
    finite fields).  Multiplicative in u.
    """
    ring = u.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("norm_coeffwise expects a truncated-ring element")
    if ring.base.key != ext.key:
        raise RingMismatch("element's coefficients are not in the extension")
    if not is_separable(ext.modulus):
        raise InseparableExtension(
            f"{ext.modulus} has repeated roots; norms are rejected")
    base = ext.base
    target = TruncatedPolyRing(base, ring.m, ring.var)

    if isinstance(base, (PrimeField, FiniteField)):
        q = field_order(base)
        # product over the Frobenius orbit, computed inside k'_{m+1}
        acc = ring.one()
        cur = u
        for _ in range(ext.deg):
            acc = acc * cur
            cur = El(ring, tuple(c ** q for c in cur.data))
        # coefficients of acc are Frobenius-fixed, hence in k
        out = []
        for c in acc.data:
            cp = ext.to_poly(c)
            assert cp.degree() <= 0, "norm did not land in the base field"
            out.append(cp.coeff(0))
        return target.element(out)

    # general separable case: resultant over k[t]
    u_theta: List[List[El]] = [[] for _ in range(ext.deg)]
    for t_deg in range(ring.m + 1):
        c = u.data[t_deg]  # element of ext: tuple of base elements
        for theta_deg in range(ext.deg):
            col = u_theta[theta_deg]
            while len(col) <= t_deg:
                col.append(base.zero())
            col[t_deg] = c.data[theta_deg]
    u_polys = [Poly(base, col) for col in u_theta]
    res = _resultant_in_theta(ext.modulus, u_polys, base)
    return target.from_poly(res)
