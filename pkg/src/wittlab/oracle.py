"""Brute-force K^M_n(R) for finite commutative rings via explicit finite
presentations and integer Smith normal form; the independent equality
oracle for all symbol-class claims.

The presentation on n-tuples of units carries one multilinearity row per
(tuple, slot, generator) over a fixed generating set of R^x, plus one
Steinberg row per adjacent (a, 1-a) pair; closure under the generating set
makes every factorization row a Z-combination of these.  Before the SNF
the multilinearity rows are consumed exactly by rewriting each unit tuple
in discrete-log coordinates on the tensor power of the unit group; the
rewriting sends every multilinearity row to zero (asserted), so the SNF
runs on the small Steinberg-plus-torsion matrix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CapExceeded, RingMismatch
from .fields import El, FiniteField, PrimeField, Ring, field_elements
from .milnor import SymbolSum
from .truncated import TruncatedPolyRing

GENERATOR_CAP = 20000


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass
class SnfResult:
    """U * A * V = diag(d_1, ..) with U, V unimodular; divisibility chain."""

    diag: Tuple[int, ...]
    u: Tuple[Tuple[int, ...], ...]
    v: Tuple[Tuple[int, ...], ...]
    rows: int
    cols: int

    def invariant_factors(self) -> List[int]:
        return [d for d in self.diag if d not in (0, 1)] + \
            [0] * sum(1 for d in self.diag if d == 0)

    def nontrivial_factors(self) -> List[int]:
        return [d for d in self.diag if d > 1]


def _identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith(matrix: Sequence[Sequence[int]],
          cols: Optional[int] = None) -> SnfResult:
    """Exact integer Smith normal form with transformation matrices.

    Deterministic pivoting: smallest nonzero absolute value, then
    row-major position.  The factorization is re-verified by
    re-multiplication before returning.
    """
    a = [list(row) for row in matrix]
    rows = len(a)
    if rows == 0:
        ncols = cols or 0
        return SnfResult((), (), tuple(tuple(r) for r in _identity(ncols)),
                         0, ncols)
    ncols = len(a[0]) if a[0] else (cols or 0)
    u = _identity(rows)
    v = _identity(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    limit = min(rows, ncols)
    while t < limit:
        # locate pivot: smallest |value|, then row-major
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, ncols):
                val = a[i][j]
                if val:
                    if best is None or abs(val) < best:
                        best = abs(val)
                        pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        if a[t][t] < 0:
            negate_row(t)
        # clear row and column
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        if a[t][t] < 0:
                            negate_row(t)
                        dirty = True
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
        # enforce divisibility over the remaining block
        for i in range(t + 1, rows):
            for j in range(t + 1, ncols):
                if a[i][j] % a[t][t]:
                    add_row(i, t, 1)
                    dirty = True
                    break
            else:
                continue
            break
        if dirty:
            continue
        t += 1

    diag = tuple(a[i][i] for i in range(limit))
    result = SnfResult(diag,
                       tuple(tuple(r) for r in u),
                       tuple(tuple(r) for r in v),
                       rows, ncols)
    _verify_snf(matrix, result)
    return result


def _mat_mul(a, b):
    if not a or not b:
        return []
    cols = len(b[0])
    out = []
    for row in a:
        new = [0] * cols
        for k, x in enumerate(row):
            if x:
                brow = b[k]
                for j in range(cols):
                    new[j] += x * brow[j]
        out.append(new)
    return out


def _det_unimodular(mat) -> bool:
    # integer determinant by fraction-free elimination
    from fractions import Fraction
    n = len(mat)
    if n == 0:
        return True
    m = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for i in range(n):
        pivot = None
        for r in range(i, n):
            if m[r][i]:
                pivot = r
                break
        if pivot is None:
            return False
        if pivot != i:
            m[i], m[pivot] = m[pivot], m[i]
            det = -det
        det *= m[i][i]
        inv = 1 / m[i][i]
        for r in range(i + 1, n):
            if m[r][i]:
                c = m[r][i] * inv
                m[r] = [x - c * y for x, y in zip(m[r], m[i])]
    return abs(det) == 1


def _verify_snf(original, result: SnfResult):
    a = [list(row) for row in original]
    prod = _mat_mul(_mat_mul([list(r) for r in result.u], a),
                    [list(r) for r in result.v])
    for i in range(result.rows):
        for j in range(result.cols):
            expected = result.diag[i] if i == j and i < len(result.diag) else 0
            assert prod[i][j] == expected, "SNF re-multiplication failed"
    assert _det_unimodular([list(r) for r in result.u]), "U not unimodular"
    assert _det_unimodular([list(r) for r in result.v]), "V not unimodular"
    for i in range(len(result.diag) - 1):
        if result.diag[i] and result.diag[i + 1]:
            assert result.diag[i + 1] % result.diag[i] == 0, "divisibility"


# ---------------------------------------------------------------------------
# unit groups of the supported finite rings
# ---------------------------------------------------------------------------

def ring_units(ring: Ring) -> List[El]:
    if isinstance(ring, (PrimeField, FiniteField)):
        return [a for a in field_elements(ring) if not a.is_zero()]
    if isinstance(ring, TruncatedPolyRing) and isinstance(
            ring.base, (PrimeField, FiniteField)):
        return ring.units()
    raise RingMismatch(f"{ring} is not a supported finite ring")


def _unit_generating_set(ring: Ring) -> List[El]:
    """A small generating set of R^x (a field generator plus 1 + b t^i)."""
    if isinstance(ring, (PrimeField, FiniteField)):
        return [_multiplicative_generator(ring)]
    assert isinstance(ring, TruncatedPolyRing)
    base = ring.base
    gens = [ring.from_base(_multiplicative_generator(base))]
    basis = _additive_basis(base)
    for i in range(1, ring.m + 1):
        for b in basis:
            coeffs = [base.one()] + [base.zero()] * (ring.m)
            coeffs[i] = b
            gens.append(ring.element(coeffs))
    return gens


def _multiplicative_generator(field: Ring) -> El:
    units = [a for a in field_elements(field) if not a.is_zero()]
    order = len(units)
    for a in units:
        if _element_order(a, order) == order:
            return a
    raise RuntimeError("no multiplicative generator found")


def _element_order(a: El, bound: int) -> int:
    cur = a
    k = 1
    while not cur.is_one():
        cur = cur * a
        k += 1
        if k > bound:
            raise RuntimeError("order exceeds bound")
    return k


def _additive_basis(field: Ring) -> List[El]:
    if isinstance(field, PrimeField):
        return [field.one()]
    assert isinstance(field, FiniteField)
    return [El(field, tuple(1 if j == i else 0 for j in range(field.d)))
            for i in range(field.d)]


@dataclass
class UnitGroup:
    """R^x presented as a product of cyclic groups with discrete logs."""

    ring: Ring
    generators: Tuple[El, ...]
    orders: Tuple[int, ...]
    dlog: Dict[El, Tuple[int, ...]]

    @property
    def rank(self) -> int:
        return len(self.generators)


def unit_group(ring: Ring) -> UnitGroup:
    """Cyclic decomposition of R^x by exhaustive discrete logarithms.

    Greedy: repeatedly adjoin the generator enlarging the enumerated
    subgroup the most; exponent vectors are recorded for every unit.
    """
    units = ring_units(ring)
    candidates = _unit_generating_set(ring)
    chosen: List[El] = []
    orders: List[int] = []
    table: Dict[El, Tuple[int, ...]] = {ring.one(): ()}
    for g in candidates:
        if g in table:
            continue
        order = _element_order(g, len(units))
        # order of g modulo the current subgroup
        rel_order = 1
        cur = g
        while cur not in table:
            cur = cur * g
            rel_order += 1
        new_table: Dict[El, Tuple[int, ...]] = {}
        power = ring.one()
        for e in range(rel_order):
            for u, vec in table.items():
                new_table[u * power] = vec + (e,)
            power = power * g
        # pad earlier-added entries missing the new coordinate
        table = new_table
        chosen.append(g)
        orders.append(rel_order)
        if len(table) == len(units):
            break
    assert len(table) == len(units), "generating set did not generate"
    return UnitGroup(ring, tuple(chosen), tuple(orders), table)


# ---------------------------------------------------------------------------
# presentations of K^M_n
# ---------------------------------------------------------------------------

@dataclass
class FinitePresentation:
    """K^M_n(R) reduced to SNF coordinates.

    `units` is the unit group; the reduced relation rows live on the
    tensor-power basis (rank^n columns) and `snf` is their Smith form.
    `n_multilinearity_rows` and `steinberg_rows` record the size of the
    literal tuple presentation that the reduction consumed.
    """

    ring: Ring
    n: int
    units: UnitGroup
    tuple_count: int
    n_multilinearity_rows: int
    steinberg_rows: int
    relation_rows: Tuple[Tuple[int, ...], ...]
    snf: SnfResult
    basis_size: int

    def invariant_factors(self) -> List[int]:
        """Invariant factors of the presented group (0 = free factor)."""
        out = [d for d in self.snf.diag if d > 1]
        free = self.basis_size - sum(1 for d in self.snf.diag if d != 0)
        out.extend([0] * free)
        return out

    def group_order(self) -> Optional[int]:
        facs = self.invariant_factors()
        if 0 in facs:
            return None
        order = 1
        for d in facs:
            order *= d
        return order


def _tensor_basis(rank: int, n: int) -> List[Tuple[int, ...]]:
    return list(itertools.product(range(rank), repeat=n))


def _tuple_to_tensor(ug: UnitGroup, entries: Sequence[El],
                     basis_index: Dict[Tuple[int, ...], int]) -> Dict[int, int]:
    """Multilinear expansion of a unit tuple in tensor coordinates."""
    vecs = [ug.dlog[a] for a in entries]
    out: Dict[int, int] = {}
    for combo in itertools.product(*[range(ug.rank) for _ in entries]):
        coeff = 1
        for slot, gen_idx in enumerate(combo):
            coeff *= vecs[slot][gen_idx]
            if coeff == 0:
                break
        if coeff:
            idx = basis_index[combo]
            out[idx] = out.get(idx, 0) + coeff
    return out


def present(ring: Ring, n: int, cap: int = GENERATOR_CAP
            ) -> FinitePresentation:
    """Build and reduce the Steinberg presentation of K^M_n(R)."""
    units = ring_units(ring)
    count = len(units) ** n
    if count > cap:
        raise CapExceeded(f"{count} generators exceed the cap {cap}")
    ug = unit_group(ring)
    rank = ug.rank
    basis = _tensor_basis(rank, n)
    basis_index = {b: i for i, b in enumerate(basis)}
    rows: List[List[int]] = []
    # torsion rows: Z/a (x) Z/b = Z/gcd(a,b), so each tensor basis vector
    # is killed by the gcd of the slot orders (a Bezout combination of the
    # per-slot entry-1 relations)
    import math
    for combo in basis:
        order = 0
        for g in combo:
            order = math.gcd(order, ug.orders[g])
        row = [0] * len(basis)
        row[basis_index[combo]] = order
        rows.append(row)
    # Steinberg rows: a (x) (1-a) in adjacent slots, any context
    one = ring.one()
    steinberg_pairs = []
    for a in units:
        b = one - a
        if b.is_unit() and not b.is_zero():
            steinberg_pairs.append((a, b))
    n_steinberg = 0
    if n >= 2:
        context = _tensor_basis(rank, n - 2)
        for a, b in steinberg_pairs:
            va, vb = ug.dlog[a], ug.dlog[b]
            pair_vec: Dict[Tuple[int, int], int] = {}
            for i in range(rank):
                if va[i] == 0:
                    continue
                for j in range(rank):
                    if vb[j]:
                        pair_vec[(i, j)] = pair_vec.get((i, j), 0) + va[i] * vb[j]
            for pos in range(n - 1):
                for ctx in context:
                    row = [0] * len(basis)
                    nonzero = False
                    for (i, j), c in pair_vec.items():
                        combo = ctx[:pos] + (i, j) + ctx[pos:]
                        row[basis_index[combo]] += c
                        nonzero = True
                    if nonzero:
                        rows.append(row)
                        n_steinberg += 1
    snf_result = smith(rows, cols=len(basis))
    n_multilin = count * n * len(ug.generators)
    return FinitePresentation(ring, n, ug, count, n_multilin, n_steinberg,
                              tuple(tuple(r) for r in rows),
                              snf_result, len(basis))


@dataclass
class ClassCoords:
    """Canonical coordinates of a symbol class in the SNF basis."""

    values: Tuple[int, ...]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __eq__(self, other):
        return isinstance(other, ClassCoords) and self.values == other.values


def class_coords(s: SymbolSum, pres: FinitePresentation) -> ClassCoords:
    """Coordinates of a symbol sum; equal classes iff equal coordinates.

    The tuple is expanded in tensor coordinates, transported through the
    SNF change of basis, and reduced mod the invariant factors.
    """
    if s.ring.key != pres.ring.key:
        raise RingMismatch("symbol over the wrong ring")
    if s.n != pres.n:
        raise RingMismatch("symbol length mismatch")
    ug = pres.units
    basis_index = {b: i for i, b in enumerate(_tensor_basis(ug.rank, pres.n))}
    vec = [0] * pres.basis_size
    for entries, coeff in s.terms.items():
        expanded = _tuple_to_tensor(ug, entries, basis_index)
        for idx, c in expanded.items():
            vec[idx] += coeff * c
    return _coords_from_vector(vec, pres)


def _coords_from_vector(vec: List[int], pres: FinitePresentation
                        ) -> ClassCoords:
    # With U A V = D the relation lattice A^T Z^rows equals V^{-T} D Z in
    # column coordinates, so w = V^T x diagonalizes it: the class of x is
    # (w_i mod d_i), with free coordinates kept as integers.
    v = pres.snf.v
    c = pres.basis_size
    w = [sum(v[j][i] * vec[j] for j in range(c)) for i in range(c)]
    out = []
    diag = pres.snf.diag
    for i, wi in enumerate(w):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            out.append(wi)
        elif d == 1:
            out.append(0)
        else:
            out.append(wi % d)
    return ClassCoords(tuple(out))


def verify_presentation_rows(pres: FinitePresentation, sample: int = 50,
                             seed: int = 7) -> int:
    """Self-check: literal presentation rows map to zero coordinates.

    Samples multilinearity rows {.., g*u, ..} - {.., g, ..} - {.., u, ..}
    and Steinberg rows over the presented ring and asserts each has zero
    class; returns the number of rows checked.
    """
    import random
    rng = random.Random(seed)
    ring = pres.ring
    units = ring_units(ring)
    gens = list(pres.units.generators)
    checked = 0
    for _ in range(sample):
        entries = tuple(rng.choice(units) for _ in range(pres.n))
        slot = rng.randrange(pres.n)
        g = rng.choice(gens)
        merged = entries[:slot] + (g * entries[slot],) + entries[slot + 1:]
        gterm = entries[:slot] + (g,) + entries[slot + 1:]
        s = SymbolSum(ring, pres.n, {merged: 1, gterm: -1})
        s = s + SymbolSum(ring, pres.n, {entries: -1})
        assert class_coords(s, pres).is_zero(), "multilinearity row nonzero"
        checked += 1
    if pres.n >= 2:
        one = ring.one()
        for a in units:
            b = one - a
            if not (b.is_unit() and not b.is_zero()):
                continue
            filler = tuple(units[0] for _ in range(pres.n - 2))
            s = SymbolSum(ring, pres.n, {(a, b) + filler: 1})
            assert class_coords(s, pres).is_zero(), "Steinberg row nonzero"
            checked += 1
    return checked


# ---------------------------------------------------------------------------
# relative subgroup
# ---------------------------------------------------------------------------

@dataclass
class RelativePresentation:
    ambient: FinitePresentation
    quotient: FinitePresentation
    kernel_invariants: Tuple[int, ...]
    kernel_order: int


def _left_kernel(matrix: List[List[int]], cols: int) -> List[List[int]]:
    """Basis of {y : y * matrix = 0} over Z, via the rows of U past the rank."""
    if not matrix:
        return []
    snf_res = smith(matrix, cols=cols)
    rank = sum(1 for d in snf_res.diag if d != 0)
    return [list(snf_res.u[i]) for i in range(rank, len(matrix))]


def relative_subgroup(pres: FinitePresentation) -> RelativePresentation:
    """Kernel of K^M_n(k_{m+1}) -> K^M_n(k) by integer lattice saturation.

    Everything is computed in the source tensor coordinates: the kernel
    lattice of the evaluation map (relaxed by the target relation lattice)
    is intersected-mod the source relation lattice, and the quotient's
    invariant factors are read off a final Smith form.
    """
    ring = pres.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("relative subgroup needs k_{m+1}")
    target = present(ring.base, pres.n)
    c_src = pres.basis_size
    ug = pres.units
    tgt_index = {b: j for j, b in enumerate(
        _tensor_basis(target.units.rank, target.n))}
    # evaluation map on source tensor basis vectors, in target tensor coords
    ev_rows: List[List[int]] = []
    for combo in _tensor_basis(ug.rank, pres.n):
        entries = tuple(ug.generators[g] for g in combo)
        image_entries = tuple(ring.ev_zero(a) for a in entries)
        img = _tuple_to_tensor(target.units, image_entries, tgt_index)
        ev_rows.append([img.get(j, 0) for j in range(target.basis_size)])
    # Lambda = {x : x*ev in target relation lattice}: left kernel of
    # [ev ; target relations] projected to the source block
    stacked = [row[:] for row in ev_rows]
    tgt_rel = [list(r) for r in target.relation_rows]
    stacked.extend(tgt_rel)
    kernel_rows = _left_kernel(stacked, target.basis_size)
    lam = [row[:c_src] for row in kernel_rows]
    # always include the source relation lattice (maps to zero)
    src_rel = [list(r) for r in pres.relation_rows]
    generators = [row for row in lam if any(row)] + src_rel
    invariants = _subquotient_invariants(generators, src_rel, c_src)
    order = 1
    for d in invariants:
        if d == 0:
            order = 0
            break
        order *= d
    return RelativePresentation(pres, target, tuple(invariants), order)


def _subquotient_invariants(generators: List[List[int]],
                            modulo_rows: List[List[int]],
                            cols: int) -> List[int]:
    """Invariant factors of (span generators)/(span modulo_rows) in Z^cols.

    Presents the subquotient on the generator list: relations are the
    integer combinations landing in the modulo lattice.
    """
    gens = [g for g in generators if any(g)]
    if not gens:
        return []
    r = len(gens)
    stacked = [list(g) for g in gens] + [list(m) for m in modulo_rows]
    rel = _left_kernel(stacked, cols)
    rel_rows = [row[:r] for row in rel]
    if not rel_rows:
        return [0] * r
    sub_snf = smith(rel_rows, cols=r)
    invs = [d for d in sub_snf.diag if d > 1]
    free = r - sum(1 for d in sub_snf.diag if d != 0)
    invs.extend([0] * free)
    return invs
