"""Milnor K-symbol calculus over fields and truncated polynomial rings:
formal sums of symbols, class-preserving rewriting, relative generators,
the irreducible-representative normal form, products, and the dlog maps.

Symbol equality in K^M is not decidable by rewriting alone; rewriting here
is a normalization tool and the brute-force oracle (kgroup_oracle) is the
equality authority over finite rings.  The antisymmetry, {a,-a} and
{a,-1} rules are consequences valid at the improved-group level; pass
steinberg_only=True to stay inside the strict Steinberg presentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    NotAUnit,
    NotAUnitFactor,
    NotRelative,
    RingMismatch,
    Undecided,
)
from .fields import El, FiniteField, PrimeField, Ring
from .forms import DifferentialForm, DrwElement, dlog
from .poly import Poly, is_irreducible, poly_factor
from .truncated import TruncatedPolyRing
from .witt import witt_from_unit


class MilnorSymbol:
    """An ordered tuple of units {a_1, ..., a_n}."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring: Ring, entries: Sequence[El]):
        entries = tuple(entries)
        if not entries:
            raise ValueError("symbols have length >= 1")
        for a in entries:
            if a.ring.key != ring.key:
                raise RingMismatch("entry over the wrong ring")
            if not a.is_unit():
                raise NotAUnit(f"{a} is not a unit")
        self.ring = ring
        self.entries = entries

    @property
    def n(self) -> int:
        return len(self.entries)

    def __eq__(self, other):
        return (isinstance(other, MilnorSymbol)
                and self.ring.key == other.ring.key
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring.key, self.entries))

    def __repr__(self):
        return "{" + ", ".join(repr(a) for a in self.entries) + "}"


class SymbolSum:
    """A Z-linear combination of equal-length symbols over one ring."""

    __slots__ = ("ring", "n", "terms")

    def __init__(self, ring: Ring, n: int,
                 terms: Optional[Dict[Tuple[El, ...], int]] = None):
        self.ring = ring
        self.n = n
        self.terms: Dict[Tuple[El, ...], int] = {}
        if terms:
            for entries, coeff in terms.items():
                self._add(entries, coeff)

    @classmethod
    def of(cls, symbol: MilnorSymbol, coeff: int = 1) -> "SymbolSum":
        return cls(symbol.ring, symbol.n, {symbol.entries: coeff})

    @classmethod
    def zero(cls, ring: Ring, n: int) -> "SymbolSum":
        return cls(ring, n)

    def _add(self, entries: Tuple[El, ...], coeff: int):
        if len(entries) != self.n:
            raise ValueError("length mismatch")
        if coeff == 0:
            return
        cur = self.terms.get(entries, 0) + coeff
        if cur:
            self.terms[entries] = cur
        else:
            self.terms.pop(entries, None)

    def __add__(self, other: "SymbolSum") -> "SymbolSum":
        if self.ring.key != other.ring.key or self.n != other.n:
            raise RingMismatch("incompatible symbol sums")
        out = SymbolSum(self.ring, self.n, dict(self.terms))
        for entries, coeff in other.terms.items():
            out._add(entries, coeff)
        return out

    def __neg__(self) -> "SymbolSum":
        return SymbolSum(self.ring, self.n,
                         {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "SymbolSum") -> "SymbolSum":
        return self + (-other)

    def scale(self, k: int) -> "SymbolSum":
        return SymbolSum(self.ring, self.n,
                         {e: k * c for e, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, SymbolSum)
                and self.ring.key == other.ring.key and self.n == other.n
                and self.terms == other.terms)

    def sorted_terms(self) -> List[Tuple[Tuple[El, ...], int]]:
        return sorted(self.terms.items(),
                      key=lambda kv: [repr(a) for a in kv[0]])

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for entries, coeff in self.sorted_terms():
            sym = "{" + ", ".join(repr(a) for a in entries) + "}"
            if coeff == 1:
                parts.append(sym)
            elif coeff == -1:
                parts.append(f"-{sym}")
            else:
                parts.append(f"{coeff}*{sym}")
        return " + ".join(parts).replace("+ -", "- ")


def symbol(ring: Ring, entries: Sequence[El], coeff: int = 1) -> SymbolSum:
    return SymbolSum.of(MilnorSymbol(ring, entries), coeff)


# ---------------------------------------------------------------------------
# rewriting
# ---------------------------------------------------------------------------

def expand_multilinear(s: SymbolSum, slot: int,
                       factorization: Sequence[El]) -> SymbolSum:
    """Replace entry u at `slot` (0-based) by the given factorization.

    The factors must multiply to the entry exactly; the class in K^M is
    unchanged: {.., uv, ..} = {.., u, ..} + {.., v, ..}.
    """
    out = SymbolSum.zero(s.ring, s.n)
    for entries, coeff in s.terms.items():
        prod = s.ring.one()
        for f in factorization:
            if not f.is_unit():
                raise NotAUnitFactor(f"{f} is not a unit")
            prod = prod * f
        if prod != entries[slot]:
            raise NotAUnitFactor("factors do not multiply to the entry")
        for f in factorization:
            new_entries = entries[:slot] + (f,) + entries[slot + 1:]
            out._add(new_entries, coeff)
    return out


def _entry_sort_key(a: El) -> str:
    return repr(a)


def rewrite_basic(s: SymbolSum, steinberg_only: bool = False) -> SymbolSum:
    """Normalize a symbol sum by class-preserving deletions and sorting.

    Always applied (valid in the strict Steinberg presentation): deleting
    terms with an entry 1 and terms with an adjacent pair (a, 1-a).  With
    steinberg_only=False the improved-level consequences are added:
    antisymmetry sorting with sign, and deletion of terms with an adjacent
    (a, -a) pair or any entry -1 (for n >= 2).
    """
    out = SymbolSum.zero(s.ring, s.n)
    one = s.ring.one()
    minus_one = -one
    for entries, coeff in s.terms.items():
        if any(a == one for a in entries):
            continue
        if _has_adjacent_steinberg(s.ring, entries):
            continue
        if not steinberg_only:
            if s.n >= 2 and any(a == minus_one for a in entries):
                continue
            if any(entries[i] == -entries[i + 1]
                   for i in range(len(entries) - 1)):
                continue
            sorted_entries, sign = _sort_with_sign(entries)
            out._add(sorted_entries, coeff * sign)
        else:
            out._add(entries, coeff)
    return out


def _has_adjacent_steinberg(ring: Ring, entries: Tuple[El, ...]) -> bool:
    one = ring.one()
    for i in range(len(entries) - 1):
        if entries[i + 1] == one - entries[i]:
            return True
        if entries[i] == one - entries[i + 1]:
            return True
    return False


def _sort_with_sign(entries: Tuple[El, ...]) -> Tuple[Tuple[El, ...], int]:
    keyed = [( _entry_sort_key(a), i, a) for i, a in enumerate(entries)]
    keyed.sort(key=lambda kv: (kv[0], kv[1]))
    perm = [kv[1] for kv in keyed]
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        cycle = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cycle += 1
        if cycle % 2 == 0:
            sign = -sign
    return tuple(kv[2] for kv in keyed), sign


# ---------------------------------------------------------------------------
# relative structure over k_{m+1}
# ---------------------------------------------------------------------------

def vanishing_slots(ring: TruncatedPolyRing, entries: Tuple[El, ...]
                    ) -> List[int]:
    """0-based slots whose entry is = 1 mod t."""
    return [i for i, a in enumerate(entries) if ring.is_one_unit(a)]


def ev_zero(s: SymbolSum) -> SymbolSum:
    """Reduction mod t: the image in K^M_n(k)."""
    ring = s.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("ev_zero needs a truncated polynomial ring")
    out = SymbolSum.zero(ring.base, s.n)
    for entries, coeff in s.terms.items():
        out._add(tuple(ring.ev_zero(a) for a in entries), coeff)
    return out


def is_zero_class(s: SymbolSum, use_oracle: bool = True) -> Optional[bool]:
    """True/False when decidable, None when undecided.

    Rewriting to literal zero decides positively; over finite rings the
    presentation oracle decides both ways.
    """
    if rewrite_basic(s, steinberg_only=True).is_zero():
        return True
    if rewrite_basic(s).is_zero():
        return True
    if use_oracle and _oracle_supported(s.ring):
        from .oracle import class_coords, present
        pres = present(s.ring, s.n)
        return class_coords(s, pres).is_zero()
    return None


def _oracle_supported(ring: Ring) -> bool:
    if isinstance(ring, (PrimeField, FiniteField)):
        return True
    if isinstance(ring, TruncatedPolyRing):
        return isinstance(ring.base, (PrimeField, FiniteField))
    return False


@dataclass
class RelativeTagged:
    """A symbol sum where every term carries a witness vanishing slot."""

    sum: SymbolSum
    witness: Dict[Tuple[El, ...], int]  # entries -> 0-based slot


def relative_generators(s: SymbolSum) -> RelativeTagged:
    """Present a relative class by terms each having a slot = 1 mod t.

    Entries are split into constant * one-unit parts and expanded
    multilinearly; the purely-constant remainder must be zero in K^M_n(k)
    (checked by rewriting, and by the oracle over finite rings), and is
    dropped.
    """
    ring = s.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("relative generators need a truncated ring")
    relative = SymbolSum.zero(ring, s.n)
    constant = SymbolSum.zero(ring.base, s.n)
    witness: Dict[Tuple[El, ...], int] = {}
    for entries, coeff in s.terms.items():
        slots = vanishing_slots(ring, entries)
        if slots:
            relative._add(entries, coeff)
            continue
        # split each entry a = a(0) * u, expand over all choices
        pairs = []
        for a in entries:
            c = ring.ev_zero(a)
            u = ring.one_unit_part(a)
            pairs.append((ring.from_base(c), u))
        import itertools
        for choice in itertools.product((0, 1), repeat=s.n):
            chosen = tuple(pairs[i][choice[i]] for i in range(s.n))
            if all(ch == 0 for ch in choice):
                constant._add(tuple(ring.ev_zero(a) for a in chosen), coeff)
            else:
                if any(a.is_one() for a in chosen):
                    continue  # entry 1: term vanishes
                relative._add(chosen, coeff)
    verdict = is_zero_class(constant)
    if verdict is False:
        raise NotRelative("the t=0 image is provably nonzero")
    if verdict is None:
        raise Undecided("cannot certify the t=0 image vanishes")
    for entries in relative.terms:
        witness[entries] = vanishing_slots(ring, entries)[0]
    return RelativeTagged(relative, witness)


# ---------------------------------------------------------------------------
# irreducible polynomial representatives
# ---------------------------------------------------------------------------

@dataclass
class ImprovedTerm:
    """One generator with irreducible polynomial representatives.

    Slot 0 has the shape 1 - b t^i, the remaining representatives are
    irreducible non-constant polynomials congruent to the entries.
    """

    coeff: int
    entries: Tuple[El, ...]
    reps: Tuple[Poly, ...]


def _one_unit_generators(ring: TruncatedPolyRing, u: El,
                         _depth: int = 0) -> List[Tuple[El, Poly]]:
    """Split a one-unit into factors 1 - b t^i with irreducible polynomials.

    from_series gives the generators; reducible ones are factored into
    monic irreducibles scaled back to 1-units and reprocessed.
    """
    if _depth > 32:
        raise Undecided("generator splitting did not terminate")
    base = ring.base
    out: List[Tuple[El, Poly]] = []
    w = witt_from_unit(u)
    for i in w.trunc:
        b = w.coord(i)
        if b.is_zero():
            continue
        rep = Poly(base, [base.one()] + [base.zero()] * (i - 1) + [-b])
        unit = ring.from_poly(rep)
        if is_irreducible(rep):
            out.append((unit, rep))
            continue
        for f, mult in poly_factor(rep):
            g = f * f.coeff(0).inv()  # scale to 1 mod t
            g_unit = ring.from_poly(g)
            if g_unit.is_one():
                continue
            sub = _one_unit_generators(ring, g_unit, _depth + 1)
            out.extend(sub * mult)
    return out


def _pad_representative(ring: TruncatedPolyRing, rep: Poly,
                        slot1_i: int, slot1_b: El) -> Poly:
    """Pad rep above t^m so it factors against the slot-1 data.

    The pad is (-1)^D * b^(D/i) * t^D with D the least multiple of i
    exceeding max(m, deg rep); congruence mod t^(m+1) is untouched.
    """
    base = ring.base
    lower = max(ring.m, rep.degree())
    D = slot1_i * ((lower // slot1_i) + 1)
    coeff = (slot1_b ** (D // slot1_i))
    if D % 2:
        coeff = -coeff
    return rep + Poly(base, [base.zero()] * D + [coeff])


def _scaled_factors(padded: Poly, slot1_i: int, slot1_b: El
                    ) -> List[Tuple[Poly, int]]:
    """Factor a padded representative, distributing the leading unit.

    For slot1_i = 1 each monic factor f is scaled by (-b)^deg f, which
    reproduces the worked d - a t / d^2 + d a t + a^2 t^2 split; otherwise
    the full leading unit lands on the first factor.
    """
    base = padded.field
    factors = poly_factor(padded)
    lc = padded.lead()
    if slot1_i == 1:
        sigma = -slot1_b
        out = [(f * sigma ** f.degree(), mult) for f, mult in factors]
        check = base.one()
        for f, mult in out:
            check = check * f.lead() ** mult
        assert check == lc, "leading unit distribution failed"
        return out
    # general case: the first occurrence of the first factor absorbs lc
    f0, e0 = factors[0]
    out = [(f0 * lc, 1)]
    if e0 > 1:
        out.append((f0, e0 - 1))
    out.extend(factors[1:])
    return out


def ks_improved(s: SymbolSum, degree_bound: int = 8) -> List[ImprovedTerm]:
    """Rewrite a relative symbol sum with irreducible representatives.

    Each output term has slot-1 entry of the form 1 - b t^i with an
    irreducible binomial representative, and irreducible non-constant
    polynomial representatives in the remaining slots; the total class is
    unchanged.
    """
    ring = s.ring
    if not isinstance(ring, TruncatedPolyRing):
        raise RingMismatch("ks_improved needs a truncated ring")
    base = ring.base
    tagged = relative_generators(s)
    out: List[ImprovedTerm] = []
    for entries, coeff in tagged.sum.terms.items():
        slot = tagged.witness[entries]
        # rotate the vanishing slot to the front (cyclic, with sign)
        n = len(entries)
        rotated = entries[slot:] + entries[:slot]
        sign = -1 if ((n - 1) * slot) % 2 else 1
        for slot1_unit, slot1_rep in _one_unit_generators(ring, rotated[0]):
            i = slot1_rep.degree()
            b = -slot1_rep.coeff(i)
            terms_here: List[Tuple[int, List[El], List[Poly]]] = [
                (coeff * sign, [slot1_unit], [slot1_rep])]
            for a in rotated[1:]:
                rep = ring.to_poly(a)
                next_terms = []
                if rep.degree() >= 1 and is_irreducible(rep):
                    for c0, es, rs in terms_here:
                        next_terms.append((c0, es + [a], rs + [rep]))
                else:
                    padded = _pad_representative(ring, rep, i, b)
                    for f, mult in _scaled_factors(padded, i, b):
                        unit = ring.from_poly(f)
                        for c0, es, rs in terms_here:
                            next_terms.append(
                                (c0 * mult, es + [unit], rs + [f]))
                terms_here = next_terms
            for c0, es, rs in terms_here:
                out.append(ImprovedTerm(c0, tuple(es), tuple(rs)))
    return out


def improved_to_sum(terms: Sequence[ImprovedTerm], ring: TruncatedPolyRing,
                    n: int) -> SymbolSum:
    out = SymbolSum.zero(ring, n)
    for t in terms:
        out._add(t.entries, t.coeff)
    return out


# ---------------------------------------------------------------------------
# products and dlog
# ---------------------------------------------------------------------------

def gamma_product(s: SymbolSum, u: El) -> SymbolSum:
    """Append a unit to every term: the length-raising product."""
    if u.ring.key != s.ring.key:
        raise RingMismatch("unit over the wrong ring")
    if not u.is_unit():
        raise NotAUnit(f"{u} is not a unit")
    out = SymbolSum.zero(s.ring, s.n + 1)
    for entries, coeff in s.terms.items():
        out._add(entries + (u,), coeff)
    return out


def dlog_k(s: SymbolSum) -> DifferentialForm:
    """dlog(a_1) wedge ... wedge dlog(a_n) in Omega^n of the base field."""
    ring = s.ring
    out = DifferentialForm.zero(ring, s.n)
    for entries, coeff in s.terms.items():
        term = DifferentialForm.function(ring.one())
        for a in entries:
            term = term.wedge(dlog(a))
        out = out + term.scale(coeff)
    return out


def dlog_k_model(s: SymbolSum, m: int) -> DrwElement:
    """The same map landing in the W_m Omega^n model: slot N carries
    (1/N) * dlog-wedge."""
    ring = s.ring
    from .errors import CharPUnsupported
    p = ring.characteristic()
    if p and p <= m:
        raise CharPUnsupported("model dlog needs 1..m invertible")
    base_form = dlog_k(s)
    slots = [base_form.scale(ring.from_int(i).inv()) for i in range(1, m + 1)]
    return DrwElement(ring, m, s.n, slots)
