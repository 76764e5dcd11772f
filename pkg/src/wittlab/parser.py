"""Expression parser for the shared CLI grammar.

The grammar (EBNF in docs/grammar.md) covers ring descriptors, scalar and
polynomial expressions, truncated elements with a `(mod t^k)` suffix, Witt
vector literals, differential forms, and Milnor symbols.  parse(print(x))
is the identity on canonical output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple, Union

from .errors import ExprSyntaxError, UnknownRing
from .fields import El, FiniteField, GF, PrimeField, QQ, Ring, UniversalRing
from .forms import DifferentialForm, form_generators
from .milnor import MilnorSymbol, SymbolSum
from .poly import RationalFunctionField
from .truncated import TruncatedPolyRing
from .witt import TruncationSet, WittVector, from_series, series, teichmuller

TOKEN_RE = re.compile(r"""
    (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^(){}\[\],;=])
  | (?P<ws>\s+)
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    pos: int
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    line, col = 1, 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}",
                                  line, col)
        kind = m.lastgroup
        tok_text = m.group()
        if kind != "ws":
            out.append(Token(kind, tok_text, pos, line, col))
        newlines = tok_text.count("\n")
        if newlines:
            line += newlines
            col = len(tok_text) - tok_text.rfind("\n") - 1
        else:
            col += len(tok_text)
        pos = m.end()
    out.append(Token("eof", "", pos, line, col))
    return out


class Parser:
    """Recursive-descent / precedence-climbing parser for the grammar."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ExprSyntaxError(f"expected {text!r}, found {tok.text!r}",
                                  tok.line, tok.col)
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def at_name(self, name: str) -> bool:
        tok = self.peek()
        return tok.kind == "name" and tok.text == name

    def done(self) -> bool:
        return self.peek().kind == "eof"

    # -- ring descriptors --

    def parse_ring(self) -> Ring:
        ring = self._ring_atom()
        # optional truncation suffix: [t]/t^k  or  [t]/(t^k)
        if self.at("["):
            save = self.i
            self.next()
            tok = self.next()
            if tok.text == "t" and self.at("]"):
                self.next()
                self.expect("/")
                paren = self.at("(")
                if paren:
                    self.next()
                self.expect("t")
                self.expect("^")
                k = int(self.next().text)
                if paren:
                    self.expect(")")
                return TruncatedPolyRing(ring, k - 1)
            self.i = save
        if self.at_name("mod"):
            self.next()
            self.expect("t")
            self.expect("^")
            k = int(self.next().text)
            return TruncatedPolyRing(ring, k - 1)
        return ring

    def _ring_atom(self) -> Ring:
        tok = self.next()
        if tok.text == "QQ":
            return QQ
        if tok.text == "GF":
            self.expect("(")
            p = int(self.next().text)
            if self.at(","):
                self.next()
                d = int(self.next().text)
            else:
                d = 1
            self.expect(")")
            return GF(p, d)
        if tok.text == "RatFun":
            self.expect("(")
            inner = self.parse_ring()
            self.expect(",")
            var = self.next().text
            self.expect(")")
            return RationalFunctionField(inner, var)
        if tok.text == "Z":
            self.expect("[")
            names = [self.next().text]
            while self.at(","):
                self.next()
                names.append(self.next().text)
            self.expect("]")
            return UniversalRing(names)
        raise UnknownRing(f"unknown ring {tok.text!r}")

    # -- scalar / form expressions --

    def parse_expression(self, env: "Env"):
        return self._additive(env)

    def _additive(self, env):
        left = self._multiplicative(env)
        while self.peek().text in ("+", "-"):
            op = self.next().text
            right = self._multiplicative(env)
            left = _add(left, right) if op == "+" else _sub(left, right)
        return left

    def _multiplicative(self, env):
        left = self._power(env)
        while self.peek().text in ("*", "/"):
            op = self.next().text
            right = self._power(env)
            left = _mul(left, right) if op == "*" else _div(left, right)
        return left

    def _power(self, env):
        base = self._unary(env)
        if self.peek().text in ("^", "**"):
            self.next()
            if isinstance(base, DifferentialForm):
                right = self._unary(env)
                if not isinstance(right, DifferentialForm):
                    raise ExprSyntaxError("wedge needs a form",
                                          self.peek().line, self.peek().col)
                return base.wedge(right)
            exp_tok = self.next()
            if exp_tok.kind != "int":
                raise ExprSyntaxError("exponent must be an integer",
                                      exp_tok.line, exp_tok.col)
            return base ** int(exp_tok.text)
        return base

    def _unary(self, env):
        if self.at("-"):
            self.next()
            return _neg(self._power(env))
        if self.at("+"):
            self.next()
            return self._power(env)
        return self._atom(env)

    def _atom(self, env):
        tok = self.next()
        if tok.text == "(":
            inner = self._additive(env)
            self.expect(")")
            return inner
        if tok.kind == "int":
            return env.ring.from_int(int(tok.text))
        if tok.kind == "name":
            if tok.text == "teich" and self.at("("):
                self.next()
                arg = self._additive(env)
                self.expect(")")
                return ("teich", arg)
            return env.lookup(tok.text, tok)
        raise ExprSyntaxError(f"unexpected token {tok.text!r}",
                              tok.line, tok.col)


class Env:
    """Evaluation context: a ring plus its named elements/differentials."""

    def __init__(self, ring: Ring):
        self.ring = ring

    def lookup(self, name: str, tok: Token):
        ring = self.ring
        if isinstance(ring, TruncatedPolyRing):
            if name == ring.var:
                return ring.t()
            if name.startswith("d") and (name[1:] in form_generators(ring)):
                return DifferentialForm(ring, 1, {(name[1:],): ring.one()})
            inner = Env(ring.base)
            try:
                val = inner.lookup(name, tok)
            except ExprSyntaxError:
                raise
            if isinstance(val, El):
                return ring.from_base(val)
            return val
        if isinstance(ring, RationalFunctionField):
            if name in ring.form_variables():
                return ring.var_element(name)
            if name.startswith("d") and name[1:] in form_generators(ring):
                return DifferentialForm(ring, 1, {(name[1:],): ring.one()})
        if isinstance(ring, FiniteField) and name == ring.gen_name:
            return ring.gen()
        if isinstance(ring, UniversalRing) and name in ring.names:
            return ring.var(name)
        raise ExprSyntaxError(f"unknown name {name!r} in {ring.describe()}",
                              tok.line, tok.col)


def _binop_pair(a, b):
    if isinstance(a, tuple) or isinstance(b, tuple):
        raise ExprSyntaxError("teich(..) must be used with 'in W(m, ring)'",
                              1, 0)
    return a, b


def _add(a, b):
    a, b = _binop_pair(a, b)
    return a + b


def _sub(a, b):
    a, b = _binop_pair(a, b)
    return a - b


def _mul(a, b):
    a, b = _binop_pair(a, b)
    if isinstance(a, DifferentialForm) and isinstance(b, DifferentialForm):
        return a.wedge(b)
    if isinstance(a, DifferentialForm):
        return a.scale(b)
    if isinstance(b, DifferentialForm):
        return b.scale(a)
    return a * b


def _div(a, b):
    a, b = _binop_pair(a, b)
    if isinstance(a, DifferentialForm):
        return a.scale(b.inv())
    return a / b


def _neg(a):
    if isinstance(a, tuple):
        raise ExprSyntaxError("teich(..) cannot be negated here", 1, 0)
    return -a


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

def parse_ring(text: str) -> Ring:
    p = Parser(text)
    ring = p.parse_ring()
    if not p.done():
        tok = p.peek()
        raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.line,
                              tok.col)
    return ring


def parse_element(text: str, ring: Ring):
    """An element of `ring`; a trailing `(mod t^k)` lifts into k[t]/(t^k)."""
    p = Parser(text)
    env = Env(ring)
    value = p.parse_expression(env)
    if p.at("(") or p.at_name("mod"):
        if p.at("("):
            p.next()
            p.expect("mod")
        else:
            p.next()
        p.expect("t")
        p.expect("^")
        k = int(p.next().text)
        if p.at(")"):
            p.next()
        if not isinstance(ring, TruncatedPolyRing):
            trunc = TruncatedPolyRing(ring, k - 1)
            value = _lift_to_trunc(value, trunc)
        elif ring.m != k - 1:
            raise ExprSyntaxError("modulus disagrees with the ring", 1, 0)
    if not p.done():
        tok = p.peek()
        raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.line,
                              tok.col)
    return value


def _lift_to_trunc(value, trunc: TruncatedPolyRing):
    if isinstance(value, El) and value.ring.key == trunc.base.key:
        return trunc.from_base(value)
    raise ExprSyntaxError("cannot lift this value mod t^k", 1, 0)


def parse_witt(text: str, default_ring: Optional[Ring] = None) -> WittVector:
    """Witt vectors: `W{m=4; [a, b, ...]}` (needs a ring) or
    `<1-unit series> in W(m, <ring>)` / `teich(c) in W(m, <ring>)`."""
    p = Parser(text)
    if p.at_name("W") :
        p.next()
        if p.at("{"):
            p.next()
            p.expect("m")
            p.expect("=")
            m = int(p.next().text)
            p.expect(";")
            p.expect("[")
            if default_ring is None:
                raise UnknownRing("W{..} literals need a --ring")
            env = Env(default_ring)
            coords = [p.parse_expression(env)]
            while p.at(","):
                p.next()
                coords.append(p.parse_expression(env))
            p.expect("]")
            p.expect("}")
            if len(coords) != m:
                raise ExprSyntaxError("coordinate count differs from m", 1, 0)
            return WittVector.from_coords(default_ring, coords)
        raise ExprSyntaxError("expected W{..}", p.peek().line, p.peek().col)
    # series-style: expression 'in' W(m, ring)
    # parse the expression lazily: find the ' in W(' split point first
    marker = re.search(r"\bin\s+W\s*\(", text)
    if not marker:
        raise ExprSyntaxError("expected '<expr> in W(m, ring)'", 1, 0)
    head = text[: marker.start()]
    tail = text[marker.end():]
    tp = Parser(tail)
    m = int(tp.next().text)
    tp.expect(",")
    ring = tp.parse_ring()
    tp.expect(")")
    if not tp.done():
        tok = tp.peek()
        raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.line,
                              tok.col)
    trunc = TruncatedPolyRing(ring, m)
    hp = Parser(head)
    value = hp.parse_expression(Env(trunc))
    if isinstance(value, tuple) and value[0] == "teich":
        base_val = value[1]
        if isinstance(base_val, El) and isinstance(base_val.ring,
                                                   TruncatedPolyRing):
            base_val = base_val.ring.ev_zero(base_val)
        return teichmuller(base_val, m)
    if not isinstance(value, El):
        raise ExprSyntaxError("expected a series expression", 1, 0)
    return from_series(series(ring, m, list(value.data)), ring)


def parse_symbol(text: str) -> SymbolSum:
    """Milnor symbols: `{e1, e2, ...} over <ring> [mod t^k]`."""
    p = Parser(text)
    p.expect("{")
    # entries are raw slices; find the matching close brace textually to
    # parse entries after the ring is known
    depth = 1
    j = p.i
    while depth:
        tok = p.tokens[j]
        if tok.kind == "eof":
            raise ExprSyntaxError("unterminated symbol", tok.line, tok.col)
        if tok.text == "{":
            depth += 1
        if tok.text == "}":
            depth -= 1
        j += 1
    close = p.tokens[j - 1]
    inner_text = text[p.tokens[p.i].pos: close.pos]
    rest = Parser(text[close.pos + 1:])
    if not rest.at_name("over"):
        raise ExprSyntaxError("expected 'over <ring>'", close.line, close.col)
    rest.next()
    ring = rest.parse_ring()
    if not rest.done():
        tok = rest.peek()
        raise ExprSyntaxError(f"trailing input {tok.text!r}", tok.line,
                              tok.col)
    if not isinstance(ring, TruncatedPolyRing):
        env_ring = ring
    else:
        env_ring = ring
    entries = []
    for part in _split_commas(inner_text):
        entries.append(parse_element(part.strip(), env_ring))
    return SymbolSum.of(MilnorSymbol(env_ring, entries))


def _split_commas(text: str) -> List[str]:
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_form(text: str, ring: Ring) -> DifferentialForm:
    value = parse_element(text, ring)
    if isinstance(value, El):
        return DifferentialForm.function(value)
    if not isinstance(value, DifferentialForm):
        raise ExprSyntaxError("expected a differential form", 1, 0)
    return value


# ---------------------------------------------------------------------------
# canonical printing (parse . print = id)
# ---------------------------------------------------------------------------

def print_element(value: El) -> str:
    return repr(value)


def print_witt(w: WittVector) -> str:
    return repr(w)


def print_symbol(s: SymbolSum) -> str:
    ring = s.ring
    suffix = ""
    if isinstance(ring, TruncatedPolyRing):
        ring_text = ring.base.describe()
        suffix = f" mod t^{ring.m + 1}"
    else:
        ring_text = ring.describe()
    parts = []
    for entries, coeff in s.sorted_terms():
        body = "{" + ", ".join(repr(a) for a in entries) + "}"
        parts.append(body if coeff == 1 else f"{coeff}*{body}")
    return " + ".join(parts) + f" over {ring_text}{suffix}"
