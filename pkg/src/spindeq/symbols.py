"""Graded polynomials in named symbols, with exact coefficients.

This layer carries the symbolic identities.  Symbols are declared in a
:class:`SymbolContext` with a parity and an optional ``constant`` flag
(constants have vanishing time derivative).  Dotted symbols -- formal time
derivatives such as ``dot(q)`` -- need no declaration: they inherit the
parity of their base symbol and sort immediately after it.

Monomials are kept in canonical order (declaration order, then dot order);
reordering odd symbols contributes the usual transposition signs.
Coefficients are exact Gaussian rationals so that identities that hold,
hold with residual exactly zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import OddPowerError, ParityError, ParseError, UnknownSymbolError
from .exact import CRational, I, crational

ODD = "odd"
EVEN = "even"

# A symbol key is (base name, dot order); a monomial is a tuple of
# (key, exponent) pairs sorted by context order with positive exponents.
SymKey = tuple[str, int]
Mono = tuple[tuple[SymKey, int], ...]


@dataclass(frozen=True)
class SymbolDecl:
    name: str
    parity: str
    constant: bool = False
    dot_order: int = 0


class SymbolContext:
    """Registry fixing the symbols of one problem and their canonical order."""

    __slots__ = ("_decls", "_order")

    def __init__(self, decls: Iterable[tuple] = ()):
        self._decls: dict[str, SymbolDecl] = {}
        self._order: dict[str, int] = {}
        for entry in decls:
            self.declare(*entry)

    def declare(self, name: str, parity: str, constant: bool = False) -> None:
        if parity not in (ODD, EVEN):
            raise ParityError(f"parity must be 'odd' or 'even', got {parity!r}")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in ("i", "dot"):
            raise ValueError(f"invalid symbol name {name!r}")
        decl = SymbolDecl(name, parity, constant)
        if name in self._decls:
            if self._decls[name] != decl:
                raise ValueError(f"conflicting redeclaration of {name!r}")
            return
        self._order[name] = len(self._order)
        self._decls[name] = decl

    def declared(self, name: str) -> bool:
        return name in self._decls

    def decl(self, name: str) -> SymbolDecl:
        try:
            return self._decls[name]
        except KeyError:
            raise UnknownSymbolError(f"undeclared symbol {name!r}") from None

    def decl_of(self, key: SymKey) -> SymbolDecl:
        """Declaration of a possibly dotted symbol; dots inherit parity."""
        name, dot = key
        base = self.decl(name)
        if dot == 0:
            return base
        return SymbolDecl(base.name, base.parity, base.constant, dot)

    def names(self) -> tuple[str, ...]:
        return tuple(self._order)

    def sort_key(self, key: SymKey) -> tuple[int, int]:
        name, dot = key
        return (self._order[name], dot)

    def parity_of(self, key: SymKey) -> int:
        return 1 if self.decl(key[0]).parity == ODD else 0

    def is_constant(self, name: str) -> bool:
        return self.decl(name).constant

    # -- polynomial constructors ---------------------------------------------

    def zero(self) -> "GradedPolynomial":
        return GradedPolynomial(self, {})

    def const(self, value) -> "GradedPolynomial":
        return GradedPolynomial(self, {(): value})

    def imaginary(self) -> "GradedPolynomial":
        return self.const(I)

    def sym(self, name: str, dot: int = 0) -> "GradedPolynomial":
        self.decl(name)
        if dot < 0:
            raise ValueError("dot order must be non-negative")
        return GradedPolynomial(self, {(((name, dot), 1),): 1})

    def parse(self, text: str) -> "GradedPolynomial":
        return _Parser(self, text).parse()


def _normalize_word(ctx: SymbolContext, factors) -> tuple[int, Mono] | None:
    """Sort a factor word into canonical order.

    Returns ``(sign, monomial)`` or ``None`` when the word vanishes because
    an odd symbol repeats.  Insertion sort; each crossing of two odd factors
    flips the sign.
    """
    sign = 1
    out: list[list] = []  # [key, exp, is_odd]
    for key, exp in factors:
        if exp == 0:
            continue
        odd = ctx.parity_of(key) == 1
        if odd and exp > 1:
            return None
        kk = ctx.sort_key(key)
        pos = len(out)
        crossed_odd = 0
        while pos > 0 and ctx.sort_key(out[pos - 1][0]) > kk:
            if out[pos - 1][2]:
                crossed_odd += 1
            pos -= 1
        if odd and crossed_odd % 2:
            sign = -sign
        if pos > 0 and out[pos - 1][0] == key:
            if odd:
                return None
            out[pos - 1][1] += exp
        else:
            out.insert(pos, [key, exp, odd])
    return sign, tuple((k, e) for k, e, _ in out)


def _lift(value) -> CRational:
    if isinstance(value, CRational):
        return value
    if isinstance(value, (int, Fraction)):
        return CRational(value)
    raise TypeError(f"polynomial coefficients must be exact, got {type(value).__name__}")


class GradedPolynomial:
    """Finite sum of canonical monomials with CRational coefficients."""

    __slots__ = ("context", "terms")

    def __init__(self, context: SymbolContext, terms: Mapping[Mono, object]):
        clean: dict[Mono, CRational] = {}
        for mono, coeff in terms.items():
            coeff = _lift(coeff)
            if not coeff:
                continue
            if mono in clean:
                c = clean[mono] + coeff
                if c:
                    clean[mono] = c
                else:
                    del clean[mono]
            else:
                clean[mono] = coeff
        self.context = context
        self.terms = clean

    # -- inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_part(self) -> CRational:
        return self.terms.get((), CRational(0))

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def coefficient(self, factors) -> CRational:
        """Coefficient of one canonical monomial.

        ``factors`` maps symbol names (or ``(name, dot)`` keys) to exponents.
        """
        word = []
        for key, exp in dict(factors).items():
            if isinstance(key, str):
                key = (key, 0)
            word.append((key, exp))
        norm = _normalize_word(self.context, word)
        if norm is None:
            raise ValueError("requested monomial vanishes identically")
        sign, mono = norm
        return self.terms.get(mono, CRational(0)) * sign

    def parity(self) -> int | None:
        seen = set()
        for mono in self.terms:
            odd = sum(e for key, e in mono if self.context.parity_of(key)) % 2
            seen.add(odd)
        if len(seen) == 1:
            return seen.pop()
        return None

    def degree_in(self, names: Iterable[str]) -> int:
        """Largest total exponent of the given base symbols (any dot order)."""
        targets = set(names)
        best = 0
        for mono in self.terms:
            d = sum(e for (name, _), e in mono if name in targets)
            best = max(best, d)
        return best

    def symbols_used(self) -> set[SymKey]:
        out = set()
        for mono in self.terms:
            out.update(key for key, _ in mono)
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedPolynomial):
            return self.context is other.context and self.terms == other.terms
        if isinstance(other, (int, Fraction, CRational)):
            return self.terms == GradedPolynomial(self.context, {(): other}).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"<poly {format_poly(self)}>"

    def __str__(self):
        return format_poly(self)

    # -- arithmetic -------------------------------------------------------------

    def _check_context(self, other: "GradedPolynomial"):
        if self.context is not other.context:
            raise ValueError("polynomials belong to different symbol contexts")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CRational)):
            other = self.context.const(other)
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        self._check_context(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, CRational(0)) + c
        return GradedPolynomial(self.context, terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other

    def __rsub__(self, other):
        return other + (-1) * self

    def __neg__(self):
        return (-1) * self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CRational)):
            return GradedPolynomial(
                self.context, {m: c * other for m, c in self.terms.items()}
            )
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        self._check_context(other)
        ctx = self.context
        out: dict[Mono, CRational] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                norm = _normalize_word(ctx, list(ma) + list(mb))
                if norm is None:
                    continue
                sign, mono = norm
                c = ca * cb
                if sign < 0:
                    c = -c
                if mono in out:
                    out[mono] = out[mono] + c
                else:
                    out[mono] = c
        return GradedPolynomial(ctx, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CRational)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CRational)):
            other = crational(other)
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (CRational(1) / other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("powers must be non-negative integers")
        out = self.context.const(1)
        for _ in range(n):
            out = out * self
        return out


def formal_time_derivative(p: GradedPolynomial) -> GradedPolynomial:
    """Formal d/dt: an even derivation raising dot orders by one.

    Acts factor by factor without Koszul signs (time is an even parameter);
    symbols declared ``constant`` are annihilated.
    """
    ctx = p.context
    out: dict[Mono, CRational] = {}
    for mono, coeff in p.terms.items():
        for idx, (key, exp) in enumerate(mono):
            name, dot = key
            if ctx.is_constant(name):
                continue
            replacement = []
            if exp > 1:
                replacement.append((key, exp - 1))
            replacement.append(((name, dot + 1), 1))
            word = list(mono[:idx]) + replacement + list(mono[idx + 1 :])
            norm = _normalize_word(ctx, word)
            if norm is None:
                continue
            sign, new_mono = norm
            c = coeff * (exp * sign)
            if new_mono in out:
                out[new_mono] = out[new_mono] + c
            else:
                out[new_mono] = c
    return GradedPolynomial(ctx, out)


def partial_derivative(p: GradedPolynomial, name: str, dot: int = 0) -> GradedPolynomial:
    """Left derivative with respect to one symbol."""
    ctx = p.context
    key = (name, dot)
    odd = ctx.parity_of(key) == 1
    out: dict[Mono, CRational] = {}
    for mono, coeff in p.terms.items():
        for idx, (k, e) in enumerate(mono):
            if k != key:
                continue
            if odd:
                before = sum(
                    e2 for (k2, e2) in mono[:idx] if ctx.parity_of(k2) == 1
                )
                c = -coeff if before % 2 else coeff
                new_mono = mono[:idx] + mono[idx + 1 :]
            else:
                c = coeff * e
                if e > 1:
                    new_mono = mono[:idx] + ((key, e - 1),) + mono[idx + 1 :]
                else:
                    new_mono = mono[:idx] + mono[idx + 1 :]
            if new_mono in out:
                out[new_mono] = out[new_mono] + c
            else:
                out[new_mono] = c
            break
    return GradedPolynomial(ctx, out)


def substitute(p: GradedPolynomial, bindings: Mapping) -> GradedPolynomial:
    """Replace symbols by polynomials of matching parity.

    Binding keys are symbol names or ``(name, dot)`` pairs; unbound symbols
    pass through.  Substitution is a graded ring homomorphism, so it
    commutes with products by construction.
    """
    ctx = p.context
    bound: dict[SymKey, GradedPolynomial] = {}
    for key, poly in bindings.items():
        if isinstance(key, str):
            key = (key, 0)
        if poly.context is not ctx:
            raise ValueError("binding belongs to a different symbol context")
        want = ctx.parity_of(key)
        got = poly.parity()
        if not poly.is_zero() and got != want:
            raise ParityError(f"binding for {key} must have parity {want}")
        bound[key] = poly
    out = ctx.zero()
    for mono, coeff in p.terms.items():
        term = ctx.const(coeff)
        for key, exp in mono:
            factor = bound.get(key)
            if factor is None:
                factor = GradedPolynomial(ctx, {((key, 1),): 1})
            term = term * factor**exp
        out = out + term
    return out


def bind_constants(p: GradedPolynomial, values: Mapping[str, object]) -> GradedPolynomial:
    """Substitute exact numeric values for (even) symbols."""
    ctx = p.context
    bindings = {name: ctx.const(v) for name, v in values.items()}
    return substitute(p, bindings)


# -- printing -------------------------------------------------------------------


def _frac_str(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _coeff_parts(c: CRational, has_mono: bool) -> tuple[str, str]:
    """Split a coefficient into a sign character and a printable body."""
    re_, im = c.re, c.im
    if im == 0:
        sign = "-" if re_ < 0 else "+"
        mag = abs(re_)
        body = "" if (mag == 1 and has_mono) else _frac_str(mag)
    elif re_ == 0:
        sign = "-" if im < 0 else "+"
        mag = abs(im)
        body = "i" if mag == 1 else f"{_frac_str(mag)}*i"
    else:
        sign = "+"
        im_mag = abs(im)
        im_body = "i" if im_mag == 1 else f"{_frac_str(im_mag)}*i"
        joiner = "+" if im > 0 else "-"
        body = f"({_frac_str(re_)}{joiner}{im_body})"
    return sign, body


def _factor_str(key: SymKey, exp: int) -> str:
    name, dot = key
    core = name
    for _ in range(dot):
        core = f"dot({core})"
    return core if exp == 1 else f"{core}^{exp}"


def format_poly(p: GradedPolynomial) -> str:
    """Deterministic text form; ``parse`` inverts it exactly."""
    if not p.terms:
        return "0"
    ctx = p.context

    def mono_key(mono: Mono):
        return (sum(e for _, e in mono), tuple((ctx.sort_key(k), e) for k, e in mono))

    pieces = []
    for mono in sorted(p.terms, key=mono_key):
        coeff = p.terms[mono]
        sign, body = _coeff_parts(coeff, has_mono=bool(mono))
        factors = "*".join(_factor_str(k, e) for k, e in mono)
        if body and factors:
            text = f"{body}*{factors}"
        else:
            text = factors or body or "1"
        pieces.append((sign, text))
    first_sign, first_text = pieces[0]
    out = ("-" if first_sign == "-" else "") + first_text
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


# -- parsing --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])"
)


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _tokenize(text: str) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            out.append(_Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(_Token("end", "", len(text)))
    return out


class _Parser:
    """Recursive-descent parser for the polynomial grammar.

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('-'|'+') unary | power
    power  := atom ('^' NUMBER)*
    atom   := NUMBER | 'i' | IDENT | 'dot' '(' expr ')' | '(' expr ')'

    Division is allowed only by nonzero constant subexpressions, which keeps
    everything inside the polynomial ring.
    """

    def __init__(self, ctx: SymbolContext, text: str):
        self.ctx = ctx
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self) -> _Token:
        return self.tokens[self.k]

    def advance(self) -> _Token:
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def parse(self) -> GradedPolynomial:
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected token {tok.text!r}", tok.pos)
        return value

    def expr(self) -> GradedPolynomial:
        value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.advance()
            rhs = self.term()
            value = value + rhs if op.text == "+" else value - rhs
        return value

    def term(self) -> GradedPolynomial:
        value = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                value = self._checked_mul(value, rhs, op.pos)
            else:
                value = self._divide(value, rhs, op.pos)
        return value

    def unary(self) -> GradedPolynomial:
        tok = self.peek()
        if tok.text == "-":
            self.advance()
            return -self.unary()
        if tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> GradedPolynomial:
        value = self.atom()
        while self.peek().text == "^":
            op = self.advance()
            tok = self.advance()
            if tok.kind != "num":
                raise ParseError("exponent must be an integer literal", tok.pos)
            n = int(tok.text)
            result = value**n
            if result.is_zero() and not value.is_zero() and n >= 2:
                raise OddPowerError("odd symbol raised to a power above one", op.pos)
            value = result
        return value

    def atom(self) -> GradedPolynomial:
        tok = self.advance()
        if tok.kind == "num":
            return self.ctx.const(int(tok.text))
        if tok.kind == "ident":
            if tok.text == "i":
                return self.ctx.imaginary()
            if tok.text == "dot":
                opener = self.advance()
                if opener.text != "(":
                    raise ParseError("expected '(' after dot", opener.pos)
                inner = self.expr()
                closer = self.advance()
                if closer.text != ")":
                    raise ParseError("expected ')'", closer.pos)
                return formal_time_derivative(inner)
            if not self.ctx.declared(tok.text):
                raise UnknownSymbolError(f"unknown symbol {tok.text!r}", tok.pos)
            return self.ctx.sym(tok.text)
        if tok.text == "(":
            inner = self.expr()
            closer = self.advance()
            if closer.text != ")":
                raise ParseError("expected ')'", closer.pos)
            return inner
        raise ParseError(f"expected a value, got {tok.text!r}" if tok.text else "unexpected end of input", tok.pos)

    def _checked_mul(self, a, b, pos) -> GradedPolynomial:
        result = a * b
        if result.is_zero() and not a.is_zero() and not b.is_zero():
            raise OddPowerError("product vanishes: odd symbol squared", pos)
        return result

    def _divide(self, a, b, pos) -> GradedPolynomial:
        if not b.is_constant():
            raise ParseError("division only by numeric constants", pos)
        value = b.constant_part()
        if not value:
            raise ParseError("division by zero", pos)
        return a * (CRational(1) / value)


def parse(ctx: SymbolContext, text: str) -> GradedPolynomial:
    """Parse an expression in the context's symbols."""
    return _Parser(ctx, text).parse()
