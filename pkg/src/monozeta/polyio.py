"""Polynomials with exact rational coefficients, a small parser and renderer."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, MonozetaError


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: ``terms`` maps exponent tuples to nonzero Fractions."""

    variables: tuple
    terms: tuple  # sorted ((exp, coeff), ...)

    def __post_init__(self):
        n = len(self.variables)
        for exp, c in self.terms:
            if len(exp) != n or any(e < 0 for e in exp):
                raise MonozetaError(f"bad exponent vector {exp} for {n} variables")
            if c == 0:
                raise MonozetaError("zero coefficient stored in a polynomial")

    @classmethod
    def from_dict(cls, variables, terms):
        clean = {}
        for exp, c in terms.items():
            c = Fraction(c)
            if c:
                clean[tuple(int(e) for e in exp)] = c
        return cls(tuple(variables), tuple(sorted(clean.items())))

    @property
    def nvars(self):
        return len(self.variables)

    def as_dict(self):
        return dict(self.terms)

    def is_zero(self):
        return not self.terms

    def support(self):
        return tuple(exp for exp, _ in self.terms)

    def constant(self):
        return self.as_dict().get((0,) * self.nvars, Fraction(0))

    def __str__(self):
        return render(self)


def support_and_constant(f):
    return f.support(), f.constant()


def subtract_constant(f, a):
    d = f.as_dict()
    zero = (0,) * f.nvars
    d[zero] = d.get(zero, Fraction(0)) - Fraction(a)
    return Polynomial.from_dict(f.variables, d)


def restrict_to_subset(f, S):
    """Keep the terms whose exponent vanishes outside the 0-based index set ``S``."""
    S = frozenset(S)
    if any(not 0 <= i < f.nvars for i in S):
        raise MonozetaError(f"variable index out of range in {sorted(S)}")
    keep = {e: c for e, c in f.terms
            if all(e[i] == 0 for i in range(f.nvars) if i not in S)}
    return Polynomial.from_dict(f.variables, keep)


def permute(f, perm):
    """Rename variable ``i`` to position ``perm[i]``."""
    n = f.nvars
    if sorted(perm) != list(range(n)):
        raise MonozetaError("not a permutation")
    variables = [None] * n
    for i, j in enumerate(perm):
        variables[j] = f.variables[i]
    terms = {}
    for e, c in f.terms:
        new = [0] * n
        for i, j in enumerate(perm):
            new[j] = e[i]
        terms[tuple(new)] = c
    return Polynomial.from_dict(variables, terms)


# ---------------------------------------------------------------------------
# parsing


def _mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _add(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.vars = {name: i for i, name in enumerate(variables)}
        self.n = len(variables)
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def nat(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            if self.peek() == "-":
                raise ParseError("negative exponent", self.pos)
            raise ParseError("expected a nonnegative integer", start)
        return int(self.text[start:self.pos])

    def constant(self, c):
        return {(0,) * self.n: Fraction(c)} if c else {}

    def expr(self):
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = _add({}, self.term(), sign)
        while self.peek() in ("+", "-"):
            sign = 1 if self.text[self.pos] == "+" else -1
            self.pos += 1
            acc = _add(acc, self.term(), sign)
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() == "*":
            self.pos += 1
            acc = _mul(acc, self.factor())
        return acc

    def power(self, base):
        if self.peek() != "^":
            return base
        self.pos += 1
        k = self.nat()
        out = self.constant(1)
        for _ in range(k):
            out = _mul(out, base)
        return out

    def factor(self):
        ch = self.peek()
        if not ch:
            raise ParseError("unexpected end of input", self.pos)
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return self.power(inner)
        if ch.isdigit():
            num = self.nat()
            if self.peek() == "/":
                self.pos += 1
                den = self.nat()
                if den == 0:
                    raise ParseError("zero denominator", self.pos)
                return self.constant(Fraction(num, den))
            return self.constant(num)
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.vars:
                raise ParseError(f"unknown variable {name!r}", start)
            e = [0] * self.n
            e[self.vars[name]] = 1
            return self.power({tuple(e): Fraction(1)})
        raise ParseError(f"unexpected character {ch!r}", self.pos)


def parse_polynomial(text, variables):
    """Parse ``text`` over the ordered variable names.

    Grammar: sums and differences of products of rationals ``p`` or ``p/q``,
    variables with optional ``^k`` and parenthesized sub-expressions (which
    may also carry ``^k``).  A leading sign is accepted.  Coefficients must
    be joined to variables with ``*``.
    """
    variables = tuple(variables)
    if len(set(variables)) != len(variables):
        raise ParseError("duplicate variable names")
    if not variables:
        raise ParseError("at least one variable is required")
    p = _Parser(text, variables)
    if not p.peek():
        raise ParseError("empty expression", 0)
    terms = p.expr()
    if p.peek():
        raise ParseError(f"unexpected {p.peek()!r}", p.pos)
    return Polynomial.from_dict(variables, terms)


def _fmt_coeff(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(f):
    """Text form accepted back by :func:`parse_polynomial`."""
    if not f.terms:
        return "0"
    pieces = []
    # highest total degree first reads naturally
    for exp, c in sorted(f.terms, key=lambda t: (-sum(t[0]), tuple(-e for e in t[0]))):
        mono = [v if e == 1 else f"{v}^{e}" for v, e in zip(f.variables, exp) if e]
        mag = abs(c)
        if not mono:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(mono)
        else:
            body = _fmt_coeff(mag) + "*" + "*".join(mono)
        sign = "-" if c < 0 else "+"
        if not pieces:
            pieces.append(body if sign == "+" else "-" + body)
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def polynomial_to_json(f):
    return {"vars": list(f.variables),
            "terms": [{"exp": list(e), "num": c.numerator, "den": c.denominator}
                      for e, c in f.terms]}


def polynomial_from_json(obj):
    variables = obj["vars"]
    terms = {}
    for t in obj["terms"]:
        e = tuple(int(x) for x in t["exp"])
        if len(e) != len(variables) or any(x < 0 for x in e):
            raise ParseError(f"bad exponent vector {list(e)}")
        terms[e] = terms.get(e, 0) + Fraction(int(t["num"]), int(t.get("den", 1)))
    return Polynomial.from_dict(variables, terms)
