"""
Expression syntax for polynomial compositions over a base function

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := ('-' | '+') factor | power
    power   := atom ('^' integer)?
    atom    := number | 'i' | variable | series | exp | '(' expr ')'
    variable:= 'D' digits | 'D{' digits '}' | 'zeta' "'"*
    series  := 'series{' const (',' const)* (';' 'shift' '=' const)? '}'
    exp     := 'exp{' const '}'

D<k> (or zeta followed by k primes) is X_k, the k-th derivative of the base.
series{c1, c2, ...; shift=x} is sum c_n n^-(s+x); exp{lam} is e^(-lam s).
Numbers take an optional trailing i: 2, 0.5i, 1e-3, (2+0i).
"""
import logging
import math
import re
from typing import Dict, List, NamedTuple, Optional, Tuple

from core.exceptions import DegreeCapExceeded, ParseError
from core.utils.analytic import AnalyticFunction
from core.utils.numerics import setting
from dirichlet.series import (
    GeneralDirichletSeries,
    constant_series,
    make_ordinary,
    ring_add,
    ring_mul,
    ring_neg,
    single_term,
)
from polynomials.composer import ComposedFunction, DirichletPolynomial

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"(?:"
    r"(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^(){},;='])"
    r")"
)
_VARIABLE = re.compile(r"D(\d+)")

Terms = Dict[Tuple[int, ...], GeneralDirichletSeries]


class Token(NamedTuple):
    kind: str  # number, name, op, end
    value: object
    pos: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        match = _TOKEN.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
        start = pos
        if match.group("number") is not None:
            value = float(match.group("number"))
            tokens.append(Token("number", complex(0, value) if match.group("imag") else complex(value), start))
        elif match.group("name") is not None:
            tokens.append(Token("name", match.group("name"), start))
        else:
            tokens.append(Token("op", match.group("op"), start))
        pos = match.end()
    tokens.append(Token("end", None, len(text)))
    return tokens


# Term algebra. Degrees all have the same length inside one Terms dict.


def _width(terms: Terms) -> int:
    return max((len(d) for d in terms), default=1)


def _pad(terms: Terms, width: int) -> Terms:
    return {d + (0,) * (width - len(d)): c for d, c in terms.items()}


def _clean(terms: Terms) -> Terms:
    return {d: c for d, c in terms.items() if not c.is_zero}


def _add(a: Terms, b: Terms) -> Terms:
    width = max(_width(a), _width(b))
    out = dict(_pad(a, width))
    for degree, coeff in _pad(b, width).items():
        out[degree] = ring_add(out[degree], coeff) if degree in out else coeff
    return _clean(out)


def _neg(a: Terms) -> Terms:
    return {d: ring_neg(c) for d, c in a.items()}


def _mul(a: Terms, b: Terms) -> Terms:
    width = max(_width(a), _width(b))
    out: Terms = {}
    for d1, c1 in _pad(a, width).items():
        for d2, c2 in _pad(b, width).items():
            degree = tuple(x + y for x, y in zip(d1, d2))
            product = ring_mul(c1, c2)
            out[degree] = ring_add(out[degree], product) if degree in out else product
    return _clean(out)


def _total_degree(terms: Terms) -> int:
    return max((sum(d) for d in terms), default=0)


def _constant(value) -> Terms:
    coeff = value if isinstance(value, GeneralDirichletSeries) else constant_series(value)
    return _clean({(0,): coeff})


def _variable(j: int) -> Terms:
    return {tuple(1 if i == j else 0 for i in range(j + 1)): constant_series(1.0)}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.max_degree = setting("poly.max_total_degree")
        self.max_vars = setting("poly.max_vars")

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def at(self, op: str) -> bool:
        return self.current.kind == "op" and self.current.value == op

    def expect(self, op: str) -> Token:
        if not self.at(op):
            found = "end of input" if self.current.kind == "end" else repr(self.current.value)
            raise ParseError(f"expected {op!r}, found {found}", position=self.current.pos)
        return self.advance()

    def parse(self) -> Terms:
        terms = self.expr()
        if self.current.kind != "end":
            raise ParseError(f"unexpected {self.current.value!r}", position=self.current.pos)
        return terms

    def expr(self) -> Terms:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().value
            right = self.term()
            left = _add(left, right if op == "+" else _neg(right))
        return left

    def term(self) -> Terms:
        left = self.factor()
        while self.at("*"):
            pos = self.advance().pos
            left = self._checked(_mul(left, self.factor()), pos)
        return left

    def factor(self) -> Terms:
        if self.at("-"):
            self.advance()
            return _neg(self.factor())
        if self.at("+"):
            self.advance()
            return self.factor()
        return self.power()

    def power(self) -> Terms:
        base = self.atom()
        if not self.at("^"):
            return base
        pos = self.advance().pos
        token = self.current
        value = token.value if token.kind == "number" else None
        if value is None or value.imag or value.real != int(value.real) or value.real < 0:
            raise ParseError("exponent must be a non-negative integer", position=token.pos)
        self.advance()
        exponent = int(value.real)
        if _total_degree(base) * exponent > self.max_degree:
            raise DegreeCapExceeded(
                f"power of total degree {_total_degree(base) * exponent} exceeds cap {self.max_degree}", position=pos
            )
        result = _constant(1.0)
        for _ in range(exponent):
            result = _mul(result, base)
        return result

    def atom(self) -> Terms:
        token = self.current
        if token.kind == "number":
            self.advance()
            return _constant(token.value)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if token.kind == "name":
            self.advance()
            return self.named(token)
        if token.kind == "end":
            raise ParseError("unexpected end of input", position=token.pos)
        raise ParseError(f"unexpected {token.value!r}", position=token.pos)

    def named(self, token: Token) -> Terms:
        name = token.value
        if name == "i":
            return _constant(1j)
        if name == "zeta":
            order = 0
            while self.at("'"):
                self.advance()
                order += 1
            return self._var(order, token.pos)
        if name == "D" and self.at("{"):
            self.advance()
            index = self.integer()
            self.expect("}")
            return self._var(index, token.pos)
        match = _VARIABLE.fullmatch(name)
        if match:
            return self._var(int(match.group(1)), token.pos)
        if name == "series":
            return _constant(self.series())
        if name == "exp":
            self.expect("{")
            lam = self.real_constant()
            self.expect("}")
            return _constant(single_term(1.0, lam))
        raise ParseError(f"unknown name {name!r}", position=token.pos)

    def series(self) -> GeneralDirichletSeries:
        self.expect("{")
        coeffs = [self.constant()]
        while self.at(","):
            self.advance()
            coeffs.append(self.constant())
        shift = 0.0
        if self.at(";"):
            self.advance()
            key = self.current
            if key.kind != "name" or key.value != "shift":
                raise ParseError("only 'shift' may follow ';' in a series", position=key.pos)
            self.advance()
            self.expect("=")
            shift = self.real_constant()
        self.expect("}")
        return make_ordinary(coeffs, shift=shift)

    def integer(self) -> int:
        token = self.current
        if token.kind != "number" or token.value.imag or token.value.real != int(token.value.real):
            raise ParseError("expected an integer", position=token.pos)
        self.advance()
        return int(token.value.real)

    def constant(self) -> complex:
        pos = self.current.pos
        terms = self.expr()
        if not terms:
            return 0j
        if list(terms) != [(0,) * _width(terms)] or not next(iter(terms.values())).is_constant:
            raise ParseError("expected a number", position=pos)
        return next(iter(terms.values())).constant_value()

    def real_constant(self) -> float:
        pos = self.current.pos
        value = self.constant()
        if value.imag:
            raise ParseError("expected a real number", position=pos)
        return value.real

    def _var(self, j: int, pos: int) -> Terms:
        if j + 1 > self.max_vars:
            raise DegreeCapExceeded(f"X_{j} needs {j + 1} variables, cap is {self.max_vars}", position=pos)
        return _variable(j)

    def _checked(self, terms: Terms, pos: int) -> Terms:
        if _total_degree(terms) > self.max_degree:
            raise DegreeCapExceeded(
                f"product of total degree {_total_degree(terms)} exceeds cap {self.max_degree}", position=pos
            )
        return terms


def parse_polynomial(text: str) -> DirichletPolynomial:
    """
    Parse an expression into a DirichletPolynomial

    Raises:
        ParseError: malformed text (the message carries the position)
        DegreeCapExceeded: the polynomial exceeds the degree, variable or term caps
    """
    if not text or not text.strip():
        raise ParseError("empty expression", position=0)
    terms = _Parser(text).parse()
    if not terms:
        raise ParseError("expression is identically zero", position=0)
    width = _width(terms)
    return DirichletPolynomial(width, _pad(terms, width))


def parse_expression(text: str, base: Optional[AnalyticFunction] = None) -> ComposedFunction:
    """
    Parse an expression into a composition P_s(L, L', ...)

    Args:
        text: Expression, e.g. "D0*D2 - D1^2"
        base: Base function L; zeta when omitted

    Returns:
        ComposedFunction labelled with the expression text
    """
    if base is None:
        from zeta.engine import zeta_function

        base = zeta_function()
    P = parse_polynomial(text)
    logger.debug(f"Parsed {text!r} into a polynomial with {len(P.terms)} terms in {P.num_vars} variables")
    return ComposedFunction(P, base, label=" ".join(text.split()))


# Printing


def _number(value: float) -> str:
    return repr(float(value))


def _complex(z: complex) -> str:
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"({_number(z.real)}{sign}{_number(abs(z.imag))}i)"


def _series_text(coeff: GeneralDirichletSeries) -> Tuple[str, float]:
    """Printed coefficient and the sign to put in front of it"""
    if coeff.is_constant:
        value = coeff.constant_value()
        if value.imag == 0:
            return ("" if abs(value.real) == 1 else _number(abs(value.real))), math.copysign(1.0, value.real)
        return _complex(value), 1.0
    parts = []
    for a, lam in coeff.terms:
        parts.append(_complex(a) if lam == 0 else f"{_complex(a)}*exp{{{_number(lam)}}}")
    return "(" + " + ".join(parts) + ")", 1.0


def _monomial_text(degree: Tuple[int, ...]) -> str:
    return "*".join(f"D{j}" + (f"^{d}" if d > 1 else "") for j, d in enumerate(degree) if d)


def print_polynomial(P: DirichletPolynomial) -> str:
    """
    Text that parse_polynomial reads back into a structurally equal polynomial

    Coefficients print term by term as a*exp{lam}; tail bounds are not printed.
    """
    if any(not coeff.is_exact for coeff in P.terms.values()):
        logger.debug("printing a polynomial with inexact coefficients; tails are dropped")
    pieces = []
    for degree, coeff in P.terms.items():
        coeff_text, sign = _series_text(coeff)
        monomial = _monomial_text(degree)
        if not monomial:
            body = coeff_text or "1.0"
        else:
            body = f"{coeff_text}*{monomial}" if coeff_text else monomial
        if not pieces:
            pieces.append(body if sign > 0 else f"-{body}")
        else:
            pieces.append(f"{'+' if sign > 0 else '-'} {body}")
    return " ".join(pieces)

