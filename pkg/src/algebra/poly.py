"""Exact sparse multivariate polynomials over the rationals.

A `Polynomial` is an immutable map from exponent tuples (`Monomial`) to
nonzero `fractions.Fraction` coefficients over a fixed, ordered list of
variable names. Arithmetic between polynomials over different variable lists
is an error rather than an implicit promotion.
"""
from __future__ import annotations

import enum
import math
from fractions import Fraction
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from src.errors import CombkitError, VariableMismatchError

Rational = Fraction
Monomial = Tuple[int, ...]
Coefficient = Union[Fraction, int]


def parse_rational(text: str) -> Fraction:
    """Parse `p`, `p/q` or `-p/q` into a reduced Fraction."""
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise CombkitError(f'not a rational number: {text!r}') from exc
    return value


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


class MonomialOrder(enum.Enum):
    DEGREVLEX = 'degrevlex'
    LEX = 'lex'

    def key(self, monomial: Monomial):
        """Sort key: a larger key means a larger monomial."""
        if self is MonomialOrder.LEX:
            return monomial
        return (sum(monomial), tuple(-e for e in reversed(monomial)))

    @classmethod
    def parse(cls, name: Union[str, 'MonomialOrder']) -> 'MonomialOrder':
        if isinstance(name, MonomialOrder):
            return name
        try:
            return cls(str(name).lower())
        except ValueError as exc:
            raise CombkitError(f'unknown monomial order {name!r}') from exc


# --- monomial helpers -----------------------------------------------------------

def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True when a divides b."""
    return all(x <= y for x, y in zip(a, b))


def monomial_quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def monomials_of_degree(nvars: int, degree: int) -> Iterator[Monomial]:
    """All exponent vectors with the given total degree."""
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


def monomials_up_to(nvars: int, degree: int) -> List[Monomial]:
    """All exponent vectors with total degree <= degree, lowest degree first."""
    out: List[Monomial] = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ('variables', 'terms', 'order')

    def __init__(self, variables: Sequence[str], terms: Mapping[Monomial, Coefficient] = None,
                 order: MonomialOrder = MonomialOrder.DEGREVLEX):
        variables = tuple(variables)
        n = len(variables)
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise VariableMismatchError(f'monomial {mono} does not match {n} variables')
            if any(e < 0 for e in mono):
                raise CombkitError(f'negative exponent in monomial {mono}')
            total = clean.get(mono, Fraction(0)) + Fraction(coeff)
            if total:
                clean[mono] = total
            else:
                clean.pop(mono, None)
        object.__setattr__(self, 'variables', variables)
        object.__setattr__(self, 'terms', MappingProxyType(clean))
        object.__setattr__(self, 'order', MonomialOrder.parse(order))

    def __setattr__(self, name, value):
        raise AttributeError('Polynomial is immutable')

    def __reduce__(self):
        return (Polynomial, (self.variables, dict(self.terms), self.order))

    # --- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str], order: MonomialOrder = MonomialOrder.DEGREVLEX) -> 'Polynomial':
        return cls(variables, {}, order)

    @classmethod
    def constant(cls, variables: Sequence[str], value: Coefficient,
                 order: MonomialOrder = MonomialOrder.DEGREVLEX) -> 'Polynomial':
        return cls(variables, {(0,) * len(variables): value}, order)

    @classmethod
    def variable(cls, variables: Sequence[str], name: str,
                 order: MonomialOrder = MonomialOrder.DEGREVLEX) -> 'Polynomial':
        variables = tuple(variables)
        if name not in variables:
            raise VariableMismatchError(f'unknown variable {name!r}')
        mono = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {mono: 1}, order)

    @classmethod
    def monomial(cls, variables: Sequence[str], exponents: Monomial, coeff: Coefficient = 1,
                 order: MonomialOrder = MonomialOrder.DEGREVLEX) -> 'Polynomial':
        return cls(variables, {tuple(exponents): coeff}, order)

    def with_order(self, order: MonomialOrder) -> 'Polynomial':
        order = MonomialOrder.parse(order)
        if order is self.order:
            return self
        return Polynomial(self.variables, self.terms, order)

    def _like(self, terms: Mapping[Monomial, Coefficient]) -> 'Polynomial':
        return Polynomial(self.variables, terms, self.order)

    # --- queries --------------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def sorted_terms(self, order: MonomialOrder = None) -> List[Tuple[Monomial, Fraction]]:
        """Terms from largest to smallest under `order` (default: own order)."""
        key = MonomialOrder.parse(order or self.order).key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder = None) -> Monomial:
        if not self.terms:
            raise CombkitError('zero polynomial has no leading term')
        key = MonomialOrder.parse(order or self.order).key
        return max(self.terms, key=key)

    def leading_coefficient(self, order: MonomialOrder = None) -> Fraction:
        return self.terms[self.leading_monomial(order)]

    def leading_term(self, order: MonomialOrder = None) -> Tuple[Monomial, Fraction]:
        mono = self.leading_monomial(order)
        return mono, self.terms[mono]

    # --- arithmetic -----------------------------------------------------------

    def _check(self, other: 'Polynomial') -> None:
        if self.variables != other.variables:
            raise VariableMismatchError(
                f'variable lists differ: {self.variables} vs {other.variables}')

    def _coerce(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, 0) + coeff
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = monomial_mul(m1, m2)
                terms[mono] = terms.get(mono, 0) + c1 * c2
        return self._like(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise CombkitError('polynomial powers must be non-negative integers')
        result = Polynomial.constant(self.variables, 1, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, factor: Coefficient) -> 'Polynomial':
        factor = Fraction(factor)
        if not factor:
            return Polynomial.zero(self.variables, self.order)
        return self._like({m: c * factor for m, c in self.terms.items()})

    def mul_monomial(self, mono: Monomial, coeff: Coefficient = 1) -> 'Polynomial':
        coeff = Fraction(coeff)
        return self._like({monomial_mul(m, mono): c * coeff for m, c in self.terms.items()})

    def content(self) -> Fraction:
        """gcd of numerators over lcm of denominators (0 for the zero polynomial)."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self, order: MonomialOrder = None) -> 'Polynomial':
        """Divide out the content; the leading coefficient becomes positive."""
        if not self.terms:
            return self
        content = self.content()
        if self.leading_coefficient(order) < 0:
            content = -content
        return self.scale(1 / content)

    def monic(self, order: MonomialOrder = None) -> 'Polynomial':
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coefficient(order))

    def derivative(self, var: str) -> 'Polynomial':
        return partial_derivative(self, var)

    def evaluate(self, point: Sequence[Coefficient]) -> Fraction:
        return evaluate(self, point)

    # --- comparison / display -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_term() == other
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def format(self, order: MonomialOrder = None) -> str:
        """Canonical text: `x^4 + 3/2*x^2*y^2 + y^4`."""
        terms = self.sorted_terms(order)
        if not terms:
            return '0'
        pieces: List[str] = []
        for i, (mono, coeff) in enumerate(terms):
            factors = [name if e == 1 else f'{name}^{e}'
                       for name, e in zip(self.variables, mono) if e]
            magnitude = abs(coeff)
            if not factors:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = '*'.join(factors)
            else:
                body = format_rational(magnitude) + '*' + '*'.join(factors)
            if i == 0:
                pieces.append('-' + body if coeff < 0 else body)
            else:
                pieces.append(('- ' if coeff < 0 else '+ ') + body)
        return ' '.join(pieces)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f'Polynomial({self.format()!r}, variables={self.variables})'


# --- ring operations as free functions -----------------------------------------

def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def mul(p: Polynomial, q: Union[Polynomial, Coefficient]) -> Polynomial:
    if isinstance(q, Polynomial):
        p._check(q)
    return p * q


def scale(p: Polynomial, factor: Coefficient) -> Polynomial:
    return p.scale(factor)


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    """Exact formal derivative with respect to `var`."""
    if var not in p.variables:
        raise VariableMismatchError(f'unknown variable {var!r}')
    idx = p.variables.index(var)
    terms: Dict[Monomial, Fraction] = {}
    for mono, coeff in p.terms.items():
        e = mono[idx]
        if e:
            lowered = mono[:idx] + (e - 1,) + mono[idx + 1:]
            terms[lowered] = coeff * e
    return p._like(terms)


def evaluate(p: Polynomial, point: Sequence[Coefficient]) -> Fraction:
    """Exact value of p at a rational point (one value per variable)."""
    point = [Fraction(v) for v in point]
    if len(point) != p.nvars:
        raise VariableMismatchError(f'expected {p.nvars} values, got {len(point)}')
    total = Fraction(0)
    for mono, coeff in p.terms.items():
        value = coeff
        for v, e in zip(point, mono):
            if e:
                value *= v ** e
        total += value
    return total


def gradient(p: Polynomial) -> List[Polynomial]:
    return [partial_derivative(p, v) for v in p.variables]


def common_variables(polys: Iterable[Polynomial]) -> Tuple[str, ...]:
    polys = list(polys)
    if not polys:
        raise CombkitError('no polynomials given')
    first = polys[0]
    for q in polys[1:]:
        first._check(q)
    return first.variables
