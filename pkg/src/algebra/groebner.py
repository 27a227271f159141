"""Buchberger's algorithm over the rationals.

Provides reduced Groebner bases, multivariate division, ideal membership and
quotient-algebra dimensions, both global (standard monomials of C[x]/I) and
local at the origin (through m-adic truncation, m = <x_1, ..., x_n>).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from src.algebra.poly import (
    Monomial,
    MonomialOrder,
    Polynomial,
    monomial_divides,
    monomial_lcm,
    monomial_quotient,
    monomials_of_degree,
)
from src.errors import EmptyBasisError, InvalidParameterError, LimitExceeded, VariableMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Limits:
    """Termination guards. Exceeding one raises `LimitExceeded`."""

    max_polynomial_degree: int = 60
    max_pair_count: int = 20000
    max_local_order: int = 40

    def __post_init__(self):
        for name in ('max_polynomial_degree', 'max_pair_count', 'max_local_order'):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f'{name} must be positive')


@dataclass(frozen=True)
class Ideal:
    variables: Tuple[str, ...]
    generators: Tuple[Polynomial, ...]
    order: MonomialOrder = MonomialOrder.DEGREVLEX

    @classmethod
    def of(cls, generators: Iterable[Polynomial],
           order: MonomialOrder = MonomialOrder.DEGREVLEX) -> 'Ideal':
        generators = list(generators)
        if not generators:
            raise EmptyBasisError('an ideal needs at least one generator')
        variables = generators[0].variables
        for g in generators[1:]:
            if g.variables != variables:
                raise VariableMismatchError(
                    f'generators over different variables: {variables} vs {g.variables}')
        order = MonomialOrder.parse(order)
        kept = tuple(g.with_order(order) for g in generators if not g.is_zero())
        return cls(variables, kept, order)

    def with_order(self, order: MonomialOrder) -> 'Ideal':
        return Ideal.of(self.generators or [Polynomial.zero(self.variables)], order)

    def extend(self, polys: Iterable[Polynomial]) -> 'Ideal':
        return Ideal.of(list(self.generators) + list(polys) or
                        [Polynomial.zero(self.variables)], self.order)


@dataclass(frozen=True)
class GroebnerBasis:
    variables: Tuple[str, ...]
    elements: Tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = True

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def is_unit(self) -> bool:
        return any(g.is_constant() for g in self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class Finite:
    n: int
    standard_monomials: Tuple[Monomial, ...] = field(default=(), compare=False)

    is_finite = True

    def __str__(self):
        return str(self.n)


@dataclass(frozen=True)
class Infinite:
    is_finite = False

    def __str__(self):
        return 'Infinite'


INFINITE = Infinite()
QuotientDimension = Union[Finite, Infinite]


# --- division -------------------------------------------------------------------

def normal_form(f: Polynomial, basis: Union[GroebnerBasis, Sequence[Polynomial]],
                order: Optional[MonomialOrder] = None) -> Polynomial:
    """Fully reduced remainder of f on division by `basis`."""
    if isinstance(basis, GroebnerBasis):
        order = order or basis.order
        basis = basis.elements
    basis = list(basis)
    if not basis:
        raise EmptyBasisError('normal form against an empty basis')
    order = MonomialOrder.parse(order or f.order)
    for g in basis:
        f._check(g)
    key = order.key
    leads = [(g.leading_monomial(order), g.leading_coefficient(order), g)
             for g in basis if not g.is_zero()]

    pending = dict(f.terms)
    remainder = {}
    while pending:
        mono = max(pending, key=key)
        coeff = pending[mono]
        for lead, lead_coeff, g in leads:
            if monomial_divides(lead, mono):
                shift = monomial_quotient(mono, lead)
                factor = coeff / lead_coeff
                for gm, gc in g.terms.items():
                    target = tuple(a + b for a, b in zip(gm, shift))
                    value = pending.get(target, 0) - factor * gc
                    if value:
                        pending[target] = value
                    else:
                        pending.pop(target, None)
                break
        else:
            remainder[mono] = coeff
            del pending[mono]
    return Polynomial(f.variables, remainder, f.order)


def s_polynomial(f: Polynomial, g: Polynomial, order: Optional[MonomialOrder] = None) -> Polynomial:
    order = MonomialOrder.parse(order or f.order)
    lf, cf = f.leading_term(order)
    lg, cg = g.leading_term(order)
    lcm = monomial_lcm(lf, lg)
    return (f.mul_monomial(monomial_quotient(lcm, lf), 1 / cf)
            - g.mul_monomial(monomial_quotient(lcm, lg), 1 / cg))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _check_degree(p: Polynomial, limits: Limits) -> None:
    degree = p.total_degree()
    if degree > limits.max_polynomial_degree:
        raise LimitExceeded('polynomial degree', degree, limits.max_polynomial_degree)


def _unit_basis(variables, order) -> GroebnerBasis:
    return GroebnerBasis(tuple(variables), (Polynomial.constant(variables, 1, order),), order)


def reduce_basis(polys: Iterable[Polynomial], order: MonomialOrder) -> GroebnerBasis:
    """Minimalize, interreduce and normalize a Groebner basis."""
    order = MonomialOrder.parse(order)
    key = order.key
    polys = [p.with_order(order).monic(order) for p in polys if not p.is_zero()]
    if not polys:
        raise EmptyBasisError('cannot reduce an empty basis')
    variables = polys[0].variables
    if any(p.is_constant() for p in polys):
        return _unit_basis(variables, order)

    polys.sort(key=lambda p: key(p.leading_monomial()))
    minimal: List[Polynomial] = []
    for p in polys:
        lead = p.leading_monomial()
        if any(monomial_divides(q.leading_monomial(), lead) for q in minimal):
            continue
        minimal.append(p)

    reduced = []
    for i, p in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        reduced.append(normal_form(p, others, order).monic(order) if others else p)
    reduced.sort(key=lambda p: key(p.leading_monomial()))
    return GroebnerBasis(variables, tuple(reduced), order, reduced=True)


def buchberger(ideal: Ideal, limits: Limits = Limits()) -> GroebnerBasis:
    """Reduced Groebner basis of `ideal` under `ideal.order`.

    Uses the coprime-leading-term and chain criteria with the normal selection
    strategy (smallest lcm first). `limits.max_pair_count` bounds the number of
    S-polynomials actually reduced.
    """
    order = ideal.order
    key = order.key
    basis: List[Polynomial] = []
    for g in ideal.generators:
        _check_degree(g, limits)
        basis.append(g.primitive(order))
    if not basis:
        return GroebnerBasis(ideal.variables, (), order)
    if any(g.is_constant() for g in basis):
        return _unit_basis(ideal.variables, order)

    leads: List[Monomial] = [g.leading_monomial() for g in basis]
    pairs = set()

    def add_pairs(new: int) -> None:
        for k in range(new):
            # S-polynomial of two monomials is zero
            if len(basis[k].terms) == 1 and len(basis[new].terms) == 1:
                continue
            pairs.add((k, new))

    for j in range(len(basis)):
        add_pairs(j)

    reduced_count = 0
    while pairs:
        i, j = min(pairs, key=lambda p: (key(monomial_lcm(leads[p[0]], leads[p[1]])), p))
        pairs.discard((i, j))
        lcm = monomial_lcm(leads[i], leads[j])
        if _coprime(leads[i], leads[j]):
            continue
        if any(k != i and k != j and monomial_divides(leads[k], lcm)
               and (min(i, k), max(i, k)) not in pairs
               and (min(j, k), max(j, k)) not in pairs
               for k in range(len(basis))):
            continue

        reduced_count += 1
        if reduced_count > limits.max_pair_count:
            raise LimitExceeded('pair count', reduced_count, limits.max_pair_count)
        h = normal_form(s_polynomial(basis[i], basis[j], order), basis, order)
        if h.is_zero():
            continue
        h = h.primitive(order)
        _check_degree(h, limits)
        if h.is_constant():
            return _unit_basis(ideal.variables, order)
        basis.append(h)
        leads.append(h.leading_monomial())
        add_pairs(len(basis) - 1)

    logger.debug('buchberger: %d generators, %d S-polynomials reduced, %d basis elements',
                 len(ideal.generators), reduced_count, len(basis))
    return reduce_basis(basis, order)


# --- quotient algebra -----------------------------------------------------------

def quotient_dimension(basis: GroebnerBasis) -> QuotientDimension:
    """Dimension of C[x]/I from the standard monomials of a reduced basis."""
    if basis.is_unit():
        return Finite(0, ())
    leads = basis.leading_monomials()
    bounds = []
    for v in range(len(basis.variables)):
        pure = [lead[v] for lead in leads
                if lead[v] and all(e == 0 for w, e in enumerate(lead) if w != v)]
        if not pure:
            return INFINITE
        bounds.append(min(pure))
    key = basis.order.key
    standard = [m for m in itertools.product(*(range(b) for b in bounds))
                if not any(monomial_divides(lead, m) for lead in leads)]
    standard.sort(key=key)
    return Finite(len(standard), tuple(standard))


def ideal_membership(f: Polynomial, basis: GroebnerBasis) -> bool:
    if not basis.elements:
        return f.is_zero()
    return normal_form(f, basis).is_zero()


def groebner_basis(generators: Sequence[Polynomial],
                   order: MonomialOrder = MonomialOrder.DEGREVLEX,
                   limits: Limits = Limits()) -> GroebnerBasis:
    return buchberger(Ideal.of(generators, order), limits)


def _truncate(p: Polynomial, n: int) -> Polynomial:
    return Polynomial(p.variables, {m: c for m, c in p.terms.items() if sum(m) < n}, p.order)


def truncated_dimension(ideal: Ideal, n: int, limits: Limits = Limits()) -> Finite:
    """dim C[x]/(I + m^n), m the maximal ideal of the origin."""
    if n < 1:
        raise InvalidParameterError('truncation order must be >= 1')
    order = MonomialOrder.DEGREVLEX
    variables = ideal.variables
    gens = [_truncate(g.with_order(order), n) for g in ideal.generators]
    gens.extend(Polynomial.monomial(variables, m, 1, order)
                for m in monomials_of_degree(len(variables), n))
    basis = buchberger(Ideal.of(gens, order), limits)
    dim = quotient_dimension(basis)
    logger.debug('truncated dimension at order %d: %s', n, dim)
    return dim


def local_quotient_dimension(ideal: Ideal, limits: Limits = Limits(),
                             global_dimension: Optional[QuotientDimension] = None) -> QuotientDimension:
    """Dimension of the local algebra of C[x]/I at the origin.

    With a finite global dimension G the local algebra is killed by m^G, so one
    truncation at order G + 1 is exact. Otherwise orders grow until two
    consecutive truncations agree (then m^n lies in I locally by Nakayama) or
    `limits.max_local_order` is passed, which means Infinite.
    """
    if global_dimension is None:
        global_dimension = quotient_dimension(buchberger(ideal, limits))
    if isinstance(global_dimension, Finite):
        return truncated_dimension(ideal, global_dimension.n + 1, limits)

    previous = truncated_dimension(ideal, 1, limits)
    for n in range(2, limits.max_local_order + 1):
        current = truncated_dimension(ideal, n, limits)
        if current.n == previous.n:
            return current
        previous = current
    logger.debug('local dimension did not stabilize by order %d', limits.max_local_order)
    return INFINITE
