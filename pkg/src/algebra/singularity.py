"""Singularity invariants of polynomial germs at the origin.

`milnor_number` and `tjurina_number` are the local invariants at the origin,
dim O/J_f and dim O/(f, J_f), computed by m-adic truncation. The global
quotient dimensions of C[x]/J_f and C[x]/(f, J_f) are reported next to them;
for every catalog family with valid parameters the origin is the only
critical point and the two agree.
"""
from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from src.algebra.groebner import (
    Finite,
    Ideal,
    Limits,
    QuotientDimension,
    buchberger,
    ideal_membership,
    local_quotient_dimension,
    quotient_dimension,
)
from src.algebra.parser import parse_polynomial
from src.algebra.poly import (
    Monomial,
    MonomialOrder,
    Polynomial,
    evaluate,
    format_rational,
    gradient,
    parse_rational,
)
from src.errors import (
    InvalidGermError,
    InvalidParameterError,
    LimitExceeded,
    NonIsolatedError,
)
from src.parallel import parallel_map

logger = logging.getLogger(__name__)

STATUS_OK = 'ok'
STATUS_NON_ISOLATED = 'NonIsolated'
STATUS_LIMIT = 'LimitExceeded'

WEIGHT_TOLERANCE = 1e-12
MAX_WEIGHT_DENOMINATOR = 10 ** 6


@dataclass(frozen=True)
class Germ:
    f: Polynomial
    description: str = ''

    def __post_init__(self):
        origin = [0] * self.f.nvars
        if evaluate(self.f, origin) != 0:
            raise InvalidGermError(f'{self.f} does not vanish at the origin')
        for var, d in zip(self.f.variables, gradient(self.f)):
            if evaluate(d, origin) != 0:
                raise InvalidGermError(f'origin is not critical: d/d{var} is nonzero there')

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.f.variables

    @classmethod
    def from_text(cls, text: str, variables: Sequence[str] = ('x', 'y'),
                  description: str = '') -> 'Germ':
        return cls(parse_polynomial(text, variables), description or text)


@dataclass(frozen=True)
class QuasiHomogeneity:
    """Weights normalized to degree 1, plus the smallest integer rescaling."""

    weights: Tuple[Fraction, ...]
    degree: Fraction
    integer_weights: Tuple[int, ...]
    integer_degree: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'weights': [format_rational(w) for w in self.weights],
            'degree': format_rational(self.degree),
            'integer_weights': list(self.integer_weights),
            'integer_degree': self.integer_degree,
        }


@dataclass(frozen=True)
class InvariantReport:
    germ: Germ
    milnor: QuotientDimension
    tjurina: QuotientDimension
    global_milnor: QuotientDimension
    global_tjurina: QuotientDimension
    moduli_gap: Optional[int]
    quasihomogeneous: Optional[QuasiHomogeneity]
    standard_monomials_mu: Tuple[Monomial, ...] = field(default=())
    status: str = STATUS_OK

    def to_dict(self) -> Dict[str, Any]:
        def dim(d):
            return d.n if isinstance(d, Finite) else None

        return {
            'germ': self.germ.f.format(),
            'variables': list(self.germ.variables),
            'description': self.germ.description,
            'status': self.status,
            'mu': dim(self.milnor),
            'tau': dim(self.tjurina),
            'moduli_gap': self.moduli_gap,
            'global_mu': dim(self.global_milnor),
            'global_tau': dim(self.global_tjurina),
            'quasihomogeneous': self.quasihomogeneous.to_dict() if self.quasihomogeneous else None,
            'standard_monomial_count': len(self.standard_monomials_mu),
        }


# --- ideals and invariants -------------------------------------------------------

def jacobian_ideal(g: Germ, order: MonomialOrder = MonomialOrder.DEGREVLEX) -> Ideal:
    if g.f.is_constant():
        raise InvalidGermError('a constant germ has no Jacobian ideal')
    return Ideal.of(gradient(g.f), order)


def tjurina_ideal(g: Germ, order: MonomialOrder = MonomialOrder.DEGREVLEX) -> Ideal:
    return jacobian_ideal(g, order).extend([g.f])


def global_milnor(g: Germ, limits: Limits = Limits(),
                  order: MonomialOrder = MonomialOrder.DEGREVLEX) -> QuotientDimension:
    return quotient_dimension(buchberger(jacobian_ideal(g, order), limits))


def global_tjurina(g: Germ, limits: Limits = Limits(),
                   order: MonomialOrder = MonomialOrder.DEGREVLEX) -> QuotientDimension:
    return quotient_dimension(buchberger(tjurina_ideal(g, order), limits))


def milnor_number(g: Germ, limits: Limits = Limits(),
                  order: MonomialOrder = MonomialOrder.DEGREVLEX) -> QuotientDimension:
    """Local Milnor number at the origin; Infinite for a non-isolated singularity."""
    ideal = jacobian_ideal(g, order)
    return local_quotient_dimension(ideal, limits, global_milnor(g, limits, order))


def tjurina_number(g: Germ, limits: Limits = Limits(),
                   order: MonomialOrder = MonomialOrder.DEGREVLEX) -> QuotientDimension:
    ideal = tjurina_ideal(g, order)
    return local_quotient_dimension(ideal, limits, global_tjurina(g, limits, order))


def moduli_gap(g: Germ, limits: Limits = Limits()) -> int:
    mu = milnor_number(g, limits)
    tau = tjurina_number(g, limits)
    if not (isinstance(mu, Finite) and isinstance(tau, Finite)):
        raise NonIsolatedError(f'{g.f} has a non-isolated singularity at the origin')
    return mu.n - tau.n


def _fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _positive_free_weights(rhs: List[Fraction], coef: List[List[Fraction]]) -> Optional[List[Fraction]]:
    """Free weights keeping every weight positive, from the rref system w_pivot = rhs - coef @ w_free.

    Maximizes the smallest weight, then takes the smallest free weights that
    reach it. The LP vertex is rationalized and the caller checks it exactly.
    """
    k = len(coef[0]) if coef else 0
    c_rows = np.array([[float(c) for c in row] for row in coef]).reshape(len(coef), k)
    b_rows = np.array([float(b) for b in rhs])

    # variables (w_free..., s): maximize s with w_free >= s and every pivot >= s
    a_ub = np.vstack([np.hstack([-np.eye(k), np.ones((k, 1))]),
                      np.hstack([c_rows, np.ones((len(coef), 1))])])
    b_ub = np.concatenate([np.zeros(k), b_rows])
    objective = np.zeros(k + 1)
    objective[-1] = -1.0
    best = linprog(objective, A_ub=a_ub, b_ub=b_ub, bounds=[(0, None)] * k + [(None, 1.0)], method='highs')
    if best.status != 0 or -best.fun <= WEIGHT_TOLERANCE:
        return None
    floor = -best.fun - WEIGHT_TOLERANCE

    smallest = linprog(np.ones(k), A_ub=c_rows, b_ub=b_rows - floor, bounds=[(floor, None)] * k, method='highs')
    if smallest.status != 0:
        return None
    return [Fraction(float(v)).limit_denominator(MAX_WEIGHT_DENOMINATOR) for v in smallest.x]


def is_quasihomogeneous(g: Germ) -> Optional[QuasiHomogeneity]:
    """Positive weights w with sum(w_i u_i) = 1 over every exponent u of f.

    None when no positive solution exists. Weights left free by the system are
    chosen to make the smallest weight as large as possible.
    """
    exponents = sorted(g.f.terms)
    n = g.f.nvars
    if not exponents or n == 0:
        return None
    rows = [[QQ(e) for e in u] + [QQ(1)] for u in exponents]
    rref, pivots = DomainMatrix(rows, (len(rows), n + 1), QQ).rref()
    if n in pivots:
        return None
    table = rref.to_Matrix()
    free = [j for j in range(n) if j not in pivots]
    rhs = [_fraction(table[r, n]) for r in range(len(pivots))]
    coef = [[_fraction(table[r, j]) for j in free] for r in range(len(pivots))]
    free_weights = _positive_free_weights(rhs, coef) if free else []
    if free_weights is None:
        return None
    weights = [Fraction(0)] * n
    for j, w in zip(free, free_weights):
        weights[j] = w
    for r, col in enumerate(pivots):
        weights[col] = rhs[r] - sum((c * w for c, w in zip(coef[r], free_weights)), Fraction(0))
    if any(w <= 0 for w in weights):
        logger.debug('no positive weights for %s', g.f)
        return None
    scale = functools.reduce(lambda a, b: a * b // math.gcd(a, b), (w.denominator for w in weights), 1)
    ints = [int(w * scale) for w in weights]
    common = functools.reduce(math.gcd, ints)
    return QuasiHomogeneity(
        weights=tuple(weights),
        degree=Fraction(1),
        integer_weights=tuple(i // common for i in ints),
        integer_degree=scale // common,
    )


def invariant_report(g: Germ, limits: Limits = Limits(),
                     order: MonomialOrder = MonomialOrder.DEGREVLEX) -> InvariantReport:
    """All invariants of one germ; a non-isolated singularity is a status, not an error."""
    g_mu = global_milnor(g, limits, order)
    g_tau = global_tjurina(g, limits, order)
    mu = local_quotient_dimension(jacobian_ideal(g, order), limits, g_mu)
    tau = local_quotient_dimension(tjurina_ideal(g, order), limits, g_tau)
    isolated = isinstance(mu, Finite) and isinstance(tau, Finite)
    report = InvariantReport(
        germ=g,
        milnor=mu,
        tjurina=tau,
        global_milnor=g_mu,
        global_tjurina=g_tau,
        moduli_gap=mu.n - tau.n if isolated else None,
        quasihomogeneous=is_quasihomogeneous(g),
        standard_monomials_mu=mu.standard_monomials if isinstance(mu, Finite) else (),
        status=STATUS_OK if isolated else STATUS_NON_ISOLATED,
    )
    logger.debug('invariants of %s: mu=%s tau=%s', g.f, mu, tau)
    return report


# --- normal form catalog ---------------------------------------------------------

FAMILIES = ('A', 'D', 'E6', 'E7', 'E8', 'X9', 'T')


@dataclass(frozen=True)
class NormalFormSpec:
    family: str
    k: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    modulus: Optional[Fraction] = None

    def label(self) -> str:
        if self.family in ('A', 'D'):
            return f'{self.family}_{self.k}'
        if self.family == 'X9':
            return f'X9(a={format_rational(self.modulus)})'
        if self.family == 'T':
            return f'T_{self.p},{self.q}'
        return self.family


def _require_int(name: str, value, minimum: int) -> int:
    if value is None or isinstance(value, bool) or int(value) != value:
        raise InvalidParameterError(f'{name} must be an integer')
    if value < minimum:
        raise InvalidParameterError(f'{name} must be >= {minimum}, got {value}')
    return int(value)


def normal_form(spec: NormalFormSpec, allow_degenerate: bool = False) -> Germ:
    """Build the catalog germ for `spec` over variables (x, y)."""
    family = spec.family.upper() if spec.family.upper() in FAMILIES else spec.family
    if family not in FAMILIES:
        raise InvalidParameterError(f'unknown family {spec.family!r}; expected one of {FAMILIES}')
    given = {n: getattr(spec, n) for n in ('k', 'p', 'q', 'modulus') if getattr(spec, n) is not None}
    allowed = {'A': {'k'}, 'D': {'k'}, 'X9': {'modulus'}, 'T': {'p', 'q'}}.get(family, set())
    extra = set(given) - allowed
    if extra:
        raise InvalidParameterError(f'{family} takes no parameter(s) {sorted(extra)}')

    if family == 'A':
        k = _require_int('k', spec.k, 1)
        text = f'x^{k + 1} + y^2'
    elif family == 'D':
        k = _require_int('k', spec.k, 4)
        text = f'x^{k - 1} + x*y^2'
    elif family == 'E6':
        text = 'x^3 + y^4'
    elif family == 'E7':
        text = 'x^3 + x*y^3'
    elif family == 'E8':
        text = 'x^3 + y^5'
    elif family == 'X9':
        if spec.modulus is None:
            raise InvalidParameterError('X9 needs a modulus a')
        a = Fraction(spec.modulus)
        if a * a == 4 and not allow_degenerate:
            raise InvalidParameterError('X9 modulus must satisfy a^2 != 4')
        variables = ('x', 'y')
        x = Polynomial.variable(variables, 'x')
        y = Polynomial.variable(variables, 'y')
        f = x ** 4 + y ** 4 + (x ** 2 * y ** 2).scale(a)
        return Germ(f, NormalFormSpec('X9', modulus=a).label())
    else:
        p = _require_int('p', spec.p, 3)
        q = _require_int('q', spec.q, 3)
        if Fraction(1, p) + Fraction(1, q) >= Fraction(1, 2):
            raise InvalidParameterError(f'T_{p},{q} needs 1/p + 1/q < 1/2')
        text = f'x^{p} + y^{q} + x^2*y^2'
    return Germ(parse_polynomial(text, ('x', 'y')), NormalFormSpec(family, spec.k, spec.p, spec.q).label())


# --- modulus sweep ---------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    a: Fraction
    mu: Optional[int]
    tau: Optional[int]
    gap: Optional[int]
    status: str


def _sweep_row(a: Fraction, limits: Limits) -> SweepRow:
    germ = normal_form(NormalFormSpec('X9', modulus=a), allow_degenerate=True)
    try:
        report = invariant_report(germ, limits)
    except LimitExceeded as e:
        logger.warning('modulus %s: %s', format_rational(a), e)
        return SweepRow(a, None, None, None, STATUS_LIMIT)
    mu = report.milnor.n if isinstance(report.milnor, Finite) else None
    tau = report.tjurina.n if isinstance(report.tjurina, Finite) else None
    return SweepRow(a, mu, tau, report.moduli_gap, report.status)


def modulus_sweep(a_values: Sequence, limits: Limits = Limits(), workers: int = 1) -> List[SweepRow]:
    """One row per modulus of the X9 family, in input order."""
    values = [a if isinstance(a, Fraction) else parse_rational(str(a)) for a in a_values]
    if not values:
        raise InvalidParameterError('modulus sweep needs at least one value')
    return parallel_map(functools.partial(_sweep_row, limits=limits), values, workers, label='modulus sweep')
