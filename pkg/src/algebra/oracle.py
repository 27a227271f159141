"""Brute-force linear-algebra oracle for quotient dimensions.

Independent of the Groebner code: dim C[x]/(I + m^n) is computed by
row-reducing, over QQ, the truncations to degree < n of every product m*g
(m a monomial of degree < n, g a generator) inside the space of monomials of
degree < n. As n grows the value stabilizes on the local dimension at the
origin.
"""
import logging
from typing import Dict, Optional, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from src.algebra.poly import Polynomial, monomial_mul, monomials_up_to
from src.errors import EmptyBasisError, InvalidParameterError

logger = logging.getLogger(__name__)


def oracle_truncated_dimension(generators: Sequence[Polynomial], n: int) -> int:
    if n < 1:
        raise InvalidParameterError('truncation order must be >= 1')
    generators = [g for g in generators if not g.is_zero()]
    if not generators:
        raise EmptyBasisError('oracle needs at least one nonzero generator')
    nvars = generators[0].nvars
    columns = monomials_up_to(nvars, n - 1)
    index = {m: i for i, m in enumerate(columns)}

    rows: Dict[int, Dict[int, object]] = {}
    for g in generators:
        for shift in columns:
            row = {}
            for mono, coeff in g.terms.items():
                target = monomial_mul(mono, shift)
                col = index.get(target)
                if col is not None:
                    row[col] = QQ(coeff.numerator, coeff.denominator)
            if row:
                rows[len(rows)] = row
    if not rows:
        return len(columns)
    matrix = DomainMatrix(rows, (len(rows), len(columns)), QQ)
    rank = matrix.rank()
    logger.debug('oracle order %d: %d rows, %d columns, rank %d',
                 n, len(rows), len(columns), rank)
    return len(columns) - rank


def oracle_local_dimension(generators: Sequence[Polynomial], max_order: int = 40) -> Optional[int]:
    """Stabilized truncated dimension, or None if it keeps growing up to `max_order`."""
    previous = oracle_truncated_dimension(generators, 1)
    for n in range(2, max_order + 1):
        current = oracle_truncated_dimension(generators, n)
        if current == previous:
            return current
        previous = current
    return None
