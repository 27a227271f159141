from fractions import Fraction

import pytest

from src.algebra.parser import parse_polynomial, tokenize
from src.errors import NegativeExponentError, PolynomialSyntaxError, UnknownVariableError

XY = ('x', 'y')


def test_expansion_examples():
    assert dict(parse_polynomial('x^4 + y^4 + 2*x^2*y^2', XY).terms) == {
        (4, 0): 1, (0, 4): 1, (2, 2): 2}
    assert dict(parse_polynomial('(x+y)^2', XY).terms) == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    q = parse_polynomial('x^4 + y^4 + (3/2)*x^2*y^2', XY)
    assert q.terms[(2, 2)] == Fraction(3, 2)


def test_operators_and_whitespace():
    assert parse_polynomial('  x ** 2*y', XY) == parse_polynomial('x^2*y', XY)
    assert parse_polynomial('-(x - y)', XY) == parse_polynomial('y - x', XY)
    assert parse_polynomial('-x^2', XY).terms[(2, 0)] == -1
    assert parse_polynomial('(x^2 + x)/2', XY) == parse_polynomial('1/2*x^2 + 1/2*x', XY)
    assert parse_polynomial('x^+2', XY) == parse_polynomial('x^2', XY)


def test_unknown_variable_reports_position():
    with pytest.raises(UnknownVariableError) as info:
        parse_polynomial('x + z', XY)
    assert info.value.position == 4
    assert info.value.name == 'z'


def test_negative_exponent():
    with pytest.raises(NegativeExponentError) as info:
        parse_polynomial('x^-2', XY)
    assert info.value.position == 2


@pytest.mark.parametrize('text, position', [
    ('x +', 3),
    ('(x + y', 6),
    ('x $ y', 2),
    ('', 0),
    ('x y', 2),
    ('x / y', 4),
    ('x / 0', 4),
    ('x^y', 2),
])
def test_syntax_errors_carry_positions(text, position):
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial(text, XY)
    assert info.value.position == position
    assert f'position {position}' in str(info.value)


def test_tokenize_positions():
    toks = tokenize(' 12*xy ** 3')
    assert [(t.kind, t.text, t.position) for t in toks] == [
        ('int', '12', 1), ('op', '*', 3), ('name', 'xy', 4), ('op', '**', 7),
        ('int', '3', 10), ('eof', '', 11)]
