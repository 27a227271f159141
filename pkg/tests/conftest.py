import csv
import json
import math
import os
import random
import shutil
import warnings
from fractions import Fraction

import numpy as np
import pytest

from src.algebra.poly import Polynomial, monomials_up_to

BASELINE_DIR = os.path.join(os.path.dirname(__file__), 'baselines')


def make_random_poly(rng: random.Random, variables, max_degree=4, max_terms=5,
                     coeff_range=5, rational=True, constant_term=True):
    monos = monomials_up_to(len(variables), max_degree)
    if not constant_term:
        monos = monos[1:]
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        num = rng.randint(-coeff_range, coeff_range)
        den = rng.randint(1, 3) if rational else 1
        terms[rng.choice(monos)] = Fraction(num, den)
    return Polynomial(variables, terms)


@pytest.fixture
def random_poly():
    return make_random_poly


@pytest.fixture(autouse=True)
def _quiet_heartbeat(monkeypatch):
    monkeypatch.setenv('COMBKIT_HEARTBEAT_SECONDS', '0')


# --- frozen baselines -------------------------------------------------------------------
# A missing baseline (or COMBKIT_UPDATE_BASELINES=1) records the current output with a warning.

def _record(name: str, write) -> None:
    os.makedirs(BASELINE_DIR, exist_ok=True)
    write(os.path.join(BASELINE_DIR, name))
    warnings.warn(f'recorded baseline {name}')


def _needs_recording(name: str) -> bool:
    return os.environ.get('COMBKIT_UPDATE_BASELINES') == '1' or not os.path.isfile(os.path.join(BASELINE_DIR, name))


def _number(cell):
    try:
        return float(cell)
    except (TypeError, ValueError):
        return None


def _read_rows(path):
    with open(path, newline='', encoding='utf-8') as f:
        return list(csv.reader(f))


def assert_csv_matches_baseline(name: str, path: str, rel: float = 1e-6) -> None:
    """Numeric cells agree within `rel` of their column's largest magnitude; other cells exactly."""
    if _needs_recording(name):
        _record(name, lambda target: shutil.copyfile(path, target))
    expected = _read_rows(os.path.join(BASELINE_DIR, name))
    actual = _read_rows(path)
    assert actual[0] == expected[0]
    assert len(actual) == len(expected)
    for col in range(len(expected[0])):
        scale = max((abs(v) for v in (_number(row[col]) for row in expected[1:])
                     if v is not None and math.isfinite(v)), default=0.0)
        for want, got in zip(expected[1:], actual[1:]):
            w, g = _number(want[col]), _number(got[col])
            if w is None or g is None:
                assert got[col] == want[col], (name, expected[0][col])
            else:
                assert np.isclose(g, w, rtol=rel, atol=rel * scale, equal_nan=True), (name, expected[0][col], w, g)


def assert_json_matches_baseline(name: str, data: dict, rel: float = 1e-6) -> None:
    if _needs_recording(name):
        def write(target):
            with open(target, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=2, sort_keys=True)
                f.write('\n')
        _record(name, write)
    with open(os.path.join(BASELINE_DIR, name), encoding='utf-8') as f:
        expected = json.load(f)
    assert sorted(data) == sorted(expected)
    for key, want in expected.items():
        if isinstance(want, (int, float)) and not isinstance(want, bool):
            assert data[key] == pytest.approx(want, rel=rel), key
        else:
            assert data[key] == want, key
