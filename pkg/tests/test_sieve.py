import itertools
import math
from fractions import Fraction

import pytest

from quadric_density.errors import DomainError
from quadric_density.sieve import (f_growth_table, f_of_L, f_of_L_termwise, large_sieve_bound,
                                   omega_membership, omega_size_bruteforce, omega_size_formula)
from quadric_density.solubility import DiagonalForm, FinitePlace, is_isotropic


def test_membership_examples():
    assert omega_membership((0, 1, 1, 1), 3) == 0
    assert omega_membership((1, 1, 1, 1), 3) is None
    assert omega_membership((1, 1, 0, 1), 5) is None
    assert omega_membership((1, 1, 0, 1), 3) == 2  # -1 is a nonsquare mod 3
    assert omega_membership((0, 1, 0, 1), 7) is None
    for r in itertools.product(range(2), repeat=4):
        assert omega_membership(r, 2) is None


def test_membership_rejects_bad_input():
    with pytest.raises(DomainError):
        omega_membership((3, 0, 1, 1), 3)
    with pytest.raises(DomainError):
        omega_membership((0, 1, 1, 1), 4)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_components_are_disjoint(p):
    squares = {x * x % p for x in range(1, p)}

    def members(r):
        # direct reading of the four set definitions
        out = []
        for i in range(4):
            others = [r[j] for j in range(4) if j != i]
            test = -r[2] * r[3] if i < 2 else -r[0] * r[1]
            if r[i] == 0 and all(others) and test % p not in squares:
                out.append(i)
        return out

    for r in itertools.product(range(p), repeat=4):
        m = members(r)
        assert len(m) <= 1
        assert omega_membership(r, p) == (m[0] if m else None)


@pytest.mark.parametrize("p, size", [(3, 16), (5, 128), (11, 2000)])
def test_formula_values(p, size):
    assert omega_size_formula(p) == size


def test_formula_rejects_two():
    with pytest.raises(DomainError):
        omega_size_formula(2)


def test_bruteforce_values():
    assert omega_size_bruteforce(3) == 16
    assert omega_size_bruteforce(2) == 0
    assert omega_size_bruteforce(7) == 432


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_cardinality_formula(p):
    assert omega_size_bruteforce(p) == omega_size_formula(p) == 2 * p**3 * (1 - Fraction(1, p))**3


def test_f_small_values():
    assert f_of_L(1).value == 1
    assert f_of_L(2).value == 1
    assert f_of_L(3).value == Fraction(81, 65)
    assert f_of_L(10).value == 1 + Fraction(16, 65) + Fraction(128, 497) + Fraction(432, 1969)


@pytest.mark.parametrize("L", [1, 2, 3, 10, 30, 105, 210, 500])
def test_f_matches_termwise(L):
    assert f_of_L(L).value == f_of_L_termwise(L)


def test_f_monotone():
    values = [f_of_L(L).value for L in range(1, 1001)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_f_float_mirror():
    ev = f_of_L(2000)
    assert ev.approx == pytest.approx(float(ev.value), rel=1e-14)
    assert f_of_L(2000, exact=False).approx == pytest.approx(ev.approx, rel=1e-12)
    assert f_of_L(20000).value is None


def test_large_sieve_bound():
    assert large_sieve_bound((4, 4, 4, 4), 2) == 4096
    assert large_sieve_bound((3, 5, 7, 9), 1) == 4 * 6 * 8 * 10
    expected = 200**4 / float(f_of_L_termwise(10))
    assert large_sieve_bound((100, 100, 100, 100), 10) == pytest.approx(expected, rel=1e-12)


def test_growth_table():
    (L, r), = f_growth_table([2])
    assert L == 2 and r == pytest.approx(1 / math.log(2) ** 2) and r == pytest.approx(2.081, abs=1e-3)
    (L, r), = f_growth_table([3])
    assert r == pytest.approx((81 / 65) / math.log(3) ** 2)
    rows = f_growth_table([10**3, 10**4, 10**5])
    assert all(r > 0.05 for _, r in rows)
    with pytest.raises(DomainError):
        f_growth_table([1])


def test_omega_forces_insolubility_exhaustive():
    sqfree = [s * k for k in range(1, 11) for s in (1, -1)
              if all(k % (q * q) for q in range(2, 4))]
    for p in (3, 5, 7):
        for u in itertools.product(sqfree, repeat=4):
            if omega_membership([c % p for c in u], p) is not None:
                u0, u1, u2, u3 = u
                form = DiagonalForm((u0 * u2, u1 * u3, u0 * u3, u1 * u2))
                assert not is_isotropic(form, FinitePlace(p)), (u, p)
