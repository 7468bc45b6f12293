import itertools
import math
import random

import pytest

from quadric_density.errors import DomainError
from quadric_density.solubility import DiagonalForm, is_locally_soluble_everywhere
from quadric_density.surface import (PointClass, SurfacePoint, TParam, anti_diagonal_member,
                                     brute_force_points, enumerate_points, fiber_form, height,
                                     param_to_point, point_to_param, raw_fiber_form,
                                     reduced_fiber_form, thin_set_member)


def scan_unit_box():
    """All canonical primitive points with coordinates in {-1, 0, 1}, by plain looping."""
    out = set()
    for y in itertools.product((-1, 0, 1), repeat=4):
        if y[0] * y[1] != y[2] * y[3] or not any(y):
            continue
        if next(c for c in y if c) > 0:
            out.add(y)
    return out


def test_height():
    assert height(SurfacePoint((1, 2, -1, -2))) == 4
    assert height(SurfacePoint((0, 1, 0, 1))) == 1
    assert height(SurfacePoint((6, 1, 2, 3))) == 36


def test_point_validation():
    for bad in [(1, 1, 1, 2), (2, 2, 2, 2), (-1, -1, -1, -1), (0, 0, 0, 0)]:
        with pytest.raises(DomainError):
            SurfacePoint(bad)
    assert SurfacePoint.from_vector((-2, -2, 2, 2)).y == (1, 1, -1, -1)


@pytest.mark.parametrize("t, y", [
    ((2, 1, 3, 1), (6, 1, 2, 3)),
    ((1, 1, 1, 1), (1, 1, 1, 1)),
    ((1, -1, 1, -1), (1, 1, -1, -1)),
])
def test_param_point_examples(t, y):
    assert param_to_point(TParam(t)).y == y
    assert point_to_param(SurfacePoint(y)).t == t


def test_tparam_validation():
    for bad in [(0, 1, 1, 1), (2, 4, 1, 1), (1, 1, 2, 4), (-1, 1, 1, 1), (1, 1, -1, 1)]:
        with pytest.raises(DomainError):
            TParam(bad)
    assert TParam.normalized((-2, 1, -3, 1)).t == (2, -1, 3, -1)


def test_point_to_param_rejects_degenerate():
    with pytest.raises(DomainError):
        point_to_param(SurfacePoint((0, 1, 0, 1)))


def valid_params(bound):
    r = [x for x in range(-bound, bound + 1) if x]
    for t0 in range(1, bound + 1):
        for t2 in range(1, bound + 1):
            for t1 in r:
                if math.gcd(t0, t1) != 1:
                    continue
                for t3 in r:
                    if math.gcd(t2, t3) == 1:
                        yield TParam((t0, t1, t2, t3))


def test_round_trip_and_primitivity():
    for t in valid_params(20):
        y = param_to_point(t).y  # SurfacePoint checks gcd = 1 and the quadric
        assert point_to_param(SurfacePoint(y)) == t
        assert all(y)


def test_round_trip_to_30_sampled():
    rng = random.Random(0)
    r = [x for x in range(-30, 31) if x]
    seen = 0
    while seen < 5000:
        t = (rng.randint(1, 30), rng.choice(r), rng.randint(1, 30), rng.choice(r))
        if math.gcd(t[0], t[1]) == 1 and math.gcd(t[2], t[3]) == 1:
            assert point_to_param(param_to_point(TParam(t))).t == t
            seen += 1


def test_enumerate_B1():
    pts = list(enumerate_points(1))
    assert len(pts) == 16
    nondeg = {p.y for p, c in pts if c is PointClass.NONDEGENERATE}
    assert nondeg == {(1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)}
    assert sum(c is PointClass.DEGENERATE for _, c in pts) == 12
    assert {p.y for p, _ in pts} == scan_unit_box()


@pytest.mark.parametrize("B", [1, 2, 4, 9, 10, 50, 100, 400, 1000, 2500])
def test_enumeration_is_bijective(B):
    pts = [p.y for p, _ in enumerate_points(B)]
    assert len(pts) == len(set(pts))
    assert set(pts) == brute_force_points(B)
    for p, c in enumerate_points(B):
        assert height(p) <= B
        assert (c is PointClass.DEGENERATE) == (0 in p.y)
        if c is PointClass.DEGENERATE:
            assert p.y.count(0) >= 2


def test_brute_force_scan_small_box():
    assert brute_force_points(1) == scan_unit_box()


def test_enumeration_partition_by_t0():
    B = 900
    whole = {p.y for p, c in enumerate_points(B) if c is PointClass.NONDEGENERATE}
    parts = [{p.y for p, _ in enumerate_points(B, (lo, hi), degenerate=False)}
             for lo, hi in [(1, 1), (2, 4), (5, 30)]]
    assert sum(map(len, parts)) == len(whole)
    assert set().union(*parts) == whole


def test_reduced_fiber_form_examples():
    assert reduced_fiber_form(TParam((4, 1, 1, 1))) == DiagonalForm((1, 1, 1, 1))
    assert reduced_fiber_form(TParam((2, 1, 3, 1))) == DiagonalForm((6, 1, 2, 3))
    assert reduced_fiber_form(TParam((9, -8, 1, 1))) == DiagonalForm((1, -2, 1, -2))


def test_fiber_form():
    assert fiber_form(SurfacePoint((1, 2, -1, -2))) == DiagonalForm((1, 2, -1, -2))
    assert fiber_form(SurfacePoint((6, 1, 2, 3))) == DiagonalForm((6, 1, 2, 3))
    with pytest.raises(DomainError):
        fiber_form(SurfacePoint((0, 1, 0, 1)))


def test_thin_set():
    assert thin_set_member(SurfacePoint((1, 2, -1, -2)))
    assert not thin_set_member(SurfacePoint((1, 1, 1, 1)))
    assert not thin_set_member(SurfacePoint((6, 1, 2, 3)))
    with pytest.raises(DomainError):
        thin_set_member(SurfacePoint((0, 1, 0, 1)))


def test_anti_diagonal():
    assert anti_diagonal_member(SurfacePoint((1, 2, -1, -2)))
    assert not anti_diagonal_member(SurfacePoint((1, 1, 1, 1)))
    assert anti_diagonal_member(SurfacePoint((0, 1, 0, -1)))


def test_anti_diagonal_family_is_soluble():
    for u in range(1, 15):
        for v in range(-14, 15):
            if v and math.gcd(u, v) == 1:
                pt = SurfacePoint((u, v, -u, -v))
                assert anti_diagonal_member(pt)
                assert is_locally_soluble_everywhere(fiber_form(pt)).everywhere_soluble


def test_solubility_invariant_under_core_reduction():
    rng = random.Random(7)
    r = [x for x in range(-60, 61) if x]
    n = 0
    while n < 1500:
        t = (rng.randint(1, 60), rng.choice(r), rng.randint(1, 60), rng.choice(r))
        if math.gcd(t[0], t[1]) != 1 or math.gcd(t[2], t[3]) != 1:
            continue
        tp = TParam(t)
        raw = is_locally_soluble_everywhere(raw_fiber_form(tp)).everywhere_soluble
        red = is_locally_soluble_everywhere(reduced_fiber_form(tp)).everywhere_soluble
        assert raw == red, t
        n += 1
