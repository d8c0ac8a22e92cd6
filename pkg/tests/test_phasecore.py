from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import continuous_phase_mp, rand_germ
from polystab.phasecore import (
    CPoly,
    GaussianRational,
    I,
    Ordering,
    PhaseAtInfinity,
    PhaseGerm,
    cmp_phase,
    eval_poly,
    phase_at_infinity,
    sector,
    shift_phase,
    stabilization_bound,
)


def G(re, im=0):
    return GaussianRational(re, im)


def germ(*coeffs, k=0):
    return PhaseGerm(CPoly.of(*coeffs), k)


def test_cmp_examples():
    assert cmp_phase(germ(0, I), germ(-1)) is Ordering.LT
    assert cmp_phase(germ(1, I), germ(0, I)) is Ordering.LT
    Z = CPoly.of(G(2, -1), G(0, 3), G(-1, 1))
    assert cmp_phase(PhaseGerm(Z, 1), PhaseGerm(Z * 3, 1)) is Ordering.EQ


def test_cmp_numeric_direction():
    # arg(1 + 10i) < arg(10i)
    assert math.atan2(10, 1) < math.atan2(10, 0)


def test_shift_examples():
    s = shift_phase(germ(1), 1)
    assert s.poly == CPoly.of(-1) and s.branch == 0 and s.at_infinity().exact() == 1
    s = shift_phase(germ(0, I), 2)
    assert s.poly == CPoly.of(0, I) and s.branch == 1 and s.at_infinity().exact() == Fraction(5, 2)
    s = shift_phase(germ(-1), 1)
    assert s.poly == CPoly.of(1) and s.branch == 1 and s.at_infinity().exact() == 2


def test_phase_at_infinity_examples():
    assert phase_at_infinity(germ(0, 1, I)).exact() == Fraction(1, 2)
    assert phase_at_infinity(germ(G(-1, -1))).exact() == Fraction(-3, 4)
    v = phase_at_infinity(PhaseGerm(CPoly.monomial(G(-2, 1), 3), 1))
    assert v.exact() is None
    assert PhaseAtInfinity(G(-1, 1), 1) < v < PhaseAtInfinity(G(-1, 0), 1)
    assert 2.75 < float(v) < 3


def test_stabilization_examples():
    a, b = germ(100, I), germ(0, I)
    M = stabilization_bound(a, b)
    assert M >= 101
    c = cmp_phase(a, b)
    for m in (M, 2 * M):
        assert _order_at(a, b, m) is c
    assert stabilization_bound(a, a) >= 1
    a, b = germ(-1, I), germ(-1)
    M = stabilization_bound(a, b)
    assert cmp_phase(a, b) is Ordering.LT
    for m in (M, 2 * M, 10 * M, 1000 * M):
        assert _order_at(a, b, m) is Ordering.LT


def _order_at(a, b, m):
    pa, pb = continuous_phase_mp(a, [m]), continuous_phase_mp(b, [m])
    d = pa[0] - pb[0]
    return Ordering.EQ if abs(d) < 1e-50 else (Ordering.GT if d > 0 else Ordering.LT)


def test_eval_examples():
    assert eval_poly(CPoly.of(1, I), 2) == G(1, 2)
    assert eval_poly(CPoly(()), Fraction(7, 3)) == G(0)
    assert eval_poly(CPoly.of(0, -3, 1), 3) == G(0)


def test_zero_poly_rejected():
    with pytest.raises(ValueError):
        PhaseGerm(CPoly(()), 0)


def test_sector_order():
    ring = [G(-1, -1), G(0, -1), G(1, -1), G(1, 0), G(1, 1), G(0, 1), G(-1, 1), G(-1, 0)]
    assert [sector(z) for z in ring] == list(range(8))


germs = st.builds(
    lambda cs, lead, k: PhaseGerm(CPoly(tuple(GaussianRational(a, b) for a, b in cs) + (lead,)), k),
    st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), max_size=4),
    st.tuples(st.integers(-9, 9), st.integers(-9, 9)).filter(any).map(lambda t: GaussianRational(*t)),
    st.integers(-2, 2),
)


@given(germs, germs)
def test_antisymmetry(a, b):
    assert cmp_phase(a, b) is cmp_phase(b, a).reverse()


@given(germs, germs, st.integers(-5, 5))
def test_shift_compatible(a, b, n):
    assert cmp_phase(shift_phase(a, n), shift_phase(b, n)) is cmp_phase(a, b)
    assert shift_phase(a, n).at_infinity().compare(a.at_infinity()) is Ordering(int(math.copysign(1, n)) if n else 0)


@given(germs, st.integers(1, 20), st.integers(1, 20))
def test_positive_scaling(a, p, q):
    b = PhaseGerm(a.poly * Fraction(p, q), a.branch)
    assert cmp_phase(a, b) is Ordering.EQ


@given(germs, st.integers(-4, 4), st.integers(-4, 4))
def test_shift_composes(a, n, k):
    assert shift_phase(shift_phase(a, n), k).same_germ(shift_phase(a, n + k))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_numeric_agreement_sample(seed):
    rng = random.Random(seed)
    a, b = rand_germ(rng), rand_germ(rng)
    M = stabilization_bound(a, b)
    assert _order_at(a, b, M) is cmp_phase(a, b)
