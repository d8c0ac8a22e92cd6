from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from helpers import rand_gauss, rand_poly
from polystab.errors import UndecidedAtPrecision, ValidationError
from polystab.phasecore import CPoly, GaussianRational, I, PhaseGerm, in_half_plane
from polystab.stabspace import (
    INFINITY,
    CentralChargeMap,
    FiniteStabilityPresentation,
    SemiNormValue,
    TestObject,
    ball_test,
    d_metric,
    d_metric_less_than,
    norm_less_than_sin,
    object_ratio,
    semi_norm,
)


def G(re, im=0):
    return GaussianRational(re, im)


def obj(label, Z, k=0, semistable=True):
    g = PhaseGerm(Z, k)
    return TestObject(label, Z, g, g, semistable)


def pres(*objs):
    return FiniteStabilityPresentation(tuple(objs))


SIGMA = pres(obj("A", CPoly.of(1, I)), obj("B", CPoly.of(-1, G(2, 3))))


def heart_poly(rng):
    while True:
        p = rand_poly(rng, 3)
        if in_half_plane(p.lead):
            return p


def rand_presentation(rng, labels=("A", "B", "C")):
    objs = []
    for lab in labels:
        Z = heart_poly(rng)
        lo = PhaseGerm(Z, rng.randint(-1, 1))
        hi = PhaseGerm(heart_poly(rng), rng.randint(-1, 1))
        if lo > hi:
            lo, hi = hi, lo
        objs.append(TestObject(lab, Z, hi, lo, semistable=False))
    return pres(*objs)


def test_d_metric_examples():
    assert d_metric(SIGMA, SIGMA).exact == 0
    assert d_metric(SIGMA, SIGMA.shifted(1)).exact == 1
    Z = CPoly.of(1, I)
    P = pres(TestObject("A", Z, PhaseGerm(CPoly.of(-1), 0), PhaseGerm(Z, 0), False))
    Q = pres(TestObject("A", Z, PhaseGerm(Z, 0), PhaseGerm(Z, 0), True))
    assert d_metric(P, Q).exact == Fraction(1, 2)


def test_d_metric_label_mismatch():
    with pytest.raises(ValidationError) as e:
        d_metric(SIGMA, pres(obj("A", CPoly.of(1, I))))
    assert e.value.clause == "label-mismatch"


def test_d_metric_irrational_enclosure():
    Q = pres(obj("A", CPoly.of(0, G(1, 2))), obj("B", CPoly.of(-1, G(2, 3))))
    d = d_metric(SIGMA, Q, prec=200).value
    true = math.atan2(2, 1) / math.pi - 0.5
    assert d.exact is None and float(d.lo) <= abs(true) <= float(d.hi) and d.hi - d.lo < Fraction(1, 10**50)


def test_d_metric_diagnostics():
    Q = pres(obj("A", CPoly.of(7, I)), obj("B", CPoly.of(-1, G(2, 3))))
    d = d_metric(SIGMA, Q)
    assert d.exact == 0 and any("A" in note for note in d.diagnostics)


def test_phase_order_invariant():
    Z = CPoly.of(1, I)
    with pytest.raises(ValidationError):
        TestObject("A", Z, PhaseGerm(Z, 0), PhaseGerm(CPoly.of(-1), 0), False)


def test_semi_norm_examples():
    assert semi_norm(SIGMA.charge_map(), SIGMA).exact == 1
    assert semi_norm(CentralChargeMap({"A": CPoly.of(1), "B": CPoly.of(1)}), SIGMA).kind == "zero"
    assert semi_norm(CentralChargeMap({"A": CPoly.of(0, 0, 1), "B": CPoly.of(1)}), SIGMA) == INFINITY
    v = semi_norm(CentralChargeMap({"A": CPoly.of(0, 1), "B": CPoly.of(0)}), SIGMA)
    assert v.squared == 1 and v.exact == 1
    v = semi_norm(CentralChargeMap({"A": CPoly.of(0, G(1, 1)), "B": CPoly.of(0)}), SIGMA)
    assert v.squared == 2 and v.exact is None and str(v) == "sqrt(2)"


def test_semi_norm_ignores_unstable_objects():
    P = pres(obj("A", CPoly.of(1, I)), TestObject("B", CPoly.of(I), PhaseGerm(CPoly.of(-1), 0), PhaseGerm(CPoly.of(I), 0), False))
    U = CentralChargeMap({"A": CPoly.of(1), "B": CPoly.of(0, 0, 5)})
    assert semi_norm(U, P).kind == "zero"


def test_ball_examples():
    for eps in (Fraction(1, 100), Fraction(1, 6), Fraction(1, 5)):
        assert ball_test(SIGMA, SIGMA, eps)
    doubled = pres(*(obj(o.label, o.Z * 2) for o in SIGMA.objects))
    assert not ball_test(SIGMA, doubled, Fraction(1, 5))
    assert not ball_test(SIGMA, SIGMA.shifted(1), Fraction(1, 5))
    with pytest.raises(ValidationError) as e:
        ball_test(SIGMA, SIGMA, Fraction(1, 4))
    assert e.value.clause == "epsilon-range"


def test_norm_vs_sin_boundary():
    assert not norm_less_than_sin(SemiNormValue.of_squared(Fraction(1, 4)), Fraction(1, 6))
    assert norm_less_than_sin(SemiNormValue.of_squared(Fraction(24, 100)), Fraction(1, 6))
    s2 = math.sin(math.pi / 5) ** 2
    assert norm_less_than_sin(SemiNormValue.of_squared(Fraction(s2) - Fraction(1, 10**9)), Fraction(1, 5))
    assert not norm_less_than_sin(SemiNormValue.of_squared(Fraction(s2) + Fraction(1, 10**9)), Fraction(1, 5))


def test_undecided_at_floor():
    import mpmath

    with mpmath.workdps(60):
        close = Fraction(str(mpmath.sin(mpmath.pi / 5) ** 2))
    with pytest.raises(UndecidedAtPrecision):
        norm_less_than_sin(SemiNormValue.of_squared(close), Fraction(1, 5), floor=64)
    norm_less_than_sin(SemiNormValue.of_squared(close), Fraction(1, 5), floor=1024)


def test_semi_metric_axioms_random():
    rng = random.Random(1)
    for _ in range(100):
        P, Q, R = (rand_presentation(rng) for _ in range(3))
        pq, qp = d_metric(P, Q).value, d_metric(Q, P).value
        assert pq == qp
        assert d_metric(P, P).exact == 0
        pr, qr = d_metric(P, R).value, d_metric(Q, R).value
        assert pr.lo <= pq.hi + qr.hi


def test_semi_norm_homogeneous_and_subadditive():
    rng = random.Random(2)
    sigma = pres(*(obj(lab, heart_poly(rng)) for lab in "ABCD"))
    for _ in range(100):
        U = CentralChargeMap({lab: rand_poly(rng, 3) for lab in "ABCD"})
        V = CentralChargeMap({lab: rand_poly(rng, 3) for lab in "ABCD"})
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        nu, nv = semi_norm(U, sigma), semi_norm(V, sigma)
        ncu = semi_norm(U.scale(c), sigma)
        if nu.kind == "infinity":
            assert ncu.kind == ("zero" if c == 0 else "infinity")
        else:
            assert ncu.squared == c * c * nu.squared
        total = float(semi_norm(U + V, sigma))
        assert total <= float(nu) + float(nv) + 1e-12


def test_degree_trichotomy_matches_sampling():
    rng = random.Random(3)
    for _ in range(300):
        Z, u = heart_poly(rng), rand_poly(rng, 3)
        v = object_ratio(u, Z)
        r3, r6 = (abs(complex(u(Fraction(m)))) / abs(complex(Z(Fraction(m)))) for m in (10**3, 10**6))
        if v.kind == "zero":
            assert r6 < r3 or r6 < 1e-5
            assert r6 < 1e-2
        elif v.kind == "infinity":
            assert r6 > r3 and r6 > 1e2
        else:
            assert math.isclose(r6, float(v), rel_tol=1e-4)


def test_norm_equivalence_on_rescaled_charges():
    rng = random.Random(4)
    sigma = pres(*(obj(lab, heart_poly(rng)) for lab in "ABC"))
    for _ in range(50):
        c = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        tau = pres(*(obj(o.label, o.Z * c) for o in sigma.objects))
        U = CentralChargeMap({lab: rand_poly(rng, 3) for lab in "ABC"})
        ns, nt = semi_norm(U, sigma), semi_norm(U, tau)
        assert ns.kind == nt.kind
        if ns.kind == "finite":
            assert nt.squared * c * c == ns.squared
    # per-object leading moduli bound the two norms against each other
    scales = {"A": 2, "B": 3, "C": 5}
    tau = pres(*(obj(o.label, o.Z * scales[o.label]) for o in sigma.objects))
    for _ in range(50):
        U = CentralChargeMap({lab: CPoly.monomial(rand_gauss(rng), sigma.by_label()[lab].Z.degree) for lab in "ABC"})
        ns, nt = float(semi_norm(U, sigma)), float(semi_norm(U, tau))
        assert ns / 5 - 1e-12 <= nt <= ns / 2 + 1e-12
