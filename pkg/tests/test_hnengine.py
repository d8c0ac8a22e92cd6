from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from polystab.errors import CapExceeded, ValidationError
from polystab.hnengine import (
    Arrow,
    HNFiltration,
    QuiverModel,
    all_reps,
    brute_force_validate,
    enumerate_subreps,
    full_subrep,
    hn_filter,
    is_semistable,
    linear_quiver,
    make_rep,
    mdq,
    phase_of,
    rref,
    short_exact_sequences,
    subspaces,
    zero_subrep,
)
from polystab.phasecore import CPoly, GaussianRational, I, Ordering, cmp_phase

IM_PLUS = CPoly.of(1, I)  # im + 1
IM_MINUS = CPoly.of(-1, I)  # im - 1


def a2(z1, z2, field=2):
    return linear_quiver(2, [z1, z2], field)


def test_subspace_counts():
    # Gaussian binomials over F_2 and F_3
    assert [len(subspaces(2, 2)), len(subspaces(3, 2)), len(subspaces(2, 3))] == [5, 16, 6]
    assert rref([(1, 1), (0, 1)], 2) == ((1, 0), (0, 1))


def test_enumerate_examples():
    M = a2(IM_PLUS, IM_MINUS)
    E = make_rep(M, [1, 1], {"a1": [[1]]})
    assert sorted(S.dims for S in enumerate_subreps(M, E)) == [(0, 0), (0, 1), (1, 1)]
    zero = make_rep(M, [0, 0])
    assert [S.dims for S in enumerate_subreps(M, zero)] == [(0, 0)]
    free = QuiverModel(("x", "y"), (), {"x": CPoly.of(I), "y": CPoly.of(I)})
    assert len(enumerate_subreps(free, make_rep(free, [1, 1]))) == 4


def test_cap():
    M = linear_quiver(3, [CPoly.of(I)] * 3)
    with pytest.raises(CapExceeded):
        enumerate_subreps(M, make_rep(M, [3, 2, 2]))


def test_field_must_be_prime():
    with pytest.raises(ValidationError):
        a2(IM_PLUS, IM_MINUS, field=4)


def test_phase_of_examples():
    M = a2(IM_MINUS, IM_PLUS)
    assert phase_of(M, (1, 0)).poly == IM_MINUS
    assert cmp_phase(phase_of(M, (2, 2)), phase_of(M, (1, 1))) is Ordering.EQ
    g = phase_of(M, (1, 1))
    assert g.poly == CPoly.of(0, GaussianRational(0, 2)) and g.at_infinity().exact() == Fraction(1, 2)
    with pytest.raises(ValidationError):
        phase_of(M, (0, 0))


def test_semistable_examples():
    M = a2(IM_PLUS, IM_MINUS)
    E = make_rep(M, [1, 1], {"a1": [[1]]})
    ok, witness = is_semistable(M, E)
    assert not ok and witness.dims == (0, 1)
    M2 = a2(IM_MINUS, IM_PLUS)
    assert is_semistable(M2, make_rep(M2, [1, 1], {"a1": [[1]]})) == (True, None)
    assert is_semistable(M, make_rep(M, [1, 0]))[0]


def test_mdq_examples():
    M = a2(IM_PLUS, IM_MINUS)
    E = make_rep(M, [1, 1], {"a1": [[1]]})
    q, K = mdq(M, E)
    assert q == (1, 0) and K.dims == (0, 1)
    M2 = a2(IM_MINUS, IM_PLUS)
    E2 = make_rep(M2, [1, 1], {"a1": [[1]]})
    q, K = mdq(M2, E2)
    assert q == (1, 1) and K.total == 0
    # S1 + S2 with phi(Z1) > phi(Z2): mdq is S2
    M3 = a2(CPoly.of(-1), CPoly.of(I))
    q, K = mdq(M3, make_rep(M3, [1, 1]))
    assert q == (0, 1) and K.dims == (1, 0)


def test_hn_examples():
    M2 = a2(IM_MINUS, IM_PLUS)
    E2 = make_rep(M2, [1, 1], {"a1": [[1]]})
    F = hn_filter(M2, E2)
    assert F.factors == ((1, 1),)
    M = a2(IM_PLUS, IM_MINUS)
    E = make_rep(M, [1, 1], {"a1": [[1]]})
    F = hn_filter(M, E)
    assert F.factors == ((0, 1), (1, 0))
    assert cmp_phase(F.phases[0], F.phases[1]) is Ordering.GT
    assert brute_force_validate(M, E, F)
    # A + B with phi(A) > phi(B) and no maps between them
    free = QuiverModel(("a", "b"), (), {"a": CPoly.of(-1), "b": CPoly.of(I)})
    F = hn_filter(free, make_rep(free, [1, 1]))
    assert F.factors == ((1, 0), (0, 1))


def test_validate_rejects_bad_filtrations():
    M = a2(IM_PLUS, IM_MINUS)
    E = make_rep(M, [1, 1], {"a1": [[1]]})
    whole = full_subrep(M, E)
    bad = HNFiltration((zero_subrep(E), whole), ((1, 1),), (phase_of(M, (1, 1)),))
    assert not brute_force_validate(M, E, bad)
    free = QuiverModel(("a", "b"), (), {"a": CPoly.of(I), "b": CPoly.of(I)})
    E = make_rep(free, [1, 1])
    mid = next(S for S in enumerate_subreps(free, E) if S.dims == (1, 0))
    g = phase_of(free, (1, 0))
    equal = HNFiltration((zero_subrep(E), mid, full_subrep(free, E)), ((1, 0), (0, 1)), (g, g))
    assert not brute_force_validate(free, E, equal)
    assert brute_force_validate(free, E, hn_filter(free, E))


def test_kronecker_over_f3():
    charges = {"s": CPoly.of(2, GaussianRational(-1, 1)), "t": CPoly.of(1, I)}
    M = QuiverModel(("s", "t"), (Arrow("x", "s", "t"), Arrow("y", "s", "t")), charges, field=3)
    rng = random.Random(0)
    for _ in range(40):
        ds, dt = rng.randint(0, 2), rng.randint(0, 2)
        mats = {a: [[rng.randrange(3) for _ in range(ds)] for _ in range(dt)] for a in ("x", "y")}
        E = make_rep(M, [ds, dt], mats)
        if E.total:
            assert brute_force_validate(M, E, hn_filter(M, E))


def test_all_reps_counts():
    M = linear_quiver(2, [CPoly.of(I), CPoly.of(-1)])
    reps = list(all_reps(M, 1))
    # dims (a, b) in {0,1}^2; only (1,1) carries a map, which is 0 or 1
    assert len(reps) == 5


def test_see_saw_sample():
    rng = random.Random(4)
    charges = [CPoly.of(GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3)), GaussianRational(rng.randint(-3, 3), rng.randint(1, 3))) for _ in range(3)]
    M = linear_quiver(3, charges)
    for E in itertools.islice(all_reps(M, 2), 0, None, 7):
        if not E.total:
            continue
        gE = phase_of(M, E.dims)
        for a, b in short_exact_sequences(M, E):
            ca, cb = cmp_phase(phase_of(M, a), gE), cmp_phase(gE, phase_of(M, b))
            # Z(E) = Z(A) + Z(B) forces phi(A) <= phi(E) <= phi(B) or the reverse, with equalities together
            assert ca is cb
