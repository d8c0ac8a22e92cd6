"""Semi-metric, semi-norm and ball membership on finite presentations of stability conditions.

A presentation lists finitely many test objects with their charge polynomial,
extremal HN phase germs and a semistability flag; every supremum is taken
over that finite set.  Irrational quantities (arguments over pi, sin(pi eps))
are bracketed by rational enclosures from interval arithmetic and refined on
demand.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from mpmath import iv
from mpmath.libmp import to_rational

from .errors import UndecidedAtPrecision, ValidationError
from .phasecore import (
    CPoly,
    GaussianRational,
    Ordering,
    PhaseAtInfinity,
    PhaseGerm,
    arg_over_pi_exact,
    as_rational,
    cmp_phase,
    shift_phase,
)

START_PREC = 64
PREC_FLOOR = 4096


@dataclass(frozen=True)
class TestObject:
    label: str
    Z: CPoly
    phi_plus: PhaseGerm
    phi_minus: PhaseGerm
    semistable: bool = True

    __test__ = False  # not a pytest class

    def __post_init__(self) -> None:
        if cmp_phase(self.phi_minus, self.phi_plus) is Ordering.GT:
            raise ValidationError("phase-order", None, f"{self.label}: phi- exceeds phi+")
        if self.semistable and cmp_phase(self.phi_minus, self.phi_plus) is not Ordering.EQ:
            raise ValidationError("phase-order", None, f"{self.label}: semistable object needs phi- = phi+")


@dataclass(frozen=True)
class FiniteStabilityPresentation:
    objects: tuple[TestObject, ...]

    def __post_init__(self) -> None:
        labels = [o.label for o in self.objects]
        if len(set(labels)) != len(labels):
            raise ValidationError("duplicate-label", None, "test object labels must be distinct")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(o.label for o in self.objects)

    def by_label(self) -> dict[str, TestObject]:
        return {o.label: o for o in self.objects}

    def charge_map(self) -> "CentralChargeMap":
        return CentralChargeMap({o.label: o.Z for o in self.objects})

    def shifted(self, n: int) -> "FiniteStabilityPresentation":
        """Every object replaced by its shift [n]."""
        sign = -1 if n % 2 else 1
        return FiniteStabilityPresentation(tuple(
            TestObject(o.label, o.Z * sign, shift_phase(o.phi_plus, n), shift_phase(o.phi_minus, n), o.semistable)
            for o in self.objects
        ))


@dataclass(frozen=True)
class CentralChargeMap:
    charges: Mapping[str, CPoly]

    def __sub__(self, other: "CentralChargeMap") -> "CentralChargeMap":
        _same_labels(self.charges, other.charges)
        return CentralChargeMap({k: self.charges[k] - other.charges[k] for k in self.charges})

    def __add__(self, other: "CentralChargeMap") -> "CentralChargeMap":
        _same_labels(self.charges, other.charges)
        return CentralChargeMap({k: self.charges[k] + other.charges[k] for k in self.charges})

    def scale(self, c: object) -> "CentralChargeMap":
        return CentralChargeMap({k: v * GaussianRational.coerce(c) for k, v in self.charges.items()})


def _same_labels(a: Iterable[str], b: Iterable[str]) -> None:
    if set(a) != set(b):
        raise ValidationError("label-mismatch", None, f"{sorted(set(a) ^ set(b))}")


# -- enclosures -----------------------------------------------------------------


@dataclass(frozen=True)
class Enclosure:
    """A closed rational interval [lo, hi] known to contain a real number."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> Fraction | None:
        return self.lo if self.lo == self.hi else None

    def __str__(self) -> str:
        return str(self.lo) if self.exact is not None else f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


@contextmanager
def _precision(prec: int):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def _to_fraction(x) -> Fraction:
    p, q = to_rational(x._mpf_ if hasattr(x, "_mpf_") else x)
    return Fraction(int(p), int(q))


def _iv_rational(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _interval(x) -> Enclosure:
    lo, hi = x._mpi_
    return Enclosure(_to_fraction(lo), _to_fraction(hi))


def phase_difference(a: PhaseAtInfinity, b: PhaseAtInfinity, prec: int = START_PREC) -> Enclosure:
    """Enclosure of |a - b|, exact whenever the difference is rational."""
    # Arg(a) - Arg(b) = Arg(a conj b) + 2 pi j with j in {-1, 0, 1}; the angle of
    # a Gaussian rational is a rational multiple of pi only on axes and diagonals.
    ratio = a.direction * b.direction.conj()
    q = arg_over_pi_exact(ratio)
    with _precision(prec):
        approx = _arg_over_pi(a.direction) - _arg_over_pi(b.direction) + 2 * (a.branch - b.branch)
        if q is not None:
            mid = _to_fraction(approx._mpi_[0]) / 2 + _to_fraction(approx._mpi_[1]) / 2
            j = round((mid - q - 2 * (a.branch - b.branch)) / 2)
            d = abs(q + 2 * j + 2 * (a.branch - b.branch))
            return Enclosure(d, d)
        e = _interval(approx)
    if e.lo >= 0:
        return e
    if e.hi <= 0:
        return Enclosure(-e.hi, -e.lo)
    return Enclosure(Fraction(0), max(-e.lo, e.hi))


def _arg_over_pi(z: GaussianRational):
    return iv.atan2(_iv_rational(z.im), _iv_rational(z.re)) / iv.pi


def sin_squared_pi(eps: Fraction, prec: int = START_PREC) -> Enclosure:
    """Enclosure of sin(pi eps)^2; exact at eps = 1/6, the only rational value for eps in (0, 1/4)."""
    if eps == Fraction(1, 6):
        return Enclosure(Fraction(1, 4), Fraction(1, 4))
    with _precision(prec):
        s = iv.sin(iv.pi * _iv_rational(eps))
        return _interval(s * s)


def _less_than(compute, bound: Fraction, what: str, floor: int) -> bool:
    """Decide value < bound from enclosures computed at growing precision."""
    prec = START_PREC
    while True:
        e = compute(prec)
        if e.hi < bound:
            return True
        if e.lo >= bound:
            return False
        if prec >= floor:
            raise UndecidedAtPrecision(f"{what}: {e} vs {bound} at {prec} bits")
        prec *= 2


def _bound_less_than(value: Fraction, compute, what: str, floor: int) -> bool:
    """Decide value < X where X is known by enclosures."""
    prec = START_PREC
    while True:
        e = compute(prec)
        if value < e.lo:
            return True
        if value >= e.hi:
            return False
        if prec >= floor:
            raise UndecidedAtPrecision(f"{what}: {value} vs {e} at {prec} bits")
        prec *= 2


# -- semi-metric ----------------------------------------------------------------


@dataclass(frozen=True)
class DMetricResult:
    value: Enclosure
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    @property
    def exact(self) -> Fraction | None:
        return self.value.exact


def _pairs(P: FiniteStabilityPresentation, Q: FiniteStabilityPresentation):
    _same_labels(P.labels, Q.labels)
    q = Q.by_label()
    for o in P.objects:
        yield o.label, "phi-", o.phi_minus, q[o.label].phi_minus
        yield o.label, "phi+", o.phi_plus, q[o.label].phi_plus


def d_metric(P: FiniteStabilityPresentation, Q: FiniteStabilityPresentation, prec: int = START_PREC) -> DMetricResult:
    """sup over test objects of |phi-_P - phi-_Q| and |phi+_P - phi+_Q| at infinity."""
    lo = hi = Fraction(0)
    notes = []
    for label, which, a, b in _pairs(P, Q):
        e = phase_difference(a.at_infinity(), b.at_infinity(), prec)
        lo, hi = max(lo, e.lo), max(hi, e.hi)
        if e.exact == 0 and not a.same_germ(b):
            notes.append(f"{label} {which}: equal at infinity, distinct germs")
    return DMetricResult(Enclosure(lo, hi), tuple(notes))


def d_metric_less_than(P: FiniteStabilityPresentation, Q: FiniteStabilityPresentation,
                       eps: object, floor: int = PREC_FLOOR) -> bool:
    eps = as_rational(eps)
    pairs = list(_pairs(P, Q))
    for label, which, a, b in pairs:
        def compute(prec, a=a, b=b):
            return phase_difference(a.at_infinity(), b.at_infinity(), prec)
        if not _less_than(compute, eps, f"d_S at {label} {which}", floor):
            return False
    return True


# -- semi-norm ------------------------------------------------------------------


ZERO_KIND, FINITE_KIND, INFINITE_KIND = "zero", "finite", "infinity"


@dataclass(frozen=True)
class SemiNormValue:
    """0, sqrt(squared) or infinity."""

    kind: str
    squared: Fraction = Fraction(0)

    @classmethod
    def of_squared(cls, sq: Fraction) -> "SemiNormValue":
        return cls(ZERO_KIND) if sq == 0 else cls(FINITE_KIND, sq)

    def _key(self) -> tuple[int, Fraction]:
        return (1, Fraction(0)) if self.kind == INFINITE_KIND else (0, self.squared)

    def __lt__(self, other: "SemiNormValue") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "SemiNormValue") -> bool:
        return self._key() <= other._key()

    @property
    def exact(self) -> Fraction | None:
        """The value itself when it is rational."""
        if self.kind == INFINITE_KIND:
            return None
        r = _rational_sqrt(self.squared)
        return r

    def __float__(self) -> float:
        return float("inf") if self.kind == INFINITE_KIND else float(self.squared) ** 0.5

    def __str__(self) -> str:
        if self.kind == INFINITE_KIND:
            return "inf"
        r = self.exact
        return str(r) if r is not None else f"sqrt({self.squared})"


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt

    n, d = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(n, d) if n * n == q.numerator and d * d == q.denominator else None


INFINITY = SemiNormValue(INFINITE_KIND)


def object_ratio(u: CPoly, z: CPoly) -> SemiNormValue:
    """limsup |u(m)| / |z(m)| as m -> infinity."""
    if z.is_zero():
        raise ValidationError("zero-charge", None, "Z is zero")
    if u.degree < z.degree:
        return SemiNormValue(ZERO_KIND)
    if u.degree > z.degree:
        return INFINITY
    return SemiNormValue.of_squared(u.lead.norm2() / z.lead.norm2())


def semi_norm(U: CentralChargeMap, sigma: FiniteStabilityPresentation) -> SemiNormValue:
    """sup over semistable test objects of limsup |U(E)| / |Z(E)|."""
    _same_labels(U.charges, sigma.labels)
    best = SemiNormValue(ZERO_KIND)
    for o in sigma.objects:
        if not o.semistable:
            continue
        if o.Z.is_zero():
            raise ValidationError("zero-charge", None, f"semistable object {o.label} has Z = 0")
        r = object_ratio(U.charges[o.label], o.Z)
        if best < r:
            best = r
    return best


def _check_eps(eps: object) -> Fraction:
    eps = as_rational(eps)
    if not 0 < eps < Fraction(1, 4):
        raise ValidationError("epsilon-range", None, f"epsilon = {eps} must lie in (0, 1/4)")
    return eps


def norm_less_than_sin(value: SemiNormValue, eps: object, floor: int = PREC_FLOOR) -> bool:
    """value < sin(pi eps), decided via squares."""
    eps = _check_eps(eps)
    if value.kind == INFINITE_KIND:
        return False
    if value.kind == ZERO_KIND:
        return True
    return _bound_less_than(value.squared, lambda prec: sin_squared_pi(eps, prec), "norm vs sin(pi eps)", floor)


def ball_test(sigma: FiniteStabilityPresentation, tau: FiniteStabilityPresentation,
              eps: object, floor: int = PREC_FLOOR) -> bool:
    """Is tau = (W, Q) inside the eps-ball around sigma = (Z, P)?"""
    eps = _check_eps(eps)
    diff = tau.charge_map() - sigma.charge_map()
    if not norm_less_than_sin(semi_norm(diff, sigma), eps, floor):
        return False
    return d_metric_less_than(sigma, tau, eps, floor)
