"""Exact complex polynomials in ``m`` and the ordered set of polynomial phase germs.

A phase germ is the continuous argument ``phi(m) = Arg(Z(m)) / pi`` of a nonzero
polynomial ``Z`` with Gaussian-rational coefficients, considered for ``m`` near
``+infinity``.  It is stored as ``(poly, branch)`` where ``branch`` fixes the
even integer offset:

    lim_{m -> oo} phi(m) = PrincipalArg(lead(poly)) / pi + 2 * branch,

with the principal argument taken in ``(-1, 1]`` (units of pi).  Everything in
this module is exact; no floating point is used for any comparison.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1

    def reverse(self) -> "Ordering":
        return Ordering(-int(self))


def _sign(x: Fraction) -> Ordering:
    return Ordering.GT if x > 0 else Ordering.LT if x < 0 else Ordering.EQ


@dataclass(frozen=True, eq=False)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", as_rational(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", as_rational(self.im))

    @classmethod
    def coerce(cls, x: "GaussianLike") -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact; pass re/im rationals")
        return cls(as_rational(x), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        # agrees with hash(re) for real values, like int == Fraction
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __add__(self, other: "GaussianLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: "GaussianLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: "GaussianLike") -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __mul__(self, other: "GaussianLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __truediv__(self, other: "GaussianLike") -> "GaussianRational":
        o = GaussianRational.coerce(other)
        n = o.norm2()
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conj()
        return GaussianRational(num.re / n, num.im / n)

    def __pow__(self, k: int) -> "GaussianRational":
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        out = GaussianRational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        return f"{self.re}{sign}{'' if mag == 1 else mag}i"


GaussianLike = Union[GaussianRational, int, Fraction, str]
ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)


def gaussian(re: RationalLike = 0, im: RationalLike = 0) -> GaussianRational:
    return GaussianRational(as_rational(re), as_rational(im))


@dataclass(frozen=True)
class CPoly:
    """Polynomial in ``m`` with Gaussian-rational coefficients, lowest degree first.

    Trailing zero coefficients are stripped on construction, so the zero
    polynomial is the empty tuple and a nonzero polynomial has a nonzero lead.
    """

    coeffs: tuple = ()

    def __post_init__(self) -> None:
        cs = [GaussianRational.coerce(c) for c in self.coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, *coeffs: GaussianLike) -> "CPoly":
        return cls(tuple(coeffs))

    @classmethod
    def monomial(cls, c: GaussianLike, d: int) -> "CPoly":
        return cls((ZERO,) * d + (GaussianRational.coerce(c),))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> GaussianRational:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, d: int) -> GaussianRational:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else ZERO

    def __add__(self, other: "CPoly") -> "CPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return CPoly(tuple(self.coeff(d) + other.coeff(d) for d in range(n)))

    def __sub__(self, other: "CPoly") -> "CPoly":
        return self + (-other)

    def __neg__(self) -> "CPoly":
        return CPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: Union["CPoly", GaussianLike]) -> "CPoly":
        if not isinstance(other, CPoly):
            s = GaussianRational.coerce(other)
            return CPoly(tuple(c * s for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return CPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return CPoly(tuple(out))

    __rmul__ = __mul__

    def conj(self) -> "CPoly":
        """Coefficientwise conjugate; agrees with ``conj(p(m))`` for real ``m``."""
        return CPoly(tuple(c.conj() for c in self.coeffs))

    def real_part(self) -> list[Fraction]:
        return _strip([c.re for c in self.coeffs])

    def imag_part(self) -> list[Fraction]:
        return _strip([c.im for c in self.coeffs])

    def __call__(self, m: RationalLike) -> GaussianRational:
        return eval_poly(self, m)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            cs = str(c)
            if c.re and c.im and d:
                cs = f"({cs})"
            if d == 0:
                terms.append(cs)
            else:
                mono = "m" if d == 1 else f"m^{d}"
                terms.append(mono if cs == "1" else f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def _strip(cs: list[Fraction]) -> list[Fraction]:
    while cs and not cs[-1]:
        cs.pop()
    return cs


def eval_poly(p: CPoly, m: RationalLike) -> GaussianRational:
    """Horner evaluation at a rational point."""
    m = as_rational(m)
    re, im = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        re, im = re * m + c.re, im * m + c.im
    return GaussianRational(re, im)


# -- directions and principal arguments -------------------------------------

# Sector index increases with PrincipalArg / pi in (-1, 1].  Even indices are
# open quadrants, odd ones the four half-axes (index 7 is the negative reals).
def sector(z: GaussianRational) -> int:
    re, im = z.re, z.im
    if im == 0:
        if re > 0:
            return 3
        if re < 0:
            return 7
        raise ValueError("the zero vector has no direction")
    if re == 0:
        return 5 if im > 0 else 1
    if im > 0:
        return 4 if re > 0 else 6
    return 2 if re > 0 else 0


# Exact Arg / pi on the axis sectors.
_AXIS_ARG = {1: Fraction(-1, 2), 3: Fraction(0), 5: Fraction(1, 2), 7: Fraction(1)}


def cmp_direction(a: GaussianRational, b: GaussianRational) -> Ordering:
    """Compare PrincipalArg(a) with PrincipalArg(b), both in (-pi, pi]."""
    sa, sb = sector(a), sector(b)
    if sa != sb:
        return Ordering.LT if sa < sb else Ordering.GT
    if sa % 2 == 1:
        return Ordering.EQ
    # same open quadrant: the angle between them is below pi/2
    return _sign((a * b.conj()).im)


def in_half_plane(z: GaussianRational) -> bool:
    """Membership in the semi-closed upper half plane: Im > 0, or Im = 0 and Re < 0."""
    return z.im > 0 or (z.im == 0 and z.re < 0)


def arg_over_pi_exact(z: GaussianRational) -> Fraction | None:
    """PrincipalArg(z) / pi when it is rational (axes and diagonals), else None."""
    s = sector(z)
    if s in _AXIS_ARG:
        return _AXIS_ARG[s]
    if abs(z.re) != abs(z.im):
        return None
    return {0: Fraction(-3, 4), 2: Fraction(-1, 4), 4: Fraction(1, 4), 6: Fraction(3, 4)}[s]


def _canonical_direction(z: GaussianRational) -> GaussianRational:
    scale = max(abs(z.re), abs(z.im))
    return GaussianRational(z.re / scale, z.im / scale)


@dataclass(frozen=True)
class PhaseAtInfinity:
    """The exact real number PrincipalArg(direction)/pi + 2*branch.

    ``direction`` is stored rescaled by a positive rational so that two values
    are equal as dataclasses exactly when they denote the same real number.
    """

    direction: GaussianRational
    branch: int = 0

    def __post_init__(self) -> None:
        if not self.direction:
            raise ValueError("phase direction must be nonzero")
        object.__setattr__(self, "direction", _canonical_direction(self.direction))

    def compare(self, other: "PhaseAtInfinity") -> Ordering:
        if self.branch != other.branch:
            return Ordering.LT if self.branch < other.branch else Ordering.GT
        return cmp_direction(self.direction, other.direction)

    def __lt__(self, other: "PhaseAtInfinity") -> bool:
        return self.compare(other) is Ordering.LT

    def __le__(self, other: "PhaseAtInfinity") -> bool:
        return self.compare(other) is not Ordering.GT

    def __gt__(self, other: "PhaseAtInfinity") -> bool:
        return self.compare(other) is Ordering.GT

    def __ge__(self, other: "PhaseAtInfinity") -> bool:
        return self.compare(other) is not Ordering.LT

    def exact(self) -> Fraction | None:
        """The value as a rational, when it is one."""
        a = arg_over_pi_exact(self.direction)
        return None if a is None else a + 2 * self.branch

    def __float__(self) -> float:
        import math

        return math.atan2(float(self.direction.im), float(self.direction.re)) / math.pi + 2 * self.branch

    def __str__(self) -> str:
        e = self.exact()
        if e is not None:
            return str(e)
        base = f"Arg({self.direction})/pi"
        return base if not self.branch else f"{base}{self.branch * 2:+d}"


@dataclass(frozen=True)
class PhaseGerm:
    """A polynomial phase function: nonzero ``poly`` plus the branch integer."""

    poly: CPoly
    branch: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.poly, CPoly):
            object.__setattr__(self, "poly", CPoly(tuple(self.poly)))
        if self.poly.is_zero():
            raise ValueError("a phase germ needs a nonzero polynomial")

    def at_infinity(self) -> PhaseAtInfinity:
        return PhaseAtInfinity(self.poly.lead, self.branch)

    def compare(self, other: "PhaseGerm") -> Ordering:
        return cmp_phase(self, other)

    def __lt__(self, other: "PhaseGerm") -> bool:
        return cmp_phase(self, other) is Ordering.LT

    def __le__(self, other: "PhaseGerm") -> bool:
        return cmp_phase(self, other) is not Ordering.GT

    def __gt__(self, other: "PhaseGerm") -> bool:
        return cmp_phase(self, other) is Ordering.GT

    def __ge__(self, other: "PhaseGerm") -> bool:
        return cmp_phase(self, other) is not Ordering.LT

    def same_germ(self, other: "PhaseGerm") -> bool:
        return cmp_phase(self, other) is Ordering.EQ


def phase_at_infinity(a: PhaseGerm) -> PhaseAtInfinity:
    return a.at_infinity()


def imag_cross(a: CPoly, b: CPoly) -> list[Fraction]:
    """Real coefficients of Im(a(m) * conj(b(m))) for real m."""
    return (a * b.conj()).imag_part()


def cmp_phase(a: PhaseGerm, b: PhaseGerm) -> Ordering:
    """Sign of phi_a(m) - phi_b(m) for all sufficiently large m."""
    at_inf = a.at_infinity().compare(b.at_infinity())
    if at_inf is not Ordering.EQ:
        return at_inf
    cross = imag_cross(a.poly, b.poly)
    if not cross:
        return Ordering.EQ
    return _sign(cross[-1])


def shift_phase(a: PhaseGerm, n: int) -> PhaseGerm:
    """The germ phi + n: poly times (-1)^n, branch adjusted to keep continuity."""
    if n % 2 == 0:
        return PhaseGerm(a.poly, a.branch + n // 2)
    upper = sector(a.poly.lead) >= 4  # PrincipalArg in (0, 1]
    k = a.branch + ((n + 1) // 2 if upper else (n - 1) // 2)
    return PhaseGerm(-a.poly, k)


def cauchy_bound(coeffs: Sequence[Fraction]) -> Fraction:
    """1 + max |c_i / c_d|: every real root has absolute value below this."""
    cs = _strip(list(coeffs))
    if not cs:
        return Fraction(0)
    lead = abs(cs[-1])
    return 1 + max((abs(c) / lead for c in cs[:-1]), default=Fraction(0))


def stabilization_bound(a: PhaseGerm, b: PhaseGerm) -> Fraction:
    """A rational M such that for every m >= M the order of phi_a(m), phi_b(m) is cmp_phase(a, b).

    Every complex root of either polynomial has modulus below M, and beyond M
    Im(a conj b) keeps a constant sign, so the continuous difference of
    arguments cannot cross a multiple of pi; that pins its sign to the one at
    infinity.
    """
    parts: list[list[Fraction]] = [
        a.poly.real_part(),
        a.poly.imag_part(),
        b.poly.real_part(),
        b.poly.imag_part(),
        imag_cross(a.poly, b.poly),
    ]
    return 1 + max([cauchy_bound(p) for p in parts] + [modulus_cauchy_bound(a.poly), modulus_cauchy_bound(b.poly)])


def modulus_cauchy_bound(p: CPoly) -> Fraction:
    """Rational upper bound for 1 + max |c_i| / |c_d|, which bounds every complex root.

    Uses |c| <= |Re c| + |Im c| and |c_d| >= max(|Re c_d|, |Im c_d|).
    """
    if p.is_zero():
        return Fraction(0)
    lead = max(abs(p.lead.re), abs(p.lead.im))
    return 1 + max(((abs(c.re) + abs(c.im)) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def sum_polys(polys: Iterable[CPoly]) -> CPoly:
    out = CPoly()
    for p in polys:
        out = out + p
    return out
