"""Wall-crossing: DT/PT classification of stability vectors on threefolds,
wall location along linear families, destabilizing subobjects of ideal-sheaf
classes, and the large-volume surface classifier with its explicit bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ValidationError
from .numgeo import GradedRingModel, NumClass, degree_only
from .phasecore import (
    CPoly,
    GaussianLike,
    GaussianRational,
    Ordering,
    PhaseAtInfinity,
    PhaseGerm,
    as_rational,
    cmp_phase,
    in_half_plane,
    stabilization_bound,
)
from .stabfam import OmegaData, heart_phase, rho_violations

DT, PT, WALL, PT_DUAL, INVALID = "DT", "PT", "WALL", "PT-DUAL", "INVALID"


@dataclass(frozen=True)
class DTPTVerdict:
    tag: str
    phase_minus_rho3: PhaseAtInfinity | None = None
    phase_rho0: PhaseAtInfinity | None = None
    clause: str = ""
    note: str = ""


def classify_dtpt(rho: Sequence[GaussianLike], beta_w: object | None = None) -> DTPTVerdict:
    """DT / PT / WALL / PT-DUAL for a length-4 stability vector with p = -floor(d/2).

    ``beta_w`` (the omega-degree of the curve class) only feeds the note
    attached to PT verdicts with beta = 0.
    """
    if len(rho) != 4:
        return DTPTVerdict(INVALID, clause="shape")
    rho = [GaussianRational.coerce(r) for r in rho]
    errors = rho_violations(rho)
    if errors:
        return DTPTVerdict(INVALID, clause=errors[0].label)
    for d, z in enumerate(rho):
        if not in_half_plane(z if d < 2 else -z):
            side = "H" if d < 2 else "-H"
            return DTPTVerdict(INVALID, clause=f"rho_{d} not in {side}")
    minus3 = PhaseAtInfinity(-rho[3])
    phi0 = PhaseAtInfinity(rho[0])
    phi1 = PhaseAtInfinity(rho[1])
    if minus3.compare(phi1) is not Ordering.GT:
        return DTPTVerdict(PT_DUAL, minus3, phi0)
    c = minus3.compare(phi0)
    if c is Ordering.GT:
        return DTPTVerdict(DT, minus3, phi0)
    if c is Ordering.EQ:
        return DTPTVerdict(WALL, minus3, phi0)
    note = ""
    if beta_w is not None and as_rational(beta_w) == 0:
        note = "beta = 0: the only semistable object of class (-1,0,0,0) is O_X[1]"
    return DTPTVerdict(PT, minus3, phi0, note=note)


@dataclass(frozen=True)
class Wall:
    t: Fraction
    left: str
    right: str
    at: str


@dataclass(frozen=True)
class WallScan:
    samples: tuple[tuple[Fraction, DTPTVerdict], ...]
    walls: tuple[Wall, ...]


def _linear_root(c0: Fraction, c1: Fraction) -> Fraction | None:
    """Root of c0 + t*c1, when the form is not constant."""
    return None if c1 == 0 else -c0 / c1


def scan_wall_family(
    rho012: Sequence[GaussianLike],
    c: GaussianLike,
    v: GaussianLike,
    lo: object,
    hi: object,
    steps: int,
) -> WallScan:
    """Classify rho_3(t) = c + t*v on a grid of ``steps + 1`` points and locate walls exactly.

    Every verdict boundary is a root of a real-linear form in t (a phase
    equality of -rho_3 with rho_0 or rho_1, or a boundary of the validity
    region), so walls are found by solving those forms and comparing the
    verdicts on the open intervals next to each root.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    if hi < lo or steps < 0 or (steps == 0 and hi != lo):
        raise ValidationError("empty-range", None, f"cannot sample [{lo}, {hi}] with {steps} steps")
    r0, r1, r2 = (GaussianRational.coerce(x) for x in rho012)
    c, v = GaussianRational.coerce(c), GaussianRational.coerce(v)

    def verdict(t: Fraction) -> DTPTVerdict:
        return classify_dtpt([r0, r1, r2, c + v * t])

    grid = [lo + (hi - lo) * Fraction(i, steps) for i in range(steps + 1)] if steps else [lo]
    samples = tuple((t, verdict(t)) for t in grid)

    # linear forms f(t) = f0 + t*f1 whose sign changes can alter the verdict
    forms = []
    for w in (r0, r1):
        forms.append(((-c * w.conj()).im, (-v * w.conj()).im))
    forms.append(((r2 * c.conj()).im, (r2 * v.conj()).im))
    forms.append(((-c).im, (-v).im))
    forms.append(((-c).re, (-v).re))
    roots = sorted({t for f0, f1 in forms if (t := _linear_root(f0, f1)) is not None and lo < t < hi})
    points = [lo] + roots + [hi]
    walls = []
    for i, t in enumerate(roots, start=1):
        left = verdict((points[i - 1] + t) / 2).tag
        right = verdict((t + points[i + 1]) / 2).tag
        if left != right:
            walls.append(Wall(t, left, right, verdict(t).tag))
    return WallScan(samples, tuple(walls))


def locate_transition(verdict_at: Callable[[Fraction], str], lo: object, hi: object,
                      width: object = Fraction(1, 10**9)) -> tuple[Fraction, Fraction]:
    """Bisect a verdict change between lo and hi down to a rational enclosure of the given width."""
    a, b = as_rational(lo), as_rational(hi)
    width = as_rational(width)
    va, vb = verdict_at(a), verdict_at(b)
    if va == vb:
        raise ValidationError("no-transition", None, f"verdict {va} at both ends")
    while b - a > width:
        mid = (a + b) / 2
        vm = verdict_at(mid)
        if vm == va:
            a = mid
        else:
            b, vb = mid, vm
    return a, b


# -- threefold classes on a degree-only model ----------------------------------


@dataclass(frozen=True)
class ThreefoldClass:
    """(ch0, omega^2.ch1, omega.ch2, ch3) on a degree-only threefold."""

    ch0: Fraction
    ch1w: Fraction
    ch2w: Fraction
    ch3: Fraction

    def __post_init__(self) -> None:
        for name in ("ch0", "ch1w", "ch2w", "ch3"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    def __sub__(self, other: "ThreefoldClass") -> "ThreefoldClass":
        return ThreefoldClass(self.ch0 - other.ch0, self.ch1w - other.ch1w, self.ch2w - other.ch2w, self.ch3 - other.ch3)

    def to_numclass(self, model: GradedRingModel) -> NumClass:
        if model.dimension != 3 or any(len(b) != 1 for b in model.bases):
            raise ValidationError("model", None, "threefold classes need a degree-only 3-dimensional model")
        deg = model.integral[0]
        return model.from_degrees({0: [self.ch0], 1: [self.ch1w / deg], 2: [self.ch2w / deg], 3: [self.ch3 / deg]})


def ideal_sheaf_class(beta_w: object, n: object) -> ThreefoldClass:
    """Class (-1, 0, beta, n) of a shifted ideal sheaf / stable pair complex."""
    return ThreefoldClass(-1, 0, beta_w, n)


def threefold_omega(rho: Sequence[GaussianLike], degree: object = 1, U: NumClass | None = None) -> OmegaData:
    """Omega data on the degree-only threefold with p = (0, 0, -1, -1) and omega = w."""
    from .stabfam import validate_omega

    model = degree_only(3, as_rational(degree))
    return validate_omega(model, model.basis_class("w"), list(rho), [0, 0, -1, -1], U or model.unit())


DESTABILIZES, NEUTRAL, STABILIZES_SIDE = "destabilizes", "neutral", "stabilizes-side"


def destabilizer_check(O: OmegaData, total: ThreefoldClass, sub: ThreefoldClass) -> str:
    """Does a subobject of class ``sub`` destabilize an object of class ``total``?

    "destabilizes" when phi(sub) > phi(total); "stabilizes-side" when a proper
    subobject has exactly the same phase germ (the object sits on a wall);
    "neutral" otherwise.
    """
    g_total = heart_phase(O, total.to_numclass(O.model))
    g_sub = heart_phase(O, sub.to_numclass(O.model))
    if sub != total:
        heart_phase(O, (total - sub).to_numclass(O.model))  # quotient must be in the heart too
    c = cmp_phase(g_sub, g_total)
    if c is Ordering.GT:
        return DESTABILIZES
    if c is Ordering.EQ and sub != total:
        return STABILIZES_SIDE
    return NEUTRAL


# -- surfaces ---------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceClass:
    rk: Fraction
    c1w: Fraction
    c1b: Fraction = Fraction(0)
    c1sq: Fraction = Fraction(0)
    ch2: Fraction = Fraction(0)
    w2: Fraction = Fraction(1)
    bw: Fraction = Fraction(0)
    b2: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("rk", "c1w", "c1b", "c1sq", "ch2", "w2", "bw", "b2"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.w2 <= 0:
            raise ValidationError("w2-positive", None, "omega^2 must be positive")

    def shifted(self) -> "SurfaceClass":
        """Class of E[1]."""
        return SurfaceClass(-self.rk, -self.c1w, -self.c1b, self.c1sq, -self.ch2, self.w2, self.bw, self.b2)

    @property
    def mu(self) -> Fraction:
        if self.rk == 0:
            raise ValidationError("rk-zero", None, "slope needs nonzero rank")
        return self.c1w / self.rk

    @property
    def c(self) -> Fraction:
        """Constant term of the large-volume charge: -(ch2 - beta.ch1 + rk beta^2 / 2)."""
        return -(self.ch2 - self.c1b + self.rk * self.b2 / 2)


def surface_charge(E: SurfaceClass) -> CPoly:
    """ch0 w^2 m^2 / 2 + i (w.ch1 - ch0 b.w) m + c(E)."""
    return CPoly.of(E.c, GaussianRational(0, E.c1w - E.rk * E.bw), E.rk * E.w2 / 2)


def surface_phase(E: SurfaceClass) -> PhaseGerm:
    """Germ of Z(E) inside the window (0, 1] (as functions of m, not only at infinity)."""
    Z = surface_charge(E)
    if Z.is_zero():
        raise ValidationError("zero-charge", None, "class has zero charge")
    if in_half_plane(Z.lead):
        return PhaseGerm(Z, 0)
    im = Z.imag_part()
    if Z.lead.im == 0 and Z.lead.re > 0 and im and im[-1] > 0:
        return PhaseGerm(Z, 0)
    raise ValidationError("outside-window", None, f"Z = {Z} is not eventually in the upper half plane")


@dataclass(frozen=True)
class BogomolovReport:
    bound: Fraction  # (1/2) (ch1/rk - beta)^2
    value: Fraction  # c(B[1]) / rk = (ch2 - beta.ch1 + rk beta^2/2) / rk
    hodge_bound: Fraction  # (w.ch1/rk - b.w)^2 / (2 w^2)

    @property
    def satisfied(self) -> bool:
        return self.value <= self.bound

    @property
    def hodge_ok(self) -> bool:
        return self.bound <= self.hodge_bound


def bogomolov_bound(B: SurfaceClass) -> BogomolovReport:
    """Upper bound for c/rk of a shifted mu-semistable sheaf B[1], from Bogomolov-Gieseker."""
    if B.rk <= 0:
        raise ValidationError("rk-nonpositive", None, "the bound needs positive rank")
    rk = B.rk
    bound = (B.c1sq - 2 * B.c1b * rk + B.b2 * rk * rk) / (rk * rk) / 2
    value = (B.ch2 - B.c1b + rk * B.b2 / 2) / rk
    hodge = (B.c1w / rk - B.bw) ** 2 / (2 * B.w2)
    return BogomolovReport(bound, value, hodge)


@dataclass(frozen=True)
class SheafData:
    """Numerical data of a cohomology sheaf plus caller-declared properties."""

    cls: SurfaceClass
    mu_semistable: bool = False
    torsion_free: bool = False

    @property
    def torsion(self) -> bool:
        return self.cls.rk == 0

    @property
    def zero_dimensional(self) -> bool:
        return self.cls.rk == 0 and self.cls.c1w == 0


@dataclass(frozen=True)
class SurfaceVerdict:
    case: str
    checks: dict = field(default_factory=dict)


def surface_classify(h_minus1: SheafData | None, h0: SheafData | None) -> SurfaceVerdict:
    """Which of the three shapes a semistable object with phase in (0, 1] can take."""
    failed: list[str] = []
    for name, sh in (("H^-1", h_minus1), ("H^0", h0)):
        if sh is not None and sh.torsion_free and sh.torsion:
            raise ValidationError("inconsistent", None, f"{name} declared torsion-free but has rank 0")
    if h_minus1 is None and h0 is not None:
        if h0.torsion:
            checks = {"torsion": True, "mu-semistable": h0.mu_semistable}
            if h0.mu_semistable:
                return SurfaceVerdict("a", checks)
            failed.append("a: torsion sheaf must be declared mu-semistable")
        else:
            mu, bw = h0.cls.mu, h0.cls.bw
            checks = {"torsion-free": h0.torsion_free, "mu-semistable": h0.mu_semistable,
                      "mu": mu, "beta.omega": bw, "mu > beta.omega": mu > bw}
            if h0.torsion_free and h0.mu_semistable and mu > bw:
                return SurfaceVerdict("b", checks)
            if not h0.torsion_free:
                failed.append("b: sheaf must be torsion-free")
            if not h0.mu_semistable:
                failed.append("b: sheaf must be mu-semistable")
            if not mu > bw:
                failed.append(f"b: mu = {mu} must exceed beta.omega = {bw}")
    elif h_minus1 is not None:
        ok = True
        if h_minus1.torsion:
            failed.append("c: H^-1 must have positive rank")
            ok = False
        else:
            mu, bw = h_minus1.cls.mu, h_minus1.cls.bw
            checks = {"torsion-free": h_minus1.torsion_free, "mu-semistable": h_minus1.mu_semistable,
                      "mu": mu, "beta.omega": bw, "mu <= beta.omega": mu <= bw,
                      "H^0 zero-dimensional": h0 is None or h0.zero_dimensional}
            if not h_minus1.torsion_free:
                failed.append("c: H^-1 must be torsion-free")
                ok = False
            if not h_minus1.mu_semistable:
                failed.append("c: H^-1 must be mu-semistable")
                ok = False
            if not mu <= bw:
                failed.append(f"c: mu(H^-1) = {mu} must be at most beta.omega = {bw}")
                ok = False
            if h0 is not None and not h0.zero_dimensional:
                failed.append("c: H^0 must be zero-dimensional")
                ok = False
            if ok:
                return SurfaceVerdict("c", checks)
    else:
        failed.append("no cohomology sheaves given")
    raise ValidationError("no-case", None, "; ".join(failed))


def surface_order_bound(E: SurfaceClass, B: SurfaceClass) -> tuple[Fraction, Ordering]:
    """(M, order): for m >= M the order of phi(E)(m) and phi(B)(m) is ``order``.

    Equal germs are equal wherever defined, so M = 1 is returned for them.
    """
    gE, gB = surface_phase(E), surface_phase(B)
    order = cmp_phase(gE, gB)
    if order is Ordering.EQ:
        return Fraction(1), order
    return stabilization_bound(gE, gB), order
