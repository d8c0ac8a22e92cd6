"""The standard family of polynomial stability functions built from (omega, rho, p, U).

The central charge of a class ``ch`` is

    Z(ch)(m) = sum_d rho_d * m^d * integral(omega^d * ch * U),

which only sees the codimension ``n - d`` component of ``ch * U`` in the
coefficient of ``m^d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .errors import ValidationError
from .numgeo import (
    AmpleClass,
    GradedRingModel,
    NumClass,
    ample_violations,
    exp_nil,
    integrate,
    inv_unipotent,
    parity,
    sqrt_unipotent,
)
from .phasecore import (
    CPoly,
    GaussianLike,
    GaussianRational,
    PhaseGerm,
    as_rational,
    in_half_plane,
    sector,
    shift_phase,
)


@dataclass(frozen=True)
class StabilityVector:
    rho: tuple[GaussianRational, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", tuple(GaussianRational.coerce(r) for r in self.rho))

    def __len__(self) -> int:
        return len(self.rho)

    def __getitem__(self, d: int) -> GaussianRational:
        return self.rho[d]

    def __iter__(self):
        return iter(self.rho)


def rho_violations(rho: Sequence[GaussianLike]) -> list[ValidationError]:
    """rho_d nonzero and rho_d / rho_{d+1} in the open upper half plane."""
    rho = [GaussianRational.coerce(r) for r in rho]
    errors = [ValidationError("rho-nonzero", d) for d, r in enumerate(rho) if not r]
    if errors:
        return errors
    for d in range(len(rho) - 1):
        # Im(rho_d / rho_{d+1}) has the sign of Im(rho_d * conj(rho_{d+1}))
        if (rho[d] * rho[d + 1].conj()).im <= 0:
            errors.append(ValidationError("rho-halfplane", d, f"{rho[d]} / {rho[d + 1]} is not in the open upper half plane"))
    return errors


def stability_vector(rho: Sequence[GaussianLike]) -> StabilityVector:
    errors = rho_violations(rho)
    if errors:
        raise errors[0]
    return StabilityVector(tuple(rho))


@dataclass(frozen=True)
class PerversityFunction:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __getitem__(self, d: int) -> int:
        return self.values[d]

    def __len__(self) -> int:
        return len(self.values)

    def dual(self) -> "PerversityFunction":
        """The dual perversity d -> -d - p(d)."""
        return PerversityFunction(tuple(-d - v for d, v in enumerate(self.values)))

    def shifted(self, c: int) -> "PerversityFunction":
        return PerversityFunction(tuple(v + c for v in self.values))


def perversity_violations(p: Sequence[int]) -> list[ValidationError]:
    errors = []
    for d in range(len(p) - 1):
        if not (p[d] >= p[d + 1] >= p[d] - 1):
            errors.append(ValidationError("perversity-monotone", d, f"need p({d}) >= p({d + 1}) >= p({d}) - 1, got {p[d]}, {p[d + 1]}"))
    return errors


def perversity(values: Sequence[int]) -> PerversityFunction:
    errors = perversity_violations(values)
    if errors:
        raise errors[0]
    return PerversityFunction(tuple(values))


def p_tilt(p: PerversityFunction, k: int) -> PerversityFunction:
    """p^k: raise by one every value strictly below -k."""
    if -k not in p.values:
        raise ValidationError("k-not-in-range", None, f"k = {k} is not -p(d) for any d")
    out = PerversityFunction(tuple(v if v >= -k else v + 1 for v in p.values))
    errors = perversity_violations(out.values)
    if errors:  # pragma: no cover - excluded by the monotonicity of p
        raise errors[0]
    return out


@dataclass(frozen=True)
class OmegaData:
    """Validated data (omega, rho, p, U).

    ``dual`` marks data produced by :func:`dual_omega`; its charges live in the
    half plane (-1)^n * conj(H) instead of H, which changes the association
    test and the window used for heart phases.
    """

    model: GradedRingModel
    omega: AmpleClass
    rho: StabilityVector
    p: PerversityFunction
    U: NumClass
    dual: bool = False

    @property
    def n(self) -> int:
        return self.model.dimension

    @cached_property
    def omega_powers(self) -> tuple[NumClass, ...]:
        pw = [self.model.unit()]
        for _ in range(self.n):
            pw.append(pw[-1] * self.omega.cls)
        return tuple(pw)


def _associated(z: GaussianRational, n: int, dual: bool) -> bool:
    if not dual:
        return in_half_plane(z)
    w = z if n % 2 == 0 else -z
    return in_half_plane(w.conj())


def omega_violations(
    model: GradedRingModel,
    omega: NumClass,
    rho: Sequence[GaussianLike],
    p: Sequence[int],
    U: NumClass,
    dual: bool = False,
) -> list[ValidationError]:
    n = model.dimension
    if len(rho) != n + 1:
        return [ValidationError("shape", None, f"rho needs {n + 1} entries, got {len(rho)}")]
    if len(p) != n + 1:
        return [ValidationError("shape", None, f"p needs {n + 1} entries, got {len(p)}")]
    if omega.model is not model or U.model is not model:
        return [ValidationError("shape", None, "omega and U must live on the given model")]
    rho = [GaussianRational.coerce(r) for r in rho]
    errors = ample_violations(omega)
    if errors:
        errors = [ValidationError("ample", e.index, e.detail) for e in errors]
    errors += rho_violations(rho)
    errors += perversity_violations(list(p))
    for d in range(n + 1):
        if rho[d] and not _associated(rho[d] if p[d] % 2 == 0 else -rho[d], n, dual):
            half = "(-1)^n conj(H)" if dual else "H"
            errors.append(ValidationError("association", d, f"(-1)^p({d}) * rho_{d} is not in {half}"))
    if U.constant != GaussianRational(1):
        errors.append(ValidationError("unipotent", 0, "U must be 1 + (positive-degree terms)"))
    return errors


def validate_omega(
    model: GradedRingModel,
    omega: NumClass,
    rho: Sequence[GaussianLike],
    p: Sequence[int],
    U: NumClass,
    dual: bool = False,
) -> OmegaData:
    errors = omega_violations(model, omega, rho, p, U, dual)
    if errors:
        raise errors[0]
    return OmegaData(model, AmpleClass(omega), StabilityVector(tuple(rho)), PerversityFunction(tuple(p)), U, dual)


def central_charge(O: OmegaData, ch: NumClass) -> CPoly:
    chU = ch * O.U
    return CPoly(tuple(O.rho[d] * integrate(O.omega_powers[d] * chU) for d in range(O.n + 1)))


def heart_phase(O: OmegaData, ch: NumClass) -> PhaseGerm:
    """Phase germ of a class in the heart, with the branch pinned to the heart's window.

    For ordinary data the window is phi(oo) in (0, 1]; for dual data it is
    [0, 1) when n is odd and [1, 2) when n is even.
    """
    Z = central_charge(O, ch)
    if Z.is_zero():
        raise ValidationError("zero-charge", None, "the class has zero central charge")
    return pin_to_window(Z, O.n, O.dual)


def pin_to_window(Z: CPoly, n: int = 0, dual: bool = False) -> PhaseGerm:
    lead = Z.lead
    s = sector(lead)
    if not dual:
        if not in_half_plane(lead):
            raise ValidationError("not-heart-direction", None, f"leading coefficient {lead} is outside H")
        return PhaseGerm(Z, 0)
    if n % 2 == 1:
        if s not in (3, 4, 5, 6):
            raise ValidationError("not-heart-direction", None, f"leading coefficient {lead} is outside -conj(H)")
        return PhaseGerm(Z, 0)
    if s not in (7, 0, 1, 2):
        raise ValidationError("not-heart-direction", None, f"leading coefficient {lead} is outside conj(H)")
    return PhaseGerm(Z, 0 if s == 7 else 1)


def object_phase(O: OmegaData, ch: NumClass, shift: int = 0) -> PhaseGerm:
    """Phase germ of an object E whose shift E[shift] lies in the heart; ``ch`` is ch(E)."""
    moved = ch if shift % 2 == 0 else -ch
    return shift_phase(heart_phase(O, moved), -shift)


def simpson_charge(rho: Sequence[GaussianLike], hilbert_coeffs: Sequence[object]) -> CPoly:
    """sum_i rho_i a_i m^i for rho_i in the open upper half plane with strictly decreasing arguments."""
    rho = [GaussianRational.coerce(r) for r in rho]
    for i, r in enumerate(rho):
        if r.im <= 0:
            raise ValidationError("rho-order", i, f"rho_{i} = {r} is not in the open upper half plane")
    for i in range(len(rho) - 1):
        if (rho[i] * rho[i + 1].conj()).im <= 0:
            raise ValidationError("rho-order", i, f"phase of rho_{i} must exceed that of rho_{i + 1}")
    a = [as_rational(x) for x in hilbert_coeffs]
    if len(a) > len(rho):
        raise ValidationError("shape", None, "more Hilbert coefficients than weights")
    return CPoly(tuple(rho[i] * a[i] for i in range(len(a))))


@dataclass(frozen=True)
class DualizingData:
    """Shift D of the dualizing complex on the smooth locus, and its Chern character."""

    D: int
    ch_omega_x: NumClass


def dualizing_from_canonical(K: NumClass, D: int | None = None) -> DualizingData:
    """omega_X = L[D] with c_1(L) = K, so ch(omega_X) = (-1)^D exp(K)."""
    D = K.model.dimension if D is None else D
    ch = exp_nil(K)
    return DualizingData(D, ch if D % 2 == 0 else -ch)


def dual_class(dd: DualizingData, ch: NumClass) -> NumClass:
    return parity(ch) * dd.ch_omega_x


def dual_omega(O: OmegaData, dd: DualizingData) -> OmegaData:
    """Omega* = (omega, rho*, p*, U*) with p* = dual(p) + D - n."""
    n, D = O.n, dd.D
    rho_star = [(r.conj() if (D + d) % 2 == 0 else -r.conj()) for d, r in enumerate(O.rho)]
    p_star = O.p.dual().shifted(D - n)
    U_star = inv_unipotent(dd.ch_omega_x) * parity(O.U.conj())
    if D % 2:
        U_star = -U_star
    return validate_omega(O.model, O.omega.cls, rho_star, p_star.values, U_star, dual=not O.dual)


def is_self_dual(O: OmegaData, dd: DualizingData) -> bool:
    """True when Z of the dual data is Z composed with the shift [D]: rho* = (-1)^D rho and U* = U."""
    Os = dual_omega(O, dd)
    sign = 1 if dd.D % 2 == 0 else -1
    return Os.U == O.U and all(a == b * sign for a, b in zip(Os.rho, O.rho))


def large_volume_rho(n: int) -> list[GaussianRational]:
    """rho_d = -(-i)^d / d!."""
    out = []
    fact = 1
    for d in range(n + 1):
        if d:
            fact *= d
        z = -(GaussianRational(0, -1) ** d)
        out.append(GaussianRational(z.re / fact, z.im / fact))
    return out


def large_volume_perversity(n: int) -> list[int]:
    return [-(d // 2) for d in range(n + 1)]


def large_volume_omega(model: GradedRingModel, beta: NumClass, omega: NumClass | AmpleClass,
                       use_todd: bool = True) -> OmegaData:
    """Large volume limit data with U = exp(-beta) * sqrt(td X).

    With ``use_todd=False`` the Todd factor is dropped (U = exp(-beta)), the
    variant used for surfaces that compares with the tilted-heart charges.
    """
    return validate_omega(*large_volume_parts(model, beta, omega, use_todd))


def large_volume_parts(model: GradedRingModel, beta: NumClass, omega: NumClass | AmpleClass,
                       use_todd: bool = True) -> tuple:
    """(model, omega, rho, p, U) of the large volume limit, before validation."""
    if isinstance(omega, AmpleClass):
        omega = omega.cls
    U = exp_nil(-beta)
    if use_todd:
        if model.td is None:
            raise ValidationError("td-missing", None, f"model {model.name!r} has no Todd class configured")
        U = U * sqrt_unipotent(model.td)
    n = model.dimension
    return model, omega, large_volume_rho(n), large_volume_perversity(n), U


def omega_with(O: OmegaData, rho: Sequence[GaussianLike] | None = None, p: Sequence[int] | None = None,
               U: NumClass | None = None) -> OmegaData:
    """Revalidated copy with some fields replaced."""
    return validate_omega(
        O.model,
        O.omega.cls,
        list(O.rho) if rho is None else list(rho),
        list(O.p.values) if p is None else list(p),
        O.U if U is None else U,
        O.dual,
    )
