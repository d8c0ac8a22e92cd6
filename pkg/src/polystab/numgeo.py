"""Numerical models of Chow rings: structure constants, classes, and unipotent calculus.

A variety enters only through a finite graded ring ``A^0 + ... + A^n`` with a
basis per (codimension) degree, the products of basis elements, the degree
``n`` integration functional, and a list of effective generators used to test
ampleness.  Degree 0 is spanned by the unit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import ModelMismatch, ValidationError
from .phasecore import ZERO, GaussianLike, GaussianRational, as_rational


def _gvec(n: int) -> list[GaussianRational]:
    return [ZERO] * n


@dataclass(eq=False)
class GradedRingModel:
    dimension: int
    bases: tuple[tuple[str, ...], ...]
    # (d, i, e, j) -> coordinates of basis[d][i] * basis[e][j] in degree d + e
    table: dict[tuple[int, int, int, int], tuple[Fraction, ...]]
    integral: tuple[Fraction, ...]
    effective: tuple[tuple["NumClass", ...], ...] = ()
    td: "NumClass | None" = None
    name: str = ""
    _index: dict[str, tuple[int, int]] = field(default_factory=dict, repr=False)

    @classmethod
    def build(
        cls,
        dimension: int,
        bases: Sequence[Sequence[str]],
        products: Mapping[tuple[str, str], Mapping[str, object]],
        integrate: Mapping[str, object],
        effective: Sequence[Sequence[Mapping[int, Sequence[GaussianLike]]]] = (),
        td: Mapping[int, Sequence[GaussianLike]] | None = None,
        name: str = "",
    ) -> "GradedRingModel":
        """Assemble a model from labeled data and verify the ring axioms.

        Products not listed are zero, except products with the unit (the single
        degree-0 basis element), which default to the identity.  A product
        listed only as (a, b) is mirrored to (b, a).
        """
        n = dimension
        if len(bases) != n + 1:
            raise ValidationError("bases", None, f"expected {n + 1} degree bases, got {len(bases)}")
        if len(bases[0]) != 1:
            raise ValidationError("bases", 0, "degree 0 must be spanned by the unit alone")
        index: dict[str, tuple[int, int]] = {}
        for d, labels in enumerate(bases):
            for i, lab in enumerate(labels):
                if lab in index:
                    raise ValidationError("bases", d, f"duplicate label {lab!r}")
                index[lab] = (d, i)
        bases_t = tuple(tuple(b) for b in bases)
        table: dict[tuple[int, int, int, int], tuple[Fraction, ...]] = {}

        def vec_for(target_deg: int, result: Mapping[str, object], where: str) -> tuple[Fraction, ...]:
            out = [Fraction(0)] * len(bases_t[target_deg])
            for lab, val in result.items():
                if lab not in index:
                    raise ValidationError("products", None, f"{where}: unknown label {lab!r}")
                d, i = index[lab]
                if d != target_deg:
                    raise ValidationError("degree-additive", None, f"{where} lands in degree {d}, expected {target_deg}")
                out[i] += as_rational(val)
            return tuple(out)

        for (left, right), result in products.items():
            for lab in (left, right):
                if lab not in index:
                    raise ValidationError("products", None, f"unknown label {lab!r}")
            (d, i), (e, j) = index[left], index[right]
            if d + e > n:
                if any(as_rational(v) for v in result.values()):
                    raise ValidationError("degree-additive", None, f"{left}*{right} must vanish above degree {n}")
                continue
            vec = vec_for(d + e, result, f"{left}*{right}")
            key, rkey = (d, i, e, j), (e, j, d, i)
            if key in table and table[key] != vec:
                raise ValidationError("commutative", None, f"conflicting entries for {left}*{right}")
            table[key] = vec
            if rkey in table and table[rkey] != vec:
                raise ValidationError("commutative", None, f"{left}*{right} != {right}*{left}")
            table.setdefault(rkey, vec)
        for d, labels in enumerate(bases_t):
            for i in range(len(labels)):
                unit_vec = tuple(Fraction(int(k == i)) for k in range(len(labels)))
                for key in ((0, 0, d, i), (d, i, 0, 0)):
                    if table.setdefault(key, unit_vec) != unit_vec:
                        raise ValidationError("unit", None, f"unit * {labels[i]} != {labels[i]}")
        integral = [Fraction(0)] * len(bases_t[n])
        for lab, val in integrate.items():
            if lab not in index or index[lab][0] != n:
                raise ValidationError("integrate", None, f"{lab!r} is not a top-degree label")
            integral[index[lab][1]] = as_rational(val)
        model = cls(n, bases_t, table, tuple(integral), name=name, _index=index)
        model._check_associative()
        model.effective = tuple(
            tuple(model.from_degrees(c) for c in gens) for gens in effective
        )
        if td is not None:
            model.td = model.from_degrees(td)
        return model

    def _check_associative(self) -> None:
        basis = [(d, i) for d, labels in enumerate(self.bases) for i in range(len(labels))]
        for x, y, z in itertools.product(basis, repeat=3):
            a, b, c = (self.basis_class(self.bases[d][i]) for d, i in (x, y, z))
            if (a * b) * c != a * (b * c):
                labels = [self.bases[d][i] for d, i in (x, y, z)]
                raise ValidationError("associative", None, "({}*{})*{} differs".format(*labels))

    # -- constructors -------------------------------------------------------

    @property
    def n(self) -> int:
        return self.dimension

    def zero(self) -> "NumClass":
        return NumClass(self, tuple(tuple(_gvec(len(b))) for b in self.bases))

    def unit(self) -> "NumClass":
        return self.basis_class(self.bases[0][0])

    def basis_class(self, label: str, coeff: GaussianLike = 1) -> "NumClass":
        d, i = self._index[label]
        parts = [list(_gvec(len(b))) for b in self.bases]
        parts[d][i] = GaussianRational.coerce(coeff)
        return NumClass(self, tuple(tuple(p) for p in parts))

    def from_degrees(self, data: Mapping[int, Sequence[GaussianLike]]) -> "NumClass":
        parts = [list(_gvec(len(b))) for b in self.bases]
        for d, coords in data.items():
            d = int(d)
            if not 0 <= d <= self.dimension:
                raise ValidationError("class-shape", d, "degree out of range")
            if len(coords) != len(self.bases[d]):
                raise ValidationError("class-shape", d, f"expected {len(self.bases[d])} coordinates, got {len(coords)}")
            parts[d] = [GaussianRational.coerce(c) for c in coords]
        return NumClass(self, tuple(tuple(p) for p in parts))

    def label_of(self, d: int, i: int) -> str:
        return self.bases[d][i]

    def degree_of(self, label: str) -> int:
        return self._index[label][0]


@dataclass(frozen=True)
class NumClass:
    model: GradedRingModel
    parts: tuple[tuple[GaussianRational, ...], ...]

    def _same(self, other: "NumClass") -> None:
        if other.model is not self.model:
            raise ModelMismatch(f"classes live on different models ({self.model.name!r}, {other.model.name!r})")

    def __add__(self, other: "NumClass") -> "NumClass":
        self._same(other)
        return NumClass(self.model, tuple(tuple(x + y for x, y in zip(p, q)) for p, q in zip(self.parts, other.parts)))

    def __sub__(self, other: "NumClass") -> "NumClass":
        return self + (-other)

    def __neg__(self) -> "NumClass":
        return NumClass(self.model, tuple(tuple(-x for x in p) for p in self.parts))

    def scale(self, c: GaussianLike) -> "NumClass":
        c = GaussianRational.coerce(c)
        return NumClass(self.model, tuple(tuple(x * c for x in p) for p in self.parts))

    def __mul__(self, other: "NumClass | GaussianLike") -> "NumClass":
        if not isinstance(other, NumClass):
            return self.scale(other)
        return cup(self, other)

    def __rmul__(self, other: GaussianLike) -> "NumClass":
        return self.scale(other)

    def __pow__(self, k: int) -> "NumClass":
        out = self.model.unit()
        for _ in range(k):
            out = out * self
        return out

    def degree_part(self, d: int) -> "NumClass":
        parts = [tuple(_gvec(len(b))) for b in self.model.bases]
        parts[d] = self.parts[d]
        return NumClass(self.model, tuple(parts))

    def positive_part(self) -> "NumClass":
        """The class with its degree-0 component removed."""
        parts = list(self.parts)
        parts[0] = tuple(_gvec(len(parts[0])))
        return NumClass(self.model, tuple(parts))

    @property
    def constant(self) -> GaussianRational:
        return self.parts[0][0]

    def conj(self) -> "NumClass":
        return NumClass(self.model, tuple(tuple(x.conj() for x in p) for p in self.parts))

    def is_zero(self) -> bool:
        return not any(x for p in self.parts for x in p)

    def is_real(self) -> bool:
        return all(x.im == 0 for p in self.parts for x in p)

    def __str__(self) -> str:
        terms = []
        for d, p in enumerate(self.parts):
            for i, x in enumerate(p):
                if x:
                    lab = self.model.bases[d][i]
                    terms.append(str(x) if d == 0 else f"({x})*{lab}")
        return " + ".join(terms) or "0"


def cup(a: NumClass, b: NumClass) -> NumClass:
    a._same(b)
    model = a.model
    n = model.dimension
    out = [list(_gvec(len(bs))) for bs in model.bases]
    for d, pa in enumerate(a.parts):
        for i, x in enumerate(pa):
            if not x:
                continue
            for e in range(0, n - d + 1):
                for j, y in enumerate(b.parts[e]):
                    if not y:
                        continue
                    vec = model.table.get((d, i, e, j))
                    if vec is None:
                        continue
                    xy = x * y
                    target = out[d + e]
                    for k, c in enumerate(vec):
                        if c:
                            target[k] = target[k] + xy * c
    return NumClass(model, tuple(tuple(p) for p in out))


def integrate(a: NumClass) -> GaussianRational:
    """Apply the integration functional to the top-degree component."""
    total = ZERO
    for x, w in zip(a.parts[a.model.dimension], a.model.integral):
        if x and w:
            total = total + x * w
    return total


def _require_nilpotent(N: NumClass) -> None:
    if N.constant:
        raise ValidationError("nilpotent", 0, "degree-0 component must vanish")


def exp_nil(N: NumClass) -> NumClass:
    """exp(N) for N concentrated in positive degrees; the series stops at N^n."""
    _require_nilpotent(N)
    out = N.model.unit()
    term = N.model.unit()
    for k in range(1, N.model.dimension + 1):
        term = (term * N).scale(Fraction(1, k))
        out = out + term
    return out


def _binom_half(k: int) -> Fraction:
    c = Fraction(1)
    for j in range(k):
        c = c * (Fraction(1, 2) - j) / (j + 1)
    return c


def sqrt_unipotent(U: NumClass) -> NumClass:
    """The square root of U = 1 + N with unit constant term, via the binomial series."""
    if U.constant != GaussianRational(1):
        raise ValidationError("unipotent", 0, "degree-0 component must equal 1")
    N = U.positive_part()
    out = U.model.unit()
    power = U.model.unit()
    for k in range(1, U.model.dimension + 1):
        power = power * N
        out = out + power.scale(_binom_half(k))
    return out


def inv_unipotent(U: NumClass) -> NumClass:
    """Multiplicative inverse of a class with invertible degree-0 part (geometric series)."""
    u0 = U.constant
    if not u0:
        raise ValidationError("invertible", 0, "degree-0 component must be nonzero")
    inv0 = GaussianRational(1) / u0
    M = U.positive_part().scale(-inv0)
    out = U.model.unit()
    power = U.model.unit()
    for _ in range(U.model.dimension):
        power = power * M
        out = out + power
    return out.scale(inv0)


def parity(a: NumClass) -> NumClass:
    """Multiply the codimension-e component by (-1)^e."""
    return NumClass(a.model, tuple(p if e % 2 == 0 else tuple(-x for x in p) for e, p in enumerate(a.parts)))


@dataclass(frozen=True)
class AmpleClass:
    cls: NumClass

    @property
    def model(self) -> GradedRingModel:
        return self.cls.model

    def power(self, d: int) -> NumClass:
        return self.cls**d


def ample_violations(w: NumClass) -> list[ValidationError]:
    model = w.model
    n = model.dimension
    errors: list[ValidationError] = []
    if any(x for d, p in enumerate(w.parts) if d != 1 for x in p):
        errors.append(ValidationError("ample", None, "omega must be a pure degree-1 class"))
        return errors
    if not w.is_real():
        errors.append(ValidationError("ample", None, "omega must have real coordinates"))
        return errors
    if not any(model.effective):
        errors.append(ValidationError("ample", None, "model has no effective generators configured"))
    for codim, gens in enumerate(model.effective):
        wd = w ** (n - codim)
        for j, alpha in enumerate(gens):
            val = integrate(wd * alpha)
            if val.re <= 0:
                errors.append(
                    ValidationError("ample", codim, f"effective generator #{j} in codimension {codim}: integral {val.re} <= 0")
                )
    return errors


def validate_ample(w: NumClass) -> AmpleClass:
    errors = ample_violations(w)
    if errors:
        raise errors[0]
    return AmpleClass(w)


def support_dim(a: NumClass) -> int | None:
    """Largest d whose codimension n-d component is nonzero; None for the zero class."""
    for e, p in enumerate(a.parts):
        if any(p):
            return a.model.dimension - e
    return None


# -- presets -----------------------------------------------------------------


def todd_series_coeffs(n: int) -> list[Fraction]:
    """Coefficients of x / (1 - e^{-x}) up to x^n."""
    # (1 - e^{-x}) / x = sum_k (-1)^k x^k / (k+1)!
    f = [Fraction((-1) ** k, _fact(k + 1)) for k in range(n + 1)]
    g = [Fraction(0)] * (n + 1)
    g[0] = 1 / f[0]
    for k in range(1, n + 1):
        g[k] = -sum(f[j] * g[k - j] for j in range(1, k + 1)) / f[0]
    return g


def _fact(k: int) -> int:
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def _power_series_pow(c: Sequence[Fraction], e: int, n: int) -> list[Fraction]:
    out = [Fraction(0)] * (n + 1)
    out[0] = Fraction(1)
    for _ in range(e):
        nxt = [Fraction(0)] * (n + 1)
        for i, x in enumerate(out):
            if x:
                for j in range(n + 1 - i):
                    nxt[i + j] += x * c[j]
        out = nxt
    return out


def _chain_model(n: int, labels: list[str], top: Fraction, td: list[Fraction] | None, name: str) -> GradedRingModel:
    products = {
        (labels[a], labels[b]): {labels[a + b]: 1}
        for a in range(1, n + 1)
        for b in range(a, n + 1 - a)
        if a + b <= n
    }
    effective = [[{d: [1]}] for d in range(n + 1)]
    td_data = None if td is None else {d: [td[d]] for d in range(n + 1)}
    return GradedRingModel.build(n, [[lab] for lab in labels], products, {labels[n]: top}, effective, td_data, name)


@lru_cache(maxsize=None)
def projective_space(n: int) -> GradedRingModel:
    """P^n: basis H^d, integral of H^n equal to 1, td = (H / (1 - e^{-H}))^{n+1}."""
    labels = ["1", "H"] + [f"H^{d}" for d in range(2, n + 1)]
    labels = labels[: n + 1]
    td = _power_series_pow(todd_series_coeffs(n), n + 1, n)
    return _chain_model(n, labels, Fraction(1), td, f"P{n}")


@lru_cache(maxsize=None)
def degree_only(n: int, degree: Fraction = Fraction(1), td: tuple[Fraction, ...] | None = None) -> GradedRingModel:
    """Polarized model keeping only the subring generated by omega: basis w^d, integral of w^n = degree."""
    labels = ["1", "w"] + [f"w^{d}" for d in range(2, n + 1)]
    labels = labels[: n + 1]
    tdl = None if td is None else list(td) + [Fraction(0)] * (n + 1 - len(td))
    return _chain_model(n, labels, as_rational(degree), tdl, f"degree-only-{n}")


@lru_cache(maxsize=None)
def p1_times_p1() -> GradedRingModel:
    return GradedRingModel.build(
        2,
        [["1"], ["h1", "h2"], ["pt"]],
        {("h1", "h2"): {"pt": 1}, ("h1", "h1"): {}, ("h2", "h2"): {}},
        {"pt": 1},
        [[{0: [1]}], [{1: [1, 0]}, {1: [0, 1]}], [{2: [1]}]],
        {0: [1], 1: [1, 1], 2: [1]},
        "P1xP1",
    )


def preset(name: str) -> GradedRingModel:
    """Look up a shipped model: P1, P2, P3, Pn, P1xP1, degree-only-n, cy3."""
    key = name.strip()
    if key in ("P1xP1", "p1xp1"):
        return p1_times_p1()
    if key.lower() == "cy3":
        return calabi_yau_degree_only()
    if key.startswith("degree-only-"):
        return degree_only(int(key.rsplit("-", 1)[1]))
    if key[:1] in "Pp" and key[1:].isdigit():
        return projective_space(int(key[1:]))
    raise KeyError(f"unknown model preset {name!r}")


@lru_cache(maxsize=None)
def calabi_yau_degree_only(degree: Fraction = Fraction(1), c2w: Fraction = Fraction(6)) -> GradedRingModel:
    """Degree-only threefold with trivial canonical class: td = 1 + c2/12, c2 given by its omega-degree."""
    return degree_only(3, as_rational(degree), (Fraction(1), Fraction(0), as_rational(c2w) / 12 / as_rational(degree), Fraction(0)))


def random_class(model: GradedRingModel, rng, lo: int = -5, hi: int = 5, complex_coeffs: bool = False,
                 degrees: Iterable[int] | None = None) -> NumClass:
    """A class with small random integer (or Gaussian integer) coordinates."""
    degs = range(model.dimension + 1) if degrees is None else degrees
    data = {}
    for d in degs:
        coords = []
        for _ in model.bases[d]:
            im = rng.randint(lo, hi) if complex_coeffs else 0
            coords.append(GaussianRational(Fraction(rng.randint(lo, hi)), Fraction(im)))
        data[d] = coords
    return model.from_degrees(data)
