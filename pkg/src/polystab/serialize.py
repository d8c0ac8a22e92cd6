"""JSON encoding of the library's values.

Rationals are strings "p/q" (reduced, q > 0), Gaussian rationals are
{"re": ..., "im": ...}, polynomials are coefficient arrays lowest degree
first, and germs are {"poly": [...], "branch": k}.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .errors import ValidationError
from .hnengine import Arrow, QuiverModel, QuiverRep, make_rep
from .numgeo import GradedRingModel, NumClass, preset
from .phasecore import CPoly, GaussianRational, PhaseGerm, as_rational
from .stabfam import DualizingData, OmegaData, dualizing_from_canonical, large_volume_parts, validate_omega
from .stabspace import CentralChargeMap, FiniteStabilityPresentation, TestObject
from .walls import SheafData, SurfaceClass


class ParseError(ValueError):
    """Malformed input (as opposed to well-formed data violating an invariant)."""


# -- scalars ------------------------------------------------------------------


def dump_rational(q: Fraction) -> str:
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def load_rational(x: Any, where: str = "rational") -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"{where}: expected an integer or a 'p/q' string, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def dump_gaussian(z: GaussianRational) -> dict:
    return {"re": dump_rational(z.re), "im": dump_rational(z.im)}


def parse_gaussian_text(s: str) -> GaussianRational:
    """Parse '1-2i', '3/2', '-i', '2i', '1/2+1/3i'."""
    s = s.strip().replace(" ", "")
    if s.endswith("i"):
        body = s[:-1]
        # split at the last sign that is not leading
        k = max(body.rfind("+"), body.rfind("-"))
        real, imag = (body[:k], body[k:]) if k > 0 else ("", body)
        if imag in ("", "+", "-"):
            imag += "1"
        try:
            return GaussianRational(Fraction(real) if real else Fraction(0), Fraction(imag))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot parse complex number {s!r}") from None
    try:
        return GaussianRational(Fraction(s), Fraction(0))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot parse complex number {s!r}") from None


def load_gaussian(x: Any, where: str = "gaussian") -> GaussianRational:
    if isinstance(x, Mapping):
        extra = set(x) - {"re", "im"}
        if extra:
            raise ParseError(f"{where}: unexpected keys {sorted(extra)}")
        return GaussianRational(load_rational(x.get("re", 0), where + ".re"), load_rational(x.get("im", 0), where + ".im"))
    if isinstance(x, str):
        return parse_gaussian_text(x)
    return GaussianRational(load_rational(x, where), 0)


def dump_cpoly(p: CPoly) -> list:
    return [dump_gaussian(c) for c in p.coeffs]


def load_cpoly(x: Any, where: str = "poly") -> CPoly:
    if not isinstance(x, list):
        raise ParseError(f"{where}: expected an array of coefficients")
    return CPoly(tuple(load_gaussian(c, f"{where}[{i}]") for i, c in enumerate(x)))


def dump_germ(g: PhaseGerm) -> dict:
    return {"poly": dump_cpoly(g.poly), "branch": g.branch}


def load_germ(x: Any, where: str = "germ") -> PhaseGerm:
    if not isinstance(x, Mapping) or "poly" not in x:
        raise ParseError(f"{where}: expected {{'poly': [...], 'branch': k}}")
    branch = x.get("branch", 0)
    if isinstance(branch, bool) or not isinstance(branch, int):
        raise ParseError(f"{where}.branch: expected an integer")
    try:
        return PhaseGerm(load_cpoly(x["poly"], where + ".poly"), branch)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ValidationError("germ", None, f"{where}: {exc}") from None


# -- models and classes -------------------------------------------------------


def _load_degree_map(x: Any, where: str) -> dict[int, list]:
    if not isinstance(x, Mapping):
        raise ParseError(f"{where}: expected an object keyed by degree")
    out = {}
    for k, v in x.items():
        try:
            d = int(k)
        except ValueError:
            raise ParseError(f"{where}: degree key {k!r} is not an integer") from None
        if not isinstance(v, list):
            raise ParseError(f"{where}[{k}]: expected an array")
        out[d] = [load_gaussian(c, f"{where}[{k}]") for c in v]
    return out


def load_model(x: Any) -> GradedRingModel:
    """A preset name, {"preset": name}, or the full ring description."""
    if isinstance(x, str):
        x = {"preset": x}
    if not isinstance(x, Mapping):
        raise ParseError("model: expected an object or a preset name")
    if "preset" in x:
        try:
            return preset(x["preset"])
        except (KeyError, ValueError) as exc:
            raise ParseError(f"model: {exc}") from None
    try:
        n = int(x["dimension"])
        bases = x["bases"]
        products = {}
        for entry in x.get("products", []):
            products[(entry["left"], entry["right"])] = {k: load_rational(v, "products") for k, v in entry["result"].items()}
        integrate = {k: load_rational(v, "integrate") for k, v in x["integrate"].items()}
    except (KeyError, TypeError) as exc:
        raise ParseError(f"model: missing or malformed field {exc}") from None
    effective = [[_load_degree_map(c, "effective") for c in gens] for gens in x.get("effective", [])]
    td = _load_degree_map(x["td"], "td") if "td" in x else None
    return GradedRingModel.build(n, bases, products, integrate, effective, td, x.get("name", "custom"))


def dump_model(M: GradedRingModel) -> dict:
    products = []
    for (d, i, e, j), vec in sorted(M.table.items()):
        if (d, i) > (e, j) or d == 0 or e == 0:
            continue
        result = {M.bases[d + e][k]: dump_rational(v) for k, v in enumerate(vec) if v}
        if result:
            products.append({"left": M.bases[d][i], "right": M.bases[e][j], "result": result})
    out = {
        "dimension": M.dimension,
        "bases": [list(b) for b in M.bases],
        "products": products,
        "integrate": {M.bases[M.dimension][k]: dump_rational(v) for k, v in enumerate(M.integral)},
        "effective": [[dump_class(c) for c in gens] for gens in M.effective],
        "name": M.name,
    }
    if M.td is not None:
        out["td"] = dump_class(M.td)
    return out


def load_class(model: GradedRingModel, x: Any, where: str = "class") -> NumClass:
    return model.from_degrees(_load_degree_map(x, where))


def dump_class(c: NumClass) -> dict:
    return {str(d): [dump_gaussian(z) for z in part] for d, part in enumerate(c.parts)}


# -- Omega data ---------------------------------------------------------------


def omega_parts(model: GradedRingModel, x: Any) -> tuple:
    """(model, omega, rho, p, U, dual) from explicit data or {"largeVolume": {"beta", "omega", "useTodd"}}."""
    if not isinstance(x, Mapping):
        raise ParseError("omega: expected an object")
    try:
        if "largeVolume" in x:
            lv = x["largeVolume"]
            beta = load_class(model, lv.get("beta", {}), "largeVolume.beta")
            omega = load_class(model, lv["omega"], "largeVolume.omega")
            return (*large_volume_parts(model, beta, omega, bool(lv.get("useTodd", True))), False)
        omega = load_class(model, x["omega"], "omega")
        rho = [load_gaussian(r, f"rho[{i}]") for i, r in enumerate(x["rho"])]
        p = x["p"]
        U = load_class(model, x["U"], "U") if "U" in x else model.unit()
    except KeyError as exc:
        raise ParseError(f"omega: missing field {exc}") from None
    if not isinstance(p, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in p):
        raise ParseError("omega.p: expected an array of integers")
    return model, omega, rho, p, U, bool(x.get("dual", False))


def load_omega(model: GradedRingModel, x: Any) -> OmegaData:
    return validate_omega(*omega_parts(model, x))


def dump_omega(O: OmegaData) -> dict:
    return {
        "omega": dump_class(O.omega.cls),
        "rho": [dump_gaussian(r) for r in O.rho.rho],
        "p": list(O.p.values),
        "U": dump_class(O.U),
        "dual": O.dual,
    }


def load_dualizing(model: GradedRingModel, x: Any) -> DualizingData:
    """{"D": int, "chOmegaX": class} or {"canonical": class, "D": int}."""
    if not isinstance(x, Mapping):
        raise ParseError("dualizing: expected an object")
    if "canonical" in x:
        return dualizing_from_canonical(load_class(model, x["canonical"], "canonical"), x.get("D"))
    try:
        return DualizingData(int(x["D"]), load_class(model, x["chOmegaX"], "chOmegaX"))
    except KeyError as exc:
        raise ParseError(f"dualizing: missing field {exc}") from None


# -- quivers ------------------------------------------------------------------


def load_quiver(x: Any) -> QuiverModel:
    try:
        vertices = tuple(str(v) for v in x["vertices"])
        arrows = tuple(
            Arrow(str(a.get("name", f"a{i + 1}")), str(a["from"]), str(a["to"]))
            for i, a in enumerate(x.get("arrows", []))
        )
        charges = {str(v): load_cpoly(c, f"charges[{v}]") for v, c in x["charges"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise ParseError(f"quiver: missing or malformed field {exc}") from None
    return QuiverModel(vertices, arrows, charges, int(x.get("field", 2)), int(x.get("cap", 6)))


def dump_quiver(M: QuiverModel) -> dict:
    return {
        "vertices": list(M.vertices),
        "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in M.arrows],
        "field": M.field,
        "charges": {v: dump_cpoly(M.charges[v]) for v in M.vertices},
        "cap": M.cap,
    }


def load_rep(M: QuiverModel, x: Any) -> QuiverRep:
    if not isinstance(x, Mapping) or "dims" not in x:
        raise ParseError("rep: expected {'dims': ..., 'matrices': ...}")
    dims = x["dims"]
    unknown = set(dims) - set(M.vertices) if isinstance(dims, Mapping) else set()
    if unknown:
        raise ValidationError("rep-shape", None, f"unknown vertices {sorted(unknown)}")
    return make_rep(M, dims, x.get("matrices", {}))


def dump_rep(M: QuiverModel, E: QuiverRep) -> dict:
    return {
        "dims": dict(zip(M.vertices, E.dims)),
        "matrices": {name: [list(r) for r in mat] for name, mat in E.matrices},
    }


# -- presentations ------------------------------------------------------------


def load_presentation(x: Any) -> FiniteStabilityPresentation:
    try:
        objs = []
        for i, o in enumerate(x["objects"]):
            objs.append(TestObject(
                str(o["label"]),
                load_cpoly(o["Z"], f"objects[{i}].Z"),
                load_germ(o["phiPlus"], f"objects[{i}].phiPlus"),
                load_germ(o["phiMinus"], f"objects[{i}].phiMinus"),
                bool(o.get("semistable", True)),
            ))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"presentation: missing or malformed field {exc}") from None
    return FiniteStabilityPresentation(tuple(objs))


def dump_presentation(P: FiniteStabilityPresentation) -> dict:
    return {"objects": [
        {"label": o.label, "Z": dump_cpoly(o.Z), "phiPlus": dump_germ(o.phi_plus),
         "phiMinus": dump_germ(o.phi_minus), "semistable": o.semistable}
        for o in P.objects
    ]}


def load_charge_map(x: Any) -> CentralChargeMap:
    if not isinstance(x, Mapping):
        raise ParseError("charge map: expected an object {label: poly}")
    return CentralChargeMap({str(k): load_cpoly(v, f"U[{k}]") for k, v in x.items()})


# -- surfaces -----------------------------------------------------------------

_SURFACE_FIELDS = ("rk", "c1w", "c1b", "c1sq", "ch2", "w2", "bw", "b2")


def load_surface_class(x: Any, where: str = "surface class") -> SurfaceClass:
    if not isinstance(x, Mapping):
        raise ParseError(f"{where}: expected an object")
    extra = set(x) - set(_SURFACE_FIELDS)
    if extra:
        raise ParseError(f"{where}: unexpected keys {sorted(extra)}")
    if "rk" not in x or "c1w" not in x:
        raise ParseError(f"{where}: 'rk' and 'c1w' are required")
    return SurfaceClass(**{k: load_rational(v, f"{where}.{k}") for k, v in x.items()})


def dump_surface_class(c: SurfaceClass) -> dict:
    return {k: dump_rational(getattr(c, k)) for k in _SURFACE_FIELDS}


def load_sheaf(x: Any, where: str) -> SheafData | None:
    if x is None:
        return None
    if not isinstance(x, Mapping) or "class" not in x:
        raise ParseError(f"{where}: expected {{'class': ..., 'muSemistable': bool, 'torsionFree': bool}}")
    return SheafData(load_surface_class(x["class"], where + ".class"),
                     bool(x.get("muSemistable", False)), bool(x.get("torsionFree", False)))


# -- files --------------------------------------------------------------------


def read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None


def resolve_model(arg: str | None, fallback: Any = None, base: Path | None = None) -> GradedRingModel:
    """--model value: a preset name or a JSON file; else the "model" entry of another file."""
    ref = arg if arg is not None else fallback
    if ref is None:
        raise ParseError("no model given (use --model PRESET|FILE)")
    if isinstance(ref, str):
        p = Path(ref)
        if not p.is_absolute() and base is not None and arg is None:
            p = base / p
        if p.suffix == ".json" or p.exists():
            return load_model(read_json(p))
        return load_model({"preset": ref})
    return load_model(ref)
