"""Command-line front end.

Every subcommand reads JSON inputs and prints plain text, JSON or CSV.
Exit status: 0 on success, 2 when the input is rejected by an invariant,
1 on I/O and parse errors.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import json
import math
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence, TextIO

from . import serialize as ser
from .errors import CapExceeded, ModelMismatch, PolystabError, UndecidedAtPrecision, ValidationError
from .hnengine import NoUniqueMdq, charge_of, hn_filter, is_semistable
from .phasecore import CPoly, PhaseGerm, cauchy_bound, cmp_phase, stabilization_bound
from .stabfam import central_charge, dual_class, dual_omega, is_self_dual, omega_violations
from .stabspace import ball_test, d_metric, semi_norm
from .walls import bogomolov_bound, scan_wall_family, surface_classify, surface_order_bound


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{path}: no such file")
    return p


def _split_range(text: str) -> tuple[Fraction, Fraction]:
    try:
        lo, hi = text.split(":")
        return Fraction(lo), Fraction(hi)
    except ValueError:
        raise UsageError(f"--range expects lo:hi with rational endpoints, got {text!r}") from None


def _gaussians(text: str, count: int, flag: str) -> list:
    items = [s for s in text.split(",")]
    if len(items) != count:
        raise UsageError(f"{flag} expects {count} comma-separated complex numbers, got {text!r}")
    return [ser.parse_gaussian_text(s) for s in items]


@contextmanager
def _output(path: str | None, stdout: TextIO) -> Iterator[TextIO]:
    if path is None:
        yield stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise ser.ParseError(f"{path}: {exc.strerror}") from None
    with fh:
        yield fh


def _phase_text(ph) -> str:
    e = ph.exact()
    return str(e) if e is not None else f"{float(ph):.12g}"


# -- subcommands --------------------------------------------------------------


def cmd_phase_cmp(args, out: TextIO) -> None:
    a = ser.load_germ(ser.read_json(_existing(args.a)), args.a)
    b = ser.load_germ(ser.read_json(_existing(args.b)), args.b)
    order = cmp_phase(a, b)
    print(order.name, file=out)
    print(f"M = {stabilization_bound(a, b)}", file=out)


def _model_and_omega(args):
    omega_json = ser.read_json(_existing(args.omega))
    base = Path(args.omega).parent
    if args.model is not None and Path(args.model).suffix == ".json":
        _existing(args.model)
    model = ser.resolve_model(args.model, omega_json.get("model") if isinstance(omega_json, dict) else None, base)
    return model, omega_json


def cmd_charge(args, out: TextIO) -> None:
    model, omega_json = _model_and_omega(args)
    O = ser.load_omega(model, omega_json)
    ch = ser.load_class(model, ser.read_json(_existing(args.cls)), args.cls)
    Z = central_charge(O, ch)
    print(json.dumps(ser.dump_cpoly(Z)) if args.json else str(Z), file=out)


def cmd_validate_omega(args, out: TextIO) -> None:
    model, omega_json = _model_and_omega(args)
    parts = ser.omega_parts(model, omega_json)
    errors = omega_violations(*parts)
    if not errors:
        print("valid", file=out)
        return
    for e in errors:
        print(f"violated {e.label}" + (f": {e.detail}" if e.detail else ""), file=out)
    raise ValidationError(errors[0].clause, errors[0].index, f"{len(errors)} clause(s) violated")


def cmd_hn(args, out: TextIO) -> None:
    M = ser.load_quiver(ser.read_json(_existing(args.quiver)))
    E = ser.load_rep(M, ser.read_json(_existing(args.rep)))
    F = hn_filter(M, E)
    ok, _ = is_semistable(M, E)
    print(f"dims {E.dims}  semistable: {'yes' if ok else 'no'}  mdq steps: {F.steps}", file=out)
    for i, (dims, ph) in enumerate(zip(F.factors, F.phases), start=1):
        print(f"factor {i}: dims {dims}  Z = {charge_of(M, dims)}  phase(inf) = {ph.at_infinity()}", file=out)


def cmd_wall_scan(args, out: TextIO) -> None:
    rho012 = _gaussians(args.rho012, 3, "--rho012")
    c, v = _gaussians(args.family, 2, "--family")
    lo, hi = _split_range(args.range)
    scan = scan_wall_family(rho012, c, v, lo, hi, args.steps)
    with _output(args.output, out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "verdict", "phase_minus_rho3", "phase_rho0"])
        for t, verdict in scan.samples:
            tag = verdict.tag if not verdict.clause else f"{verdict.tag}({verdict.clause})"
            p3 = _phase_text(verdict.phase_minus_rho3) if verdict.phase_minus_rho3 else ""
            p0 = _phase_text(verdict.phase_rho0) if verdict.phase_rho0 else ""
            w.writerow([str(t), tag, p3, p0])
        for wall in scan.walls:
            fh.write(f"# wall: t={wall.t} {wall.left}->{wall.right} (at the wall: {wall.at})\n")
        if not scan.walls:
            fh.write("# no walls in range\n")


def cmd_surface_classify(args, out: TextIO) -> None:
    data = ser.read_json(_existing(args.input))
    if not isinstance(data, dict):
        raise ser.ParseError(f"{args.input}: expected an object")
    did = False
    if "H-1" in data or "H0" in data:
        verdict = surface_classify(ser.load_sheaf(data.get("H-1"), "H-1"), ser.load_sheaf(data.get("H0"), "H0"))
        print(f"case {verdict.case}", file=out)
        for k, v in verdict.checks.items():
            print(f"  {k}: {v}", file=out)
        did = True
    if "bogomolov" in data:
        rep = bogomolov_bound(ser.load_surface_class(data["bogomolov"], "bogomolov"))
        print(f"bogomolov: value {rep.value} <= bound {rep.bound}: {rep.satisfied}; "
              f"hodge bound {rep.hodge_bound} holds: {rep.hodge_ok}", file=out)
        did = True
    if "orderBound" in data:
        ob = data["orderBound"]
        M, order = surface_order_bound(ser.load_surface_class(ob.get("E"), "orderBound.E"),
                                       ser.load_surface_class(ob.get("B"), "orderBound.B"))
        print(f"order: {order.name} for m >= {M}", file=out)
        did = True
    if not did:
        raise ser.ParseError(f"{args.input}: expected keys 'H-1'/'H0', 'bogomolov' or 'orderBound'")


def cmd_dual(args, out: TextIO) -> None:
    model, omega_json = _model_and_omega(args)
    O = ser.load_omega(model, omega_json)
    dd = ser.load_dualizing(model, ser.read_json(_existing(args.dualizing)))
    Ostar = dual_omega(O, dd)
    result = {"dualOmega": ser.dump_omega(Ostar), "selfDual": is_self_dual(O, dd)}
    if args.cls:
        ch = ser.load_class(model, ser.read_json(_existing(args.cls)), args.cls)
        dch = dual_class(dd, ch)
        result["dualClass"] = ser.dump_class(dch)
        result["dualCharge"] = ser.dump_cpoly(central_charge(Ostar, dch))
    print(json.dumps(result), file=out)


def cmd_norm(args, out: TextIO) -> None:
    sigma = ser.load_presentation(ser.read_json(_existing(args.sigma)))
    U = ser.load_charge_map(ser.read_json(_existing(args.u))) if args.u else None
    tau = ser.load_presentation(ser.read_json(_existing(args.tau))) if args.tau else None
    if U is None and tau is None:
        raise UsageError("norm needs --u and/or --tau")
    if U is not None:
        print(f"norm: {semi_norm(U, sigma)}", file=out)
    if tau is not None:
        d = d_metric(sigma, tau)
        print(f"d_S: {d.value}", file=out)
        for note in d.diagnostics:
            print(f"  note: {note}", file=out)
        print(f"norm(W - Z): {semi_norm(tau.charge_map() - sigma.charge_map(), sigma)}", file=out)
        if args.epsilon is not None:
            eps = Fraction(args.epsilon)
            print(f"in ball B_{eps}: {'yes' if ball_test(sigma, tau, eps) else 'no'}", file=out)


def continuous_phase(poly: CPoly, branch: int, ms: Sequence[float], substeps: int = 64) -> list[float]:
    """Float phi(m)/pi along ``ms`` (ascending), continued from m = infinity.

    Tracking starts far out, where the leading term dominates, with the
    representative closest to phi(infinity), and follows the argument down
    through every sample; points where the polynomial vanishes give nan.
    """
    cs = [complex(c) for c in poly.coeffs]
    lead = cs[-1]
    target = cmath.phase(lead) / math.pi + 2 * branch
    scale = 1 + float(cauchy_bound([Fraction(abs(c) / abs(lead)).limit_denominator(10**6) for c in cs[:-1]] + [Fraction(1)]))
    far = max(max(ms), 1e4 * scale)

    def value(m: float) -> complex:
        acc = 0j
        for c in reversed(cs):
            acc = acc * m + c
        return acc

    def nearest(raw: float, ref: float) -> float:
        return raw + 2 * round((ref - raw) / 2)

    cur = nearest(cmath.phase(value(far)) / math.pi, target)
    out: list[float] = []
    prev_m = far
    for m in sorted(ms, reverse=True):
        ok = True
        for k in range(1, substeps + 1):
            x = prev_m + (m - prev_m) * k / substeps
            z = value(x)
            if z == 0:
                ok = False
                continue
            cur = nearest(cmath.phase(z) / math.pi, cur)
        prev_m = m
        out.append(cur if ok and value(m) != 0 else math.nan)
    return out[::-1]


def cmd_plot_phase(args, out: TextIO) -> None:
    g: PhaseGerm = ser.load_germ(ser.read_json(_existing(args.germ)), args.germ)
    lo, hi = _split_range(args.range)
    if args.steps < 1 or hi < lo:
        raise UsageError("--steps must be positive and lo <= hi")
    ms = [float(lo + (hi - lo) * Fraction(i, args.steps)) for i in range(args.steps + 1)]
    phis = continuous_phase(g.poly, g.branch, ms)
    with _output(args.output, out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "phi"])
        for m, phi in zip(ms, phis):
            w.writerow([repr(m), repr(phi)])


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="polystab", description="Polynomial stability conditions: exact phase and wall computations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("phase-cmp", help="compare two phase germs")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_phase_cmp)

    for name, func, help_ in (("charge", cmd_charge, "central charge of a class"),
                              ("validate-omega", cmd_validate_omega, "check stability data clause by clause"),
                              ("dual", cmd_dual, "dual stability data")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--model", help="preset name (P1, P2, P3, P1xP1, cy3, degree-only-n) or model JSON")
        s.add_argument("--omega", required=True, help="Omega JSON")
        if name == "charge":
            s.add_argument("--class", dest="cls", required=True, help="class JSON")
            s.add_argument("--json", action="store_true", help="print the polynomial as JSON")
        if name == "dual":
            s.add_argument("--dualizing", required=True, help="dualizing data JSON")
            s.add_argument("--class", dest="cls", help="also dualize this class")
        s.set_defaults(func=func)

    s = sub.add_parser("hn", help="HN filtration of a quiver representation")
    s.add_argument("--quiver", required=True)
    s.add_argument("--rep", required=True)
    s.set_defaults(func=cmd_hn)

    s = sub.add_parser("wall-scan", help="DT/PT verdicts along rho_3(t) = c + t v")
    s.add_argument("--rho012", required=True, help="rho_0,rho_1,rho_2, e.g. '-1,i,1'")
    s.add_argument("--family", required=True, help="c,v, e.g. '-i,1'")
    s.add_argument("--range", required=True, help="lo:hi")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--output", help="CSV file (default stdout)")
    s.set_defaults(func=cmd_wall_scan)

    s = sub.add_parser("surface-classify", help="large volume surface classifier and bounds")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_surface_classify)

    s = sub.add_parser("norm", help="semi-norm, semi-metric and ball test on presentations")
    s.add_argument("--sigma", required=True)
    s.add_argument("--u", help="charge map JSON {label: poly}")
    s.add_argument("--tau", help="second presentation")
    s.add_argument("--epsilon", help="ball radius in (0, 1/4)")
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("plot-phase", help="CSV of m and the continuous phase phi(m)")
    s.add_argument("--germ", required=True)
    s.add_argument("--range", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--output")
    s.set_defaults(func=cmd_plot_phase)
    return p


# flags whose values may start with "-" (negative numbers), which argparse would read as options
_SIGNED_VALUE_FLAGS = ("--range", "--rho012", "--family", "--epsilon")


def _join_signed_values(argv: Sequence[str]) -> list[str]:
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _SIGNED_VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(_join_signed_values(argv))
        args.func(args, out)
    except (ValidationError, ModelMismatch, CapExceeded, NoUniqueMdq) as exc:
        print(f"rejected: {exc}", file=err)
        return 2
    except (UsageError, ser.ParseError, UndecidedAtPrecision, PolystabError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
