"""Generators and numeric oracles shared by the test modules."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath
import numpy as np

from polystab.phasecore import CPoly, GaussianRational, PhaseGerm, eval_poly

LEADS = [GaussianRational(*z) for z in [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-2, 1), (3, -1), (-1, -1)]]


def rand_gauss(rng: random.Random, lo: int = -9, hi: int = 9) -> GaussianRational:
    return GaussianRational(rng.randint(lo, hi), rng.randint(lo, hi))


def rand_poly(rng: random.Random, max_deg: int = 4, lo: int = -9, hi: int = 9) -> CPoly:
    d = rng.randint(0, max_deg)
    cs = [rand_gauss(rng, lo, hi) for _ in range(d)]
    lead = rand_gauss(rng, lo, hi)
    while not lead:
        lead = rand_gauss(rng, lo, hi)
    return CPoly(tuple(cs) + (lead,))


def rand_germ(rng: random.Random, max_deg: int = 4, branches: int = 1) -> PhaseGerm:
    return PhaseGerm(rand_poly(rng, max_deg), rng.randint(-branches, branches))


def tied_germ(rng: random.Random, max_deg: int = 4) -> PhaseGerm:
    """Germs drawn from a small pool of leading directions, degrees and branches, so ties at infinity are common."""
    d = rng.randint(0, max_deg)
    lead = rng.choice(LEADS) * rng.randint(1, 3)
    cs = [rand_gauss(rng, -3, 3) for _ in range(d)]
    return PhaseGerm(CPoly(tuple(cs) + (lead,)), rng.randint(0, 1))


def germ_pair(rng: random.Random) -> tuple[PhaseGerm, PhaseGerm]:
    """Mix of unrelated pairs, pairs sharing the leading term, and positive rescalings."""
    kind = rng.randrange(4)
    a = rand_germ(rng)
    if kind == 0:
        return a, rand_germ(rng)
    if kind == 1:
        lower = rand_poly(rng, a.poly.degree - 1) if a.poly.degree > 0 else CPoly(())
        b = CPoly.monomial(a.poly.lead, a.poly.degree) + lower
        return a, PhaseGerm(b, a.branch)
    if kind == 2:
        return a, PhaseGerm(a.poly * Fraction(rng.randint(1, 5), rng.randint(1, 5)), a.branch)
    return tied_germ(rng), tied_germ(rng)


def continuous_phase_mp(g: PhaseGerm, points: list[Fraction], dps: int = 80) -> list[mpmath.mpf]:
    """phi(m)/pi at the given points (all at or beyond the last real root) by unwrapping from far out.

    A float sweep over a geometric grid fixes the winding; each sample is then
    re-evaluated from the exact value of the polynomial with mpmath.
    """
    coeffs = np.array([complex(c) for c in g.poly.coeffs][::-1])
    lead = coeffs[0]
    ratio = max([abs(c / lead) for c in coeffs[1:]], default=0.0)
    lo = float(min(points))
    far = max(float(max(points)), 1.0 + ratio) * 1e6
    grid = np.unique(np.concatenate([np.geomspace(lo, far, 6000), np.array([float(p) for p in points])]))[::-1]
    raw = np.angle(np.polyval(coeffs, grid)) / math.pi
    target = math.atan2(lead.imag, lead.real) / math.pi + 2 * g.branch
    raw[0] += 2 * round((target - raw[0]) / 2)
    unwrapped = np.unwrap(raw * math.pi) / math.pi
    lookup = dict(zip(grid.tolist(), unwrapped.tolist()))
    out = []
    with mpmath.workdps(dps):
        for p in points:
            z = eval_poly(g.poly, p)
            principal = mpmath.atan2(mpmath.mpf(z.im.numerator) / z.im.denominator,
                                     mpmath.mpf(z.re.numerator) / z.re.denominator) / mpmath.pi
            approx = lookup[float(p)]
            out.append(principal + 2 * round((approx - float(principal)) / 2))
    return out
