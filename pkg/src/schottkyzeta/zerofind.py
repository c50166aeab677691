"""Winding-number certification of complex zeros, and holomorphic-section
dimension formulas for verification reports.

The argument principle is realized without derivatives: a contour is sampled
adaptively until consecutive phase steps stay below pi/2, and the accumulated
phase is required to be an integer multiple of 2*pi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BadInput, RefinementExhausted, WindingError, ZeroOnContour

_MIN_MODULUS_RATIO = 1e-12
_PHASE_STEP = math.pi / 2
_INTEGER_TOL = 1e-3


@dataclass(frozen=True)
class ContourScan:
    """Adaptively sampled closed contour with its accumulated phase."""

    samples: tuple[tuple[complex, complex], ...]  # (point, value), closed
    total_phase: float
    refinement_depth: int

    @property
    def winding(self) -> int:
        w = self.total_phase / (2 * math.pi)
        n = round(w)
        if abs(w - n) > _INTEGER_TOL:
            raise WindingError(f"total phase {w:.6f} turns is not an integer")
        return int(n)

    @property
    def min_modulus(self) -> float:
        return min(abs(v) for _, v in self.samples)


def scan_contour(f: Callable[[complex], complex], path: Callable[[float], complex],
                 n_start: int = 32, max_depth: int = 26,
                 max_samples: int = 200000, check_modulus: bool = True) -> ContourScan:
    """Sample f along the closed path (parametrized over [0,1]) until all
    consecutive phase increments are below pi/2.

    check_modulus=False is for phase-normalized evaluators (log-form
    determinants): the modulus guard is skipped and a phase step pinned on a
    shrinking interval is classified as a zero on the contour outright.
    """
    ts = list(np.linspace(0.0, 1.0, n_start + 1))
    vals = {t: complex(f(path(t))) for t in ts}
    depth = 0

    def guard():
        if not check_modulus:
            return
        mags = [abs(v) for v in vals.values()]
        if min(mags) <= _MIN_MODULUS_RATIO * max(mags):
            raise ZeroOnContour(f"|f| dips to {min(mags):.3e} on the contour")

    def refine_offenders():
        nonlocal ts, depth
        while True:
            bad = []
            for a, b in zip(ts, ts[1:]):
                if abs(cmath.phase(vals[b] / vals[a])) >= _PHASE_STEP:
                    bad.append((a, b))
            if not bad:
                return
            depth += 1
            stuck = depth > max_depth or len(ts) > max_samples
            pinch = min(b - a for a, b in bad) < 1e-10
            if stuck or pinch:
                # a phase step pinned near pi on a shrinking interval means
                # the contour runs through (or numerically through) a zero
                if not check_modulus:
                    raise ZeroOnContour("phase step pinned on a shrinking interval")
                mags = [abs(v) for v in vals.values()]
                dip = min(min(abs(vals[a]), abs(vals[b])) for a, b in bad)
                if dip < 1e-3 * max(mags):
                    raise ZeroOnContour(
                        f"phase step pinned near a modulus dip of {dip:.3e}")
                raise RefinementExhausted(
                    f"phase steps still >= pi/2 after {depth - 1} refinements")
            for a, b in bad:
                m = 0.5 * (a + b)
                vals[m] = complex(f(path(m)))
            ts = sorted(vals.keys())
            guard()

    def total_phase():
        return sum(cmath.phase(vals[b] / vals[a]) for a, b in zip(ts, ts[1:]))

    guard()
    refine_offenders()
    # anti-aliasing: a zero hugging the contour can whirl a full turn between
    # samples without tripping the step criterion; insist the total is stable
    # under one global bisection (repeat until it is)
    while True:
        total = total_phase()
        for a, b in list(zip(ts, ts[1:])):
            m = 0.5 * (a + b)
            if m not in vals:
                vals[m] = complex(f(path(m)))
        ts = sorted(vals.keys())
        guard()
        refine_offenders()
        if abs(total_phase() - total) < 1e-6:
            break
        if len(ts) > max_samples:
            raise RefinementExhausted("winding unstable under global refinement")
    samples = tuple((path(t), vals[t]) for t in ts)
    return ContourScan(samples, total_phase(), depth)


def circle_path(center: complex, radius: float) -> Callable[[float], complex]:
    return lambda t: center + radius * cmath.exp(2j * math.pi * t)


def rectangle_path(re_min: float, re_max: float, im_min: float, im_max: float
                   ) -> Callable[[float], complex]:
    corners = [complex(re_min, im_min), complex(re_max, im_min),
               complex(re_max, im_max), complex(re_min, im_max)]

    def path(t: float) -> complex:
        u = (t % 1.0) * 4.0
        k = min(int(u), 3)
        frac = u - k
        a, b = corners[k], corners[(k + 1) % 4]
        return a + frac * (b - a)

    return path


def winding_number(f: Callable[[complex], complex], center: complex, radius: float,
                   max_depth: int = 26) -> int:
    """Number of zeros of f (with multiplicity) inside the circle, by phase
    accumulation.  Raises rather than rounding a non-integer total phase."""
    scan = scan_contour(f, circle_path(center, radius), max_depth=max_depth)
    return scan.winding


def winding_rectangle(f: Callable[[complex], complex],
                      rect: Sequence[float], max_depth: int = 26) -> int:
    re_min, re_max, im_min, im_max = rect
    scan = scan_contour(f, rectangle_path(re_min, re_max, im_min, im_max),
                        max_depth=max_depth)
    return scan.winding


# -- dimension formulas -------------------------------------------------------

@dataclass(frozen=True)
class Compact:
    """Closed oriented hyperbolic surface of the given genus."""

    genus: int


@dataclass(frozen=True)
class ConvexCocompact:
    """Infinite-volume convex co-compact surface with the given Euler characteristic."""

    chi: int


def dim_Hn(surface, n: int) -> int:
    """Dimension of the space of holomorphic n-differentials with the reality
    constraint appropriate to the surface type.

    Compact(genus):        complex dimension, (2n-1)(g-1) for n > 1, g for n = 1.
    ConvexCocompact(chi):  real dimension, (2n-1)|chi| for n > 1, |chi|+1 for n = 1.
    """
    if n < 1:
        raise BadInput(f"n must be >= 1, got {n}")
    if isinstance(surface, Compact):
        if surface.genus < 2:
            raise BadInput("compact hyperbolic surface needs genus >= 2")
        chi = 2 - 2 * surface.genus
        if n == 1:
            return abs(chi) // 2 + 1
        return (2 * n - 1) * abs(chi) // 2
    if isinstance(surface, ConvexCocompact):
        if surface.chi > -1:
            raise BadInput("convex co-compact surface needs chi <= -1")
        if n == 1:
            return abs(surface.chi) + 1
        return (2 * n - 1) * abs(surface.chi)
    raise BadInput(f"unknown surface type {type(surface).__name__}")


def expected_zero_order(chi: int, n: int) -> int:
    """Order of the Selberg zeta zero at s = -n for a non-elementary group:
    |chi|+1 at n = 0, (2n+1)|chi| for n >= 1."""
    if chi > -1:
        raise BadInput("need chi <= -1")
    if n < 0:
        raise BadInput("need n >= 0")
    return abs(chi) + 1 if n == 0 else (2 * n + 1) * abs(chi)


def verify_topological_zeros(group, n_max: int, N: int = 20,
                             radius: float = 0.25,
                             min_radius: float = 1e-3) -> dict:
    """Compare windings of det(I - L_s) at s = 0, -1, ..., -n_max against the
    topological orders |chi|+1 and (2n+1)|chi|.

    Before certifying a disk, its interior is scanned for foreign zeros
    (quantum resonances); when one intrudes the radius is halved, down to
    min_radius.  Elementary (rank-1) groups are reported with pass = None:
    the topological counts presume a non-elementary group.

    Returns {surface, convention, entries: [{n, expected, observed, radius,
    pass}]}; `observed` is the winding, `foreign` the independently scanned
    intruder count at the certified radius.
    """
    from .transfer import _DetCache

    group.ensure_valid()
    chi = group.euler_characteristic()
    elementary = group.rank == 1
    f = _DetCache(group, N)

    def foreign_count(center: complex, r: float) -> int:
        # windings over the 3x3 cell grid of the square [-r, r]^2 around the
        # center, skipping the central cell: the expected topological zero at
        # the center never touches a scanned contour
        total = 0
        for p in range(3):
            for q in range(3):
                if p == 1 and q == 1:
                    continue
                a = center.real - r + 2 * r * p / 3
                c = center.imag - r + 2 * r * q / 3
                rect = (a, a + 2 * r / 3, c, c + 2 * r / 3)
                for attempt in range(6):
                    try:
                        total += scan_contour(
                            f.phase, rectangle_path(*rect),
                            check_modulus=False).winding
                        break
                    except ZeroOnContour:
                        eps = 1e-3 * r * 4 ** attempt
                        rect = (rect[0] - eps, rect[1] - eps,
                                rect[2] - eps, rect[3] - eps)
                else:
                    raise ZeroOnContour(
                        f"foreign-zero scan stuck near {center}")
        return total

    entries = []
    for n in range(n_max + 1):
        center = complex(-n, 0.0)
        r = radius
        while True:
            foreign = foreign_count(center, r)
            if foreign == 0 or r / 2 < min_radius:
                break
            r /= 2
        observed = scan_contour(f.phase, circle_path(center, r),
                                check_modulus=False).winding
        if elementary:
            expected = None
            ok = None
        else:
            expected = expected_zero_order(chi, n)
            ok = bool(observed == expected and foreign == 0)
        entries.append({"n": n, "expected": expected, "observed": observed,
                        "radius": r, "foreign": foreign, "pass": ok})
    return {
        "surface": {"rank": group.rank, "euler_characteristic": chi},
        "convention": "oriented",
        "entries": entries,
    }
