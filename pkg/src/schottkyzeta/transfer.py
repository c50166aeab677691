"""Transfer operator of the Schottky branch system and its Fredholm determinant.

The operator (L_s f)(z) = sum_j (g_j'(z))^s f(g_j z), for z in disk D_i and
branches j != -i, is discretized in a per-disk monomial basis
((z - c_i)/r_i)^m, m < N, with matrix entries computed by trapezoid (Cauchy)
quadrature on the disk boundary circles.  det(I - L_s) is an entire function
of s that continues the Selberg zeta Euler product over oriented primitive
classes; its windings realize zeta zero orders.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BranchCutCrossing, NoBracketing, ZeroOnContour
from .schottky import SchottkyGroup
from .zerofind import rectangle_path, scan_contour

DEFAULT_BASIS_ORDER = 20


@dataclass(frozen=True)
class TransferMatrix:
    """Discretized transfer operator at one complex parameter."""

    s: complex
    basis_order: int
    symbols: tuple[int, ...]
    matrix: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        """Action of branch j on disk i (zero when j = -i)."""
        N = self.basis_order
        bi = self.symbols.index(i)
        bj = self.symbols.index(j)
        return self.matrix[bi * N:(bi + 1) * N, bj * N:(bj + 1) * N]

    def column_decay_ratio(self) -> float:
        """Max over blocks of ||last column|| / ||second-to-last column||."""
        N = self.basis_order
        worst = 0.0
        for bi in range(len(self.symbols)):
            for bj in range(len(self.symbols)):
                blk = self.matrix[bi * N:(bi + 1) * N, bj * N:(bj + 1) * N]
                a = np.linalg.norm(blk[:, -1])
                b = np.linalg.norm(blk[:, -2])
                if b > 0:
                    worst = max(worst, a / b)
        return worst


def _continued_power(w: np.ndarray, s: complex) -> np.ndarray:
    """w^s along a closed quadrature loop, with the log branch continued from
    the principal value at the first node."""
    theta = np.angle(w)
    steps = np.diff(theta)
    steps -= 2 * math.pi * np.round(steps / (2 * math.pi))
    if np.any(np.abs(steps) > math.pi * 0.9):
        raise BranchCutCrossing("phase step > 0.9*pi between adjacent quadrature nodes")
    cont = theta[0] + np.concatenate(([0.0], np.cumsum(steps)))
    return np.exp(s * (np.log(np.abs(w)) + 1j * cont))


def build_transfer_matrix(group: SchottkyGroup, s: complex,
                          N: int = DEFAULT_BASIS_ORDER,
                          quad_mult: int = 4) -> TransferMatrix:
    """Assemble the 2r*N square matrix at parameter s.

    Quadrature starts at quad_mult*N nodes per circle and doubles (up to three
    times) if branch-phase continuity cannot be established.
    """
    group.ensure_valid()
    s = complex(s)
    symbols = group.symbols
    n_disks = len(symbols)
    dim = n_disks * N
    M = np.zeros((dim, dim), dtype=complex)
    powers = np.arange(N)
    for attempt in range(4):
        Q = quad_mult * N * 2 ** attempt
        phi = 2 * math.pi * np.arange(Q) / Q
        dft = np.exp(-1j * np.outer(powers, phi)) / Q  # N x Q row projector
        try:
            for bi, i in enumerate(symbols):
                di = group.disk(i)
                z = di.center + di.radius * np.exp(1j * phi)
                for bj, j in enumerate(symbols):
                    if j == -i:
                        continue
                    g = group.generator(j)
                    den = g.c * z + g.d
                    gz = (g.a * z + g.b) / den
                    ws = _continued_power(1.0 / den ** 2, s)
                    dj = group.disk(j)
                    u = (gz - dj.center) / dj.radius
                    M[bi * N:(bi + 1) * N, bj * N:(bj + 1) * N] = \
                        dft @ (ws[:, None] * u[:, None] ** powers)
            return TransferMatrix(s, N, symbols, M)
        except BranchCutCrossing:
            if attempt == 3:
                raise
    raise BranchCutCrossing("unreachable")


def fredholm_det_log(group: SchottkyGroup, s: complex,
                     N: int = DEFAULT_BASIS_ORDER) -> tuple[complex, float]:
    """det(I - L_s) as (unit-modulus sign, log|det|): safe at any magnitude."""
    tm = build_transfer_matrix(group, s, N)
    sign, logabs = np.linalg.slogdet(np.eye(tm.matrix.shape[0]) - tm.matrix)
    return complex(sign), float(logabs)


def fredholm_det(group: SchottkyGroup, s: complex,
                 N: int = DEFAULT_BASIS_ORDER) -> complex:
    """det(I - L_s); overflows to a phased infinity beyond exp(700)."""
    sign, logabs = fredholm_det_log(group, s, N)
    if logabs > 700.0:
        return cmath.rect(math.inf, cmath.phase(sign))
    return sign * math.exp(logabs)


def _leading_eigenvalue(group: SchottkyGroup, s: float, N: int) -> float:
    tm = build_transfer_matrix(group, complex(s), N)
    ev = np.linalg.eigvals(tm.matrix)
    lead = ev[np.argmax(np.abs(ev))]
    return float(lead.real)


def hausdorff_dimension(group: SchottkyGroup, tol: float = 1e-9,
                        N: int = DEFAULT_BASIS_ORDER) -> float:
    """Limit-set dimension: the unique real s in (0,1) with leading eigenvalue
    of L_s equal to 1."""
    lo, hi = 1e-3, 1.0 - 1e-3
    f = lambda s: _leading_eigenvalue(group, s, N) - 1.0
    flo, fhi = f(lo), f(hi)
    if not (flo > 0.0 > fhi):
        raise NoBracketing(
            f"leading eigenvalue does not cross 1 on ({lo}, {hi}): "
            f"endpoints {1 + flo:.6f}, {1 + fhi:.6f} (elementary group?)")
    return float(brentq(f, lo, hi, xtol=tol))


def hausdorff_dimension_det(group: SchottkyGroup, tol: float = 1e-9,
                            N: int = DEFAULT_BASIS_ORDER,
                            n_grid: int = 64) -> float:
    """Largest real zero of det(I - L_s) in (0,1): second route to the dimension."""
    s_grid = np.linspace(1e-3, 1.0 - 1e-3, n_grid)
    vals = [fredholm_det(group, float(s), N).real for s in s_grid]
    for k in range(n_grid - 2, -1, -1):
        if vals[k] == 0.0:
            return float(s_grid[k])
        if vals[k] * vals[k + 1] < 0:
            f = lambda s: fredholm_det(group, float(s), N).real
            return float(brentq(f, s_grid[k], s_grid[k + 1], xtol=tol))
    raise NoBracketing("det(I - L_s) has no sign change on (0, 1)")


@dataclass(frozen=True)
class ZeroCertificate:
    """Winding count of det(I - L_s) on a disk in the s-plane."""

    center: complex
    radius: float
    winding: int
    min_modulus_on_circle: float
    method: str = "transfer-determinant"


class _DetCache:
    """Memoized phase-safe determinant evaluator for contour work."""

    def __init__(self, group: SchottkyGroup, N: int):
        self.group = group
        self.N = N
        self.cache: dict[complex, tuple[complex, float]] = {}

    def log_form(self, s: complex) -> tuple[complex, float]:
        s = complex(s)
        if s not in self.cache:
            self.cache[s] = fredholm_det_log(self.group, s, self.N)
        return self.cache[s]

    def phase(self, s: complex) -> complex:
        """Unit-modulus determinant direction: all a winding scan needs, and
        immune to the huge dynamic ranges left of the convergence axis."""
        return self.log_form(s)[0]

    def min_log_modulus(self, points) -> float:
        return min(self.log_form(s)[1] for s in points)

    def __call__(self, s: complex) -> complex:
        sign, logabs = self.log_form(s)
        return sign * math.exp(min(max(logabs, -700.0), 700.0))


def locate_zeros(group: SchottkyGroup, region: tuple[float, float, float, float],
                 N: int = DEFAULT_BASIS_ORDER, grid: int = 8,
                 resolution: float = 0.05,
                 max_perturb: int = 5) -> list[ZeroCertificate]:
    """Zero certificates for det(I - L_s) in the rectangle (re_min, re_max,
    im_min, im_max), by winding counts over an adaptively subdivided grid.

    Leaf rectangles with nonzero winding become disk certificates (center,
    half-diagonal radius).  Contours grazing a zero are perturbed by 1e-3 of
    their size, up to max_perturb times.
    """
    re_min, re_max, im_min, im_max = map(float, region)
    f = _DetCache(group, N)

    def rect_winding(rect):
        a, b, c, d = rect
        for k in range(max_perturb + 1):
            try:
                scan = scan_contour(f.phase, rectangle_path(a, b, c, d),
                                    check_modulus=False)
                return scan.winding, scan
            except ZeroOnContour:
                # translate; grow the step geometrically (a high-order zero
                # depresses the modulus in a wide neighborhood)
                eps = 1e-3 * max(b - a, d - c) * 4 ** k
                a, b, c, d = a - eps, b - eps, c - eps, d - eps
        raise ZeroOnContour(
            f"zero stayed on the contour of {rect} after {max_perturb} perturbations")

    work = []
    for p in range(grid):
        for q in range(grid):
            work.append((re_min + (re_max - re_min) * p / grid,
                         re_min + (re_max - re_min) * (p + 1) / grid,
                         im_min + (im_max - im_min) * q / grid,
                         im_min + (im_max - im_min) * (q + 1) / grid))
    out = []
    while work:
        rect = work.pop()
        a, b, c, d = rect
        w, scan = rect_winding(rect)
        if w == 0:
            continue
        diag = math.hypot(b - a, d - c)
        if diag <= 2 * resolution:
            center = complex((a + b) / 2, (c + d) / 2)
            min_log = f.min_log_modulus(pt for pt, _ in scan.samples)
            min_mod = math.exp(min(max(min_log, -700.0), 700.0))
            out.append(ZeroCertificate(center, diag / 2, w, min_mod))
            continue
        mre, mim = (a + b) / 2, (c + d) / 2
        work.extend([(a, mre, c, mim), (mre, b, c, mim),
                     (a, mre, mim, d), (mre, b, mim, d)])
    out.sort(key=lambda z: (z.center.real, z.center.imag))
    return out
