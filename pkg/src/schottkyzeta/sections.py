"""Exact symbolic calculus for tensor-bundle sections on the disk, and the
raising/lowering ladder between fiberwise Fourier modes.

A section of the n-th power bundle is f * dz^n (n >= 0) or f * dzbar^|n|
(n < 0) with f = p(z, zbar) / (1 - z zbar)^m, p a bivariate polynomial with
Gaussian-rational coefficients.  All ladder identities are then decidable
exactly, with no floating-point noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import LoweringMismatch, RepresentationOverflow
from .moebius import UnitTangentPoint, phi_pm, GENERATORS

DEGREE_CAP = 64


@dataclass(frozen=True)
class QC:
    """Gaussian rational a + b*i with exact Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, v) -> "QC":
        if isinstance(v, QC):
            return v
        if isinstance(v, complex):
            return cls(Fraction(v.real).limit_denominator(10 ** 12),
                       Fraction(v.imag).limit_denominator(10 ** 12))
        return cls(Fraction(v), Fraction(0))

    def __add__(self, o: "QC") -> "QC":
        return QC(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "QC") -> "QC":
        return QC(self.re - o.re, self.im - o.im)

    def __mul__(self, o: "QC") -> "QC":
        return QC(self.re * o.re - self.im * o.im,
                  self.re * o.im + self.im * o.re)

    def __neg__(self) -> "QC":
        return QC(-self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(self.re, self.im)


QC_ZERO = QC()
QC_ONE = QC(Fraction(1))


@dataclass(frozen=True)
class Poly2:
    """Polynomial in (z, zbar): {(i, j): QC} for z^i zbar^j."""

    terms: dict[tuple[int, int], QC] = field(default_factory=dict)

    @classmethod
    def const(cls, c) -> "Poly2":
        c = QC.of(c)
        return cls({} if c.is_zero() else {(0, 0): c})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "Poly2":
        c = QC.of(c)
        return cls({} if c.is_zero() else {(i, j): c})

    def __add__(self, o: "Poly2") -> "Poly2":
        t = dict(self.terms)
        for k, v in o.terms.items():
            w = t.get(k, QC_ZERO) + v
            if w.is_zero():
                t.pop(k, None)
            else:
                t[k] = w
        return Poly2(t)

    def __sub__(self, o: "Poly2") -> "Poly2":
        return self + (o * QC(Fraction(-1)))

    def __mul__(self, o) -> "Poly2":
        if isinstance(o, (QC, int, Fraction, complex)):
            c = QC.of(o)
            if c.is_zero():
                return Poly2({})
            return Poly2({k: v * c for k, v in self.terms.items()})
        t: dict[tuple[int, int], QC] = {}
        for (i1, j1), v1 in self.terms.items():
            for (i2, j2), v2 in o.terms.items():
                k = (i1 + i2, j1 + j2)
                w = t.get(k, QC_ZERO) + v1 * v2
                if w.is_zero():
                    t.pop(k, None)
                else:
                    t[k] = w
        return Poly2(t)

    def dz(self) -> "Poly2":
        return Poly2({(i - 1, j): v * QC(Fraction(i))
                      for (i, j), v in self.terms.items() if i > 0})

    def dzbar(self) -> "Poly2":
        return Poly2({(i, j - 1): v * QC(Fraction(j))
                      for (i, j), v in self.terms.items() if j > 0})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=0)

    def __eq__(self, o) -> bool:
        return isinstance(o, Poly2) and (self - o).is_zero()

    def __hash__(self):
        return hash(frozenset((k, v.re, v.im) for k, v in self.terms.items()))

    def evaluate(self, z: complex) -> complex:
        zb = z.conjugate()
        return sum(v.to_complex() * z ** i * zb ** j for (i, j), v in self.terms.items())


# 1 - z zbar
D_POLY = Poly2({(0, 0): QC_ONE, (1, 1): QC(Fraction(-1))})


@dataclass(frozen=True)
class TensorSection:
    """Section num/(1 - z zbar)^m of the n-th tensor power bundle."""

    n: int
    num: Poly2
    m: int = 0

    def __post_init__(self):
        if self.m < 0:
            num, m = self.num, self.m
            while m < 0:
                num = num * D_POLY
                m += 1
            object.__setattr__(self, "num", num)
            object.__setattr__(self, "m", 0)
        if self.num.degree() > DEGREE_CAP:
            raise RepresentationOverflow(
                f"polynomial degree {self.num.degree()} exceeds cap {DEGREE_CAP}")

    @classmethod
    def holomorphic(cls, n: int, coeffs) -> "TensorSection":
        """sum_i coeffs[i] z^i as a section of power n."""
        p = Poly2({})
        for i, c in enumerate(coeffs):
            p = p + Poly2.monomial(i, 0, c)
        return cls(n, p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, o) -> bool:
        if not isinstance(o, TensorSection) or self.n != o.n:
            return False
        a, b = self, o
        # cross-multiply the denominators and compare polynomials
        pa, pb = a.num, b.num
        for _ in range(max(0, b.m - a.m)):
            pa = pa * D_POLY
        for _ in range(max(0, a.m - b.m)):
            pb = pb * D_POLY
        return pa == pb

    def __hash__(self):
        return hash((self.n, self.m))

    def scaled(self, c) -> "TensorSection":
        return TensorSection(self.n, self.num * QC.of(c), self.m)

    def __add__(self, o: "TensorSection") -> "TensorSection":
        if self.n != o.n:
            raise ValueError("cannot add sections of different powers")
        m = max(self.m, o.m)
        pa, pb = self.num, o.num
        for _ in range(m - self.m):
            pa = pa * D_POLY
        for _ in range(m - o.m):
            pb = pb * D_POLY
        return TensorSection(self.n, pa + pb, m)

    def __sub__(self, o: "TensorSection") -> "TensorSection":
        return self + o.scaled(-1)

    def evaluate(self, z: complex) -> complex:
        return self.num.evaluate(z) / (1.0 - abs(z) ** 2) ** self.m


def eta_raise(u: TensorSection) -> TensorSection:
    """Raising operator: power n -> n+1.

    For n >= 0 and u = f dz^n:  (d_z f - 2 n zbar f / (1-z zbar)) dz^{n+1}.
    For n < 0 the conjugate-chart formula applies.
    """
    n, p, m = u.n, u.num, u.m
    if n >= 0:
        num = p.dz() * D_POLY + Poly2.monomial(0, 1, Fraction(m - 2 * n)) * p
        return TensorSection(n + 1, num, m + 1)
    # u = f dzbar^{|n|}: eta_+ u = (1-z zbar)^2/4 d_z f on power n+1
    num = (p.dz() * D_POLY + Poly2.monomial(0, 1, Fraction(m)) * p) * QC(Fraction(1, 4))
    return TensorSection(n + 1, num, m - 1)


def eta_lower(u: TensorSection) -> TensorSection:
    """Lowering operator: power n -> n-1 (conjugate of eta_raise)."""
    n, p, m = u.n, u.num, u.m
    if n > 0:
        num = (p.dzbar() * D_POLY + Poly2.monomial(1, 0, Fraction(m)) * p) * QC(Fraction(1, 4))
        return TensorSection(n - 1, num, m - 1)
    num = p.dzbar() * D_POLY + Poly2.monomial(1, 0, Fraction(m + 2 * n)) * p
    return TensorSection(n - 1, num, m + 1)


def eta_apply(direction: str, u: TensorSection) -> TensorSection:
    if direction == "raise":
        return eta_raise(u)
    if direction == "lower":
        return eta_lower(u)
    raise ValueError("direction must be 'raise' or 'lower'")


def vertical_eigenvalue_check(u: TensorSection) -> bool:
    """[eta_+, eta_-] u == (n/2) u, the commutator acting on power n."""
    lhs = eta_raise(eta_lower(u)) - eta_lower(eta_raise(u))
    return lhs == u.scaled(Fraction(u.n, 2))


def ladder_build(n: int, l_max: int, u_n: TensorSection | None = None
                 ) -> list[TensorSection]:
    """Rungs u_n, u_{n+1}, ..., u_{n+l_max} of the raising ladder
    u_k = (2/(n-k)) eta_+ u_{k-1}, seeded by a holomorphic section u_n.

    Every step checks the lowering identity 2 eta_- u_{k+1} = (n+k) u_k
    exactly; a violation raises LoweringMismatch.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if u_n is None:
        u_n = TensorSection.holomorphic(n, [1])
    if u_n.n != n:
        raise ValueError(f"seed section has power {u_n.n}, expected {n}")
    if not eta_lower(u_n).is_zero():
        raise ValueError("seed section must be holomorphic (eta_- u_n = 0)")
    rungs = [u_n]
    for k in range(n + 1, n + l_max + 1):
        u_k = eta_raise(rungs[-1]).scaled(Fraction(2, n - k))
        back = eta_lower(u_k).scaled(2)
        if back != rungs[-1].scaled(Fraction(n + k - 1)):
            raise LoweringMismatch(f"2 eta_- u_{k} != ({n}+{k - 1}) u_{k - 1}")
        rungs.append(u_k)
    return rungs


def ladder_norm_ratio(n: int, ell: int) -> tuple[Fraction, int]:
    """(Pi_{ell,n}, growth witness).

    Pi_{ell,n} = prod_{r=1..ell} (2n-1+r)/r is the squared-norm ratio between
    rungs n+ell and n.  The witness is the least N with
    Pi_{l,n} <= Pi_{1,n} * l^N for all l in [1, 1000] (polynomial growth of
    degree 2n-1).
    """
    if n < 1 or ell < 0:
        raise ValueError("need n >= 1 and ell >= 0")
    pi = Fraction(1)
    for r in range(1, ell + 1):
        pi *= Fraction(2 * n - 1 + r, r)
    c = Fraction(2 * n)  # Pi_{1,n}
    values = []
    acc = Fraction(1)
    for l in range(1, 1001):
        acc *= Fraction(2 * n - 1 + l, l)
        values.append((l, acc))
    witness = 0
    while any(v > c * l ** witness for l, v in values):
        witness += 1
        if witness > 4 * n:
            raise RuntimeError("growth witness runaway")
    return pi, witness


# -- Casimir operator by nested flow differences ------------------------------

def _first_derivative(f, y: UnitTangentPoint, gen: np.ndarray, h: float) -> float:
    return (f(y.flow(gen, h)) - f(y.flow(gen, -h))) / (2 * h)


def _second_derivative(f, y: UnitTangentPoint, gen: np.ndarray, h: float) -> float:
    return (f(y.flow(gen, h)) - 2.0 * f(y) + f(y.flow(gen, -h))) / h ** 2


def _composed(f, y: UnitTangentPoint, gen_outer, gen_inner, h: float) -> float:
    """(A B f)(y) with A = gen_outer, B = gen_inner, nested central differences."""
    def bf(pt):
        return _first_derivative(f, pt, gen_inner, h)
    return (bf(y.flow(gen_outer, h)) - bf(y.flow(gen_outer, -h))) / (2 * h)


def casimir_groupings(y: UnitTangentPoint, h: float = 1e-2, f=None) -> dict[str, float]:
    """Three evaluations of the Casimir operator on a test function.

    'perpendicular':  X^2 + Xperp^2 - V^2
    'horocyclic':     X^2 - V^2 + (U- + V)^2 expanded into flow compositions
    'normal_ordered': X^2 - X + U-^2 + 2 V U-   (uses [V, U-] = X)

    All three agree as differential operators; the default test function is
    the forward horocycle-invariant eigenfunction Phi+.
    """
    if f is None:
        f = lambda pt: phi_pm(pt)[1]
    X, XP, V, UM = (GENERATORS["X"], GENERATORS["X_perp"],
                    GENERATORS["V"], GENERATORS["U-"])
    d2 = lambda gen: _second_derivative(f, y, gen, h)
    comp = lambda a, b: _composed(f, y, a, b, h)
    perpendicular = d2(X) + d2(XP) - d2(V)
    horocyclic = d2(X) - d2(V) + d2(UM) + comp(UM, V) + comp(V, UM) + d2(V)
    normal_ordered = d2(X) - _first_derivative(f, y, X, h) + d2(UM) + 2.0 * comp(V, UM)
    return {"perpendicular": perpendicular, "horocyclic": horocyclic,
            "normal_ordered": normal_ordered}


def casimir_residual(y: UnitTangentPoint, h: float = 1e-2, f=None) -> float:
    """Largest disagreement among the Casimir groupings; O(h^2) for smooth f."""
    g = casimir_groupings(y, h, f)
    vals = list(g.values())
    return max(abs(a - b) for a in vals for b in vals)
