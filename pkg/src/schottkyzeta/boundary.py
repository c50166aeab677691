"""Scattering multiplier, Poisson-Helgason transform, and kernel checks on the
boundary circle of the disk model.

Densities are trigonometric polynomials stored by Fourier coefficient; pushed-
forward densities that are no longer trigonometric polynomials enter the
quadratures as plain callables of the boundary angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AtPole, PointOnBoundary, QuadratureStall
from .moebius import MoebiusMap
from .special import gamma_ratio


@dataclass(frozen=True)
class FourierDistribution:
    """Density omega(e^{i a}) = sum_k c_k e^{i k a} with finitely many modes."""

    coeffs: dict[int, complex] = field(default_factory=dict)

    @classmethod
    def constant(cls, c: complex = 1.0) -> "FourierDistribution":
        return cls({0: complex(c)})

    @classmethod
    def mode(cls, k: int, c: complex = 1.0) -> "FourierDistribution":
        return cls({int(k): complex(c)})

    @classmethod
    def random_real(cls, rng: np.random.Generator, max_mode: int,
                    scale: float = 1.0) -> "FourierDistribution":
        coeffs: dict[int, complex] = {0: complex(rng.normal(0, scale))}
        for k in range(1, max_mode + 1):
            c = complex(rng.normal(0, scale), rng.normal(0, scale))
            coeffs[k] = c
            coeffs[-k] = c.conjugate()
        return cls(coeffs)

    @property
    def max_mode(self) -> int:
        return max((abs(k) for k in self.coeffs), default=0)

    @property
    def is_real(self) -> bool:
        return all(abs(self.coeffs.get(-k, 0) - c.conjugate()) < 1e-12
                   for k, c in self.coeffs.items())

    def __call__(self, alpha):
        alpha = np.asarray(alpha, dtype=float)
        out = np.zeros_like(alpha, dtype=complex)
        for k, c in self.coeffs.items():
            out += c * np.exp(1j * k * alpha)
        return out if out.ndim else complex(out)


@dataclass(frozen=True)
class ScatteringMultiplier:
    """Mode-wise eigenvalues Gamma(|k|+s)/Gamma(|k|+1-s) of the scattering
    operator at parameter s."""

    s: complex
    eigenvalues: dict[int, complex]

    @classmethod
    def at(cls, s: complex, max_mode: int) -> "ScatteringMultiplier":
        s = complex(s)
        _reject_pole(s)
        eig = {k: gamma_ratio(abs(k) + s, abs(k) + 1 - s)
               for k in range(-max_mode, max_mode + 1)}
        return cls(s, eig)


def _reject_pole(s: complex) -> None:
    if abs(s.imag) < 1e-12 and abs(s.real - round(s.real)) < 1e-12 and round(s.real) <= 0:
        raise AtPole(f"scattering operator has a pole at s = {s}")


def scattering_multiplier(s: complex, k: int) -> complex:
    """sigma_k(s) = Gamma(|k|+s)/Gamma(|k|+1-s)."""
    _reject_pole(complex(s))
    return gamma_ratio(abs(k) + s, abs(k) + 1 - s)


def scattering_apply(s: complex, omega: FourierDistribution) -> FourierDistribution:
    """Apply the scattering operator mode by mode."""
    _reject_pole(complex(s))
    return FourierDistribution(
        {k: c * gamma_ratio(abs(k) + s, abs(k) + 1 - s)
         for k, c in omega.coeffs.items()})


def _adaptive_trapezoid(fvals_at, tol: float = 1e-12,
                        n_start: int = 32, n_max: int = 2 ** 16) -> complex:
    """Trapezoid quadrature of a smooth 2*pi-periodic integrand given by
    fvals_at(angles)->values, with node doubling until stable."""
    n = n_start
    prev = None
    while n <= n_max:
        ang = 2 * math.pi * np.arange(n) / n
        val = complex(np.sum(fvals_at(ang))) * 2 * math.pi / n
        if prev is not None and abs(val - prev) < tol * max(1.0, abs(val)):
            return val
        prev = val
        n *= 2
    raise QuadratureStall(f"no convergence with {n_max} nodes")


def poisson_helgason(lam: complex, omega, x: complex,
                     tol: float = 1e-12) -> complex:
    """<omega, P(x,.)^{1+lambda}> over the circle; omega is a
    FourierDistribution or a callable of the boundary angle."""
    x = complex(x)
    if abs(x) >= 1.0 - 1e-12:
        raise PointOnBoundary(f"|x| = {abs(x)}")
    lam = complex(lam)

    def integrand(ang):
        nu = np.exp(1j * ang)
        p = (1.0 - abs(x) ** 2) / np.abs(x - nu) ** 2
        return omega(ang) * np.exp((1.0 + lam) * np.log(p))

    return _adaptive_trapezoid(integrand, tol=tol)


def harmonicity_residual(lam: complex, omega, x: complex, h: float = 1e-3) -> float:
    """|(Delta_hyp + lambda(1+lambda)) P_lambda(omega)| at x, with the positive
    hyperbolic Laplacian -((1-|x|^2)^2/4) * (5-point Euclidean Laplacian)."""
    x = complex(x)
    if abs(x) + 2 * h >= 1.0:
        raise PointOnBoundary("stencil leaves the disk")
    u = {dz: poisson_helgason(lam, omega, x + dz)
         for dz in (0.0, h, -h, 1j * h, -1j * h)}
    lap_e = (u[h] + u[-h] + u[1j * h] + u[-1j * h] - 4.0 * u[0.0]) / h ** 2
    lap_hyp = -((1.0 - abs(x) ** 2) ** 2 / 4.0) * lap_e
    return abs(lap_hyp + lam * (1.0 + lam) * u[0.0])


def kernel_check_Pn(n: int, k: int, samples=(0.0, 0.4, 0.7j)) -> float:
    """max over sample points of |P_{-n}(e^{i k a})(z)|.

    The transform at lambda = -n pairs against P^{1-n}, a trigonometric
    polynomial of degree n-1 in the boundary angle, so modes |k| >= n are
    annihilated and lower modes generically survive.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return max(abs(poisson_helgason(-float(n), FourierDistribution.mode(k), z))
               for z in samples)


def equivariance_residual(lam: complex, omega: FourierDistribution,
                          gamma: MoebiusMap, x: complex) -> float:
    """|P_lambda(omega)(gamma x) - P_lambda(|d gamma|^{-lambda} gamma^* omega)(x)|.

    The transformed density is sampled pointwise (it is generally not a
    trigonometric polynomial).
    """
    lam = complex(lam)
    x = complex(x)
    gx = gamma.act_disk(x)
    if abs(gx) >= 1.0 - 1e-12:
        raise PointOnBoundary("gamma moves x onto the boundary")
    lhs = poisson_helgason(lam, omega, gx)
    alpha, beta = gamma.su11()

    def pushed(ang):
        nu = np.exp(1j * ang)
        gnu = (alpha * nu + beta) / (np.conj(beta) * nu + np.conj(alpha))
        deriv = 1.0 / np.abs(np.conj(beta) * nu + np.conj(alpha)) ** 2
        return np.exp(-lam * np.log(deriv)) * omega(np.angle(gnu))

    rhs = poisson_helgason(lam, pushed, x)
    return abs(lhs - rhs)
