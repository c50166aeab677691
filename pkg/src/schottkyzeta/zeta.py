"""Euler-product evaluation of the Selberg and Ruelle zeta functions.

Everything is accumulated in log space and exponentiated once.  Inside the
convergence half-plane every factor 1 - e^{-(s+k)l} lies in the right
half-plane, so the principal logarithm is safe; outside it (the products
diverge, but partial products are still well-defined numbers) the factor
phase is tracked continuously downward in k.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SpectrumEmpty
from .schottky import LengthSpectrum

DEFAULT_K_MAX = 64
DEFAULT_P_MAX = 48


@dataclass(frozen=True)
class ZetaEvaluation:
    """Value of a zeta function at one complex point, with truncation metadata."""

    s: complex
    log_value: complex
    value: complex
    tail_bound: float
    method: str


def _safe_exp(w: complex) -> complex:
    if w.real > 700.0:
        return cmath.rect(math.inf, cmath.phase(cmath.exp(1j * w.imag)))
    return cmath.exp(w)


def _log_factors(s: complex, ell: float, k_max: int) -> complex:
    """sum_{k=0}^{k_max} log(1 - e^{-(s+k) l}) with phase continuity in k."""
    k = np.arange(k_max + 1)
    x = np.exp(-(s + k) * ell)
    factors = 1.0 - x
    logs = np.log(factors)  # principal branch
    inside = np.abs(x) < 1.0
    if not np.all(inside):
        # walk down from the last safely-principal index, unwrapping phases
        args = np.angle(factors)
        start = int(np.argmax(inside)) if np.any(inside) else k_max
        for i in range(start - 1, -1, -1):
            step = args[i] - args[i + 1]
            step -= 2 * math.pi * round(step / (2 * math.pi))
            args[i] = args[i + 1] + step
        logs = np.log(np.abs(factors)) + 1j * args
    return complex(np.sum(logs))


def selberg_zeta(s: complex, spectrum: LengthSpectrum,
                 k_max: int = DEFAULT_K_MAX) -> ZetaEvaluation:
    """Partial Euler product of the Selberg zeta function over the spectrum.

    log Z_S(s) = sum_geodesics sum_{k=0}^{k_max} log(1 - e^{-(s+k) l}).
    The tail bound combines the final word-length shell and the k > k_max
    remainder; it is an estimate, not a rigorous bound.
    """
    if len(spectrum) == 0:
        raise SpectrumEmpty("length spectrum has no geodesics")
    s = complex(s)
    if s.real <= 0.0:
        warnings.warn(f"Euler product evaluated at Re(s) = {s.real} <= 0; "
                      "partial product only", stacklevel=2)
    log_value = sum(_log_factors(s, g.length, k_max) for g in spectrum.geodesics)
    tail = _tail_bound(s, spectrum, k_max, ruelle=False)
    return ZetaEvaluation(s, log_value, _safe_exp(log_value), tail, "euler-product")


def ruelle_zeta(lam: complex, spectrum: LengthSpectrum,
                k_max: int = DEFAULT_K_MAX) -> ZetaEvaluation:
    """Partial Euler product of the flow zeta function,
    log Z_X(lambda) = sum_geodesics sum_{m=1}^{k_max} m log(1 - e^{-(lambda+m) l})."""
    if len(spectrum) == 0:
        raise SpectrumEmpty("length spectrum has no geodesics")
    lam = complex(lam)
    if lam.real <= 0.0:
        warnings.warn(f"Euler product evaluated at Re(lambda) = {lam.real} <= 0; "
                      "partial product only", stacklevel=2)
    m = np.arange(1, k_max + 1)
    log_value = 0.0 + 0.0j
    for g in spectrum.geodesics:
        x = np.exp(-(lam + m) * g.length)
        log_value += complex(np.sum(m * np.log1p(-x)))
    tail = _tail_bound(lam, spectrum, k_max, ruelle=True)
    return ZetaEvaluation(lam, log_value, _safe_exp(log_value), tail, "euler-product")


def _tail_bound(s: complex, spectrum: LengthSpectrum, k_max: int, ruelle: bool) -> float:
    lengths = spectrum.lengths
    word_lengths = np.array([g.word_length for g in spectrum.geodesics])
    last_shell = lengths[word_lengths == word_lengths.max()]
    shell = 0.0
    for ell in last_shell:
        q = math.exp(-s.real * ell)
        r = math.exp(-ell)
        if ruelle:
            k = np.arange(1, k_max + 1)
            shell += q * float(np.sum(k * r ** k))
        else:
            shell += q * (1 - r ** (k_max + 1)) / (1 - r)
    ktail = 0.0
    for ell in lengths:
        r = math.exp(-ell)
        x = math.exp(-(s.real + k_max + 1) * ell)
        if ruelle:
            # sum_{m > k_max} m x_m <= x * ((k_max+1)(1-r) + r)/(1-r)^2
            ktail += x * ((k_max + 1) * (1 - r) + r) / (1 - r) ** 2
        else:
            ktail += x / (1 - r)
    return shell + ktail


def poincare_identity_check(ell: float, k: int, p_max: int) -> float:
    """Residual of the stable-determinant geometric expansion,
    |e^{-k l/2}(1-e^{-k l})^{-1} - sum_{p<=p_max} e^{-k l (1/2+p)}|.

    The true remainder sits far below double rounding noise, so the two sides
    are evaluated in 60-digit arithmetic.
    """
    if ell <= 0 or k < 1:
        raise ValueError("need ell > 0 and k >= 1")
    import mpmath
    with mpmath.workdps(60):
        x = mpmath.e ** (-k * mpmath.mpf(ell))
        lhs = mpmath.sqrt(x) / (1 - x)
        rhs = mpmath.fsum(x ** (mpmath.mpf(1) / 2 + p) for p in range(p_max + 1))
        return float(abs(lhs - rhs))


def poincare_identity_bound(ell: float, k: int, p_max: int) -> float:
    """Geometric remainder bound e^{-k l (3/2 + p_max)}/(1 - e^{-k l});
    the expansion meets it with equality."""
    return math.exp(-k * ell * (1.5 + p_max)) / (1 - math.exp(-k * ell))


def factorization_check(lam: complex, spectrum: LengthSpectrum,
                        p_max: int = DEFAULT_P_MAX,
                        k_max: int = DEFAULT_K_MAX) -> float:
    """|log Z_X(lambda) - sum_{p=1}^{p_max} log Z_S(lambda + p)|."""
    zx = ruelle_zeta(lam, spectrum, k_max)
    acc = 0.0 + 0.0j
    for p in range(1, p_max + 1):
        acc += selberg_zeta(lam + p, spectrum, k_max).log_value
    return abs(zx.log_value - acc)


def quotient_residual(lam: complex, spectrum: LengthSpectrum,
                      k_max: int = DEFAULT_K_MAX) -> float:
    """|log Z_S(lambda) - (log Z_X(lambda-1) - log Z_X(lambda))|.

    Needs Re(lambda) - 1 inside the convergence region to be meaningful.
    """
    zs = selberg_zeta(lam, spectrum, k_max)
    za = ruelle_zeta(lam - 1, spectrum, k_max)
    zb = ruelle_zeta(lam, spectrum, k_max)
    return abs(zs.log_value - (za.log_value - zb.log_value))
