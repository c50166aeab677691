"""Complex log-gamma via the Lanczos approximation (g = 7, 9 coefficients),
with the reflection formula left of Re(z) = 1/2."""

from __future__ import annotations

import cmath
import math

_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def loggamma(z: complex) -> complex:
    """log Gamma(z); principal on the right half-plane, continued by
    reflection on the left.  Poles at 0, -1, -2, ... raise ValueError."""
    z = complex(z)
    if z.imag == 0.0 and z.real == round(z.real) and z.real <= 0.0:
        raise ValueError(f"log-gamma pole at {z}")
    if z.real < 0.5:
        # log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z)
        return cmath.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - loggamma(1.0 - z)
    w = z - 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc += c / (w + i)
    t = w + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (w + 0.5) * cmath.log(t) - t + cmath.log(acc)


def gamma(z: complex) -> complex:
    return cmath.exp(loggamma(z))


def gamma_ratio(num: complex, den: complex) -> complex:
    """Gamma(num)/Gamma(den), evaluated in log space to dodge overflow."""
    return cmath.exp(loggamma(num) - loggamma(den))


def reflection_residual(z: complex) -> float:
    """|Gamma(z) Gamma(1-z) sin(pi z)/pi - 1|: zero in exact arithmetic."""
    return abs(gamma(z) * gamma(1.0 - z) * cmath.sin(math.pi * z) / math.pi - 1.0)
