"""PSL(2,R) acting on the hyperbolic plane, and the unit tangent bundle as group elements.

Conventions
-----------
A map is stored as a real matrix [[a, b], [c, d]] with ad - bc = 1, sign
canonicalized so that the first nonzero entry among (a, b, c, d) is positive.
The matrix acts on the upper half-plane by z -> (az+b)/(cz+d); the disk-model
action is obtained by conjugating with the Cayley map z -> (z-i)/(z+i).  Unit
tangent vectors on the disk are encoded as group elements g via
(x, v) = (g(0), g'(0)/2), so the base point is the image of the disk center.

Boundary circle points are stored as angles in [0, 2*pi).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotHyperbolic, PointOnBoundary

_DET_DRIFT = 1e-14
_SIGN_EPS = 1e-12
_PARABOLIC_TOL = 1e-12


def cayley_to_disk(z: complex) -> complex:
    """Half-plane point/boundary point to the disk model, w = (z-i)/(z+i)."""
    if z == math.inf:
        return 1.0 + 0.0j
    return (z - 1j) / (z + 1j)


def cayley_to_halfplane(w: complex) -> complex:
    """Inverse Cayley map, z = i(1+w)/(1-w); returns inf for w = 1."""
    if abs(w - 1.0) < 1e-15:
        return math.inf
    return 1j * (1 + w) / (1 - w)


@dataclass(frozen=True)
class BoundaryPoint:
    """Point exp(i*angle) on the boundary circle of the disk model."""

    angle: float

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle) % (2 * math.pi))

    @property
    def point(self) -> complex:
        return cmath.exp(1j * self.angle)

    @classmethod
    def from_point(cls, w: complex) -> "BoundaryPoint":
        return cls(cmath.phase(w))

    def halfplane(self) -> float:
        """Coordinate on the real line (inf for angle 0)."""
        return cayley_to_halfplane(self.point)


@dataclass(frozen=True)
class MoebiusMap:
    """Element of PSL(2,R) as a unit-determinant matrix modulo sign."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        a, b, c, d = (float(self.a), float(self.b), float(self.c), float(self.d))
        det = a * d - b * c
        # ad - bc cancels catastrophically once entries pass ~1e8; beyond that
        # the determinant of a long word product is not measurable, so leave it.
        noise = 8e-16 * (abs(a * d) + abs(b * c))
        if noise < 1e-3:
            if det <= 0:
                raise ValueError(f"matrix must have positive determinant, got {det}")
            if abs(det - 1.0) > max(_DET_DRIFT, 8 * noise):
                r = math.sqrt(det)
                a, b, c, d = a / r, b / r, c / r, d / r
        for entry in (a, b, c, d):
            if abs(entry) > _SIGN_EPS:
                if entry < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_matrix(cls, m) -> "MoebiusMap":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """Matrix product self*other (apply `other` first)."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __mul__ = compose

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def approx_eq(self, other: "MoebiusMap", tol: float = 1e-12) -> bool:
        return (
            abs(self.a - other.a) <= tol
            and abs(self.b - other.b) <= tol
            and abs(self.c - other.c) <= tol
            and abs(self.d - other.d) <= tol
        )

    def is_identity(self, tol: float = 1e-12) -> bool:
        return self.approx_eq(MoebiusMap.identity(), tol)

    def classify(self) -> str:
        """'identity' | 'elliptic' | 'parabolic' | 'hyperbolic' by |trace|.

        The parabolic band has width 1e-12 around |tr| = 2.
        """
        if self.is_identity():
            return "identity"
        t = abs(self.trace)
        if abs(t - 2.0) <= _PARABOLIC_TOL:
            return "parabolic"
        return "elliptic" if t < 2.0 else "hyperbolic"

    def translation_length(self) -> float:
        """Hyperbolic translation length 2*arccosh(|tr|/2)."""
        if self.classify() != "hyperbolic":
            raise NotHyperbolic(f"translation length undefined for {self.classify()} map")
        return 2.0 * math.acosh(abs(self.trace) / 2.0)

    # -- actions ------------------------------------------------------------

    def su11(self) -> tuple[complex, complex]:
        """Disk-model representative (alpha, beta): w -> (alpha*w+beta)/(conj(beta)*w+conj(alpha))."""
        alpha = complex((self.a + self.d) / 2.0, (self.b - self.c) / 2.0)
        beta = complex((self.a - self.d) / 2.0, -(self.b + self.c) / 2.0)
        return alpha, beta

    def act_disk(self, w: complex) -> complex:
        alpha, beta = self.su11()
        return (alpha * w + beta) / (beta.conjugate() * w + alpha.conjugate())

    def act_halfplane(self, z: complex) -> complex:
        if z == math.inf:
            return math.inf if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return math.inf
        return (self.a * z + self.b) / den

    def act_boundary(self, nu: BoundaryPoint) -> BoundaryPoint:
        return BoundaryPoint.from_point(self.act_disk(nu.point))

    def boundary_derivative(self, nu: BoundaryPoint) -> float:
        """|d(gamma)(nu)| in the Euclidean metric of the boundary circle."""
        alpha, beta = self.su11()
        return 1.0 / abs(beta.conjugate() * nu.point + alpha.conjugate()) ** 2

    def fixed_points(self) -> tuple[BoundaryPoint, BoundaryPoint]:
        """(repelling, attracting) boundary fixed points of a hyperbolic map."""
        if self.classify() != "hyperbolic":
            raise NotHyperbolic("fixed points on the circle require a hyperbolic map")
        alpha, beta = self.su11()
        # conj(beta) w^2 + (conj(alpha) - alpha) w - beta = 0
        disc = math.sqrt((self.trace / 2.0) ** 2 - 1.0)
        w1 = (1j * alpha.imag + disc) / beta.conjugate()
        w2 = (1j * alpha.imag - disc) / beta.conjugate()
        p1, p2 = BoundaryPoint.from_point(w1), BoundaryPoint.from_point(w2)
        if self.boundary_derivative(p1) < 1.0:
            return p2, p1
        return p1, p2

    def fixed_points_halfplane(self) -> tuple[float, float]:
        """(repelling, attracting) fixed points on the real line."""
        if self.classify() != "hyperbolic":
            raise NotHyperbolic("fixed points on the line require a hyperbolic map")
        if abs(self.c) < 1e-300:
            x = self.b / (self.d - self.a)  # the finite one; inf is the other
            raise NotHyperbolic(f"map fixes inf (finite fixed point {x}); conjugate first")
        disc = math.sqrt((self.a - self.d) ** 2 + 4.0 * self.b * self.c)
        x1 = ((self.a - self.d) + disc) / (2.0 * self.c)
        x2 = ((self.a - self.d) - disc) / (2.0 * self.c)
        d1 = 1.0 / (self.c * x1 + self.d) ** 2
        if abs(d1) < 1.0:
            return x2, x1
        return x1, x2


# -- Lie algebra ------------------------------------------------------------

GEN_X = np.array([[0.5, 0.0], [0.0, -0.5]])
GEN_U_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]])
GEN_U_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]])
GEN_X_PERP = np.array([[0.0, 0.5], [0.5, 0.0]])
GEN_V = np.array([[0.0, 0.5], [-0.5, 0.0]])

GENERATORS = {
    "X": GEN_X,
    "U+": GEN_U_PLUS,
    "U-": GEN_U_MINUS,
    "X_perp": GEN_X_PERP,
    "V": GEN_V,
}


def exp_sl2(mat, t: float) -> MoebiusMap:
    """exp(t*A) for traceless real A, in closed form.

    For A = [[p, q], [r, -p]] the eigenvalue parameter is mu^2 = p^2 + qr and
    exp(tA) = cosh(t*mu) I + sinh(t*mu)/mu A, with the circular branch when
    mu^2 < 0 and the linear limit at mu = 0.
    """
    A = np.asarray(mat, dtype=float)
    if abs(A[0, 0] + A[1, 1]) > 1e-14:
        raise ValueError("generator must be traceless")
    mu2 = A[0, 0] ** 2 + A[0, 1] * A[1, 0]
    if abs(mu2) < 1e-30:
        M = np.eye(2) + t * A
    elif mu2 > 0:
        mu = math.sqrt(mu2)
        M = math.cosh(t * mu) * np.eye(2) + (math.sinh(t * mu) / mu) * A
    else:
        nu = math.sqrt(-mu2)
        M = math.cos(t * nu) * np.eye(2) + (math.sin(t * nu) / nu) * A
    return MoebiusMap.from_matrix(M)


def _resolve_generator(generator) -> np.ndarray:
    if isinstance(generator, str):
        return GENERATORS[generator]
    return np.asarray(generator, dtype=float)


# -- unit tangent bundle ----------------------------------------------------

@dataclass(frozen=True)
class UnitTangentPoint:
    """Unit tangent vector on the disk, represented by the group element moving
    the reference vector (0, d/dx / 2) onto it."""

    g: MoebiusMap

    @classmethod
    def origin(cls) -> "UnitTangentPoint":
        return cls(MoebiusMap.identity())

    @classmethod
    def from_coords(cls, z: complex, theta: float) -> "UnitTangentPoint":
        """Point z inside the disk with direction angle theta (Euclidean)."""
        if abs(z) >= 1.0:
            raise ValueError("base point must lie strictly inside the disk")
        t = 1.0 / math.sqrt(1.0 - abs(z) ** 2)
        alpha = cmath.exp(1j * theta / 2.0) * t
        beta = z * alpha.conjugate()
        a = alpha.real + beta.real
        d = alpha.real - beta.real
        b = alpha.imag - beta.imag
        c = -(alpha.imag + beta.imag)
        return cls(MoebiusMap(a, b, c, d))

    @property
    def base_point(self) -> complex:
        alpha, beta = self.g.su11()
        return beta / alpha.conjugate()

    @property
    def direction_angle(self) -> float:
        alpha, _ = self.g.su11()
        return cmath.phase(alpha * alpha / abs(alpha) ** 2) % (2 * math.pi)

    def coords(self) -> tuple[complex, float]:
        return self.base_point, self.direction_angle

    def flow(self, generator, t: float) -> "UnitTangentPoint":
        """Right multiplication by exp(t*A); generator is a name from GENERATORS
        or a traceless 2x2 matrix.  'X' is the geodesic flow."""
        return UnitTangentPoint(self.g.compose(exp_sl2(_resolve_generator(generator), t)))

    def translate(self, gamma: MoebiusMap) -> "UnitTangentPoint":
        """Isometry action (left multiplication)."""
        return UnitTangentPoint(gamma.compose(self.g))


def endpoint_maps(y: UnitTangentPoint) -> tuple[BoundaryPoint, BoundaryPoint]:
    """Backward/forward geodesic endpoints (B-, B+) of the tangent vector y.

    B-(z, e^{i theta}) = (-e^{i theta} + z)/(-e^{i theta} conj(z) + 1),
    B+(z, e^{i theta}) = ( e^{i theta} + z)/( e^{i theta} conj(z) + 1).
    """
    z, theta = y.coords()
    e = cmath.exp(1j * theta)
    bm = (-e + z) / (-e * z.conjugate() + 1)
    bp = (e + z) / (e * z.conjugate() + 1)
    return BoundaryPoint.from_point(bm), BoundaryPoint.from_point(bp)


def b_z_inverse(z: complex, nu: BoundaryPoint) -> float:
    """Invert e^{i theta} -> B-(z, e^{i theta}) at fixed z; returns theta."""
    e = nu.point
    w = -e * (z * e.conjugate() - 1.0) / (z.conjugate() * e - 1.0)
    return cmath.phase(w) % (2 * math.pi)


def poisson_kernel(x: complex, nu) -> float:
    """P(x, nu) = (1 - |x|^2)/|x - nu|^2 for x in the disk, nu on the circle."""
    if abs(x) >= 1.0 - 1e-12:
        raise PointOnBoundary(f"|x| = {abs(x)} too close to the circle")
    p = nu.point if isinstance(nu, BoundaryPoint) else cmath.exp(1j * float(nu))
    return (1.0 - abs(x) ** 2) / abs(x - p) ** 2


def phi_pm(y: UnitTangentPoint) -> tuple[float, float]:
    """(Phi-, Phi+): Poisson kernel at the geodesic endpoints; satisfies
    Phi+-(flow_t y) = e^{+-t} Phi+-(y)."""
    z, _ = y.coords()
    bm, bp = endpoint_maps(y)
    return poisson_kernel(z, bm), poisson_kernel(z, bp)


def lie_bracket(A, B) -> np.ndarray:
    A = _resolve_generator(A)
    B = _resolve_generator(B)
    return A @ B - B @ A
