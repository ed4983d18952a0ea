"""Moebius transformations of the Riemann sphere as normalized 2x2 matrices.

Every transformation is stored as a complex matrix of determinant 1; a
matrix and its negative act identically, so equality is always projective:
``min(|M - N|, |M + N|) < 1e-9`` in max-entry norm.  On construction the
matrix is divided by the square root of its determinant whose real part is
non-negative (ties broken toward non-negative imaginary part), which makes
representatives deterministic.

The point at infinity is a first-class value (`INFINITY`), never a large
float: the sphere carries two charts, ``z`` and ``u = 1/z``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTriple, PoleEvaluation, UnsupportedType
from .grouptypes import GroupType

PROJECTIVE_TOL = 1e-9
DEFAULT_ORDER_CAP = 120  # twice the largest finite subgroup order


# ---------------------------------------------------------------------------
# points

@dataclass(frozen=True)
class SpherePoint:
    """A point of the sphere: a finite complex number, or None for infinity."""
    z: complex | None

    @property
    def is_infinity(self) -> bool:
        return self.z is None

    def __str__(self) -> str:
        return "inf" if self.is_infinity else str(self.z)


INFINITY = SpherePoint(None)


def as_sphere_point(value) -> SpherePoint:
    if isinstance(value, SpherePoint):
        return value
    return SpherePoint(complex(value))


@dataclass(frozen=True)
class EuclideanSpherePoint:
    """Point (z, t) on the unit sphere in C x R, |z|^2 + t^2 = 1."""
    z: complex
    t: float

    def __post_init__(self):
        if abs(abs(self.z) ** 2 + self.t ** 2 - 1.0) > 1e-12:
            raise ValueError("point is not on the unit sphere")


def chordal_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Straight-line distance between the points on the embedded unit sphere."""
    a = stereographic_inverse(p)
    b = stereographic_inverse(q)
    return float(np.hypot(abs(a.z - b.z), a.t - b.t))


def stereographic(p: EuclideanSpherePoint) -> SpherePoint:
    """Projection from the north pole: (z, t) -> z / (1 - t)."""
    if p.t >= 1.0 - 1e-15:
        return INFINITY
    return SpherePoint(p.z / (1.0 - p.t))


def stereographic_inverse(q: SpherePoint) -> EuclideanSpherePoint:
    if q.is_infinity:
        return EuclideanSpherePoint(0j, 1.0)
    z = q.z
    r2 = abs(z) ** 2
    return EuclideanSpherePoint(2 * z / (r2 + 1.0), (r2 - 1.0) / (r2 + 1.0))


# ---------------------------------------------------------------------------
# transformations

def _canonical_sqrt(d: complex) -> complex:
    r = cmath.sqrt(d)
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


class MoebiusTransform:
    """z -> (a z + b) / (c z + d) with a d - b c = 1."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) < 1e-14:
            raise ValueError("matrix is singular")
        m = m / _canonical_sqrt(det)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __setattr__(self, name, value):
        raise AttributeError("MoebiusTransform is immutable")

    # entries of the normalized representative
    @property
    def a(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def b(self) -> complex:
        return complex(self.matrix[0, 1])

    @property
    def c(self) -> complex:
        return complex(self.matrix[1, 0])

    @property
    def d(self) -> complex:
        return complex(self.matrix[1, 1])

    @staticmethod
    def identity() -> "MoebiusTransform":
        return MoebiusTransform([[1, 0], [0, 1]])

    @staticmethod
    def scaling(factor: complex) -> "MoebiusTransform":
        """z -> factor * z."""
        if factor == 0:
            raise ValueError("scaling factor must be nonzero")
        return MoebiusTransform([[factor, 0], [0, 1]])

    @staticmethod
    def translation(offset: complex) -> "MoebiusTransform":
        """z -> z + offset."""
        return MoebiusTransform([[1, offset], [0, 1]])

    @staticmethod
    def inversion() -> "MoebiusTransform":
        """z -> 1/z."""
        return MoebiusTransform([[0, 1], [1, 0]])

    def apply(self, point) -> SpherePoint:
        """Total action on the sphere; poles go to infinity."""
        p = as_sphere_point(point)
        if p.is_infinity:
            if self.c == 0:
                return INFINITY
            return SpherePoint(self.a / self.c)
        num = self.a * p.z + self.b
        den = self.c * p.z + self.d
        if den == 0:
            return INFINITY
        w = num / den
        if not (cmath.isfinite(w)):
            return INFINITY
        return SpherePoint(w)

    def __call__(self, point) -> SpherePoint:
        return self.apply(point)

    def compose(self, other: "MoebiusTransform") -> "MoebiusTransform":
        """self ∘ other: apply ``other`` first."""
        return MoebiusTransform(self.matrix @ other.matrix)

    def inverse(self) -> "MoebiusTransform":
        a, b, c, d = self.a, self.b, self.c, self.d
        return MoebiusTransform([[d, -b], [-c, a]])

    def derivative(self, z: complex) -> complex:
        """(d/dz)(az+b)/(cz+d) = 1/(cz+d)^2; sign of the representative cancels."""
        den = self.c * complex(z) + self.d
        if den == 0:
            raise PoleEvaluation(f"derivative at the pole z = {z}")
        return 1.0 / (den * den)

    def projectively_equal(self, other: "MoebiusTransform",
                           tol: float = PROJECTIVE_TOL) -> bool:
        return projective_distance(self, other) < tol

    def is_identity(self, tol: float = PROJECTIVE_TOL) -> bool:
        return self.projectively_equal(MoebiusTransform.identity(), tol)

    def unitarity_defect(self) -> float:
        """Max-entry norm of U^H U - I; phase representatives all agree."""
        u = self.matrix
        return float(np.abs(u.conj().T @ u - np.eye(2)).max())

    def to_entries(self) -> list[list[float]]:
        """Serialize as [[re, im], ...] for (a, b, c, d) of the normalized matrix."""
        return [[float(w.real), float(w.imag)] for w in (self.a, self.b, self.c, self.d)]

    @staticmethod
    def from_entries(entries) -> "MoebiusTransform":
        if len(entries) != 4:
            raise ValueError("expected four [re, im] pairs")
        a, b, c, d = (complex(e[0], e[1]) for e in entries)
        return MoebiusTransform([[a, b], [c, d]])

    def __repr__(self) -> str:
        return (f"MoebiusTransform([[{self.a:.6g}, {self.b:.6g}], "
                f"[{self.c:.6g}, {self.d:.6g}]])")


FLIP = MoebiusTransform.inversion()  # chart transition z -> 1/z


def projective_distance(m: MoebiusTransform, n: MoebiusTransform) -> float:
    diff = min(np.abs(m.matrix - n.matrix).max(), np.abs(m.matrix + n.matrix).max())
    return float(diff)


def compose(m1: MoebiusTransform, m2: MoebiusTransform) -> MoebiusTransform:
    return m1.compose(m2)


def inverse(m: MoebiusTransform) -> MoebiusTransform:
    return m.inverse()


def apply(m: MoebiusTransform, point) -> SpherePoint:
    return m.apply(point)


def derivative(m: MoebiusTransform, z: complex) -> complex:
    return m.derivative(z)


def element_order(m: MoebiusTransform, cap: int = DEFAULT_ORDER_CAP) -> int | None:
    """Smallest n <= cap with m^n projectively the identity, else None."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    ident = MoebiusTransform.identity()
    power = m
    for n in range(1, cap + 1):
        if power.projectively_equal(ident):
            return n
        power = power.compose(m)
    return None


class _AllPoints:
    def __repr__(self):
        return "ALL_POINTS"


ALL_POINTS = _AllPoints()  # fixed-point set of the identity


def fixed_points(m: MoebiusTransform):
    """Fixed points on the sphere: ALL_POINTS for the identity, else 1 or 2 points.

    Finite solutions solve c z^2 + (d - a) z - b = 0; infinity is fixed
    exactly when c = 0.
    """
    if m.is_identity():
        return ALL_POINTS
    a, b, c, d = m.a, m.b, m.c, m.d
    if c == 0:
        if abs(d - a) < 1e-14:
            return (INFINITY,)  # translation: single parabolic point
        return (SpherePoint(b / (d - a)), INFINITY)
    # stable complex quadratic
    bb = d - a
    disc = bb * bb + 4.0 * c * b
    root = cmath.sqrt(disc)
    if abs(bb + root) < abs(bb - root):
        root = -root
    s = -0.5 * (bb + root)
    if abs(s) < 1e-300:
        return (SpherePoint(0j),)
    z1 = s / c
    z2 = -b / s
    if abs(disc) < 1e-14 * max(1.0, abs(bb) ** 2):
        return (SpherePoint((z1 + z2) / 2.0),)
    return (SpherePoint(z1), SpherePoint(z2))


def from_triple(p0, p1, p_inf) -> MoebiusTransform:
    """The unique transformation sending 0, 1, infinity to the given points."""
    pts = [as_sphere_point(p) for p in (p0, p1, p_inf)]
    for i in range(3):
        for j in range(i + 1, 3):
            if pts[i].is_infinity and pts[j].is_infinity:
                raise DegenerateTriple("two target points coincide (infinity)")
            if (not pts[i].is_infinity and not pts[j].is_infinity
                    and pts[i].z == pts[j].z):
                raise DegenerateTriple(f"two target points coincide ({pts[i].z})")
    a, b, c = pts
    if a.is_infinity:
        m = [[c.z, b.z - c.z], [1.0, 0.0]]
    elif b.is_infinity:
        m = [[c.z, -a.z], [1.0, -1.0]]
    elif c.is_infinity:
        m = [[b.z - a.z, a.z], [0.0, 1.0]]
    else:
        m = [[c.z * (b.z - a.z), a.z * (c.z - b.z)],
             [b.z - a.z, c.z - b.z]]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if abs(det) < 1e-14:
        raise DegenerateTriple("target points are numerically indistinct")
    return MoebiusTransform(m)


def standard_generators(t: GroupType, zeta: complex | None = None) -> list[MoebiusTransform]:
    """Rotation-group generators for each type, all projectively unitary.

    The rotation factor defaults to exp(2*pi*i/n) for C_n and D_n and may
    be overridden with any primitive n-th root.  The icosahedral pair uses
    the primitive fifth root delta = exp(2*pi*i/5) together with
    (z + q)/(q z - 1) for q = sqrt(1 - delta - 1/delta), taken on the
    principal branch; its closure has exactly 60 elements (test-verified,
    as are the closures of the other families).
    """
    if t.kind == "cyclic":
        z = zeta if zeta is not None else cmath.exp(2j * cmath.pi / t.n)
        return [MoebiusTransform.scaling(z)]
    if t.kind == "dihedral":
        z = zeta if zeta is not None else cmath.exp(2j * cmath.pi / t.n)
        return [MoebiusTransform.scaling(z), MoebiusTransform.inversion()]
    if t.kind == "A4":
        j = cmath.exp(2j * cmath.pi / 3)
        s2 = cmath.sqrt(2)
        return [MoebiusTransform.scaling(j),
                MoebiusTransform([[1, s2], [s2, -1]])]
    if t.kind == "S4":
        return [MoebiusTransform.scaling(1j),
                MoebiusTransform([[1, 1], [1, -1]])]
    if t.kind == "A5":
        delta = cmath.exp(2j * cmath.pi / 5)
        q = cmath.sqrt(1 - delta - 1 / delta)
        return [MoebiusTransform.scaling(delta),
                MoebiusTransform([[1, q], [q, -1]])]
    raise UnsupportedType(f"no standard generators for type {t}")
