"""Quaternion scalars, imaginary units and spectral spheres.

A quaternion is stored as four float64 components ``w + x e1 + y e2 + z e3``
with the defining relations ``e1^2 = e2^2 = e3^2 = -1`` and
``e1 e2 = e3 = -e2 e1`` (cyclically).  Every value is immutable; arithmetic
returns new objects, so instances can be shared freely between threads.

The conjugation orbit of a non-real quaternion ``q = u + i v`` (``v > 0``,
``i`` a unit imaginary) is the 2-sphere ``{u + i' v : i' unit imaginary}``;
``SpectralSphere`` records such an orbit by its ``(u, v)`` coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "Quaternion",
    "SpectralSphere",
    "ZERO",
    "ONE",
    "E1",
    "E2",
    "E3",
    "imaginary_unit",
    "axially_decompose",
    "same_sphere",
    "conjugate_by",
    "rotation_taking",
]


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    # --- construction helpers -------------------------------------------------
    @staticmethod
    def from_real(value: float) -> "Quaternion":
        return Quaternion(float(value), 0.0, 0.0, 0.0)

    @staticmethod
    def from_axial(u: float, v: float, unit: "Quaternion") -> "Quaternion":
        """The point ``u + unit * v`` of the sphere ``(u, v)``."""
        return Quaternion(u, 0.0, 0.0, 0.0) + unit * v

    @staticmethod
    def from_complex(c: complex, unit: "Quaternion" = None) -> "Quaternion":
        """Map ``a + b*1j`` to ``a + unit*b`` (default unit: e1)."""
        if unit is None:
            unit = E1
        return Quaternion(c.real, 0.0, 0.0, 0.0) + unit * c.imag

    @staticmethod
    def from_json(data) -> "Quaternion":
        if not (isinstance(data, (list, tuple)) and len(data) == 4):
            raise DomainError(f"quaternion JSON must be a 4-element array, got {data!r}")
        return Quaternion(*(float(c) for c in data))

    def to_json(self):
        return [self.w, self.x, self.y, self.z]

    # --- algebra --------------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        a, b = self, _coerce(other)
        return Quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return _coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("quaternion powers are supported for integer exponents only")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        k = exponent
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x
                         + self.y * self.y + self.z * self.z)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def inverse(self) -> "Quaternion":
        n2 = self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2
        if n2 == 0.0:
            raise DomainError("zero quaternion has no inverse")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    # --- structure ------------------------------------------------------------
    @property
    def real(self) -> float:
        return self.w

    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    def imag_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def is_real(self) -> bool:
        return self.x == 0.0 and self.y == 0.0 and self.z == 0.0

    def allclose(self, other, tol: float = 1e-12) -> bool:
        return abs(self - _coerce(other)) <= tol

    def is_unit_imaginary(self, tol: float = 1e-9) -> bool:
        return abs(self.w) <= tol and abs(abs(self) - 1.0) <= tol


def _coerce(value) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(float(value), 0.0, 0.0, 0.0)
    if isinstance(value, complex):
        return Quaternion(value.real, value.imag, 0.0, 0.0)
    raise TypeError(f"cannot interpret {value!r} as a quaternion")


ZERO = Quaternion()
ONE = Quaternion(1.0)
E1 = Quaternion(0.0, 1.0, 0.0, 0.0)
E2 = Quaternion(0.0, 0.0, 1.0, 0.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)


def imaginary_unit(x: float, y: float, z: float) -> Quaternion:
    """Normalized purely imaginary quaternion with the given direction."""
    n = math.sqrt(x * x + y * y + z * z)
    if n == 0.0:
        raise DomainError("imaginary unit needs a nonzero direction")
    return Quaternion(0.0, x / n, y / n, z / n)


def axially_decompose(q: Quaternion):
    """Split ``q = u + i v`` with ``v >= 0``.

    Returns ``(u, v, i)`` where ``i`` is the normalized imaginary part, or
    ``None`` when ``q`` is real (any unit would do; the caller must choose).
    """
    v = q.imag_norm()
    if v == 0.0:
        return q.w, 0.0, None
    return q.w, v, Quaternion(0.0, q.x / v, q.y / v, q.z / v)


def same_sphere(a: Quaternion, b: Quaternion, tol: float) -> bool:
    """Whether ``a`` and ``b`` lie on the same conjugation sphere, up to ``tol``."""
    if tol <= 0:
        raise DomainError("same_sphere needs a positive tolerance")
    return (abs(a.real - b.real) <= tol
            and abs(a.imag_norm() - b.imag_norm()) <= tol)


def conjugate_by(s: Quaternion, h: Quaternion) -> Quaternion:
    """``h^-1 s h``; stays on the sphere of ``s`` for every ``h != 0``."""
    if abs(h) == 0.0:
        raise DomainError("cannot conjugate by zero")
    return h.inverse() * s * h


def rotation_taking(i_from: Quaternion, i_to: Quaternion) -> Quaternion:
    """A unit ``h`` with ``h^-1 i_from h = i_to`` for unit imaginaries."""
    for q, name in ((i_from, "i_from"), (i_to, "i_to")):
        if not q.is_unit_imaginary(1e-9):
            raise DomainError(f"{name} must be a unit imaginary quaternion")
    h = i_from + i_to
    if abs(h) > 1e-9:
        return h * (1.0 / abs(h))
    # antipodal case: any unit imaginary orthogonal to i_from flips its sign
    for cand in (E1, E2, E3):
        dot = i_from.x * cand.x + i_from.y * cand.y + i_from.z * cand.z
        if abs(dot) < 0.9:
            perp = cand - i_from * dot
            return perp * (1.0 / abs(perp))
    raise DomainError("could not build a rotation")  # pragma: no cover


@dataclass(frozen=True)
class SpectralSphere:
    """Conjugation orbit ``{u + i v : i unit imaginary}``; a point when ``v = 0``."""

    u: float
    v: float

    def __post_init__(self):
        if self.v < 0.0:
            raise DomainError(f"sphere needs v >= 0, got v={self.v}")

    @property
    def is_real(self) -> bool:
        return self.v == 0.0

    @property
    def radius(self) -> float:
        """Modulus of the points on the sphere."""
        return math.hypot(self.u, self.v)

    def representative(self, unit: Quaternion = E1) -> Quaternion:
        return Quaternion.from_axial(self.u, self.v, unit)

    def distance(self, other: "SpectralSphere") -> float:
        return math.hypot(self.u - other.u, self.v - other.v)

    def distance_to(self, u: float, v: float) -> float:
        return math.hypot(self.u - u, self.v - abs(v))

    def contains(self, q: Quaternion, tol: float) -> bool:
        return same_sphere(q, self.representative(), tol)

    def to_json(self):
        return {"u": self.u, "v": self.v}

    @staticmethod
    def from_json(data) -> "SpectralSphere":
        return SpectralSphere(float(data["u"]), float(data["v"]))

    @staticmethod
    def of(q: Quaternion) -> "SpectralSphere":
        return SpectralSphere(q.real, q.imag_norm())
