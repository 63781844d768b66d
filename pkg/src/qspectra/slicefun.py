"""Intrinsic slice functions: construction, evaluation, derivatives, Cauchy formula.

An intrinsic slice function has the form ``f(q) = alpha(u, v) + i_q beta(u, v)``
for ``q = u + i_q v`` with real-valued ``alpha`` (even in v) and ``beta`` (odd in
v, so ``beta(u, 0) = 0``).  Equivalently ``f(conj q) = conj f(q)`` and every
complex plane through the reals is mapped into itself.  Such a function is
determined by its restriction to the closed upper half of the reference plane,
its *stem* ``z -> f(z)`` with ``stem(real) real``; all families below are
driven by their stems.

Holomorphic families (polynomials and rational functions with real
coefficients, scaled exponentials, user stems satisfying the Cauchy-Riemann
equations) additionally support the slice derivative, which coincides with
the derivative of the stem.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    FunctionSpecError,
    NumericalError,
    SingularityError,
    UnsupportedError,
)
from .quaternion import E1, Quaternion, axially_decompose, same_sphere

__all__ = [
    "AxialDomain",
    "IntrinsicSliceFunction",
    "PolynomialFunction",
    "RationalFunction",
    "ExponentialFunction",
    "StemFunction",
    "MeasurableSliceFunction",
    "product",
    "compose",
    "real_linear_combination",
    "evaluate",
    "eval_via_representation",
    "cauchy_kernel_left",
    "cauchy_kernel_right",
    "cauchy_sweep",
    "cauchy_reconstruct",
    "parse_function_spec",
]

_FD_STEP = 1e-6  # central-difference step for the approximate derivative fallback


class AxialDomain:
    """Finite union of axially symmetric discs/annuli in (u, v) coordinates.

    Each item is ``(center, r_in, r_out)`` with a real center: the set of
    quaternions ``q`` with ``r_in <= |q - center| <= r_out``.  Used both for
    membership tests of evaluation points and to certify that quadrature
    circles stay inside the region where a stem is defined.
    """

    def __init__(self, items):
        self.items = []
        for center, r_in, r_out in items:
            if r_in < 0 or r_out < r_in:
                raise DomainError(f"bad annulus radii ({r_in}, {r_out})")
            self.items.append((float(center), float(r_in), float(r_out)))

    @staticmethod
    def disc(center: float, radius: float) -> "AxialDomain":
        return AxialDomain([(center, 0.0, radius)])

    def contains_uv(self, u: float, v: float) -> bool:
        r = math.hypot(u, abs(v))
        for center, r_in, r_out in self.items:
            if r_in <= math.hypot(u - center, v) <= r_out:
                return True
        return False

    def contains_point(self, q: Quaternion) -> bool:
        return self.contains_uv(q.real, q.imag_norm())

    def contains_complex_disc(self, center: complex, radius: float) -> bool:
        """Whether the full complex disc fits inside one annulus item."""
        for c, r_in, r_out in self.items:
            d = abs(center - c)
            if d - radius >= r_in and d + radius <= r_out:
                return True
        return False


class IntrinsicSliceFunction:
    """Base class; subclasses provide ``stem`` and (if holomorphic) its derivative."""

    label = "f"
    is_holomorphic = True
    approximate_derivative = False
    domain: AxialDomain | None = None

    # -- family interface ------------------------------------------------------
    def stem(self, z: complex) -> complex:
        raise NotImplementedError

    def stem_derivative(self, z: complex) -> complex:
        raise UnsupportedError(f"{self.label} has no stem derivative")

    def slice_derivative(self) -> "IntrinsicSliceFunction":
        raise UnsupportedError(f"{self.label} has no slice derivative")

    # -- generic behaviour -----------------------------------------------------
    def alpha_beta(self, u: float, v: float):
        """Component values at ``(u, v)``; ``beta`` is pinned to 0 on the reals."""
        if v < 0:
            raise DomainError("alpha_beta expects v >= 0")
        w = self.stem(complex(u, v))
        if v == 0.0:
            if abs(w.imag) > 1e-12 * (1.0 + abs(w)):
                raise DomainError(
                    f"{self.label} is not intrinsic: stem({u}) = {w} is not real"
                )
            return w.real, 0.0
        return w.real, w.imag

    def __call__(self, x: Quaternion) -> Quaternion:
        return evaluate(self, x)

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class PolynomialFunction(IntrinsicSliceFunction):
    """Real-coefficient polynomial, coefficients in ascending order."""

    def __init__(self, coeffs):
        coeffs = [float(c) for c in coeffs]
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        if not coeffs:
            coeffs = [0.0]
        self.coeffs = coeffs
        self.label = "poly:" + ",".join(repr(c) for c in coeffs)

    def stem(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def stem_derivative(self, z: complex) -> complex:
        acc = 0j
        for k in range(len(self.coeffs) - 1, 0, -1):
            acc = acc * z + k * self.coeffs[k]
        return acc

    def slice_derivative(self) -> "PolynomialFunction":
        return PolynomialFunction([k * c for k, c in enumerate(self.coeffs)][1:] or [0.0])


def _polymul(p, q):
    return list(np.polynomial.polynomial.polymul(p, q))


def _polyder(p):
    out = list(np.polynomial.polynomial.polyder(p))
    return out or [0.0]


class RationalFunction(IntrinsicSliceFunction):
    """Quotient of real-coefficient polynomials; poles excluded from the domain."""

    def __init__(self, num, den):
        self.num = PolynomialFunction(num)
        self.den = PolynomialFunction(den)
        if self.den.coeffs == [0.0]:
            raise DomainError("rational function needs a nonzero denominator")
        self.label = (
            "rat:" + ",".join(repr(c) for c in self.num.coeffs)
            + "/" + ",".join(repr(c) for c in self.den.coeffs)
        )

    def poles(self):
        """Pole spheres as (u, v) pairs with v >= 0."""
        if len(self.den.coeffs) == 1:
            return []
        roots = np.polynomial.polynomial.polyroots(self.den.coeffs)
        return [(float(r.real), abs(float(r.imag))) for r in roots]

    def stem(self, z: complex) -> complex:
        d = self.den.stem(z)
        if d == 0:
            raise SingularityError(f"{self.label} has a pole at {z}")
        return self.num.stem(z) / d

    def stem_derivative(self, z: complex) -> complex:
        d = self.den.stem(z)
        if d == 0:
            raise SingularityError(f"{self.label} has a pole at {z}")
        return (self.num.stem_derivative(z) * d - self.num.stem(z)
                * self.den.stem_derivative(z)) / (d * d)

    def slice_derivative(self) -> "RationalFunction":
        p, q = self.num.coeffs, self.den.coeffs
        num = np.polynomial.polynomial.polysub(
            _polymul(_polyder(p), q), _polymul(p, _polyder(q)))
        return RationalFunction(list(num), _polymul(q, q))

    def alpha_beta(self, u, v):
        for pu, pv in self.poles():
            if math.hypot(u - pu, v - pv) == 0.0:
                raise DomainError(f"{self.label}: point ({u}, {v}) is a pole")
        return super().alpha_beta(u, v)


class ExponentialFunction(IntrinsicSliceFunction):
    """``amp * exp(scale * s)`` with real amplitude and scale."""

    def __init__(self, scale: float = 1.0, amp: float = 1.0):
        self.scale = float(scale)
        self.amp = float(amp)
        self.label = f"exp:{self.scale}" if amp == 1.0 else f"{amp}*exp:{self.scale}"

    def stem(self, z: complex) -> complex:
        return self.amp * cmath.exp(self.scale * z)

    def stem_derivative(self, z: complex) -> complex:
        return self.amp * self.scale * cmath.exp(self.scale * z)

    def slice_derivative(self) -> "ExponentialFunction":
        return ExponentialFunction(self.scale, self.amp * self.scale)


class StemFunction(IntrinsicSliceFunction):
    """Intrinsic function given by a user stem on the closed upper half plane.

    ``derivative`` may be a callable (exact), a sequence of callables for the
    chain of higher derivatives, or ``None``.  Without an exact derivative,
    ``slice_derivative`` falls back to central finite differences and the
    result is flagged ``approximate_derivative``.
    """

    def __init__(self, stem, derivative=None, domain=None, label="stem",
                 holomorphic=True, approximate=False, validate=True):
        self._stem = stem
        if callable(derivative):
            derivative = (derivative,)
        self._derivatives = tuple(derivative) if derivative else ()
        self.domain = domain
        self.label = label
        self.is_holomorphic = holomorphic
        self.approximate_derivative = approximate
        if validate:
            self._check_real_axis()

    def _check_real_axis(self):
        for u in (0.0, 0.5, -1.0, 2.0):
            if self.domain is not None and not self.domain.contains_uv(u, 0.0):
                continue
            try:
                w = self._stem(complex(u, 0.0))
            except (SingularityError, DomainError, ValueError, ZeroDivisionError):
                continue
            if abs(w.imag) > 1e-10 * (1.0 + abs(w)):
                raise DomainError(
                    f"stem is not intrinsic: value at {u} is {w}, not real"
                )

    def stem(self, z: complex) -> complex:
        return complex(self._stem(z))

    def stem_derivative(self, z: complex) -> complex:
        if self._derivatives:
            return complex(self._derivatives[0](z))
        h = _FD_STEP
        return (self.stem(z + h) - self.stem(z - h)) / (2.0 * h)

    def slice_derivative(self) -> "StemFunction":
        if not self.is_holomorphic:
            raise UnsupportedError(f"{self.label} is not slice hyperholomorphic")
        if self._derivatives:
            return StemFunction(
                self._derivatives[0], self._derivatives[1:] or None,
                domain=self.domain, label=self.label + "'",
                approximate=self.approximate_derivative, validate=False,
            )
        f = self.stem
        return StemFunction(
            lambda z: (f(z + _FD_STEP) - f(z - _FD_STEP)) / (2.0 * _FD_STEP),
            domain=self.domain, label=self.label + "' (fd)",
            approximate=True, validate=False,
        )


class MeasurableSliceFunction(IntrinsicSliceFunction):
    """Bounded measurable intrinsic slice function given by its components.

    ``alpha`` and ``beta`` are real-valued callables of ``(u, v >= 0)``;
    ``beta`` must vanish on the real axis (checked, not repaired).  No slice
    derivative exists.
    """

    is_holomorphic = False

    def __init__(self, alpha, beta, label="measurable"):
        self._alpha = alpha
        self._beta = beta
        self.label = label
        for u in (0.0, 1.0, -0.75):
            if self._beta(u, 0.0) != 0.0:
                raise DomainError(
                    f"{label}: beta({u}, 0) != 0; not an intrinsic slice function"
                )

    def stem(self, z: complex) -> complex:
        return complex(self._alpha(z.real, z.imag), self._beta(z.real, z.imag))

    def alpha_beta(self, u, v):
        if v < 0:
            raise DomainError("alpha_beta expects v >= 0")
        a, b = float(self._alpha(u, v)), float(self._beta(u, v))
        if v == 0.0 and b != 0.0:
            raise DomainError(f"{self.label}: beta({u}, 0) != 0")
        return a, b

    def slice_derivative(self):
        raise UnsupportedError("measurable slice functions have no slice derivative")


# --- combinators -----------------------------------------------------------------


def _merge_domains(f, g):
    if f.domain is None:
        return g.domain
    if g.domain is None:
        return f.domain
    return _IntersectionDomain(f.domain, g.domain)


class _IntersectionDomain:
    def __init__(self, a, b):
        self.a, self.b = a, b

    def contains_uv(self, u, v):
        return self.a.contains_uv(u, v) and self.b.contains_uv(u, v)

    def contains_point(self, q):
        return self.a.contains_point(q) and self.b.contains_point(q)

    def contains_complex_disc(self, center, radius):
        return (self.a.contains_complex_disc(center, radius)
                and self.b.contains_complex_disc(center, radius))


def product(f: IntrinsicSliceFunction, g: IntrinsicSliceFunction) -> IntrinsicSliceFunction:
    """Pointwise product; intrinsic slice functions are closed under it."""
    if isinstance(f, PolynomialFunction) and isinstance(g, PolynomialFunction):
        return PolynomialFunction(_polymul(f.coeffs, g.coeffs))
    return StemFunction(
        lambda z: f.stem(z) * g.stem(z),
        derivative=lambda z: f.stem_derivative(z) * g.stem(z) + f.stem(z) * g.stem_derivative(z),
        domain=_merge_domains(f, g),
        label=f"({f.label})*({g.label})",
        holomorphic=f.is_holomorphic and g.is_holomorphic,
        approximate=f.approximate_derivative or g.approximate_derivative,
        validate=False,
    )


def real_linear_combination(a: float, f, g) -> IntrinsicSliceFunction:
    """``a*f + g`` with real ``a``."""
    return StemFunction(
        lambda z: a * f.stem(z) + g.stem(z),
        derivative=lambda z: a * f.stem_derivative(z) + g.stem_derivative(z),
        domain=_merge_domains(f, g),
        label=f"{a}*({f.label})+({g.label})",
        holomorphic=f.is_holomorphic and g.is_holomorphic,
        approximate=f.approximate_derivative or g.approximate_derivative,
        validate=False,
    )


def compose(g: IntrinsicSliceFunction, f: IntrinsicSliceFunction) -> IntrinsicSliceFunction:
    """``g o f``; intrinsic again since stems map the half plane chart to itself."""
    return StemFunction(
        lambda z: g.stem(f.stem(z)),
        derivative=lambda z: g.stem_derivative(f.stem(z)) * f.stem_derivative(z),
        domain=f.domain,
        label=f"({g.label})o({f.label})",
        holomorphic=f.is_holomorphic and g.is_holomorphic,
        approximate=f.approximate_derivative or g.approximate_derivative,
        validate=False,
    )


# --- evaluation --------------------------------------------------------------------


def evaluate(f: IntrinsicSliceFunction, x: Quaternion) -> Quaternion:
    """``f(x) = alpha(u, v) + i_x beta(u, v)``; real input gives real output."""
    u, v, unit = axially_decompose(x)
    if f.domain is not None and not f.domain.contains_uv(u, v):
        raise DomainError(f"{f.label}: {x} outside the domain of definition")
    a, b = f.alpha_beta(u, v)
    if unit is None:
        return Quaternion.from_real(a)
    return Quaternion.from_real(a) + unit * b


def eval_via_representation(f: IntrinsicSliceFunction, x: Quaternion,
                            unit: Quaternion) -> Quaternion:
    """Recover ``f(x)`` from the two values on the plane of ``unit``.

    For ``x = u + i_x v`` and ``x_i = u + unit*v``:
    ``f(x) = (1 - i_x unit) f(x_i) / 2 + (1 + i_x unit) f(conj x_i) / 2``.
    """
    u, v, ix = axially_decompose(x)
    xi = Quaternion.from_axial(u, v, unit)
    f1 = evaluate(f, xi)
    f2 = evaluate(f, xi.conjugate())
    if ix is None:
        ix = Quaternion()  # real point: the two halves already average to f(x)
    one = Quaternion.from_real(1.0)
    return ((one - ix * unit) * f1) * 0.5 + ((one + ix * unit) * f2) * 0.5


# --- scalar Cauchy machinery --------------------------------------------------------


def cauchy_kernel_left(s: Quaternion, x: Quaternion) -> Quaternion:
    """Left slice hyperholomorphic Cauchy kernel
    ``(x^2 - 2 Re(s) x + |s|^2)^-1 (conj(s) - x)``; reduces to ``(s-x)^-1``
    when ``s`` and ``x`` commute."""
    if same_sphere(s, x, 1e-14 * (1.0 + abs(s) + abs(x))):
        raise SingularityError(f"x={x} lies on the sphere of s={s}")
    q = x * x - x * (2.0 * s.real) + Quaternion.from_real(abs(s) ** 2)
    return q.inverse() * (s.conjugate() - x)


def cauchy_kernel_right(s: Quaternion, x: Quaternion) -> Quaternion:
    """Right kernel ``(conj(s) - x)(x^2 - 2 Re(s) x + |s|^2)^-1``."""
    if same_sphere(s, x, 1e-14 * (1.0 + abs(s) + abs(x))):
        raise SingularityError(f"x={x} lies on the sphere of s={s}")
    q = x * x - x * (2.0 * s.real) + Quaternion.from_real(abs(s) ** 2)
    return (s.conjugate() - x) * q.inverse()


def _kernel_times_weights(x: Quaternion, unit, a, b, weights):
    """Vectorized sum of S_L^-1(s_k, x) * c_k over contour nodes.

    Nodes are ``s_k = a_k + unit b_k``; ``weights`` are complex numbers in the
    same plane (already containing ``ds * (-unit) * f(s) / (2 pi)``).  The
    real-coefficient factor ``x^2 - 2 a_k x + (a_k^2+b_k^2)`` lies in the plane
    of ``x``, so its inversion is done with complex arithmetic there.
    """
    u, v, ix = axially_decompose(x)
    if ix is None:
        ix = E1
    zeta = complex(u, v)
    denom = zeta * zeta - 2.0 * a * zeta + (a * a + b * b)
    if np.any(np.abs(denom) < 1e-280):
        raise SingularityError("evaluation point meets the contour sphere")
    inv = 1.0 / denom  # lives in the plane of x
    # quaternion arrays (k, 4)
    ux, uy, uz = ix.x, ix.y, ix.z
    inv_q = np.stack([inv.real, inv.imag * ux, inv.imag * uy, inv.imag * uz], axis=-1)
    # conj(s_k) - x
    cs = np.stack(
        [a - x.w, -b * unit.x - x.x, -b * unit.y - x.y, -b * unit.z - x.z], axis=-1
    )
    from .qlinalg import _hamilton  # local import to avoid a cycle at import time

    kern = _hamilton(inv_q, cs)
    w_q = np.stack(
        [weights.real, weights.imag * unit.x, weights.imag * unit.y,
         weights.imag * unit.z], axis=-1
    )
    total = _hamilton(kern, w_q).sum(axis=0)
    return Quaternion(*total)


def cauchy_sweep(f: IntrinsicSliceFunction, x: Quaternion, contour,
                 unit: Quaternion = E1, nodes: int = 256) -> Quaternion:
    """Single fixed-node trapezoidal sweep of the slice Cauchy integral."""
    total = Quaternion()
    for a, b, w in contour.node_arrays(nodes):
        fs = np.array([f.stem(complex(aa, bb)) for aa, bb in zip(a, b)])
        weights = w * (-1j) * fs / (2.0 * math.pi)
        total = total + _kernel_times_weights(x, unit, a, b, weights)
    return total


def cauchy_reconstruct(f: IntrinsicSliceFunction, x: Quaternion, contour,
                       unit: Quaternion = E1, nodes: int = 256,
                       tol: float = 1e-12, cap: int = 4096) -> Quaternion:
    """Reproduce ``f(x)`` from the slice Cauchy integral over ``contour``.

    ``contour`` is a conjugation-symmetric ContourSpec whose circles are read
    in the plane of ``unit``; the trace of ``x`` must lie strictly inside.
    The trapezoidal node count doubles until two sweeps agree to ``tol``.
    """
    u, v, _ = axially_decompose(x)
    zeta = complex(u, v)
    dist = min(contour.min_distance(zeta), contour.min_distance(zeta.conjugate()))
    if dist < 1e-12:
        raise SingularityError(f"x={x} lies on the contour")
    if not (contour.encloses(zeta) and contour.encloses(zeta.conjugate())):
        raise DomainError(f"x={x} is not inside the contour")

    prev = None
    while nodes <= cap:
        total = cauchy_sweep(f, x, contour, unit, nodes)
        if prev is not None and abs(total - prev) <= tol * (1.0 + abs(total)):
            return total
        prev = total
        nodes *= 2
    raise NumericalError(
        f"Cauchy reconstruction did not converge within {cap} nodes "
        f"(last change {abs(total - prev):.3e})"
    )


# --- command line mini language -----------------------------------------------------


def parse_function_spec(spec: str) -> IntrinsicSliceFunction:
    """Parse ``poly:1,0,2``, ``exp``, ``exp:0.5`` or ``rat:<num>/<den>``."""
    spec = spec.strip()
    try:
        if spec == "exp":
            return ExponentialFunction()
        if spec.startswith("exp:"):
            return ExponentialFunction(float(spec[4:]))
        if spec.startswith("poly:"):
            coeffs = [float(c) for c in spec[5:].split(",") if c.strip() != ""]
            if not coeffs:
                raise ValueError("empty coefficient list")
            return PolynomialFunction(coeffs)
        if spec.startswith("rat:"):
            body = spec[4:]
            num_s, den_s = body.split("/")
            num = [float(c) for c in num_s.split(",") if c.strip() != ""]
            den = [float(c) for c in den_s.split(",") if c.strip() != ""]
            return RationalFunction(num, den)
    except (ValueError, IndexError) as exc:
        raise FunctionSpecError(f"cannot parse function spec {spec!r}: {exc}")
    raise FunctionSpecError(f"unknown function spec {spec!r}")
