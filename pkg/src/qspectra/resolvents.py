"""Pseudo-resolvent, resolvent field and the two S-resolvent operators.

The pseudo-resolvent of ``T`` at ``s`` is the inverse of the real-coefficient
operator ``Q_s(T) = T^2 - 2 Re(s) T + |s|^2 I``; it depends only on the sphere
of ``s``.  On the complex embedding ``Q_s`` factors as
``(lam I - M)(conj(lam) I - M)`` with ``lam = Re(s) + i |Im(s)|``, so one
application costs two complex triangular solves.

The resolvent field ``R_s(T; v) = Q_s(T)^{-1} v conj(s) - T Q_s(T)^{-1} v``
uses only the right multiplication on H^n and coincides, for ``s`` in the
reference plane, with the complex-linear resolvent of the embedding.  The
left/right S-resolvent operators additionally use the canonical componentwise
left multiplication on H^n; they exist only relative to that choice and are
provided to validate the S-resolvent equation, not as part of the main
calculus path.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .config import Tolerances, resolve
from .errors import DivergenceError, DomainError, SingularityError
from .qlinalg import QMatrix, QVector, SpectrumInfo, s_spectrum
from .quaternion import Quaternion, axially_decompose, same_sphere

__all__ = [
    "PseudoResolvent",
    "SResolventPair",
    "pseudo_resolvent_apply",
    "pseudo_resolvent_matrix",
    "pseudo_resolvent_series",
    "right_resolvent_field",
    "s_resolvents",
    "sresolvent_equation_residual",
]


def _guard_resolvent_point(t: QMatrix, s: Quaternion, tol: Tolerances,
                           spectrum: SpectrumInfo | None):
    if spectrum is None:
        spectrum = s_spectrum(t, tol)
    u, v, _ = axially_decompose(s)
    dist = spectrum.nearest_distance(u, v)
    floor = tol.near_spectrum_rel * max(1.0, t.norm())
    if dist < floor:
        raise SingularityError(
            f"point ({u:.6g}, {v:.6g}) is {dist:.3e} away from the S-spectrum, "
            f"below the guard {floor:.3e}"
        )
    return spectrum


class PseudoResolvent:
    """``Q_s(T)^{-1}`` with the factored LU of the embedding cached per point."""

    def __init__(self, t: QMatrix, s: Quaternion, tol: Tolerances | None = None,
                 spectrum: SpectrumInfo | None = None):
        self.tol = resolve(tol)
        self.t = t
        self.s = s
        self.sphere = axially_decompose(s)[:2]
        _guard_resolvent_point(t, s, self.tol, spectrum)
        m = t.embed()
        lam = complex(self.sphere[0], self.sphere[1])
        eye = np.eye(2 * t.n, dtype=complex)
        self._lu_a = scipy.linalg.lu_factor(lam * eye - m, check_finite=False)
        self._lu_b = scipy.linalg.lu_factor(lam.conjugate() * eye - m,
                                            check_finite=False)

    def apply_chart(self, chart: np.ndarray) -> np.ndarray:
        y = scipy.linalg.lu_solve(self._lu_a, chart, check_finite=False)
        return scipy.linalg.lu_solve(self._lu_b, y, check_finite=False)

    def apply(self, b: QVector) -> QVector:
        return QVector.from_chart(self.apply_chart(b.chart()))

    def matrix(self) -> QMatrix:
        eye = np.eye(2 * self.t.n, dtype=complex)
        return QMatrix.unembed(self.apply_chart(eye), check=True, tol=1e-8)


def pseudo_resolvent_apply(t: QMatrix, s: Quaternion, b: QVector,
                           tol: Tolerances | None = None,
                           spectrum: SpectrumInfo | None = None) -> QVector:
    """``Q_s(T)^{-1} b`` via two factored solves on the embedding."""
    return PseudoResolvent(t, s, tol, spectrum).apply(b)


def pseudo_resolvent_matrix(t: QMatrix, s: Quaternion,
                            tol: Tolerances | None = None,
                            spectrum: SpectrumInfo | None = None) -> QMatrix:
    return PseudoResolvent(t, s, tol, spectrum).matrix()


def pseudo_resolvent_series(t: QMatrix, s: Quaternion, terms: int) -> QMatrix:
    """Partial sum of the real-coefficient series for ``Q_s(T)^{-1}``.

    ``sum_n T^n a_n`` with ``a_n = |s|^(-2n-2) * sum_{k<=n} conj(s)^k s^(n-k)``;
    the coefficients are real, so the sum is meaningful with only the right
    module structure.  Requires ``|s| > ||T||``.
    """
    norm_s = abs(s)
    norm_t = t.norm()
    if norm_s <= norm_t:
        raise DivergenceError(
            f"series diverges: |s| = {norm_s:.6g} <= ||T|| = {norm_t:.6g}"
        )
    u, v, _ = axially_decompose(s)
    lam = complex(u, v)
    acc = QMatrix.zeros(t.n)
    power = QMatrix.identity(t.n)
    for n in range(terms):
        if v == 0.0:
            sigma = (n + 1) * (u ** n)
        else:
            num = lam ** (n + 1) - lam.conjugate() ** (n + 1)
            sigma = (num / (lam - lam.conjugate())).real
        a_n = sigma / norm_s ** (2 * n + 2)
        acc = acc + power * a_n
        if n < terms - 1:
            power = power @ t
    return acc


def right_resolvent_field(t: QMatrix, s: Quaternion, v: QVector,
                          tol: Tolerances | None = None,
                          spectrum: SpectrumInfo | None = None) -> QVector:
    """``R_s(T; v) = Q_s(T)^{-1} v conj(s) - T Q_s(T)^{-1} v``."""
    w = pseudo_resolvent_apply(t, s, v, tol, spectrum)
    return w * s.conjugate() - (t @ w)


class SResolventPair:
    """Left and right S-resolvent operators at one point (as matrices)."""

    __slots__ = ("left", "right", "s")

    def __init__(self, left: QMatrix, right: QMatrix, s: Quaternion):
        self.left = left
        self.right = right
        self.s = s


def s_resolvents(t: QMatrix, s: Quaternion, tol: Tolerances | None = None,
                 spectrum: SpectrumInfo | None = None) -> SResolventPair:
    """``S_L^{-1}(s,T) = Q_s^{-1} conj(s) - T Q_s^{-1}`` and
    ``S_R^{-1}(s,T) = -(T - conj(s) I) Q_s^{-1}``.

    The scalar factors act through the canonical componentwise left
    multiplication on H^n; at real ``s`` both reduce to ``(s I - T)^{-1}``.
    """
    x = pseudo_resolvent_matrix(t, s, tol, spectrum)
    sbar = s.conjugate()
    left = x.right_scalar(sbar) - t @ x
    right = (QMatrix.scalar(t.n, sbar) - t) @ x
    return SResolventPair(left, right, s)


def sresolvent_equation_residual(t: QMatrix, s: Quaternion, x: Quaternion,
                                 tol: Tolerances | None = None) -> float:
    """Operator-norm residual of the S-resolvent equation at ``(s, x)``:

    ``S_R(s) S_L(x) = [(S_R(s) - S_L(x)) x - conj(s)(S_R(s) - S_L(x))]
    (x^2 - 2 Re(s) x + |s|^2)^{-1}``
    for ``s, x`` off the spectrum with disjoint spheres.
    """
    tol = resolve(tol)
    if same_sphere(s, x, 1e-12 * (1.0 + abs(s) + abs(x))):
        raise DomainError("s and x must lie on different spheres")
    spectrum = s_spectrum(t, tol)
    rs = s_resolvents(t, s, tol, spectrum)
    rx = s_resolvents(t, x, tol, spectrum)
    diff = rs.right - rx.left
    c = x * x - x * (2.0 * s.real) + Quaternion.from_real(abs(s) ** 2)
    rhs = (diff.right_scalar(x) - diff.left_scalar(s.conjugate())).right_scalar(c.inverse())
    lhs = rs.right @ rx.left
    return (lhs - rhs).norm()
