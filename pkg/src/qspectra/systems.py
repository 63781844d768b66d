"""Spectral measures on axially symmetric sets, imaginary operators and
spectral systems, with spectral integration of intrinsic slice functions.

A finitely supported spectral measure assigns to each support sphere a
(not necessarily orthogonal) projection; set queries resolve to sums of
support projections, which makes additivity and multiplicativity exact by
construction.  An imaginary operator ``J`` satisfies ``-J^2 = P`` with ``P``
the projection onto ``ran J`` along ``ker J``; it plays the role of right
multiplication by imaginary units on its range.  A spectral system ``(E, J)``
couples the two by ``E(H \\ R) = -J^2`` and commutation, and integrates a
bounded measurable intrinsic slice function ``f = alpha + i beta`` as

    integral f dE_J = sum_k E_k alpha(u_k, v_k) + J sum_k E_k beta(u_k, v_k).
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .config import Tolerances, resolve
from .errors import ConsistencyError, DomainError
from .qlinalg import QMatrix, QVector, s_spectrum
from .quaternion import E1, Quaternion, SpectralSphere, axially_decompose, rotation_taking

__all__ = [
    "AxSet",
    "SpectralMeasure",
    "ImaginaryOperator",
    "SpectralSystem",
    "ComplexSpectralMeasure",
    "split_by_imaginary_operator",
    "make_imaginary_from_projections",
    "spectral_integral",
    "norm_bound_constant",
    "induce_complex_measure",
    "split_eigensphere",
]


class AxSet:
    """Axially symmetric Borel set, represented by a membership predicate on
    ``(u, v >= 0)`` built from rectangles, the reals, complements and unions."""

    def __init__(self, predicate, label: str):
        self._predicate = predicate
        self.label = label

    def contains_uv(self, u: float, v: float) -> bool:
        return bool(self._predicate(u, abs(v)))

    def contains_sphere(self, sphere: SpectralSphere) -> bool:
        return self.contains_uv(sphere.u, sphere.v)

    # --- constructors -----------------------------------------------------
    @staticmethod
    def rect(u_min: float, u_max: float, v_min: float = 0.0,
             v_max: float = math.inf) -> "AxSet":
        if u_min > u_max or v_min > v_max or v_min < 0.0:
            raise DomainError("bad rectangle bounds")
        return AxSet(
            lambda u, v: u_min <= u <= u_max and v_min <= v <= v_max,
            f"rect[{u_min},{u_max}]x[{v_min},{v_max}]",
        )

    @staticmethod
    def everything() -> "AxSet":
        return AxSet(lambda u, v: True, "H")

    @staticmethod
    def nothing() -> "AxSet":
        return AxSet(lambda u, v: False, "empty")

    @staticmethod
    def reals() -> "AxSet":
        return AxSet(lambda u, v: v == 0.0, "R")

    @staticmethod
    def nonreal() -> "AxSet":
        return AxSet(lambda u, v: v > 0.0, "H\\R")

    def complement(self) -> "AxSet":
        return AxSet(lambda u, v: not self._predicate(u, v), f"not({self.label})")

    def union(self, other: "AxSet") -> "AxSet":
        return AxSet(
            lambda u, v: self._predicate(u, v) or other._predicate(u, v),
            f"({self.label})|({other.label})",
        )

    def intersect(self, other: "AxSet") -> "AxSet":
        return AxSet(
            lambda u, v: self._predicate(u, v) and other._predicate(u, v),
            f"({self.label})&({other.label})",
        )


class SpectralMeasure:
    """Finitely supported projection-valued measure on axially symmetric sets."""

    def __init__(self, support):
        support = list(support)
        if not support:
            raise DomainError("spectral measure needs at least one support sphere")
        self.n = support[0][1].n
        for sphere, proj in support:
            if proj.n != self.n:
                raise DomainError("support projections must share one dimension")
        self.support = tuple(sorted(support, key=lambda it: (it[0].u, it[0].v)))

    def __iter__(self):
        return iter(self.support)

    def __len__(self):
        return len(self.support)

    def projection(self, delta: AxSet) -> QMatrix:
        """``E(delta)``: sum of support projections of the spheres inside."""
        total = QMatrix.zeros(self.n)
        for sphere, proj in self.support:
            if delta.contains_sphere(sphere):
                total = total + proj
        return total

    def total(self) -> QMatrix:
        return self.projection(AxSet.everything())

    def projection_for(self, sphere: SpectralSphere, tol_dist: float) -> QMatrix:
        for s, proj in self.support:
            if s.distance(sphere) <= tol_dist:
                return proj
        raise DomainError(f"sphere ({sphere.u:.6g}, {sphere.v:.6g}) is not in the support")

    def validate(self, tol: Tolerances | None = None) -> dict:
        """Residuals of the measure axioms (idempotency, annihilation, total)."""
        tol = resolve(tol)
        idem = 0.0
        annih = 0.0
        projs = [p for _, p in self.support]
        for i, p in enumerate(projs):
            idem = max(idem, (p @ p - p).norm())
            for j in range(i + 1, len(projs)):
                annih = max(annih, (p @ projs[j]).norm(), (projs[j] @ p).norm())
        complete = (self.total() - QMatrix.identity(self.n)).norm()
        report = {"idempotency": idem, "annihilation": annih, "completeness": complete}
        worst = max(report.values())
        if worst > 100.0 * tol.projection * max(1.0, max(p.norm() for p in projs)):
            raise ConsistencyError(f"spectral measure axioms violated: {report}")
        return report

    def uniform_bound(self, subset_cap: int = 12) -> float:
        """Max norm of ``E(delta)`` over sphere subsets (the measure's K).

        Exact for supports of at most ``subset_cap`` spheres, otherwise the
        triangle-inequality bound is reported.
        """
        projs = [p for _, p in self.support]
        if len(projs) > subset_cap:
            return sum(p.norm() for p in projs)
        best = 0.0
        for r in range(1, len(projs) + 1):
            for combo in itertools.combinations(projs, r):
                total = combo[0]
                for p in combo[1:]:
                    total = total + p
                best = max(best, total.norm())
        return best

    def to_json(self):
        return [
            {"u": s.u, "v": s.v, "projection": p.to_json()} for s, p in self.support
        ]

    @staticmethod
    def from_json(data) -> "SpectralMeasure":
        return SpectralMeasure([
            (SpectralSphere(float(e["u"]), float(e["v"])),
             QMatrix.from_json(e["projection"]))
            for e in data
        ])


class ImaginaryOperator:
    """Bounded ``J`` with ``-J^2`` the projection onto ``ran J`` along ``ker J``."""

    def __init__(self, j: QMatrix, tol: Tolerances | None = None, check: bool = True):
        self.matrix = j
        if check:
            report = self.validate(tol)
            scale = max(1.0, j.norm() ** 2)
            if max(report["projection"], report["kernel_gap"]) > 1e-6 * scale:
                raise DomainError(f"not an imaginary operator: {report}")

    @property
    def n(self):
        return self.matrix.n

    def range_projection(self) -> QMatrix:
        return -(self.matrix @ self.matrix)

    def validate(self, tol: Tolerances | None = None) -> dict:
        """Residuals: ``-J^2`` idempotency, rank agreement of J and J^2,
        and the distance of the S-spectrum from ``{0} u S``."""
        tol = resolve(tol)
        j = self.matrix
        p = self.range_projection()
        idem = (p @ p - p).norm()
        s_j = np.linalg.svd(j.embed(), compute_uv=False)
        s_j2 = np.linalg.svd((j @ j).embed(), compute_uv=False)
        cut = tol.rank_rel * max(1.0, j.norm())
        rank_j = int((s_j > cut).sum())
        rank_j2 = int((s_j2 > cut * max(1.0, j.norm())).sum())
        spec_gap = 0.0
        for sphere, _ in s_spectrum(j, tol).spheres:
            d0 = math.hypot(sphere.u, sphere.v)
            d1 = math.hypot(sphere.u, sphere.v - 1.0)
            spec_gap = max(spec_gap, min(d0, d1))
        return {
            "projection": idem,
            "kernel_gap": float(abs(rank_j - rank_j2)),
            "spectrum": spec_gap,
        }


class SpectralSystem:
    """Couple ``(E, J)`` of a spectral measure and a compatible imaginary operator."""

    def __init__(self, measure: SpectralMeasure, orientation: ImaginaryOperator,
                 tol: Tolerances | None = None, check: bool = True):
        if isinstance(orientation, QMatrix):
            orientation = ImaginaryOperator(orientation, tol, check=check)
        self.measure = measure
        self.orientation = orientation
        if check:
            report = self.validate(tol)
            scale = max(1.0, orientation.matrix.norm(),
                        max(p.norm() for _, p in measure.support))
            if max(report["commutation"], report["coupling"]) > 1e-6 * scale:
                raise DomainError(f"not a spectral system: {report}")

    @property
    def j(self) -> QMatrix:
        return self.orientation.matrix

    def validate(self, tol: Tolerances | None = None) -> dict:
        j = self.j
        comm = max(
            ((p @ j - j @ p).norm() for _, p in self.measure.support),
            default=0.0,
        )
        coupling = (self.measure.projection(AxSet.nonreal())
                    - self.orientation.range_projection()).norm()
        return {"commutation": comm, "coupling": coupling}

    def to_json(self):
        return {"spheres": self.measure.to_json(), "J": self.j.to_json()}

    @staticmethod
    def from_json(data) -> "SpectralSystem":
        return SpectralSystem(
            SpectralMeasure.from_json(data["spheres"]),
            ImaginaryOperator(QMatrix.from_json(data["J"]), check=False),
            check=False,
        )


# --- imaginary operator structure -------------------------------------------------


def _split_projections(j: QMatrix):
    """Complex projections onto the +i / -i eigenspaces of the embedding."""
    m = j.embed()
    eye = np.eye(m.shape[0], dtype=complex)
    e_plus = -0.5 * (m @ (m + 1j * eye))
    e_minus = -0.5 * (m @ (m - 1j * eye))
    return e_plus, e_minus


def _column_space(p: np.ndarray, cut_rel: float) -> np.ndarray:
    u, s, _ = np.linalg.svd(p)
    if s.size == 0 or s[0] == 0.0:
        return u[:, :0]
    rank = int((s > cut_rel * s[0]).sum())
    return u[:, :rank]


def split_by_imaginary_operator(j_op, unit: Quaternion = E1,
                                tol: Tolerances | None = None):
    """Direct sum decomposition induced by an imaginary operator.

    Returns three lists of QVectors: a kernel basis, a basis of
    ``{v : J v = v * unit}`` and a basis of ``{v : J v = v * (-unit)}``;
    the complex dimensions add up to ``2n``.
    """
    tol = resolve(tol)
    j = j_op.matrix if isinstance(j_op, ImaginaryOperator) else j_op
    if isinstance(j_op, QMatrix):
        ImaginaryOperator(j, tol)  # raises DomainError when invariants fail
    e_plus, e_minus = _split_projections(j)
    p_ran = e_plus + e_minus
    kernel = _column_space(np.eye(p_ran.shape[0]) - p_ran, 0.5)
    plus = _column_space(e_plus, 0.5)
    minus = _column_space(e_minus, 0.5)
    if kernel.shape[1] + plus.shape[1] + minus.shape[1] != 2 * j.n:
        raise ConsistencyError("imaginary splitting dimensions do not add up")

    h = None if unit.allclose(E1) else rotation_taking(E1, unit)

    def vectors(cols):
        out = [QVector.from_chart(cols[:, k]) for k in range(cols.shape[1])]
        if h is not None:
            out = [v * h for v in out]
        return out

    return vectors(kernel), vectors(plus), vectors(minus)


def make_imaginary_from_projections(e_plus: np.ndarray, e_minus: np.ndarray,
                                    unit: Quaternion = E1,
                                    tol: Tolerances | None = None) -> ImaginaryOperator:
    """Assemble ``J v = E+ v unit + E- v (-unit)`` from complex projections.

    ``e_plus`` and ``e_minus`` are complex matrices on the chart space that
    must annihilate each other and whose ranges must be exchanged by the
    antilinear map ``v -> v e2``; otherwise the assembled operator is not
    quaternionic linear and a ``DomainError`` is raised.
    """
    tol = resolve(tol)
    e_plus = np.asarray(e_plus, dtype=complex)
    e_minus = np.asarray(e_minus, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(e_plus, 2)), float(np.linalg.norm(e_minus, 2)))
    for name, p in (("E+", e_plus), ("E-", e_minus)):
        if np.linalg.norm(p @ p - p, 2) > 1e-8 * scale * scale:
            raise DomainError(f"{name} is not a projection")
    if max(np.linalg.norm(e_plus @ e_minus, 2),
           np.linalg.norm(e_minus @ e_plus, 2)) > 1e-8 * scale * scale:
        raise DomainError("E+ and E- do not annihilate each other")

    m_j = 1j * (e_plus - e_minus)
    try:
        j = QMatrix.unembed(m_j, check=True, tol=1e-8)
    except ConsistencyError as exc:
        raise DomainError(f"projections are not chart-compatible: {exc}")
    op = ImaginaryOperator(j, tol)
    if not unit.allclose(E1):
        h = rotation_taking(E1, unit)
        op = ImaginaryOperator(j.conjugate_entries(h.inverse()), tol)
    return op


# --- spectral integration ----------------------------------------------------------


def spectral_integral(system: SpectralSystem, f) -> QMatrix:
    """``integral f dE_J`` of a bounded measurable intrinsic slice function."""
    alpha_total = QMatrix.zeros(system.measure.n)
    beta_total = QMatrix.zeros(system.measure.n)
    for sphere, proj in system.measure.support:
        a, b = f.alpha_beta(sphere.u, sphere.v)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(
                f"{getattr(f, 'label', 'f')} is unbounded at support sphere "
                f"({sphere.u:.6g}, {sphere.v:.6g})"
            )
        alpha_total = alpha_total + proj * a
        beta_total = beta_total + proj * b
    return alpha_total + system.j @ beta_total


def norm_bound_constant(system: SpectralSystem) -> float:
    """``C_E (1 + ||J||)`` with ``C_E = sum_k ||E_k||``; bounds every spectral
    integral by that constant times the sup norm of the integrand."""
    c_e = sum(p.norm() for _, p in system.measure.support)
    return c_e * (1.0 + system.j.norm())


class ComplexSpectralMeasure:
    """Finitely supported complex spectral measure on the chart space."""

    def __init__(self, points):
        self.points = tuple(points)  # (complex point, complex projection)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def integrate(self, stem) -> np.ndarray:
        dim = self.points[0][1].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for z, proj in self.points:
            total += stem(z) * proj
        return total

    def validate(self) -> dict:
        projs = [p for _, p in self.points]
        dim = projs[0].shape[0]
        idem = max(float(np.linalg.norm(p @ p - p, 2)) for p in projs)
        annih = 0.0
        for i, p in enumerate(projs):
            for q in projs[i + 1:]:
                annih = max(annih, float(np.linalg.norm(p @ q, 2)),
                            float(np.linalg.norm(q @ p, 2)))
        complete = float(np.linalg.norm(sum(projs) - np.eye(dim), 2))
        return {"idempotency": idem, "annihilation": annih, "completeness": complete}


def induce_complex_measure(system: SpectralSystem,
                           tol: Tolerances | None = None) -> ComplexSpectralMeasure:
    """Complex spectral measure induced on the chart space.

    A real support sphere contributes its embedded projection at ``u``; a
    nonreal sphere ``(u, v)`` contributes ``E+ embed(E_k)`` at ``u + iv`` and
    ``E- embed(E_k)`` at ``u - iv``, where ``E+/-`` split the range of ``J``.
    Spectral integrals of intrinsic functions agree with integrals of their
    stems against this measure.
    """
    e_plus, e_minus = _split_projections(system.j)
    points = []
    for sphere, proj in system.measure.support:
        pe = proj.embed()
        if sphere.is_real:
            points.append((complex(sphere.u, 0.0), pe))
        else:
            points.append((complex(sphere.u, sphere.v), e_plus @ pe))
            points.append((complex(sphere.u, -sphere.v), e_minus @ pe))
    return ComplexSpectralMeasure(points)


# --- eigensphere geometry ------------------------------------------------------------


def split_eigensphere(t: QMatrix, s: Quaternion, v: QVector,
                      unit: Quaternion = E1):
    """Split a generalized eigenvector of the sphere of ``s`` into genuine
    right eigenvectors.

    For ``v`` with ``(T^2 - 2 Re(s) T + |s|^2) v = 0`` and ``s_i`` the trace
    of the sphere in the plane of ``unit``, the returned pair satisfies
    ``T v1 = v1 s_i``, ``T v2 = v2 conj(s_i)`` and ``v1 + v2 = v``.
    """
    u, w, _ = axially_decompose(s)
    if w == 0.0:
        raise DomainError("eigensphere splitting needs a nonreal sphere")
    s_i = Quaternion.from_axial(u, w, unit)
    tv = t @ v
    v1 = (tv - v * s_i.conjugate()) * (unit * (-1.0 / (2.0 * w)))
    v2 = (tv - v * s_i) * (unit * (1.0 / (2.0 * w)))
    return v1, v2
