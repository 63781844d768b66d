"""Spectral decomposition pipeline for quaternionic matrices.

Every matrix acting right-linearly on H^n is a spectral operator: the
spectral measure ``E`` comes from Riesz projectors of the isolated spectral
spheres, and the orientation ``J`` is assembled from the upper/lower
half-plane Riesz projectors of the restriction to the nonreal spectral
subspace,

    E+ v = \\int_{G+} Q_z(T)^{-1} (v conj(z) - T v) dz / (2 pi i),
    J = E+ (.) e1 + E- (.) (-e1),   extended by zero on the real part.

The scalar part is ``S = \\int s dE_J`` and the radical part ``N = T - S`` is
nilpotent with the same invariant subspaces.  ``taylor_funcalc`` evaluates
``f(T) = sum_k N^k (1/k!) \\int (d^k f) dE_J`` from exact slice derivatives,
``pushforward_decomposition`` transports ``(E, J)`` along ``f``, and
``complex_equivalence_check`` rebuilds ``(E, J)`` from the complex spectral
resolution of the embedding as an independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .calculus import QuadratureConfig, riesz_projector
from .config import Tolerances, resolve
from .errors import ConditioningError, ConsistencyError, DomainError, NumericalError
from .qlinalg import QMatrix, QVector, SpectrumInfo, complex_eigenvalues, s_spectrum
from .quaternion import E1, E2, Quaternion, SpectralSphere
from .slicefun import IntrinsicSliceFunction
from .systems import (
    AxSet,
    ImaginaryOperator,
    SpectralMeasure,
    SpectralSystem,
    spectral_integral,
)

__all__ = [
    "SpectralDecomposition",
    "spectral_decomposition",
    "taylor_funcalc",
    "pushforward_decomposition",
    "cex_truncation",
    "complex_equivalence_check",
]


@dataclass
class SpectralDecomposition:
    """Spectral system plus canonical scalar/radical split of one operator."""

    system: SpectralSystem
    scalar_part: QMatrix
    radical_part: QMatrix
    type_m: int
    spectrum: SpectrumInfo
    residuals: dict = field(default_factory=dict)

    @property
    def measure(self) -> SpectralMeasure:
        return self.system.measure

    @property
    def orientation(self) -> QMatrix:
        return self.system.j

    def to_json(self):
        return {
            "S": self.scalar_part.to_json(),
            "N": self.radical_part.to_json(),
            "system": self.system.to_json(),
            "type_m": self.type_m,
            "residuals": self.residuals,
        }


# --- half-plane Riesz projectors -----------------------------------------------------


def _upper_circles(spheres, all_points, min_clear, scale):
    circles = []
    for s in spheres:
        own = complex(s.u, s.v)
        others = [p for p in all_points if abs(p - own) > 1e-15]
        d = min((abs(p - own) for p in others), default=math.inf)
        d = min(d, 2.0 * s.v)  # the mirror point is always an obstacle
        r = min(max(min_clear, 0.05 * scale), d / 3.0)
        circles.append((own, r))
    return circles


def _resolvent_quadrature(m: np.ndarray, circles, nodes: int) -> np.ndarray:
    """``(1/2 pi i) sum_circles \\oint (conj(z) I - M) Q_z(M)^{-1} dz`` sampled
    with ``nodes`` trapezoidal points per circle (equals the Riesz projector
    of the enclosed spectrum)."""
    from .calculus import _batched_pseudo_solves

    dim = m.shape[0]
    eye = np.eye(dim, dtype=complex)
    m2 = m @ m
    acc = np.zeros((dim, dim), dtype=complex)
    for center, radius in circles:
        unit = np.exp(2j * math.pi * np.arange(nodes) / nodes)
        z = center + radius * unit
        w = 1j * radius * unit * (2.0 * math.pi / nodes)
        wc = _batched_pseudo_solves(m, m2, z, eye)
        integrand = (z.conjugate()[:, np.newaxis, np.newaxis] * wc
                     - np.einsum("ij,kjl->kil", m, wc))
        acc += np.einsum("k,kij->ij", w / (2j * math.pi), integrand)
    return acc


def _half_plane_projectors(t: QMatrix, spectrum: SpectrumInfo,
                           tol: Tolerances, config: QuadratureConfig):
    """Complex projections onto the strictly upper / lower spectral subspaces."""
    nonreal = [s for s, _ in spectrum.spheres if s.v > 0.0]
    dim = 2 * t.n
    if not nonreal:
        zero = np.zeros((dim, dim), dtype=complex)
        return zero, zero
    scale = max(1.0, t.norm())
    min_clear = max(0.05 * t.norm(), 10.0 * tol.cluster_rel * scale)
    all_points = list(spectrum.trace_points())
    upper = _upper_circles(nonreal, all_points, min_clear, scale)
    lower = [(c.conjugate(), r) for c, r in upper]
    m = t.embed()
    target = config.tol if config.tol is not None else tol.quad_rel * scale

    def adaptive(circles):
        nodes = config.nodes
        prev = None
        while nodes <= config.cap:
            result = _resolvent_quadrature(m, circles, nodes)
            if prev is not None and np.linalg.norm(result - prev, 2) <= target:
                return result
            prev = result
            nodes *= 2
        raise NumericalError(
            f"half-plane projector quadrature did not converge within "
            f"{config.cap} nodes"
        )

    return adaptive(upper), adaptive(lower)


# --- nilpotency ------------------------------------------------------------------------


def _nilpotent_type(n_mat: QMatrix, t_norm: float, tol: Tolerances) -> int:
    """Least ``m`` with ``||N^(m+1)|| < 1e-12 ||N||^(m+1)``, capped at dim - 1.

    A radical below the accuracy of the quadrature that produced it is noise
    from an exactly scalar operator, so it short-circuits to type 0.
    """
    dim = n_mat.n
    norm_n = n_mat.norm()
    if norm_n <= max(1e-12, 100.0 * tol.quad_rel) * max(1.0, t_norm):
        return 0
    power = n_mat
    for m in range(1, dim):
        power = power @ n_mat
        if power.norm() < 1e-12 * norm_n ** (m + 1):
            return m
    return dim - 1


# --- main pipeline ----------------------------------------------------------------------


def spectral_decomposition(
    t: QMatrix,
    tol: Tolerances | None = None,
    config: QuadratureConfig | None = None,
    probes: int = 20,
    probe_seed: int = 20210,
) -> SpectralDecomposition:
    """Construct ``(E, J)``, the scalar part and the radical part of ``t``.

    Raises ``ConditioningError`` when the spectral spheres are too close to be
    separated at the working tolerance (perturbing the matrix or loosening the
    tolerance are then the only options).
    """
    tol = resolve(tol)
    config = config or QuadratureConfig()
    spectrum = s_spectrum(t, tol)
    scale = max(1.0, t.norm())
    tol_cluster = tol.cluster_rel * scale

    sep = spectrum.min_separation()
    if sep <= 10.0 * tol_cluster:
        raise ConditioningError(
            f"spectral spheres are only {sep:.3e} apart (need "
            f"> {10.0 * tol_cluster:.3e}); perturbation analysis recommended"
        )

    support = []
    for sphere, _ in spectrum.spheres:
        proj = riesz_projector(t, [sphere], config=config, tol=tol,
                               spectrum=spectrum)
        support.append((sphere, proj))
    measure = SpectralMeasure(support)
    measure_report = measure.validate(tol)

    e_plus, e_minus = _half_plane_projectors(t, spectrum, tol, config)
    j_embed = 1j * (e_plus - e_minus)
    j_mat = QMatrix.unembed(j_embed, check=True, tol=1e-7)
    orientation = ImaginaryOperator(j_mat, tol, check=False)
    system = SpectralSystem(measure, orientation, tol, check=False)

    scalar = spectral_integral(system, _IdentityFunction())
    radical = t - scalar
    type_m = _nilpotent_type(radical, t.norm(), tol)

    residuals = dict(measure_report)
    residuals.update(system.validate(tol))
    residuals["orientation"] = orientation.validate(tol)["projection"]
    residuals["commute_measure_t"] = max(
        ((p @ t - t @ p).norm() for _, p in support), default=0.0)
    residuals["commute_j_t"] = (j_mat @ t - t @ j_mat).norm()
    residuals["half_plane_completeness"] = float(np.linalg.norm(
        e_plus + e_minus - measure.projection(AxSet.nonreal()).embed(), 2))
    residuals["scalar_radical_commute"] = (scalar @ radical - radical @ scalar).norm()
    residuals["nilpotency"] = radical.power(type_m + 1).norm()
    residuals["restriction"] = _restriction_residual(t, measure, tol)
    residuals["probe_invertibility"] = _probe_invertibility(
        t, measure, j_mat, probes, probe_seed)
    residuals["probe_label"] = "sampled"
    return SpectralDecomposition(system, scalar, radical, type_m, spectrum, residuals)


class _IdentityFunction(IntrinsicSliceFunction):
    label = "s"

    def stem(self, z: complex) -> complex:
        return z

    def stem_derivative(self, z: complex) -> complex:
        return 1.0 + 0j


def _restriction_residual(t: QMatrix, measure: SpectralMeasure,
                          tol: Tolerances) -> float:
    """Worst distance of the spectrum of ``T`` restricted to ``ran E_k`` from
    the supporting sphere."""
    m = t.embed()
    worst = 0.0
    for sphere, proj in measure.support:
        pe = proj.embed()
        u_svd, s_svd, _ = np.linalg.svd(pe)
        if s_svd.size == 0 or s_svd[0] < 0.5:
            continue
        rank = int((s_svd > 0.5).sum())
        basis = u_svd[:, :rank]
        restricted = basis.conj().T @ m @ basis
        pts = np.array([complex(sphere.u, sphere.v), complex(sphere.u, -sphere.v)])
        for lam in complex_eigenvalues(restricted):
            worst = max(worst, float(np.abs(pts - lam).min()))
    return worst


def _probe_invertibility(t: QMatrix, measure: SpectralMeasure, j_mat: QMatrix,
                         probes: int, seed: int) -> float:
    """Worst relative solve residual of ``(s0 I - s1 J - T)`` on the nonreal
    subspace over sampled ``s1 > 0`` (a finite certificate is not possible)."""
    pnr = measure.projection(AxSet.nonreal()).embed()
    u_svd, s_svd, _ = np.linalg.svd(pnr)
    rank = int((s_svd > 0.5).sum())
    if rank == 0:
        return 0.0
    basis = u_svd[:, :rank]
    scale = max(1.0, t.norm())
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(probes):
        s0 = float(rng.uniform(-2.0 * scale, 2.0 * scale))
        s1 = float(rng.uniform(1e-3, 2.0)) * scale
        a = QMatrix.identity(t.n) * s0 - j_mat * s1 - t
        ar = basis.conj().T @ a.embed() @ basis
        b = rng.standard_normal(rank) + 1j * rng.standard_normal(rank)
        x = np.linalg.solve(ar, b)
        worst = max(worst, float(np.linalg.norm(ar @ x - b) / np.linalg.norm(b)))
    return worst


# --- Taylor-form calculus ---------------------------------------------------------------


def taylor_funcalc(dec: SpectralDecomposition, f: IntrinsicSliceFunction) -> QMatrix:
    """``sum_{k<=m} N^k (1/k!) \\int (d^k f) dE_J`` using exact slice derivatives."""
    acc = QMatrix.zeros(dec.measure.n)
    deriv = f
    factorial = 1.0
    for k in range(dec.type_m + 1):
        if k > 0:
            deriv = deriv.slice_derivative()
            factorial *= k
        term = spectral_integral(dec.system, deriv)
        acc = acc + dec.radical_part.power(k) @ term * (1.0 / factorial)
    return acc


# --- pushforward -------------------------------------------------------------------------


def pushforward_decomposition(
    dec: SpectralDecomposition,
    f: IntrinsicSliceFunction,
    tol: Tolerances | None = None,
) -> SpectralDecomposition:
    """Spectral decomposition of ``f(T)`` transported along ``f``.

    Support spheres map through the stem; images closer than the cluster
    tolerance merge (recorded under ``residuals['merged']``), their
    projections adding up.  The new orientation weights ``J E_k`` by the sign
    of the imaginary component of the image.
    """
    tol = resolve(tol)
    images = []
    for sphere, proj in dec.measure.support:
        mu = f.stem(complex(sphere.u, sphere.v))
        images.append((mu, sphere, proj))
    img_scale = max(1.0, max(abs(mu) for mu, _, _ in images))
    snap = tol.cluster_rel * img_scale

    groups = []  # [(u_img, v_img, [(sphere, proj, sign)])]
    merged = []
    for mu, sphere, proj in images:
        v_img = abs(mu.imag)
        if v_img < snap:
            v_img = 0.0
        sign = 0.0 if v_img == 0.0 else math.copysign(1.0, mu.imag)
        placed = False
        for g in groups:
            if math.hypot(g[0] - mu.real, g[1] - v_img) <= snap:
                g[2].append((sphere, proj, sign))
                merged.append((sphere.u, sphere.v))
                placed = True
                break
        if not placed:
            groups.append([mu.real, v_img, [(sphere, proj, sign)]])

    support = []
    j_new = QMatrix.zeros(dec.measure.n)
    for u_img, v_img, members in groups:
        total = members[0][1]
        for _, proj, _ in members[1:]:
            total = total + proj
        support.append((SpectralSphere(u_img, v_img), total))
        for _, proj, sign in members:
            if sign != 0.0:
                j_new = j_new + (dec.orientation @ proj) * sign

    measure = SpectralMeasure(support)
    system = SpectralSystem(measure, ImaginaryOperator(j_new, tol, check=False),
                            tol, check=False)
    scalar = spectral_integral(dec.system, f)
    total_ft = taylor_funcalc(dec, f)
    radical = total_ft - scalar
    type_m = _nilpotent_type(radical, total_ft.norm(), tol)

    residuals = dict(system.validate(tol))
    residuals.update(measure.validate(tol))
    residuals["merged"] = merged
    # multiplicities: sum of the source multiplicities in each image group
    spheres = []
    for (sphere, _), group in zip(support, groups):
        mult = 0
        for src_sphere, _, _ in group[2]:
            for s, m in dec.spectrum.spheres:
                if s.distance(src_sphere) < 1e-12:
                    mult += m
                    break
        spheres.append((sphere, mult))
    spectrum = SpectrumInfo(tuple(sorted(spheres, key=lambda it: (it[0].u, it[0].v))))
    return SpectralDecomposition(system, scalar, radical, type_m, spectrum, residuals)


# --- counterexample truncations ------------------------------------------------------------


def cex_truncation(m_max: int, tol: Tolerances | None = None) -> dict:
    """Block-diagonal truncations of the operator whose spectral orientations
    blow up.

    Block ``m`` is ``T_m = (1/m^2) [[e1, 2m e1], [0, -e1]]`` with orientation
    ``J_m = [[e1, 2m e1], [0, -e1]]``; the report carries ``||J_m||`` together
    with the column lower bound ``2m``, the block eigensphere ``(0, 1/m^2)``
    and the residual of the explicit eigenvectors.
    """
    if m_max < 1:
        raise DomainError("cex truncation needs m_max >= 1")
    tol = resolve(tol)
    rows = []
    blocks = []
    zero = Quaternion()
    for m in range(1, m_max + 1):
        j_m = QMatrix([[E1, E1 * (2.0 * m)], [zero, -E1]])
        t_m = j_m * (1.0 / m ** 2)
        blocks.append(t_m)
        spec = s_spectrum(t_m, tol)
        sphere = spec.sphere_list[0]
        sigma_err = max(abs(sphere.u), abs(sphere.v - 1.0 / m ** 2))
        s_val = E1 * (1.0 / m ** 2)
        v1 = QVector([Quaternion(1.0), zero])
        v2 = QVector([-E2, E2 * (1.0 / m)])
        r1 = (t_m @ v1 - v1 * s_val).norm()
        r2 = (t_m @ v2 - v2 * s_val).norm()
        j_norm = j_m.norm()
        rows.append({
            "m": m,
            "j_norm": j_norm,
            "lower_bound": 2.0 * m,
            "ratio": j_norm / m,
            "sigma_error": sigma_err,
            "eigvec_residual": max(r1, r2),
        })
    full = QMatrix.block_diagonal(blocks)
    full_spec = s_spectrum(full, tol)
    expected = sorted(1.0 / m ** 2 for m in range(1, m_max + 1))
    got = sorted(s.v for s in full_spec.sphere_list)
    spec_err = (max(abs(a - b) for a, b in zip(expected, got))
                if len(expected) == len(got) else math.inf)
    return {
        "rows": rows,
        "dimension": 2 * m_max,
        "full_spectrum_error": spec_err,
        "norm_growth_monotone": all(
            rows[k]["j_norm"] <= rows[k + 1]["j_norm"] for k in range(len(rows) - 1)
        ),
    }


# --- complex equivalence ---------------------------------------------------------------------


def _point_projector(m: np.ndarray, lam: complex, mult: int) -> np.ndarray:
    """Projector onto the generalized eigenspace of ``lam`` along the others."""
    dim = m.shape[0]
    h = np.linalg.matrix_power(m - lam * np.eye(dim), mult)
    u_svd, s_svd, vh = np.linalg.svd(h)
    rank = dim - mult
    if rank > 0 and s_svd[rank - 1] <= s_svd[0] * 1e-13:
        raise ConsistencyError(
            f"generalized eigenspace of {lam:.6g} is not well separated"
        )
    kernel = vh[rank:].conj().T
    col_range = u_svd[:, :rank]
    x = np.concatenate([kernel, col_range], axis=1)
    sel = np.zeros((dim, dim), dtype=complex)
    sel[:mult, :mult] = np.eye(mult)
    return x @ sel @ np.linalg.inv(x)


def complex_equivalence_check(
    t: QMatrix,
    tol: Tolerances | None = None,
    config: QuadratureConfig | None = None,
    dec: SpectralDecomposition | None = None,
) -> dict:
    """Rebuild ``(E, J)`` from the complex spectral resolution of the
    embedding (generalized eigenprojections clustered per point) and report
    the distances to the pipeline decomposition."""
    tol = resolve(tol)
    if dec is None:
        dec = spectral_decomposition(t, tol, config)
    m = t.embed()
    scale = max(1.0, t.norm())
    tol_cluster = tol.cluster_rel * scale

    eigs = complex_eigenvalues(m)
    points = []  # [(sum, count)]
    for lam in eigs:
        if abs(lam.imag) < tol_cluster:
            lam = complex(lam.real, 0.0)
        for idx, (tot, cnt) in enumerate(points):
            if abs(tot / cnt - lam) <= tol_cluster:
                points[idx] = (tot + lam, cnt + 1)
                break
        else:
            points.append((lam, 1))
    clusters = []
    for tot, cnt in points:
        lam = tot / cnt
        if abs(lam.imag) < tol_cluster:
            lam = complex(lam.real, 0.0)
        clusters.append((lam, cnt))

    projectors = {lam: _point_projector(m, lam, cnt) for lam, cnt in clusters}

    def nearest(target: complex):
        lam = min(projectors, key=lambda p: abs(p - target))
        if abs(lam - target) > 100.0 * tol_cluster:
            raise ConsistencyError(
                f"no complex spectral point near {target:.6g}"
            )
        return projectors[lam]

    per_sphere = []
    e_dist = 0.0
    for sphere, proj in dec.measure.support:
        if sphere.is_real:
            p_cx = nearest(complex(sphere.u, 0.0))
        else:
            p_cx = (nearest(complex(sphere.u, sphere.v))
                    + nearest(complex(sphere.u, -sphere.v)))
        gap = float(np.linalg.norm(p_cx - proj.embed(), 2))
        per_sphere.append({"u": sphere.u, "v": sphere.v, "distance": gap})
        e_dist = max(e_dist, gap)

    p_upper = sum(
        (p for lam, p in projectors.items() if lam.imag > 0.0),
        np.zeros_like(m),
    )
    p_lower = sum(
        (p for lam, p in projectors.items() if lam.imag < 0.0),
        np.zeros_like(m),
    )
    j_cx = QMatrix.unembed(1j * (p_upper - p_lower), check=True, tol=1e-7)
    j_dist = (j_cx - dec.orientation).norm()

    return {
        "e_distance": e_dist,
        "j_distance": j_dist,
        "per_sphere": per_sphere,
        "points": [[lam.real, lam.imag, cnt] for lam, cnt in clusters],
    }
