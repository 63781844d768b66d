"""Property suite: every module invariant as a seeded, bounded check.

The command line ``verify`` subcommand runs this registry; each entry draws
its own data from a child generator of one seed, measures a worst residual
and compares it against the documented bound.  Bounds are absolute after the
stated normalization, so a report line is meaningful on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import calculus, qlinalg, resolvents, slicefun, spectral, systems
from .config import Tolerances, resolve
from .errors import QSpectraError
from .qlinalg import QMatrix, QVector, hausdorff_distance, s_spectrum
from .quaternion import E1, E2, E3, Quaternion, axially_decompose
from .sampling import (
    random_admissible_point,
    random_qmatrix,
    random_quaternion,
    random_qvector,
    random_spectral_qmatrix,
    random_unit,
)
from .slicefun import ExponentialFunction, PolynomialFunction, evaluate

__all__ = ["PropertyResult", "PROPERTIES", "run_properties"]


@dataclass
class PropertyResult:
    name: str
    passed: bool
    worst: float
    bound: float
    detail: str = ""

    def to_json(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "worst": self.worst,
            "bound": self.bound,
            "detail": self.detail,
        }


class _Ctx:
    def __init__(self, rng, dim, trials, tol):
        self.rng = rng
        self.dim = dim
        self.trials = trials
        self.tol = tol


_FUNCTIONS = [
    PolynomialFunction([0.0, 0.0, 1.0]),
    PolynomialFunction([0.0, -2.0, 0.0, 1.0]),
    ExponentialFunction(),
    ExponentialFunction(0.5),
]


# --- quaternion core ------------------------------------------------------------------


def _prop_conjugation_sphere(ctx):
    worst = 0.0
    for _ in range(max(ctx.trials * 20, 20)):
        q = random_quaternion(ctx.rng)
        h = random_quaternion(ctx.rng)
        if abs(h) < 1e-6:
            continue
        r = h.inverse() * q * h
        scale = max(1.0, abs(q))
        worst = max(worst, abs(abs(r) - abs(q)) / scale,
                    abs(r.real - q.real) / scale)
    return worst, 1e-12


def _prop_conj_antihomomorphism(ctx):
    worst = 0.0
    for _ in range(max(ctx.trials * 20, 20)):
        a = random_quaternion(ctx.rng)
        b = random_quaternion(ctx.rng)
        scale = max(1.0, abs(a) * abs(b))
        worst = max(
            worst,
            abs((a * b).conjugate() - b.conjugate() * a.conjugate()) / scale,
            abs(abs(a * b) - abs(a) * abs(b)) / scale,
        )
    return worst, 1e-12


def _prop_axial_roundtrip(ctx):
    worst = 0.0
    for _ in range(max(ctx.trials * 20, 20)):
        q = random_quaternion(ctx.rng)
        u, v, unit = axially_decompose(q)
        rebuilt = Quaternion.from_real(u) if unit is None \
            else Quaternion.from_axial(u, v, unit)
        worst = max(worst, abs(rebuilt - q) / max(1.0, abs(q)))
    return worst, 1e-14


# --- slice functions ------------------------------------------------------------------


def _prop_intrinsic_symmetry(ctx):
    worst = 0.0
    for f in _FUNCTIONS:
        for _ in range(max(ctx.trials * 10, 10)):
            x = random_quaternion(ctx.rng)
            fx = evaluate(f, x)
            gap = abs(evaluate(f, x.conjugate()) - fx.conjugate())
            worst = max(worst, gap / (1.0 + abs(fx)))
    return worst, 1e-12


def _prop_representation_formula(ctx):
    worst = 0.0
    for f in _FUNCTIONS:
        for _ in range(max(ctx.trials * 10, 10)):
            x = random_quaternion(ctx.rng)
            unit = random_unit(ctx.rng)
            direct = evaluate(f, x)
            via = slicefun.eval_via_representation(f, x, unit)
            worst = max(worst, abs(via - direct) / (1.0 + abs(direct)))
    return worst, 1e-10


def _prop_product_closure(ctx):
    f = slicefun.product(_FUNCTIONS[0], _FUNCTIONS[2])
    worst = 0.0
    for _ in range(max(ctx.trials * 10, 10)):
        x = random_quaternion(ctx.rng)
        fx = evaluate(f, x)
        worst = max(worst, abs(evaluate(f, x.conjugate()) - fx.conjugate())
                    / (1.0 + abs(fx)))
    return worst, 1e-12


def _prop_kernel_antisymmetry(ctx):
    worst = 0.0
    for _ in range(max(ctx.trials * 10, 10)):
        s = random_quaternion(ctx.rng)
        x = random_quaternion(ctx.rng)
        if slicefun.same_sphere(s, x, 1e-3):
            continue
        lhs = slicefun.cauchy_kernel_right(s, x)
        rhs = -slicefun.cauchy_kernel_left(x, s)
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    return worst, 1e-12


def _prop_cauchy_convergence(ctx):
    contour = calculus.ContourSpec((calculus.Circle(0j, 1.6),))
    f = ExponentialFunction()
    x = Quaternion(0.3, 0.4, 0.2, -0.1)
    exact = evaluate(f, x)
    errors = [abs(slicefun.cauchy_sweep(f, x, contour, nodes=n) - exact)
              for n in (16, 32, 64)]
    # each doubling must cut the error by 10x until the accuracy floor
    worst = 0.0
    for a, b in zip(errors, errors[1:]):
        if a > 1e-12:
            worst = max(worst, b / a)
    return worst, 0.1


# --- quaternionic linear algebra ------------------------------------------------------


def _prop_embed_homomorphism(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        a = random_qmatrix(ctx.rng, ctx.dim)
        b = random_qmatrix(ctx.rng, ctx.dim)
        gap = np.linalg.norm((a @ b).embed() - a.embed() @ b.embed(), 2)
        worst = max(worst, gap / max(1e-30, a.norm() * b.norm()))
    return worst, 1e-12


def _prop_chart_isometry(ctx):
    worst = 0.0
    for _ in range(ctx.trials * 5):
        v = random_qvector(ctx.rng, ctx.dim)
        worst = max(worst, abs(v.norm() - float(np.linalg.norm(v.chart())))
                    / max(1.0, v.norm()))
    return worst, 1e-14


def _prop_spectral_radius(ctx):
    worst = -math.inf
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        radius = s_spectrum(t, ctx.tol).max_radius()
        worst = max(worst, radius - t.norm())
    return worst, 1e-8


def _prop_conjugation_closure(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        eigs = qlinalg.complex_eigenvalues(t.embed())
        defect = max(float(np.abs(eigs - lam.conjugate()).min()) for lam in eigs)
        worst = max(worst, defect / max(1.0, t.norm()))
    return worst, 1e-8


def _prop_eigenvector_transport(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        m = t.embed()
        lams, vecs = np.linalg.eig(m)
        k = int(np.argmax(np.abs(lams.imag)))
        v = QVector.from_chart(vecs[:, k])
        s = Quaternion.from_complex(complex(lams[k]))
        base = (t @ v - v * s).norm()
        h = random_quaternion(ctx.rng)
        if abs(h) < 1e-6:
            h = Quaternion(1.0)
        vh = v * h
        moved = (t @ vh - vh * (h.inverse() * s * h)).norm()
        worst = max(worst, (moved + base) / max(1.0, t.norm()))
    return worst, 1e-10


# --- resolvents -----------------------------------------------------------------------


def _prop_pseudo_conj_invariance(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        spec = s_spectrum(t, ctx.tol)
        s = random_admissible_point(ctx.rng, spec, 2.0, 0.2)
        a = resolvents.pseudo_resolvent_matrix(t, s, ctx.tol, spec)
        b = resolvents.pseudo_resolvent_matrix(t, s.conjugate(), ctx.tol, spec)
        worst = max(worst, (a - b).norm())
    return worst, 1e-13


def _prop_factorization(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        m = t.embed()
        s = random_quaternion(ctx.rng, 1.5)
        u, v, _ = axially_decompose(s)
        lam = complex(u, v)
        eye = np.eye(2 * ctx.dim)
        q = m @ m - 2.0 * u * m + (abs(s) ** 2) * eye
        fact = (lam * eye - m) @ (lam.conjugate() * eye - m)
        scale = max(1.0, float(np.linalg.norm(q, 2)))
        worst = max(worst, float(np.linalg.norm(q - fact, 2)) / scale)
    return worst, 1e-12


def _prop_sresolvent_equation(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        spec = s_spectrum(t, ctx.tol)
        for _ in range(4):
            s = random_admissible_point(ctx.rng, spec, 2.0, 0.25)
            x = random_admissible_point(ctx.rng, spec, 2.0, 0.25)
            if slicefun.same_sphere(s, x, 0.05):
                continue
            res = resolvents.sresolvent_equation_residual(t, s, x, ctx.tol)
            worst = max(worst, res / max(1.0, t.norm()))
    return worst, 1e-9


def _prop_series_vs_direct(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        nrm = max(t.norm(), 0.1)
        unit = random_unit(ctx.rng)
        s = Quaternion.from_axial(0.3 * nrm, 2.0 * nrm, unit)
        series = resolvents.pseudo_resolvent_series(t, s, 60)
        direct = resolvents.pseudo_resolvent_matrix(t, s, ctx.tol)
        worst = max(worst, (series - direct).norm() / direct.norm())
    return worst, 1e-8


def _prop_field_holomorphic(ctx):
    # discrete Cauchy-Riemann residual of s -> R_s(T; v) on the reference plane
    worst = 0.0
    step = 1e-5
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        spec = s_spectrum(t, ctx.tol)
        v = random_qvector(ctx.rng, ctx.dim)
        v = v * (1.0 / v.norm())
        while True:
            q = random_quaternion(ctx.rng, 2.0)
            u0, v0, _ = axially_decompose(q)
            if v0 >= 0.3 and spec.nearest_distance(u0, v0) > 0.5:
                break

        def field(du, dv):
            s = Quaternion(u0 + du, v0 + dv, 0.0, 0.0)
            return resolvents.right_resolvent_field(t, s, v, ctx.tol, spec)

        d_u = (field(step, 0.0) - field(-step, 0.0)) * (0.5 / step)
        d_v = (field(0.0, step) - field(0.0, -step)) * (0.5 / step)
        # right holomorphic: d/du F + (d/dv F) e1 = 0 with e1 acting on the right
        residual = (d_u + d_v * E1).norm() * 0.5
        worst = max(worst, residual)
    return worst, 1e-6


# --- calculus -------------------------------------------------------------------------


def _prop_polynomial_consistency(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        scale = max(1.0, t.norm())
        one = calculus.funcalc(t, PolynomialFunction([1.0]), tol=ctx.tol)
        ident = calculus.funcalc(t, PolynomialFunction([0.0, 1.0]), tol=ctx.tol)
        worst = max(worst,
                    (one - QMatrix.identity(ctx.dim)).norm() / scale,
                    (ident - t).norm() / scale)
    return worst, 1e-9


def _prop_riesz_completeness(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        spec = s_spectrum(t, ctx.tol)
        total = QMatrix.zeros(ctx.dim)
        for sphere, _ in spec.spheres:
            total = total + calculus.riesz_projector(t, [sphere], tol=ctx.tol,
                                                     spectrum=spec)
        worst = max(worst, (total - QMatrix.identity(ctx.dim)).norm())
    return worst, 1e-9


def _rd_oracle(m: np.ndarray, stem, contour, nodes: int = 512) -> np.ndarray:
    """Independent Riesz-Dunford quadrature on the embedding."""
    dim = m.shape[0]
    eye = np.eye(dim, dtype=complex)
    total = np.zeros_like(eye)
    for a, b, w in contour.node_arrays(nodes):
        for aa, bb, ww in zip(a, b, w):
            z = complex(aa, bb)
            total += stem(z) * np.linalg.solve(z * eye - m, eye) * ww / (2j * math.pi)
    return total


def _prop_oracle_equivalence(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        spec = s_spectrum(t, ctx.tol)
        contour = calculus.auto_contour(t, spectrum=spec, tol=ctx.tol)
        for f in (_FUNCTIONS[0], _FUNCTIONS[2]):
            mine = calculus.funcalc(t, f, contour=contour, tol=ctx.tol,
                                    spectrum=spec)
            oracle = _rd_oracle(t.embed(), f.stem, contour)
            gap = float(np.linalg.norm(mine.embed() - oracle, 2))
            worst = max(worst, gap / max(1.0, t.norm()))
    return worst, 1e-9


def _prop_contour_independence(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        spec = s_spectrum(t, ctx.tol)
        c1 = calculus.auto_contour(t, spectrum=spec, tol=ctx.tol)
        c2 = calculus.ContourSpec((calculus.Circle(
            c1.circles[0].center, c1.circles[0].radius * 1.4),))
        f = ExponentialFunction(0.5)
        a = calculus.funcalc(t, f, contour=c1, tol=ctx.tol, spectrum=spec)
        b = calculus.funcalc(t, f, contour=c2, tol=ctx.tol, spectrum=spec)
        worst = max(worst, (a - b).norm() / max(1.0, t.norm()))
    return worst, 2e-10


def _prop_unit_independence(ctx):
    worst = 0.0
    diag_unit = (E1 + E3) * (1.0 / math.sqrt(2.0))
    for _ in range(ctx.trials):
        t = random_qmatrix(ctx.rng, ctx.dim)
        for f in (_FUNCTIONS[0], _FUNCTIONS[2]):
            for unit in (E2, diag_unit):
                worst = max(worst, calculus.unit_independence_check(
                    t, f, unit, tol=ctx.tol) / max(1.0, t.norm()))
    return worst, 1e-8


# --- spectral systems ------------------------------------------------------------------


def _prop_measure_additivity(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        measure = dec.measure
        u_mid = np.median([s.u for s, _ in measure.support])
        left = systems.AxSet.rect(-1e6, float(u_mid), 0.0, math.inf)
        right = left.complement()
        gap = (measure.projection(left.union(right))
               - (measure.projection(left) + measure.projection(right))).norm()
        worst = max(worst, gap)
    return worst, 1e-14


def _prop_measure_multiplicativity(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        measure = dec.measure
        for _ in range(4):
            d1 = systems.AxSet.rect(*sorted(ctx.rng.uniform(-2, 2, 2)), 0.0,
                                    float(ctx.rng.uniform(0.5, 2.5)))
            d2 = systems.AxSet.rect(*sorted(ctx.rng.uniform(-2, 2, 2)), 0.0,
                                    float(ctx.rng.uniform(0.5, 2.5)))
            gap = (measure.projection(d1.intersect(d2))
                   - measure.projection(d1) @ measure.projection(d2)).norm()
            worst = max(worst, gap)
    return worst, 1e-10


def _prop_system_coupling(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        j = dec.orientation
        p_nonreal = dec.measure.projection(systems.AxSet.nonreal())
        worst = max(worst, (-(j @ j) - p_nonreal).norm())
        # rank agreement ker J = ran E(R)
        p_real = dec.measure.projection(systems.AxSet.reals())
        sv_j = np.linalg.svd(j.embed(), compute_uv=False)
        cut = ctx.tol.rank_rel * max(1.0, j.norm())
        rank_j = int((sv_j > cut).sum())
        sv_p = np.linalg.svd(p_real.embed(), compute_uv=False)
        rank_p = int((sv_p > 0.5).sum())
        worst = max(worst, float(abs((2 * ctx.dim - rank_j) - rank_p)))
    return worst, 1e-10


def _prop_integral_homomorphism(ctx):
    worst = 0.0
    f, g = _FUNCTIONS[0], _FUNCTIONS[2]
    fg = slicefun.product(f, g)
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        int_f = systems.spectral_integral(dec.system, f)
        int_g = systems.spectral_integral(dec.system, g)
        int_fg = systems.spectral_integral(dec.system, fg)
        sup = max(1.0, max(abs(complex(*f.alpha_beta(s.u, s.v)))
                           * abs(complex(*g.alpha_beta(s.u, s.v)))
                           for s, _ in dec.measure.support))
        worst = max(worst, (int_fg - int_f @ int_g).norm() / sup)
    return worst, 1e-9


def _prop_commutation_transport(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        a = t @ t + t * 0.7 + QMatrix.identity(ctx.dim) * 0.3
        integral = systems.spectral_integral(dec.system, _FUNCTIONS[2])
        worst = max(worst, (a @ integral - integral @ a).norm()
                    / max(1.0, a.norm() * integral.norm()))
    return worst, 1e-10


def _prop_eigensphere_splitting(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, spheres = random_spectral_qmatrix(ctx.rng, ctx.dim)
        spec = s_spectrum(t, ctx.tol)
        nonreal = [s for s, _ in spec.spheres if s.v > 0.0]
        if not nonreal:
            continue
        sphere = nonreal[0]
        s = sphere.representative()
        q = t @ t - t * (2.0 * sphere.u) + QMatrix.identity(ctx.dim) * (sphere.radius ** 2)
        kernel = qlinalg.null_space(q, ctx.tol)
        s_i = Quaternion.from_axial(sphere.u, sphere.v, E1)
        for v in kernel:
            v1, v2 = systems.split_eigensphere(t, s, v)
            worst = max(worst, (v1 + v2 - v).norm(),
                        (t @ v1 - v1 * s_i).norm(),
                        (t @ v2 - v2 * s_i.conjugate()).norm())
    return worst, 1e-9


# --- spectral operators -----------------------------------------------------------------


def _prop_uniqueness(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        again = spectral.spectral_decomposition(t, ctx.tol)
        worst = max(worst, (dec.orientation - again.orientation).norm())
        report = spectral.complex_equivalence_check(t, ctx.tol, dec=dec)
        worst = max(worst, report["e_distance"], report["j_distance"])
    return worst, 1e-8


def _prop_restriction_stability(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        if len(dec.measure.support) < 2:
            continue
        sphere, proj = dec.measure.support[0]
        basis = qlinalg.column_basis(proj, ctx.tol)
        if not basis:
            continue
        t_r = qlinalg.restrict_operator(t, basis)
        j_r = qlinalg.restrict_operator(dec.orientation, basis)
        dec_r = spectral.spectral_decomposition(t_r, ctx.tol)
        worst = max(worst, (dec_r.orientation - j_r).norm())
        worst = max(worst, (dec_r.measure.total()
                            - QMatrix.identity(t_r.n)).norm())
    return worst, 1e-7


def _prop_commutant(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        a = t @ t * 0.5 + t * 1.1 + QMatrix.identity(ctx.dim) * 0.2
        scale = max(1.0, a.norm())
        for _, proj in dec.measure.support:
            worst = max(worst, (a @ proj - proj @ a).norm() / scale)
        worst = max(worst, (a @ dec.orientation - dec.orientation @ a).norm() / scale)
    return worst, 1e-9


def _prop_nilpotent_shift(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        dim = max(ctx.dim, 2)
        lam = Quaternion.from_axial(0.4, 1.1, random_unit(ctx.rng))
        entries = [[Quaternion() for _ in range(dim)] for _ in range(dim)]
        for k in range(dim):
            entries[k][k] = lam if k < 2 else Quaternion.from_real(-1.0 + 0.2 * k)
        t0 = QMatrix(entries)
        shift = [[Quaternion() for _ in range(dim)] for _ in range(dim)]
        shift[0][1] = Quaternion.from_real(0.8)
        n0 = QMatrix(shift)
        from .sampling import _well_conditioned

        w, w_inv = _well_conditioned(ctx.rng, dim)
        t = w @ t0 @ w_inv
        n = w @ n0 @ w_inv
        a = s_spectrum(t, ctx.tol).trace_points()
        b = s_spectrum(t + n, ctx.tol).trace_points()
        worst = max(worst, hausdorff_distance(a, b))
    return worst, 1e-7


def _prop_taylor_vs_contour(ctx):
    # defective models stay triangular so the eigenvalue clusters are exact
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim, diagonalizable=False,
                                       conjugate=False)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        for f in (_FUNCTIONS[0], _FUNCTIONS[1], _FUNCTIONS[2]):
            via_taylor = spectral.taylor_funcalc(dec, f)
            via_contour = calculus.funcalc(t, f, tol=ctx.tol)
            worst = max(worst, (via_taylor - via_contour).norm()
                        / max(1.0, via_contour.norm()))
    return worst, 1e-6


def _prop_probe_invertibility(ctx):
    worst = 0.0
    for _ in range(ctx.trials):
        t, _ = random_spectral_qmatrix(ctx.rng, ctx.dim)
        dec = spectral.spectral_decomposition(t, ctx.tol)
        worst = max(worst, dec.residuals["probe_invertibility"])
    return worst, 1e-9


PROPERTIES = [
    ("quaternion.conjugation_sphere", _prop_conjugation_sphere),
    ("quaternion.conj_antihomomorphism", _prop_conj_antihomomorphism),
    ("quaternion.axial_roundtrip", _prop_axial_roundtrip),
    ("slicefun.intrinsic_symmetry", _prop_intrinsic_symmetry),
    ("slicefun.representation_formula", _prop_representation_formula),
    ("slicefun.product_closure", _prop_product_closure),
    ("slicefun.kernel_antisymmetry", _prop_kernel_antisymmetry),
    ("slicefun.cauchy_convergence", _prop_cauchy_convergence),
    ("qlinalg.embed_homomorphism", _prop_embed_homomorphism),
    ("qlinalg.chart_isometry", _prop_chart_isometry),
    ("qlinalg.spectral_radius", _prop_spectral_radius),
    ("qlinalg.conjugation_closure", _prop_conjugation_closure),
    ("qlinalg.eigenvector_transport", _prop_eigenvector_transport),
    ("resolvents.pseudo_conj_invariance", _prop_pseudo_conj_invariance),
    ("resolvents.factorization", _prop_factorization),
    ("resolvents.sresolvent_equation", _prop_sresolvent_equation),
    ("resolvents.series_vs_direct", _prop_series_vs_direct),
    ("resolvents.field_holomorphic", _prop_field_holomorphic),
    ("calculus.polynomial_consistency", _prop_polynomial_consistency),
    ("calculus.riesz_completeness", _prop_riesz_completeness),
    ("calculus.oracle_equivalence", _prop_oracle_equivalence),
    ("calculus.contour_independence", _prop_contour_independence),
    ("calculus.unit_independence", _prop_unit_independence),
    ("systems.measure_additivity", _prop_measure_additivity),
    ("systems.measure_multiplicativity", _prop_measure_multiplicativity),
    ("systems.coupling", _prop_system_coupling),
    ("systems.integral_homomorphism", _prop_integral_homomorphism),
    ("systems.commutation_transport", _prop_commutation_transport),
    ("systems.eigensphere_splitting", _prop_eigensphere_splitting),
    ("spectral.uniqueness", _prop_uniqueness),
    ("spectral.restriction_stability", _prop_restriction_stability),
    ("spectral.commutant", _prop_commutant),
    ("spectral.nilpotent_shift", _prop_nilpotent_shift),
    ("spectral.taylor_vs_contour", _prop_taylor_vs_contour),
    ("spectral.probe_invertibility", _prop_probe_invertibility),
]


def run_properties(seed: int = 1, dim: int = 3, trials: int = 3,
                   tol: Tolerances | None = None, names=None):
    """Run the registered invariants; returns a list of PropertyResult."""
    tol = resolve(tol)
    root = np.random.default_rng(seed)
    results = []
    for name, fn in PROPERTIES:
        if names is not None and name not in names:
            continue
        rng = np.random.default_rng(root.integers(0, 2 ** 63))
        ctx = _Ctx(rng, dim, trials, tol)
        try:
            worst, bound = fn(ctx)
            results.append(PropertyResult(name, bool(worst <= bound), float(worst),
                                          float(bound)))
        except QSpectraError as exc:
            results.append(PropertyResult(name, False, math.inf, math.nan,
                                          detail=str(exc)))
    return results
