"""Acceptance suite: the twelve primary criteria, one pass/fail line each.

Every criterion pins its tolerance here; nothing is deferred to runtime
calibration.  Run with ``pytest tests/test_acceptance.py -v -s`` to see the
per-criterion lines, or execute the file directly.
"""

import math

import numpy as np
import pytest

import qspectra as qs
from qspectra import (
    E1,
    E2,
    E3,
    ExponentialFunction,
    PolynomialFunction,
    Quaternion,
    QMatrix,
    hausdorff_distance,
    s_spectrum,
)
from qspectra.sampling import (
    random_admissible_point,
    random_qmatrix,
    random_spectral_qmatrix,
    random_unit,
)

EXP = ExponentialFunction()
SQUARE = PolynomialFunction([0.0, 0.0, 1.0])
CUBIC = PolynomialFunction([0.0, -2.0, 0.0, 1.0])
DIAG_UNIT = (E1 + E3) * (1.0 / math.sqrt(2.0))


def _report(num: int, ok: bool, detail: str):
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


# --- shared matrix pools -----------------------------------------------------------


def _spectral_pool():
    """20 spectral matrices, dims 2-6: diagonalizable plus triangular defective."""
    rng = np.random.default_rng(202)
    pool = []
    for k in range(20):
        n = int(rng.integers(2, 7))
        defective = (k % 4 == 3)
        t, _ = random_spectral_qmatrix(rng, n, diagonalizable=not defective)
        pool.append(t)
    return pool


@pytest.fixture(scope="module")
def spectral_pool():
    return _spectral_pool()


@pytest.fixture(scope="module")
def pool_decompositions(spectral_pool):
    return [qs.spectral_decomposition(t) for t in spectral_pool]


@pytest.fixture(scope="module")
def triple():
    t1 = QMatrix.diagonal([E1, E1])
    t2 = QMatrix.diagonal([E1, E2])
    t3 = QMatrix.diagonal([E2, E2])
    return [t1, t2, t3]


@pytest.fixture(scope="module")
def triple_decompositions(triple):
    return [qs.spectral_decomposition(t) for t in triple]


def test_criterion_01_embedded_spectrum_equality():
    """Embedded eigenvalues against S-spectrum trace points, 50 matrices."""
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 9))
        t = random_qmatrix(rng, n)
        eigs = qs.complex_eigenvalues(t.embed())
        pts = s_spectrum(t).trace_points()
        gap = hausdorff_distance(eigs, pts) / max(1.0, t.norm())
        worst = max(worst, gap)
    _report(1, worst < 1e-8, f"worst normalized Hausdorff gap {worst:.3e} < 1e-8")


def test_criterion_02_shared_measure_distinct_orientations(
        triple, triple_decompositions):
    """diag(e1,e1), diag(e1,e2), diag(e2,e2): same E, different J."""
    ok = True
    details = []
    for t, dec in zip(triple, triple_decompositions):
        spheres = [(s.u, s.v, m) for s, m in dec.spectrum]
        if len(spheres) != 1 or spheres[0][2] != 2:
            ok = False
        if abs(spheres[0][0]) > 1e-10 or abs(spheres[0][1] - 1.0) > 1e-10:
            ok = False
    e_gap = 0.0
    for a in triple_decompositions:
        for b in triple_decompositions:
            e_gap = max(e_gap, (a.measure.support[0][1]
                                - b.measure.support[0][1]).norm())
    ok = ok and e_gap < 1e-9
    j_min = math.inf
    for i in range(3):
        for j in range(i + 1, 3):
            j_min = min(j_min, (triple_decompositions[i].orientation
                                - triple_decompositions[j].orientation).norm())
    ok = ok and j_min > 0.5
    _report(2, ok, f"measure gap {e_gap:.3e} < 1e-9, orientation separation "
                   f"{j_min:.3f} > 0.5")


def test_criterion_03_calculus_consistency(spectral_pool, pool_decompositions):
    """funcalc(s^2) = T^2 and contour exp = Taylor exp on 20 matrices."""
    worst_sq = 0.0
    worst_exp = 0.0
    for t, dec in zip(spectral_pool, pool_decompositions):
        sq = qs.funcalc(t, SQUARE)
        direct = t @ t
        worst_sq = max(worst_sq, (sq - direct).norm() / max(1.0, direct.norm()))
        via_contour = qs.funcalc(t, EXP)
        via_taylor = qs.taylor_funcalc(dec, EXP)
        worst_exp = max(worst_exp, (via_contour - via_taylor).norm()
                        / max(1.0, via_contour.norm()))
    ok = worst_sq < 1e-8 and worst_exp < 1e-6
    _report(3, ok, f"square residual {worst_sq:.3e} < 1e-8, "
                   f"exp cross-route {worst_exp:.3e} < 1e-6")


def test_criterion_04_unit_independence(spectral_pool):
    """Calculus independent of the imaginary unit for exp and s^2."""
    worst = 0.0
    for t in spectral_pool[:4]:
        for f in (EXP, SQUARE):
            for unit in (E2, DIAG_UNIT):
                gap = qs.unit_independence_check(t, f, unit) / max(1.0, t.norm())
                worst = max(worst, gap)
    _report(4, worst < 1e-8, f"worst unit-independence gap {worst:.3e} < 1e-8")


def test_criterion_05_sresolvent_equation():
    """Residual of the two-variable resolvent identity at sampled points."""
    rng = np.random.default_rng(51)
    worst = 0.0
    for _ in range(10):
        n = int(rng.integers(2, 6))
        t = random_qmatrix(rng, n)
        spec = s_spectrum(t)
        pairs = 0
        while pairs < 20:
            s = random_admissible_point(rng, spec, 2.0, 0.25)
            x = random_admissible_point(rng, spec, 2.0, 0.25)
            if qs.same_sphere(s, x, 0.05):
                continue
            pairs += 1
            res = qs.sresolvent_equation_residual(t, s, x)
            worst = max(worst, res / t.norm())
    _report(5, worst < 1e-9, f"worst residual {worst:.3e} < 1e-9 * ||T||")


def test_criterion_06_spectral_system_axioms(pool_decompositions,
                                             triple_decompositions,
                                             spectral_pool, triple):
    """Coupling, multiplicativity and commutation on every decomposition."""
    worst = 0.0
    for t, dec in zip(spectral_pool + triple,
                      pool_decompositions + triple_decompositions):
        j = dec.orientation
        coupling = (-(j @ j)
                    - dec.measure.projection(qs.AxSet.nonreal())).norm()
        report = dec.measure.validate()
        commute = max((p @ t - t @ p).norm() for _, p in dec.measure.support)
        commute = max(commute, (j @ t - t @ j).norm())
        worst = max(worst, coupling, report["idempotency"],
                    report["annihilation"], commute)
    _report(6, worst < 1e-9, f"worst axiom residual {worst:.3e} < 1e-9")


def test_criterion_07_canonical_decomposition(spectral_pool,
                                              pool_decompositions):
    """N nilpotent, S and N commute, S-spectrum preserved."""
    worst_nil = 0.0
    worst_comm = 0.0
    worst_spec = 0.0
    for t, dec in zip(spectral_pool, pool_decompositions):
        s_, n_ = dec.scalar_part, dec.radical_part
        worst_nil = max(worst_nil, n_.power(t.n).norm())
        worst_comm = max(worst_comm, (s_ @ n_ - n_ @ s_).norm())
        gap = hausdorff_distance(s_spectrum(t).trace_points(),
                                 s_spectrum(s_).trace_points())
        worst_spec = max(worst_spec, gap / max(1.0, t.norm()))
    ok = worst_nil < 1e-9 and worst_comm < 1e-9 and worst_spec < 1e-8
    _report(7, ok, f"nilpotency {worst_nil:.3e} < 1e-9, commutation "
                   f"{worst_comm:.3e} < 1e-9, spectrum gap {worst_spec:.3e} < 1e-8")


def test_criterion_08_uniqueness_against_complex_route(spectral_pool,
                                                       pool_decompositions):
    """Pipeline (E, J) equals the complex spectral resolution rebuild."""
    worst = 0.0
    for t, dec in zip(spectral_pool, pool_decompositions):
        report = qs.complex_equivalence_check(t, dec=dec)
        worst = max(worst, report["e_distance"], report["j_distance"])
    _report(8, worst < 1e-8, f"worst route distance {worst:.3e} < 1e-8")


def test_criterion_09_eigensphere_splitting():
    """Generalized eigenvectors split into genuine eigenvector pairs."""
    rng = np.random.default_rng(99)
    worst = 0.0
    matrices = 0
    while matrices < 10:
        t, spheres = random_spectral_qmatrix(rng, int(rng.integers(2, 6)))
        nonreal = [sp for sp in spheres if sp[1] > 0.0]
        if not nonreal:
            continue
        matrices += 1
        u, v = nonreal[0]
        s = Quaternion(u, v, 0.0, 0.0)
        q = t @ t - t * (2.0 * u) + QMatrix.identity(t.n) * (u * u + v * v)
        kernel = qs.null_space(q)
        assert kernel, "kernel of the sphere polynomial must be nontrivial"
        for vec in kernel:
            v1, v2 = qs.split_eigensphere(t, s, vec)
            worst = max(worst, (v1 + v2 - vec).norm(),
                        (t @ v1 - v1 * Quaternion(u, v, 0, 0)).norm(),
                        (t @ v2 - v2 * Quaternion(u, -v, 0, 0)).norm())
    _report(9, worst < 1e-9, f"worst splitting residual {worst:.3e} < 1e-9")


def test_criterion_10_counterexample_growth():
    """Orientation norms of the truncations grow like 2m."""
    report = qs.cex_truncation(50)
    lower_ok = all(r["j_norm"] >= r["lower_bound"] for r in report["rows"])
    ratio_ok = all(2.0 <= r["ratio"] <= 2.2 for r in report["rows"]
                   if r["m"] >= 10)
    ratios = [r["ratio"] for r in report["rows"] if r["m"] >= 10]
    _report(10, lower_ok and ratio_ok,
            f"all ||J_m|| >= 2m, ratios in [{min(ratios):.4f}, {max(ratios):.4f}]"
            f" within [2, 2.2] for m >= 10")


def test_criterion_11_scalar_function_theory():
    """Representation formula and slice Cauchy reconstruction, 1000 points."""
    rng = np.random.default_rng(111)
    contour = qs.ContourSpec((qs.Circle(0j, 2.2),))
    worst_rep = 0.0
    worst_cauchy = 0.0
    for k in range(1000):
        f = EXP if k % 2 == 0 else CUBIC
        x = Quaternion(*(rng.uniform(-0.8, 0.8, 4)))
        unit = random_unit(rng)
        direct = qs.evaluate(f, x)
        via = qs.eval_via_representation(f, x, unit)
        worst_rep = max(worst_rep, abs(via - direct) / (1.0 + abs(direct)))
        recon = qs.cauchy_sweep(f, x, contour, nodes=256)
        worst_cauchy = max(worst_cauchy,
                           abs(recon - direct) / (1.0 + abs(direct)))
    ok = worst_rep < 1e-10 and worst_cauchy < 1e-6
    _report(11, ok, f"representation {worst_rep:.3e} < 1e-10, "
                    f"reconstruction {worst_cauchy:.3e} < 1e-6")


def _mapping_pool():
    """Diagonalizable matrices whose sphere images stay separated under the
    mapping functions, so the direct decomposition of f(T) is well posed."""
    rng = np.random.default_rng(303)
    pool = []
    while len(pool) < 20:
        t, spheres = random_spectral_qmatrix(rng, int(rng.integers(2, 5)))
        good = True
        for f in (SQUARE, CUBIC, EXP):
            images = [f.stem(complex(u, v)) for u, v in spheres]
            pts = [(mu.real, abs(mu.imag)) for mu in images]
            scale = max(1.0, max(abs(mu) for mu in images))
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    if math.hypot(pts[i][0] - pts[j][0],
                                  pts[i][1] - pts[j][1]) < 0.05 * scale:
                        good = False
        if good:
            pool.append(t)
    return pool


def test_criterion_12_spectral_mapping_and_pushforward():
    """Spectral mapping plus transported decomposition of f(T)."""
    worst_map = 0.0
    worst_push = 0.0
    for t in _mapping_pool():
        dec = qs.spectral_decomposition(t)
        for f in (SQUARE, CUBIC, EXP):
            ft = qs.funcalc(t, f)
            image = qs.spectrum_image(dec.spectrum, f)
            mapped = s_spectrum(ft).trace_points()
            scale = max(1.0, float(np.abs(image).max()))
            worst_map = max(worst_map,
                            hausdorff_distance(image, mapped) / scale)

            pushed = qs.pushforward_decomposition(dec, f)
            direct = qs.spectral_decomposition(ft)
            norm_scale = max(1.0, ft.norm())
            assert len(pushed.measure) == len(direct.measure)
            for (sa, pa), (sb, pb) in zip(pushed.measure.support,
                                          direct.measure.support):
                worst_push = max(worst_push, sa.distance(sb) / norm_scale,
                                 (pa - pb).norm() / norm_scale)
            worst_push = max(
                worst_push,
                (pushed.orientation - direct.orientation).norm() / norm_scale,
                (pushed.scalar_part - direct.scalar_part).norm() / norm_scale)
    ok = worst_map < 1e-7 and worst_push < 1e-8
    _report(12, ok, f"mapping Hausdorff {worst_map:.3e} < 1e-7 * scale, "
                    f"pushforward gap {worst_push:.3e} < 1e-8")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", "-s"]))
