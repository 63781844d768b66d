import math

import numpy as np
import pytest

from qspectra import (
    E1,
    E2,
    ONE,
    ConditioningError,
    ExponentialFunction,
    PolynomialFunction,
    Quaternion,
    QMatrix,
    cex_truncation,
    complex_equivalence_check,
    funcalc,
    hausdorff_distance,
    pushforward_decomposition,
    s_spectrum,
    spectral_decomposition,
    spectral_integral,
    taylor_funcalc,
)
from qspectra.qlinalg import column_basis, restrict_operator
from qspectra.sampling import random_spectral_qmatrix

EXP = ExponentialFunction()
SQUARE = PolynomialFunction([0, 0, 1.0])
CUBIC = PolynomialFunction([0.0, -2.0, 0.0, 1.0])
JORDAN = QMatrix([[E1, ONE], [Quaternion(), E1]])


class TestDecompositionExamples:
    def test_two_unit_diagonal(self):
        # diag(e1, e2): one sphere, measure = identity, orientation = operator
        t = QMatrix.diagonal([E1, E2])
        dec = spectral_decomposition(t)
        assert len(dec.measure) == 1
        sphere, proj = dec.measure.support[0]
        assert (sphere.u, sphere.v) == pytest.approx((0.0, 1.0), abs=1e-12)
        assert (proj - QMatrix.identity(2)).norm() < 1e-10
        assert (dec.orientation - t).norm() < 1e-10
        assert (dec.scalar_part - t).norm() < 1e-10
        assert dec.radical_part.norm() < 1e-10
        assert dec.type_m == 0

    def test_real_diagonal(self):
        t = QMatrix.diagonal([Quaternion(1.0), Quaternion(-2.0)])
        dec = spectral_decomposition(t)
        assert dec.orientation.norm() == 0.0
        assert (dec.scalar_part - t).norm() < 1e-10
        assert dec.radical_part.norm() < 1e-10

    def test_jordan_block(self):
        dec = spectral_decomposition(JORDAN)
        assert (dec.scalar_part - QMatrix.diagonal([E1, E1])).norm() < 1e-9
        expected_n = QMatrix([[Quaternion(), ONE], [Quaternion(), Quaternion()]])
        assert (dec.radical_part - expected_n).norm() < 1e-9
        assert dec.type_m == 1
        assert (dec.orientation - QMatrix.diagonal([E1, E1])).norm() < 1e-9

    def test_canonical_invariants(self, rng):
        for _ in range(5):
            t, _ = random_spectral_qmatrix(rng, 4)
            dec = spectral_decomposition(t)
            s_, n_ = dec.scalar_part, dec.radical_part
            assert (s_ @ n_ - n_ @ s_).norm() < 1e-9
            assert n_.power(4).norm() < 1e-9
            assert (s_ + n_ - t).norm() < 1e-12
            # scalar part reproduces the spectral integral of the identity
            from qspectra.spectral import _IdentityFunction

            again = spectral_integral(dec.system, _IdentityFunction())
            assert (again - s_).norm() == 0.0
            # same sphere set for T and S
            a = s_spectrum(t).trace_points()
            b = s_spectrum(s_).trace_points()
            assert hausdorff_distance(a, b) < 1e-8 * max(1.0, t.norm())

    def test_residual_block_present(self, rng):
        t, _ = random_spectral_qmatrix(rng, 3)
        dec = spectral_decomposition(t)
        for key in ("idempotency", "coupling", "commutation", "nilpotency",
                    "restriction", "probe_invertibility"):
            assert key in dec.residuals
        assert dec.residuals["probe_label"] == "sampled"

    def test_near_degenerate_spheres_rejected(self):
        t = QMatrix.diagonal([E1, E1 * (1.0 + 5e-8)])
        with pytest.raises(ConditioningError):
            spectral_decomposition(t)

    def test_json_shape(self):
        dec = spectral_decomposition(JORDAN)
        data = dec.to_json()
        assert set(data) == {"S", "N", "system", "type_m", "residuals"}
        assert data["type_m"] == 1
        assert len(data["system"]["spheres"]) == 1


class TestTaylorCalculus:
    def test_constant_and_identity(self):
        dec = spectral_decomposition(JORDAN)
        one = taylor_funcalc(dec, PolynomialFunction([1.0]))
        assert (one - QMatrix.identity(2)).norm() < 1e-10
        ident = taylor_funcalc(dec, PolynomialFunction([0, 1.0]))
        assert (ident - JORDAN).norm() < 1e-10

    def test_exp_on_jordan_matches_contour(self):
        dec = spectral_decomposition(JORDAN)
        via_taylor = taylor_funcalc(dec, EXP)
        via_contour = funcalc(JORDAN, EXP)
        assert (via_taylor - via_contour).norm() < 1e-6

    def test_exp_jordan_closed_form(self):
        # exp([[i, 1], [0, i]]) = [[e^i, e^i], [0, e^i]] in the e1 plane
        dec = spectral_decomposition(JORDAN)
        got = taylor_funcalc(dec, EXP)
        e_i = Quaternion(math.cos(1.0), math.sin(1.0), 0, 0)
        expected = QMatrix([[e_i, e_i], [Quaternion(), e_i]])
        assert (got - expected).norm() < 1e-9

    def test_random_cross_route(self, rng):
        for _ in range(5):
            t, _ = random_spectral_qmatrix(rng, 4, diagonalizable=False,
                                           conjugate=False)
            dec = spectral_decomposition(t)
            for f in (SQUARE, CUBIC, EXP):
                a = taylor_funcalc(dec, f)
                b = funcalc(t, f)
                assert (a - b).norm() < 1e-6 * max(1.0, b.norm())


class TestPushforward:
    def test_identity_keeps_decomposition(self):
        dec = spectral_decomposition(QMatrix.diagonal([E1, Quaternion(2.0)]))
        pushed = pushforward_decomposition(dec, PolynomialFunction([0, 1.0]))
        assert (pushed.orientation - dec.orientation).norm() < 1e-10
        assert (pushed.scalar_part - dec.scalar_part).norm() < 1e-10
        assert len(pushed.measure) == len(dec.measure)

    def test_square_of_unit_sphere_becomes_real(self):
        dec = spectral_decomposition(QMatrix.diagonal([E1]))
        pushed = pushforward_decomposition(dec, SQUARE)
        sphere, proj = pushed.measure.support[0]
        assert (sphere.u, sphere.v) == pytest.approx((-1.0, 0.0), abs=1e-10)
        assert pushed.orientation.norm() < 1e-12
        assert (pushed.scalar_part - QMatrix.diagonal([Quaternion(-1.0)])).norm() \
            < 1e-10

    def test_merge_is_reported(self):
        # +-1 map to the same point under squaring
        t = QMatrix.diagonal([Quaternion(1.0), Quaternion(-1.0)])
        dec = spectral_decomposition(t)
        pushed = pushforward_decomposition(dec, SQUARE)
        assert len(pushed.measure) == 1
        assert pushed.residuals["merged"]
        assert (pushed.measure.total() - QMatrix.identity(2)).norm() < 1e-10

    def test_matches_direct_decomposition(self, rng):
        done = 0
        while done < 5:
            t, _ = random_spectral_qmatrix(rng, 3)
            dec = spectral_decomposition(t)
            ft = taylor_funcalc(dec, EXP)
            try:
                direct = spectral_decomposition(ft)
            except ConditioningError:
                continue
            done += 1
            pushed = pushforward_decomposition(dec, EXP)
            assert len(direct.measure) == len(pushed.measure)
            for (sa, pa), (sb, pb) in zip(pushed.measure.support,
                                          direct.measure.support):
                assert sa.distance(sb) < 1e-8 * max(1.0, ft.norm())
                assert (pa - pb).norm() < 1e-8 * max(1.0, ft.norm())
            assert (pushed.orientation - direct.orientation).norm() \
                < 1e-8 * max(1.0, ft.norm())


class TestCounterexample:
    def test_small_report(self):
        report = cex_truncation(3)
        assert [r["m"] for r in report["rows"]] == [1, 2, 3]
        assert report["rows"][0]["j_norm"] >= 2.0
        assert report["dimension"] == 6
        assert report["full_spectrum_error"] < 1e-12

    def test_growth_and_bounds(self):
        report = cex_truncation(12)
        for row in report["rows"]:
            assert row["j_norm"] >= row["lower_bound"]
            assert row["eigvec_residual"] < 1e-12
            assert row["sigma_error"] < 1e-12
        assert report["norm_growth_monotone"]

    def test_exact_norm_value(self):
        # the 2-norm of [[i, 2mi], [0, -i]] solves x^4 - (4m^2+2) x^2 + 1 = 0
        report = cex_truncation(5)
        for row in report["rows"]:
            m = row["m"]
            lam = (4 * m * m + 2 + math.sqrt((4 * m * m + 2) ** 2 - 4)) / 2.0
            assert row["j_norm"] == pytest.approx(math.sqrt(lam), rel=1e-12)

    def test_input_validation(self):
        from qspectra import DomainError

        with pytest.raises(DomainError):
            cex_truncation(0)


class TestComplexEquivalence:
    def test_diagonalizable(self, rng):
        for _ in range(5):
            t, _ = random_spectral_qmatrix(rng, 3)
            report = complex_equivalence_check(t)
            assert report["e_distance"] < 1e-8
            assert report["j_distance"] < 1e-8

    def test_real_matrix_orientation_exact_zero(self):
        t = QMatrix.diagonal([Quaternion(1.0), Quaternion(2.0)])
        dec = spectral_decomposition(t)
        assert dec.orientation.norm() == 0.0
        report = complex_equivalence_check(t, dec=dec)
        assert report["j_distance"] == 0.0

    def test_jordan_block(self):
        report = complex_equivalence_check(JORDAN)
        assert report["e_distance"] < 1e-8
        assert report["j_distance"] < 1e-8

    def test_uniqueness_between_runs(self, rng):
        t, _ = random_spectral_qmatrix(rng, 4)
        a = spectral_decomposition(t)
        b = spectral_decomposition(t)
        assert (a.orientation - b.orientation).norm() < 1e-8
        for (_, pa), (_, pb) in zip(a.measure.support, b.measure.support):
            assert (pa - pb).norm() < 1e-8


class TestRestrictionAndCommutant:
    def test_restriction_stability(self, rng):
        done = 0
        while done < 3:
            t, _ = random_spectral_qmatrix(rng, 4)
            dec = spectral_decomposition(t)
            if len(dec.measure) < 2:
                continue
            done += 1
            _, proj = dec.measure.support[0]
            basis = column_basis(proj)
            t_r = restrict_operator(t, basis)
            j_r = restrict_operator(dec.orientation, basis)
            dec_r = spectral_decomposition(t_r)
            assert (dec_r.orientation - j_r).norm() < 1e-7
            assert len(dec_r.measure) == 1

    def test_commutant_transport(self, rng):
        t, _ = random_spectral_qmatrix(rng, 3)
        dec = spectral_decomposition(t)
        a = t @ t * 0.4 + t * 1.2 + QMatrix.identity(3) * 0.1
        for _, proj in dec.measure.support:
            assert (a @ proj - proj @ a).norm() < 1e-9 * max(1.0, a.norm())
        assert (a @ dec.orientation - dec.orientation @ a).norm() \
            < 1e-9 * max(1.0, a.norm())

    def test_probe_invertibility_sampled(self, rng):
        t, _ = random_spectral_qmatrix(rng, 4)
        dec = spectral_decomposition(t)
        assert dec.residuals["probe_invertibility"] < 1e-9
