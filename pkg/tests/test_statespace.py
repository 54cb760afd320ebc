"""State-space systems: evaluation, poles, minimality, DC gain, residues."""

import numpy as np
import pytest

from nistab import StateSpace, dc_gain, eval_tf, is_minimal, poles, residue_at_pole
from nistab.exceptions import (
    DimensionError,
    NearPoleError,
    NotAPoleError,
    NotSimplePoleError,
    SingularAError,
)


class TestConstruction:
    def test_dimension_checks(self):
        with pytest.raises(DimensionError):
            StateSpace([[0, 1]], [[1]], [[1]], [[0]])
        with pytest.raises(DimensionError):
            StateSpace([[0]], [[1], [2]], [[1]], [[0]])
        with pytest.raises(DimensionError):
            StateSpace([[0]], [[1]], [[1, 2]], [[0]])
        with pytest.raises(DimensionError):
            StateSpace([[0]], [[1]], [[1]], [[0, 0], [0, 0]])

    def test_rejects_non_finite(self):
        with pytest.raises(DimensionError):
            StateSpace([[np.inf]], [[1]], [[1]], [[0]])

    def test_immutable(self, first_order):
        with pytest.raises(ValueError):
            first_order.A[0, 0] = 5.0


class TestEvalTf:
    def test_dc_value(self, first_order):
        np.testing.assert_allclose(eval_tf(first_order, 0.0), [[1.0]], atol=1e-14)

    def test_at_j(self, first_order):
        # 1/(1 + j) = 0.5 - 0.5j
        np.testing.assert_allclose(eval_tf(first_order, 1j), [[0.5 - 0.5j]], atol=1e-14)

    def test_feedthrough_only(self):
        sys = StateSpace([[-3.0]], [[0.0]], [[1.0]], [[3.0]])
        np.testing.assert_allclose(eval_tf(sys, 5j), [[3.0]], atol=0)

    def test_near_pole_guard(self, osc):
        with pytest.raises(NearPoleError) as err:
            eval_tf(osc, 1j)
        assert err.value.eigenvalue == pytest.approx(1j, abs=1e-8)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(2)
        for _ in range(15):
            n, m = int(rng.integers(1, 6)), int(rng.integers(1, 4))
            sys = StateSpace(rng.standard_normal((n, n)) - 2 * np.eye(n),
                             rng.standard_normal((n, m)),
                             rng.standard_normal((m, n)),
                             rng.standard_normal((m, m)))
            s = complex(rng.standard_normal(), rng.standard_normal())
            G = eval_tf(sys, s)
            Gc = eval_tf(sys, np.conj(s))
            assert np.abs(Gc - np.conj(G)).max() <= 1e-12 * max(1.0, np.abs(G).max())


class TestPoles:
    def test_first_order(self, first_order):
        np.testing.assert_allclose(poles(first_order), [-1.0])

    def test_oscillator(self, osc):
        got = np.sort_complex(poles(osc))
        np.testing.assert_allclose(got, [-1j, 1j], atol=1e-12)

    def test_damped(self):
        # s^2 + 3s + 2 = (s+1)(s+2)
        sys = StateSpace([[0.0, 1.0], [-2.0, -3.0]], [[0.0], [1.0]], [[1.0, 0.0]], [[0.0]])
        np.testing.assert_allclose(sorted(poles(sys).real), [-2.0, -1.0], atol=1e-12)
        assert np.abs(poles(sys).imag).max() <= 1e-12

    def test_similarity_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            n, m = int(rng.integers(2, 6)), 1
            sys = StateSpace(rng.standard_normal((n, n)), rng.standard_normal((n, m)),
                             rng.standard_normal((m, n)), np.zeros((m, m)))
            T = rng.standard_normal((n, n)) + 3 * np.eye(n)
            Ti = np.linalg.inv(T)
            sim = StateSpace(T @ sys.A @ Ti, T @ sys.B, sys.C @ Ti, sys.D)
            p1 = sorted(poles(sys), key=lambda z: (z.real, z.imag))
            p2 = sorted(poles(sim), key=lambda z: (z.real, z.imag))
            assert np.abs(np.array(p1) - np.array(p2)).max() <= 1e-8 * max(
                1.0, np.abs(p1).max())


class TestIsMinimal:
    def test_siso_first_order(self, first_order):
        assert is_minimal(first_order)

    def test_decoupled_state(self):
        sys = StateSpace(np.diag([-1.0, -2.0]), [[1.0], [0.0]], [[1.0, 0.0]], [[0.0]])
        report = is_minimal(sys)
        assert not report
        bad = {(round(lam.real), kind) for lam, kind, _ in report.failures}
        assert (-2, "controllability") in bad and (-2, "observability") in bad

    def test_oscillator_kalman_rank(self, osc):
        # independent oracle: Kalman rank of [B, AB] and [C; CA]
        ctrb = np.hstack([osc.B, osc.A @ osc.B])
        obsv = np.vstack([osc.C, osc.C @ osc.A])
        assert np.linalg.matrix_rank(ctrb) == 2
        assert np.linalg.matrix_rank(obsv) == 2
        assert is_minimal(osc)


class TestDcGain:
    def test_first_order(self, first_order):
        np.testing.assert_allclose(dc_gain(first_order), [[1.0]], atol=1e-14)

    def test_oscillator(self, osc):
        # -C A^{-1} B with A^{-1} = [[0, -1], [1, 0]]
        np.testing.assert_allclose(dc_gain(osc), [[1.0]], atol=1e-14)

    def test_scaled(self):
        sys = StateSpace([[-2.0]], [[1.0]], [[0.5]], [[0.0]])
        np.testing.assert_allclose(dc_gain(sys), [[0.25]], atol=1e-14)

    def test_singular_a(self):
        integrator = StateSpace([[0.0, 1.0], [0.0, 0.0]], [[0.0], [1.0]],
                                [[1.0, 0.0]], [[0.0]])
        with pytest.raises(SingularAError):
            dc_gain(integrator)

    def test_matches_eval_tf(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            n, m = int(rng.integers(1, 6)), int(rng.integers(1, 4))
            sys = StateSpace(rng.standard_normal((n, n)) - 2 * np.eye(n),
                             rng.standard_normal((n, m)),
                             rng.standard_normal((m, n)),
                             rng.standard_normal((m, m)))
            with np.errstate(all="ignore"):
                import warnings

                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    G0 = dc_gain(sys)
            err = np.abs(G0 - eval_tf(sys, 0.0)).max()
            assert err <= 1e-10 * max(1.0, np.abs(G0).max())


def numerical_residue(sys, omega0):
    """Richardson-extrapolated limit of (s - j w0) s G(s) along the real offset."""
    vals = {}
    for eps in (1e-4, 1e-5):
        s = 1j * omega0 + eps
        vals[eps] = eps * s * eval_tf(sys, s)
    return (10.0 * vals[1e-5] - vals[1e-4]) / 9.0


class TestResidueAtPole:
    def test_oscillator(self, osc):
        rep = residue_at_pole(osc, 1.0)
        np.testing.assert_allclose(rep.K0, [[0.5]], atol=1e-10)
        assert rep.is_simple and rep.accepted()
        assert rep.min_eig == pytest.approx(0.5, abs=1e-10)

    def test_matches_numerical_limit(self, osc):
        rep = residue_at_pole(osc, 1.0)
        num = numerical_residue(osc, 1.0)
        assert np.abs(rep.K0 - num).max() <= 1e-5 * max(1.0, np.abs(num).max())

    def test_non_hermitian_residue(self, s_over_s2):
        # lim (s - j) s^2/(s^2+1) = j/2: not Hermitian, so not NI-acceptable
        rep = residue_at_pole(s_over_s2, 1.0)
        np.testing.assert_allclose(rep.K0, [[0.5j]], atol=1e-10)
        assert rep.hermitian_residual > 0.5
        assert not rep.accepted()
        num = numerical_residue(s_over_s2, 1.0)
        assert np.abs(rep.K0 - num).max() <= 1e-5

    def test_not_a_pole(self, first_order):
        with pytest.raises(NotAPoleError):
            residue_at_pole(first_order, 1.0)

    def test_repeated_pole_rejected(self):
        A = np.block([[np.array([[0.0, 1.0], [-1.0, 0.0]]), np.zeros((2, 2))],
                      [np.zeros((2, 2)), np.array([[0.0, 1.0], [-1.0, 0.0]])]])
        sys = StateSpace(A, np.array([[0.0], [1.0], [0.0], [1.0]]),
                         np.array([[1.0, 0.0, 1.0, 0.0]]), [[0.0]])
        with pytest.raises(NotSimplePoleError):
            residue_at_pole(sys, 1.0)
