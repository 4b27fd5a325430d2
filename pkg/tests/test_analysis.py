"""Rotated frames, direction prediction, reachability, synthesis, perturbation
bounds, the two-agent extension, and critical-point machinery."""

import numpy as np
import pytest

from swarmsync import (
    CriticalKind,
    GainVector,
    NonAcuteConeError,
    SimulationConfig,
    alignment_potential,
    classify_critical_point,
    conic_hull_contains,
    convex_weights,
    critical_point_hessian,
    is_reachable,
    laplacian,
    laplacian_potential_grad,
    named_gain_set,
    perturbation_bounds,
    predict_direction,
    ring_graph,
    rotated_frame,
    simulate,
    synthesize_gains,
    two_agent_direction,
    two_agent_gains,
    wrap_angle,
)

RNG = np.random.default_rng(505)

# weighted averages of the six reference headings, evaluated by hand:
#   set1: sum(hat/K) = -81 deg, sum(1/K) = -49/20  ->  1620/49 - 60 deg
#   set2: sum(hat/K) = -1725 deg, sum(1/K) = -21   ->  575/7 - 60 deg
SET1_DIRECTION_DEG = -1320.0 / 49.0
SET2_DIRECTION_DEG = 155.0 / 7.0


def random_acute_headings(rng, n=None, span_range=(0.2, 2.8)):
    if n is None:
        n = int(rng.integers(2, 9))
    span = rng.uniform(*span_range)
    hat = np.concatenate([[0.0, span], rng.uniform(0.0, span, n - 2)])
    return hat + rng.uniform(-np.pi, np.pi - span), span


class TestRotatedFrame:
    def test_six_agent_reference(self, six_theta0):
        frame = rotated_frame(six_theta0)
        assert frame.theta_R == pytest.approx(np.deg2rad(-60.0), abs=1e-12)
        np.testing.assert_allclose(
            np.degrees(frame.theta_hat0), [0.0, 15.0, 30.0, 90.0, 105.0, 120.0], atol=1e-10
        )
        assert frame.span == pytest.approx(np.deg2rad(120.0), abs=1e-12)
        assert frame.acute

    def test_identical_pair(self):
        frame = rotated_frame(np.deg2rad([10.0, 10.0]))
        assert frame.theta_R == pytest.approx(np.deg2rad(10.0), abs=1e-15)
        assert frame.span == 0.0
        assert frame.acute

    def test_arc_crossing_the_cut(self):
        """[170, -170] deg spans only 20 deg once the reference is chosen."""
        frame = rotated_frame(np.deg2rad([170.0, -170.0]))
        assert frame.theta_R == pytest.approx(np.deg2rad(170.0), abs=1e-12)
        assert frame.span == pytest.approx(np.deg2rad(20.0), abs=1e-12)
        assert frame.acute

    def test_antipodal_pair_not_acute(self):
        frame = rotated_frame(np.array([-np.pi / 2, np.pi / 2]))
        assert not frame.acute
        assert frame.span == pytest.approx(np.pi, abs=1e-12)

    def test_just_under_half_turn_is_acute(self):
        frame = rotated_frame(np.deg2rad([0.0, 179.99]))
        assert frame.acute

    def test_minimum_is_zero_and_entries_in_span(self):
        for _ in range(100):
            theta0, _ = random_acute_headings(RNG)
            frame = rotated_frame(theta0)
            assert frame.theta_hat0.min() == 0.0
            assert np.all(frame.theta_hat0 <= frame.span + 1e-12)

    def test_rejects_headings_outside_open_interval(self):
        with pytest.raises(ValueError):
            rotated_frame([0.0, np.pi])


class TestPredictDirection:
    def test_set1_reference_value(self, six_theta0):
        got = predict_direction(six_theta0, named_gain_set("set1", 6))
        assert got == pytest.approx(np.deg2rad(SET1_DIRECTION_DEG), abs=1e-9)

    def test_set2_reference_value(self, six_theta0):
        got = predict_direction(six_theta0, named_gain_set("set2", 6))
        assert got == pytest.approx(np.deg2rad(SET2_DIRECTION_DEG), abs=1e-9)

    def test_homogeneous_gains_give_arithmetic_mean(self, six_theta0):
        """Equal gains average the initial headings; the reference set is
        symmetric, so the mean is 0."""
        for k in (-0.5, -1.0, -4.0):
            got = predict_direction(six_theta0, np.full(6, k))
            assert got == pytest.approx(0.0, abs=1e-12)

    def test_rejects_positive_gain(self, six_theta0):
        with pytest.raises(ValueError):
            predict_direction(six_theta0, named_gain_set("set3", 6))

    def test_rejects_non_acute(self):
        with pytest.raises(NonAcuteConeError):
            predict_direction([-np.pi / 2, np.pi / 2], [-1.0, -1.0])

    def test_strictly_interior(self):
        for _ in range(200):
            theta0, span = random_acute_headings(RNG)
            n = theta0.size
            frame = rotated_frame(theta0)
            k = -(10.0 ** RNG.uniform(-1, 1, n))
            inv = 1.0 / k
            hat_c = (frame.theta_hat0 @ inv) / inv.sum()
            assert 0.0 < hat_c < frame.span


class TestConvexWeights:
    def test_equal_gains(self):
        np.testing.assert_allclose(convex_weights([-1.0, -1.0]), [0.5, 0.5], atol=1e-15)

    def test_two_to_one(self):
        # normalize (-1, -1/2)
        np.testing.assert_allclose(convex_weights([-1.0, -2.0]), [2 / 3, 1 / 3], atol=1e-15)

    def test_positive_and_normalized(self):
        for _ in range(100):
            n = int(RNG.integers(2, 10))
            lam = convex_weights(-(10.0 ** RNG.uniform(-1, 1, n)))
            assert np.all(lam > 0)
            assert lam.sum() == pytest.approx(1.0, abs=1e-12)

    def test_reproduces_prediction(self, six_theta0):
        gains = named_gain_set("set1", 6)
        frame = rotated_frame(six_theta0)
        lam = convex_weights(gains)
        rebuilt = wrap_angle(lam @ frame.theta_hat0 + frame.theta_R)
        assert rebuilt == pytest.approx(predict_direction(six_theta0, gains), abs=1e-12)

    def test_rejects_positive(self):
        with pytest.raises(ValueError):
            convex_weights([-1.0, 2.0])


class TestIsReachable:
    def test_interior_target(self, six_theta0):
        report = is_reachable(six_theta0, 0.0)
        assert report.reachable_negative_gains

    @pytest.mark.parametrize("target_deg", [60.0, -60.0])
    def test_extreme_rays_excluded(self, six_theta0, target_deg):
        assert not is_reachable(six_theta0, np.deg2rad(target_deg)).reachable_negative_gains

    def test_outside_cone(self, six_theta0):
        assert not is_reachable(six_theta0, np.deg2rad(90.0)).reachable_negative_gains

    def test_standard_interval_endpoints(self, six_theta0):
        report = is_reachable(six_theta0, 0.0)
        np.testing.assert_allclose(
            np.degrees(report.interval_standard), [-60.0, 60.0], atol=1e-10
        )

    def test_two_agent_extended_flag(self):
        report = is_reachable(np.deg2rad([-60.0, 60.0]), np.deg2rad(150.0))
        assert not report.reachable_negative_gains
        assert report.reachable_two_agent_extended is True
        report6 = is_reachable(np.deg2rad([-60.0, -45.0, -30.0, 30.0, 45.0, 60.0]), 0.0)
        assert report6.reachable_two_agent_extended is None

    def test_non_acute_raises(self):
        with pytest.raises(NonAcuteConeError):
            is_reachable([-np.pi / 2, np.pi / 2], 0.0)


class TestSynthesizeGains:
    def test_mean_target_with_uniform_scale_gives_unit_gains(self, six_theta0):
        gains = synthesize_gains(six_theta0, 0.0, c=-1.0 / 6.0)
        np.testing.assert_allclose(gains.gains, -1.0, atol=1e-12)

    def test_round_trip_six_agents(self, six_theta0):
        target = np.deg2rad(SET1_DIRECTION_DEG)
        gains = synthesize_gains(six_theta0, target)
        assert gains.all_negative
        assert abs(wrap_angle(predict_direction(six_theta0, gains) - target)) < 1e-12

    def test_round_trip_random(self):
        for _ in range(150):
            theta0, span = random_acute_headings(RNG)
            frame = rotated_frame(theta0)
            t_hat = RNG.uniform(1e-3, frame.span - 1e-3)
            target = wrap_angle(t_hat + frame.theta_R)
            gains = synthesize_gains(theta0, target, c=-float(RNG.uniform(0.1, 4.0)))
            assert gains.all_negative
            got = predict_direction(theta0, gains)
            assert abs(wrap_angle(got - target)) < 1e-12

    def test_inverse_gain_sum_equals_inverse_c(self, six_theta0):
        c = -0.7
        gains = synthesize_gains(six_theta0, np.deg2rad(10.0), c=c)
        assert np.sum(1.0 / gains.gains) == pytest.approx(1.0 / c, abs=1e-12)

    def test_gains_not_unique_under_c_rescaling(self, six_theta0):
        target = np.deg2rad(10.0)
        g1 = synthesize_gains(six_theta0, target, c=-1.0)
        g2 = synthesize_gains(six_theta0, target, c=-2.0)
        assert not np.allclose(g1.gains, g2.gains)
        assert predict_direction(six_theta0, g1) == pytest.approx(
            predict_direction(six_theta0, g2), abs=1e-12
        )

    def test_rejects_unreachable_target(self, six_theta0):
        with pytest.raises(ValueError, match="not reachable"):
            synthesize_gains(six_theta0, np.deg2rad(60.0))

    def test_rejects_nonnegative_c(self, six_theta0):
        with pytest.raises(ValueError):
            synthesize_gains(six_theta0, 0.0, c=1.0)


class TestPerturbationBounds:
    def test_zero_eta_degenerates_to_mean(self, six_theta0):
        b = perturbation_bounds(six_theta0, 0.0)
        assert b.delta_lower == 0.0 and b.delta_upper == 0.0
        assert b.admissible_lo == pytest.approx(b.mean_direction, abs=1e-15)
        assert b.admissible_hi == pytest.approx(b.mean_direction, abs=1e-15)

    def test_reference_deviations_at_half(self, six_theta0):
        """mean = 60 deg; 2*eta/(1+eta) = 2/3 and 2*eta/(1-eta) = 2 give
        deviations of 40 and 120 deg; the cone then clips the admissible
        interval to [20, 120] deg."""
        b = perturbation_bounds(six_theta0, 0.5)
        assert np.degrees(b.mean_direction) == pytest.approx(60.0, abs=1e-10)
        assert np.degrees(b.delta_lower) == pytest.approx(40.0, abs=1e-10)
        assert np.degrees(b.delta_upper) == pytest.approx(120.0, abs=1e-10)
        assert np.degrees(b.admissible_lo) == pytest.approx(20.0, abs=1e-10)
        assert np.degrees(b.admissible_hi) == pytest.approx(120.0, abs=1e-10)

    def test_monte_carlo_containment(self, six_theta0):
        """Sampled gain errors never push the prediction out of the band."""
        frame = rotated_frame(six_theta0)
        for eta in (0.25, 0.6):
            b = perturbation_bounds(six_theta0, eta)
            for _ in range(300):
                etas = RNG.uniform(0, eta, 6) * RNG.choice([-1.0, 1.0], 6)
                k = -1.0 * (1.0 + etas)
                inv = 1.0 / k
                hat_c = (frame.theta_hat0 @ inv) / inv.sum()
                assert b.contains(hat_c)

    @pytest.mark.parametrize("eta", [-0.1, 1.0, 1.5])
    def test_rejects_bad_eta(self, six_theta0, eta):
        with pytest.raises(ValueError):
            perturbation_bounds(six_theta0, eta)


class TestTwoAgentDirection:
    def test_mixed_gains_plus_120(self):
        got = two_agent_direction(np.deg2rad([-60.0, 60.0]), [-3.0, 1.0])
        assert got == pytest.approx(np.deg2rad(120.0), abs=1e-12)

    def test_mixed_gains_minus_120(self):
        got = two_agent_direction(np.deg2rad([-60.0, 60.0]), [1.0, -3.0])
        assert got == pytest.approx(np.deg2rad(-120.0), abs=1e-12)

    def test_equal_negative_gains_hit_midpoint(self):
        got = two_agent_direction(np.deg2rad([-60.0, 60.0]), [-2.0, -2.0])
        assert got == pytest.approx(0.0, abs=1e-12)

    def test_can_leave_initial_arc(self):
        for _ in range(100):
            theta0, _ = random_acute_headings(RNG, n=2)
            k1 = RNG.uniform(0.1, 2.0)
            k2 = -k1 - RNG.uniform(0.5, 3.0)
            got = two_agent_direction(theta0, [k1, k2])
            assert np.isfinite(got)

    def test_rejects_nonnegative_sum(self):
        with pytest.raises(ValueError):
            two_agent_direction([0.0, 1.0], [2.0, -1.0])


class TestTwoAgentGains:
    def test_interior_target_uses_negative_pair(self):
        gains = two_agent_gains(np.deg2rad([-60.0, 60.0]), 0.0)
        assert np.all(gains.gains < 0)
        assert two_agent_direction(np.deg2rad([-60.0, 60.0]), gains) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_minus_120_reproduces_reference_gain_ratio(self):
        """Steering [-60, 60] deg to -120 deg needs K_2 = -3 K_1 with K_1 > 0."""
        gains = two_agent_gains(np.deg2rad([-60.0, 60.0]), np.deg2rad(-120.0))
        k1, k2 = gains.gains
        assert k1 > 0 > k2
        assert k2 == pytest.approx(-3.0 * k1, abs=1e-12)

    def test_round_trip_over_the_whole_circle(self):
        for _ in range(100):
            theta0, _ = random_acute_headings(RNG, n=2, span_range=(0.05, 2.9))
            target = float(RNG.uniform(-np.pi, np.pi))
            gains = two_agent_gains(theta0, target)
            assert gains.gains.sum() < 0
            got = two_agent_direction(theta0, gains)
            assert abs(wrap_angle(got - target)) < 1e-12

    def test_degenerate_pair(self):
        gains = two_agent_gains(np.deg2rad([10.0, 10.0]), np.deg2rad(10.0))
        assert np.all(gains.gains < 0)
        with pytest.raises(ValueError, match="one heading"):
            two_agent_gains(np.deg2rad([10.0, 10.0]), np.deg2rad(40.0))

    def test_boundary_targets_need_zero_gain(self):
        theta0 = np.deg2rad([-60.0, 60.0])
        for target_deg in (-60.0, 60.0):
            with pytest.raises(ValueError, match="zero gain"):
                two_agent_gains(theta0, np.deg2rad(target_deg))


class TestCriticalHessian:
    def fd_hessian(self, theta, h=1e-4):
        n = theta.size
        out = np.zeros((n, n))
        for j in range(n):
            ej = np.zeros(n)
            ej[j] = h
            out[j, j] = (
                alignment_potential(theta + ej)
                - 2 * alignment_potential(theta)
                + alignment_potential(theta - ej)
            ) / h**2
            for k in range(j + 1, n):
                ek = np.zeros(n)
                ek[k] = h
                val = (
                    alignment_potential(theta + ej + ek)
                    - alignment_potential(theta + ej - ek)
                    - alignment_potential(theta - ej + ek)
                    + alignment_potential(theta - ej - ek)
                ) / (4 * h**2)
                out[j, k] = out[k, j] = val
        return out

    def test_equals_negative_fd_hessian(self):
        """The matrix is the global-sign flip of the numerical Hessian of the
        alignment potential."""
        for _ in range(20):
            n = int(RNG.integers(2, 9))
            theta = RNG.uniform(-np.pi, np.pi, n)
            h = critical_point_hessian(theta)
            np.testing.assert_allclose(h, -self.fd_hessian(theta), atol=1e-5)

    def test_block_form_at_partitioned_configuration(self):
        """With m agents opposite the mean phase, H = (1/N) w w^T + |p| diag(w)."""
        for n in (4, 6, 8):
            for m in range(1, (n - 1) // 2 + 1):
                psi = 0.3
                theta = np.array([psi + np.pi] * m + [psi] * (n - m))
                p_mag = (n - 2 * m) / n
                w = np.concatenate([np.ones(m), -np.ones(n - m)])
                expected = np.outer(w, w) / n + p_mag * np.diag(w)
                np.testing.assert_allclose(critical_point_hessian(theta), expected, atol=1e-12)

    def test_saddle_witness_value(self):
        """q supported on the last two (majority) agents gives q^T H q = -2|p|."""
        for n in range(3, 9):
            for m in range(1, (n - 1) // 2 + 1):
                theta = np.array([1.1 + np.pi] * m + [1.1] * (n - m))
                q = np.zeros(n)
                q[-2], q[-1] = -1.0, 1.0
                witness = q @ critical_point_hessian(theta) @ q
                assert witness == pytest.approx(-2.0 * (n - 2 * m) / n, abs=1e-10)

    def test_indefinite_at_saddles(self):
        theta = np.array([0.0, 0.0, 0.0, np.pi])
        w = np.linalg.eigvalsh(critical_point_hessian(theta))
        assert w[0] < -1e-12 < 1e-12 < w[-1]


class TestClassifyCriticalPoint:
    def test_synchronized_minimum(self):
        out = classify_critical_point(np.full(5, 0.4))
        assert out.kind is CriticalKind.SYNC_MINIMUM
        assert out.antipodal_count == 0
        assert out.p_mag == pytest.approx(1.0, abs=1e-12)

    def test_three_agent_saddle(self):
        """[0, 0, pi]: mean phase 0, one opposed agent, |p| = 1/3, and the
        witness value -2/3."""
        theta = np.array([0.0, 0.0, np.pi])
        out = classify_critical_point(theta)
        assert out.kind is CriticalKind.SADDLE
        assert out.antipodal_count == 1
        assert out.p_mag == pytest.approx(1.0 / 3.0, abs=1e-12)
        q = np.array([-1.0, 1.0, 0.0])
        assert q @ critical_point_hessian(theta) @ q == pytest.approx(-2.0 / 3.0, abs=1e-12)

    def test_balanced_maximum(self):
        out = classify_critical_point(np.array([0.0, np.pi]))
        assert out.kind is CriticalKind.BALANCED_MAXIMUM
        assert out.antipodal_count is None
        assert out.p_mag == pytest.approx(0.0, abs=1e-10)

    def test_rejects_non_critical(self):
        with pytest.raises(ValueError, match="not critical"):
            classify_critical_point(np.array([0.0, 1.0]))


class TestConicHull:
    def test_initial_order_parameter_contained(self):
        for _ in range(100):
            theta0, _ = random_acute_headings(RNG)
            p = np.exp(1j * theta0).mean()
            assert conic_hull_contains(theta0, complex(p))

    def test_point_just_outside_sector(self, six_theta0):
        frame = rotated_frame(six_theta0)
        z = np.exp(1j * (frame.theta_R - 0.1))
        assert not conic_hull_contains(six_theta0, complex(z))

    def test_zero_contained(self, six_theta0):
        assert conic_hull_contains(six_theta0, 0j)

    def test_outside_unit_disk(self, six_theta0):
        assert not conic_hull_contains(six_theta0, complex(1.5 * np.exp(1j * 0.0)))

    def test_trajectory_sweep(self, six_theta0):
        """Every recorded order parameter of a negative-gain run stays in the
        sector."""
        cfg = SimulationConfig(
            n=6, theta0=six_theta0, gains=GainVector(named_gain_set("set1", 6)), t_max=25.0
        )
        traj, _ = simulate(cfg)
        p = np.exp(1j * traj.theta).mean(axis=1)
        assert all(conic_hull_contains(six_theta0, complex(v)) for v in p)

    def test_trajectory_sweep_ring(self, six_theta0):
        """Containment is only argued loosely for neighbor coupling, so this
        is an empirical check on the reference ring run rather than a general
        invariant."""
        cfg = SimulationConfig(
            n=6,
            theta0=six_theta0,
            gains=GainVector(named_gain_set("set1", 6)),
            topology=ring_graph(6),
            t_max=25.0,
        )
        traj, _ = simulate(cfg)
        p = np.exp(1j * traj.theta).mean(axis=1)
        assert all(conic_hull_contains(six_theta0, complex(v)) for v in p)

    def test_non_acute_raises(self):
        with pytest.raises(NonAcuteConeError):
            conic_hull_contains([-np.pi / 2, np.pi / 2], 0.5 + 0j)


def test_ring_eigenvector_configurations_are_graph_critical():
    """Unit-modulus Laplacian eigenvectors of rings (Fourier modes) have zero
    graph-potential gradient."""
    for n in range(3, 7):
        lap = laplacian(ring_graph(n))
        for m in range(n):
            theta_bar = 2.0 * np.pi * m * np.arange(n) / n
            np.testing.assert_allclose(
                laplacian_potential_grad(theta_bar, lap), 0.0, atol=1e-10
            )
