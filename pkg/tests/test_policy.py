"""Decision geometry, fuzzy memberships, defuzzification and steering."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bladesim.geom import DegenerateGeometryError, Vec2
from bladesim.policy import (
    Action,
    FuzzyMembership,
    PolicyParams,
    Track,
    build_geometry,
    decision_delta,
    defuzzify,
    detect_and_track,
    first_crossing_time,
    memberships,
    merge_commands,
    steering_vector,
    time_to_conflict,
)
from bladesim.world import Blade, DroneState, sense

PARAMS = PolicyParams()


def make_geometry(d=Vec2(0, 0), e=Vec2(2, 0.5), f=Vec2(2, 1.1), b=Vec2(10, 0),
                  a=Vec2(-1, 0), c=Vec2(2, 2), v_o=Vec2(0, -1)):
    return build_geometry(a=a, c=c, d=d, e=e, f=f, b=b, v_o=v_o)


def make_drone(position=Vec2(0, 0), velocity=Vec2(1, 0), nominal=1.0, vmax=2.0):
    return DroneState(position=position, velocity=velocity, radius=0.2,
                      nominal_speed=nominal, max_speed=vmax)


def angled_geometry(ang_edf, ang_edb, d=Vec2(0, 0)):
    """Geometry whose blade size and path offset angles at D are prescribed."""
    e = d + Vec2(1, 0)
    f = d + Vec2(math.cos(ang_edf), math.sin(ang_edf))
    b = d + Vec2(math.cos(ang_edb), -math.sin(ang_edb)) * 10.0
    return build_geometry(a=d - Vec2(1, 0), c=e, d=d, e=e, f=f, b=b, v_o=Vec2(0, -1))


class TestPolicyParams:
    def test_defaults(self):
        p = PolicyParams()
        assert p.eq_band == 0.05
        assert p.wide_angle == pytest.approx(math.pi / 3)
        assert p.k_beta == 1.0 and p.k_alpha == 0.5

    def test_validation(self):
        with pytest.raises(ValueError):
            PolicyParams(eq_band=0.0)
        with pytest.raises(ValueError):
            PolicyParams(eq_band=0.6)  # the admissible upper bound is 0.5
        with pytest.raises(ValueError):
            PolicyParams(wide_angle=math.pi)
        with pytest.raises(ValueError):
            PolicyParams(k_beta=-1.0)
        with pytest.raises(ValueError):
            PolicyParams(horizon=0.0)
        with pytest.raises(ValueError):
            PolicyParams(wide_override_direction="sideways")


class TestDecisionGeometry:
    def test_fields_consistent_with_recomputation(self):
        from bladesim.geom import angle_at, sin_between

        g = make_geometry()
        assert g.sin_bac == pytest.approx(
            sin_between(g.b_point - g.a_point, g.c_point - g.a_point), abs=1e-12
        )
        assert g.sin_bde == pytest.approx(
            sin_between(g.b_point - g.d_point, g.e_point - g.d_point), abs=1e-12
        )
        assert g.ang_edf == pytest.approx(angle_at(g.d_point, g.e_point, g.f_point))
        assert g.ang_edb == pytest.approx(angle_at(g.d_point, g.e_point, g.b_point))
        assert -1.0 <= g.delta <= 1.0

    def test_delta_zero_for_matched_bearings(self):
        # sin BAC = sin 45 deg and sin BDE = sin 45 deg
        g = build_geometry(
            a=Vec2(0, 0), c=Vec2(5, 5), d=Vec2(2, 0), e=Vec2(5, 3),
            f=Vec2(5, 3.6), b=Vec2(10, 0), v_o=Vec2(0, -1),
        )
        assert decision_delta(g) == pytest.approx(0.0, abs=1e-9)

    def test_receding_bearing_gives_negative_delta(self):
        # E has drifted further off the path line than C was at detection
        g = build_geometry(
            a=Vec2(0, 0), c=Vec2(4, 1), d=Vec2(2, 0), e=Vec2(4, 3),
            f=Vec2(4, 3.6), b=Vec2(10, 0), v_o=Vec2(0, 1),
        )
        assert decision_delta(g) < 0.0


class TestMemberships:
    @pytest.mark.parametrize(
        "delta,expected",
        [
            (-1.0, (0.3, 1.0, 0.3)),
            (-0.5, (0.3, 1.0, 0.3)),
            (-0.4, (0.3, 1.0, 0.3)),
            (-0.06, (0.3, 1.0, 0.3)),
            (0.0, (1.0, 0.0, 0.0)),
            (0.05, (1.0, 0.0, 0.0)),
            (0.06, (0.0, 0.0, 1.0)),
            (0.5, (0.0, 0.0, 1.0)),
            (0.6, (0.0, 0.0, 1.0)),
            (1.0, (0.0, 0.0, 1.0)),
        ],
    )
    def test_plateau_table(self, delta, expected):
        mu = memberships(delta, PARAMS)
        assert (mu.mu_plus, mu.mu_maintain, mu.mu_minus) == expected

    def test_domain_error(self):
        with pytest.raises(ValueError):
            memberships(1.5, PARAMS)
        with pytest.raises(ValueError):
            memberships(-1.0001, PARAMS)

    @given(st.floats(min_value=-1.0, max_value=1.0))
    def test_only_three_plateaus(self, delta):
        mu = memberships(delta, PARAMS)
        triple = (mu.mu_plus, mu.mu_maintain, mu.mu_minus)
        assert triple in {(1.0, 0.0, 0.0), (0.3, 1.0, 0.3), (0.0, 0.0, 1.0)}
        assert all(0.0 <= m <= 1.0 for m in triple)
        assert max(triple) > 0.0


class TestDefuzzify:
    def test_plus_when_band(self):
        g = angled_geometry(0.1, 0.5)
        assert defuzzify(FuzzyMembership(1.0, 0.0, 0.0), g, PARAMS) is Action.PLUS

    def test_maintain_dominant(self):
        g = angled_geometry(0.1, 0.5)
        assert defuzzify(FuzzyMembership(0.3, 1.0, 0.3), g, PARAMS) is Action.MAINTAIN

    def test_minus_and_width_gate(self):
        assert (
            defuzzify(FuzzyMembership(0.0, 0.0, 1.0), angled_geometry(0.2, 0.5), PARAMS)
            is Action.MINUS
        )
        assert (
            defuzzify(FuzzyMembership(0.0, 0.0, 1.0), angled_geometry(0.6, 0.5), PARAMS)
            is Action.MINUS_WIDENED
        )

    def test_wide_blade_override(self):
        g = angled_geometry(math.pi / 3 + 0.01, 0.5)
        for mu in (FuzzyMembership(1, 0, 0), FuzzyMembership(0.3, 1, 0.3), FuzzyMembership(0, 0, 1)):
            assert defuzzify(mu, g, PARAMS) is Action.PLUS_BOOST

    def test_tie_break_order(self):
        g = angled_geometry(0.1, 0.5)
        assert defuzzify(FuzzyMembership(1.0, 1.0, 1.0), g, PARAMS) is Action.MAINTAIN
        assert defuzzify(FuzzyMembership(1.0, 0.0, 1.0), g, PARAMS) is Action.PLUS

    @given(
        st.floats(min_value=0.01, max_value=1.0),
        st.floats(min_value=0.01, max_value=1.0),
        st.floats(min_value=0.01, max_value=1.0),
        st.floats(min_value=0.01, max_value=100.0),
    )
    def test_argmax_invariant_under_scaling(self, p, m, n, k):
        g = angled_geometry(0.2, 0.5)
        a1 = defuzzify(FuzzyMembership(p, m, n), g, PARAMS)
        a2 = defuzzify(FuzzyMembership(p * k, m * k, n * k), g, PARAMS)
        assert a1 is a2

    def test_gate_monotone_in_blade_size(self):
        mu = FuzzyMembership(0.0, 0.0, 1.0)
        ang_edb = 0.5
        seen_widened = False
        for ang_edf in [0.01 * i for i in range(1, 100)]:
            action = defuzzify(mu, angled_geometry(ang_edf, ang_edb), PARAMS)
            if action is Action.MINUS:
                assert not seen_widened, "gate flapped back from MinusWidened"
            elif action is Action.MINUS_WIDENED:
                seen_widened = True


class TestSteeringVector:
    def test_maintain_runs_along_leg(self):
        g = make_geometry(b=Vec2(10, 0), d=Vec2(0, 0))
        cmd = steering_vector(Action.MAINTAIN, make_drone(), g, PARAMS)
        assert (cmd.velocity - Vec2(1, 0)).norm() < 1e-12
        assert cmd.boost_factor == 1.0

    def test_minus_with_still_obstacle_reduces_to_leg(self):
        g = make_geometry(b=Vec2(10, 0), d=Vec2(0, 0), v_o=Vec2(0, 0))
        cmd = steering_vector(Action.MINUS, make_drone(), g, PARAMS)
        assert (cmd.velocity - Vec2(1, 0)).norm() < 1e-12

    def test_plus_diagonal(self):
        g = make_geometry(b=Vec2(10, 0), d=Vec2(0, 0), v_o=Vec2(0, 1))
        cmd = steering_vector(Action.PLUS, make_drone(), g, PARAMS)
        s = 1 / math.sqrt(2)
        assert cmd.velocity.x == pytest.approx(s, abs=1e-9)
        assert cmd.velocity.y == pytest.approx(s, abs=1e-9)

    def test_opposed_obstacle_falls_back_to_leg_direction(self):
        g = make_geometry(b=Vec2(10, 0), d=Vec2(0, 0), v_o=Vec2(-1, 0))
        cmd = steering_vector(Action.PLUS, make_drone(), g, PARAMS)
        assert (cmd.velocity - Vec2(1, 0)).norm() < 1e-9

    def test_widened_steers_away_from_trailing_edge(self):
        g = build_geometry(
            a=Vec2(-1, 0), c=Vec2(2, 0), d=Vec2(0, 0), e=Vec2(2, 0),
            f=Vec2(2, 1.5), b=Vec2(10, 0), v_o=Vec2(0, -0.4),
        )
        assert g.ang_edf > g.ang_edb
        plain = steering_vector(Action.MINUS, make_drone(), g, PARAMS)
        widened = steering_vector(Action.MINUS_WIDENED, make_drone(), g, PARAMS)
        # F is above the sight line, so the widening term pushes further down
        assert widened.velocity.y < plain.velocity.y

    def test_boost_speed_band_and_cap(self):
        g = angled_geometry(1.2, 0.3)
        d = make_drone()
        cmd = steering_vector(Action.PLUS_BOOST, d, g, PARAMS)
        assert d.nominal_speed < cmd.velocity.norm() <= d.max_speed
        assert cmd.boost_factor == pytest.approx(cmd.velocity.norm() / d.nominal_speed)
        # huge angular excess saturates at max_speed
        g2 = angled_geometry(3.0, 0.01)
        assert steering_vector(Action.PLUS_BOOST, d, g2, PARAMS).velocity.norm() == pytest.approx(d.max_speed)

    def test_boost_direction_configurable(self):
        g = make_geometry(b=Vec2(10, 0), d=Vec2(0, 0), v_o=Vec2(0, 1))
        plus = steering_vector(Action.PLUS_BOOST, make_drone(), g, PolicyParams())
        minus = steering_vector(
            Action.PLUS_BOOST, make_drone(), g, PolicyParams(wide_override_direction="minus")
        )
        assert plus.velocity.y > 0 > minus.velocity.y

    @given(
        st.sampled_from(list(Action)),
        st.floats(min_value=0.0, max_value=2 * math.pi),
        st.floats(min_value=0.0, max_value=2.0),
    )
    def test_speed_constancy(self, action, angle, vo_mag):
        v_o = Vec2(math.cos(angle), math.sin(angle)) * vo_mag
        g = make_geometry(v_o=v_o)
        d = make_drone()
        cmd = steering_vector(action, d, g, PARAMS)
        speed = cmd.velocity.norm()
        if action is Action.PLUS_BOOST:
            assert d.nominal_speed < speed <= d.max_speed * (1 + 1e-9)
        else:
            assert speed == pytest.approx(d.nominal_speed, rel=1e-9)

    @given(st.floats(min_value=0.0, max_value=2 * math.pi),
           st.floats(min_value=0.0, max_value=2 * math.pi))
    def test_equal_speed_diagonals_perpendicular(self, a1, a2):
        v_d = Vec2(math.cos(a1), math.sin(a1))
        v_o = Vec2(math.cos(a2), math.sin(a2))
        assert abs((v_d + v_o).dot(v_d - v_o)) < 1e-9


class TestFirstCrossing:
    def test_parallel_mover_never_crosses(self):
        b = Blade(kind="slider", anchor=Vec2(5, 3), length=2.0, half_width=0.3,
                  omega=1.0, phase=0.0, axis=Vec2(1, 0))
        assert first_crossing_time(b, Vec2(0, 0), Vec2(10, 0), 0.0, 10.0, 0.01) is None

    def test_crossing_slider_found_near_oracle(self):
        b = Blade(kind="slider", anchor=Vec2(5, 0), length=3.0, half_width=0.5,
                  omega=1.0, phase=0.0, axis=Vec2(0, 1))
        # body straddles the leg line whenever |3 sin t| <= 0.5: from t=0
        tc = first_crossing_time(b, Vec2(0, 0), Vec2(10, 0), 0.0, 10.0, 0.01)
        assert tc == 0.0

    def test_padding_extends_reach(self):
        b = Blade(kind="slider", anchor=Vec2(5, 3.6), length=3.0, half_width=0.5,
                  omega=1.0, phase=0.0, axis=Vec2(0, -1))
        # closest approach of the body to the leg is 0.1: only the padded
        # test sees a crossing
        assert first_crossing_time(b, Vec2(0, 0), Vec2(10, 0), 0.0, 10.0, 0.01) is None
        assert first_crossing_time(
            b, Vec2(0, 0), Vec2(10, 0), 0.0, 10.0, 0.01, padding=0.2
        ) is not None


class TestDetectAndTrack:
    def setup_method(self):
        self.crossing = Blade(kind="slider", anchor=Vec2(5, 0), length=3.0,
                              half_width=0.5, omega=1.0, phase=0.0, axis=Vec2(0, 1))
        self.parallel = Blade(kind="slider", anchor=Vec2(5, 3), length=2.0,
                              half_width=0.3, omega=1.0, phase=0.0, axis=Vec2(1, 0))

    def run_once(self, blades, drone, t=0.0, horizon=10.0):
        sensed = sense(drone, blades, t, 100.0)
        return detect_and_track(
            drone, Vec2(0, 0), Vec2(10, 0), blades, sensed, {}, t, horizon, 0.02
        )

    def test_crossing_blade_becomes_tracked(self):
        d = make_drone()
        tracked, geoms = self.run_once([self.crossing], d)
        assert set(tracked) == {0}
        assert tracked[0].a_point == d.position
        assert len(geoms) == 1 and geoms[0][0] == 0

    def test_parallel_blade_ignored(self):
        tracked, geoms = self.run_once([self.parallel], make_drone())
        assert tracked == {} and geoms == []

    def test_anchor_points_persist(self):
        d = make_drone()
        sensed = sense(d, [self.crossing], 0.0, 100.0)
        tracked, _ = detect_and_track(
            d, Vec2(0, 0), Vec2(10, 0), [self.crossing], sensed, {}, 0.0, 10.0, 0.02
        )
        d2 = make_drone(position=Vec2(0.5, 0))
        sensed2 = sense(d2, [self.crossing], 0.5, 100.0)
        tracked2, geoms2 = detect_and_track(
            d2, Vec2(0, 0), Vec2(10, 0), [self.crossing], sensed2, tracked, 0.5, 10.0, 0.02
        )
        assert tracked2[0].a_point == tracked[0].a_point
        assert tracked2[0].c_point == tracked[0].c_point
        assert geoms2[0][1].d_point == d2.position

    def test_blade_behind_drone_untracked(self):
        d = make_drone(position=Vec2(7, 0))
        sensed = sense(d, [self.crossing], 0.0, 100.0)
        prev = {0: Track(Vec2(0, 0), Vec2(5, 0), 0.0, 0.0)}
        tracked, _ = detect_and_track(
            d, Vec2(0, 0), Vec2(10, 0), [self.crossing], sensed, prev, 0.0, 10.0, 0.02
        )
        assert tracked == {}

    def test_zero_length_leg_raises(self):
        with pytest.raises(DegenerateGeometryError):
            detect_and_track(
                make_drone(), Vec2(0, 0), Vec2(0, 0), [self.crossing], [], {}, 0.0, 1.0, 0.02
            )


class TestArbitration:
    def test_time_to_conflict(self):
        g = make_geometry(d=Vec2(0, 0), e=Vec2(3, 0), v_o=Vec2(-1, 0))
        # closing speed vs a drone moving at (1, 0) is 2
        assert time_to_conflict(g, Vec2(1, 0)) == pytest.approx(1.5)

    def test_time_to_conflict_opening(self):
        g = make_geometry(d=Vec2(0, 0), e=Vec2(3, 0), v_o=Vec2(2, 0))
        assert time_to_conflict(g, Vec2(1, 0)) == math.inf

    def test_singleton(self):
        cmd = steering_vector(Action.MAINTAIN, make_drone(), make_geometry(), PARAMS)
        assert merge_commands([(0, 2.0, cmd)]) is cmd

    def test_nearest_conflict_wins(self):
        near = steering_vector(Action.MINUS, make_drone(), make_geometry(), PARAMS)
        far = steering_vector(Action.PLUS, make_drone(), make_geometry(), PARAMS)
        assert merge_commands([(0, 5.0, far), (1, 1.0, near)]) is near

    def test_tie_breaks_by_blade_id(self):
        a = steering_vector(Action.MINUS, make_drone(), make_geometry(), PARAMS)
        b = steering_vector(Action.PLUS, make_drone(), make_geometry(), PARAMS)
        assert merge_commands([(1, math.inf, a), (0, math.inf, b)]) is b

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            merge_commands([])
