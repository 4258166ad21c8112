from __future__ import annotations

import copy
import math

import pytest

from synchrony_lab import (
    INFINITE_SPEED,
    ClockLattice,
    NotSynchronized,
    UnresolvableChase,
    isotropy_scan,
    measure_one_way,
    measure_two_way,
    propagate,
    run_protocol,
    superluminal_transform,
)
from synchrony_lab.syncsim import (
    EINSTEIN,
    EXTERNAL_REGULATION,
    INSTANTANEOUS,
    LIGHT,
    SUPERLUMINAL,
    SUPERLUMINAL_FINITE,
    Scenario,
    ScenarioError,
    SignalSpec,
    parse_scenario,
    run_scenario,
)


def lattice(beta=0.6, positions=(0.0, 1.0)):
    return ClockLattice.build(beta, positions)


class TestPropagate:
    def test_static_light_unit_gap(self):
        lat = lattice(beta=0.0)
        rec = propagate(lat, 0, 1, LIGHT)
        assert rec.absorb.t - rec.emit.t == 1.0
        assert rec.speed_abs == 1.0

    def test_drift_shortens_downwind_flight(self):
        # Hardware moves against the wind (+x signal meets its target).
        lat = lattice(beta=0.6)
        rec = propagate(lat, 0, 1, LIGHT)
        assert math.isclose(rec.absorb.t, 0.625, rel_tol=1e-12)

    def test_drift_lengthens_upwind_flight(self):
        lat = lattice(beta=0.6)
        rec = propagate(lat, 1, 0, LIGHT)
        assert math.isclose(rec.absorb.t, 2.5, rel_tol=1e-12)

    def test_light_record_is_null(self):
        lat = lattice(beta=0.37, positions=(0.0, 2.7))
        rec = propagate(lat, 0, 1, LIGHT)
        dt = rec.absorb.t - rec.emit.t
        dx = rec.absorb.x - rec.emit.x
        assert abs(rec.speed_abs) == 1.0
        assert abs(dx / dt) == 1.0  # exact for origin emission
        # Off-origin emissions re-round in the subtraction; stay within ulps.
        rec2 = propagate(lat, 0, 1, LIGHT, t_emit=1.3)
        ratio = (rec2.absorb.x - rec2.emit.x) / (rec2.absorb.t - rec2.emit.t)
        assert abs(abs(ratio) - 1.0) <= 1e-15

    def test_instantaneous_has_zero_absolute_delay(self):
        lat = lattice(beta=0.6)
        rec = propagate(lat, 0, 1, INSTANTANEOUS, t_emit=0.4)
        assert rec.absorb.t == rec.emit.t == 0.4
        assert math.isinf(rec.speed_abs)
        assert rec.absorb.x == lat.position(1, 0.4)

    def test_slow_signal_cannot_catch_receding_node(self):
        # Wind -0.6: hardware drifts at +0.6; a 0.3-speed chase fails.
        lat = lattice(beta=-0.6)
        with pytest.raises(UnresolvableChase):
            propagate(lat, 0, 1, SUPERLUMINAL_FINITE, speed=0.3)

    def test_fast_finite_signal_resolves_the_same_chase(self):
        lat = lattice(beta=-0.6)
        rec = propagate(lat, 0, 1, SUPERLUMINAL_FINITE, speed=3.0)
        assert math.isclose(rec.absorb.t, 1.0 / 2.4, rel_tol=1e-12)

    def test_finite_kind_requires_speed(self):
        with pytest.raises(ValueError):
            propagate(lattice(), 0, 1, SUPERLUMINAL_FINITE)

    def test_same_endpoint_rejected(self):
        with pytest.raises(ValueError):
            propagate(lattice(), 0, 0, LIGHT)

    def test_signals_are_logged_in_order(self):
        lat = lattice()
        propagate(lat, 0, 1, LIGHT)
        propagate(lat, 1, 0, INSTANTANEOUS)
        assert [r.kind for r in lat.log] == [LIGHT, INSTANTANEOUS]

    def test_causality_of_log(self):
        lat = lattice(beta=0.45, positions=(0.0, 1.0, 3.0))
        propagate(lat, 0, 2, LIGHT)
        propagate(lat, 2, 0, SUPERLUMINAL_FINITE, speed=5.0)
        propagate(lat, 0, 1, INSTANTANEOUS)
        for rec in lat.log:
            assert rec.absorb.t >= rec.emit.t
            assert (rec.absorb.t == rec.emit.t) == (rec.kind == INSTANTANEOUS)


class TestProtocols:
    @pytest.mark.parametrize("protocol", [EINSTEIN, SUPERLUMINAL, EXTERNAL_REGULATION])
    def test_rest_lattice_needs_no_correction(self, protocol):
        lat = lattice(beta=0.0, positions=(0.0, 1.0, 2.5))
        run_protocol(lat, protocol)
        for n in lat.nodes:
            assert abs(n.offset) <= 1e-12

    def test_einstein_offsets_match_isotropic_chart(self):
        # Drift 0.6 (hardware at -0.6): the far clock is set ahead by
        # gamma * beta * L_rest / C = 1.25 * 0.6 * 1.25 ... computed 0.75.
        lat = lattice(beta=0.6)
        run_protocol(lat, EINSTEIN)
        assert lat.node(0).offset == 0.0
        assert math.isclose(lat.node(1).offset, 0.75, rel_tol=1e-12)
        assert lat.frame.k == 0.0

    def test_superluminal_equalizes_readings_at_one_instant(self):
        lat = lattice(beta=0.6, positions=(0.0, 1.0, 2.0))
        run_protocol(lat, SUPERLUMINAL)
        readings = [lat.reading(n.id, 1.7) for n in lat.nodes]
        assert max(readings) - min(readings) == 0.0
        assert lat.frame.k == 0.6

    def test_external_regulation_equals_superluminal(self):
        a = lattice(beta=0.6, positions=(0.0, 1.0, 2.0))
        b = copy.deepcopy(a)
        run_protocol(a, SUPERLUMINAL)
        run_protocol(b, EXTERNAL_REGULATION)
        for na, nb in zip(a.nodes, b.nodes):
            assert abs(na.offset - nb.offset) <= 1e-9

    def test_master_choice_respected(self):
        lat = lattice(beta=0.3, positions=(0.0, 1.0, 2.0))
        run_protocol(lat, EINSTEIN, master=2)
        assert lat.node(2).offset == 0.0

    def test_unknown_protocol(self):
        with pytest.raises(ValueError):
            run_protocol(lattice(), "gps")

    def test_protocol_marks_lattice_synced(self):
        lat = lattice()
        assert lat.protocol is None
        run_protocol(lat, EINSTEIN)
        assert lat.protocol == EINSTEIN


class TestMeasurements:
    def test_measurement_requires_synchronization(self):
        with pytest.raises(NotSynchronized):
            measure_one_way(lattice(), 0, 1)

    def test_rest_lattice_measures_c(self):
        lat = lattice(beta=0.0)
        run_protocol(lat, EINSTEIN)
        assert math.isclose(measure_one_way(lat, 0, 1).speed, 1.0, rel_tol=1e-12)

    def test_einstein_sync_measures_isotropic_light(self):
        lat = lattice(beta=0.6)
        run_protocol(lat, EINSTEIN)
        assert math.isclose(measure_one_way(lat, 0, 1).speed, 1.0, abs_tol=1e-9)
        assert math.isclose(measure_one_way(lat, 1, 0).speed, 1.0, abs_tol=1e-9)

    def test_superluminal_sync_measures_anisotropic_light(self):
        lat = lattice(beta=0.6)
        run_protocol(lat, SUPERLUMINAL)
        forward = measure_one_way(lat, 0, 1)
        backward = measure_one_way(lat, 1, 0)
        assert forward.direction == "+x"
        assert backward.direction == "-x"
        assert math.isclose(forward.speed, 2.5, abs_tol=1e-9)
        assert math.isclose(backward.speed, 0.625, abs_tol=1e-9)

    def test_distance_is_rest_length(self):
        lat = lattice(beta=0.6)
        run_protocol(lat, SUPERLUMINAL)
        assert math.isclose(measure_one_way(lat, 0, 1).distance, 1.25, rel_tol=1e-12)

    @pytest.mark.parametrize("protocol", [EINSTEIN, SUPERLUMINAL, EXTERNAL_REGULATION])
    @pytest.mark.parametrize("beta", [-0.9, -0.6, 0.0, 0.6, 0.9])
    def test_two_way_speed_is_universal(self, protocol, beta):
        lat = lattice(beta=beta)
        run_protocol(lat, protocol)
        m = measure_two_way(lat, 0, 1)
        assert m.direction == "two-way"
        assert math.isclose(m.speed, 1.0, abs_tol=1e-9)

    def test_instantaneous_signal_measures_infinite_after_zero_delay_sync(self):
        lat = lattice(beta=0.6)
        run_protocol(lat, SUPERLUMINAL)
        m = measure_one_way(lat, 0, 1, INSTANTANEOUS)
        assert m.speed == INFINITE_SPEED
        assert m.elapsed == 0.0

    def test_instantaneous_signal_is_finite_under_einstein_sync(self):
        # The isotropic convention skews distant clocks, so a zero-delay
        # signal picks up apparent flight time gamma*beta*L_rest.
        lat = lattice(beta=0.6)
        run_protocol(lat, EINSTEIN)
        m = measure_one_way(lat, 0, 1, INSTANTANEOUS)
        assert math.isclose(m.speed, 1.25 / 0.75, rel_tol=1e-12)

    def test_measurement_signals_are_logged(self):
        lat = lattice()
        run_protocol(lat, SUPERLUMINAL)
        n = len(lat.log)
        measure_two_way(lat, 0, 1)
        assert len(lat.log) == n + 2


class TestChartConsistency:
    def test_equal_readings_lie_on_constant_time_surfaces(self):
        beta = 0.6
        lat = lattice(beta=beta, positions=(0.0, 1.0, 3.0))
        run_protocol(lat, SUPERLUMINAL)
        # Pick the absolute instants where each clock reads 2.0.
        instants = [(2.0 - n.offset) / n.rate for n in lat.nodes]
        events = [
            superluminal_transform(
                type(lat.log[0].emit)(t=t, x=lat.position(n.id, t), chart="S"), beta
            )
            for t, n in zip(instants, lat.nodes)
        ]
        times = [e.t for e in events]
        assert max(times) - min(times) <= 1e-9


class TestIsotropyScan:
    def test_rest_frame_is_isotropic(self):
        (point,) = isotropy_scan([0.0])
        assert point.anisotropy == 0.0

    def test_matches_closed_form(self):
        betas = [-0.9 + 0.1 * i for i in range(19)]
        for point in isotropy_scan(betas):
            expected = 2.0 * point.beta / (1.0 - point.beta**2)
            assert math.isclose(point.anisotropy, expected, abs_tol=1e-9)

    def test_argmin_locates_the_isotropy_frame(self):
        betas = [-0.9 + 0.1 * i for i in range(19)]
        points = isotropy_scan(betas)
        best = min(points, key=lambda p: abs(p.anisotropy))
        assert abs(best.beta) < 1e-12


class TestScenario:
    def good(self):
        return {
            "beta": 0.6,
            "node_positions": [0.0, 1.0],
            "protocol": "superluminal",
            "signals": [
                {"from": 0, "to": 1, "kind": "light"},
                {"from": 1, "to": 0, "kind": "light"},
                {"from": 0, "to": 1, "kind": "light", "two_way": True},
            ],
        }

    def test_round_trip(self):
        sc = parse_scenario(self.good())
        assert sc == Scenario(
            0.6, (0.0, 1.0), "superluminal",
            (
                SignalSpec(0, 1, "light"),
                SignalSpec(1, 0, "light"),
                SignalSpec(0, 1, "light", two_way=True),
            ),
        )

    @pytest.mark.parametrize(
        "patch, invariant",
        [
            ({"beta": 1.0}, "abs_beta_lt_1"),
            ({"beta": "fast"}, "must_be_number"),
            ({"node_positions": [0.0]}, "at_least_two_nodes"),
            ({"node_positions": [1.0, 0.0]}, "strictly_increasing_positions"),
            ({"protocol": "ntp"}, "known_protocol"),
            ({"signals": [{"from": 0, "to": 0}]}, "signal_endpoints"),
            ({"signals": [{"from": 0, "to": 1, "kind": "carrier-pigeon"}]},
             "known_signal_kind"),
        ],
    )
    def test_violations_name_the_invariant(self, patch, invariant):
        raw = self.good()
        raw.update(patch)
        with pytest.raises(ScenarioError) as err:
            parse_scenario(raw)
        assert err.value.invariant == invariant

    def test_run_scenario_report(self):
        report = run_scenario(parse_scenario(self.good()))
        assert report.protocol == "superluminal"
        assert report.realized_k == 0.6
        assert [round(m.result.speed, 9) for m in report.measurements] == [
            2.5, 0.625, 1.0,
        ]

    def test_protocol_override(self):
        report = run_scenario(parse_scenario(self.good()), protocol="einstein")
        assert report.protocol == "einstein"
        assert math.isclose(report.measurements[0].result.speed, 1.0, abs_tol=1e-9)
