import math

import numpy as np
import pytest

from qdcool.cooling import StepEngine
from qdcool.models import CouplingDescriptor, build_tfim, build_two_level, tfim_from_ratio
from qdcool.operators import (
    basis_state,
    hermitian,
    hermitian_eig,
    maximally_mixed,
    pure_state,
)
from qdcool.protocols import (
    LogSweepConfig,
    Schedule,
    bangbang_schedule,
    default_energy_band,
    logsweep_energies,
    logsweep_linewidths,
    logsweep_schedule,
    run_protocol,
)


class TestBangBangSchedule:
    def test_single_qubit_reduces_to_two_level(self):
        h = build_two_level(1.0)
        sched = bangbang_schedule(h, 1, 1)
        assert len(sched) == 1
        step = sched.steps[0]
        assert abs(step.eps - 1.0) <= 1e-12
        assert abs(step.gamma - 2.0) <= 1e-12
        assert step.trotter_m == 1
        records = run_protocol(basis_state(2, 1), sched, h)
        assert abs(records[-1].fidelity - 1.0) <= 1e-9

    def test_step_count(self):
        h = build_tfim(tfim_from_ratio(5, 1.0))
        assert len(bangbang_schedule(h, 5, 5)) == 25

    def test_all_steps_single_split(self):
        h = build_tfim(tfim_from_ratio(3, 0.2))
        sched = bangbang_schedule(h, 3, 2)
        assert all(s.trotter_m == 1 for s in sched.steps)
        assert all(s.coupling.axis == "Y" for s in sched.steps)
        assert [s.coupling.site for s in sched.steps] == [0, 1, 2, 0, 1, 2]

    def test_rejects_bad_repetitions(self):
        with pytest.raises(ValueError):
            bangbang_schedule(build_two_level(1.0), 1, 0)


class TestLogSweepEnergies:
    def test_two_rungs(self):
        cfg = LogSweepConfig(k=2, e_min=1.0, e_max=5.0)
        assert np.allclose(logsweep_energies(cfg), [5.0, 1.0])

    def test_five_rungs_closed_form(self):
        cfg = LogSweepConfig(k=5, e_min=1.0, e_max=5.0)
        want = [5.0, 5.0 ** 0.75, 5.0 ** 0.5, 5.0 ** 0.25, 1.0]
        got = logsweep_energies(cfg)
        assert np.max(np.abs(got - np.array(want))) <= 1e-12
        assert np.allclose(got, [5.0, 3.343701525, 2.2360679775, 1.4953487812, 1.0])

    def test_geometric_ratio_constant(self):
        cfg = LogSweepConfig(k=9, e_min=0.3, e_max=4.0)
        e = logsweep_energies(cfg)
        ratios = e[1:] / e[:-1]
        assert np.max(np.abs(ratios - ratios[0])) <= 1e-12

    def test_config_validation(self):
        with pytest.raises(ValueError):
            LogSweepConfig(k=1, e_min=1.0, e_max=5.0)
        with pytest.raises(ValueError):
            LogSweepConfig(k=3, e_min=5.0, e_max=1.0)
        with pytest.raises(ValueError):
            LogSweepConfig(k=3, e_min=1.0, e_max=5.0, nesting="diagonal")


class TestLogSweepLinewidths:
    def test_two_rung_hand_computation(self):
        deltas, gammas = logsweep_linewidths(np.array([5.0, 1.0]))
        assert abs(deltas[0] - 10.0 / 3.0) <= 1e-12
        assert abs(deltas[1] - 2.0 / 3.0) <= 1e-12
        assert abs((1.0 + deltas[1]) - (5.0 - deltas[0])) <= 1e-12
        assert np.allclose(gammas, math.pi * deltas)

    def test_band_tiling_residual(self):
        e = logsweep_energies(LogSweepConfig(k=12, e_min=0.4, e_max=6.0))
        deltas, _ = logsweep_linewidths(e)
        resid = np.abs(e[1:] + deltas[1:] - (e[:-1] - deltas[:-1]))
        assert np.max(resid) <= 1e-10 * 6.0

    def test_linewidths_shrink_with_finer_gradation(self):
        widths = []
        for k in (4, 16, 64):
            e = logsweep_energies(LogSweepConfig(k=k, e_min=1.0, e_max=5.0))
            deltas, _ = logsweep_linewidths(e)
            widths.append(deltas[0] / e[0])
        assert widths[0] > widths[1] > widths[2]
        assert widths[2] < 0.02

    def test_rejects_non_geometric(self):
        with pytest.raises(ValueError):
            logsweep_linewidths(np.array([5.0, 3.0, 1.0]))
        with pytest.raises(ValueError):
            logsweep_linewidths(np.array([1.0, 5.0]))


class TestLogSweepSchedule:
    def test_step_counts(self):
        h = build_two_level(1.0)
        cfg = LogSweepConfig(k=2, e_min=0.5, e_max=2.0)
        assert len(logsweep_schedule(h, 1, cfg)) == 6
        h7 = build_tfim(tfim_from_ratio(7, 1.0))
        cfg40 = LogSweepConfig(k=40, e_min=0.2, e_max=4.0)
        assert len(logsweep_schedule(h7, 7, cfg40)) == 840

    def test_energies_drawn_from_ladder(self):
        h = build_tfim(tfim_from_ratio(3, 1.0))
        cfg = LogSweepConfig(k=4, e_min=0.5, e_max=3.0)
        sched = logsweep_schedule(h, 3, cfg)
        ladder = set(float(e) for e in logsweep_energies(cfg))
        assert set(s.eps for s in sched.steps) == ladder

    def test_axis_and_site_order(self):
        h = build_tfim(tfim_from_ratio(2, 1.0))
        cfg = LogSweepConfig(k=2, e_min=0.5, e_max=2.0)
        sched = logsweep_schedule(h, 2, cfg)
        first_rung = sched.steps[:6]
        assert [(s.coupling.site, s.coupling.axis) for s in first_rung] == [
            (0, "X"),
            (0, "Y"),
            (0, "Z"),
            (1, "X"),
            (1, "Y"),
            (1, "Z"),
        ]
        assert first_rung[0].eps == 2.0

    def test_site_outer_nesting(self):
        h = build_tfim(tfim_from_ratio(2, 1.0))
        cfg = LogSweepConfig(k=2, e_min=0.5, e_max=2.0, nesting="site")
        sched = logsweep_schedule(h, 2, cfg)
        assert [s.coupling.site for s in sched.steps] == [0] * 6 + [1] * 6
        assert len(sched) == 12

    def test_deterministic(self):
        h = build_tfim(tfim_from_ratio(3, 0.2))
        cfg = LogSweepConfig(k=5, e_min=0.3, e_max=2.0)
        assert logsweep_schedule(h, 3, cfg) == logsweep_schedule(h, 3, cfg)


class TestDefaultEnergyBand:
    def test_two_level(self):
        band = default_energy_band(build_two_level(0.7), (CouplingDescriptor("X", 0),))
        assert np.allclose(band, (0.7, 0.7), atol=1e-12)

    def test_tfim_gap_matches_independent_diagonalization(self):
        p = tfim_from_ratio(3, 0.2)
        h = build_tfim(p)
        couplings = tuple(CouplingDescriptor(a, s) for s in range(3) for a in "XYZ")
        e_min, e_max = default_energy_band(h, couplings)
        vals = np.linalg.eigvalsh(np.asarray(h.mat))
        gaps = vals - vals[0]
        want = float(gaps[gaps > 1e-3 * (vals[-1] - vals[0])][0])
        assert abs(e_min - want) <= 1e-12
        assert e_max >= e_min

    def test_degenerate_spectrum_rejected(self):
        flat = hermitian(np.eye(4, dtype=complex))
        with pytest.raises(ValueError):
            default_energy_band(flat, (CouplingDescriptor("X", 0),))


class TestRunProtocol:
    def test_empty_schedule_records_initial_state(self):
        h = build_two_level(1.0)
        records = run_protocol(basis_state(2, 0), Schedule(steps=()), h)
        assert len(records) == 1
        assert records[0].step == 0
        assert abs(records[0].fidelity - 1.0) <= 1e-12
        assert records[0].params is None

    def test_ferromagnet_reaches_reheating_steady_state(self):
        # at j/b = 2 the low doublet is split by ~4e-2, beyond the default
        # degeneracy window, so the manifold tolerance is widened explicitly
        n = 5
        h = build_tfim(tfim_from_ratio(n, 2.0))
        sched = bangbang_schedule(h, n, n)
        engine = StepEngine(h)
        mixed = run_protocol(maximally_mixed(n), sched, h, degeneracy_tol=0.1, engine=engine)
        eig = hermitian_eig(h)
        ground = run_protocol(
            pure_state(eig.eigenvectors[:, 0]), sched, h, degeneracy_tol=0.1, engine=engine
        )
        assert mixed[-1].fidelity > 2 * 2**-n
        assert abs(mixed[-1].fidelity - ground[-1].fidelity) <= 0.05
        assert ground[0].fidelity >= 1.0 - 1e-12

    def test_entropy_drops_at_most_one_bit_per_step(self):
        n = 3
        h = build_tfim(tfim_from_ratio(n, 1.0))
        sched = bangbang_schedule(h, n, 2)
        records = run_protocol(maximally_mixed(n), sched, h)
        for before, after in zip(records, records[1:]):
            assert after.entropy >= before.entropy - 1.0 - 1e-9

    def test_deterministic(self):
        h = build_tfim(tfim_from_ratio(3, 0.2))
        sched = bangbang_schedule(h, 3, 1)
        a = run_protocol(maximally_mixed(3), sched, h)
        b = run_protocol(maximally_mixed(3), sched, h)
        assert [(r.fidelity, r.energy, r.entropy) for r in a] == [
            (r.fidelity, r.energy, r.entropy) for r in b
        ]

    def test_observables_stay_in_range(self):
        n = 3
        h = build_tfim(tfim_from_ratio(n, 1.0))
        couplings = tuple(CouplingDescriptor(a, s) for s in range(n) for a in "XYZ")
        e_min, e_max = default_energy_band(h, couplings)
        cfg = LogSweepConfig(k=3, e_min=e_min, e_max=e_max)
        sched = logsweep_schedule(h, n, cfg)
        for rec in run_protocol(maximally_mixed(n), sched, h):
            assert 0.0 <= rec.fidelity <= 1.0
            assert 0.0 <= rec.entropy <= n

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            run_protocol(basis_state(4, 0), Schedule(steps=()), build_two_level(1.0))
