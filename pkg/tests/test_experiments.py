import json
import math

import numpy as np
import pytest

from qdcool.cli import main
from qdcool.cooling import simulate_1p1_probabilities, weak_coupling_trotter_number
from qdcool.experiments import (
    BangBangTfimConfig,
    ConfigError,
    DetuningCurvesConfig,
    EnergySweepConfig,
    LogSweep1p1Config,
    LogSweepTfimConfig,
    SphereScanConfig,
    TrotterCurvesConfig,
    config_from_dict,
    exp_bangbang_tfim,
    exp_detuning_curves,
    exp_energy_sweep,
    exp_logsweep_1p1,
    exp_logsweep_tfim,
    exp_sphere_scan,
    exp_trotter_curves,
    fibonacci_sphere,
    run_experiment,
)
from qdcool.experiments import _sphere_point_final
from qdcool.tables import ResultTable, read_csv, write_csv


@pytest.fixture(scope="module")
def trotter_table():
    cfg = TrotterCurvesConfig(t_max=40.0, t_points=90)
    return exp_trotter_curves(cfg)[0]


@pytest.fixture(scope="module")
def detuning_table():
    return exp_detuning_curves(DetuningCurvesConfig(delta_points=41))[0]


@pytest.fixture(scope="module")
def sphere_tables():
    return exp_sphere_scan(SphereScanConfig(points=120))


@pytest.fixture(scope="module")
def energy_table():
    cfg = EnergySweepConfig(n=5, ratios=(0.2, 5.0), site=2, eps_points=40)
    return exp_energy_sweep(cfg)[0]


@pytest.fixture(scope="module")
def bangbang_tables():
    return exp_bangbang_tfim(BangBangTfimConfig(n_values=(3,), ratios=(0.2, 5.0)))


@pytest.fixture(scope="module")
def logsweep1p1_tables():
    return exp_logsweep_1p1(LogSweep1p1Config())


@pytest.fixture(scope="module")
def logsweep_tfim_table():
    cfg = LogSweepTfimConfig(
        k_values=(2, 4, 8), n_fixed=4, n_values=(3,), k_fixed=8, ratios=(0.2, 1.0)
    )
    return exp_logsweep_tfim(cfg)[0]


class TestTrotterCurves:

    def test_schema(self, trotter_table):
        assert trotter_table.columns == ["m", "t", "p_cool", "p_reheat", "p_reheat_exact"]

    def test_row_count_and_working_point(self, trotter_table):
        ts = sorted(set(r[1] for r in trotter_table.rows))
        assert len(trotter_table.rows) == 3 * len(ts)
        assert math.pi / 0.1 in ts

    def test_resonant_cooling_unaffected(self, trotter_table):
        t_star = math.pi / 0.1
        rows = [r for r in trotter_table.rows if r[1] == t_star]
        assert len(rows) == 3
        assert all(abs(r[2] - 1.0) <= 1e-6 for r in rows)

    def test_digitization_tracks_inside_window(self, trotter_table):
        omega = math.sqrt(0.1**2 / 4 + 1.0)
        for m in (2, 4, 8):
            rows = [r for r in trotter_table.rows if r[0] == m]
            inside = [r for r in rows if r[1] * omega / math.pi <= m / 2]
            assert inside
            assert max(abs(r[3] - r[4]) for r in inside) <= 0.02


class TestDetuningCurves:
    def test_schema_and_modes(self, detuning_table):
        assert detuning_table.columns == ["mode", "gamma", "delta", "p_cool", "p_reheat"]
        assert set(r[0] for r in detuning_table.rows) == {"bangbang", "weak"}

    def test_bangbang_on_resonance(self, detuning_table):
        row = [r for r in detuning_table.rows if r[0] == "bangbang" and r[2] == 0.0]
        assert len(row) == 1
        assert abs(row[0][3] - 1.0) <= 1e-12
        assert row[0][4] <= 1e-12

    def test_weak_reheat_shrinks_with_coupling(self, detuning_table):
        maxima = []
        for gamma in (0.5, 0.2, 0.1):
            rows = [r for r in detuning_table.rows if r[0] == "weak" and r[1] == gamma]
            maxima.append(max(r[4] for r in rows))
        assert maxima[0] > maxima[1] > maxima[2]

    def test_swap_of_system_and_fridge_energies(self):
        # with gamma and t held fixed the transfer depends on the two level
        # splittings only, which the swap leaves unchanged
        gamma, t = 2.0, math.pi / 2.0
        for delta in (0.1, 0.35, -0.2):
            a = simulate_1p1_probabilities(1.0 + delta, 1.0, gamma, t, 1)
            b = simulate_1p1_probabilities(1.0, 1.0 + delta, gamma, t, 1)
            assert abs(a.p_cool - b.p_cool) <= 1e-9
            assert abs(a.p_reheat - b.p_reheat) <= 1e-9


class TestSphereScan:
    def test_schema(self, sphere_tables):
        main_t, summary = sphere_tables
        assert main_t.columns == ["sequence", "nx", "ny", "nz", "p_final"]
        assert summary.columns == ["sequence", "mean", "std", "min"]
        assert len(main_t.rows) == 3 * 120

    def test_summary_consistent_with_rows(self, sphere_tables):
        main_t, summary = sphere_tables
        for seq, mean, std, mn in summary.rows:
            finals = np.array([r[4] for r in main_t.rows if r[0] == seq])
            assert abs(mean - finals.mean()) <= 1e-12
            assert abs(std - finals.std()) <= 1e-12
            assert abs(mn - finals.min()) <= 1e-12

    def test_pole_reduces_to_two_level_weak_coupling(self):
        h = 1.0
        eps = 2 * h
        t = 10.0 / h
        gamma = math.pi / t
        m = weak_coupling_trotter_number(eps, gamma)
        want = simulate_1p1_probabilities(eps, eps, gamma, t, m).p_cool
        got = _sphere_point_final(np.array([0.0, 0.0, 1.0]), h, 10.0, "X")
        assert abs(got - want) <= 1e-12

    def test_fibonacci_lattice_on_unit_sphere(self):
        pts = fibonacci_sphere(64)
        assert pts.shape == (64, 3)
        assert np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) <= 1e-12
        assert len(np.unique(np.round(pts, 9), axis=0)) == 64

    def test_random_sampling_seeded(self):
        a = exp_sphere_scan(SphereScanConfig(points=16, sampling="random", seed=3))
        b = exp_sphere_scan(SphereScanConfig(points=16, sampling="random", seed=3))
        assert a[0].rows == b[0].rows


class TestEnergySweep:
    def test_schema(self, energy_table):
        assert energy_table.columns == ["j_over_b", "eps", "delta_e", "eps_star"]

    def test_tiny_fridge_energy_is_inert(self, energy_table):
        for ratio in (0.2, 5.0):
            rows = sorted((r for r in energy_table.rows if r[0] == ratio), key=lambda r: r[1])
            deepest = min(r[2] for r in rows)
            assert abs(rows[0][2]) <= 0.1 * abs(deepest)

    def test_minimum_near_estimate_and_negative(self, energy_table):
        for ratio in (0.2, 5.0):
            rows = sorted((r for r in energy_table.rows if r[0] == ratio), key=lambda r: r[1])
            eps = np.array([r[1] for r in rows])
            de = np.array([r[2] for r in rows])
            star = rows[0][3]
            cell = eps[1] - eps[0]
            assert abs(eps[np.argmin(de)] - star) <= cell
            assert de[np.argmin(np.abs(eps - star))] < 0.0


class TestBangBangTfim:
    def test_schema(self, bangbang_tables):
        traj, final = bangbang_tables
        assert traj.columns == [
            "n",
            "j_over_b",
            "initial_state",
            "step",
            "fidelity",
            "energy",
            "entropy",
        ]
        assert final.columns == ["n", "j_over_b", "f_final"]

    def test_trajectory_lengths(self, bangbang_tables):
        traj, _ = bangbang_tables
        for ratio in (0.2, 5.0):
            for tag in ("mixed", "ground"):
                rows = [r for r in traj.rows if r[1] == ratio and r[2] == tag]
                assert [r[3] for r in rows] == list(range(0, 10))

    def test_ground_start_begins_at_unit_fidelity(self, bangbang_tables):
        traj, _ = bangbang_tables
        first = [r for r in traj.rows if r[2] == "ground" and r[3] == 0]
        assert all(r[4] >= 1.0 - 1e-9 for r in first)

    def test_final_table_matches_mixed_trajectory(self, bangbang_tables):
        traj, final = bangbang_tables
        for n, ratio, f_final in final.rows:
            rows = [r for r in traj.rows if r[1] == ratio and r[2] == "mixed"]
            assert f_final == rows[-1][4]

    def test_emitted_observables_stay_in_range(self, bangbang_tables):
        traj, _ = bangbang_tables
        for row in traj.rows:
            n, fidelity, entropy = row[0], row[4], row[6]
            assert -1e-9 <= fidelity <= 1.0 + 1e-9
            assert -1e-9 <= entropy <= n + 1e-9

    def test_fidelity_decays_with_size_far_from_criticality(self):
        bangbang_tables = exp_bangbang_tfim(
            BangBangTfimConfig(n_values=(4, 8), ratios=(0.2,))
        )
        finals = {n: f for n, _, f in bangbang_tables[1].rows}
        assert finals[8] < finals[4]
        assert finals[8] > 0.5


class TestLogSweep1p1:
    def test_schema(self, logsweep1p1_tables):
        steps, final = logsweep1p1_tables
        assert steps.columns == [
            "j",
            "eps_j",
            "linewidth_j",
            "gamma_j",
            "trotter_m",
            "delta_sys",
            "p_cool_step",
            "p_reheat_step",
        ]
        assert final.columns == ["delta_sys", "p_final"]

    def test_ladder_endpoints(self, logsweep1p1_tables):
        steps, _ = logsweep1p1_tables
        eps = sorted(set(r[1] for r in steps.rows), reverse=True)
        assert eps[0] == 5.0
        assert eps[-1] == 1.0
        assert len(eps) == 5

    def test_band_tiling(self, logsweep1p1_tables):
        steps, _ = logsweep1p1_tables
        ladder = {}
        for r in steps.rows:
            ladder[r[0]] = (r[1], r[2])
        for j in range(1, 5):
            e_hi, d_hi = ladder[j]
            e_lo, d_lo = ladder[j + 1]
            assert abs((e_lo + d_lo) - (e_hi - d_hi)) <= 1e-10 * 5.0

    def test_step_resonances_centered_on_their_rung(self, logsweep1p1_tables):
        steps, _ = logsweep1p1_tables
        gaps = sorted(set(r[5] for r in steps.rows))
        res = gaps[1] - gaps[0]
        for j in range(1, 6):
            rows = [r for r in steps.rows if r[0] == j]
            eps_j = rows[0][1]
            peak = max(rows, key=lambda r: r[6])[5]
            assert abs(peak - eps_j) <= res

    def test_sequential_floor_committed_from_oracle_run(self, logsweep1p1_tables):
        # regression floor fixed from the independent block-product oracle,
        # whose minimum over this gap grid evaluates to 0.95441
        _, final = logsweep1p1_tables
        assert len(final.rows) == 50
        assert min(r[1] for r in final.rows) >= 0.954


class TestLogSweepTfim:
    def test_schema_and_labels(self, logsweep_tfim_table):
        assert logsweep_tfim_table.columns == ["phase", "n", "k", "f_final", "one_minus_f"]
        assert set(r[0] for r in logsweep_tfim_table.rows) == {"paramagnetic", "critical"}

    def test_fidelity_floor(self, logsweep_tfim_table):
        # never worse than the maximally mixed overlap, down to the coarsest
        # two-rung sweep
        seen_k = set()
        for phase, n, k, f_final, one_minus_f in logsweep_tfim_table.rows:
            seen_k.add(k)
            assert f_final >= 2.0**-n
            assert abs((1.0 - f_final) - one_minus_f) <= 1e-12
        assert 2 in seen_k

    def test_critical_improves_with_gradation(self, logsweep_tfim_table):
        rows = sorted((r for r in logsweep_tfim_table.rows if r[0] == "critical" and r[1] == 4), key=lambda r: r[2])
        assert rows[-1][3] > rows[0][3]


class TestDeterminismAndParallelism:
    def test_rerun_bit_identical(self):
        cfg = DetuningCurvesConfig(delta_points=15)
        a = exp_detuning_curves(cfg)[0]
        b = exp_detuning_curves(cfg)[0]
        assert a.rows == b.rows

    def test_threaded_equals_serial(self):
        cfg = SphereScanConfig(points=40)
        serial = exp_sphere_scan(cfg, threads=1)
        threaded = exp_sphere_scan(cfg, threads=3)
        assert serial[0].rows == threaded[0].rows
        cfg2 = EnergySweepConfig(n=3, ratios=(0.2, 1.0, 5.0), site=1, eps_points=12)
        assert exp_energy_sweep(cfg2, threads=1)[0].rows == exp_energy_sweep(cfg2, threads=4)[0].rows


class TestTablesIO:
    def test_csv_round_trip(self, tmp_path):
        table = ResultTable(
            name="demo",
            columns=["label", "value", "count"],
            rows=[("plain", 0.1 + 0.2, 3), ('quo"te,comma', -1.5e-11, 0)],
        )
        path = write_csv(table, tmp_path)
        text = path.read_bytes().decode("utf-8")
        assert text.startswith("label,value,count\r\n")
        assert '"quo""te,comma"' in text
        back = read_csv(path)
        assert back.columns == table.columns
        assert back.rows[0][1] == 0.1 + 0.2
        assert back.rows[1][0] == 'quo"te,comma'

    def test_rectangularity_enforced(self):
        with pytest.raises(ValueError):
            ResultTable(name="bad", columns=["a", "b"], rows=[(1.0,)])


class TestConfigParsing:
    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config key 'kk'"):
            config_from_dict("logsweep-1p1", {"kk": 3})

    def test_field_named_in_validation_error(self):
        with pytest.raises(ConfigError, match="k must be >= 2"):
            config_from_dict("logsweep-1p1", {"k": 1})

    def test_lists_become_tuples(self):
        cfg = config_from_dict("trotter-curves", {"trotter_numbers": [2, 4]})
        assert cfg.trotter_numbers == (2, 4)

    def test_unknown_experiment(self):
        with pytest.raises(ConfigError):
            run_experiment("melt-curves", TrotterCurvesConfig())


class TestCli:
    def _write_config(self, tmp_path, text):
        path = tmp_path / "cfg.toml"
        path.write_text(text)
        return str(path)

    def test_check_mode(self, tmp_path, capsys):
        cfg = self._write_config(tmp_path, "delta_points = 9\n")
        rc = main(["detuning-curves", "--config", cfg, "--out", str(tmp_path), "--check"])
        assert rc == 0
        assert "config ok" in capsys.readouterr().out

    def test_run_writes_tables_and_metadata(self, tmp_path):
        cfg = self._write_config(tmp_path, "delta_points = 9\nweak_gammas = [0.4]\n")
        out = tmp_path / "results"
        rc = main(["detuning-curves", "--config", cfg, "--out", str(out)])
        assert rc == 0
        csv_path = out / "detuning-curves.csv"
        meta_path = out / "detuning-curves.meta.json"
        assert csv_path.is_file() and meta_path.is_file()
        meta = json.loads(meta_path.read_text())
        assert meta["columns"] == ["mode", "gamma", "delta", "p_cool", "p_reheat"]
        assert meta["config"]["delta_points"] == 9

    def test_rerun_is_byte_stable(self, tmp_path):
        cfg = self._write_config(tmp_path, "delta_points = 9\n")
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["detuning-curves", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["detuning-curves", "--config", cfg, "--out", str(out2)]) == 0
        assert (out1 / "detuning-curves.csv").read_bytes() == (
            out2 / "detuning-curves.csv"
        ).read_bytes()

    def test_unknown_subcommand_usage_error(self, capsys):
        rc = main(["melt-curves", "--config", "x", "--out", "y"])
        assert rc == 2
        assert "usage" in capsys.readouterr().err.lower()

    def test_invalid_config_names_field(self, tmp_path, capsys):
        cfg = self._write_config(tmp_path, "k = 1\n")
        rc = main(["logsweep-1p1", "--config", cfg, "--out", str(tmp_path)])
        assert rc == 1
        assert "k must be >= 2" in capsys.readouterr().err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = self._write_config(tmp_path, "piano = 3\n")
        rc = main(["logsweep-1p1", "--config", cfg, "--out", str(tmp_path)])
        assert rc == 1
        assert "piano" in capsys.readouterr().err

    def test_malformed_toml(self, tmp_path, capsys):
        cfg = self._write_config(tmp_path, "k = = 3\n")
        rc = main(["logsweep-1p1", "--config", cfg, "--out", str(tmp_path)])
        assert rc == 1
        assert "malformed" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        rc = main(["logsweep-1p1", "--config", str(tmp_path / "nope.toml"), "--out", str(tmp_path)])
        assert rc == 1
        assert "not found" in capsys.readouterr().err

    def test_unwritable_output_path(self, tmp_path, capsys):
        cfg = self._write_config(tmp_path, "delta_points = 5\n")
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        rc = main(["detuning-curves", "--config", cfg, "--out", str(blocker / "sub")])
        assert rc == 1
