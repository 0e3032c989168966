import numpy as np
import pytest

from eigenbreak.harness import (
    ExperimentConfig,
    angle_for_distance_sq,
    cell_outcomes,
    default_magnitude_grid,
    epsilon_sweep,
    run_experiment,
)

SMALL = dict(
    test_kind="eigenvalue",
    j=1,
    delta=0.1,
    break_kind="eigenvalue_shift",
    magnitudes=(0.1,),
    n_list=(60,),
    replicates=24,
    seed=5,
    pivot_replicates=20_000,
)


def test_config_validation():
    with pytest.raises(ValueError, match="test kind"):
        ExperimentConfig(**{**SMALL, "test_kind": "trace"})
    with pytest.raises(ValueError, match="magnitude grid"):
        ExperimentConfig(**{**SMALL, "magnitudes": ()})
    with pytest.raises(ValueError, match="replicate"):
        ExperimentConfig(**{**SMALL, "replicates": 0})
    with pytest.raises(ValueError, match="break kind"):
        ExperimentConfig(**{**SMALL, "break_kind": "jump"})


def test_default_magnitude_grid_spans_four_boundaries():
    grid = default_magnitude_grid(0.1)
    assert len(grid) == 9
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(0.4)
    np.testing.assert_allclose(np.diff(grid), 0.05)


def test_angle_distance_roundtrip():
    for dist_sq in (0.0, 0.1, 1.0, 2.0):
        phi = angle_for_distance_sq(dist_sq)
        assert 2.0 - 2.0 * np.cos(phi) == pytest.approx(dist_sq, abs=1e-12)
    with pytest.raises(ValueError):
        angle_for_distance_sq(4.5)


def test_experiment_is_reproducible():
    config = ExperimentConfig(**SMALL)
    table1 = run_experiment(config, workers=1)
    table2 = run_experiment(config, workers=1)
    assert table1.rows == table2.rows
    row = table1.rows[0]
    assert row.replicates == 24
    assert row.config_hash == config.config_hash()
    assert 0.0 <= row.rate <= 1.0
    assert row.se == pytest.approx(np.sqrt(row.rate * (1 - row.rate) / 24))


def test_worker_count_does_not_change_results():
    config = ExperimentConfig(**{**SMALL, "replicates": 300})
    serial_rejects, serial_thetas = cell_outcomes(config, 60, 0.1, workers=1)
    pooled_rejects, pooled_thetas = cell_outcomes(config, 60, 0.1, workers=2)
    np.testing.assert_array_equal(serial_rejects, pooled_rejects)
    np.testing.assert_array_equal(serial_thetas, pooled_thetas)


def test_custom_spectrum_flows_through():
    tau = tuple(2.0 ** -k for k in range(5))
    config = ExperimentConfig(**{**SMALL, "T": 5, "tau": tau, "replicates": 4})
    assert config.tau == tau
    assert config.config_hash() != ExperimentConfig(**{**SMALL, "T": 5, "replicates": 4}).config_hash()
    rejects, thetas = cell_outcomes(config, 60, 0.1, workers=1)
    assert rejects.shape == (4,) and np.all((thetas > 0) & (thetas < 1))


def test_deep_null_rarely_rejects():
    config = ExperimentConfig(
        **{**SMALL, "magnitudes": (0.0,), "n_list": (200,), "replicates": 120}
    )
    table = run_experiment(config, workers=2)
    rate = table.rows[0].rate
    assert rate <= 0.05 + 2.0 * np.sqrt(0.05 * 0.95 / 120)


def test_table_export(tmp_path):
    config = ExperimentConfig(**SMALL)
    table = run_experiment(config, workers=1)
    csv_path = tmp_path / "rates.csv"
    json_path = tmp_path / "rates.json"
    table.to_csv(csv_path)
    table.to_json(json_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "N,magnitude,rate,se,mean_theta_hat,replicates"
    assert len(lines) == 2
    import json

    payload = json.loads(json_path.read_text())
    assert payload["config"]["seed"] == 5
    assert payload["rows"][0]["master_seed"] == 5
    assert payload["rows"][0]["config_hash"] == config.config_hash()


def test_epsilon_sweep_histograms(tmp_path):
    config = ExperimentConfig(
        **{**SMALL, "break_kind": "none", "magnitudes": (0.0,), "replicates": 60,
           "n_list": (60,)}
    )
    sweep = epsilon_sweep(config, [0.0, 0.05], workers=2)
    assert [eps for eps, _ in sweep.tables] == [0.0, 0.05]
    for hist in sweep.histograms:
        assert hist.counts.sum() == 60
        assert hist.edges[0] == 0.0 and hist.edges[-1] == 1.0
        assert len(hist.counts) == 20
    trimmed = [h for h in sweep.histograms if h.epsilon == 0.05][0]
    # the trimmed estimator cannot land below 0.05 (the last bin [0.95, 1]
    # may hold estimates exactly at the upper bound)
    assert trimmed.counts[0] == 0
    out = tmp_path / "hist.csv"
    sweep.histograms_to_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "epsilon,N,magnitude,bin_left,bin_right,count"
    assert len(lines) == 1 + 2 * 20
