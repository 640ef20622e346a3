import math

import numpy as np
import pytest

import qland


def test_param_counts():
    assert qland.param_count("cz_entanglement", 5, 1) == 5
    assert qland.param_count("crx_entanglement", 5, 16) == 176
    assert qland.param_count("no_entanglement", 5, 1) == 10


def test_unitary_and_losses():
    theta = np.linspace(0.1, 1.0, qland.param_count("crx_entanglement", 2, 2))
    v = qland.build_unitary("crx_entanglement", 2, 2, theta)
    assert v.shape == (4, 4)
    assert np.allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
    u = qland.haar_random_unitary(4, seed=3)
    assert qland.sample_loss(u, u) == pytest.approx(0.0, abs=1e-12)
    tr = qland.maxent_loss_from_trace(u, v)
    assert tr == pytest.approx(1 - abs(np.trace(u.conj().T @ v)) ** 2 / 16, abs=1e-12)
    assert qland.sample_loss(u, v, "max_entangled") == pytest.approx(tr, abs=1e-12)


def test_bounds():
    assert qland.min_distance_separable(0.0, 1.0) == pytest.approx(2.0)
    assert qland.min_distance_entangled_lb(0.0, 1.0, 8) == pytest.approx(4.0)
    g = qland.ball_max_fidelity_separable(0.3, 10.0)
    assert g["max_fidelity"] == 1.0
    assert qland.improvement_ratio_bound(0.5, 0.5, 2) == pytest.approx(4.0)
    assert qland.qnfl_lower_bound(4, 1, 1) == pytest.approx(0.7)


def test_errors_map_to_value_error():
    with pytest.raises(ValueError):
        qland.build_unitary("cz_entanglement", 2, 1, np.zeros(5))
    with pytest.raises(qland.DomainError):
        qland.haar_bin_probability(0.5, 0.2, 4)


def test_landscape_and_expressivity():
    grid = qland.landscape_grid(21, "max_entangled")
    assert grid.shape == (21, 21)
    assert grid[0, 0] == pytest.approx(0.0, abs=1e-15)
    r = qland.expressivity("cz_entanglement", 2, 1, samples=200, bins=20, seed=1)
    assert sum(r["histogram"]) == 200
    assert r["expr"] >= 0.0


def test_run_experiment_and_verify():
    records = qland.run_experiment(
        {
            "experiment": "improvement",
            "ansatz": [{"family": "cz_entanglement", "layers": [1]}],
            "qubits": 2,
            "radii": [0.5, 1.0],
            "repetitions": 2,
            "master_seed": 1,
        }
    )
    assert len(records) == 4
    for r in records:
        assert r["improvement"] <= r["start_loss"] + 1e-9
        assert len(r["curve"]) == 2
    checks = qland.verify_bounds((2, 4), trials=10)
    assert all(c["passed"] for c in checks)
    assert not math.isnan(checks[0]["max_error"])
