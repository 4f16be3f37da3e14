"""Smoke tests for the python bindings. Runnable standalone or via pytest."""

import json
import math
import tempfile

import cmefsp


def test_import_surface():
    for name in (
        "lotka_volterra",
        "michaelis_menten",
        "toggle_switch",
        "birth_death",
        "verify_budget",
        "solve_adaptive",
        "solve_standard_fsp",
        "ssa_trajectory",
        "ensemble_stats",
        "fsp_mean",
        "parse_config",
        "run",
    ):
        assert hasattr(cmefsp, name), name


def test_budget_arithmetic():
    cfg = cmefsp.SolverConfig()
    cfg.t0 = 0.0
    cfg.t_final = 10.0
    cfg.dt = 0.1
    cfg.alpha = 1e-6
    cfg.eps_time = 2e-6
    cfg.eps_global = 1e-3
    d = cmefsp.verify_budget(cfg)
    assert d.n_steps == 100
    assert d.bound == 100 * (2e-6 + 2e-6)
    assert d.pass_ and d.allocation_ok


def test_birth_death_solve():
    m = cmefsp.birth_death(1.0, 1.0, 60)
    r = cmefsp.solve_adaptive(m.network, [5], m.config)
    assert abs(sum(r.probs) - 1.0) <= 1e-12
    assert all(p >= 0.0 for p in r.probs)
    assert len(r.steps) == 20
    assert all(s.local_bound == 2.0 * s.pruned_mass for s in r.steps)
    cum = [s.cum_bound for s in r.steps]
    assert cum == sorted(cum)


def test_standard_fsp_leak():
    m = cmefsp.birth_death(1.0, 1.0, 0)
    r = cmefsp.solve_standard_fsp(m.network, [5], 1.0, 1e-6)
    assert r.leaked_mass <= 1e-6


def test_ssa_reproducibility():
    m = cmefsp.lotka_volterra()
    t1 = cmefsp.ssa_trajectory(m.network, m.x0, 1.0, 42, 3)
    t2 = cmefsp.ssa_trajectory(m.network, m.x0, 1.0, 42, 3)
    assert t1.times == t2.times
    assert t1.states == t2.states
    assert t1.n_events >= 1


def test_ensemble_and_fsp_mean():
    m = cmefsp.michaelis_menten()
    cfg = m.config
    cfg.t_final = 5.0
    cfg.snapshot_every = 10
    r = cmefsp.solve_adaptive(m.network, m.x0, cfg)
    grid = [s.t for s in r.snapshots]
    stats = cmefsp.ensemble_stats(m.network, m.x0, cfg.t_final, grid, 300, 7)
    assert stats.n == 300
    for s in range(4):
        fsp = cmefsp.fsp_mean(r, s)
        for g in range(len(grid)):
            sem = stats.sem[s][g]
            diff = abs(fsp[g] - stats.mean[s][g])
            assert diff <= max(4.0 * sem, 1e-12), (s, g, diff, sem)


def test_config_run_and_manifest():
    with tempfile.TemporaryDirectory() as tmp:
        cfg = cmefsp.parse_config(
            json.dumps(
                {
                    "model": {"builtin": "birth_death"},
                    "solver": {"t_final": 0.5, "snapshot_every": 5},
                    "output": {"dir": tmp},
                }
            )
        )
        assert cmefsp.run(cfg) == 0
        manifest = json.load(open(tmp + "/manifest.json"))
        assert manifest["status"] == "success"
        with open(tmp + "/snapshots.jsonl") as f:
            for line in f:
                snap = json.loads(line)
                assert math.isclose(sum(snap["probs"]), 1.0, abs_tol=1e-12)


def test_config_rejects_unknown_keys():
    try:
        cmefsp.parse_config('{"model": {"builtin": "birth_death"}, "solvr": {}}')
    except cmefsp.ConfigError as e:
        assert "solvr" in str(e)
    else:
        raise AssertionError("expected ConfigError")


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"ok   {name}")
            except Exception as exc:  # noqa: BLE001
                failures += 1
                print(f"FAIL {name}: {exc}")
    raise SystemExit(failures)
