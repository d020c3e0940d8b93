import csv

import numpy as np
import pytest

from edgecache.harness import (
    ExperimentConfig,
    run_experiment,
    run_single,
    run_sweep,
)


def tiny_config(tmp_path, **overrides):
    defaults = dict(
        n_services=8,
        capacity=2,
        phi=20.0,
        horizon=30,
        requests_per_slot=15.0,
        K=10,
        seeds=(1,),
        out_dir=str(tmp_path / "out"),
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


class TestConfig:
    def test_defaults_are_valid(self):
        ExperimentConfig()

    def test_invalid_fields_name_the_field(self):
        with pytest.raises(ValueError, match="phi"):
            ExperimentConfig(phi=-1.0)
        with pytest.raises(ValueError, match="policies"):
            ExperimentConfig(policies=("OCR", "NOPE"))
        with pytest.raises(ValueError, match="capacity"):
            ExperimentConfig(capacity=0)

    def test_from_file_parses_and_validates(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "# comment\n"
            "n_services = 12\n"
            "phi = 40\n"
            "policies = ocr,off\n"
            "seeds = 1,2\n"
            "eta_over_sqrt_t = true\n"
        )
        config = ExperimentConfig.from_file(cfg)
        assert config.n_services == 12
        assert config.policies == ("OCR", "OFF")
        assert config.seeds == (1, 2)
        assert config.step_size() == pytest.approx(0.05 / np.sqrt(config.horizon))

    def test_from_file_rejects_unknown_key(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("notakey = 1\n")
        with pytest.raises(ValueError, match="notakey"):
            ExperimentConfig.from_file(cfg)

    def test_from_file_rejects_bad_value(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("phi = sixty\n")
        with pytest.raises(ValueError, match="phi"):
            ExperimentConfig.from_file(cfg)


class TestRun:
    def test_offline_policy_has_zero_regret(self, tmp_path):
        config = tiny_config(tmp_path, policies=("OFF",))
        _, regret_path = run_experiment(config)
        rows = read_csv(regret_path)
        assert len(rows) == config.horizon
        assert all(float(r["cum_regret"]) == 0.0 for r in rows)

    def test_determinism_byte_identical(self, tmp_path):
        c1 = tiny_config(tmp_path, out_dir=str(tmp_path / "a"))
        c2 = tiny_config(tmp_path, out_dir=str(tmp_path / "b"))
        p1 = run_experiment(c1)
        p2 = run_experiment(c2)
        for a, b in zip(p1, p2):
            assert open(a, "rb").read() == open(b, "rb").read()

    def test_accounting_identity(self, tmp_path):
        config = tiny_config(tmp_path, policies=("OCR", "ROCR", "OGA", "OFF"))
        costs_path, regret_path = run_experiment(config)
        costs = read_csv(costs_path)
        regret = read_csv(regret_path)
        offline_total = sum(
            float(r["latency_cost"]) for r in costs if r["policy"] == "OFF"
        )
        for name in config.policies:
            policy_total = sum(
                float(r["latency_cost"]) + float(r["install_cost"])
                for r in costs
                if r["policy"] == name
            )
            final = max(
                (int(r["t"]), float(r["cum_regret"]))
                for r in regret
                if r["policy"] == name
            )[1]
            assert policy_total - offline_total == pytest.approx(final, abs=1e-6)

    def test_multiple_seeds_emit_all_rows(self, tmp_path):
        config = tiny_config(tmp_path, seeds=(1, 2, 3), policies=("OFF",))
        costs_path, _ = run_experiment(config)
        rows = read_csv(costs_path)
        assert len(rows) == 3 * config.horizon
        assert {r["seed"] for r in rows} == {"1", "2", "3"}

    def test_trace_file_input_matches_generated(self, tmp_path):
        from edgecache.harness import materialize_trace
        from edgecache.workload import write_trace

        config = tiny_config(tmp_path)
        trace = materialize_trace(config, seed=1)
        trace_path = tmp_path / "trace.csv"
        write_trace(trace_path, trace)
        via_file = tiny_config(
            tmp_path, trace_path=str(trace_path), out_dir=str(tmp_path / "f")
        )
        results_mem = run_single(config, 1)
        results_file = run_single(via_file, 1)
        for name in config.policies:
            cum_mem = results_mem[name][1]
            cum_file = results_file[name][1]
            assert cum_mem == pytest.approx(cum_file, abs=1e-9)

    def test_sweep_emits_summary_rows(self, tmp_path):
        config = tiny_config(tmp_path, policies=("OCR", "OFF"), horizon=15)
        summary = run_sweep(config, "phi", [20.0, 40.0])
        rows = read_csv(summary)
        assert len(rows) == 4
        assert {r["phi"] for r in rows} == {"20", "40"}
        assert {r["policy"] for r in rows} == {"OCR", "OFF"}
