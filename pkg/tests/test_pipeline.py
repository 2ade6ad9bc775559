import json

import numpy as np
import pytest

from leadrank import (
    FirmRecord,
    PipelineConfig,
    StageError,
    SynthSpec,
    ValidationError,
    compute_log_returns,
    generate_synthetic,
    load_price_csv,
    parse_config_file,
    run_pipeline,
    save_firm_csv,
    save_price_csv,
    stratify,
)

EXPECTED_FILES = [
    "returns.csv", "lead_matrix.csv", "lead_matrix.json", "graph.json",
    "edges.csv", "scores.csv", "scores.json", "layers.json", "layers.csv",
]


def fake_firms(tickers, seed=0):
    gen = np.random.default_rng(seed)
    records = []
    for t in tickers:
        assets = float(gen.uniform(1e5, 1e7))
        records.append(FirmRecord(t, assets, assets * 0.4, assets * 0.05, assets * 0.07))
    return records


@pytest.fixture()
def synth_inputs(tmp_path):
    panel, _ = generate_synthetic(SynthSpec(seed=23, noise_sigma=0.004, length=240))
    prices = tmp_path / "prices.csv"
    firms = tmp_path / "firms.csv"
    save_price_csv(panel, prices)
    save_firm_csv(fake_firms(panel.tickers), firms)
    return prices, firms


class TestPipelineConfig:
    def test_external_dict_uses_lambda_key(self):
        cfg = PipelineConfig(threshold=0.2)
        assert cfg.to_dict()["lambda"] == 0.2
        assert "threshold" not in cfg.to_dict()

    def test_with_external_parses_strings(self):
        cfg = PipelineConfig().with_external({"alpha": "0.9", "max_lag": "7",
                                              "lambda": "0.05"})
        assert cfg.alpha == 0.9
        assert cfg.max_lag == 7
        assert cfg.threshold == 0.05

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError, match="unknown configuration key"):
            PipelineConfig().with_external({"alfa": 0.9})

    def test_unparsable_value_rejected(self):
        with pytest.raises(ValidationError, match="cannot parse"):
            PipelineConfig().with_external({"alpha": "fast"})

    @pytest.mark.parametrize("kwargs", [
        {"alpha": 1.0}, {"alpha": 0.0}, {"threshold": -0.1}, {"tol": 0.0},
        {"max_lag": 0}, {"scheme": "flat"}, {"t0_mode": "peak"}, {"log_base": "2"},
        {"max_iter": 0},
    ])
    def test_validate_rejects_bad_values(self, kwargs):
        with pytest.raises(ValidationError):
            PipelineConfig(**kwargs).validate()

    def test_config_file_parsing(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text(
            "# comment line\n\nalpha = 0.9\nlambda=0.2\nscheme = uniform\n",
            encoding="utf-8",
        )
        cfg = PipelineConfig().with_external(parse_config_file(path))
        assert cfg.alpha == 0.9
        assert cfg.threshold == 0.2
        assert cfg.scheme == "uniform"

    def test_config_file_bad_line(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("alpha 0.9\n", encoding="utf-8")
        with pytest.raises(ValidationError, match="line 1"):
            parse_config_file(path)


class TestRunPipeline:
    def test_full_run_with_firms(self, synth_inputs, tmp_path):
        prices, firms = synth_inputs
        out = tmp_path / "out"
        result = run_pipeline(prices, firms_path=firms, out_dir=out)
        for name in EXPECTED_FILES + ["regressions.csv", "regressions.json",
                                      "layer_summary.csv", "manifest.json"]:
            assert (out / name).exists(), name
        manifest = result.manifest
        assert [s["name"] for s in manifest["stages"]] == [
            "ingest", "leadlag", "graph", "rank", "stats"]
        assert all(s["status"] == "ok" for s in manifest["stages"])
        assert len(result.regressions) == 4
        assert result.layer_summary is not None
        assert set(manifest["timings"]) == {"ingest", "leadlag", "graph", "rank", "stats"}

    def test_layers_file_matches_stratify(self, synth_inputs, tmp_path):
        prices, _ = synth_inputs
        out = tmp_path / "out"
        run_pipeline(prices, out_dir=out)
        doc = json.loads((out / "layers.json").read_text(encoding="utf-8"))
        returns = compute_log_returns(load_price_csv(prices))
        expected = stratify(returns)
        assert doc["layers"] == [list(layer) for layer in expected.layers]

    def test_stats_skipped_without_firms(self, synth_inputs, tmp_path):
        prices, _ = synth_inputs
        result = run_pipeline(prices, out_dir=tmp_path / "out")
        stages = {s["name"]: s["status"] for s in result.manifest["stages"]}
        assert stages["stats"] == "skipped"
        assert result.regressions is None
        assert not (tmp_path / "out" / "regressions.csv").exists()

    def test_missing_firms_file_is_stats_stage_error(self, synth_inputs, tmp_path):
        prices, _ = synth_inputs
        with pytest.raises(StageError, match="stats") as exc:
            run_pipeline(prices, firms_path=tmp_path / "nope.csv",
                         out_dir=tmp_path / "out")
        assert isinstance(exc.value.cause, OSError)

    def test_missing_prices_is_ingest_stage_error(self, tmp_path):
        with pytest.raises(StageError, match="ingest"):
            run_pipeline(tmp_path / "nope.csv", out_dir=tmp_path / "out")

    def test_byte_identical_reruns(self, synth_inputs, tmp_path):
        prices, firms = synth_inputs
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        run_pipeline(prices, firms_path=firms, out_dir=out1)
        run_pipeline(prices, firms_path=firms, out_dir=out2)
        for name in EXPECTED_FILES + ["regressions.csv", "regressions.json",
                                      "layer_summary.csv"]:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name
        m1 = json.loads((out1 / "manifest.json").read_text(encoding="utf-8"))
        m2 = json.loads((out2 / "manifest.json").read_text(encoding="utf-8"))
        m1.pop("timings")
        m2.pop("timings")
        assert m1 == m2

    def test_manifest_digests_change_with_inputs(self, synth_inputs, tmp_path):
        prices, firms = synth_inputs
        r1 = run_pipeline(prices, firms_path=firms, out_dir=tmp_path / "a")
        panel, _ = generate_synthetic(SynthSpec(seed=24, noise_sigma=0.004, length=240))
        prices2 = tmp_path / "prices2.csv"
        save_price_csv(panel, prices2)
        r2 = run_pipeline(prices2, firms_path=firms, out_dir=tmp_path / "b")
        assert (r1.manifest["inputs"]["prices"]["sha256"]
                != r2.manifest["inputs"]["prices"]["sha256"])
        assert r1.manifest["inputs"]["firms"] == r2.manifest["inputs"]["firms"]

    def test_score_report_contents(self, synth_inputs, tmp_path):
        prices, _ = synth_inputs
        out = tmp_path / "out"
        run_pipeline(prices, out_dir=out, config=PipelineConfig(alpha=0.9))
        doc = json.loads((out / "scores.json").read_text(encoding="utf-8"))
        assert doc["alpha"] == 0.9
        assert doc["lambda"] == 0.1
        assert doc["max_lag"] == 5
        assert doc["scheme"] == "weighted"
        assert doc["n_iter"] >= 1
        assert doc["residual"] < 1e-10
        assert len(doc["scores"]) == 4
