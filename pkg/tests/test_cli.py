import json

import numpy as np
import pytest
from click.testing import CliRunner
from PIL import Image

from reliabench.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def make_tree(tmp_path, n=2):
    rng = np.random.default_rng(1)
    rows = ["image_id,path,label"]
    for i in range(n):
        name = f"im{i}.png"
        Image.fromarray(rng.integers(0, 256, (20, 20, 3), dtype=np.uint8)).save(tmp_path / name)
        rows.append(f"im{i},{name},{i}")
    manifest = tmp_path / "manifest.csv"
    manifest.write_text("\n".join(rows) + "\n")
    return manifest


class TestCorrupt:
    def test_writes_tree_and_reports(self, runner, tmp_path):
        manifest = make_tree(tmp_path)
        out = tmp_path / "out"
        result = runner.invoke(main, [
            "corrupt", "--manifest", str(manifest), "--out", str(out),
            "--kinds", "darken,brighten", "--levels", "1,2", "--seed", "7",
        ])
        assert result.exit_code == 0, result.output
        assert "clean images written: 2" in result.output
        assert "corrupted images written: 8" in result.output
        assert (out / "brighten" / "2" / "im1.png").exists()
        assert json.loads((out / "run_report.json").read_text())["seed"] == 7

    def test_rejects_unknown_kind(self, runner, tmp_path):
        manifest = make_tree(tmp_path)
        result = runner.invoke(main, [
            "corrupt", "--manifest", str(manifest), "--out", str(tmp_path / "o"),
            "--kinds", "rain",
        ])
        assert result.exit_code != 0
        assert "unknown corruption kind" in result.output

    def test_rejects_bad_level(self, runner, tmp_path):
        manifest = make_tree(tmp_path)
        result = runner.invoke(main, [
            "corrupt", "--manifest", str(manifest), "--out", str(tmp_path / "o"),
            "--levels", "0,5",
        ])
        assert result.exit_code != 0
        assert "levels must be in" in result.output


class TestEvaluate:
    def test_scores_predictions(self, runner, tmp_path):
        manifest = make_tree(tmp_path)
        preds = tmp_path / "p.jsonl"
        lines = []
        for i in range(2):
            lines.append({"image_id": f"im{i}", "model": "m", "corruption": "clean",
                          "level": 0, "top5": [i, 90, 91, 92, 93]})
            lines.append({"image_id": f"im{i}", "model": "m", "corruption": "darken",
                          "level": 3, "top5": [90, i, 91, 92, 93]})
        preds.write_text("\n".join(json.dumps(l) for l in lines) + "\n")
        out = tmp_path / "rep"
        result = runner.invoke(main, [
            "evaluate", "--manifest", str(manifest), "--predictions", str(preds),
            "--out", str(out), "--format", "csv",
        ])
        assert result.exit_code == 0, result.output
        text = (out / "report.csv").read_text()
        assert "m,darken,0,1,1,2" in text
        assert "m,darken,3,0,1,2" in text
        assert not (out / "report.json").exists()

    def test_merges_multiple_prediction_files(self, runner, tmp_path):
        manifest = make_tree(tmp_path)
        pa, pb = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        pa.write_text(json.dumps({"image_id": "im0", "model": "m", "corruption": "clean",
                                  "level": 0, "top5": [0, 1, 2, 3, 4]}) + "\n")
        pb.write_text(json.dumps({"image_id": "im0", "model": "m", "corruption": "darken",
                                  "level": 1, "top5": [0, 1, 2, 3, 4]}) + "\n")
        result = runner.invoke(main, [
            "evaluate", "--manifest", str(manifest), "--predictions", str(pa),
            "--predictions", str(pb), "--out", str(tmp_path / "rep"),
        ])
        assert result.exit_code == 0, result.output
        assert "records scored: 2" in result.output

    def test_missing_baseline_fails_cleanly(self, runner, tmp_path):
        manifest = make_tree(tmp_path)
        preds = tmp_path / "p.jsonl"
        preds.write_text(json.dumps({"image_id": "im0", "model": "m", "corruption": "darken",
                                     "level": 1, "top5": [0, 1, 2, 3, 4]}) + "\n")
        result = runner.invoke(main, [
            "evaluate", "--manifest", str(manifest), "--predictions", str(preds),
            "--out", str(tmp_path / "rep"),
        ])
        assert result.exit_code != 0
        assert "no clean" in result.output


class TestWer:
    def test_reports_per_utterance_and_corpus(self, runner, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text(
            "utterance_id,reference,hypothesis\n"
            "u1,the quick brown fox,the quick brown fox\n"
            "u2,hello world,goodbye world\n"
        )
        result = runner.invoke(main, ["wer", "--transcripts", str(f)])
        assert result.exit_code == 0, result.output
        assert "u1: 0%" in result.output
        assert "u2: 50%" in result.output
        assert "corpus: 16.66666667%" in result.output

    def test_bad_file_reported(self, runner, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text("wrong,header,here\n")
        result = runner.invoke(main, ["wer", "--transcripts", str(f)])
        assert result.exit_code != 0


class TestSil:
    def test_rate_to_level(self, runner):
        result = runner.invoke(main, [
            "sil", "rate-to-level", "--industry", "automotive", "--rate", "1e-8",
        ])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "D"

    def test_shared_cell_mentions_co_resident(self, runner):
        result = runner.invoke(main, [
            "sil", "rate-to-level", "--industry", "automotive", "--rate", "1e-7",
        ])
        assert result.output.splitlines()[0] == "C"
        assert "co-resident level: B" in result.output

    def test_per_use_basis(self, runner):
        result = runner.invoke(main, [
            "sil", "rate-to-level", "--industry", "iec-61508", "--rate", "1e-3",
            "--basis", "use",
        ])
        assert result.output.splitlines()[0] == "SIL 3"

    def test_per_use_wrong_industry_errors(self, runner):
        result = runner.invoke(main, [
            "sil", "rate-to-level", "--industry", "aviation", "--rate", "1e-3",
            "--basis", "use",
        ])
        assert result.exit_code != 0

    def test_required_accuracy(self, runner):
        result = runner.invoke(main, [
            "sil", "required-accuracy", "--demand-per-hour", "36000",
            "--target-rate", "1e-3",
        ])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "0.9999999722"

    def test_asil_lookup(self, runner):
        result = runner.invoke(main, ["sil", "asil", "--s", "S3", "--e", "E4", "--c", "C3"])
        assert result.output.strip() == "D"
        result = runner.invoke(main, ["sil", "asil", "--s", "1", "--e", "1", "--c", "1"])
        assert result.output.strip() == "none"

    def test_asil_bad_factor(self, runner):
        result = runner.invoke(main, ["sil", "asil", "--s", "S9", "--e", "E1", "--c", "C1"])
        assert result.exit_code != 0
        assert "bad factor" in result.output

    def test_ood_assess(self, runner, tmp_path):
        profile = {
            "In-Distribution": {"frequency": 0.2, "failure_rate": 0.01},
            "Near-Distribution": {"frequency": 0.2, "failure_rate": 0.02},
            "Somewhat OOD": {"frequency": 0.2, "failure_rate": 0.05},
            "Far OOD": {"frequency": 0.2, "failure_rate": 0.1},
            "Very Far OOD": {"frequency": 0.2, "failure_rate": 0.2},
        }
        f = tmp_path / "profile.json"
        f.write_text(json.dumps(profile))
        result = runner.invoke(main, [
            "sil", "ood-assess", "--profile", str(f), "--demand-per-hour", "1",
        ])
        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[0] == "0.076"
        assert "aviation: E" in result.output
        assert "automotive: none" in result.output


class TestOodDistance:
    def test_mahalanobis(self, runner, tmp_path):
        ref = tmp_path / "ref.json"
        sample = tmp_path / "sample.json"
        ref.write_text(json.dumps({"mean": [1, 1], "covariance": [[1, 0], [0, 1]]}))
        sample.write_text("[4, 5]")
        result = runner.invoke(main, [
            "ood-distance", "--metric", "mahalanobis", "--ref", str(ref),
            "--sample", str(sample),
        ])
        assert result.exit_code == 0, result.output
        assert result.output.strip() == "5"

    def test_kl_with_ladder(self, runner, tmp_path):
        ref = tmp_path / "ref.json"
        sample = tmp_path / "sample.json"
        ladder = tmp_path / "ladder.json"
        ref.write_text("[0.5, 0.5]")
        sample.write_text("[1.0, 0.0]")
        ladder.write_text("[0.1, 0.5, 1.0, 2.0]")
        result = runner.invoke(main, [
            "ood-distance", "--metric", "kl", "--ref", str(ref),
            "--sample", str(sample), "--ladder", str(ladder),
        ])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == "0.6931471806"
        assert lines[1] == "Somewhat OOD"

    def test_hausdorff(self, runner, tmp_path):
        ref = tmp_path / "ref.json"
        sample = tmp_path / "sample.json"
        ref.write_text("[[0.0], [10.0]]")
        sample.write_text("[[1.0]]")
        result = runner.invoke(main, [
            "ood-distance", "--metric", "hausdorff", "--ref", str(ref),
            "--sample", str(sample),
        ])
        assert result.output.strip() == "9"

    def test_bad_reference_shape(self, runner, tmp_path):
        ref = tmp_path / "ref.json"
        sample = tmp_path / "sample.json"
        ref.write_text("[1, 2, 3]")
        sample.write_text("[1, 2, 3]")
        result = runner.invoke(main, [
            "ood-distance", "--metric", "mahalanobis", "--ref", str(ref),
            "--sample", str(sample),
        ])
        assert result.exit_code != 0
        assert "mean" in result.output
