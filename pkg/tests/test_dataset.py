import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from reliabench import dataset as ds
from reliabench.corruptions import CorruptionKind


def write_manifest(path: Path, rows, header="image_id,path,label"):
    path.write_text(header + "\n" + "\n".join(rows) + ("\n" if rows else ""))
    return path


class TestReadManifest:
    def test_resolves_relative_paths(self, tmp_path):
        m = write_manifest(tmp_path / "m.csv", ["a,images/a.png,3"])
        entries = ds.read_manifest(m)
        assert entries[0].image_id == "a"
        assert entries[0].path == tmp_path / "images" / "a.png"
        assert entries[0].label == 3

    def test_keeps_absolute_paths(self, tmp_path):
        m = write_manifest(tmp_path / "m.csv", ["a,/data/a.png,0"])
        assert ds.read_manifest(m)[0].path == Path("/data/a.png")

    def test_rejects_wrong_header(self, tmp_path):
        m = write_manifest(tmp_path / "m.csv", ["a,b,1"], header="id,file,class")
        with pytest.raises(ValueError, match="header"):
            ds.read_manifest(m)

    def test_rejects_duplicate_ids(self, tmp_path):
        m = write_manifest(tmp_path / "m.csv", ["a,a.png,1", "a,b.png,2"])
        with pytest.raises(ValueError, match="duplicate image_id"):
            ds.read_manifest(m)

    def test_rejects_empty_id(self, tmp_path):
        m = write_manifest(tmp_path / "m.csv", [",a.png,1"])
        with pytest.raises(ValueError, match="empty image_id"):
            ds.read_manifest(m)

    def test_rejects_non_integer_label(self, tmp_path):
        m = write_manifest(tmp_path / "m.csv", ["a,a.png,cat"])
        with pytest.raises(ValueError, match="integer class index"):
            ds.read_manifest(m)

    def test_label_map(self, tmp_path):
        m = write_manifest(tmp_path / "m.csv", ["a,a.png,1", "b,b.png,5"])
        assert ds.label_map(ds.read_manifest(m)) == {"a": 1, "b": 5}


class TestDeriveSeed:
    def test_frozen_values(self):
        assert ds.derive_seed(0, "img000", CorruptionKind.GAUSSIAN_NOISE, 1) == 1578384631662537008
        assert ds.derive_seed(42, "photo_7", CorruptionKind.SALT_PEPPER_NOISE, 10) == 125667691911777689
        assert ds.derive_seed(7, "a", CorruptionKind.SPECKLE_NOISE, 5) == 17448219230245171709

    def test_distinct_across_cells(self):
        seen = set()
        for kind in CorruptionKind:
            for level in range(1, 11):
                for image_id in ("a", "b"):
                    seen.add(ds.derive_seed(0, image_id, kind, level))
        assert len(seen) == len(CorruptionKind) * 10 * 2

    def test_sensitive_to_global_seed(self):
        a = ds.derive_seed(0, "x", CorruptionKind.DARKEN, 1)
        b = ds.derive_seed(1, "x", CorruptionKind.DARKEN, 1)
        assert a != b

    def test_fits_in_64_bits(self):
        for s in range(20):
            v = ds.derive_seed(s, "img", CorruptionKind.GAUSSIAN_NOISE, 3)
            assert 0 <= v < 2**64


def tree_bytes(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*.png"))
    }


class TestCorruptDataset:
    def test_layout_and_counts(self, make_dataset, tmp_path):
        manifest = make_dataset(n=2)
        entries = ds.read_manifest(manifest)
        out = tmp_path / "out"
        report = ds.corrupt_dataset(
            entries, out, kinds=[CorruptionKind.DARKEN, CorruptionKind.GAUSSIAN_NOISE],
            levels=[1, 4], seed=5,
        )
        assert report.clean_written == 2
        assert report.corrupted_written == 2 * 2 * 2
        assert (out / "clean" / "img000.png").exists()
        assert (out / "darken" / "1" / "img001.png").exists()
        assert (out / "gaussian_noise" / "4" / "img000.png").exists()
        assert not (out / "darken" / "2").exists()

    def test_round_trips_clean_pixels(self, make_dataset, tmp_path):
        manifest = make_dataset(n=1)
        entries = ds.read_manifest(manifest)
        ds.corrupt_dataset(entries, tmp_path / "out", kinds=[CorruptionKind.DARKEN], levels=[1])
        original = np.asarray(Image.open(entries[0].path).convert("RGB"))
        clean = np.asarray(Image.open(tmp_path / "out" / "clean" / "img000.png"))
        assert np.array_equal(original, clean)

    def test_two_runs_identical_bytes(self, make_dataset, tmp_path):
        manifest = make_dataset(n=2)
        entries = ds.read_manifest(manifest)
        kinds = [CorruptionKind.GAUSSIAN_NOISE, CorruptionKind.SINGLE_OCCLUSION]
        ds.corrupt_dataset(entries, tmp_path / "o1", kinds=kinds, levels=[2, 9], seed=3)
        ds.corrupt_dataset(entries, tmp_path / "o2", kinds=kinds, levels=[2, 9], seed=3)
        assert tree_bytes(tmp_path / "o1") == tree_bytes(tmp_path / "o2")

    def test_subset_rerun_matches_full_run(self, make_dataset, tmp_path):
        """Per-cell seeds mean re-running one cell reproduces its files."""
        manifest = make_dataset(n=2)
        entries = ds.read_manifest(manifest)
        ds.corrupt_dataset(entries, tmp_path / "full", seed=11)
        ds.corrupt_dataset(
            entries, tmp_path / "part",
            kinds=[CorruptionKind.SPECKLE_NOISE], levels=[7], seed=11,
        )
        full = (tmp_path / "full" / "speckle_noise" / "7" / "img001.png").read_bytes()
        part = (tmp_path / "part" / "speckle_noise" / "7" / "img001.png").read_bytes()
        assert full == part

    def test_seed_changes_stochastic_cells(self, make_dataset, tmp_path):
        manifest = make_dataset(n=1)
        entries = ds.read_manifest(manifest)
        kinds = [CorruptionKind.GAUSSIAN_NOISE]
        ds.corrupt_dataset(entries, tmp_path / "s0", kinds=kinds, levels=[5], seed=0)
        ds.corrupt_dataset(entries, tmp_path / "s1", kinds=kinds, levels=[5], seed=1)
        a = (tmp_path / "s0" / "gaussian_noise" / "5" / "img000.png").read_bytes()
        b = (tmp_path / "s1" / "gaussian_noise" / "5" / "img000.png").read_bytes()
        assert a != b

    def test_skips_unreadable_images(self, make_dataset, tmp_path, caplog):
        manifest = make_dataset(n=2)
        (tmp_path / "img000.png").write_bytes(b"not a png")
        entries = ds.read_manifest(manifest)
        out = tmp_path / "out"
        with caplog.at_level("WARNING"):
            report = ds.corrupt_dataset(entries, out, kinds=[CorruptionKind.DARKEN], levels=[1])
        assert report.clean_written == 1
        assert [s["image_id"] for s in report.skipped] == ["img000"]
        assert "img000" in caplog.text
        assert not (out / "clean" / "img000.png").exists()
        assert (out / "clean" / "img001.png").exists()

    def test_report_file_written(self, make_dataset, tmp_path):
        manifest = make_dataset(n=1)
        entries = ds.read_manifest(manifest)
        out = tmp_path / "out"
        ds.corrupt_dataset(entries, out, kinds=[CorruptionKind.BRIGHTEN], levels=[3], seed=8)
        payload = json.loads((out / "run_report.json").read_text())
        assert payload == {
            "seed": 8,
            "kinds": ["brighten"],
            "levels": [3],
            "clean_written": 1,
            "corrupted_written": 1,
            "skipped": [],
        }

    def test_rejects_bad_level(self, make_dataset, tmp_path):
        entries = ds.read_manifest(make_dataset(n=1))
        with pytest.raises(ValueError, match="severity level"):
            ds.corrupt_dataset(entries, tmp_path / "out", levels=[0])
