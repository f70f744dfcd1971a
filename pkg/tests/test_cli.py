import numpy as np
import pytest

from binseg import image_core
from binseg.cli import main


@pytest.fixture
def phantom_dir(tmp_path):
    out = tmp_path / "ph"
    assert main(["synth", "-o", str(out)]) == 0
    return out


def read_report(path):
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


def test_synth_defaults_write_three_files(phantom_dir):
    image = image_core.load_image(phantom_dir / "image.pgm")
    truth = image_core.load_mask(phantom_dir / "truth.pgm")
    bias = image_core.load_field(phantom_dir / "bias_true.txt")
    assert image.shape == truth.shape == bias.shape == (128, 128)


def test_synth_seed_is_reproducible(tmp_path):
    flags = ["--noise-kind", "gaussian", "--noise-level", "0.05", "--seed", "7"]
    main(["synth", "-o", str(tmp_path / "a"), *flags])
    main(["synth", "-o", str(tmp_path / "b"), *flags])
    assert (tmp_path / "a" / "image.pgm").read_bytes() == (tmp_path / "b" / "image.pgm").read_bytes()


def test_synth_rejects_equal_constants(tmp_path, capsys):
    assert main(["synth", "-o", str(tmp_path), "--c-in", "0.5", "--c-out", "0.5"]) != 0
    assert "unsegmentable phantom" in capsys.readouterr().err


def test_segment_clean_phantom(phantom_dir, tmp_path):
    out = tmp_path / "run"
    code = main(["segment", str(phantom_dir / "image.pgm"), "-o", str(out),
                 "--ground-truth", str(phantom_dir / "truth.pgm")])
    assert code == 0
    report = read_report(out / "report.txt")
    assert report["dice"] == "1.000000"
    assert report["js"] == "1.000000"
    assert report["jaccard"] == "1.000000"
    assert report["converged"] == "true"
    assert set(report) >= {"c1", "c2", "iterations"}

    rows = (out / "energy.csv").read_text().splitlines()
    assert rows[0] == "iter,data1,data2,reg,penalty,total"
    assert len(rows) - 1 == int(report["iterations"]) + 1

    corrected = image_core.load_field(out / "corrected.txt")
    assert corrected.min() >= 0.0 and corrected.max() <= 1.0
    assert image_core.load_field(out / "bias.txt").min() > 0


def test_segment_without_truth_has_no_scores(phantom_dir, tmp_path):
    main(["segment", str(phantom_dir / "image.pgm"), "-o", str(tmp_path / "r"), "--max-iters", "3"])
    assert "dice" not in read_report(tmp_path / "r" / "report.txt")


def test_segment_bias_fixed_writes_unit_bias(phantom_dir, tmp_path):
    out = tmp_path / "base"
    assert main(["segment", str(phantom_dir / "image.pgm"), "-o", str(out), "--bias-fixed"]) == 0
    np.testing.assert_array_equal(image_core.load_field(out / "bias.txt"), 1.0)


def test_segment_missing_input(tmp_path, capsys):
    missing = tmp_path / "missing.pgm"
    assert main(["segment", str(missing), "-o", str(tmp_path / "o")]) != 0
    assert str(missing) in capsys.readouterr().err


def test_segment_invalid_param(phantom_dir, tmp_path, capsys):
    assert main(["segment", str(phantom_dir / "image.pgm"), "-o", str(tmp_path / "o"),
                 "--tau1", "0"]) != 0
    assert "tau1" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()


def test_segment_truth_size_mismatch(phantom_dir, tmp_path, capsys):
    image_core.save_mask(np.ones((3, 3)), tmp_path / "small.pgm")
    assert main(["segment", str(phantom_dir / "image.pgm"), "-o", str(tmp_path / "o"),
                 "--ground-truth", str(tmp_path / "small.pgm")]) != 0


def test_eval_identical(phantom_dir, capsys):
    truth = str(phantom_dir / "truth.pgm")
    assert main(["eval", truth, truth]) == 0
    assert capsys.readouterr().out.strip() == "dice=1.000000 js=1.000000 jaccard=1.000000"


def test_eval_strip_example(tmp_path, capsys):
    pred = np.array([[255, 255, 255, 255, 0, 0, 0, 0]], dtype=np.uint8)
    truth = np.array([[0, 0, 255, 255, 255, 255, 0, 0]], dtype=np.uint8)
    image_core.save_pgm(pred, tmp_path / "p.pgm")
    image_core.save_pgm(truth, tmp_path / "t.pgm")
    assert main(["eval", str(tmp_path / "p.pgm"), str(tmp_path / "t.pgm")]) == 0
    assert capsys.readouterr().out.strip() == "dice=0.500000 js=0.500000 jaccard=0.333333"


def test_eval_non_binary(tmp_path, capsys):
    image_core.save_pgm(np.array([[0, 17]], dtype=np.uint8), tmp_path / "p.pgm")
    image_core.save_pgm(np.array([[0, 255]], dtype=np.uint8), tmp_path / "t.pgm")
    assert main(["eval", str(tmp_path / "p.pgm"), str(tmp_path / "t.pgm")]) != 0
    assert "non-binary mask" in capsys.readouterr().err


def test_eval_dimension_mismatch(tmp_path):
    image_core.save_mask(np.ones((2, 2)), tmp_path / "a.pgm")
    image_core.save_mask(np.ones((2, 3)), tmp_path / "b.pgm")
    assert main(["eval", str(tmp_path / "a.pgm"), str(tmp_path / "b.pgm")]) != 0


def test_module_entry_point(phantom_dir):
    import subprocess
    import sys

    truth = str(phantom_dir / "truth.pgm")
    proc = subprocess.run([sys.executable, "-m", "binseg", "eval", truth, truth],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("dice=1.000000")
