import json
import subprocess
import sys

import cv2
import numpy as np
import pytest

from ecgi.cli import main
from ecgi.imaging import RoiRect, crop_roi, load_image
from ecgi.scoring import ecgi_score
from ecgi.synthetic import box_blur, glint_scene, random_texture, write_blur_corpus


def save(path, img):
    codes = np.floor(np.clip(img, 0, 1) * 255 + 0.5).astype(np.uint8)
    cv2.imwrite(str(path), codes[..., ::-1])
    return path


@pytest.fixture
def textured(tmp_path):
    return save(tmp_path / "tex.png", random_texture(np.random.default_rng(5), 96))


@pytest.fixture
def glint(tmp_path):
    return save(tmp_path / "glint.png", glint_scene(1))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def parse_kv(text):
    return dict(line.split("\t") for line in text.strip().splitlines())


def test_score_flat(tmp_path, capsys):
    flat = save(tmp_path / "flat.png", np.full((16, 16, 3), 0.3))
    code, out, _ = run(capsys, "score", flat)
    assert code == 0
    assert parse_kv(out)["score"] == "0.0000"


def test_score_roi_equals_precropped(tmp_path, textured, capsys):
    roi = RoiRect(10, 20, 64, 64)
    pre = save(tmp_path / "pre.png", crop_roi(load_image(textured), roi))
    _, with_roi, _ = run(capsys, "score", textured, "--roi", "10,20,64,64")
    _, cropped, _ = run(capsys, "score", pre)
    assert with_roi == cropped


def test_score_no_highlight_mask(glint, capsys):
    _, masked, _ = run(capsys, "score", glint)
    _, bare, _ = run(capsys, "score", glint, "--no-highlight-mask")
    masked, bare = parse_kv(masked), parse_kv(bare)
    assert int(masked["mask_pixels"]) > 0 and bare["mask_pixels"] == "0"
    expected = ecgi_score(load_image(glint), suppress=False).score
    assert bare["score"] == f"{expected:.4f}"


def test_score_json(glint, capsys):
    code, out, _ = run(capsys, "score", glint, "--format", "json", "--lum-threshold", "0.7")
    doc = json.loads(out)
    assert code == 0 and doc["config"]["highlight_params"]["luminance_threshold"] == 0.7
    assert doc["mask_pixel_count"] > 0


def test_score_errors(tmp_path, capsys):
    code, _, err = run(capsys, "score", tmp_path / "nope.png")
    assert code == 1 and "nope.png" in err
    small = save(tmp_path / "small.png", np.zeros((8, 8, 3)))
    code, _, err = run(capsys, "score", small, "--roi", "6,6,4,4")
    assert code == 1 and "ROI" in err


@pytest.mark.parametrize("argv", [
    ["score"],
    ["score", "x.png", "--roi", "1,2"],
    ["score", "x.png", "--area-min", "50", "--area-max", "10"],
    ["compare"],
    ["compare", "--manifest", "m.csv", "--workers", "0"],
    ["bogus"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_histogram_constant(tmp_path, capsys):
    flat = save(tmp_path / "flat.png", np.full((10, 10, 3), 0.8))
    code, out, _ = run(capsys, "histogram", flat)
    rows = [line.split("\t") for line in out.splitlines()]
    assert code == 0 and len(rows) == 256
    assert float(rows[0][2]) == 1.0
    assert all(float(r[2]) == 0.0 for r in rows[1:])


def test_histogram_sharp_vs_blurred(tmp_path, capsys):
    img = random_texture(np.random.default_rng(11), 96)
    sharp = save(tmp_path / "s.png", img)
    blurred = save(tmp_path / "b.png", box_blur(img))
    counts = []
    for path in (sharp, blurred):
        out_file = tmp_path / (path.stem + ".tsv")
        assert run(capsys, "histogram", path, "--out", out_file)[0] == 0
        probs = [float(line.split("\t")[2]) for line in out_file.read_text().splitlines()]
        assert sum(probs) == pytest.approx(1.0, abs=1e-9)
        counts.append(sum(p > 0 for p in probs))
    assert counts[0] > counts[1]


def test_dumps(tmp_path, glint, capsys):
    dirs = {k: tmp_path / k for k in ("grad", "mask", "pmf")}
    code, _, _ = run(capsys, "score", glint, "--dump-gradient", dirs["grad"],
                     "--dump-mask", dirs["mask"], "--dump-pmf", dirs["pmf"])
    assert code == 0
    r = ecgi_score(load_image(glint))
    F = np.fromfile(dirs["grad"] / "glint_F.f32", dtype="<f4").reshape(r.gradient.shape)
    G = np.fromfile(dirs["grad"] / "glint_G.f32", dtype="<f4").reshape(r.gradient.shape)
    assert np.array_equal(F, r.gradient.astype(np.float32))
    assert np.array_equal(G, r.final.astype(np.float32))
    preview = cv2.imread(str(dirs["grad"] / "glint_F.png"), cv2.IMREAD_UNCHANGED)
    assert preview.dtype == np.uint8 and preview.shape == r.gradient.shape
    mask = cv2.imread(str(dirs["mask"] / "glint_mask.png"), cv2.IMREAD_UNCHANGED)
    assert set(np.unique(mask)) <= {0, 255}
    assert np.array_equal(mask == 255, r.mask)
    assert (dirs["mask"] / "glint_regions.csv").exists()
    assert len((dirs["pmf"] / "glint_pmf.tsv").read_text().splitlines()) == 256


def write_manifest(path, rows, header="pair_id,path_a,path_b"):
    path.write_text(header + "\n" + "".join(r + "\n" for r in rows))
    return path


def test_compare_identical_pairs(tmp_path, textured, capsys):
    m = write_manifest(tmp_path / "m.csv", [f"x,{textured.name},{textured.name}",
                                            f"y,{textured.name},{textured.name}"])
    code, out, err = run(capsys, "compare", "--manifest", m)
    doc = json.loads(out)
    assert code == 0
    assert all(p["delta"] == 0 for p in doc["pairs"])
    assert doc["summary"]["p"] == 1.0 and doc["summary"]["pct_a_greater"] == 0.0
    assert "n=2" in err


def test_compare_rois_and_csv(tmp_path, textured, capsys):
    header = ",".join(["pair_id", "path_a", "path_b", "roi_a_x", "roi_a_y", "roi_a_w", "roi_a_h",
                       "roi_b_x", "roi_b_y", "roi_b_w", "roi_b_h"])
    m = write_manifest(tmp_path / "m.csv", [f"a,tex.png,tex.png,0,0,40,40,5,5,40,40",
                                            f"b,tex.png,tex.png,,,,,10,10,50,50"], header)
    code, out, _ = run(capsys, "compare", "--manifest", m, "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "pair_id,s_a,s_b,delta" and len(lines) == 3
    img = load_image(textured)
    expected = ecgi_score(crop_roi(img, RoiRect(5, 5, 40, 40))).score
    assert lines[1].split(",")[2] == f"{expected:.4f}"


@pytest.mark.parametrize("rows, needle", [
    (["a,tex.png,tex.png", "b,tex.png"], "line 3"),
    (["a,tex.png,tex.png,0,0,10,10,0,0,12,12"], "same size"),
    (["a,tex.png,tex.png,0,0,10,,,,,"], "partially"),
    (["a,tex.png,tex.png", "a,tex.png,tex.png"], "duplicate"),
])
def test_compare_bad_manifest(tmp_path, textured, capsys, rows, needle):
    header = "pair_id,path_a,path_b,roi_a_x,roi_a_y,roi_a_w,roi_a_h,roi_b_x,roi_b_y,roi_b_w,roi_b_h"
    m = write_manifest(tmp_path / "m.csv", rows, header)
    code, _, err = run(capsys, "compare", "--manifest", m)
    assert code == 1 and needle in err


def test_compare_failed_image_names_pair(tmp_path, textured, capsys):
    m = write_manifest(tmp_path / "m.csv", ["good,tex.png,tex.png", "broken,tex.png,missing.png"])
    code, _, err = run(capsys, "compare", "--manifest", m)
    assert code == 1 and "'broken'" in err


def test_compare_env_workers(tmp_path, monkeypatch, capsys):
    manifest = write_blur_corpus(tmp_path / "corpus", 4, size=48)
    _, serial, _ = run(capsys, "compare", "--manifest", manifest, "--workers", "1")
    monkeypatch.setenv("ECGI_WORKERS", "3")
    _, pooled, _ = run(capsys, "compare", "--manifest", manifest)
    assert serial == pooled
    assert json.loads(serial)["summary"]["pct_a_greater"] == 100.0


def test_module_entry_point(tmp_path):
    flat = save(tmp_path / "flat.png", np.full((6, 6, 3), 0.5))
    done = subprocess.run([sys.executable, "-m", "ecgi", "score", str(flat)],
                          capture_output=True, text=True)
    assert done.returncode == 0 and "score\t0.0000" in done.stdout
    done = subprocess.run([sys.executable, "-m", "ecgi", "score"], capture_output=True, text=True)
    assert done.returncode == 2
