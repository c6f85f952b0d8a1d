import subprocess
import sys

import numpy as np
import pytest

from polarkit.cli import main
from polarkit.core import CodeSpec
from polarkit.harness import (
    SimConfig,
    SimPoint,
    assemble_config,
    build_code,
    config_to_raw,
    parse_config_file,
    presets,
    run_point,
    run_sweep,
)


def small_config(**overrides):
    base = dict(
        spec=CodeSpec(n=4, M=12, K=6, design_snr_db=1.0),
        ebno_grid_db=(1.0, 3.0),
        construction="nupga",
        shortening="last",
        decoder="sc",
        min_frame_errors=8,
        max_frames=2000,
        master_seed=77,
    )
    base.update(overrides)
    return SimConfig(**base)


# ------------------------------------------------------------- validation

def test_config_rejects_empty_grid():
    with pytest.raises(ValueError):
        small_config(ebno_grid_db=())


def test_config_rejects_unshortened_partial_block():
    with pytest.raises(ValueError):
        small_config(shortening="none")


def test_config_rejects_unknown_choices():
    with pytest.raises(ValueError):
        small_config(construction="genie")
    with pytest.raises(ValueError):
        small_config(decoder="viterbi")
    with pytest.raises(ValueError):
        small_config(even_rule="median")


def test_config_rejects_crc_mismatches():
    with pytest.raises(ValueError):
        small_config(decoder="cascl", list_size=4)  # no crc name
    with pytest.raises(ValueError):
        small_config(decoder="cascl", list_size=4, crc_name="crc8")  # spec has no crc bits
    with pytest.raises(ValueError):
        small_config(crc_name="crc8")  # crc without cascl
    with pytest.raises(ValueError):
        small_config(decoder="sc", list_size=4)


def test_config_rejects_bad_stop_rule():
    with pytest.raises(ValueError):
        small_config(min_frame_errors=0)
    with pytest.raises(ValueError):
        small_config(max_frames=0)


def test_sim_point_validation():
    with pytest.raises(ValueError):
        SimPoint(1.0, 0, 0, 0, 0.0, 0.0, 0.0, 0, 1000)
    with pytest.raises(ValueError):
        SimPoint(1.0, 5, 0, 9, 0.0, 1.8, 0.0, 0, 1000)


# ------------------------------------------------------------ simulation

def test_run_point_deterministic():
    cfg = small_config()
    a = run_point(cfg, 1.0)
    b = run_point(cfg, 1.0)
    assert (a.frames, a.bit_errors, a.frame_errors, a.ber, a.fer) == \
           (b.frames, b.bit_errors, b.frame_errors, b.ber, b.fer)
    assert a.point_key == 1000
    assert a.frame_errors == cfg.min_frame_errors  # stop rule hit exactly


def test_run_point_worker_count_invariant():
    cfg = small_config()
    a = run_point(cfg, 1.0, workers=1)
    b = run_point(cfg, 1.0, workers=2)
    assert (a.frames, a.bit_errors, a.frame_errors) == (b.frames, b.bit_errors, b.frame_errors)


def test_lower_error_target_stops_no_later():
    a = run_point(small_config(min_frame_errors=4), 1.0)
    b = run_point(small_config(min_frame_errors=8), 1.0)
    assert a.frames <= b.frames
    assert a.frame_errors == 4 and b.frame_errors == 8


def test_noiseless_run_is_error_free():
    cfg = small_config(noiseless=True, max_frames=60, min_frame_errors=1)
    pt = run_point(cfg, 1.0)
    assert pt.frames == 60
    assert pt.bit_errors == 0 and pt.frame_errors == 0
    assert pt.fer == 0.0 and pt.ber == 0.0


def test_run_sweep_csv_shape(tmp_path):
    cfg = small_config()
    out = tmp_path / "sweep.csv"
    points, text = run_sweep(cfg, out=out)
    assert out.read_text(encoding="utf-8") == text
    lines = text.strip().split("\n")
    meta = [l for l in lines if l.startswith("#")]
    keys = [l[2:].split("=")[0] for l in meta]
    assert keys == sorted(keys)
    assert "ebno_db,frames,bit_errors,frame_errors,ber,fer" in lines
    data = lines[len(meta) + 1:]
    assert len(data) == len(points) == 2
    for row, pt in zip(data, points):
        f = row.split(",")
        assert float(f[0]) == pt.ebno_db
        assert int(f[1]) == pt.frames
        assert float(f[4]) == pt.ber  # repr round-trip, byte-stable
        assert float(f[5]) == pt.fer
    # no volatile fields leak into the metadata
    assert not any(k in ("workers", "threads", "elapsed") for k in keys)


def test_run_sweep_worker_bytes_identical():
    cfg = small_config()
    _, a = run_sweep(cfg, workers=1)
    _, b = run_sweep(cfg, workers=2)
    assert a == b


def test_run_sweep_unwritable_path_fails_fast():
    with pytest.raises(OSError):
        run_sweep(small_config(), out="/nonexistent-dir/sweep.csv")


def test_crc_pipeline_runs():
    cfg = small_config(
        spec=CodeSpec(n=4, M=12, K=4, design_snr_db=1.0, crc_bits=8),
        decoder="cascl", list_size=4, crc_name="crc8",
        ebno_grid_db=(2.0,), min_frame_errors=4, max_frames=1500,
    )
    pt = run_point(cfg, 2.0)
    assert pt.frames >= 1


# --------------------------------------------------------------- presets

def test_presets_inventory():
    table = presets()
    assert sorted(table) == ["fig6", "fig6-desk", "fig7", "fig7-desk", "fig8", "fig8-desk"]
    for cfg in table.values():
        pattern, reliab, mask = build_code(cfg)
        assert mask.info_count == cfg.spec.info_bits_total
        assert pattern.transmitted_count == cfg.spec.M


def test_preset_raw_roundtrip():
    for name, cfg in presets().items():
        assert assemble_config(config_to_raw(cfg)) == cfg


# ------------------------------------------------------------ config file

def test_parse_config_file(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("n=4\nm = 12 # trailing comment\nk=6\nebno_grid_db=1,2\n",
                 encoding="utf-8")
    raw = parse_config_file(p)
    assert raw == {"n": "4", "m": "12", "k": "6", "ebno_grid_db": "1,2"}


def test_parse_config_rejects_unknown_and_duplicate_keys(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("mystery=1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="unknown key"):
        parse_config_file(p)
    p.write_text("n=4\nn=5\n", encoding="utf-8")
    with pytest.raises(ValueError, match="duplicate"):
        parse_config_file(p)
    p.write_text("just a line\n", encoding="utf-8")
    with pytest.raises(ValueError, match="key=value"):
        parse_config_file(p)


def test_assemble_config_defaults():
    cfg = assemble_config({"n": "4", "m": "12", "k": "6", "ebno_grid_db": "2.0,1.5"})
    assert cfg.spec.design_snr_db == 1.5  # lowest grid point
    assert cfg.shortening == "last"       # implied by M < N
    assert cfg.decoder == "sc"
    full = assemble_config({"n": "4", "m": "16", "k": "6", "ebno_grid_db": "1"})
    assert full.shortening == "none"


def test_assemble_config_error_messages():
    with pytest.raises(ValueError, match="missing required"):
        assemble_config({"n": "4", "m": "12", "k": "6"})
    with pytest.raises(ValueError, match="integer"):
        assemble_config({"n": "x", "m": "12", "k": "6", "ebno_grid_db": "1"})
    with pytest.raises(ValueError, match="crc"):
        assemble_config({"n": "4", "m": "12", "k": "6", "ebno_grid_db": "1",
                         "crc": "crc99"})
    with pytest.raises(ValueError, match="boolean"):
        assemble_config({"n": "4", "m": "12", "k": "6", "ebno_grid_db": "1",
                         "noiseless": "maybe"})


# ------------------------------------------------------------------- CLI

def run_config_text():
    return ("n=4\nm=12\nk=6\nebno_grid_db=1.0,2.0\nconstruction=nupga\n"
            "shortening=last\nmin_frame_errors=4\nmax_frames=1000\nmaster_seed=3\n")


def test_cli_presets_exits_zero(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    assert "fig6" in out and "fig8-desk" in out


def test_cli_run_writes_csv(tmp_path, capsys):
    cfgfile = tmp_path / "cfg.txt"
    cfgfile.write_text(run_config_text(), encoding="utf-8")
    out = tmp_path / "run.csv"
    assert main(["run", "--config", str(cfgfile), "--out", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert text.startswith("#")
    assert "ebno_db,frames" in text
    capsys.readouterr()


def test_cli_flag_overrides_config(tmp_path, capsys):
    cfgfile = tmp_path / "cfg.txt"
    cfgfile.write_text(run_config_text(), encoding="utf-8")
    assert main(["run", "--config", str(cfgfile), "--seed", "99"]) == 0
    out = capsys.readouterr().out
    assert "# master_seed=99" in out


def test_cli_preset_with_overrides_runs(capsys):
    assert main(["run", "--preset", "fig6-desk", "--ebno-grid", "2.0",
                 "--min-frame-errors", "3", "--max-frames", "400"]) == 0
    out = capsys.readouterr().out
    assert "# construction=nupga" in out


def test_cli_construct_emits_reliability_table(capsys):
    assert main(["construct", "--preset", "fig6-desk"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().split("\n")
    assert lines[0] == "index,reliability,class"
    assert len(lines) == 65
    assert lines[-1].endswith("FROZEN_SHORTENED")


def test_cli_error_paths(tmp_path, capsys):
    assert main(["run", "--preset", "missing"]) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("bogus=1\n", encoding="utf-8")
    assert main(["run", "--config", str(bad)]) == 1
    cfgfile = tmp_path / "cfg.txt"
    cfgfile.write_text(run_config_text(), encoding="utf-8")
    assert main(["run", "--config", str(cfgfile),
                 "--out", "/nonexistent-dir/x.csv"]) == 1
    capsys.readouterr()


def test_cli_module_entrypoint():
    proc = subprocess.run([sys.executable, "-m", "polarkit.cli", "presets"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "fig7-desk" in proc.stdout
