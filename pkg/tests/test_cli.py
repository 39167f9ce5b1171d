"""End-to-end CLI behavior: output, golden checks, exit codes."""

import pytest

import slicerank as sr
from slicerank.cli import main


@pytest.fixture
def cw5_files(tmp_path):
    t = sr.make_cw(5)
    tensor = tmp_path / "cw5.tensor"
    tensor.write_text(sr.write_tensor(t))
    part = tmp_path / "cw.partition"
    part.write_text(sr.write_partition(sr.cw_partition(5)))
    return str(tensor), str(part)


def test_table_cw(capsys):
    assert main(["table", "cw", "--qmax", "8"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 8
    assert all("PASS" in line for line in out)
    assert "7.70581" in out[-1] and "2.25525" in out[-1]


def test_table_cw_small(capsys):
    assert main(["table", "cw-small", "--qmax", "2"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert "2.00000" in out[1]


def test_table_tq_lower(capsys):
    assert main(["table", "tq-lower", "--qmax", "2"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1
    assert "1.88988" in out[0] and "2.17795" in out[0]


def test_table_beyond_golden_rows(capsys):
    assert main(["table", "tq-lower", "--qmax", "6"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[-1].split()[-1] == "--"


def test_table_golden_mismatch_exit(capsys):
    assert main(["table", "cw", "--qmax", "2", "--tol", "1e-12"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_table_tsv_format(capsys):
    assert main(["table", "cw", "--qmax", "1", "--format", "tsv"]) == 0
    out = capsys.readouterr().out.strip()
    assert "\t" in out


def test_table_deterministic(capsys):
    main(["table", "cw", "--qmax", "4"])
    first = capsys.readouterr().out
    main(["table", "cw", "--qmax", "4"])
    second = capsys.readouterr().out
    assert first == second


def test_t112_command(capsys):
    assert main(["t112", "2"]) == 0
    out = capsys.readouterr().out
    assert "V_2/3 = 4.578857" in out and "PASS" in out


def test_appendix(capsys):
    assert main(["appendix", "--qmax", "1000"]) == 0
    out = capsys.readouterr().out
    assert ">= 2.16805 PASS" in out
    assert "v_8" in out and "f_v8" in out


def test_bound_laser(capsys, cw5_files):
    tensor, part = cw5_files
    assert main(["bound", "--mode", "laser", tensor, part]) == 0
    out = capsys.readouterr().out.strip()
    assert out == "S~ = Q~ = 5.77629 (tight)"


def test_bound_partition_mode(capsys, cw5_files):
    tensor, part = cw5_files
    assert main(["bound", "--mode", "partition", tensor, part]) == 0
    out = capsys.readouterr().out
    assert out.startswith("slice_rank_upper 5.776285")


def test_bound_mu_sum_mode(capsys, cw5_files):
    tensor, part = cw5_files
    assert main(["bound", "--mode", "mu-sum", tensor, part]) == 0
    assert capsys.readouterr().out.startswith("slice_rank_upper")


def test_bound_remove_x_mode(capsys, cw5_files):
    tensor, part = cw5_files
    assert main(["bound", "--mode", "remove-x", tensor, part]) == 0
    out = capsys.readouterr().out
    assert "low-x-rank-split" in out


def test_bound_laser_inapplicable(capsys, tmp_path):
    t = sr.make_t112(2)
    tensor = tmp_path / "t.tensor"
    tensor.write_text(sr.write_tensor(t))
    part = tmp_path / "t.partition"
    part.write_text(sr.write_partition(sr.t112_partition(2)))
    assert main(["bound", "--mode", "laser", str(tensor), str(part)]) == 4
    assert "not laser-ready" in capsys.readouterr().err


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.tensor"
    bad.write_text("xvars 1\nyvars 1\nzvars 1\n0 0 0 1/0\n")
    part = tmp_path / "p.partition"
    part.write_text("x all 0\ny all 0\nz all 0\n")
    assert main(["bound", "--mode", "partition", str(bad), str(part)]) == 3
    err = capsys.readouterr().err
    assert "line 4" in err


def test_verify_degeneration_ok(capsys, tmp_path):
    t = sr.make_cw(2)
    bs = sr.blocks(t, sr.cw_partition(2))
    key = (0, 1, 1)
    src = tmp_path / "t.tensor"
    src.write_text(sr.write_tensor(t))
    dst = tmp_path / "block.tensor"
    dst.write_text(sr.write_tensor(bs[key]))
    mp = tmp_path / "zeroing.map"
    mp.write_text(sr.write_degeneration_map(sr.zeroing_to_block(bs, key)))
    assert main(["verify-degeneration", str(src), str(dst), str(mp)]) == 0
    assert capsys.readouterr().out.strip() == "OK order h=0"


def test_verify_degeneration_failure(capsys, tmp_path):
    t = sr.make_cw(1)
    src = tmp_path / "t.tensor"
    src.write_text(sr.write_tensor(t))
    dst = tmp_path / "one.tensor"
    dst.write_text(sr.write_tensor(sr.make_independent(1)))
    mp = tmp_path / "empty.map"
    mp.write_text("order 0\n")
    assert main(["verify-degeneration", str(src), str(dst), str(mp)]) == 1
    assert "FAIL" in capsys.readouterr().out
