import json

import pytest

from ntlab.cli import SUITE_NAMES, SWEEP_NAMES, main
from ntlab.records import SCHEMA_HEADER


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_triroute_suite_passes(capsys):
    code, out, err = run(capsys, "verify", "--suite", "s4-triroute",
                         "--pmin", "7", "--pmax", "13")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == SCHEMA_HEADER
    assert any(",s4-triroute,-315,-315,true," in ln for ln in lines)
    assert any(",s4-triroute,-793,-793,true," in ln for ln in lines)
    assert "0 mismatches" in err


def test_moments_suite_reports_constant_gap(capsys):
    code, out, err = run(capsys, "verify", "--suite", "moments",
                         "--pmin", "7", "--pmax", "11")
    assert code == 1   # the as-recorded fourth-moment constant never matches
    assert "7,S4-closed-printed,517,538,false" in out
    assert "7,S4-closed-corrected,517,517,true" in out


def test_verify_output_is_deterministic(capsys):
    argv = ("verify", "--suite", "gk,curves", "--pmin", "7", "--pmax", "19",
            "--K", "3")
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2
    assert all(ln.endswith(",0.000") for ln in out1.splitlines()[2:])


def test_timings_flag_breaks_zeroing(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "prop6.6", "--pmin", "31",
                    "--pmax", "31", "--timings")
    rows = out.splitlines()[2:]
    assert rows and any(not ln.endswith(",0.000") for ln in rows)


def test_json_output_mirrors_csv_fields(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "cp-chain", "--pmin", "7",
                       "--pmax", "11", "--out", "json")
    assert code == 0
    rows = json.loads(out)
    assert {r["name"] for r in rows} >= {"ap-second-moment", "cp-count"}
    assert all(set(r) >= {"p", "name", "lhs", "rhs", "match", "ratio",
                          "elapsed_ms", "detail"} for r in rows)


def test_file_flag_writes_report(tmp_path, capsys):
    target = tmp_path / "report.csv"
    code, out, _ = run(capsys, "verify", "--suite", "counting", "--pmin", "13",
                       "--pmax", "17", "--file", str(target))
    assert code == 0
    assert target.read_text() == out


def test_config_file_defaults_and_flag_override(tmp_path, capsys):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("# defaults\npmin = 7\npmax = 13\nsuites = moments,curves\n")
    code, out, _ = run(capsys, "verify", "--config", str(cfgfile))
    names = {ln.split(",")[1] for ln in out.splitlines()[2:]}
    assert "S1-closed" in names and "twist-relations" in names
    code, out, _ = run(capsys, "verify", "--config", str(cfgfile),
                       "--suite", "eichler", "--nmax", "19")
    names = {ln.split(",")[1] for ln in out.splitlines()[2:]}
    assert names == {"eichler"}


def test_config_rejects_unknown_keys(tmp_path, capsys):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("frobnicate = 3\n")
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "eichler", "--config", str(cfgfile)])


def test_small_pmin_rejected():
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "moments", "--pmin", "5", "--pmax", "7"])


def test_unknown_suite_rejected():
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "nonsense", "--pmin", "7", "--pmax", "11"])


def test_all_suites_registered():
    assert len(SUITE_NAMES) == 13
    assert set(SWEEP_NAMES) >= {"thm1.1", "prop4.6", "thm6.2", "thm6.3",
                                "angles"}


def test_sweep_claim(capsys):
    code, out, err = run(capsys, "sweep", "--claim", "prop4.6", "--pmin", "13",
                         "--pmax", "101")
    assert code == 0
    assert "max normalized ratio" in err
    assert all(int(ln.split(",")[0]) % 4 == 1 for ln in out.splitlines()[2:])


def test_sweep_threshold_can_fail(capsys):
    code, out, err = run(capsys, "sweep", "--claim", "thm1.1", "--pmin", "7",
                         "--pmax", "31", "--threshold", "0.001")
    assert code == 1
    assert "false" in out


def test_sweep_angles_histogram(capsys):
    code, out, err = run(capsys, "sweep", "--claim", "angles", "--p", "389",
                         "--bins", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "bin_lo,bin_hi,count,expected"
    counts = [int(ln.split(",")[2]) for ln in lines[2:]]
    assert sum(counts) == 388
    assert "chi^2" in err


def test_trend_sweep(capsys):
    code, out, err = run(capsys, "sweep", "--claim", "thm6.3", "--pmin", "7",
                         "--pmax", "53")
    assert code == 0
    assert "falls from first to last prime: True" in err


def test_cache_build_inspect_idempotent(tmp_path, capsys):
    cache = tmp_path / "c"
    code, _, _ = run(capsys, "cache", "build", "--bound", "120",
                     "--ap", "11", "--cache", str(cache))
    assert code == 0
    first = (cache / "hurwitz.csv").read_bytes()
    ap = (cache / "ap_11.csv").read_text().splitlines()
    assert ap[0] == SCHEMA_HEADER and ap[1] == "lambda,ap"
    assert len(ap) == 2 + 9   # lambda = 2..10
    code, _, _ = run(capsys, "cache", "build", "--bound", "120",
                     "--cache", str(cache))
    assert (cache / "hurwitz.csv").read_bytes() == first
    code, out, _ = run(capsys, "cache", "inspect", "--cache", str(cache))
    assert code == 0
    assert "D <= 120" in out and "ap_11.csv" in out


def test_cache_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NTLAB_CACHE", str(tmp_path / "envcache"))
    code, out, _ = run(capsys, "cache", "build", "--bound", "60")
    assert code == 0
    assert (tmp_path / "envcache" / "hurwitz.csv").exists()


def test_gfun_eval(capsys):
    code, out, _ = run(capsys, "gfun", "--p", "7", "--family", "3g3",
                       "--lambda", "3", "--K", "6")
    assert code == 0
    assert "valuation=-2" in out and "unit=85926" in out
    code, out, _ = run(capsys, "gfun", "--p", "7", "--family", "3g3",
                       "--lambda", "7")
    assert code == 0
    assert "value=0" in out


def test_gfun_rejects_composite():
    with pytest.raises(SystemExit):
        main(["gfun", "--p", "9", "--family", "3g3", "--lambda", "2"])
