import re

import pytest

from lutflow import cli, emit_blif, loads
from lutflow.dump import COUNTER_MAX
from util import ripple_counter, skew_circuit, skew_stimulus

CHAIN_BLIF = """.model chain
.inputs a b c d
.outputs y
.names a b g1
11 1
.names g1 c g2
11 1
.names g2 d y
11 1
.end
"""

SMALL_AAG = "aag 3 2 0 1 1\n2\n4\n6\n6 2 4\ni0 a\ni1 b\no0 y\n"


@pytest.fixture
def chain_file(tmp_path):
    path = tmp_path / "chain.blif"
    path.write_text(CHAIN_BLIF)
    return path


def _read(path):
    return path.read_bytes()


def test_simulate_writes_deterministic_dump(tmp_path, chain_file, capsys):
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    for out in (out1, out2):
        rc = cli.main(
            ["simulate", "--blif", str(chain_file), "--cycles", "64", "--seed", "9",
             "--out", str(out)]
        )
        assert rc == 0
    assert _read(out1 / "activity.dump") == _read(out2 / "activity.dump")
    dump = loads(_read(out1 / "activity.dump"))
    assert dump.design == "chain"
    assert dump.cycles == 64
    assert "tracked signals" in capsys.readouterr().out


def test_simulate_track_filter(tmp_path, chain_file):
    out = tmp_path / "o"
    rc = cli.main(
        ["simulate", "--blif", str(chain_file), "--cycles", "16", "--track", "g*",
         "--out", str(out)]
    )
    assert rc == 0
    dump = loads(_read(out / "activity.dump"))
    assert set(e.name for e in dump.entries) == {"g1", "g2"}


def test_missing_input_exits_3(tmp_path, capsys):
    rc = cli.main(["simulate", "--blif", str(tmp_path / "nope.blif"), "--out", str(tmp_path / "o")])
    assert rc == 3
    assert not (tmp_path / "o").exists()  # no partial output
    assert "error" in capsys.readouterr().err


def test_parse_error_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.aag"
    bad.write_text("aag 1 1 0 1 0\n2\n9\n")
    rc = cli.main(["simulate", "--aiger", str(bad), "--out", str(tmp_path / "o")])
    assert rc == 1
    assert "line 3" in capsys.readouterr().err


def test_stimulus_error_exits_2(tmp_path, chain_file, capsys):
    stim = tmp_path / "stim.txt"
    stim.write_text("a b c d\n0b1 0b1 0b1 0b1\n")
    rc = cli.main(
        ["simulate", "--blif", str(chain_file), "--cycles", "10",
         "--stimulus", str(stim), "--out", str(tmp_path / "o")]
    )
    assert rc == 2
    assert "cycles" in capsys.readouterr().err


def test_invalid_config_consolidated(tmp_path, chain_file, capsys):
    rc = cli.main(
        ["compare", "--blif", str(chain_file), "--cycles", "0", "--k", "11",
         "--hot-percentile", "120", "--out", str(tmp_path / "o")]
    )
    assert rc == 2
    err = capsys.readouterr().err
    assert "--cycles" in err and "--k" in err and "--hot-percentile" in err


def test_map_vanilla_ignores_dump_values(tmp_path, chain_file):
    out = tmp_path / "o"
    rc = cli.main(
        ["simulate", "--blif", str(chain_file), "--cycles", "32", "--out", str(out)]
    )
    assert rc == 0
    rc = cli.main(
        ["map", "--blif", str(chain_file), "--dump", str(out / "activity.dump"),
         "--mode", "vanilla", "--out", str(out)]
    )
    assert rc == 0
    blif1 = _read(out / "vanilla.blif")

    # a radically different dump must not change vanilla output
    fake = tmp_path / "fake.dump"
    fake.write_bytes(b"simopt-dump v1\ndesign chain\ncycles 9\nnet y 9 0\n")
    out2 = tmp_path / "o2"
    rc = cli.main(
        ["map", "--blif", str(chain_file), "--dump", str(fake),
         "--mode", "vanilla", "--out", str(out2)]
    )
    assert rc == 0
    assert _read(out2 / "vanilla.blif") == blif1


def test_map_corrupted_dump_exits_4(tmp_path, chain_file, capsys):
    bad = tmp_path / "bad.dump"
    bad.write_bytes(b"simopt-dump v1\ndesign chain\ncycles 4\nnet y oops 0\n")
    rc = cli.main(
        ["map", "--blif", str(chain_file), "--dump", str(bad), "--out", str(tmp_path / "o")]
    )
    assert rc == 4
    assert "line 4" in capsys.readouterr().err


def test_compare_all_sentinel_scores_zero_deltas(tmp_path, chain_file):
    # a filter matching nothing yields an empty dump: every net scores the
    # sentinel and the weighted mapping degenerates to vanilla
    out = tmp_path / "o"
    with pytest.warns(RuntimeWarning):
        rc = cli.main(
            ["compare", "--blif", str(chain_file), "--cycles", "32", "--track", "zzz*",
             "--out", str(out)]
        )
    assert rc == 0
    assert _read(out / "vanilla.blif") == _read(out / "simopt.blif")
    report = _read(out / "report.txt").decode()
    for line in report.splitlines():
        if line.startswith("delta "):
            assert line.endswith(" 0.000000")


def test_compare_skew_circuit_nonzero_delta(tmp_path):
    netlist_path = tmp_path / "skew.blif"
    netlist_path.write_bytes(emit_blif(skew_circuit()))
    stim = tmp_path / "skew.stim"
    stim.write_text(skew_stimulus(64))
    out = tmp_path / "o"
    rc = cli.main(
        ["compare", "--blif", str(netlist_path), "--cycles", "64",
         "--stimulus", str(stim), "--out", str(out)]
    )
    assert rc == 0
    report = _read(out / "report.txt").decode()
    match = re.search(r"delta hot_depth (\S+)", report)
    assert match and float(match.group(1)) != 0.0
    assert _read(out / "vanilla.blif") != _read(out / "simopt.blif")
    assert "equivalence vanilla pass" in report
    assert "equivalence simopt pass" in report


def test_compare_deterministic_across_reruns(tmp_path, chain_file):
    blobs = []
    for i in range(3):
        out = tmp_path / f"run{i}"
        rc = cli.main(
            ["compare", "--blif", str(chain_file), "--cycles", "48", "--seed", "5",
             "--out", str(out)]
        )
        assert rc == 0
        blobs.append(
            (
                _read(out / "activity.dump"),
                _read(out / "vanilla.blif"),
                _read(out / "simopt.blif"),
                _read(out / "report.txt"),
            )
        )
    assert blobs[0] == blobs[1] == blobs[2]


def test_compare_equivalence_failure_exits_5(tmp_path, chain_file, monkeypatch, capsys):
    from lutflow.equiv import EquivResult

    monkeypatch.setattr(
        cli, "functionally_equivalent",
        lambda a, b, **kw: EquivResult(False, 1, False, counterexample=3),
    )
    rc = cli.main(
        ["compare", "--blif", str(chain_file), "--cycles", "8", "--out", str(tmp_path / "o")]
    )
    assert rc == 5
    assert not (tmp_path / "o" / "report.txt").exists()
    assert "not equivalent" in capsys.readouterr().err


def test_bench_empty_directory(tmp_path):
    circuits = tmp_path / "circuits"
    circuits.mkdir()
    out = tmp_path / "o"
    rc = cli.main(["bench", str(circuits), "--cycles", "16", "--out", str(out)])
    assert rc == 0
    report = _read(out / "bench_report.txt").decode()
    assert "circuits 0" in report


def test_bench_mixed_directory(tmp_path):
    circuits = tmp_path / "circuits"
    circuits.mkdir()
    (circuits / "tiny.aag").write_text(SMALL_AAG)
    (circuits / "counter.blif").write_bytes(emit_blif(ripple_counter(3)))
    (circuits / "broken.blif").write_text(".model broken\n.nonsense\n.end\n")
    out = tmp_path / "o"
    rc = cli.main(["bench", str(circuits), "--cycles", "32", "--out", str(out)])
    assert rc == 0
    report = _read(out / "bench_report.txt").decode()
    assert "circuits 3" in report
    assert re.search(r"circuit broken status error \w+", report)
    assert "circuit tiny status ok" in report
    assert "circuit counter status ok" in report
    assert (out / "tiny" / "report.txt").exists()
    assert not (out / "broken").exists()


def test_module_entry_point(tmp_path, chain_file):
    import subprocess
    import sys

    out = tmp_path / "o"
    proc = subprocess.run(
        [sys.executable, "-m", "lutflow", "simulate", "--blif", str(chain_file),
         "--cycles", "8", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert (out / "activity.dump").exists()
