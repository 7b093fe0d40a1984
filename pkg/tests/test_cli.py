import csv
import filecmp
import json
import subprocess
import sys
from pathlib import Path

import pytest

from guildnet.cli import main


def run_cli(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def synth_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("runs") / "synth"
    code = run_cli("--seed", 9, "synth", "--out", out, "--years", 12,
                   "--arrival-a", 8, "--arrival-b", 6, "--degree-min", 2,
                   "--degree-max", 3, "--departure-prob", 0.05,
                   "--incumbent-add-rate", 5, "--modules", 2, "--mixing", 0.05)
    assert code == 0
    return out


def test_synth_outputs(synth_run):
    assert (synth_run / "edges.csv").exists()
    assert (synth_run / "truth_events.jsonl").exists()
    manifest = json.loads((synth_run / "manifest.json").read_text())
    assert manifest["command"] == "synth"
    assert manifest["seed"] == 9
    assert "edges.csv" in manifest["outputs"]


def test_describe_on_fixture(tmp_path):
    src = tmp_path / "toy.csv"
    src.write_text(
        "groupid,stateid,styear,endyear,active_types,passive_types\n"
        "g1,s1,2000,2001,5,\n"
        "g2,s1,2000,2000,,7\n"
    )
    out = tmp_path / "describe"
    assert run_cli("describe", "--out", out, "--input", src) == 0
    rows = list(csv.DictReader(open(out / "yearly.csv")))
    assert rows[0]["year"] == "2000"
    assert rows[0]["n_nag"] == "2" and rows[0]["n_hs"] == "1"
    assert rows[0]["n_links"] == "2"
    assert rows[1]["n_links"] == "1"


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_missing_input_exits_1(tmp_path):
    assert run_cli("describe", "--out", tmp_path / "x", "--input", tmp_path / "nope.csv") == 1


def test_pipeline_deterministic_and_complete(synth_run, tmp_path):
    args = ["--seed", 4, "pipeline", "--input", synth_run / "edges.csv",
            "--ensemble", 6, "--n-null", 10, "--window", 3]
    out1, out2 = tmp_path / "p1", tmp_path / "p2"
    assert run_cli(*args, "--out", out1) == 0
    assert run_cli(*args, "--out", out2) == 0
    names1 = sorted(p.name for p in out1.iterdir())
    assert names1 == sorted(p.name for p in out2.iterdir())
    for name in names1:
        if name == "manifest.json":
            continue
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name
    expected = {
        "yearly.csv", "nestedness.csv", "partition.csv", "yearly_q.csv",
        "module_yearly.csv", "roles.csv", "fluctuation.csv",
        "nestedness_vs_modularity.csv", "manifest.json",
    }
    assert expected <= set(names1)
    manifest = json.loads((out1 / "manifest.json").read_text())
    assert len(manifest["inputs"]) == 1
    # every numeric cell parses as float or is the nan sentinel
    for name in names1:
        if not name.endswith(".csv"):
            continue
        for row in csv.reader(open(out1 / name)):
            for cell in row:
                assert cell != ""


def test_modularity_with_nulls(synth_run, tmp_path):
    out = tmp_path / "mod"
    assert run_cli("--seed", 2, "modularity", "--out", out, "--input",
                   synth_run / "edges.csv", "--null", "both", "--n-null", 2) == 0
    rows = list(csv.DictReader(open(out / "null_q.csv")))
    assert {r["model"] for r in rows} == {"permute", "degree"}


def test_modules_and_roles_from_partition(synth_run, tmp_path):
    mod_out = tmp_path / "consensus"
    assert run_cli("--seed", 2, "consensus", "--out", mod_out, "--input",
                   synth_run / "edges.csv", "--ensemble", 6) == 0
    roles_out = tmp_path / "roles"
    assert run_cli("roles", "--out", roles_out, "--input", synth_run / "edges.csv",
                   "--partition", mod_out / "partition.csv") == 0
    rows = list(csv.DictReader(open(roles_out / "roles.csv")))
    assert {r["subnetwork"] for r in rows} == {"full", "active", "passive"}
    mods_out = tmp_path / "modules"
    assert run_cli("modules", "--out", mods_out, "--input", synth_run / "edges.csv",
                   "--partition", mod_out / "partition.csv") == 0
    summary = json.loads((mods_out / "modules_summary.json").read_text())
    assert set(summary["major"]) | set(summary["transitory"]) == {
        int(k) for k in summary["modules"]
    }


def test_correlate_from_files(synth_run, tmp_path):
    nest_out = tmp_path / "nest"
    assert run_cli("--seed", 3, "nestedness", "--out", nest_out, "--input",
                   synth_run / "edges.csv", "--n-null", 10, "--window", 3) == 0
    mod_out = tmp_path / "mod2"
    assert run_cli("--seed", 3, "modularity", "--out", mod_out, "--input",
                   synth_run / "edges.csv") == 0
    corr_out = tmp_path / "corr"
    assert run_cli("correlate", "--out", corr_out,
                   "--nestedness", nest_out / "nestedness.csv",
                   "--yearly-q", mod_out / "yearly_q.csv") == 0
    summary = json.loads((corr_out / "correlate_summary.json").read_text())
    assert summary["n_years"] > 0


def test_config_file_defaults(tmp_path, synth_run):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[analysis]\nwindow = 3\nn_null = 8\n")
    out = tmp_path / "nest_cfg"
    assert run_cli("--seed", 1, "--config", cfg, "nestedness", "--out", out,
                   "--input", synth_run / "edges.csv") == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["window"] == 3
    assert manifest["config"]["n_null"] == 8


def test_console_entry_point(synth_run, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "guildnet.cli", "describe",
         "--out", str(tmp_path / "d"), "--input", str(synth_run / "edges.csv")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
