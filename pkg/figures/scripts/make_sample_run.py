"""Regenerate the shipped sample run (requires the guildnet package).

Writes a small deterministic synth + pipeline output into
figures/sample_run. Run from the figures/ directory:

    python scripts/make_sample_run.py
"""

import shutil
import sys
from pathlib import Path

from guildnet.cli import main

HERE = Path(__file__).resolve().parent.parent
TARGET = HERE / "sample_run"


def run() -> None:
    scratch = HERE / "_sample_synth"
    if main(["--seed", "23", "synth", "--out", str(scratch), "--years", "16",
             "--arrival-a", "3", "--arrival-b", "3", "--degree-min", "2",
             "--degree-max", "4", "--departure-prob", "0.06",
             "--incumbent-add-rate", "4", "--modules", "2", "--mixing", "0.06"]):
        sys.exit("synth failed")
    if TARGET.exists():
        shutil.rmtree(TARGET)
    if main(["--seed", "23", "pipeline", "--out", str(TARGET),
             "--input", str(scratch / "edges.csv"),
             "--ensemble", "16", "--n-null", "40", "--window", "5"]):
        sys.exit("pipeline failed")
    shutil.copy(scratch / "edges.csv", TARGET / "input_edges.csv")
    shutil.rmtree(scratch)
    print(f"sample run written to {TARGET}")


if __name__ == "__main__":
    run()
