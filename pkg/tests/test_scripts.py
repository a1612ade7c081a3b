"""Experiment scripts run end to end on small configurations."""

import runpy
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


@pytest.mark.parametrize("name, args", [
    ("latency_laws.py", ["--max-width", "2"]),
    ("throughput.py", ["--width", "4", "--vectors", "50"]),
    ("orphan_demo.py", ["--rounds", "1"]),
    ("carry_chains.py", ["--width", "8", "--samples", "2000"]),
    ("timing_report.py", []),
])
def test_script_runs(name, args, monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", [name] + args)
    runpy.run_path(str(SCRIPTS / name), run_name="__main__")
    assert capsys.readouterr().out.strip()
