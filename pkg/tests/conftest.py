import io

import pytest
from rich.console import Console

from naraforge.stages.settings_stage import RunConfig
from naraforge.tools import run_logger
from naraforge.tools.narayana_seq import SequenceCache


@pytest.fixture
def cache():
    return SequenceCache(max_index=5000)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    path = tmp_path / "output"
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("NARAFORGE_OUTPUT_DIR", str(path))
    yield path
    run_logger.set_output_dir(None)


@pytest.fixture
def console():
    return Console(file=io.StringIO(), width=120, color_system=None)


@pytest.fixture
def run_config(output_dir):
    return RunConfig(output_dir=str(output_dir))
