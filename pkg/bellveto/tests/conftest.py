import os

import pytest

from bellveto.models.config import set_config


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    """Each test sees defaults only: no QAV_* variables and no .env in the working dir."""
    for key in list(os.environ):
        if key.startswith("QAV_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    set_config(None)
    yield
    set_config(None)
