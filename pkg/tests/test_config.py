import json

import pytest

from src.core.config import Config


def test_defaults_written_on_first_use(tmp_path):
    cfg = Config(tmp_path)
    assert (tmp_path / "config.json").exists()
    assert cfg.get("tolerances.sigma") == 1e-9
    assert cfg.get("series.window") == 40
    assert cfg.get("markov.n_list") == [3, 5, 8, 12]


def test_dot_notation(tmp_path):
    cfg = Config(tmp_path)
    cfg.set("series.tol", 1e-10)
    cfg.set("extra.nested.value", 3)
    assert cfg.get("series.tol") == 1e-10
    assert cfg.get("extra.nested.value") == 3
    assert cfg.get("missing.key", "fallback") == "fallback"
    assert Config(tmp_path).get("series.tol") == 1e-10


def test_stored_values_overlay_new_defaults(tmp_path):
    (tmp_path / "config.json").write_text(json.dumps({"series": {"tol": 1e-8}}), encoding="utf-8")
    cfg = Config(tmp_path)
    assert cfg.get("series.tol") == 1e-8
    assert cfg.get("series.n_max") == 200


def test_corrupt_file_is_replaced(tmp_path):
    (tmp_path / "config.json").write_text("{not json", encoding="utf-8")
    cfg = Config(tmp_path)
    assert cfg.get("tolerances.cluster") == 1e-7
    assert json.loads((tmp_path / "config.json").read_text(encoding="utf-8"))["tolerances"]["pole"] == 1e-12


def test_unwritable_home_falls_back_to_defaults(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    cfg = Config(blocker / "home")
    assert not cfg.writable
    assert cfg.get("series.n_max") == 200


@pytest.mark.parametrize("key", ["tolerances.sigma", "tolerances.cluster", "tolerances.pole", "tolerances.representable"])
def test_tolerances_are_positive(tmp_path, key):
    assert Config(tmp_path).get(key) > 0
