import json

import pytest

from caratheodory.cli import main
from caratheodory.suite import ConfigError, default_config_path, load_config, run_suite

IDENTITY = {"type": "mapped_disk", "map": {"kind": "identity"}}


def _config(tmp_path, **over):
    cfg = {
        "seed": 7,
        "criteria": [1, 2],
        "continuity": [
            {"name": "hand", "domain": IDENTITY, "zeta": [1, 0], "eps": 0.5, "delta": 0.1, "samples": 2000},
            {"name": "formula", "domain": {"type": "mapped_disk", "map": {"kind": "quad", "c": [0.25, 0]}},
             "zeta": [1.25, 0], "eps": 0.25, "delta": "formula",
             "table": {"kmax": 2, "g": [2, 3, 4], "extension_pad": 2}, "samples": 100},
            {"name": "planted", "domain": IDENTITY, "zeta": [1, 0], "eps": 0.5, "delta": {"log2": 0.263},
             "samples": 2000, "expect_violations": True},
        ],
        "diameter": [{"name": "cap", "domain": IDENTITY, "zeta": [1, 0], "eps": 0.5, "r0": 0.1, "grid_n": 256}],
    }
    cfg.update(over)
    p = tmp_path / "suite.json"
    p.write_text(json.dumps(cfg, indent=2))
    return p


def test_small_suite_passes(tmp_path):
    ok, report = run_suite(_config(tmp_path))
    assert ok and report["passed"] and report["failed"] == []
    assert [c["criterion"] for c in report["criteria"]] == [1, 2]
    formula = report["continuity"][1]
    assert formula["report"]["vacuous"] and "log2_delta" in formula["delta"]
    assert report["continuity"][2]["report"]["violations"] > 0


def test_report_is_byte_identical(tmp_path):
    cfg = _config(tmp_path)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_suite(cfg, a)
    run_suite(cfg, b)
    assert a.read_bytes() == b.read_bytes()
    assert "runtime" not in a.read_text()


def test_unsound_delta_fails_suite(tmp_path):
    bad = {"name": "unsound", "domain": IDENTITY, "zeta": [1, 0], "eps": 0.5, "delta": 1.2, "samples": 2000}
    ok, report = run_suite(_config(tmp_path, continuity=[bad]))
    assert not ok
    assert report["failed"] == ["unsound"]
    assert report["continuity"][0]["report"]["violations"] > 0


def test_unresolvable_diameter_is_recorded(tmp_path):
    d = {"name": "tiny", "domain": IDENTITY, "zeta": [1, 0], "eps": 0.5, "r0": 1e-9}
    ok, report = run_suite(_config(tmp_path, diameter=[d], continuity=[]))
    assert not ok and "r0 unresolvable" in report["diameter"][0]["error"]


def test_syntax_error_has_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "seed": 1,\n  "criteria": [1,\n}')
    with pytest.raises(ConfigError, match="line 4 column 1"):
        load_config(p)


@pytest.mark.parametrize("patch,path", [
    ({"seed": -1}, r"\$\.seed"),
    ({"criteria": [11]}, r"\$\.criteria"),
    ({"continuity": [{"domain": IDENTITY, "zeta": [1, 0], "eps": 1.5, "delta": 0.1}]}, r"\$\.continuity\[0\]\.eps"),
    ({"continuity": [{"domain": IDENTITY, "zeta": [1], "eps": 0.5, "delta": 0.1}]}, r"\$\.continuity\[0\]\.zeta"),
    ({"continuity": [{"domain": IDENTITY, "zeta": [1, 0], "eps": 0.5, "delta": -1}]}, r"\$\.continuity\[0\]\.delta"),
    ({"continuity": [{"domain": IDENTITY, "zeta": [1, 0], "eps": 0.5, "delta": "formula"}]},
     r"\$\.continuity\[0\]: missing key 'table'"),
    ({"continuity": [{"domain": {"kind": "joukowski"}, "zeta": [1, 0], "eps": 0.5, "delta": 0.1}]},
     r"\$\.continuity\[0\]\.domain"),
    ({"diameter": [{"domain": IDENTITY, "zeta": [1, 0], "eps": 0.5}]}, r"\$\.diameter\[0\]: missing key 'r0'"),
    ({"diameter": [{"domain": IDENTITY, "zeta": [1, 0], "eps": 0.5, "r0": "big"}]}, r"\$\.diameter\[0\]\.r0"),
    ({"extra": 1}, "unknown keys"),
])
def test_semantic_errors_have_paths(tmp_path, patch, path):
    with pytest.raises(ConfigError, match=path):
        load_config(_config(tmp_path, **patch))


def test_default_config_loads():
    cfg = load_config(default_config_path())
    assert cfg["criteria"] == list(range(1, 11))
    assert any(c["expect_violations"] for c in cfg["continuity"])
    assert any(c["delta"] == "formula" for c in cfg["continuity"])


def test_cli_suite(tmp_path, capsys):
    cfg = _config(tmp_path)
    rep = tmp_path / "r.json"
    assert main(["suite", "--config", str(cfg), "--report", str(rep)]) == 0
    out = capsys.readouterr().out
    assert "criterion  1 PASS" in out and "suite passed" in out
    assert json.loads(rep.read_text())["passed"]


def test_cli_suite_bad_config(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("[1, 2")
    assert main(["suite", "--config", str(p), "--report", str(tmp_path / "r.json")]) == 2
    assert "line 1" in capsys.readouterr().err
