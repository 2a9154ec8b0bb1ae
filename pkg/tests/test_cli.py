import csv
import json
import math
import subprocess
import sys

import pytest

from caratheodory.cli import main

SQUARE = {"type": "polygon", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}
IDENTITY = {"type": "mapped_disk", "map": {"kind": "identity"}}
QUAD = {"type": "mapped_disk", "map": {"kind": "quad", "c": [0.25, 0]}}


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, obj in {"square": SQUARE, "identity": IDENTITY, "quad": QUAD,
                      "table": {"kmax": 8, "g": list(range(1, 10)), "extension_pad": 1},
                      "bad_table": {"kmax": 2, "g": [0, 0, 0]}}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        out[name] = str(p)
    out["dir"] = tmp_path
    return out


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_lambda(capsys):
    assert main(["lambda", "--inner", "1", "--outer", str(math.e)]) == 0
    assert _json(capsys)["lambda"] == pytest.approx(2 * math.pi)


def test_lambda_error(capsys):
    assert main(["lambda", "--inner", "2", "--outer", "1"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_mlc_estimate_and_check(files, capsys):
    out = files["dir"] / "est.json"
    assert main(["mlc", "estimate", "--curve", files["square"], "--kmax", "3", "--resolution", "512",
                 "--out", str(out)]) == 0
    table = json.loads(out.read_text())
    assert table["kmax"] == 3 and len(table["g"]) == 4
    assert main(["mlc", "check", "--curve", files["square"], "--table", str(out), "--k", "3",
                 "--resolution", "512"]) == 0
    assert _json(capsys)["pass"] is True


def test_mlc_check_witness(files, capsys):
    code = main(["mlc", "check", "--curve", files["square"], "--table", files["bad_table"], "--k", "2",
                 "--resolution", "256"])
    assert code == 1
    res = _json(capsys)
    assert res["pass"] is False and res["witness"]["k"] == 2


def test_mlc_on_mapped_domain(files, capsys):
    assert main(["mlc", "check", "--curve", files["identity"], "--table", files["table"], "--k", "2",
                 "--resolution", "256"]) == 0


def test_delta(files, capsys):
    assert main(["delta", "--domain", files["identity"], "--zeta", "1,0", "--eps", "0.5",
                 "--table", files["table"]]) == 0
    res = _json(capsys)
    assert res["k"] == 468 and res["g_used"] == 469
    assert res["log2_delta"] < res["log2_threshold"]


def test_delta_needs_map(files, capsys):
    assert main(["delta", "--domain", files["square"], "--zeta", "1,0", "--eps", "0.5",
                 "--table", files["table"]]) == 2
    assert "mapped_disk" in capsys.readouterr().err


def test_delta_bad_eps(files, capsys):
    assert main(["delta", "--domain", files["identity"], "--zeta", "1,0", "--eps", "1.5",
                 "--table", files["table"]]) == 2
    assert "unsupported epsilon" in capsys.readouterr().err


def test_component(files, capsys):
    out = files["dir"] / "c.csv"
    assert main(["component", "--domain", files["square"], "--zeta", "0.5,0", "--radius", "0.25",
                 "--grid", "256", "--out", str(out)]) == 0
    res = _json(capsys)
    assert res["touches_zeta0"] is True
    assert res["area_estimate"] == pytest.approx(math.pi / 32, rel=0.03)
    with out.open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["cell_x", "cell_y"] and len(rows) > 100


def test_verify_continuity(files, capsys):
    rep = files["dir"] / "r.json"
    code = main(["verify", "continuity", "--domain", files["identity"], "--zeta", "1,0", "--eps", "0.5",
                 "--delta-log2", str(math.log2(0.1)), "--samples", "2000", "--report", str(rep)])
    assert code == 0
    assert json.loads(rep.read_text())["violations"] == 0
    assert "pass" in capsys.readouterr().out


def test_verify_continuity_planted(files, capsys):
    code = main(["verify", "continuity", "--domain", files["identity"], "--zeta", "1,0", "--eps", "0.5",
                 "--delta-log2", str(math.log2(1.2)), "--samples", "2000"])
    assert code == 1
    assert _json(capsys)["violations"] > 0


def test_verify_continuity_from_table(files, capsys):
    code = main(["verify", "continuity", "--domain", files["quad"], "--zeta", "1.25,0", "--eps", "0.25",
                 "--table", files["table"], "--samples", "100"])
    assert code == 0
    assert _json(capsys)["vacuous"] is True


def test_verify_diameter(files, capsys):
    assert main(["verify", "diameter", "--domain", files["identity"], "--zeta", "1,0", "--eps", "0.5",
                 "--r0", "0.1", "--grid", "256"]) == 0
    assert _json(capsys)["extras"]["diameter"] <= 0.2


def test_verify_diameter_unresolvable(files, capsys):
    assert main(["verify", "diameter", "--domain", files["identity"], "--zeta", "1,0", "--eps", "0.5",
                 "--r0", "1e-9"]) == 2
    assert "r0 unresolvable" in capsys.readouterr().err


def test_verify_missing_delta(files, capsys):
    assert main(["verify", "continuity", "--domain", files["identity"], "--zeta", "1,0",
                 "--eps", "0.5"]) == 2


def test_bad_zeta(files):
    with pytest.raises(SystemExit):
        main(["delta", "--domain", files["identity"], "--zeta", "1;0", "--eps", "0.5", "--table", files["table"]])


def test_malformed_json(files, capsys):
    p = files["dir"] / "broken.json"
    p.write_text('{"type": "polygon",\n "vertices": [[0, 0],, ]}')
    assert main(["mlc", "estimate", "--curve", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "caratheodory", "lambda", "--inner", "1", "--outer", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["lambda"] == pytest.approx(2 * math.pi / math.log(2))
