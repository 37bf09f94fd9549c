import json
import subprocess
import sys

import pytest

from perron_sft.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


@pytest.fixture
def spec_file(tmp_path):
    def make(q, F, **extra):
        p = tmp_path / f"spec{q}_{len(F)}.json"
        p.write_text(json.dumps({"q": q, "forbidden": F, **extra}))
        return str(p)
    return make


def test_analyze_golden(capsys, spec_file):
    code, out, _ = run(capsys, "analyze", spec_file(3, ["01"]))
    assert code == 0
    assert out["theta"] == pytest.approx(2.618033988749895, abs=1e-15)
    assert out["labels"] == ["0", "1", "2"]
    assert out["r"] == {"numerator": [1], "denominator": [0, 1]}


def test_analyze_mixed_r(capsys, spec_file):
    _, out, _ = run(capsys, "analyze", spec_file(5, ["00", "1010"]))
    assert out["r"] == {"numerator": [2, 0, 1], "denominator": [1, 1, 1, 1]}


def test_seventeen_digits(capsys, spec_file):
    _, _, raw = run(capsys, "analyze", spec_file(3, ["01"]))
    assert '"theta": 2.6180339887498949' in raw


def test_deterministic(capsys, spec_file):
    f = spec_file(5, ["00", "1010"])
    _, _, a = run(capsys, "analyze", f)
    _, _, b = run(capsys, "analyze", f)
    assert a == b


def test_invalid_symbol(capsys, spec_file):
    code, out, _ = run(capsys, "analyze", spec_file(3, ["3"]))
    assert code == 2 and out["error"]["code"] == "SymbolOutOfRange"


def test_parse_error(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"q": 3,\n "forbidden": [01]}')
    code, out, _ = run(capsys, "analyze", str(p))
    assert code == 2 and out["error"]["code"] == "ParseError"
    assert out["error"]["details"]["line"] == 2


def test_digits_rejected_for_big_alphabet(capsys, spec_file):
    code, out, _ = run(capsys, "analyze", spec_file(12, ["00"]))
    assert code == 2 and out["error"]["code"] == "ParseError"
    code, out, _ = run(capsys, "analyze", spec_file(12, [[0, 0], [10, 11]]))
    assert code == 0 and out["input"]["forbidden"] == [[0, 0], [10, 11]]


def test_measure(capsys, spec_file):
    code, out, _ = run(capsys, "measure", spec_file(5, ["00", "1010"]), "--word", "0101")
    assert code == 0 and out["measure"] == pytest.approx(0.000987, abs=5e-7)
    code, out, _ = run(capsys, "measure", spec_file(3, ["00"]), "--word", "01")
    assert out["measure"] == pytest.approx(0.10566243270259357, abs=1e-12)
    code, out, _ = run(capsys, "measure", spec_file(3, ["00"]), "--word", "1002")
    assert code == 0 and out["measure"] == 0


def test_measure_zero_entropy(capsys, spec_file):
    code, out, _ = run(capsys, "measure", spec_file(2, ["00", "11"]), "--word", "01")
    assert code == 3 and out["error"]["code"] == "EntropyNotPositive"


def test_count(capsys, spec_file):
    code, out, _ = run(capsys, "count", spec_file(2, ["11"]), "--max-n", "5")
    assert out["f"] == [1, 2, 3, 5, 8, 13]


def test_escape(capsys, spec_file):
    code, out, _ = run(capsys, "escape", spec_file(2, []), "--hole", "11")
    assert code == 0 and out["rho"] == pytest.approx(0.21193535550034176, abs=1e-12)
    code, out, _ = run(capsys, "escape", spec_file(2, ["11"]), "--hole", "011")
    assert code == 2 and out["error"]["code"] == "HoleWordForbidden"


def test_local(capsys, spec_file):
    code, out, _ = run(capsys, "local", spec_file(2, []), "--cycle", "0", "--n-max", "200")
    assert out["rho"] == 0.5 and out["t"][-1] == pytest.approx(2, abs=1e-6)


def test_graph_text_and_json(capsys, tmp_path):
    txt = tmp_path / "star.txt"
    txt.write_text("5\n0 1 1 1 1\n1 0 0 0 0\n1 0 0 0 0\n1 0 0 0 0\n1 0 0 0 0\n")
    code, out, _ = run(capsys, "graph", str(txt))
    assert code == 0 and out["theta"] == pytest.approx(2.0, abs=1e-12)
    assert out["labels"] == [1, 2, 3, 4, 5]
    js = tmp_path / "m.json"
    js.write_text(json.dumps({"matrix": [[0, 1], [1, 0]]}))
    code, out, _ = run(capsys, "graph", str(js))
    assert out["period"] == 2 and out["normalization"] is None


def test_graph_bad_rows(capsys, tmp_path):
    txt = tmp_path / "bad.txt"
    txt.write_text("3\n0 1 1\n1 0 0\n")
    code, out, _ = run(capsys, "graph", str(txt))
    assert code == 2


def test_verify(capsys, spec_file):
    code, out, _ = run(capsys, "verify", spec_file(5, ["0000", "0001"]))
    assert code == 0 and out["pass"] and out["discrepancies"] == []


def test_tolerance_flags(capsys, spec_file):
    code, out, _ = run(capsys, "analyze", spec_file(3, ["01"]), "--tol-root", "1e-9", "--tol-singular", "1e-7")
    assert code == 0


def test_dumps_sorted():
    assert dumps({"b": 1.5, "a": [1, None, True]}) == '{"a": [1, null, true], "b": 1.5}'


def test_module_entry(tmp_path):
    p = tmp_path / "s.json"
    p.write_text('{"q": 3, "forbidden": ["00"]}')
    res = subprocess.run([sys.executable, "-m", "perron_sft", "analyze", str(p)], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["theta"] == pytest.approx(2.732050807568877)
