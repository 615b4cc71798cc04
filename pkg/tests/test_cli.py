import json
import subprocess
import sys

import pytest

from leapertours.cli import main, read_tour_file


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def knight_file(tmp_path, capsys):
    path = tmp_path / "knight.json"
    code, _, _ = run(capsys, "construct", "board", "--p", "1", "--q", "2", "--height", "10", "--out", str(path))
    assert code == 0
    return path


def test_construct_and_verify_board(knight_file, capsys):
    data = json.loads(knight_file.read_text())
    assert data["schema_version"] == 1 and data["kind"] == "board"
    assert data["board"] == {"height": 10, "width": 8}
    code, out, _ = run(capsys, "verify", str(knight_file))
    assert code == 0 and out.strip() == "tour, 80 cells"


def test_construct_projection(capsys):
    code, out, _ = run(capsys, "construct", "projection", "--p", "2", "--q", "3", "--n", "27")
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "projection" and sorted(data["cycle"]) == list(range(27))


def test_construct_exit_codes(tmp_path, capsys):
    assert run(capsys, "construct", "board", "--p", "1", "--q", "2", "--height", "4")[0] == 3
    assert run(capsys, "construct", "projection", "--p", "1", "--q", "3", "--n", "101")[0] == 3
    assert run(capsys, "construct", "board", "--p", "2", "--q", "4", "--height", "40")[0] == 2
    empty = tmp_path / "none"
    empty.mkdir()
    code = run(capsys, "construct", "even", "--p", "1", "--q", "2", "--height", "36", "--width", "36",
               "--provider", str(empty))[0]
    assert code == 4


def test_missing_flag_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["construct", "board", "--p", "1", "--q", "2"])
    assert exc.value.code == 2


def test_construct_even_board(capsys):
    code, out, _ = run(capsys, "construct", "even", "--p", "1", "--q", "2", "--height", "36", "--width", "38")
    assert code == 0
    assert json.loads(out)["board"] == {"height": 36, "width": 38}


def test_output_is_byte_identical(capsys):
    argv = ["construct", "board", "--p", "2", "--q", "3", "--height", "113", "--joint"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second and "joint" in json.loads(first)["provenance"]


def test_round_trip(knight_file, tmp_path):
    from leapertours.cli import dumps_tour

    t = read_tour_file(knight_file)
    again = tmp_path / "again.json"
    again.write_text(dumps_tour(t))
    assert read_tour_file(again) == t
    assert again.read_text() == knight_file.read_text()


def test_removed_edge_is_a_degree_violation(knight_file, tmp_path, capsys):
    data = json.loads(knight_file.read_text())
    cyc = data.pop("cycle")
    data["edges"] = [[cyc[i], cyc[(i + 1) % len(cyc)]] for i in range(1, len(cyc))]
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(broken))
    assert code == 1 and out.startswith("invalid(DegreeViolation")


def test_verify_rejects_bad_files(knight_file, tmp_path, capsys):
    text = knight_file.read_text()
    cut = tmp_path / "cut.json"
    cut.write_text(text[: len(text) // 2])
    assert run(capsys, "verify", str(cut))[0] == 2

    data = json.loads(text)
    data["cycle"] = data["cycle"][:-1]
    short = tmp_path / "short.json"
    short.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(short))
    assert code == 1 and out.startswith("invalid(")

    data = json.loads(text)
    data["schema_version"] = 7
    (tmp_path / "v7.json").write_text(json.dumps(data))
    assert run(capsys, "verify", str(tmp_path / "v7.json"))[0] == 2


def test_verify_reports_pseudotours(tmp_path, capsys):
    doc = {"schema_version": 1, "kind": "projection", "params": {"a": 1, "b": 2},
           "interval": {"lo": 0, "hi": 7}, "cycles": [[0, 1, 3, 2], [4, 5, 7, 6]], "provenance": "external"}
    path = tmp_path / "pseudo.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1 and out.strip() == "pseudotour(2 cycles)"


def test_render_formats(knight_file, tmp_path, capsys):
    code, svg, _ = run(capsys, "render", str(knight_file))
    assert code == 0 and svg.startswith("<svg") and "<polygon" in svg
    assert run(capsys, "render", str(knight_file))[1] == svg
    code, text, _ = run(capsys, "render", str(knight_file), "--format", "ascii")
    rows = text.strip().splitlines()
    assert code == 0 and len(rows) == 10
    numbers = sorted(int(tok) for row in rows for tok in row.split())
    assert numbers == list(range(80))


def test_render_projection(tmp_path, capsys):
    path = tmp_path / "p.json"
    doc = {"schema_version": 1, "kind": "projection", "params": {"a": 2, "b": 3},
           "interval": {"lo": 0, "hi": 4}, "cycle": [0, 2, 4, 1, 3], "provenance": "external"}
    path.write_text(json.dumps(doc))
    assert run(capsys, "verify", str(path))[:2] == (0, "tour, 5 cells\n")
    assert run(capsys, "render", str(path), "--format", "ascii")[1].strip() == "0-2-4-1-3-0"
    assert "<path" in run(capsys, "render", str(path))[1]


def test_search_table(capsys):
    code, out, _ = run(capsys, "search", "mu-div", "--a", "2", "--b", "5", "--max-n", "30")
    assert code == 0
    assert out.splitlines()[1].split("\t")[:3] == ["(2,5)", "mu_div", "11"]


def test_search_budget_warns(capsys):
    code, out, err = run(capsys, "search", "mu-div", "--a", "3", "--b", "4", "--max-n", "40", "--budget", "1")
    assert code == 0 and "warning" in err and "Indeterminate" in out


def test_check_lstar(capsys):
    code, out, _ = run(capsys, "check", "lstar", "--max-sum", "9")
    assert code == 0
    rows = [r.split("\t") for r in out.strip().splitlines()[1:]]
    assert rows and all("disconnected" in r for r in rows)


def test_thresholds_command(capsys):
    code, out, _ = run(capsys, "thresholds", "--p", "2", "--q", "3", "--mode", "formula")
    table = dict(line.split("\t") for line in out.strip().splitlines())
    assert code == 0 and table["m_II"] == "340"


def test_console_script_module_entry(tmp_path):
    res = subprocess.run([sys.executable, "-m", "leapertours", "thresholds", "--p", "1", "--q", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "m_II\t9" in res.stdout
