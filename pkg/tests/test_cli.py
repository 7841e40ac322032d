import json
import subprocess
import sys

import pytest

from seplab import cli
from seplab.fixtures import figure_eight_annulus, gamma_elliptic, make_graph
from seplab.graph_core import BLACK, WHITE
from seplab.io import dumps, graph_to_dict

ELLIPTIC = {"numerator": ["1", "0", "0", "0"], "denominator": ["1", "-1"]}
CENTERS = {"numerator": ["i", "0", "-5i", "0", "4i"], "denominator": ["1", "0", "9"]}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else dumps(obj))
    return str(p)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def valence_three(tmp_path):
    g = make_graph(
        {"w": WHITE, "a": BLACK, "b": BLACK, "c": BLACK},
        [("e0", "w", "a"), ("e1", "b", "w"), ("e2", "w", "c")],
        {"w": ["e0t", "e1h", "e2t"], "a": ["e0h"], "b": ["e1t"], "c": ["e2h"]},
    )
    return write(tmp_path, "v3.json", graph_to_dict(g))


def test_check_admissible_exits_zero(tmp_path, capsys):
    code, out, _ = run(["check", write(tmp_path, "g.json", graph_to_dict(gamma_elliptic()))], capsys)
    assert code == cli.EXIT_OK
    assert json.loads(out)["admissible"] is True


def test_check_valence_three_names_c(valence_three, capsys):
    code, out, _ = run(["check", valence_three], capsys)
    assert code == cli.EXIT_FALSE
    cond = json.loads(out)["conditions"]["c"]
    assert cond["status"] == "fail" and cond["witness"]


def test_truncated_json_exits_two(tmp_path, capsys):
    text = dumps(graph_to_dict(gamma_elliptic()))
    code, _, err = run(["check", write(tmp_path, "bad.json", text[: len(text) // 2])], capsys)
    assert code == cli.EXIT_MALFORMED
    assert err.startswith("seplab:")


def test_missing_file_exits_two(tmp_path, capsys):
    assert run(["check", str(tmp_path / "nope.json")], capsys)[0] == cli.EXIT_MALFORMED


def test_common_factor_exits_two(tmp_path, capsys):
    doc = {"numerator": ["1", "0", "-1"], "denominator": ["1", "-1"]}
    code, _, err = run(["extract", write(tmp_path, "f.json", doc)], capsys)
    assert code == cli.EXIT_MALFORMED
    assert "common factor" in err


def test_lengths_verify(tmp_path, capsys):
    code, out, _ = run(["lengths", "--verify", write(tmp_path, "n.json", graph_to_dict(figure_eight_annulus()))], capsys)
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    assert doc["verified"] is True
    assert doc["lengths"]


def test_lengths_rejects_inadmissible(valence_three, capsys):
    assert run(["lengths", valence_three], capsys)[0] == cli.EXIT_FALSE


def test_realize_reports_degrees(tmp_path, capsys):
    code, out, _ = run(["realize", write(tmp_path, "g.json", graph_to_dict(gamma_elliptic()))], capsys)
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    assert (doc["degrees"]["deg_P"], doc["degrees"]["deg_Q"]) == (3, 1)


def test_extract_writes_graph_and_sidecar(tmp_path, capsys):
    prefix = str(tmp_path / "twin")
    code, _, _ = run(["extract", write(tmp_path, "f.json", ELLIPTIC), "--out", prefix], capsys)
    assert code == cli.EXIT_OK
    graph = json.loads((tmp_path / "twin.graph.json").read_text())
    side = json.loads((tmp_path / "twin.traces.json").read_text())
    assert len(graph["vertices"]) == 2 and len(graph["edges"]) == 4
    assert side["resolved"] and len(side["traces"]) == 4


def test_extract_degree_two_is_empty(tmp_path, capsys):
    code, out, err = run(["extract", write(tmp_path, "f.json", {"numerator": ["1", "0", "0"]})], capsys)
    assert code == cli.EXIT_OK
    assert json.loads(out)["graph"]["vertices"] == []
    assert "empty" in err


def test_unresolved_exits_three_with_partial_output(tmp_path, capsys):
    prefix = str(tmp_path / "cut")
    code, _, err = run(["extract", write(tmp_path, "f.json", CENTERS), "--smax", "1e-3", "--out", prefix], capsys)
    assert code == cli.EXIT_UNRESOLVED
    side = json.loads((tmp_path / "cut.traces.json").read_text())
    assert side["resolved"] is False and side["traces"]
    assert not (tmp_path / "cut.graph.json").exists()
    assert "arc-length cap" in err


@pytest.mark.parametrize("field,degrees", [(ELLIPTIC, [3, 1]), (CENTERS, [4, 2])])
def test_roundtrip(tmp_path, capsys, field, degrees):
    code, out, _ = run(["roundtrip", write(tmp_path, "f.json", field)], capsys)
    doc = json.loads(out)
    assert code == cli.EXIT_OK
    assert doc["admissible"] and doc["degrees_match"]
    assert doc["reported_degrees"] == degrees


def test_render_variants(tmp_path, capsys):
    field = write(tmp_path, "f.json", CENTERS)
    code, svg, _ = run(["render", field, "--size", "200"], capsys)
    assert code == cli.EXIT_OK and svg.startswith("<svg") and 'width="200"' in svg
    prefix = str(tmp_path / "c")
    run(["extract", field, "--out", prefix], capsys)
    code, from_side, _ = run(["render", prefix + ".traces.json", "--size", "200"], capsys)
    assert code == cli.EXIT_OK
    assert from_side.count('class="sep ') == svg.count('class="sep ') == 4
    code, schem, _ = run(["render", prefix + ".graph.json"], capsys)
    assert code == cli.EXIT_OK and ">schematic<" in schem


def test_render_writes_file(tmp_path, capsys):
    out = tmp_path / "p.svg"
    assert run(["render", write(tmp_path, "f.json", ELLIPTIC), "-o", str(out)], capsys)[0] == cli.EXIT_OK
    assert out.read_text().endswith("</svg>\n")


def test_config_file_is_merged_under_flags(tmp_path, monkeypatch):
    ini = tmp_path / "seplab.ini"
    ini.write_text("[seplab]\nsmax = 0.001\nsize = 123\n")
    monkeypatch.setenv("SEPLAB_CONFIG", str(ini))
    args = cli.build_parser().parse_args(["render", "x.json", "--size", "77"])
    cfg = cli.settings(args)
    assert cfg["smax"] == 0.001 and cfg["size"] == 77
    assert cfg["tol_root"] == cli.DEFAULTS["tol_root"]


def test_config_errors_exit_two(tmp_path, monkeypatch, capsys):
    ini = tmp_path / "seplab.ini"
    ini.write_text("[seplab]\ncolour = red\n")
    monkeypatch.setenv("SEPLAB_CONFIG", str(ini))
    code, _, err = run(["extract", write(tmp_path, "f.json", ELLIPTIC)], capsys)
    assert code == cli.EXIT_MALFORMED and "colour" in err


def test_nonpositive_tolerance_is_rejected(tmp_path, capsys):
    assert run(["extract", write(tmp_path, "f.json", ELLIPTIC), "--tol-root", "0"], capsys)[0] == cli.EXIT_MALFORMED


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "seplab.cli", "roundtrip", write(tmp_path, "f.json", ELLIPTIC)],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["degrees_match"] is True
