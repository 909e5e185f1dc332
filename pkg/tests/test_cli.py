import json

import pytest

from llschain import g22_example
from llschain.cli import main
from llschain.render import (
    multidegree_header,
    render_multidegree_ascii,
    render_table_latex,
    render_tensor_latex,
)
from llschain.multidegree import default_multidegree

G22_HEADER_START = ["", "3", "5", "7", "9", "12", "14"]


def test_cli_count(capsys):
    assert main(["count", "--g", "21", "--d", "24", "--rho-max", "0"]) == 0
    assert capsys.readouterr().out.strip() == "1385670"


def test_cli_enumerate_limit(capsys):
    assert main(["enumerate", "--g", "6", "--r", "1", "--d", "4", "--limit", "3"]) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    assert len(lines) == 3
    obj = json.loads(lines[0])
    assert obj["r"] == 1 and obj["d"] == 4


def test_cli_oracle(capsys):
    assert main(["oracle", "--g", "4", "--r", "1", "--d", "3"]) == 0
    assert capsys.readouterr().out.strip() == "2"


def test_cli_inspect_example(capsys):
    assert main(["inspect", "--example"]) == 0
    out = capsys.readouterr().out
    assert "column 9, rows (2, 3), minimal" in out
    assert "class single" in out
    assert "total 1" in out


def test_cli_default_md_example(capsys):
    assert main(["default-md", "--example"]) == 0
    out = capsys.readouterr().out
    assert "c = 3,5,7,9,12,14,17,19,21,23,25,27,29,31,33,36,38,41,43,45,47" \
        in out.replace("c =", "c =").replace(" ", "").replace("c=", "c = ")


def test_cli_drop_trace(capsys):
    assert main(["drop", "--example", "--trace"]) == 0
    out = capsys.readouterr().out
    assert "dropped all 29 sections" in out
    assert '"rule": "iii"' in out


def test_cli_render_latex(capsys):
    assert main(["render", "--example", "--format", "latex", "--tensor"]) == 0
    out = capsys.readouterr().out
    assert "\\cellcolor[gray]{.8}" in out
    assert "\\begin{tabular}" in out


def test_cli_verify_small(capsys, tmp_path):
    code = main([
        "verify", "--g", "21", "--d", "24", "--rho-max", "0",
        "--limit", "25", "--out", str(tmp_path / "v.jsonl"),
    ])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["failed"] == 0
    assert report["verified"] == 25


def test_cli_left_weighted(capsys):
    assert main(["left-weighted", "--g", "4", "--d", "25"]) == 0
    assert capsys.readouterr().out.strip() == "10100,100,1"


def test_cli_flag_errors():
    with pytest.raises(SystemExit):
        main(["enumerate"])  # missing required flags
    assert main(["inspect"]) == 2  # no table given


def test_multidegree_header_matches_paper_layout():
    table = g22_example()
    w = default_multidegree(table)
    header = multidegree_header(w)
    # column 1 shows only the right twist 2d - c_2 = 47
    assert header[0] == ("", "47")
    assert header[1] == ("3", "45")
    assert header[2] == ("5", "43")
    assert header[-1] == ("47", "")
    text = render_multidegree_ascii(w)
    assert "47" in text and "12" in text


def test_render_table_latex_values():
    table = g22_example()
    tex = render_table_latex(table)
    first_row = tex.split("\n")[1]
    assert first_row.startswith("$0$ & $25$ & $0$ & $24$ & $1$ & $23$")


def test_render_tensor_highlights_sections():
    table = g22_example()
    w = default_multidegree(table)
    from llschain import build_tensor_table

    tex = render_tensor_latex(build_tensor_table(table), w)
    rows = [ln for ln in tex.split("\n") if ln.startswith("$(0,0)$")]
    assert len(rows) == 1
    # (0,0) is shaded exactly in its first column
    assert rows[0].count("\\cellcolor") == 2
