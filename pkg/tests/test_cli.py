import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from stopcost.cli import main
from stopcost.formats import format_number, parse_number, read_csv, read_json


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_solve_text():
    code, text = run("solve", "--n", "50", "--c", "0.1")
    assert code == 0
    assert "k0: 8" in text
    assert "value: 0.78582177324" in text


def test_solve_no_terminal_cost_json():
    code, text = run("solve", "--n", "50", "--c", "0.2", "--no-terminal-cost", "--json")
    rec = read_json(text)
    assert code == 0
    assert rec["k0"] == 14 and rec["variant"] == "no-cost-at-end"
    assert rec["value"] == pytest.approx(0.729829, abs=1e-6)
    assert set(rec) >= {"n", "c", "variant", "k0", "value", "monotone_case"}


def test_solve_exact_fraction():
    code, text = run("solve", "--n", "5", "--c", "0", "--exact")
    assert "value: 13/20" in text
    code, text = run("solve", "--n", "5", "--c", "1/10", "--exact", "--json")
    assert read_json(text)["value"] == F(343, 600)


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["solve", "--n", "0", "--c", "0.1"], "--n"),
        (["solve", "--n", "5", "--c", "-0.1"], "--c"),
        (["solve", "--n", "5", "--c", "0.5", "--no-terminal-cost"], "--c"),
        (["asymptotic", "--c", "-1"], "--c"),
        (["oracle", "--n", "11", "--c", "0"], "--n"),
        (["simulate", "--n", "5", "--c", "0", "--k0", "9"], "--k0"),
        (["table", "--n-list", "5"], "--c-list"),
        (["solve", "--n", "1200", "--c", "0.1", "--exact"], "--n"),
    ],
)
def test_validation_exit_code(argv, flag, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert flag in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        run("solve", "--n", "five", "--c", "0")
    assert exc.value.code == 2


def test_table_single_row():
    code, text = run("table", "--n-list", "1", "--c-list", "0")
    rows = read_csv(text)
    assert code == 0 and len(rows) == 1
    assert rows[0]["k0"] == 1 and rows[0]["value"] == 0.5


def test_table_sorted_and_round_trips():
    code, text = run("table", "--n-list", "20,5", "--c-list", "0.2,0,1/10")
    rows = read_csv(text)
    assert [(r["n"], r["c"]) for r in rows] == sorted((r["n"], r["c"]) for r in rows)
    # reading back and re-emitting reproduces every cell
    for r in rows:
        assert format_number(r["value"]) == text.splitlines()[1 + rows.index(r)].split(",")[4]


def test_table_json_exact_round_trip():
    code, text = run("table", "--preset", "paper-table-1", "--exact", "--format", "json")
    rows = read_json(text)
    assert len(rows) == 15
    assert rows[0]["value"] == F(13, 20)
    assert json.loads(json.dumps(rows, default=str))  # plain JSON after restore


def test_preset_is_byte_stable():
    a = run("table", "--preset", "paper-table-2")[1]
    b = run("table", "--preset", "paper-table-2")[1]
    assert a == b and "generated" not in a
    assert "\r" not in a
    meta = run("table", "--preset", "paper-table-2", "--meta")[1]
    assert meta.startswith("# ") and read_csv(meta) == read_csv(a)


def test_asymptotic_output():
    code, text = run("asymptotic", "--c", "0.1", "--json")
    rec = read_json(text)
    assert f"{rec['root']:.6g}" == "0.00251646"
    assert rec["limit_value"] == pytest.approx(0.9)
    code, text = run("asymptotic", "--c", "0.2", "--no-terminal-cost")
    assert "root: 0.107355" in text


def test_asymptotic_check():
    code, text = run("asymptotic", "--c", "0.2", "--check", "--n-max", "20000", "--json")
    rec = read_json(text)
    assert code == 0
    assert rec["value_converging"] and rec["threshold_converging"]
    assert [r["n"] for r in rec["convergence"]] == [100, 200, 400, 800, 1600, 3200, 6400, 12800]


def test_oracle_command():
    code, text = run("oracle", "--n", "5", "--c", "0", "--k0", "2", "--against-solver", "--json")
    rec = read_json(text)
    assert code == 0
    assert rec["value"] == F(13, 20)
    assert rec["stop_distribution"]["2"] == F(1, 2)
    assert rec["agrees"] is True


def test_simulate_command():
    code, text = run("simulate", "--n", "5", "--c", "0", "--k0", "1", "--samples", "100000", "--json")
    rec = read_json(text)
    assert code == 0 and rec["value"] == pytest.approx(0.5, abs=4e-3) and rec["seed"] == 0


def test_simulate_against_solver():
    code, text = run(
        "simulate", "--n", "40", "--c", "0.1", "--samples", "200000", "--seed", "7", "--against-solver", "--json"
    )
    rec = read_json(text)
    assert code == 0 and abs(rec["z_score"]) < 5


def test_plotdata():
    code, text = run("plotdata", "--c-list", "0.1", "--n-min", "10", "--n-max", "100000")
    rows = read_csv(text)
    assert code == 0
    fracs = [r["k0_over_n"] for r in rows]
    assert fracs == sorted(fracs, reverse=True)
    assert all(abs(r["limit_root"] - 0.00251646) < 1e-8 for r in rows)
    code, text = run("plotdata", "--c-list", "0", "--n-list", "10,100,1000")
    values = [r["value"] for r in read_csv(text)]
    assert values == sorted(values) and all(v < 1 for v in values)


def test_plotdata_point_matches_solve():
    row = read_csv(run("plotdata", "--c-list", "0.1", "--n-list", "50")[1])[0]
    rec = read_json(run("solve", "--n", "50", "--c", "0.1", "--json")[1])
    assert (row["k0"], row["value"]) == (rec["k0"], rec["value"])


def test_plotdata_empty_grid():
    assert run("plotdata", "--c-list", "0.1")[0] == 2


def test_format_helpers():
    assert format_number(F(26, 40)) == "13/20"
    assert format_number(1 / 3) == "0.333333333333"
    assert parse_number("13/20") == F(13, 20)
    assert parse_number("true") is True


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "stopcost", "solve", "--n", "10", "--c", "0.1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "k0: 3" in proc.stdout
