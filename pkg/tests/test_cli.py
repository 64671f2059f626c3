import csv
import io
import json
import subprocess
import sys

import pytest

from mhcount.cli import format_cell, main, render_csv

MARKOFF = {"f": [[0, 0, 1]] * 3, "k": [1, 1, 1], "a": 3}


def run(tmp_path, argv, config=None):
    args = list(argv)
    if config is not None:
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps(config))
        args += ["--config", str(p)]
    out = tmp_path / "out.csv"
    code = main(args + ["--out", str(out), "--workers", "1"])
    text = out.read_bytes().decode("utf-8") if out.exists() else ""
    return code, text


def rows(text):
    lines = text.split("\n")
    return lines[0], list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_format_cell():
    assert format_cell(-0.0) == "0"
    assert format_cell(1 / 3) == "0.333333333333"
    assert format_cell(None) == "" and format_cell(float("inf")) == "inf"
    assert format_cell(12) == "12"


def test_render_csv_shape():
    text = render_csv("count", ["a", "b"], [{"a": 1, "b": "x,y"}])
    assert text == '# schema=count/v1\na,b\n1,"x,y"\n'


def test_count_markoff(tmp_path):
    code, text = run(tmp_path, ["count"], {"spec": MARKOFF, "boxes": [{"h": 20}, {"h": 50}, {"h": 100}]})
    header, rs = rows(text)
    assert code == 0 and header == "# schema=count/v1"
    assert [r["n_star"] for r in rs] == ["16", "28", "34"]
    assert "\r" not in text and rs[0]["elapsed_s"] == ""


def test_count_empty_boxes(tmp_path):
    code, text = run(tmp_path, ["count"], {"spec": MARKOFF, "boxes": []})
    assert code == 0 and text.count("\n") == 2


def test_count_malformed_config(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{\"spec\": ")
    assert main(["count", "--config", str(p)]) == 2
    code, _ = run(tmp_path, ["count"], {"spec": MARKOFF, "boxes": [{"h": 3, "x": 1}]})
    assert code == 2


def test_count_budget_exit(tmp_path):
    code, text = run(tmp_path, ["count", "--budget", "10"], {"spec": MARKOFF, "boxes": [{"h": 20}]})
    assert code == 1 and text == ""


def test_global_flags_before_subcommand(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"spec": MARKOFF, "boxes": [{"h": 5}]}))
    out = tmp_path / "o.csv"
    assert main(["--config", str(p), "--out", str(out), "count"]) == 0
    assert out.read_text().startswith("# schema=count/v1\n")


def test_usage_errors():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["count", "--workers", "0"])
    assert e.value.code == 2


def test_verify_default_and_perturbed(tmp_path):
    code, text = run(tmp_path, ["verify"])
    header, rs = rows(text)
    assert code == 0 and header == "# schema=verify/v1"
    assert [r["suite"] for r in rs] == ["orthogonality", "gauss", "ramanujan", "postnikov", "reconstruct", "strategies"]
    assert all(r["status"] == "pass" and r["failures"] == "0" for r in rs)
    code, text = run(tmp_path, ["verify", "--suite", "postnikov", "--perturb", "postnikov"])
    _, rs = rows(text)
    assert code == 1 and rs[0]["status"] == "fail"


def test_verify_selection_errors(tmp_path):
    assert run(tmp_path, ["verify"], {"suites": []})[0] == 2
    assert run(tmp_path, ["verify", "--suite", "nope"])[0] == 2
    assert run(tmp_path, ["verify"], {"suites": ["gauss"], "sizes": {"gauss": {"bogus": 1}}})[0] == 2


def test_scan_density_diagonal_exponent(tmp_path):
    cfg = {"spec": dict(MARKOFF, a=1), "u": 0, "h_grid": [10, 20, 40, 80], "exponent": "diagonal"}
    code, text = run(tmp_path, ["scan-density"], cfg)
    header, rs = rows(text)
    assert code == 0 and header == "# schema=scan-density/v1"
    assert rs[0]["slope"] == "" and all(r["slope"] != "" for r in rs[1:])
    assert all(r["exponent_ref"] == "3" for r in rs)
    for r in rs:
        assert int(r["n_star"]) <= int(r["pipeline_bound"])


def test_scan_density_edge_grids(tmp_path):
    code, text = run(tmp_path, ["scan-density"], {"spec": MARKOFF, "h_grid": [7]})
    _, rs = rows(text)
    assert code == 0 and len(rs) == 1 and rs[0]["slope"] == ""
    code, text = run(tmp_path, ["scan-density"], {"spec": MARKOFF, "h_grid": [0, 5, 30]})
    _, rs = rows(text)
    assert rs[0]["n_star"] == "0" and rs[1]["slope"] == "" and rs[2]["slope"] != ""
    assert run(tmp_path, ["scan-density"], {"spec": MARKOFF})[0] == 2


def test_scan_density_modulus_columns(tmp_path):
    cfg = {"spec": MARKOFF, "h_grid": [50, 100], "modulus": {"Q": 5, "r": 1}, "exponent": "square-free"}
    code, text = run(tmp_path, ["scan-density"], cfg)
    _, rs = rows(text)
    assert code == 0
    for r in rs:
        assert r["q"] == "7" and r["phi"] == "6" and float(r["kept_fraction"]) >= 0.5
        assert int(r["n_star"]) <= 2 * int(r["T"]) and "n-exceeds-2T" not in r["flags"]
        assert float(r["exponent_ref"]) == pytest.approx(3 - 4 / 9)


def test_scan_density_deterministic_across_workers(tmp_path):
    cfg = {"spec": MARKOFF, "h_grid": [10, 40, 90], "modulus": {"Q": "square-free", "r": 1}, "exponent": "square-free"}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    outs = []
    for w in ("1", "3", "1"):
        o = tmp_path / f"o{len(outs)}.csv"
        assert main(["scan-density", "--config", str(p), "--workers", w, "--out", str(o)]) == 0
        outs.append(o.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_timing_flag_fills_elapsed(tmp_path):
    code, text = run(tmp_path, ["scan-density", "--timing"], {"spec": MARKOFF, "h_grid": [5]})
    assert rows(text)[1][0]["elapsed_s"] != ""


def test_charsum_gauss_sweep(tmp_path):
    code, text = run(tmp_path, ["charsum"], {"charsum": {"op": "gauss_sum", "params": {"q": 7, "chi": "all", "lam": 1}}})
    header, rs = rows(text)
    assert code == 0 and header == "# schema=charsum/v1" and len(rs) == 6
    for r in rs[1:]:
        assert float(r["magnitude"]) == pytest.approx(7**0.5, abs=1e-9)


def test_charsum_ramanujan_sweep(tmp_path):
    import math
    code, text = run(tmp_path, ["charsum"],
                     {"charsum": {"op": "ramanujan_sum", "params": {"q": 35}, "sweep": {"lam": {"range": [1, 35]}}}})
    _, rs = rows(text)
    assert len(rs) == 35
    for lam, r in enumerate(rs, start=1):
        g = math.gcd(lam, 35)
        assert float(r["magnitude"]) == {1: 1, 5: 4, 7: 6, 35: 24}[g]
        assert json.loads(r["params"]) == {"q": 35, "lam": lam}


def test_charsum_every_op_runs(tmp_path):
    sections = [
        {"op": "incomplete_mixed_sum", "params": {"q": 35, "chi": [1, 2], "f": [0, 0, 1], "lam": 3, "h": 40}},
        {"op": "mixed_sf_report", "params": {"q": 35, "chi": [1, 1], "F": [0, "3/10"], "h": 300}},
        {"op": "prime_power_mixed_sum", "params": {"p": 5, "r": 3, "f": [0, 1, 0, 1], "lam": 1, "mu": 2, "h": 125}},
        {"op": "pure_sum_report", "params": {"q": 35, "chi": [1, 1], "roots": [[0, 1], [1, -1]], "h": 35}},
        {"op": "wooley_report", "params": {"G": [0, 0, "1/25", "2/3"], "H": 25, "j": 2}},
        {"op": "weil_report", "params": {"p": 11, "chi": 5, "lam": 1, "F": [0, 0, 0, 1], "h": 11}},
        {"op": "linear_quadratic_bound", "params": {"G": [0, 1, 2], "H": 27, "q": 9}},
    ]
    for sec in sections:
        code, text = run(tmp_path, ["charsum"], {"charsum": sec})
        _, rs = rows(text)
        assert code == 0 and len(rs) == 1 and rs[0]["op"] == sec["op"] and rs[0]["ratio"] != ""


def test_charsum_degenerate_rows_are_flagged(tmp_path):
    sec = {"op": "weil_report", "params": {"p": 7, "chi": "all", "F": [0, 0, 1], "h": 7}, "sweep": {"lam": [0, 1]}}
    code, text = run(tmp_path, ["charsum"], {"charsum": sec})
    _, rs = rows(text)
    assert code == 0 and len(rs) == 12
    assert [r["flags"] for r in rs].count("skipped:DegenerateInput") == 1


@pytest.mark.parametrize("sec", [
    {"op": "foo"},
    {"op": "gauss_sum", "params": {"q": 7, "chi": 1}},
    {"op": "gauss_sum", "params": {"q": 7, "chi": 1, "lam": 1, "extra": 2}},
    {"op": "gauss_sum", "params": {"q": 7, "chi": 1}, "sweep": {"lam": []}},
    {"op": "gauss_sum", "params": {"q": 12, "chi": 1, "lam": 1}},
])
def test_charsum_config_errors(tmp_path, sec):
    assert run(tmp_path, ["charsum"], {"charsum": sec})[0] == 2


def test_console_script(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"charsum": {"op": "gauss_sum", "params": {"q": 7, "chi": 3, "lam": 1}}}))
    res = subprocess.run([sys.executable, "-m", "mhcount.cli", "charsum", "--config", str(p)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("# schema=charsum/v1\n")
    res = subprocess.run([sys.executable, "-m", "mhcount.cli", "charsum", "--config", str(tmp_path / "none.json")],
                         capture_output=True, text=True)
    assert res.returncode == 2 and "config error" in res.stderr
