import csv
import io
import json
import math

import pytest

from enhorder.cli import bundled_config, dumps, main, parse_dist

SMALL_CONFIG = {
    "seed": 5,
    "grid": {"points": 64},
    "scenarios": [
        {"theorem_id": "max_lr", "trials": 3},
        {"theorem_id": "max_st_shape",
         "params": {"alphas": [0.5, 1.5], "alphas_star": [1, 1.5], "lambda": 1, "beta": 1}},
    ],
    "scans": [{"theorem_id": "max_lr", "n_samples": 6, "relation": "none"}],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def small_config(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(SMALL_CONFIG), encoding="utf-8")
    return str(p)


# --- eval ---------------------------------------------------------------------

def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "enh:2,1,1", "--points", "1")
    assert code == 0
    rec = json.loads(out)
    assert rec["rows"][0]["value"] == pytest.approx(1 - math.exp(-3), rel=1e-15)


def test_eval_csv_lf_and_17_digits(capsys):
    code, out, _ = run(capsys, "eval", "enh:2,1,1", "--points", "1,2", "--format", "csv")
    assert code == 0
    assert "\r" not in out
    lines = out.splitlines()
    assert lines[0] == "x,value"
    assert lines[1] == "1,0.95021293163213605"


def test_eval_quantile_and_shape(capsys):
    code, out, _ = run(capsys, "eval", "exp:1", "--what", "quantile", "--points", "0.5")
    assert json.loads(out)["rows"][0]["value"] == pytest.approx(math.log(2), rel=1e-15)
    code, out, _ = run(capsys, "eval", "enh:2,1,0.5", "--what", "shape")
    assert code == 0 and json.loads(out)["shape"] == "Bathtub"


def test_eval_default_points_follow_grid(capsys):
    code, out, _ = run(capsys, "eval", "enh:1,1,1", "--grid-points", "16", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 17


def test_eval_invalid_alpha(capsys):
    code, out, err = run(capsys, "eval", "enh:-1,1,1", "--points", "1")
    assert code == 2 and out == ""
    assert "alpha" in err


@pytest.mark.parametrize("spec, field", [
    ('{"family":"enh","alpha":1}', "lambda"),
    ('{"family":"es","alpha":1,"lambda":-2}', "lambda"),
    ('{"family":"max","components":[{"family":"enh","alpha":1,"lambda":1}]}', "beta"),
    ("enh:1,1", "enh"),
    ("{not json", "dist"),
])
def test_eval_reports_offending_field(capsys, spec, field):
    code, _, err = run(capsys, "eval", spec, "--points", "1")
    assert code == 2
    assert field in err


def test_eval_negative_x(capsys):
    code, _, err = run(capsys, "eval", "exp:1", "--points", "-1")
    assert code == 2 and "x" in err


def test_out_file(capsys, tmp_path):
    path = tmp_path / "o.csv"
    code, out, _ = run(capsys, "eval", "exp:1", "--points", "1", "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_bytes().startswith(b"x,value\n")


# --- shorthand parsing -------------------------------------------------------------

def test_parse_dist_shorthand_matches_json():
    a = parse_dist("min(enh:0.5,1,2;es:2,1.5,0.7|clayton:2)")
    b = parse_dist(json.dumps({
        "family": "min",
        "components": [{"family": "enh", "alpha": 0.5, "lambda": 1, "beta": 2},
                       {"family": "es", "alpha": 2, "lambda": 1.5, "baseline": {"kind": "nh", "alpha": 0.7}}],
        "copula": {"family": "clayton", "theta": 2}}))
    for x in (0.1, 1.0, 3.0):
        assert float(a.sf(x)) == pytest.approx(float(b.sf(x)), rel=1e-15)


def test_parse_dist_families():
    assert float(parse_dist("nh:2,1").cdf(1.0)) == pytest.approx(1 - math.exp(-3), rel=1e-15)
    assert float(parse_dist("ge:1,2").cdf(math.log(2))) == pytest.approx(0.25, rel=1e-15)
    assert float(parse_dist("max(exp:1;exp:1)").cdf(math.log(2))) == pytest.approx(0.25, rel=1e-15)


# --- check-order ---------------------------------------------------------------------

def test_check_order_exit_codes(capsys):
    code, out, _ = run(capsys, "check-order", "st", "exp:2", "exp:1")
    rec = json.loads(out)
    assert code == 0 and rec["holds"] is True
    assert {"holds", "worst_margin", "witness", "grid"} <= set(rec)
    code, out, _ = run(capsys, "check-order", "st", "exp:1", "exp:2")
    rec = json.loads(out)
    assert code == 1 and rec["holds"] is False and rec["witness"] > 0


def test_check_order_grid_flags(capsys):
    code, out, _ = run(capsys, "check-order", "lr", "exp:2", "exp:1", "--grid-points", "32",
                       "--u-min", "0.01", "--u-max", "0.99")
    g = json.loads(out)["grid"]
    assert code == 0 and g == {"u_min": 0.01, "u_max": 0.99, "points": 32}


@pytest.mark.parametrize("argv, field", [
    (["check-order", "st", "exp:1", "exp:2", "--grid-points", "4"], "grid-points"),
    (["check-order", "st", "exp:1", "exp:2", "--u-min", "0.9", "--u-max", "0.1"], "u-min"),
])
def test_check_order_grid_errors(capsys, argv, field):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and field in err


def test_unknown_order_is_usage_error(capsys):
    # argparse rejects the choice itself and exits with the same usage code
    with pytest.raises(SystemExit) as exc:
        main(["check-order", "bogus", "exp:1", "exp:2"])
    assert exc.value.code == 2
    assert "bogus" in capsys.readouterr().err


# --- verify / scan -------------------------------------------------------------------------

def test_verify_small_config(capsys, small_config):
    code, out, _ = run(capsys, "verify", small_config)
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [r["kind"] for r in recs] == ["scenario", "scenario", "scan"]
    assert all(r["passed"] for r in recs[:2])
    assert recs[2]["n_violations"] > 0  # lr converse found, run still succeeds


def test_verify_is_deterministic(capsys, small_config):
    _, a, _ = run(capsys, "verify", small_config)
    _, b, _ = run(capsys, "verify", small_config)
    assert a == b


def test_verify_seed_override_changes_draws(capsys, small_config):
    _, a, _ = run(capsys, "verify", small_config)
    _, b, _ = run(capsys, "verify", small_config, "--seed", "6")
    assert a != b


def test_verify_csv_summary(capsys, small_config):
    code, out, _ = run(capsys, "verify", small_config, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 3
    assert rows[0]["passed"] == "true" and rows[2]["kind"] == "scan"


def test_verify_reports_failure_exit_1(capsys, tmp_path):
    # hypotheses missed by an explicit instance: the scenario cannot pass
    cfg = {"scenarios": [{"theorem_id": "max_st_scale",
                          "params": {"lambdas": [1, 3], "lambdas_star": [2, 3], "alpha": 1.5, "beta": 1}}]}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "verify", str(p))
    rec = json.loads(out)
    assert code == 1 and rec["hypotheses_ok"] is False


@pytest.mark.parametrize("cfg, field", [
    ({"scenarios": [{"theorem_id": "max_lr", "params": {"alpha": 1}}]}, "scenarios/0/params"),
    ({"scenarios": [{"theorem_id": "nope"}]}, "scenarios/0/theorem_id"),
    ({"seed": 1}, "config"),
    ({"scenarios": [], "extra": 1}, "config"),
])
def test_verify_schema_rejections(capsys, tmp_path, cfg, field):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    code, out, err = run(capsys, "verify", str(p))
    assert code == 2 and out == ""
    assert err.startswith("error: ") and field in err


def test_verify_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2 and "config" in err


def test_bundled_config_is_valid(capsys):
    from enhorder.cli import _validate, load_config

    cfg = load_config(bundled_config())
    _validate(cfg, None, "config")
    ids = {s["theorem_id"] for s in cfg["scenarios"]}
    from enhorder.verify import SCENARIOS

    assert ids == set(SCENARIOS)


def test_scan_command(capsys):
    code, out, _ = run(capsys, "scan", "max_lr", "--n-samples", "10", "--seed", "3")
    rec = json.loads(out)
    assert code == 0 and rec["n_violations"] > 0
    for v in rec["violations"]:
        assert sum(v["params"]["betas"]) < sum(v["params"]["betas_star"])


def test_scan_bad_range(capsys):
    code, _, err = run(capsys, "scan", "max_lr", "--range", "bogus=1,2")
    assert code == 2 and "bogus" in err
    code, _, err = run(capsys, "scan", "nope")
    assert code == 2 and "theorem_id" in err


# --- plotdata -----------------------------------------------------------------------------

def test_plotdata_hazard_exemplars(capsys):
    code, out, _ = run(capsys, "plotdata", "hazard-curves", "--grid-points", "16")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["series", "x_or_u", "value"]
    assert {r["series"] for r in rows} == {"increasing", "decreasing", "unimodal", "bathtub"}
    assert len(rows) == 4 * 16


def test_plotdata_ordering_curves(capsys):
    code, out, _ = run(capsys, "plotdata", "ordering-curves", "exp:2", "exp:1", "--grid-points", "16")
    rows = list(csv.DictReader(io.StringIO(out)))
    by = {}
    for r in rows:
        by.setdefault(r["series"], []).append((float(r["x_or_u"]), float(r["value"])))
    a, b = by["exp:2"], by["exp:1"]
    assert [x for x, _ in a] == [x for x, _ in b]
    assert all(va <= vb for (_, va), (_, vb) in zip(a, b))


def test_plotdata_lorenz_duplicate_names(capsys):
    code, out, _ = run(capsys, "plotdata", "lorenz-curves", "exp:1", "exp:1", "--grid-points", "8")
    series = {r["series"] for r in csv.DictReader(io.StringIO(out))}
    assert code == 0 and series == {"exp:1", "exp:1#2"}


def test_plotdata_ordering_needs_two(capsys):
    code, _, err = run(capsys, "plotdata", "ordering-curves", "exp:1")
    assert code == 2 and "dists" in err


def test_plotdata_json(capsys):
    code, out, _ = run(capsys, "plotdata", "lorenz-curves", "exp:1", "--grid-points", "8", "--format", "json")
    assert code == 0
    json.loads(out)


# --- serialisation -------------------------------------------------------------------------

def test_dumps_17_digits_and_nonfinite():
    assert dumps({"a": 0.1}) == '{"a":0.10000000000000001}'
    assert dumps({"a": math.inf, "b": math.nan}) == '{"a":null,"b":null}'


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
