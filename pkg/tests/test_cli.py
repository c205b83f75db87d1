import csv
import io
import json
import math

import numpy as np
import pytest
from click.testing import CliRunner
from hypothesis import given, settings, strategies as st

from rscodes.cli import COMMANDS, RunConfig, arq_efficiency, coerce, main, parse_grid, run, sweep
from rscodes.errors import ConfigError
from rscodes.rng import stream


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# RNG test vector (documented in README)
def test_rng_vector():
    assert [hex(x) for x in stream(0).bit_generator.random_raw(3)] == [
        "0xa30febcfd9c2825f", "0x4510bdf882d9d721", "0xa7d3da94ecde8b8"]
    assert [hex(x) for x in stream(42, 1).bit_generator.random_raw(3)] == [
        "0xcb22fdfba353293d", "0x3ef72585730c363e", "0x67887bf5eb87e2b6"]


def test_rng_chunk_zero_matches_plain_seed():
    # SeedSequence([s, 0]) and SeedSequence(s) hash to the same state
    assert stream(42).random(3).tolist() == np.random.default_rng(42).random(3).tolist()


# gf table
def test_gf_table_csv():
    r = invoke("gf", "table", "--m", "3", "--poly", "1+X+X³")
    assert r.exit_code == 0
    t = rows(r.output)
    assert [x["tuple"] for x in t] == ["010", "001", "110", "011", "111", "101", "100"]
    assert [x["polynomial"] for x in t] == ["X", "X^2", "1+X", "X+X^2", "1+X+X^2", "1+X^2", "1"]
    assert [x["inverse"] for x in t] == ["a^6", "a^5", "a^4", "a^3", "a^2", "a^1", "1"]


def test_gf_table_prime():
    t = rows(invoke("gf", "table", "--p", "7").output)
    assert [int(x["label"]) for x in t] == [3, 2, 6, 4, 5, 1]


# determinism
@pytest.mark.parametrize("args", [
    ("sim", "aloha", "--slots", "20000"),
    ("sim", "titlebaum", "--M", "8", "--T", "7", "--L", "2", "--trials", "3000"),
    ("sim", "wiretap", "--trials", "3000"),
    ("sim", "far-frr", "--trials", "300", "--format", "json"),
    ("defects", "sweep", "--matcher", "two", "--u", "3", "--trials", "100"),
    ("eval", "middleton", "--count", "10000", "--format", "json"),
])
def test_byte_identical_replay(args):
    a, b = invoke(*args, "--seed", "7"), invoke(*args, "--seed", "7")
    assert a.exit_code == 0 and a.output == b.output
    c = invoke(*args, "--seed", "8")
    assert c.output != a.output


def test_large_seed_accepted():
    assert invoke("sim", "aloha", "--slots", "10", "--seed", str(2**64 - 1)).exit_code == 0
    assert invoke("sim", "aloha", "--slots", "10", "--seed", str(2**64)).exit_code == 2
    assert invoke("sim", "aloha", "--slots", "10", "--seed", "-1").exit_code == 2


def test_json_document_and_override(tmp_path):
    doc = tmp_path / "cfg.json"
    doc.write_text(json.dumps({"T": 10, "p": 0.1, "slots": 5000}))
    a = invoke("sim", "aloha", "--json", str(doc), "--format", "json")
    b = invoke("sim", "aloha", "--T", "10", "--p", "0.1", "--slots", "5000", "--format", "json")
    assert a.exit_code == 0 and a.output == b.output
    c = json.loads(invoke("sim", "aloha", "--json", str(doc), "--p", "0.2", "--format", "json").output)
    assert c["params"]["p"] == 0.2 and c["params"]["slots"] == 5000


def test_out_file(tmp_path):
    out = tmp_path / "r.csv"
    r = invoke("gf", "table", "--m", "2", "--out", str(out))
    assert r.exit_code == 0 and r.output == ""
    assert out.read_text().splitlines()[0] == "power,label,inverse,polynomial,tuple"


def test_report_fields():
    rep = json.loads(invoke("sim", "aloha", "--slots", "1000", "--seed", "3", "--format", "json").output)
    assert rep["name"] == "sim_aloha" and rep["seed"] == 3
    m = rep["metrics"]["eta"]
    assert m["trials"] == 1000 and m["stderr"] == pytest.approx(math.sqrt(m["value"] * (1 - m["value"]) / 1000))
    assert "wall_time" not in rep


# exit codes
@pytest.mark.parametrize("args", [
    ("sim", "aloha", "--bogus", "1"),
    ("sim", "aloha", "--T", "ten"),
    ("sim", "aloha", "--p", "1.5"),
    ("sim", "aloha", "--p", "0.1", "--G", "1"),
    ("gf", "table"),
    ("gf", "table", "--m", "3", "--poly", "1+X+X^2+X^3"),
    ("rs", "encode", "--q", "6", "--k", "2", "--info", "1,2"),
    ("rs", "encode", "--info", "1,2"),
    ("eval", "capacity", "--kind", "secrecy", "--p", "0.1"),
    ("eval", "capacity", "--kind", "nope"),
    ("sim", "aloha", "--sweep", "slots_x", "--grid", "1"),
    ("sim", "ber", "--sweep", "scheme", "--grid", "1"),
    ("sim", "aloha", "--grid", "1,2"),
    ("constrained", "odp", "--q", "2", "--G", "[[1,0],[1,0]]"),
    ("vault", "auth", "--record", "/nonexistent/rec.json", "--biometric", "1"),
    ("sim", "nope"),
])
def test_config_errors_exit_2(args):
    r = invoke(*args)
    assert r.exit_code == 2, r.output


@pytest.mark.parametrize("args", [
    ("rs", "decode", "--k", "3", "--received", "1,2,3,4,5,6,7"),
    ("packets", "decode", "--q", "8", "--k", "1", "--n", "3", "--received", "[[1,0],[2,5],[3,7]]"),
    ("constrained", "avoid", "--k", "3", "--kappa", "2", "--r", "1", "--A", "0,1,2,3,4", "--info", "5,6",
     "--allow-infeasible", "true"),
    ("defects", "write", "--matcher", "one", "--n", "4", "--info", "1,1,1", "--image", "S1 S1 . ."),
    ("constrained", "same-weight", "--k", "2", "--received", "[1,2,3,null,null,null,null]",
     "--erasures", "3,4,5,6"),
])
def test_runtime_errors_exit_3(args):
    r = invoke(*args)
    assert r.exit_code == 3, r.output
    assert "error:" in r.output


# sweeps
def test_empty_grid_is_empty_series():
    r = invoke("sim", "aloha", "--sweep", "G", "--grid", "")
    assert r.exit_code == 0 and r.output == "G\n"
    j = json.loads(invoke("sim", "aloha", "--sweep", "G", "--grid", "", "--format", "json").output)
    assert j["rows"] == [] and j["params"]["grid"] == []


def test_sweep_rows_match_single_runs():
    s = sweep(RunConfig("sim aloha", {"slots": 5000}, 4), "G", [0.5, 1.0])
    for row in s.rows:
        single = run(RunConfig("sim aloha", {"slots": 5000, "G": row["G"]}, 4))
        assert row["eta"] == single["eta"] and row["eta_stderr"] == single.metrics["eta"].stderr


def test_sweep_array_access_efficiency():
    # measured row efficiency against (T/Z)((Z-1)/Z)^(T-1) across T
    s = sweep(RunConfig("sim array-access", {"Z": 20, "n": 20, "N": 2, "blocks": 100}, 1), "T", [2, 6, 10])
    for row in s.rows:
        T = row["T"]
        assert row["eta_formula"] == pytest.approx((T / 20) * (19 / 20) ** (T - 1))
        assert abs(row["eta_rows"] - row["eta_formula"]) <= 4 * row["eta_rows_stderr"]


def test_sweep_titlebaum_bound():
    s = sweep(RunConfig("sim titlebaum", {"M": 16, "L": 8, "trials": 2000}, 2), "T", [4, 8, 12])
    for row in s.rows:
        assert row["pe"] <= row["pe_bound"] + 3 * row["pe_stderr"]
    assert [r["eta"] for r in s.rows] == sorted(r["eta"] for r in s.rows)


def test_parse_grid():
    assert parse_grid("") == [] and parse_grid("  ") == []
    assert parse_grid("1,2.5") == [1.0, 2.5]
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("1:3:3", "int") == [1, 2, 3]
    with pytest.raises(ConfigError):
        parse_grid("0.5", "int")
    with pytest.raises(ConfigError):
        parse_grid("a,b")


# validation
def test_schema_validation():
    with pytest.raises(ConfigError):
        RunConfig("sim aloha", {}, seed=-1)
    with pytest.raises(ConfigError):
        RunConfig("sim aloha", {}, format="xml")
    with pytest.raises(ConfigError):
        run(RunConfig("sim aloha", {"T": True}))
    with pytest.raises(ConfigError):
        run(RunConfig("rs encode", {"k": 3}))
    assert coerce("x", "ints", "[1, 2]") == coerce("x", "ints", "1,2") == [1, 2]
    assert coerce("x", "int", 3.0) == 3
    with pytest.raises(ConfigError):
        coerce("x", "int", 3.5)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(COMMANDS)), st.text(min_size=1, max_size=8).filter(lambda s: s.isidentifier()))
def test_unknown_keys_always_rejected(path, key):
    if key in COMMANDS[path].schema:
        return
    with pytest.raises(ConfigError):
        run(RunConfig(path, {key: 1}))


# individual commands
def test_rs_roundtrip():
    c = [int(x["symbol"]) for x in rows(invoke("rs", "encode", "--k", "3", "--info", "1,2,3").output)]
    c[2] ^= 5
    d = rows(invoke("rs", "decode", "--k", "3", "--received", ",".join(map(str, c))).output)
    assert [int(x["info"]) for x in d[:3]] == [1, 2, 3]
    assert [int(x["error"]) for x in d] == [0, 0, 5, 0, 0, 0, 0]


def test_packets_roundtrip():
    enc = rows(invoke("packets", "encode", "--q", "8", "--k", "2", "--n", "5", "--packets", "[[1,2,3],[4,5,6]]").output)
    R = [list(map(int, x["symbols"].split())) for x in enc]
    R[3] = [7, 7, 7]
    dec = rows(invoke("packets", "decode", "--q", "8", "--k", "2", "--n", "5", "--received", json.dumps(R)).output)
    assert [x["symbols"] for x in dec] == ["1 2 3", "4 5 6"]


def test_vault_cli_roundtrip(tmp_path):
    rec = tmp_path / "rec.json"
    assert invoke("vault", "enroll", "--scheme", "jw", "--biometric", "6,0,2,7,1,1,5", "--seed", "2",
                  "--out", str(rec)).exit_code == 0
    ok = rows(invoke("vault", "auth", "--record", str(rec), "--biometric", "6,3,2,7,1,1,4").output)
    assert ok == [{"accepted": "1", "secret": " ".join(map(str, stream(2).integers(0, 8, 3)))}]
    bad = rows(invoke("vault", "auth", "--record", str(rec), "--biometric", "6,3,3,3,1,1,5").output)
    assert bad == [{"accepted": "0", "secret": ""}]


def test_vault_js_cli():
    rec = invoke("vault", "enroll", "--scheme", "js", "--q", "16", "--biometric", "1,3,5,7,9,11").output
    ok = rows(invoke("vault", "auth", "--q", "16", "--record", rec, "--biometric", "2,3,5,7,9,11").output)
    assert ok[0]["accepted"] == "1"


def test_eval_capacity_kinds():
    j = lambda *a: json.loads(invoke("eval", "capacity", *a, "--format", "json").output)["metrics"]  # noqa: E731
    assert j("--kind", "arq", "--p", "0.1", "--R", "0.5")["eta"]["value"] == pytest.approx(0.45)
    assert j("--kind", "aloha", "--T", "10", "--p", "0.1")["eta"]["value"] == pytest.approx(0.38742, abs=1e-5)
    assert j("--kind", "wom", "--p", "0.5")["total_rate"]["value"] == pytest.approx(1.5)
    assert j("--kind", "coop", "--k", "1", "--capacities", "0.99,0.36")["C_coop"]["value"] == pytest.approx(0.60, abs=0.01)
    assert arq_efficiency(0, 1) == 1.0


def test_constrained_avoid_cli():
    t = rows(invoke("constrained", "avoid", "--k", "3", "--first-row", "5", "--kappa", "2", "--r", "1",
                    "--A", "7", "--info", "0,3").output)
    assert [x["control"] for x in t] == ["2", "3", "5", "6"]
    assert [x["codeword"] for x in t if x["chosen"] == "1"] == ["0 3 2 1 1 0 2"]


def test_rll_scan_cli():
    m = {x["metric"]: float(x["value"]) for x in rows(invoke("constrained", "rll", "--count", "2000").output)}
    assert m["violations"] == 0 and m["min_interior_run"] >= 2


def test_defects_write_read_cli():
    w = rows(invoke("defects", "write", "--matcher", "one", "--n", "5", "--info", "1,0,1,1",
                    "--image", ". S0 . . .").output)
    stored = [x["stored"] for x in w]
    assert stored[1] == "0"
    r = rows(invoke("defects", "read", "--matcher", "one", "--n", "5", "--stored", ",".join(stored)).output)
    assert [x["info"] for x in r] == ["1", "0", "1", "1"]


def test_metric_columns_repeated_on_rows():
    t = rows(invoke("eval", "capacity", "--kind", "coop", "--k", "1", "--capacities", "0.99,0.36").output)
    assert list(t[0]) == ["hop", "length", "C_df", "C_coop"] and len(t) == 2
