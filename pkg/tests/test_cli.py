import io
import json

import pytest

from stacky_count.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main, parse_grid, parse_int_expr


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run("--json", *argv)
    assert code == EXIT_OK, text
    return json.loads(text)


def test_count_closed_and_brute():
    assert run("count", "--weights", "1,2", "--n", "1", "--q", "3") == (EXIT_OK, "72\n")
    d = run_json("count", "--weights", "1,2", "--n", "1", "--q", "3", "--method", "brute")
    assert d["value"] == "72" and d["tuple_count"] == "144" and d["wild"] is False
    assert isinstance(d["value"], str)


def test_count_symbolic_and_iso():
    code, text = run("count", "--weights", "1,1", "--n", "1", "--q", "q")
    assert code == EXIT_OK and "q**3" in text
    d = run_json("count", "--weights", "2,4", "--n", "1", "--q", "3", "--method", "iso-brute")
    assert d["value"] == "3888"
    d = run_json("count", "--weights", "1,2", "--n", "1", "--q", "3", "--method", "discriminant")
    assert d["value"] == "49"


def test_count_field_notation():
    assert run("count", "--weights", "1,1", "--n", "1", "--q", "2^2", "--method", "brute")[1] \
        == run("count", "--weights", "1,1", "--n", "1", "--q", "4")[1]


def test_count_csv():
    code, text = run("--csv", "count", "--weights", "1,2", "--n", "1", "--q", "3")
    assert code == EXIT_OK
    assert text.splitlines() == ["q,weights,n,method,value,tuple_count", '3,"1,2",1,closed,72,']


def test_usage_errors():
    assert run("count", "--weights", "1,0", "--n", "1", "--q", "3")[0] == EXIT_USAGE
    assert run("count", "--weights", "1,2", "--n", "1", "--q", "6")[0] == EXIT_USAGE
    assert run("count", "--weights", "1,2", "--n", "1")[0] == EXIT_USAGE
    assert run("--json", "--csv", "picard", "--weights", "1,1", "--n", "1")[0] == EXIT_USAGE
    assert run("bmanin", "--moduli", "nope", "--q", "3", "--B", "10")[0] == EXIT_USAGE
    assert run("zeta", "--table", "/nonexistent.json", "--q", "3")[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE
    assert run("--budget", "10", "count", "--weights", "1,2", "--n", "1", "--q", "3",
               "--method", "brute")[0] == EXIT_USAGE


def test_verify_default_grid():
    code, text = run("verify")
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "12 rows: 12 ok, 0 mismatch, 0 error"
    d = run_json("verify", "--methods", "iso")
    assert d["summary"] == {"total": 4, "ok": 4, "mismatch": 0, "error": 0}
    assert all("wall_time" not in r for r in d["records"])


def test_verify_wild_and_empty():
    d = run_json("verify", "--grid", "2:2,4:1")
    assert d["records"][0]["status"] == "error"
    assert "WildCharacteristic" in d["records"][0]["error"]
    assert run("verify", "--grid", "2:2,4:1")[0] == EXIT_OK
    assert run("verify", "--grid", "2:2,4:1", "--errors-fail")[0] == EXIT_MISMATCH
    code, text = run("verify", "--grid", "")
    assert code == EXIT_OK and text == "0 rows: 0 ok, 0 mismatch, 0 error\n"


def test_verify_budget_is_per_row():
    d = run_json("--budget", "100", "verify", "--grid", "2:1,1:1;3:1,2:1")
    assert [r["status"] for r in d["records"]] == ["ok", "error"]
    assert "BudgetExceeded" in d["records"][1]["error"]


def test_verify_timing_and_csv():
    d = run_json("verify", "--grid", "3:1,1:1", "--timing")
    assert "wall_time" in d["records"][0]
    code, text = run("--csv", "verify", "--grid", "3:1,1:1", "--methods", "weighted,iso")
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == "q,weights,n,method,closed,oracle,status" and len(lines) == 3


def test_byte_stability():
    argv = ("--json", "verify", "--grid", "3:1,2:1;5:1,1:1", "--methods", "weighted,iso")
    a = run(*argv)
    assert run(*argv) == a
    assert run("--workers", "3", *argv) == a
    b = run("count", "--weights", "1,1,1", "--n", "1", "--q", "5", "--method", "brute")
    assert run("--workers", "4", "count", "--weights", "1,1,1", "--n", "1", "--q", "5",
               "--method", "brute") == b


def test_cohomology_genus0():
    d = run_json("cohomology", "--genus", "0", "--N", "2", "--n", "1")
    assert d["dimension"] == 5
    degs = {g["i"]: [(c["kind"], c["j"], c["mult"]) for c in g["classes"]] for g in d["groups"]}
    assert degs == {0: [("tate", 0, 1)], 2: [("tate", 1, 1)], 5: [("tate", 3, 1)],
                    7: [("tate", 4, 1)]}
    code, text = run("cohomology", "--N", "1", "--n", "1")
    assert code == EXIT_OK and "H^0" in text and "H^3" in text


def test_cohomology_pages_and_stable():
    d = run_json("cohomology", "--N", "1", "--n", "2", "--page", "e1")
    assert d["page"] == "e1" and d["entries"]
    code, text = run("cohomology", "--genus", "1", "--N", "1", "--n", "3", "--weights", "4,6")
    assert code == EXIT_OK and "outside stable range" in text
    assert run("cohomology", "--genus", "1", "--N", "1", "--n", "3", "--page", "e1")[0] == EXIT_USAGE


def test_zeta_roundtrip(tmp_path):
    d = run_json("cohomology", "--N", "2", "--n", "2")
    path = tmp_path / "t.json"
    path.write_text(json.dumps(d))
    z = run_json("zeta", "--table", str(path), "--q", "5")
    c = run_json("count", "--weights", "1,1,1", "--n", "2", "--q", "5")
    assert z["value"] == c["value"]
    zs = run_json("zeta", "--table", str(path), "--q", "q")
    cs = run_json("count", "--weights", "1,1,1", "--n", "2", "--q", "q")
    assert zs["value"] == cs["value"]


def test_zeta_genus1(tmp_path):
    d = run_json("cohomology", "--genus", "1", "--N", "1", "--n", "3", "--weights", "4,6")
    path = tmp_path / "t.json"
    path.write_text(json.dumps(d))
    assert run("zeta", "--table", str(path), "--q", "5")[0] == EXIT_USAGE
    z = run_json("zeta", "--table", str(path), "--q", "5", "--lpoly", "1,3,5")
    assert int(z["stable"]) + int(z["tail"]) == int(z["value"])


def test_chow():
    d = run_json("chow", "--weights", "1,2", "--extra", "2")
    assert d["poincare"] == "1 + t^2"
    assert d["pushforward"][0] == {"theta^0": "1/1"}
    d = run_json("chow", "--weights", "1,1", "--base", "jacobian:1", "--n", "2")
    assert d["relation"]["degree"] == 4
    # rank-4 bundle: P^3 fibres over a genus-1 Jacobian
    assert d["poincare"] == "1 + 2t + 2t^2 + 2t^3 + 2t^4 + 2t^5 + 2t^6 + 2t^7 + t^8"
    assert run("chow", "--weights", "1,1", "--base", "jacobian:1")[0] == EXIT_USAGE
    assert run("chow", "--weights", "1,1", "--base", "torus")[0] == EXIT_USAGE


def test_bmanin_and_picard():
    assert run("bmanin", "--moduli", "gamma1-2", "--q", "3", "--B", "531441") == (EXIT_OK, "3888\n")
    d = run_json("bmanin", "--moduli", "gamma1-2", "--q", "5", "--B", "5^24", "--closed-form")
    assert d["value"] == "2343900000" == d["closed_form"]
    assert run("picard", "--weights", "4,6", "--n", "2") == (EXIT_OK, "Z/20\n")
    d = run_json("picard", "--weights", "1,1,1", "--n", "2")
    assert d["group"] == "Z" and d["order"] is None


def test_parsers():
    assert parse_int_expr("5^24") == 5**24 == parse_int_expr("5**24")
    assert parse_grid("3:1,2:1; 5:1,1:2", ["weighted"]) == [
        (3, (1, 2), 1, "weighted"), (5, (1, 1), 2, "weighted")]
