import csv
import io
import json
from fractions import Fraction

import pytest

from oracles import mu_oracle

from qwalk.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    return json.loads(out)


def csv_rows(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


# -- envelope and determinism -----------------------------------------------------


def test_json_envelope_shape(capsys):
    doc = run_json(capsys, "measure", "--n", "2", "--event", "0,2")
    assert doc["command"] == "measure"
    assert doc["params"] == {"n": 2, "event": [0, 2], "strategy": "rank2"}
    assert doc["result"]["mu"]["num"] == 0
    assert doc["result"]["mu"]["exact"] == "0/4"
    assert doc["result"]["mu"]["decimal"] == 0.0


def test_byte_identical_reruns(capsys):
    invocations = [
        ("measure", "--n", "3", "--event", "1,2,5"),
        ("matrix", "--n", "2", "--format", "csv"),
        ("preclusion", "--n", "3", "--format", "json"),
        ("limit", "--event", "at-most-ones:1", "--n-max", "16", "--format", "csv"),
        ("example8", "--i-max", "4", "--format", "json"),
        ("variation", "--n-max", "6", "--format", "csv"),
        ("interference", "--n", "3", "--format", "csv"),
        ("quadratic", "--builtin", "example13", "--check-measure"),
        ("integral", "--n", "3", "--variable", "changes"),
        ("eigen", "--n", "3"),
    ]
    for argv in invocations:
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second, f"non-deterministic output for {argv}"


def test_metadata_goes_to_stderr(capsys):
    code, out, err = run_cli(capsys, "measure", "--n", "2", "--event", "0")
    assert code == 0
    assert "elapsed" in err
    assert "elapsed" not in out


# -- individual subcommands ----------------------------------------------------------


def test_matrix_n1_published(capsys):
    doc = run_json(capsys, "matrix", "--n", "1")
    assert doc["result"]["log2_den"] == 1
    assert doc["result"]["entries"] == [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]


def test_matrix_csv_round_trip(capsys):
    code, out, _ = run_cli(capsys, "matrix", "--n", "3", "--format", "csv")
    assert code == 0
    assert "# denominator: 2**3" in out
    rows = csv_rows(out)
    assert len(rows) == 64
    for row in rows:
        j, k = int(row["j"]), int(row["k"])
        want = mu_oracle(3, [j, k]) - mu_oracle(3, [j]) - mu_oracle(3, [k])
        # off-diagonal entries are half the interference term; recompute sign
        sign = int(row["re"])
        assert int(row["im"]) == 0
        if j == k:
            assert sign == 1
        else:
            assert Fraction(sign, 8) == want / 2


def test_measure_strategies_agree(capsys):
    values = set()
    for strategy in ("dense", "pairwise", "rank2"):
        doc = run_json(
            capsys, "measure", "--n", "4", "--event", "0,2,4,10", "--strategy", strategy
        )
        values.add((doc["result"]["mu"]["num"], doc["result"]["mu"]["log2_den"]))
    assert values == {(0, 0)}


def test_interference_table(capsys):
    doc = run_json(capsys, "interference", "--n", "2")
    table = {(row["i"], row["j"]): (row["num"], row["class"]) for row in doc["result"]}
    assert table[(0, 2)] == (-1, "destructive")
    assert table[(1, 3)] == (1, "constructive")
    assert all(
        entry == (0, "none")
        for pair, entry in table.items()
        if pair not in ((0, 2), (1, 3))
    )


def test_preclusion_table(capsys):
    doc = run_json(capsys, "preclusion", "--n", "3")
    events = [tuple(e["indices"]) for e in doc["result"]]
    assert events[:6] == [(0, 2), (0, 4), (0, 6), (1, 5), (3, 5), (5, 7)]
    assert len(events) == 15
    code, out, _ = run_cli(capsys, "preclusion", "--n", "3", "--format", "csv")
    rows = csv_rows(out)
    assert [tuple(map(int, r["indices"].split())) for r in rows] == events


def test_limit_csv_round_trip(capsys):
    from qwalk.cylinder import complement_of_constant_closed_form

    code, out, _ = run_cli(
        capsys, "limit", "--event", "complement-constant", "--n-max", "12", "--format", "csv"
    )
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 12
    for row in rows:
        n = int(row["n"])
        parsed = Fraction(int(row["num"]), 1 << int(row["log2_den"]))
        if n <= 8:
            members = [j for j in range(1 << n) if j != 0]
            assert parsed == mu_oracle(n, members)
        assert parsed == complement_of_constant_closed_form(n).as_fraction()


def test_limit_verdict_fields(capsys):
    doc = run_json(
        capsys,
        "limit", "--event", "complement-constant", "--n-max", "48", "--tol", "1e-6",
    )
    assert doc["result"]["verdict"] == "converged"
    assert abs(doc["result"]["estimate"] - 1.0) <= 1e-6
    assert doc["result"]["provenance"] == "numerical-verdict"


def test_limit_return_to_zero(capsys):
    doc = run_json(
        capsys, "limit", "--event", "return-to-zero", "--n-max", "48", "--tol", "1e-6"
    )
    assert doc["result"]["verdict"] == "converged"
    assert abs(doc["result"]["estimate"] - 1.0) <= 1e-6


def test_variation_series(capsys):
    doc = run_json(capsys, "variation", "--n-max", "10")
    assert [row["bound"] for row in doc["result"]] == [1 << n for n in range(1, 11)]


def test_example8_provenance(capsys):
    doc = run_json(capsys, "example8", "--i-max", "6")
    terms = doc["result"]["terms"]
    assert [t["provenance"] for t in terms] == ["direct"] * 4 + ["extrapolated"] * 2
    assert terms[0]["num"] == 9 and terms[0]["den"] == 8
    assert doc["result"]["verdict"] == "diverged"


def test_quadratic_builtins(capsys):
    doc = run_json(capsys, "quadratic", "--builtin", "example12", "--check-measure")
    assert doc["result"]["quadratic_algebra"] is True
    assert doc["result"]["q_measure"] is True
    doc = run_json(capsys, "quadratic", "--builtin", "example13", "--check-measure")
    assert doc["result"]["quadratic_algebra"] is True
    assert doc["result"]["q_measure"] is True


def test_quadratic_custom_file(tmp_path, capsys):
    path = tmp_path / "system.txt"
    path.write_text("4\n\n0,1\n2,3\n0,1,2,3\n")
    doc = run_json(capsys, "quadratic", "--file", str(path))
    assert doc["result"]["quadratic_algebra"] is True
    broken = tmp_path / "broken.txt"
    broken.write_text("4\n\n0\n1\n2\n0,1\n0,2\n1,2\n0,1,2,3\n")
    doc = run_json(capsys, "quadratic", "--file", str(broken))
    assert doc["result"]["quadratic_algebra"] is False
    assert doc["result"]["counterexample"] == [[0], [1], [2]]


def test_integral_custom_file(tmp_path, capsys):
    path = tmp_path / "values.txt"
    path.write_text("0\n1/2\n-2\n3\n")
    docs = [
        run_json(capsys, "integral", "--n", "2", "--variable", str(path), "--strategy", s)
        for s in ("def", "trace", "eigen")
    ]
    results = {(d["result"]["integral"]["num"], d["result"]["integral"]["den"]) for d in docs}
    assert len(results) == 1


def test_eigen_output(capsys):
    doc = run_json(capsys, "eigen", "--n", "2")
    assert doc["result"]["verified_exact"] is True
    assert doc["result"]["even_vector"] == [[1, 0], [0, 0], [-1, 0], [0, 0]]
    assert doc["result"]["odd_vector"][1] == [0, 1]


# -- error paths ------------------------------------------------------------------------


def test_usage_error_bad_event(capsys):
    code, _, err = run_cli(capsys, "measure", "--n", "2", "--event", "0,x")
    assert code == 2 and "usage error" in err


def test_usage_error_unknown_limit_event(capsys):
    code, _, err = run_cli(capsys, "limit", "--event", "nope", "--n-max", "10")
    assert code == 2 and "unknown limit event" in err


def test_usage_error_quadratic_flags(capsys):
    code, _, err = run_cli(capsys, "quadratic")
    assert code == 2
    code, _, err = run_cli(
        capsys, "quadratic", "--builtin", "example12", "--file", "x"
    )
    assert code == 2


def test_usage_error_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2


def test_resource_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "preclusion", "--n", "7")
    assert code == 3 and "resource bound" in err
    code, _, err = run_cli(capsys, "matrix", "--n", "11")
    assert code == 3
    code, _, err = run_cli(capsys, "matrix", "--n", "13", "--force")
    assert code == 3  # beyond even the hard cap


def test_force_lifts_soft_cap(capsys):
    code, out, err = run_cli(capsys, "matrix", "--n", "9", "--format", "json", "--force")
    assert code == 0
    assert "estimated cost" in err
    doc = json.loads(out)
    assert len(doc["result"]["entries"]) == 512


def test_verify_smoke_subset(capsys, monkeypatch):
    # run the real verify wiring against a trimmed check list to stay fast
    import qwalk.verify as verify_module

    trimmed = [c for c in verify_module.CHECKS if c[0] in ("matrix-n1", "measure-table-n2")]
    monkeypatch.setattr(verify_module, "CHECKS", trimmed)
    code, out, _ = run_cli(capsys, "verify")
    assert code == 0
    assert "PASS matrix-n1" in out and "2/2 checks passed" in out


def test_verify_reports_failures(capsys, monkeypatch):
    import qwalk.verify as verify_module

    def broken():
        raise verify_module.CheckFailure("deliberately broken")

    monkeypatch.setattr(verify_module, "CHECKS", [("broken-check", broken)])
    code, out, _ = run_cli(capsys, "verify")
    assert code == 1
    assert "FAIL broken-check: deliberately broken" in out
