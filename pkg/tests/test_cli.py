import io
import json
import subprocess
import sys

import pytest

from gcr.cli import main
from gcr.jobs import RequestError, parse_request, run, serialize_request
from gcr.selftest import default_cases, run_cases


def run_cli(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin_text), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


LIMIT_JOB = {"command": "limit", "field": {"kind": "prime_field", "p": 2},
             "lambda": [1, -1], "matrix": [["1", "1"], ["0", "1"]]}


def test_parse_valid_limit():
    req = parse_request(json.dumps(LIMIT_JOB))
    assert req.command == "limit"
    assert req.field.p == 2
    assert req.exponents == (1, -1)


def test_parse_nonprime_modulus():
    doc = dict(LIMIT_JOB, field={"kind": "prime_field", "p": 4})
    with pytest.raises(RequestError) as exc:
        parse_request(json.dumps(doc))
    assert "not prime" in str(exc.value)
    assert exc.value.path == "$.field.p"


def test_parse_noninvertible_generator():
    doc = {"command": "check", "field": {"kind": "prime_field", "p": 2},
           "matrices": [[["1", "0"], ["0", "0"]]]}
    with pytest.raises(RequestError) as exc:
        parse_request(json.dumps(doc))
    assert "not invertible" in str(exc.value)


def test_parse_jagged_matrix():
    doc = dict(LIMIT_JOB, matrix=[["1", "1"], ["0"]])
    with pytest.raises(RequestError) as exc:
        parse_request(json.dumps(doc))
    assert "jagged" in str(exc.value)
    assert "$.matrix[1]" in str(exc.value)


def test_parse_unknown_key():
    doc = dict(LIMIT_JOB, extra=1)
    with pytest.raises(RequestError):
        parse_request(json.dumps(doc))


def test_parse_bad_json():
    with pytest.raises(RequestError):
        parse_request("{not json")


def test_round_trip():
    for doc in (
            LIMIT_JOB,
            {"command": "check", "field": {"kind": "rationals"},
             "matrices": [[["1/2", "0"], ["0", "3"]]]},
            {"command": "optimize", "weights": [[2, 0], [0, 2]]},
    ):
        req = parse_request(json.dumps(doc))
        again = parse_request(json.dumps(serialize_request(req)))
        assert again == req


def test_run_limit_job():
    report = run(parse_request(json.dumps(LIMIT_JOB)))
    assert report["exists"] is True
    assert report["limit"] == [["1", "0"], ["0", "1"]]


def test_run_limit_absent():
    doc = dict(LIMIT_JOB, matrix=[["1", "0"], ["1", "1"]])
    report = run(parse_request(json.dumps(doc)))
    assert report["exists"] is False


def test_run_optimize_job():
    doc = {"command": "optimize", "weights": [[2, 0], [0, 2]]}
    report = run(parse_request(json.dumps(doc)))
    assert report["lambda_opt"] == [1, 1]
    assert report["value_sq"] == "2"
    assert report["mu"] == "2"


def test_run_check_adjoint_corpus():
    # the finite group generated by the adjoint generators over F_2 is
    # completely reducible (see the self-test corpus); the report carries a
    # machine-checkable complement certificate
    from gcr.jobs import fmt_matrix
    from gcr.selftest import adjoint_sl2_tuple
    h = adjoint_sl2_tuple(2)
    doc = {"command": "check", "field": {"kind": "prime_field", "p": 2},
           "matrices": [fmt_matrix(c) for c in h]}
    report = run(parse_request(json.dumps(doc)))
    assert report["verdict"] == "completely reducible"
    assert report["complements"][0] is not None


def test_cli_determinism():
    code1, out1, _ = run_cli(["limit"], json.dumps(LIMIT_JOB))
    code2, out2, _ = run_cli(["limit"], json.dumps(LIMIT_JOB))
    assert code1 == code2 == 0
    strip = lambda s: "\n".join(l for l in s.splitlines() if "elapsed_ms" not in l)
    assert strip(out1) == strip(out2)


def test_cli_threads_flag_does_not_change_output():
    _, out1, _ = run_cli(["limit", "--threads", "1"], json.dumps(LIMIT_JOB))
    _, out4, _ = run_cli(["limit", "--threads", "4"], json.dumps(LIMIT_JOB))
    strip = lambda s: "\n".join(l for l in s.splitlines() if "elapsed_ms" not in l)
    assert strip(out1) == strip(out4)


def test_cli_invalid_input_exit_1():
    code, _, err = run_cli(["limit"], "{not json")
    assert code == 1 and "error" in err

    doc = dict(LIMIT_JOB, field={"kind": "prime_field", "p": 4})
    code, _, err = run_cli(["limit"], json.dumps(doc))
    assert code == 1 and "not prime" in err


def test_cli_command_mismatch():
    code, _, err = run_cli(["check"], json.dumps(LIMIT_JOB))
    assert code == 1 and "does not match" in err


def test_cli_budget_exceeded_exit_2():
    doc = {"command": "optimize", "weights": [[2, 0], [0, 2]]}
    code, _, err = run_cli(["optimize", "--budget", "0"], json.dumps(doc))
    assert code == 2 and "budget" in err.lower()


def test_cli_selftest_fresh_build_passes():
    code, out, _ = run_cli(["selftest"])
    assert code == 0
    report = json.loads(out)
    assert report["ok"] is True and report["failed"] == 0


def test_cli_selftest_budget_zero_exit_2():
    code, _, err = run_cli(["selftest", "--budget", "0"])
    assert code == 2 and "budget" in err.lower()


def test_selftest_perturbed_expectation_named():
    cases = default_cases()
    name, thunk, expected = cases[0]
    perturbed = [(name, thunk, "wrong-value")] + cases[1:]
    report = run_cases(perturbed)
    assert not report["ok"]
    bad = [c for c in report["cases"] if not c["ok"]]
    assert [c["name"] for c in bad] == [name]
    assert bad[0]["expected"] == "wrong-value"
    assert bad[0]["actual"] == expected


def test_run_limit_tuple_job():
    doc = {"command": "limit", "field": {"kind": "prime_field", "p": 5},
           "lambda": [1, 0],
           "matrices": [[["1", "1"], ["0", "1"]], [["2", "0"], ["0", "3"]]]}
    report = run(parse_request(json.dumps(doc)))
    assert report["exists"] is True
    assert report["limits"] == [[["1", "0"], ["0", "1"]],
                                [["2", "0"], ["0", "3"]]]


def test_run_semisimplify_certificate():
    doc = {"command": "semisimplify", "field": {"kind": "rationals"},
           "matrices": [[["1", "1"], ["0", "1"]]]}
    report = run(parse_request(json.dumps(doc)))
    assert report["limits"] == [[["1", "0"], ["0", "1"]]]
    assert report["cocharacter"] == {"exponents": [1, 0], "conjugator": None}
    # certificate: the reported limit is fixed by the reported cocharacter
    from gcr.cochar import Cocharacter, limit_conj
    from gcr.linalg import QQ, Matrix
    lam = Cocharacter(tuple(report["cocharacter"]["exponents"]))
    lim = Matrix.make(QQ, report["limits"][0])
    assert limit_conj(lam, lim) == lim


def test_check_witness_byte_determinism():
    doc = {"command": "check", "field": {"kind": "prime_field", "p": 2},
           "matrices": [[["1", "0", "1"], ["0", "1", "0"], ["0", "0", "1"]]]}
    strip = lambda s: "\n".join(l for l in s.splitlines() if "elapsed_ms" not in l)
    outs = set()
    for _ in range(3):
        _, out, _ = run_cli(["check"], json.dumps(doc))
        outs.add(strip(out))
    assert len(outs) == 1


def test_cli_witness_report():
    doc = {"command": "witness", "field": {"kind": "prime_field", "p": 2},
           "matrices": [[["1", "0", "1"], ["0", "1", "0"], ["0", "0", "1"]]]}
    code, out, _ = run_cli(["witness"], json.dumps(doc))
    assert code == 0
    report = json.loads(out)
    assert report["completely_reducible"] is False
    assert report["heuristic"] is True
    assert report["witness"]["step"] == 1
    assert report["destabilising_cocharacter"]["exponents"] == [1, 0, -1]


def test_cli_borel_tits_invalid_generator():
    doc = {"command": "borel-tits", "field": {"kind": "prime_field", "p": 3},
           "matrices": [[["2", "0"], ["0", "1"]]]}
    code, _, err = run_cli(["borel-tits"], json.dumps(doc))
    assert code == 1 and "unipotent" in err


def test_cli_orbit_dim():
    doc = {"command": "orbit-dim", "field": {"kind": "rationals"},
           "matrices": [[["1", "1"], ["0", "1"]]]}
    code, out, _ = run_cli(["orbit-dim"], json.dumps(doc))
    assert code == 0
    report = json.loads(out)
    assert report["orbit_dimension"] == 2
    assert report["commutant_dimension"] == 2


def test_cli_input_file(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(LIMIT_JOB))
    code, out, _ = run_cli(["limit", "--input", str(path)])
    assert code == 0
    assert json.loads(out)["exists"] is True

    code, _, err = run_cli(["limit", "--input", str(tmp_path / "missing.json")])
    assert code == 1


def test_module_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "gcr", "limit"],
        input=json.dumps(LIMIT_JOB), capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["exists"] is True
