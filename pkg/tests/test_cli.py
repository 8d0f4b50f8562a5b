import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
import yaml

from charclass.algebra import GradedPoly
from charclass.cli import decode_results, main
from charclass.fixtures import load_table


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run("--json", *argv)
    return code, json.loads(out)


def test_primes():
    code, out, _ = run("primes", "--k", "1", "--bound", "20")
    assert code == 0 and out == "3 5 7 11 13 17 19\n"


def test_primes_tsv_table():
    code, out, _ = run("primes", "--kmax", "3", "--bound", "20")
    assert out.splitlines() == ["k\tprimes", "1\t3 5 7 11 13 17 19", "2\t5 7 11 13 17 19", "3\t7 11 13 17 19"]


def test_splitting_obstruction_flag():
    code, out, _ = run("steenrod", "--prop63", "--table", "paper-verbatim-p3")
    assert code == 0
    assert out.rstrip("\n").endswith("Q(u_-4) = u_-4*p1*p2; restriction = 0; splits: false")


def test_lclass():
    code, out, _ = run("lclass", "--max-degree", "12")
    assert code == 0
    assert "1/3*p1" in out and "7/45*p2 - 1/45*p1^2" in out
    assert out.splitlines()[0] == "degree\tL"


def test_lclass_in_bso3():
    _, out, _ = run("lclass", "--max-degree", "8", "--bso", "3")
    assert out.splitlines()[1:] == ["4\t1/3*p1", "8\t-1/45*p1^2"]


def test_steenrod_compare_warns():
    code, out, _ = run("steenrod", "--compare")
    assert code == 0
    assert "P^1(p1)\tconfigured: p2 + p1^2\toracle: 2*p2 + 2*p1^2\tsign" in out
    assert "warning: table differs from the root oracle" in out


def test_steenrod_apply():
    _, out, _ = run("steenrod", "--table", "oracle-p3", "--apply", "p1", "--max-i", "2")
    assert "P^1 = 2*p2 + 2*p1^2" in out


def test_mmm_and_signature():
    _, out, _ = run("mmm", "--model", "cp1-bundle", "--class", "chi")
    assert out == "kappa_chi = 2\n"
    _, out, _ = run("mmm", "--model", "sphere-S3-rank4", "--genus", "L")
    assert out == "kappa_L = 0\n"
    _, out, _ = run("signature", "--model", "sphere-S3-rank4")
    assert out.splitlines() == ["L(TB) = 1 + 2/3*h + h^2", "signature = 0"]


def test_wu_and_pi0_and_invariants():
    _, out, _ = run("wu", "--p", "5", "--max-i", "3", "--kmax", "8")
    assert "1\t4" in out and "degrees: 2 4 6 8" in out
    _, out, _ = run("pi0", "--n", "4")
    assert out.splitlines()[1] == "4\tZ\tZ\tZ+Z\t[M] -> (sign(M) + chi(M))/2"
    _, out, _ = run("invariants", "--manifold", "T5")
    assert "kerv\t0" in out
    _, out, _ = run("invariants", "--betti", "1,0,1,0,1", "--signature", "1")
    assert "splitting\t2" in out


def test_genus_scaling_warns():
    code, doc = run_json("genus", "--scaling", "--m", "1", "--k", "1")
    assert code == 0 and doc["results"][0]["exponent"] == -1 and doc["warnings"]


def test_exit_codes():
    assert run("nonsense")[0] == 64
    assert run("primes", "--k", "x")[0] == 64
    assert run("primes", "--k", "1", "--unknown")[0] == 64
    assert run("wu", "--p", "2")[0] == 64
    assert run("primes")[0] == 64
    assert run("mmm", "--model", "cp1-bundle", "--class", "p1 +")[0] == 64
    assert run("steenrod", "--table", "no-such-table")[0] == 66
    assert run("mmm", "--model", "no-such-model", "--class", "p1")[0] == 66
    assert run("invariants", "--betti", "1,1,0,0,0,1")[0] == 2
    assert run("mmm", "--model", "cp1-bundle", "--class", "p2")[0] == 2  # not a BSO(2) class


def test_domain_error_object():
    code, doc = run_json("invariants", "--betti", "1,1,0,0,0,1")
    assert code == 2
    assert doc["error"]["type"] == "InvalidDescriptorError" and doc["error"]["exit"] == 2
    code, doc = run_json("steenrod", "--table", "nope")
    assert code == 66 and doc["error"]["kind"] == "fixture"


@pytest.mark.parametrize("argv", [
    ["lclass", "--max-degree", "12"],
    ["genus", "--kind", "Ltilde", "--m", "2", "--max-degree", "8"],
    ["genus", "--scaling", "--m", "2", "--k", "2"],
    ["mmm", "--model", "cp1-bundle", "--class", "chi^2"],
    ["signature", "--model", "cp1-bundle"],
    ["steenrod", "--prop63", "--compare"],
    ["wu", "--p", "3", "--max-i", "3"],
    ["primes", "--kmax", "4", "--bound", "50"],
    ["pi0", "--n", "1", "--n", "5"],
    ["invariants", "--manifold", "CP2"],
])
def test_json_schema_and_round_trip(argv):
    code, doc = run_json(*argv)
    assert code == 0
    assert list(doc) == ["command", "inputs", "results", "warnings"]
    objs = decode_results(doc["command"], doc["results"])
    assert len(objs) == len(doc["results"])
    for obj, raw in zip(objs, doc["results"]):
        payloads = [raw, *raw.values()]
        if hasattr(obj, "to_dict"):
            assert obj.to_dict() in payloads
        elif isinstance(obj, GradedPoly):
            assert str(obj) in payloads
        elif isinstance(obj, tuple):
            assert obj == (raw["k"], raw["primes"])
        elif isinstance(obj, Fraction):
            assert str(obj) == raw["signature"]
        else:
            assert obj in payloads


def test_text_output_is_deterministic():
    a = run("steenrod", "--prop63", "--compare")[1]
    b = run("steenrod", "--prop63", "--compare")[1]
    assert a == b


def test_fixture_search_path(tmp_path, monkeypatch):
    data = load_table("paper-verbatim-p3").sign_flipped().to_fixture()
    data["name"] = "my-table"
    (tmp_path / "my-table.yaml").write_text(yaml.safe_dump(data))
    monkeypatch.setenv("CHARCLASS_FIXTURES", str(tmp_path))
    code, out, _ = run("steenrod", "--table", "my-table")
    assert code == 0 and "Q(u_-4) = 2*u_-4*p1*p2" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "charclass.cli", "primes", "--k", "6", "--bound", "20"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "13 17 19\n"
