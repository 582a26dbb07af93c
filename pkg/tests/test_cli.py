"""Command-line interface: exit codes, report files, determinism."""

import json

import pytest

from campedelli import cli


@pytest.fixture(scope="module")
def report_path(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "report.json"
    code = cli.main(["verify", "--family", "A", "--prime", "19",
                     "--seed", "0", "--out", str(out), "--quiet"])
    assert code == 0
    return out


def test_verify_writes_a_passing_report(report_path):
    doc = json.loads(report_path.read_text())
    assert doc["schema_version"] == 1
    assert doc["all_passed"] is True
    rep = doc["families"][0]
    assert rep["family"] == "A"
    bican = next(c for c in rep["checks"]
                 if c["name"] == "bicanonical_base_locus")
    assert bican["base_points"] == 2
    moduli = next(c for c in rep["checks"] if c["name"] == "moduli")
    assert moduli["moduli"] == 6


def test_report_is_byte_deterministic(report_path):
    first = report_path.read_bytes()
    out2 = report_path.with_name("again.json")
    code = cli.main(["verify", "--family", "A", "--prime", "19",
                     "--seed", "0", "--out", str(out2), "--quiet"])
    assert code == 0
    assert out2.read_bytes() == first


def test_bad_prime_exits_2(capsys):
    assert cli.main(["verify", "--prime", "17"]) == 2
    assert "17" in capsys.readouterr().err


def test_nonprime_exits_2():
    assert cli.main(["verify", "--prime", "28"]) == 2


def test_bad_degree_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["decompose", "--family", "A", "--degree", "5"])
    assert exc.value.code == 2


def test_decompose_degree_three_prints_the_invariants(capsys):
    assert cli.main(["decompose", "--family", "A", "--degree", "3"]) == 0
    out = capsys.readouterr().out
    assert "Z9:0  dim 8" in out
    assert "invariant basis:" in out


def test_decompose_degree_one_is_multiplicity_free(capsys):
    assert cli.main(["decompose", "--family", "B1", "--degree", "1"]) == 0
    out = capsys.readouterr().out
    assert out.count("dim 1") == 8
    assert "(0,0)  dim 0" in out


def test_config_validation():
    cfg = cli.RunConfig(families=("A",), primes=(19, 37))
    cfg.validate()
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(families=()).validate()
    with pytest.raises(cli.ConfigError):
        cli.RunConfig(primes=(18,)).validate()
