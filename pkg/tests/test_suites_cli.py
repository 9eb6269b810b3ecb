import json
import subprocess
import sys

import jsonschema
import pytest

from lognori import cli, suites
from lognori.suites import SCHEMA_PATH, Caps, ConfigError, SuiteConfig, load_caps, run_suite

SCHEMA = json.loads(SCHEMA_PATH.read_text())
SMALL = Caps(random_tests=20)


def test_default_config():
    cfg = SuiteConfig()
    assert cfg.primes == {2, 3} and cfg.max_n == 2
    assert cfg.fields_for(3) == [3, 9]
    assert len(list(cfg.grid())) == 12


@pytest.mark.parametrize(
    "kwargs",
    [
        {"primes": frozenset()},
        {"primes": frozenset({4})},
        {"max_n": -1},
        {"field_sizes": frozenset({25})},
        {"field_sizes": frozenset({6})},
        {"caps": Caps(random_tests=0)},
        {"output": "xml"},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        SuiteConfig(**kwargs)


def test_torsor_suite_defaults():
    rep = run_suite(SuiteConfig(), "torsor-selfproduct")
    assert [r.key for r in rep.records] == [("torsor", 2, 1), ("torsor", 2, 2), ("torsor", 3, 1), ("torsor", 3, 2)]
    assert rep.counts() == {"pass": 4, "fail": 0, "unknown": 0}


def test_surjectivity_suite_p2():
    rep = run_suite(SuiteConfig(primes=frozenset({2}), max_n=1), "kummer-surjectivity")
    assert all(r.status == "pass" for r in rep.records)
    assert rep.records[0].outputs["obstructing"] == 3


@pytest.mark.parametrize("name", sorted(suites.SUITES))
def test_every_suite_passes_and_validates(name):
    cfg = SuiteConfig(caps=SMALL)
    rep = run_suite(cfg, name)
    doc = json.loads(rep.to_json())
    jsonschema.validate(doc, SCHEMA)
    assert rep.exit_code == 0, rep.to_text()
    assert all(r.paper_anchor for r in rep.records)


@pytest.mark.parametrize("name", ["monoid-properties", "chart-lemmas", "cohomology-fixedpoints"])
def test_json_is_deterministic(name):
    cfg = SuiteConfig(caps=SMALL, seed=11)
    assert run_suite(cfg, name).to_json() == run_suite(cfg, name).to_json()


def _fake_suite(cfg):
    def ok():
        return "pass", {}

    def boom():
        raise ZeroDivisionError("broken case")

    def capped():
        raise suites.ResourceCapError("search", 1)

    return [(("c", 2), "plumbing", {}, boom), (("c", 1), "plumbing", {}, ok), (("c", 3), "plumbing", {}, capped), (("c", 4), "plumbing", {}, ok)]


def test_failing_case_is_isolated(monkeypatch):
    monkeypatch.setitem(suites.SUITES, "torsor-selfproduct", _fake_suite)
    rep = run_suite(SuiteConfig(), "torsor-selfproduct")
    assert [r.status for r in rep.records] == ["pass", "fail", "unknown", "pass"]
    assert "ZeroDivisionError" in rep.records[1].outputs["error"]
    assert rep.exit_code == 1


def test_unknown_is_configurable(monkeypatch):
    def only_capped(cfg):
        return [c for c in _fake_suite(cfg) if c[0] != ("c", 2)]

    monkeypatch.setitem(suites.SUITES, "torsor-selfproduct", only_capped)
    assert run_suite(SuiteConfig(), "torsor-selfproduct").exit_code == 0
    assert run_suite(SuiteConfig(unknown_fatal=True), "torsor-selfproduct").exit_code == 3


def test_unknown_suite_name():
    with pytest.raises(ConfigError):
        run_suite(SuiteConfig(), "nope")


def test_caps_file(tmp_path):
    f = tmp_path / "caps.json"
    f.write_text('{"random_tests": 7}')
    assert load_caps(f).random_tests == 7
    f.write_text('{"bogus": 1}')
    with pytest.raises(ConfigError):
        load_caps(f)
    f.write_text("[1]")
    with pytest.raises(ConfigError):
        load_caps(f)


class TestCli:
    def test_pass_and_json_file(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert cli.main(["torsor-selfproduct", "--p", "2", "--max-n", "1", "--json", str(out)]) == 0
        doc = json.loads(out.read_text())
        jsonschema.validate(doc, SCHEMA)
        assert doc["summary"] == {"pass": 1, "fail": 0, "unknown": 0}
        assert "torsor" in capsys.readouterr().out

    def test_json_to_stdout(self, capsys):
        assert cli.main(["kummer-surjectivity", "--p", "2,3", "--max-n", "1", "--json", "-"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["suite"] == "kummer-surjectivity" and len(doc["records"]) == 2

    def test_config_errors_exit_2(self, tmp_path, capsys):
        assert cli.main(["torsor-selfproduct", "--p", ""]) == 2
        assert cli.main(["hom-tables", "--p", "2", "--q", "9"]) == 2
        bad = tmp_path / "caps.json"
        bad.write_text("{not json")
        assert cli.main(["hom-tables", "--caps", str(bad)]) == 2
        with pytest.raises(SystemExit) as e:
            cli.main(["no-such-suite"])
        assert e.value.code == 2

    def test_unknown_fatal_exit_3(self, tmp_path):
        caps = tmp_path / "caps.json"
        caps.write_text('{"hom_search": 3}')
        args = ["hom-tables", "--p", "3", "--q", "9", "--caps", str(caps), "--quiet"]
        assert cli.main(args) == 0
        assert cli.main(args + ["--unknown-fatal"]) == 3

    def test_failure_exit_1(self, monkeypatch):
        monkeypatch.setitem(suites.SUITES, "torsor-selfproduct", _fake_suite)
        assert cli.main(["torsor-selfproduct", "--quiet"]) == 1

    def test_console_script_module(self):
        proc = subprocess.run([sys.executable, "-m", "lognori.cli", "torsor-selfproduct", "--p", "3", "--max-n", "1", "--quiet"], capture_output=True)
        assert proc.returncode == 0
